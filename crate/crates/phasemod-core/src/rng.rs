//! Deterministic, splittable random streams.
//!
//! A [`RandomStream`] is identified by a `(seed, stream_index)` pair: equal
//! pairs replay the identical draw sequence, distinct indices behave as
//! statistically independent streams. Substreams are derived by a
//! splitmix-style avalanche over the pair, so trial `k` of a simulation can be
//! generated on any thread (or re-generated in isolation) and still produce
//! the same numbers. The generator behind a stream is xoshiro256++.

use crate::math;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 step: advances `state` and returns the avalanched output.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A single-owner sequential random stream.
///
/// Streams must not be shared across tasks; derive one substream per task
/// with [`derive_substream`] instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    seed: u64,
    stream_index: u64,
    state: [u64; 4],
}

/// Derive the substream `(seed, index)`.
///
/// Deterministic: identical inputs produce identical streams. The pair is
/// folded through two rounds of splitmix64 before seeding the generator
/// state, so neighbouring indices land in unrelated regions of the state
/// space.
pub fn derive_substream(seed: u64, index: u64) -> RandomStream {
    let mut key = seed ^ {
        let mut ix = index.wrapping_add(GAMMA);
        splitmix64(&mut ix)
    };
    let mut state = [
        splitmix64(&mut key),
        splitmix64(&mut key),
        splitmix64(&mut key),
        splitmix64(&mut key),
    ];
    if state == [0, 0, 0, 0] {
        state[0] = GAMMA;
    }
    RandomStream {
        seed,
        stream_index: index,
        state,
    }
}

impl RandomStream {
    /// Stream 0 for `seed`.
    pub fn new(seed: u64) -> Self {
        derive_substream(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Next raw 64-bit output (xoshiro256++).
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in the open interval `(0, 1)`.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Standard normal draw via the Box-Muller transform (exact, two uniforms per
/// variate).
pub fn standard_normal(stream: &mut RandomStream) -> f64 {
    let u1 = stream.next_open01();
    let u2 = stream.next_f64();
    math::sqrt(-2.0 * math::log(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
}
