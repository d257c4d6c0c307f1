//! Thread-parallel campaign execution.
//!
//! Trials are partitioned into contiguous chunks, each worker filling its
//! slice of the estimate vector from per-trial substreams. The summary is
//! reduced from that vector with the simulator's fixed pairwise tree, so one
//! thread or sixteen produce the identical bit pattern.

use phasemod_core::simulator::{simulate_trial, summarize_estimates, CampaignSummary, SimConfig};
use phasemod_core::{Error, Result};

pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8)
}

pub fn run_campaign_parallel(config: &SimConfig, threads: usize) -> Result<CampaignSummary> {
    config.validate()?;
    if config.trials < 2 {
        return Err(Error::InvalidConfig(format!(
            "campaign needs at least 2 trials, got {}",
            config.trials
        )));
    }
    let trials = config.trials as usize;
    let threads = threads.clamp(1, trials);
    let chunk_size = trials.div_ceil(threads);
    let mut estimates = vec![0.0f64; trials];

    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::with_capacity(threads);
        for (idx, slice) in estimates.chunks_mut(chunk_size).enumerate() {
            let start = idx * chunk_size;
            handles.push(scope.spawn(move || -> Result<()> {
                for (offset, slot) in slice.iter_mut().enumerate() {
                    *slot = simulate_trial(config, (start + offset) as u64)?.theta_hat;
                }
                Ok(())
            }));
        }
        for handle in handles {
            handle.join().expect("campaign worker panicked")?;
        }
        Ok(())
    })?;

    summarize_estimates(config, &estimates)
}
