//! Bit-stable serialization: 17-significant-digit floats, a small JSON
//! writer with fixed key order, and a CSV reader for round-trip checks.

/// Serialize a finite double with 17 significant digits (exact binary64
/// round-trip). Non-finite values become the empty sentinel.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// JSON value with deterministic serialization.
pub enum Json {
    Number(f64),
    Integer(u64),
    Str(String),
    Object(Vec<(&'static str, Json)>),
}

impl Json {
    /// Non-finite numbers have no JSON representation; emit them as the
    /// strings "inf" / "-inf" (mirrors the "limit0" marker convention).
    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Number(x) if x.is_finite() => out.push_str(&fmt17(*x)),
            Json::Number(x) if *x == f64::INFINITY => out.push_str("\"inf\""),
            Json::Number(x) if *x == f64::NEG_INFINITY => out.push_str("\"-inf\""),
            Json::Number(_) => out.push_str("null"),
            Json::Integer(n) => out.push_str(&n.to_string()),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Object(fields) => {
                out.push_str("{\n");
                let pad = "  ".repeat(indent + 1);
                for (i, (key, value)) in fields.iter().enumerate() {
                    out.push_str(&pad);
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.write(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }

}

impl std::fmt::Display for Json {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        self.write(&mut out, 0);
        f.write_str(&out)
    }
}

/// Parsed CSV document: header fields plus rows of optional numbers
/// (`None` marks the empty +∞/undefined sentinel). `#` lines are comments.
pub struct CsvDoc {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// Parse a CSV document produced by this crate.
pub fn parse_csv(text: &str) -> Result<CsvDoc, String> {
    let mut comments = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            comments.push(comment.trim().to_string());
            continue;
        }
        match &header {
            None => header = Some(line.split(',').map(str::to_string).collect()),
            Some(h) => {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != h.len() {
                    return Err(format!(
                        "row has {} fields, header has {}",
                        fields.len(),
                        h.len()
                    ));
                }
                let mut row = Vec::with_capacity(fields.len());
                for f in fields {
                    if f.is_empty() {
                        row.push(None);
                    } else {
                        row.push(Some(f.parse().map_err(|_| format!("bad number `{f}`"))?));
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(CsvDoc {
        comments,
        header: header.ok_or("missing header")?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_round_trips() {
        for x in [
            0.75,
            std::f64::consts::PI,
            1.0104492672326733,
            -3.0882773047417404e-7,
            0.0,
            1e300,
        ] {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
        assert_eq!(fmt17(f64::INFINITY), "");
        assert_eq!(fmt17(f64::NAN), "");
    }

    #[test]
    fn json_object_stable_order() {
        let doc = Json::Object(vec![
            ("b", Json::Integer(2)),
            ("a", Json::Number(0.5)),
            ("inf", Json::Number(f64::INFINITY)),
        ]);
        let text = doc.to_string();
        let b_pos = text.find("\"b\"").unwrap();
        let a_pos = text.find("\"a\"").unwrap();
        assert!(b_pos < a_pos, "insertion order preserved");
        assert!(text.contains("\"inf\": \"inf\""));
    }

    #[test]
    fn csv_round_trip() {
        let text = "# dist=x\nomega,asv\n5.0000000000000000e-1,1.0104492672326733e0\n1.0e0,\n";
        let doc = parse_csv(text).unwrap();
        assert_eq!(doc.header, vec!["omega", "asv"]);
        assert_eq!(doc.rows[0][1], Some(1.0104492672326733));
        assert_eq!(doc.rows[1][1], None);
        assert_eq!(doc.comments, vec!["dist=x"]);
    }
}
