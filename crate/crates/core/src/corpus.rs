//! Word corpora for paired oracle runs.

use rand::Rng;

use crate::encodings::BitWord;
use crate::error::{Error, Result};
use crate::seeding::trial_rng;

/// Every word of length at most `max_len`, shortest first.
pub fn exhaustive(max_len: usize) -> Vec<BitWord> {
    (0..=max_len).flat_map(BitWord::all_of_length).collect()
}

/// `count` words with lengths uniform in `0..=max_len`.
pub fn random(count: usize, max_len: usize, seed: u64) -> Vec<BitWord> {
    let mut rng = trial_rng(seed, 0);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_len);
            (0..n).map(|_| rng.gen::<bool>()).collect()
        })
        .collect()
}

/// One word per line; `-` denotes the empty word, `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<BitWord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "-" {
            out.push(BitWord::new());
        } else {
            out.push(
                line.parse()
                    .map_err(|e: Error| Error::parse(i + 1, e.to_string()))?,
            );
        }
    }
    Ok(out)
}

/// Corpus specifier: `exhaustive:<max_len>`, `random:<count>:<max_len>` or a file path.
pub fn resolve(spec: &str, seed: u64) -> Result<Vec<BitWord>> {
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Invalid(format!("bad corpus spec {spec:?}")))
    };
    if let Some(rest) = spec.strip_prefix("exhaustive:") {
        let n = num(rest)?;
        if n > 24 {
            return Err(Error::Invalid(
                "exhaustive corpus limited to length 24".into(),
            ));
        }
        return Ok(exhaustive(n));
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let (c, m) = rest
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("bad corpus spec {spec:?}")))?;
        return Ok(random(num(c)?, num(m)?, seed));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
    parse(&text)
}
