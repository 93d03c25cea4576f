//! Compressed prefixes: the interleaving codec and a finite-range checker
//! for time-bounded decompression.

use std::fmt;
use std::sync::Arc;

use super::bounds::BoundFunction;
use crate::encodings::{BitStream, BitWord};
use crate::error::{Error, Result};

type DecodeFn = dyn Fn(&BitWord, usize) -> (BitWord, u64) + Send + Sync;

/// Deterministic map from a compressed prefix and a length `n` to a word of
/// length `n`, together with the number of steps it took.
#[derive(Clone)]
pub struct Decompressor {
    pub name: String,
    run: Arc<DecodeFn>,
}

impl Decompressor {
    pub fn new(
        name: impl Into<String>,
        run: impl Fn(&BitWord, usize) -> (BitWord, u64) + Send + Sync + 'static,
    ) -> Self {
        Decompressor {
            name: name.into(),
            run: Arc::new(run),
        }
    }

    pub fn run(&self, beta: &BitWord, n: usize) -> (BitWord, u64) {
        (self.run)(beta, n)
    }

    /// Copies the first `n` bits; one step per bit.
    pub fn identity_prefix() -> Self {
        Self::new("identity-prefix", |beta, n| (beta.prefix(n), n as u64))
    }

    /// Builds the first `n` bits of the interleaving of `beta` under `g`,
    /// one step per bit read or written.
    pub fn interleaving(g: BoundFunction) -> Self {
        Self::new(format!("interleave({g})"), move |beta, n| {
            let read = g.eval(n).min(beta.len());
            let s = interleave_word(&beta.prefix(read), &g, n);
            (s.prefix(n), (read + n) as u64)
        })
    }
}

impl fmt::Debug for Decompressor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Decompressor({})", self.name)
    }
}

/// Outcome of checking decompression on every `n <= n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct KfgReport {
    pub n_max: usize,
    /// Decompressor calls made.
    pub checks: u64,
    /// Lengths with at least one failing `m`.
    pub exceptions: Vec<usize>,
    pub first_failure: Option<Error>,
    /// Every `n` in `holds_from..=n_max` passed; `n_max + 1` if `n_max` failed.
    pub holds_from: usize,
}

impl KfgReport {
    pub fn passed(&self) -> bool {
        self.exceptions.is_empty()
    }
}

/// For each `n <= n_max` and each `m` with `f(n) <= m <= n_max`, checks that
/// `d` maps `beta[0..m]` to `alpha[0..n]` within `g(n)` steps. Exceptions are
/// listed, never excused.
pub fn check_kfg(
    alpha: &BitStream,
    beta: &BitStream,
    d: &Decompressor,
    f: &BoundFunction,
    g: &BoundFunction,
    n_max: usize,
) -> KfgReport {
    let beta_prefix = beta.prefix(n_max);
    let mut report = KfgReport {
        n_max,
        checks: 0,
        exceptions: vec![],
        first_failure: None,
        holds_from: 0,
    };
    for n in 0..=n_max {
        let target = alpha.prefix(n);
        let bound = g.eval(n) as u64;
        let failure = (f.eval(n)..=n_max).find_map(|m| {
            report.checks += 1;
            let (out, steps) = d.run(&beta_prefix.prefix(m), n);
            if steps > bound {
                Some(Error::BoundViolation { n, bound })
            } else if out != target {
                Some(Error::Mismatch { n, m })
            } else {
                None
            }
        });
        if let Some(e) = failure {
            report.exceptions.push(n);
            report.holds_from = n + 1;
            report.first_failure.get_or_insert(e);
        }
    }
    report
}

/// Block `i` of `r` under `g`: `r[g(i-1)..g(i)]`, with `g(-1) = 0`.
fn block_bounds(g: &BoundFunction, i: usize) -> (usize, usize) {
    let lo = if i == 0 { 0 } else { g.eval(i - 1) };
    (lo, g.eval(i))
}

fn interleave_word(r: &BitWord, g: &BoundFunction, n: usize) -> BitWord {
    let mut s = BitWord::new();
    for i in 0..=n {
        let (lo, hi) = block_bounds(g, i);
        s.extend_from(&r.sub(lo, hi));
        if i < n {
            s.push(false);
        }
    }
    s
}

/// The first `g(n) + n` bits of `r_0 0 r_1 0 r_2 0 ...`, where block `r_i`
/// is `r[g(i-1)..g(i)]`. Requires `g` non-decreasing.
pub fn interleave(r: &BitStream, g: &BoundFunction, n: usize) -> BitWord {
    interleave_word(&r.prefix(g.eval(n)), g, n)
}

/// The whole interleaving as a stream. Separator `k` sits at `g(k) + k`, and
/// any other position `p` before it holds `r[p - k]`.
pub fn interleaved_stream(r: &BitStream, g: &BoundFunction) -> BitStream {
    let (r, g) = (r.clone(), g.clone());
    BitStream::custom(format!("interleave({r},{g})"), move |p| {
        let k = (0..=p)
            .find(|&k| g.eval(k) + k >= p)
            .expect("g(p) + p >= p");
        g.eval(k) + k != p && r.bit(p - k)
    })
}

/// `r[0..g(n)]` from an interleaving prefix of length at least `g(n) + n`,
/// after checking the `n` separators at positions `g(i) + i`, `i < n`.
pub fn recover_prefix(s_prefix: &BitWord, g: &BoundFunction, n: usize) -> Result<BitWord> {
    let need = g.eval(n) + n;
    if s_prefix.len() < need {
        return Err(Error::PreconditionViolated(format!(
            "interleaving prefix has {} bits, recovery at n = {n} needs {need}",
            s_prefix.len()
        )));
    }
    let mut r = BitWord::new();
    let mut start = 0;
    for i in 0..n {
        let sep = g.eval(i) + i;
        if s_prefix.bit(sep) {
            return Err(Error::MalformedInterleaving { position: sep });
        }
        r.extend_from(&s_prefix.sub(start, sep));
        start = sep + 1;
    }
    r.extend_from(&s_prefix.sub(start, need));
    Ok(r)
}
