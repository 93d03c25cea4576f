//! Fixed-precision execution: every weight and every activation is cut to
//! `q` fractional bits, rounding toward zero.

use num_bigint::BigInt;
use num_traits::One;

use super::{ann_run, enn_run, AnnSpec, EnnSpec};
use crate::activation::{sigma, theta};
use crate::encodings::{delta4, inv_pow, rat, BitWord, Rational};
use crate::error::{Error, Result};
use crate::nonuniform::bounds::BoundFunction;
use crate::rnn::engine::{Arith, Exact, Extra, Prepared};
use crate::rnn::{run_word, Decision, RnnConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    q: u32,
}

impl TruncationPolicy {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid(
                "truncation needs at least one fractional bit".into(),
            ));
        }
        Ok(TruncationPolicy { q })
    }

    pub fn bits(&self) -> u32 {
        self.q
    }
}

/// `x` rounded toward zero to a multiple of `2^-q`.
pub fn truncate(x: &Rational, q: u32) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << q);
    (x * &scale).trunc() / scale
}

/// Exact values cut to `q` bits after each activation.
#[derive(Clone, Copy, Debug)]
pub struct Truncated {
    pub q: u32,
}

impl Arith for Truncated {
    type V = Rational;

    fn lift(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn is_zero(&self, v: &Rational) -> bool {
        Exact.is_zero(v)
    }
    fn axpy(&self, acc: &mut Rational, w: &Rational, x: &Rational) {
        *acc += w * x;
    }
    fn add(&self, acc: &mut Rational, x: &Rational) {
        *acc += x;
    }
    fn activate(&mut self, v: Rational) -> Result<Rational> {
        Ok(truncate(&sigma(v), self.q))
    }
    fn threshold(&mut self, v: &Rational) -> Result<bool> {
        theta(v)
    }
}

/// `delta4(r)` for an infinite `r`, truncated to `q` bits. Reads digits
/// until the truncation is determined.
pub fn truncated_delta4(r: &crate::encodings::BitStream, q: u32) -> Result<Rational> {
    if let Some(exact) = r.exact_delta4() {
        return Ok(truncate(&exact, q));
    }
    let mut digits = q as usize / 2 + 2;
    while digits <= 1 << 16 {
        let head = delta4(&r.prefix(digits));
        let tail = inv_pow(4, digits);
        let lo = truncate(&(&head + &tail * rat(1, 3)), q);
        let hi = truncate(&(&head + &tail), q);
        if lo == hi {
            return Ok(lo);
        }
        digits *= 2;
    }
    Err(Error::PrecisionExhausted { digits })
}

/// Which semantics a run uses.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Rnn(&'a RnnConfig),
    Ann(&'a AnnSpec),
    Enn(&'a EnnSpec),
}

impl Target<'_> {
    fn config(&self) -> &RnnConfig {
        match self {
            Target::Rnn(cfg) => cfg,
            Target::Ann(a) => &a.base,
            Target::Enn(e) => &e.base,
        }
    }
}

/// Untruncated run of `steps` steps under the target's own semantics.
pub fn exact_run(target: Target<'_>, w: &BitWord, steps: u64) -> Result<Decision> {
    match target {
        Target::Rnn(cfg) => run_word(cfg, w, steps),
        Target::Ann(a) => ann_run(a, w, steps),
        Target::Enn(e) => enn_run(e, w, steps),
    }
}

pub fn truncate_run(
    target: Target<'_>,
    policy: TruncationPolicy,
    w: &BitWord,
    steps: u64,
) -> Result<Decision> {
    let q = policy.q;
    let net = Prepared::mapped(target.config(), None, |x| truncate(x, q));
    let mut arith = Truncated { q };
    match target {
        Target::Rnn(_) => net.run(&mut arith, w, steps, |_| Ok(Extra::default()), |_, _, _| {}),
        Target::Ann(a) => {
            let bias = truncated_delta4(&a.bias_stream, q)?;
            net.run(
                &mut arith,
                w,
                steps,
                |_| {
                    Ok(Extra {
                        bias0: Some(bias.clone()),
                        x2: false,
                    })
                },
                |_, _, _| {},
            )
        }
        Target::Enn(e) => net.run(
            &mut arith,
            w,
            steps,
            |t| {
                Ok(Extra {
                    bias0: Some(int_bit(e.evolving_bias.bit(t as usize))),
                    x2: false,
                })
            },
            |_, _, _| {},
        ),
    }
}

pub(crate) fn int_bit(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::default()
    }
}

/// Smallest constant found for a network, with the word that ruled out the
/// next smaller one.
#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub c: u32,
    pub witness: Option<BitWord>,
}

/// Smallest `c >= 1` such that runs truncated to `c * f(n)` bits agree with
/// exact runs for `f(n)` steps on every corpus word.
pub fn calibrate_c(
    target: Target<'_>,
    corpus: &[BitWord],
    f: &BoundFunction,
    cap: u32,
) -> Result<Calibration> {
    let exact: Vec<Decision> = corpus
        .iter()
        .map(|w| exact_run(target, w, f.eval(w.len()) as u64))
        .collect::<Result<_>>()?;
    let mut witness = None;
    for c in 1..=cap {
        let failing = corpus.iter().zip(&exact).find(|(w, want)| {
            let steps = f.eval(w.len());
            let q = c as usize * steps;
            let got = u32::try_from(q)
                .ok()
                .and_then(|q| TruncationPolicy::new(q.max(1)).ok())
                .map(|policy| truncate_run(target, policy, w, steps as u64));
            !matches!(got, Some(Ok(d)) if d == **want)
        });
        match failing {
            None => return Ok(Calibration { c, witness }),
            Some((w, _)) => witness = Some(w.clone()),
        }
    }
    Err(Error::NoConvergence {
        cap,
        witness: witness.map(|w| w.to_string()).unwrap_or_default(),
    })
}
