//! Stochastic networks: one extra input line that is 1 with probability `p`
//! at every step, independently. A run must decide at the same time `tau`
//! whatever the line does; acceptance follows the 2/3 rule.

use num_traits::{One, Zero};
use rand::Rng;

use super::SnnSpec;
use crate::encodings::{BitStream, BitWord, Rational};
use crate::error::{Error, Result};
use crate::machines::tm::{bpp_decide, McEstimate};
use crate::rnn::engine::{Exact, Extra, Prepared};
use crate::rnn::Decision;
use crate::seeding::trial_rng;

/// Positions of `p` compared before a sample is declared 0. The chance of
/// reaching the cap is `2^-DRAW_CAP`.
const DRAW_CAP: usize = 4096;

/// One Bernoulli draw with success probability `sum p_i 2^-(i+1)`, reading
/// fair bits until the first position where they differ from `p`.
pub fn bernoulli(p: &BitStream, rng: &mut impl Rng) -> bool {
    for i in 0..DRAW_CAP {
        let b: bool = rng.gen();
        let pi = p.bit(i);
        if b != pi {
            return pi;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnnMode {
    /// Enumerate every stochastic pattern of positive probability; fails once
    /// more than `budget` patterns are needed.
    Exact {
        budget: u64,
    },
    MonteCarlo {
        trials: u64,
        seed: u64,
    },
}

/// Acceptance probability of a stochastic run, exact or estimated.
#[derive(Clone, Debug, PartialEq)]
pub struct SnnOutcome {
    pub tau: u64,
    /// Present in exact mode.
    pub accept: Option<Rational>,
    pub estimate: f64,
    pub ci: (f64, f64),
    /// Patterns enumerated or trials drawn.
    pub samples: u64,
    /// Accept or reject at `tau` under the 2/3 rule.
    pub decision: Decision,
}

fn input(w: &BitWord, t: u64) -> (bool, bool) {
    if (t as usize) < w.len() {
        (w.bit(t as usize), true)
    } else {
        (false, false)
    }
}

/// Output after `tau` steps on one stochastic pattern, or an error if the
/// pattern decides at another time.
fn verdict(t: u64, y: (bool, bool), tau: u64) -> Result<Option<bool>> {
    match (y.1, t == tau) {
        (true, true) => Ok(Some(y.0)),
        (false, false) if !y.0 => Ok(None),
        (false, false) => Err(Error::ProtocolViolation { step: t }),
        (true, false) => Err(Error::Invalid(format!(
            "stochastic run decided at {t}, not at the fixed time {tau}"
        ))),
        (false, true) => Err(Error::Invalid(format!(
            "stochastic run undecided at its fixed time {tau}"
        ))),
    }
}

fn exact_accept(spec: &SnnSpec, w: &BitWord, tau: u64, budget: u64) -> Result<(Rational, u64)> {
    let p = spec.prob_stream.exact_binary().ok_or_else(|| {
        Error::Invalid(format!(
            "exact enumeration needs an eventually periodic probability, got {}",
            spec.prob_stream
        ))
    })?;
    let q = Rational::one() - &p;
    let net = Prepared::new(&spec.base, Some(&spec.x2));
    let mut accept = Rational::zero();
    let mut leaves = 0u64;
    let mut todo = vec![(net.initial(&Exact), 0u64, Rational::one())];
    while let Some((h, t, weight)) = todo.pop() {
        let (x0, x1) = input(w, t);
        for (bit, pr) in [(false, &q), (true, &p)] {
            if pr.is_zero() {
                continue;
            }
            let (next, y) = net.step(
                &mut Exact,
                &h,
                x0,
                x1,
                &Extra {
                    bias0: None,
                    x2: bit,
                },
            )?;
            let weight = &weight * pr;
            match verdict(t + 1, y, tau)? {
                Some(acc) => {
                    leaves += 1;
                    if leaves > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    if acc {
                        accept += weight;
                    }
                }
                None => todo.push((next, t + 1, weight)),
            }
        }
    }
    Ok((accept, leaves))
}

fn sampled_run(
    net: &Prepared,
    spec: &SnnSpec,
    w: &BitWord,
    tau: u64,
    rng: &mut impl Rng,
) -> Result<bool> {
    let mut h = net.initial(&Exact);
    for t in 0..tau {
        let (x0, x1) = input(w, t);
        let x2 = bernoulli(&spec.prob_stream, rng);
        let (next, y) = net.step(&mut Exact, &h, x0, x1, &Extra { bias0: None, x2 })?;
        h = next;
        if let Some(acc) = verdict(t + 1, y, tau)? {
            return Ok(acc);
        }
    }
    Err(Error::Invalid("fixed time must be at least 1".into()))
}

/// Acceptance probability over all stochastic patterns of a run that decides
/// at time `tau`, and the resulting decision.
pub fn snn_run(spec: &SnnSpec, w: &BitWord, tau: u64, mode: SnnMode) -> Result<SnnOutcome> {
    if tau == 0 {
        return Err(Error::Invalid("fixed time must be at least 1".into()));
    }
    match mode {
        SnnMode::Exact { budget } => {
            let (accept, leaves) = exact_accept(spec, w, tau, budget)?;
            let reject = Rational::one() - &accept;
            let yes = bpp_decide(&accept, &reject)?;
            let estimate = rational_f64(&accept);
            Ok(SnnOutcome {
                tau,
                accept: Some(accept),
                estimate,
                ci: (estimate, estimate),
                samples: leaves,
                decision: if yes {
                    Decision::Accept(tau)
                } else {
                    Decision::Reject(tau)
                },
            })
        }
        SnnMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::Invalid("at least one trial required".into()));
            }
            let net = Prepared::new(&spec.base, Some(&spec.x2));
            let mut accepts = 0;
            for i in 0..trials {
                if sampled_run(&net, spec, w, tau, &mut trial_rng(seed, i))? {
                    accepts += 1;
                }
            }
            let est = McEstimate::from_counts(trials, accepts, 0);
            let decision = if est.estimate >= 2.0 / 3.0 {
                Decision::Accept(tau)
            } else if est.estimate <= 1.0 / 3.0 {
                Decision::Reject(tau)
            } else {
                return Err(Error::BppViolation {
                    probability: format!("{:.4}", est.estimate),
                });
            };
            Ok(SnnOutcome {
                tau,
                accept: None,
                estimate: est.estimate,
                ci: est.ci,
                samples: trials,
                decision,
            })
        }
    }
}

pub(crate) fn rational_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::demo;
    use crate::encodings::rat;

    #[test]
    fn bernoulli_frequency_matches_binary_value() {
        let p = BitStream::periodic(BitWord::new(), BitWord::from("10"));
        let mut rng = trial_rng(9, 0);
        let n = 20_000;
        let ones = (0..n).filter(|_| bernoulli(&p, &mut rng)).count() as f64 / n as f64;
        let sigma = (2.0f64 / 9.0 / n as f64).sqrt();
        assert!((ones - 2.0 / 3.0).abs() < 4.0 * sigma, "{ones}");
        assert!(bernoulli(&BitStream::constant(true), &mut rng));
        assert!(!bernoulli(&BitStream::constant(false), &mut rng));
    }

    #[test]
    fn certain_line_gives_a_single_pattern() {
        let s = demo::first_x2(BitStream::constant(true));
        let out = snn_run(
            &s,
            &BitWord::new(),
            demo::FIRST_X2_TAU,
            SnnMode::Exact { budget: 10 },
        )
        .unwrap();
        assert_eq!(
            (out.accept, out.samples, out.decision),
            (Some(rat(1, 1)), 1, Decision::Accept(1))
        );
    }

    #[test]
    fn fair_first_bit_violates_the_two_thirds_rule() {
        let s = demo::first_x2(BitStream::word(BitWord::from("1")));
        let err = snn_run(
            &s,
            &BitWord::new(),
            demo::FIRST_X2_TAU,
            SnnMode::Exact { budget: 10 },
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::BppViolation {
                probability: "1/2".into()
            }
        );
    }

    #[test]
    fn majority_of_three_at_three_quarters() {
        let s = demo::majority3(BitStream::word(BitWord::from("11")));
        let out = snn_run(
            &s,
            &BitWord::from("01"),
            demo::MAJORITY3_TAU,
            SnnMode::Exact { budget: 64 },
        )
        .unwrap();
        assert_eq!(out.accept, Some(rat(27, 32)));
        assert_eq!(out.decision, Decision::Accept(5));
        assert!(out.samples <= 32);
        let mc = snn_run(
            &s,
            &BitWord::new(),
            demo::MAJORITY3_TAU,
            SnnMode::MonteCarlo {
                trials: 4000,
                seed: 3,
            },
        )
        .unwrap();
        assert!((mc.estimate - 27.0 / 32.0).abs() < 0.03, "{}", mc.estimate);
        assert_eq!(mc.decision, Decision::Accept(5));
    }

    #[test]
    fn wrong_fixed_time_and_budget_are_reported() {
        let s = demo::majority3(BitStream::word(BitWord::from("11")));
        assert!(matches!(
            snn_run(&s, &BitWord::new(), 4, SnnMode::Exact { budget: 64 }),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            snn_run(&s, &BitWord::new(), 6, SnnMode::Exact { budget: 64 }),
            Err(Error::Invalid(_))
        ));
        assert_eq!(
            snn_run(&s, &BitWord::new(), 5, SnnMode::Exact { budget: 4 }).unwrap_err(),
            Error::BudgetExceeded { budget: 4 }
        );
        let irrational = demo::majority3(BitStream::thue_morse());
        assert!(snn_run(
            &irrational,
            &BitWord::new(),
            5,
            SnnMode::Exact { budget: 64 }
        )
        .is_err());
    }
}
