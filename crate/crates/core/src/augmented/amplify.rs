//! Majority voting over independent repetitions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::encodings::Rational;
use crate::error::{Error, Result};
use crate::rnn::Decision;

/// Majority of `repeats` runs; run `i` gets trial index `i`. A timeout votes
/// reject. The decision time is the total time of all runs.
pub fn amplify_majority(
    mut runner: impl FnMut(u64) -> Result<Decision>,
    repeats: u64,
) -> Result<Decision> {
    if repeats % 2 == 0 {
        return Err(Error::Invalid(format!(
            "majority needs an odd number of repeats, got {repeats}"
        )));
    }
    let (mut yes, mut time) = (0u64, 0u64);
    for i in 0..repeats {
        let d = runner(i)?;
        if d.accepted() == Some(true) {
            yes += 1;
        }
        time += d.time().unwrap_or(0);
    }
    Ok(if 2 * yes > repeats {
        Decision::Accept(time)
    } else {
        Decision::Reject(time)
    })
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Probability that more than half of `repeats` independent runs, each
/// correct with probability `p`, are correct.
pub fn majority_probability(p: &Rational, repeats: u64) -> Rational {
    let q = Rational::one() - p;
    (repeats / 2 + 1..=repeats).fold(Rational::zero(), |acc, j| {
        acc + Rational::from_integer(binomial(repeats, j)) * pow(p, j) * pow(&q, repeats - j)
    })
}

fn pow(x: &Rational, e: u64) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// Smallest odd repeat count, at most `cap`, whose majority is correct with
/// probability at least `target`.
pub fn repeats_for(p: &Rational, target: &Rational, cap: u64) -> Result<u64> {
    if p * Rational::from_integer(2.into()) <= Rational::one() {
        return Err(Error::Invalid(format!(
            "majority voting cannot amplify success probability {p}"
        )));
    }
    (1..=cap)
        .step_by(2)
        .find(|&r| majority_probability(p, r) >= *target)
        .ok_or(Error::SearchExhausted { cap: cap as usize })
}
