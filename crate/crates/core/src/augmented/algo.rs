//! The four cross-simulations between augmented networks and advice
//! machines, each with an instrumented variant that measures its error
//! sources.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::snn::{bernoulli, rational_f64};
use super::truncation::{truncate, truncate_run, Target, Truncated, TruncationPolicy};
use super::{AnnSpec, EnnSpec, SnnSpec};
use crate::encodings::{binary_digits, binary_value, delta4, rat, BitStream, BitWord, Rational};
use crate::error::{Error, Result};
use crate::machines::tm::{run_with, AdviceTape, TmSpec};
use crate::nonuniform::bounds::{ceil_log2, BoundFunction};
use crate::rnn::engine::{Arith, Exact, Extra, Prepared};
use crate::rnn::Decision;
use crate::seeding::trial_rng;

fn precision(c: u32, steps: usize) -> Result<TruncationPolicy> {
    let q = u32::try_from(c as usize * steps)
        .map_err(|_| Error::Invalid("precision overflows".into()))?;
    TruncationPolicy::new(q.max(1))
}

/// Runs the network truncated to `c * f(n)` bits for `f(n)` steps with the
/// rational bias `delta4` of the first `c * f(n)` bias symbols.
pub fn algo1_tma_simulate_ann(
    a: &AnnSpec,
    f: &BoundFunction,
    c: u32,
    w: &BitWord,
) -> Result<Decision> {
    let steps = f.eval(w.len());
    let advice = a.bias_stream.prefix(c as usize * steps);
    let mut cfg = a.base.clone();
    if cfg.k > 0 {
        cfg.w_in[0][2] = delta4(&advice);
    }
    truncate_run(Target::Rnn(&cfg), precision(c, steps)?, w, steps as u64)
}

/// Runs the network truncated to `c * f(n)` bits for `f(n)` steps, feeding
/// the queried evolving-bias prefix one bit per step.
pub fn algo2_tma_simulate_enn(
    e: &EnnSpec,
    f: &BoundFunction,
    c: u32,
    w: &BitWord,
) -> Result<Decision> {
    let steps = f.eval(w.len());
    let advice = e.evolving_bias.prefix(c as usize * steps);
    let queried = EnnSpec {
        base: e.base.clone(),
        evolving_bias: BitStream::word(advice),
    };
    truncate_run(Target::Enn(&queried), precision(c, steps)?, w, steps as u64)
}

/// Advice length for per-step bias error at most `1 / (5 f(n))`.
pub fn algo3_prefix_len(f_n: usize) -> usize {
    ceil_log2(5 * f_n)
}

fn lex_less(b: &BitWord, p: &BitWord) -> bool {
    b.iter()
        .zip(p.iter())
        .find(|(x, y)| x != y)
        .is_some_and(|(x, _)| !x)
}

/// Whether `b` followed by fresh fair bits is lexicographically below `p`.
/// Ties beyond a long cap count as not below.
pub fn lex_less_than_stream(b: &BitWord, p: &BitStream, rng: &mut impl Rng) -> bool {
    for (i, x) in b.iter().enumerate() {
        if x != p.bit(i) {
            return !x;
        }
    }
    let tail = BitStream::custom("shifted", {
        let p = p.clone();
        let off = b.len();
        move |i| p.bit(i + off)
    });
    bernoulli(&tail, rng)
}

fn fair_word(rng: &mut impl Rng, len: usize) -> BitWord {
    (0..len).map(|_| rng.gen::<bool>()).collect()
}

fn snn_run_coins<A: Arith<V = Rational>>(
    net: &Prepared,
    arith: &mut A,
    w: &BitWord,
    coins: &BitWord,
) -> Result<Decision> {
    net.run(
        arith,
        w,
        coins.len() as u64,
        |t| {
            Ok(Extra {
                bias0: None,
                x2: coins.bit(t as usize),
            })
        },
        |_, _, _| {},
    )
}

fn truncated_snn(s: &SnnSpec, q: u32) -> Prepared {
    Prepared::mapped(&s.base, Some(&s.x2), |x| truncate(x, q))
}

/// Decision of the truncated network driven by coins `c_t = [b <lex p_M]`
/// for fresh fair words `b` of length `algo3_prefix_len(f(n))`.
pub fn algo3_ptma_simulate_snn(
    s: &SnnSpec,
    f: &BoundFunction,
    c: u32,
    w: &BitWord,
    seed: u64,
) -> Result<Decision> {
    let steps = f.eval(w.len());
    let len = algo3_prefix_len(steps);
    let advice = s.prob_stream.prefix(len);
    let mut rng = trial_rng(seed, 0);
    let coins: BitWord = (0..steps)
        .map(|_| lex_less(&fair_word(&mut rng, len), &advice))
        .collect();
    let q = precision(c, steps)?.bits();
    snn_run_coins(&truncated_snn(s, q), &mut Truncated { q }, w, &coins)
}

/// One run of the advice machine together with the idealized device that
/// extends each fair word with fresh bits and compares against all of `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Algo3Trial {
    pub coins: BitWord,
    pub paired_coins: BitWord,
    pub diverged_steps: usize,
    /// Truncated network on `coins`.
    pub decision: Decision,
    /// Exact network on `paired_coins`.
    pub paired_decision: Decision,
}

pub fn algo3_paired_trial(
    s: &SnnSpec,
    f: &BoundFunction,
    c: u32,
    w: &BitWord,
    seed: u64,
    trial: u64,
) -> Result<Algo3Trial> {
    let steps = f.eval(w.len());
    let len = algo3_prefix_len(steps);
    let advice = s.prob_stream.prefix(len);
    let mut rng = trial_rng(seed, trial);
    let (mut coins, mut paired) = (BitWord::new(), BitWord::new());
    for _ in 0..steps {
        let b = fair_word(&mut rng, len);
        coins.push(lex_less(&b, &advice));
        paired.push(lex_less_than_stream(&b, &s.prob_stream, &mut rng));
    }
    let diverged_steps = coins
        .iter()
        .zip(paired.iter())
        .filter(|(x, y)| x != y)
        .count();
    let q = precision(c, steps)?.bits();
    let decision = snn_run_coins(&truncated_snn(s, q), &mut Truncated { q }, w, &coins)?;
    let paired_decision =
        snn_run_coins(&Prepared::new(&s.base, Some(&s.x2)), &mut Exact, w, &paired)?;
    Ok(Algo3Trial {
        coins,
        paired_coins: paired,
        diverged_steps,
        decision,
        paired_decision,
    })
}

/// Measured error sources of the advice-machine simulation of a stochastic
/// network, next to their bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Algo3Budget {
    pub trials: u64,
    pub steps: usize,
    pub prefix_len: usize,
    /// Fraction of coins equal to 1.
    pub coin_one_rate: f64,
    /// `binary(p_M)`, the exact probability of a coin being 1.
    pub coin_one_exact: f64,
    pub per_step_divergence: f64,
    pub per_step_bound: f64,
    pub per_step_sigma: f64,
    pub run_divergence: f64,
    pub run_bound: f64,
    pub run_sigma: f64,
    pub decision_disagreement: f64,
}

pub fn algo3_budget(
    s: &SnnSpec,
    f: &BoundFunction,
    c: u32,
    w: &BitWord,
    trials: u64,
    seed: u64,
) -> Result<Algo3Budget> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial required".into()));
    }
    let steps = f.eval(w.len());
    let prefix_len = algo3_prefix_len(steps);
    let (mut ones, mut diverged, mut runs, mut disagree) = (0usize, 0usize, 0u64, 0u64);
    let results: Vec<Algo3Trial> = (0..trials)
        .into_par_iter()
        .map(|i| algo3_paired_trial(s, f, c, w, seed, i))
        .collect::<Result<_>>()?;
    for t in results {
        ones += t.coins.count_ones();
        diverged += t.diverged_steps;
        runs += (t.diverged_steps > 0) as u64;
        disagree += (t.decision != t.paired_decision) as u64;
    }
    let draws = (trials as usize * steps).max(1) as f64;
    let per_step_bound = 1.0 / (5 * steps.max(1)) as f64;
    let run_bound = 0.2;
    Ok(Algo3Budget {
        trials,
        steps,
        prefix_len,
        coin_one_rate: ones as f64 / draws,
        coin_one_exact: rational_f64(&binary_value(&s.prob_stream.prefix(prefix_len))),
        per_step_divergence: diverged as f64 / draws,
        per_step_bound,
        per_step_sigma: (per_step_bound * (1.0 - per_step_bound) / draws).sqrt(),
        run_divergence: runs as f64 / trials as f64,
        run_bound,
        run_sigma: (run_bound * (1.0 - run_bound) / trials as f64).sqrt(),
        decision_disagreement: disagree as f64 / trials as f64,
    })
}

/// Probability `sum p_i 2^-(i+1)`: exact for eventually periodic streams,
/// otherwise from the first 64 bits.
fn probability(p: &BitStream) -> Rational {
    p.exact_binary()
        .unwrap_or_else(|| binary_value(&p.prefix(64)))
}

fn nondegenerate(p: &Rational) -> Result<()> {
    if p.is_zero() || p.is_one() {
        Err(Error::DegenerateProbability)
    } else {
        Ok(())
    }
}

/// `ceil(10 p (1 - p) f(n)^2)` samples for the advice estimate.
pub fn algo4_sample_count(p: &Rational, f_n: usize) -> u64 {
    let f = Rational::from_integer(BigInt::from(f_n));
    let k = (rat(10, 1) * p * (Rational::one() - p) * &f * &f)
        .ceil()
        .to_integer();
    k.to_u64().unwrap_or(u64::MAX)
}

/// Smallest `K` with `(p^2 + (1-p)^2)^K <= 1 / (16 f(n))`.
pub fn algo4_fair_coin_repeats(p: &Rational, f_n: usize) -> Result<u64> {
    nondegenerate(p)?;
    let same = p * p + (Rational::one() - p) * (Rational::one() - p);
    let target = Rational::new(BigInt::one(), BigInt::from(16 * f_n.max(1)));
    let (mut k, mut pow) = (0u64, Rational::one());
    while pow > target {
        pow *= &same;
        k += 1;
    }
    Ok(k)
}

/// One run of the stochastic-network simulation of an advice machine.
#[derive(Clone, Debug, PartialEq)]
pub struct Algo4Run {
    pub samples: u64,
    pub ones: u64,
    /// Advice reconstructed from the sample mean.
    pub estimate: BitWord,
    /// Advice the machine is defined with.
    pub advice: BitWord,
    pub advice_ok: bool,
    /// Whether the sample mean is within `1 / f(n)` of `p`.
    pub estimate_close: bool,
    pub coins: BitWord,
    /// Steps whose coin came from an unequal pair.
    pub fair_coins: usize,
    pub exhausted_steps: usize,
    pub decision: Decision,
}

/// Estimates the advice by sampling, extracts fair coins from the biased
/// line, and runs the machine on both for `f(n)` steps.
pub fn algo4_snn_simulate_ptma(
    m: &TmSpec,
    p: &BitStream,
    f: &BoundFunction,
    w: &BitWord,
    seed: u64,
    trial: u64,
) -> Result<Algo4Run> {
    let pv = probability(p);
    nondegenerate(&pv)?;
    let steps = f.eval(w.len());
    let len = ceil_log2(steps);
    let mut rng = trial_rng(seed, trial);

    let samples = algo4_sample_count(&pv, steps);
    let ones = (0..samples).filter(|_| bernoulli(p, &mut rng)).count() as u64;
    let mean = Rational::new(BigInt::from(ones), BigInt::from(samples.max(1)));
    let estimate = binary_digits(&mean, len);
    let advice = p.prefix(len);
    let estimate_close =
        (&mean - &pv).abs() <= Rational::new(BigInt::one(), BigInt::from(steps.max(1)));

    let repeats = algo4_fair_coin_repeats(&pv, steps)?;
    let (mut coins, mut fair_coins) = (BitWord::new(), 0);
    for _ in 0..steps {
        let mut coin = false;
        for _ in 0..repeats {
            let (b, b2) = (bernoulli(p, &mut rng), bernoulli(p, &mut rng));
            if b != b2 {
                coin = b;
                fair_coins += 1;
                break;
            }
        }
        coins.push(coin);
    }

    let tape = AdviceTape::Finite(estimate.clone());
    let decision = run_with(m, &tape, w, steps as u64, |t| coins.bit(t as usize))?;
    Ok(Algo4Run {
        samples,
        ones,
        advice_ok: estimate == advice,
        estimate,
        advice,
        estimate_close,
        exhausted_steps: steps - fair_coins,
        coins,
        fair_coins,
        decision,
    })
}

/// Exact probability that the reconstructed advice differs from the true
/// prefix, over the binomial sample count.
fn advice_failure_exact(p: &Rational, samples: u64, len: usize, advice: &BitWord) -> Rational {
    let q = Rational::one() - p;
    let mut fail = Rational::zero();
    let mut binom = BigInt::one();
    for j in 0..=samples {
        if j > 0 {
            binom = binom * (samples - j + 1) / j;
        }
        let mean = Rational::new(BigInt::from(j), BigInt::from(samples));
        if binary_digits(&mean, len) != *advice {
            let pj = (0..j).fold(Rational::one(), |a, _| a * p);
            let qj = (0..samples - j).fold(Rational::one(), |a, _| a * &q);
            fail += Rational::from_integer(binom.clone()) * pj * qj;
        }
    }
    fail
}

/// Measured error sources of the stochastic-network simulation of an advice
/// machine, next to their bounds and exact values.
#[derive(Clone, Debug, PartialEq)]
pub struct Algo4Budget {
    pub repetitions: u64,
    pub samples: u64,
    pub repeats: u64,
    pub advice_failure: f64,
    pub advice_failure_exact: f64,
    pub advice_bound: f64,
    /// Rate of `|p' - p| > 1 / f(n)`.
    pub estimate_far: f64,
    pub exhaustion: f64,
    pub exhaustion_exact: f64,
    pub exhaustion_bound: f64,
    pub fair_bit_mean: f64,
    pub fair_bits: u64,
    pub accept_rate: f64,
}

pub fn algo4_budget(
    m: &TmSpec,
    p: &BitStream,
    f: &BoundFunction,
    w: &BitWord,
    repetitions: u64,
    seed: u64,
) -> Result<Algo4Budget> {
    if repetitions == 0 {
        return Err(Error::Invalid("at least one repetition required".into()));
    }
    let pv = probability(p);
    nondegenerate(&pv)?;
    let steps = f.eval(w.len());
    let len = ceil_log2(steps);
    let samples = algo4_sample_count(&pv, steps);
    let repeats = algo4_fair_coin_repeats(&pv, steps)?;
    let (mut bad_advice, mut far, mut exhausted, mut accepts) = (0u64, 0u64, 0u64, 0u64);
    let (mut fair_ones, mut fair_bits) = (0u64, 0u64);
    let results: Vec<Algo4Run> = (0..repetitions)
        .into_par_iter()
        .map(|i| algo4_snn_simulate_ptma(m, p, f, w, seed, i))
        .collect::<Result<_>>()?;
    for run in results {
        bad_advice += !run.advice_ok as u64;
        far += !run.estimate_close as u64;
        exhausted += (run.exhausted_steps > 0) as u64;
        accepts += (run.decision.accepted() == Some(true)) as u64;
        fair_bits += run.fair_coins as u64;
        fair_ones += run.coins.count_ones() as u64;
    }
    let same = &pv * &pv + (Rational::one() - &pv) * (Rational::one() - &pv);
    let stuck = (0..repeats).fold(Rational::one(), |a, _| a * &same);
    let clean = (0..steps).fold(Rational::one(), |a, _| a * (Rational::one() - &stuck));
    let reps = repetitions as f64;
    Ok(Algo4Budget {
        repetitions,
        samples,
        repeats,
        advice_failure: bad_advice as f64 / reps,
        advice_failure_exact: rational_f64(&advice_failure_exact(
            &pv,
            samples,
            len,
            &p.prefix(len),
        )),
        advice_bound: 0.1,
        estimate_far: far as f64 / reps,
        exhaustion: exhausted as f64 / reps,
        exhaustion_exact: rational_f64(&(Rational::one() - clean)),
        exhaustion_bound: 1.0 / 16.0,
        fair_bit_mean: if fair_bits == 0 {
            0.5
        } else {
            fair_ones as f64 / fair_bits as f64
        },
        fair_bits,
        accept_rate: accepts as f64 / reps,
    })
}
