//! Small stochastic networks with known acceptance probabilities. All weights
//! are dyadic, so truncation to two or more bits leaves them unchanged.

use super::SnnSpec;
use crate::compiler::Builder;
use crate::encodings::{int, rat, BitStream, Rational};

pub const FIRST_X2_TAU: u64 = 1;
pub const MAJORITY3_TAU: u64 = 5;

fn finish(b: Builder, x2: Vec<(usize, Rational)>, p: BitStream) -> SnnSpec {
    let mut column = vec![Rational::default(); b.cfg.k];
    for (i, w) in x2 {
        column[i] = w;
    }
    SnnSpec {
        base: b.cfg,
        x2: column,
        prob_stream: p,
    }
}

/// Decides at time 1, accepting iff the first stochastic bit is 1.
pub fn first_x2(p: BitStream) -> SnnSpec {
    let mut b = Builder::new();
    let pulse = b.cell("pulse");
    let sample = b.cell("sample");
    let valid = b.cell("valid");
    b.cfg.h0[pulse] = int(1);
    b.w(sample, pulse, int(1));
    b.bias(sample, int(-1));
    b.copy(valid, pulse);
    b.cfg.add_out(0, sample, int(1));
    b.cfg.add_out(1, valid, int(1));
    finish(b, vec![(sample, int(1))], p)
}

/// Decides at time 5, accepting iff at least two of the first three
/// stochastic bits are 1.
pub fn majority3(p: BitStream) -> SnnSpec {
    let mut b = Builder::new();
    let pulse = b.cell("pulse");
    b.cfg.h0[pulse] = int(1);
    let mut delay = vec![pulse];
    for i in 1..=5 {
        let d = b.cell(format!("delay{i}"));
        b.copy(d, delay[i - 1]);
        delay.push(d);
    }
    // sample^{t+1} = x2^t for t < 3, else 0
    let sample = b.cell("sample");
    for &d in &delay[..3] {
        b.w(sample, d, int(1));
    }
    b.bias(sample, int(-1));
    let count = b.cell("count");
    b.w(count, count, int(1));
    b.w(count, sample, rat(1, 4));
    let majority = b.cell("majority");
    b.w(majority, count, int(4));
    b.w(majority, delay[4], int(1));
    b.bias(majority, int(-2));
    b.cfg.add_out(0, majority, int(1));
    b.cfg.add_out(1, delay[5], int(1));
    finish(b, vec![(sample, int(1))], p)
}
