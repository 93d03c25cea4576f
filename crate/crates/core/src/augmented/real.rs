//! Exact arithmetic over one unknown real.
//!
//! A real bias `r = delta4(prefix) + 4^-B * u` has its tail value `u` in
//! [1/3, 1], the range of base-4 encodings of infinite words. Every
//! activation is kept as `c + k * u`; linear maps keep that form exactly and
//! the sigmoid keeps it whenever the whole range of `u` lands in one linear
//! piece. Otherwise the `B` digits read so far cannot settle the step.

use num_traits::{One, Zero};

use crate::activation::{sigma, theta};
use crate::encodings::{delta4, inv_pow, rat, BitStream, Rational};
use crate::error::{Error, Result};
use crate::rnn::engine::Arith;

#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub constant: Rational,
    pub coeff: Rational,
}

impl Affine {
    pub fn constant(c: Rational) -> Self {
        Affine {
            constant: c,
            coeff: Rational::zero(),
        }
    }
}

/// Arithmetic with the bias known to `digits` base-4 digits.
#[derive(Clone, Debug)]
pub struct RealBias {
    pub digits: usize,
}

impl RealBias {
    pub fn new(digits: usize) -> Self {
        RealBias { digits }
    }

    /// The bias `delta4(r)` with the first `digits` symbols of `r` read.
    pub fn bias(&self, r: &BitStream) -> Affine {
        Affine {
            constant: delta4(&r.prefix(self.digits)),
            coeff: inv_pow(4, self.digits),
        }
    }

    fn range(v: &Affine) -> (Rational, Rational) {
        let a = &v.constant + &v.coeff * rat(1, 3);
        let b = &v.constant + &v.coeff;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn unsettled(&self) -> Error {
        Error::PrecisionExhausted {
            digits: self.digits,
        }
    }
}

impl Arith for RealBias {
    type V = Affine;

    fn lift(&self, q: &Rational) -> Affine {
        Affine::constant(q.clone())
    }

    fn is_zero(&self, v: &Affine) -> bool {
        v.constant.is_zero() && v.coeff.is_zero()
    }

    fn axpy(&self, acc: &mut Affine, w: &Rational, x: &Affine) {
        acc.constant += w * &x.constant;
        if !x.coeff.is_zero() {
            acc.coeff += w * &x.coeff;
        }
    }

    fn add(&self, acc: &mut Affine, x: &Affine) {
        acc.constant += &x.constant;
        acc.coeff += &x.coeff;
    }

    fn activate(&mut self, v: Affine) -> Result<Affine> {
        if v.coeff.is_zero() {
            return Ok(Affine::constant(sigma(v.constant)));
        }
        let (lo, hi) = Self::range(&v);
        if hi <= Rational::zero() {
            Ok(Affine::constant(Rational::zero()))
        } else if lo >= Rational::one() {
            Ok(Affine::constant(Rational::one()))
        } else if lo >= Rational::zero() && hi <= Rational::one() {
            Ok(v)
        } else {
            Err(self.unsettled())
        }
    }

    fn threshold(&mut self, v: &Affine) -> Result<bool> {
        if v.coeff.is_zero() {
            return theta(&v.constant);
        }
        let (lo, hi) = Self::range(v);
        if hi <= Rational::zero() {
            Ok(false)
        } else if lo >= Rational::one() {
            Ok(true)
        } else if lo > Rational::zero() && hi < Rational::one() {
            Err(Error::UndefinedThreshold {
                value: format!("[{lo}, {hi}]"),
            })
        } else {
            Err(self.unsettled())
        }
    }
}
