//! The two nonlinearities of the network model.

use num_traits::{One, Zero};

use crate::encodings::Rational;
use crate::error::{Error, Result};

/// Saturated-linear sigmoid: 0 below 0, identity on [0,1], 1 above 1.
pub fn sigma(v: Rational) -> Rational {
    if v <= Rational::zero() {
        Rational::zero()
    } else if v >= Rational::one() {
        Rational::one()
    } else {
        v
    }
}

/// Hard threshold. Defined only off the open interval (0,1); 0 counts as below.
pub fn theta(v: &Rational) -> Result<bool> {
    if *v <= Rational::zero() {
        Ok(false)
    } else if *v >= Rational::one() {
        Ok(true)
    } else {
        Err(Error::UndefinedThreshold {
            value: v.to_string(),
        })
    }
}
