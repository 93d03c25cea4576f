//! Length bound functions with their declared properties.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

type LenFn = dyn Fn(usize) -> usize + Send + Sync;

/// A function on lengths, tagged with whether it is polynomial-time computable
/// and whether it is non-decreasing.
#[derive(Clone)]
pub struct BoundFunction {
    name: String,
    f: Arc<LenFn>,
    pub poly_time: bool,
    pub monotone: bool,
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

impl BoundFunction {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        BoundFunction {
            name: name.into(),
            f: Arc::new(f),
            poly_time: true,
            monotone: true,
        }
    }

    pub fn with_tags(mut self, poly_time: bool, monotone: bool) -> Self {
        self.poly_time = poly_time;
        self.monotone = monotone;
        self
    }

    pub fn eval(&self, n: usize) -> usize {
        (self.f)(n)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn constant(c: usize) -> Self {
        Self::new(format!("const:{c}"), move |_| c)
    }

    pub fn identity() -> Self {
        Self::new("n", |n| n)
    }

    pub fn linear(a: usize, b: usize) -> Self {
        Self::new(format!("linear:{a}:{b}"), move |n| a * n + b)
    }

    pub fn log2() -> Self {
        Self::new("log2", ceil_log2)
    }

    pub fn log2_squared() -> Self {
        Self::new("log2sq", |n| ceil_log2(n).pow(2))
    }

    /// `min(ceil(sqrt n), n)`.
    pub fn sqrt_capped() -> Self {
        Self::new("sqrt", |n| ceil_sqrt(n).min(n))
    }

    pub fn power(d: u32) -> Self {
        Self::new(format!("poly:{d}"), move |n| n.saturating_pow(d))
    }

    /// `values[n]`, holding the last entry for larger `n`.
    pub fn table(name: impl Into<String>, values: Vec<usize>) -> Self {
        let monotone = values.windows(2).all(|w| w[0] <= w[1]);
        let last = values.last().copied().unwrap_or(0);
        Self::new(name, move |n| values.get(n).copied().unwrap_or(last)).with_tags(true, monotone)
    }

    pub fn scaled(&self, c: usize) -> Self {
        let f = self.f.clone();
        let mut out = Self::new(format!("scaled:{c}:{}", self.name), move |n| c * f(n));
        out.poly_time = self.poly_time;
        out.monotone = self.monotone;
        out
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &BoundFunction) -> Self {
        let (f, g) = (self.f.clone(), inner.f.clone());
        let mut out = Self::new(format!("{}({})", self.name, inner.name), move |n| f(g(n)));
        out.poly_time = self.poly_time && inner.poly_time;
        out.monotone = self.monotone && inner.monotone;
        out
    }

    /// First `n` in `lo..=hi` where the function decreases, if any.
    pub fn first_decrease(&self, lo: usize, hi: usize) -> Option<usize> {
        (lo + 1..=hi).find(|&n| self.eval(n) < self.eval(n - 1))
    }
}

impl fmt::Display for BoundFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for BoundFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundFunction({})", self.name)
    }
}

/// Names: `n`, `log2`, `log2sq`, `sqrt`, `const:<c>`, `linear:<a>:<b>`,
/// `poly:<d>`, `scaled:<c>:<name>`.
impl FromStr for BoundFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("unknown bound function {s:?}"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match s {
            "n" => return Ok(Self::identity()),
            "log2" => return Ok(Self::log2()),
            "log2sq" => return Ok(Self::log2_squared()),
            "sqrt" => return Ok(Self::sqrt_capped()),
            "zero" => return Ok(Self::constant(0)),
            _ => {}
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => Ok(Self::constant(num(rest)?)),
            "poly" => Ok(Self::power(num(rest)? as u32)),
            "linear" => {
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                Ok(Self::linear(num(a)?, num(b)?))
            }
            "scaled" => {
                let (c, inner) = rest.split_once(':').ok_or_else(bad)?;
                Ok(inner.parse::<BoundFunction>()?.scaled(num(c)?))
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_and_sqrt() {
        let expect = [0, 0, 1, 2, 2, 3, 3, 3, 3, 4];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(ceil_log2(n), *e, "n = {n}");
        }
        for n in 0..2000 {
            let r = ceil_sqrt(n);
            assert!(r * r >= n && (r == 0 || (r - 1) * (r - 1) < n));
        }
        assert_eq!(BoundFunction::sqrt_capped().eval(2), 2);
        assert_eq!(BoundFunction::sqrt_capped().eval(10), 4);
    }

    #[test]
    fn parsing_and_combinators() {
        let f: BoundFunction = "scaled:3:log2".parse().unwrap();
        assert_eq!(f.eval(8), 9);
        assert_eq!(f.name(), "scaled:3:log2");
        assert_eq!("linear:2:1".parse::<BoundFunction>().unwrap().eval(5), 11);
        assert_eq!("poly:2".parse::<BoundFunction>().unwrap().eval(7), 49);
        let c = BoundFunction::log2().compose(&BoundFunction::power(2));
        assert_eq!(c.eval(5), 5);
        assert!("bogus".parse::<BoundFunction>().is_err());
        assert_eq!(BoundFunction::log2().first_decrease(0, 100), None);
    }
}
