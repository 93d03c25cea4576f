//! Binary words, binary streams, the base-2 and base-4 encodings and the
//! affine stack primitives that act on base-4 encoded stack contents.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::activation::sigma;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^-exp` as an exact rational.
pub fn inv_pow(base: u32, exp: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(base).pow(exp as u32))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational literal: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Finite binary word; index 0 is the first symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord(Vec<bool>);

impl BitWord {
    pub fn new() -> Self {
        BitWord(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitWord(bits)
    }

    /// The `width`-bit most-significant-first representation of `value`.
    pub fn binary(value: u64, width: usize) -> Self {
        BitWord(
            (0..width)
                .rev()
                .map(|k| k < 64 && (value >> k) & 1 == 1)
                .collect(),
        )
    }

    /// Inverse of [`BitWord::binary`]; words longer than 64 bits saturate.
    pub fn to_index(&self) -> u128 {
        self.0.iter().fold(0u128, |acc, &b| {
            acc.saturating_mul(2).saturating_add(b as u128)
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, other: &BitWord) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// First `n` symbols; `n` is clamped to the length.
    pub fn prefix(&self, n: usize) -> BitWord {
        BitWord(self.0[..n.min(self.len())].to_vec())
    }

    /// Symbols `start..end` (end exclusive).
    pub fn sub(&self, start: usize, end: usize) -> BitWord {
        BitWord(self.0[start..end].to_vec())
    }

    pub fn is_prefix_of(&self, other: &BitWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    /// All words of length `n` in increasing binary order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitWord> {
        assert!(n < 64, "word length {n} too large to enumerate");
        (0..(1u64 << n)).map(move |v| BitWord::binary(v, n))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Invalid(format!("not a binary word: {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitWord)
    }
}

impl From<&str> for BitWord {
    /// Panics on non-binary input; intended for literals.
    fn from(s: &str) -> Self {
        s.parse().expect("binary literal")
    }
}

impl FromIterator<bool> for BitWord {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitWord(iter.into_iter().collect())
    }
}

type BitFn = dyn Fn(usize) -> bool + Send + Sync;

#[derive(Clone)]
enum Source {
    /// `prefix` followed by `cycle` repeated forever; `cycle` is nonempty.
    Periodic {
        prefix: BitWord,
        cycle: BitWord,
    },
    ThueMorse,
    Primes,
    Squares,
    Seeded(u64),
    Custom {
        name: String,
        f: Arc<BitFn>,
    },
}

/// Infinite binary sequence given by a pure generator.
#[derive(Clone)]
pub struct BitStream {
    source: Source,
}

impl BitStream {
    pub fn periodic(prefix: BitWord, cycle: BitWord) -> Self {
        assert!(!cycle.is_empty(), "periodic stream needs a nonempty cycle");
        BitStream {
            source: Source::Periodic { prefix, cycle },
        }
    }

    /// `w` followed by zeros.
    pub fn word(w: BitWord) -> Self {
        Self::periodic(w, BitWord::from("0"))
    }

    pub fn constant(b: bool) -> Self {
        Self::periodic(BitWord::new(), BitWord::from_bits(vec![b]))
    }

    pub fn thue_morse() -> Self {
        BitStream {
            source: Source::ThueMorse,
        }
    }

    /// Characteristic sequence of the primes.
    pub fn primes() -> Self {
        BitStream {
            source: Source::Primes,
        }
    }

    /// Characteristic sequence of the perfect squares.
    pub fn squares() -> Self {
        BitStream {
            source: Source::Squares,
        }
    }

    /// Pseudo-random bits, a pure function of (seed, index). Test fixture only.
    pub fn seeded(seed: u64) -> Self {
        BitStream {
            source: Source::Seeded(seed),
        }
    }

    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(usize) -> bool + Send + Sync + 'static,
    ) -> Self {
        BitStream {
            source: Source::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        match &self.source {
            Source::Periodic { prefix, cycle } => {
                if i < prefix.len() {
                    prefix.bit(i)
                } else {
                    cycle.bit((i - prefix.len()) % cycle.len())
                }
            }
            Source::ThueMorse => (i as u64).count_ones() % 2 == 1,
            Source::Primes => is_prime(i as u64),
            Source::Squares => {
                let r = (i as f64).sqrt() as u64;
                (r.saturating_sub(1)..=r + 1).any(|k| k * k == i as u64)
            }
            Source::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_word_pos(2 * (i / 64) as u128);
                (rng.next_u64() >> (i % 64)) & 1 == 1
            }
            Source::Custom { f, .. } => f(i),
        }
    }

    pub fn prefix(&self, n: usize) -> BitWord {
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// Whether the stream is known to be eventually periodic.
    pub fn is_rational(&self) -> bool {
        matches!(self.source, Source::Periodic { .. })
    }

    /// Exact base-4 value, available for eventually periodic streams.
    pub fn exact_delta4(&self) -> Option<Rational> {
        match &self.source {
            Source::Periodic { prefix, cycle } => {
                let head = delta4(prefix);
                let period = delta4(cycle) / (Rational::one() - inv_pow(4, cycle.len()));
                Some(head + inv_pow(4, prefix.len()) * period)
            }
            _ => None,
        }
    }

    /// Exact binary value `sum b_i 2^-(i+1)`, available for eventually periodic streams.
    pub fn exact_binary(&self) -> Option<Rational> {
        match &self.source {
            Source::Periodic { prefix, cycle } => {
                let head = binary_value(prefix);
                let period = binary_value(cycle) / (Rational::one() - inv_pow(2, cycle.len()));
                Some(head + inv_pow(2, prefix.len()) * period)
            }
            _ => None,
        }
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Periodic { prefix, cycle } => write!(f, "periodic:{prefix}({cycle})"),
            Source::ThueMorse => f.write_str("thue-morse"),
            Source::Primes => f.write_str("primes"),
            Source::Squares => f.write_str("squares"),
            Source::Seeded(s) => write!(f, "seeded:{s}"),
            Source::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream({self})")
    }
}

/// Accepted syntax: `periodic:<prefix>(<cycle>)`, `word:<w>`, `const:<b>`,
/// `thue-morse`, `primes`, `squares`, `seeded:<u64>`.
impl FromStr for BitStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("unknown stream generator: {s:?}"));
        match s {
            "thue-morse" => return Ok(Self::thue_morse()),
            "primes" => return Ok(Self::primes()),
            "squares" => return Ok(Self::squares()),
            _ => {}
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "word" => Ok(Self::word(arg.parse()?)),
            "const" => match arg {
                "0" => Ok(Self::constant(false)),
                "1" => Ok(Self::constant(true)),
                _ => Err(bad()),
            },
            "seeded" => Ok(Self::seeded(arg.parse().map_err(|_| bad())?)),
            "periodic" => {
                let (prefix, rest) = arg.split_once('(').ok_or_else(bad)?;
                let cycle = rest.strip_suffix(')').ok_or_else(bad)?;
                let cycle: BitWord = cycle.parse()?;
                if cycle.is_empty() {
                    return Err(bad());
                }
                Ok(Self::periodic(prefix.parse()?, cycle))
            }
            _ => Err(bad()),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `sum (w_i + 1) / 2^(i+1)`. Not injective across lengths.
pub fn delta2(w: &BitWord) -> Rational {
    let mut num = BigInt::zero();
    for b in w.iter() {
        num = num * 2 + BigInt::from(b as u8 + 1);
    }
    Rational::new(num, BigInt::one() << w.len())
}

/// `sum (2 w_i + 1) / 4^(i+1)`.
pub fn delta4(w: &BitWord) -> Rational {
    let mut num = BigInt::zero();
    for b in w.iter() {
        num = num * 4 + BigInt::from(2 * b as u8 + 1);
    }
    Rational::new(num, BigInt::one() << (2 * w.len()))
}

/// Plain binary fraction `sum w_i / 2^(i+1)`.
pub fn binary_value(w: &BitWord) -> Rational {
    let mut num = BigInt::zero();
    for b in w.iter() {
        num = num * 2 + BigInt::from(b as u8);
    }
    Rational::new(num, BigInt::one() << w.len())
}

/// First `n` binary digits of `x` in [0,1]; `x = 1` yields all ones.
pub fn binary_digits(x: &Rational, n: usize) -> BitWord {
    let scaled = (x * Rational::from_integer(BigInt::one() << n))
        .floor()
        .to_integer();
    let cap = (BigInt::one() << n) - 1;
    let v = if scaled > cap { cap } else { scaled };
    (0..n).rev().map(|k| v.bit(k as u64)).collect()
}

/// Recovers the first `n` symbols of the word or stream encoded by `q`.
///
/// Digit 1 covers `4q` in [1,2] and digit 3 covers `4q` in [3,4]; these are
/// exactly the ranges reachable by digit-{1,3} expansions, finite or not.
pub fn delta4_decode(q: &Rational, n: usize) -> Result<BitWord> {
    let one = Rational::one();
    let two = int(2);
    let three = int(3);
    let four = int(4);
    let mut rest = q.clone();
    let mut out = BitWord::new();
    for depth in 0..n {
        let x = &rest * &four;
        if x >= one && x <= two {
            out.push(false);
            rest = x - &one;
        } else if x >= three && x <= four {
            out.push(true);
            rest = x - &three;
        } else {
            return Err(Error::NotInImage { depth });
        }
    }
    Ok(out)
}

pub fn stack_top(q: &Rational) -> Rational {
    sigma(q * int(4) - int(2))
}

pub fn stack_push0(q: &Rational) -> Rational {
    sigma(q / int(4) + rat(1, 4))
}

pub fn stack_push1(q: &Rational) -> Rational {
    sigma(q / int(4) + rat(3, 4))
}

pub fn stack_push(q: &Rational, bit: bool) -> Rational {
    if bit {
        stack_push1(q)
    } else {
        stack_push0(q)
    }
}

pub fn stack_pop(q: &Rational) -> Rational {
    sigma(q * int(4) - (stack_top(q) * int(2) + int(1)))
}

pub fn stack_empty(q: &Rational) -> Rational {
    sigma(q * int(4))
}
