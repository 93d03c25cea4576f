//! Advice padding and the halving diagonalizer over finite families of
//! length-`n` languages.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::bounds::BoundFunction;
use crate::encodings::BitWord;
use crate::error::{Error, Result};
use crate::machines::advice::Advice;

/// A language restricted to words of one length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageSlice {
    pub n: usize,
    members: BTreeSet<BitWord>,
}

impl LanguageSlice {
    pub fn empty(n: usize) -> Self {
        LanguageSlice {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn new(n: usize, members: impl IntoIterator<Item = BitWord>) -> Result<Self> {
        let mut s = Self::empty(n);
        for w in members {
            s.insert(w)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, w: BitWord) -> Result<()> {
        if w.len() != self.n {
            return Err(Error::PreconditionViolated(format!(
                "word {w} in a slice of length {}",
                self.n
            )));
        }
        self.members.insert(w);
        Ok(())
    }

    pub fn contains(&self, w: &BitWord) -> bool {
        self.members.contains(w)
    }

    pub fn members(&self) -> impl Iterator<Item = &BitWord> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `n: w1 w2 ...`, words sorted.
impl fmt::Display for LanguageSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for w in &self.members {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

impl FromStr for LanguageSlice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, words) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(1, "slice needs `n: words`"))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("bad length {n:?}")))?;
        let mut out = Self::empty(n);
        for w in words.split_whitespace() {
            if !w.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::parse(1, format!("bad word {w:?}")));
            }
            out.insert(BitWord::from(w))?;
        }
        Ok(out)
    }
}

/// One slice per non-blank line; `#` starts a comment.
pub fn parse_family(text: &str) -> Result<Vec<LanguageSlice>> {
    let mut out = vec![];
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse::<LanguageSlice>().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(i + 1, msg),
            other => other,
        })?);
    }
    Ok(out)
}

/// The `n`-bit binary representation of `i`, most significant bit first.
pub fn b(i: usize, n: usize) -> BitWord {
    BitWord::binary(i as u64, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalTrace {
    pub slice: LanguageSlice,
    /// Family members agreeing with the output on `b(0), ..., b(i-1)`, for
    /// `i = 0..=f_n+1`.
    pub survivors: Vec<usize>,
}

/// A slice `A` over `{b(0), ..., b(f_n)}` outside `family`. At split `i`,
/// `b(i)` joins `A` exactly when the survivors containing it are a strict
/// minority; survivors then keep only those agreeing with `A` on `b(i)`.
pub fn halving_diagonal(family: &[LanguageSlice], n: usize, f_n: usize) -> Result<DiagonalTrace> {
    if n < usize::BITS as usize && f_n >= 1usize << n {
        return Err(Error::PreconditionViolated(format!(
            "budget {f_n} is not below 2^{n}"
        )));
    }
    if f_n < usize::BITS as usize && family.len() > 1usize << f_n {
        return Err(Error::PreconditionViolated(format!(
            "{} languages exceed 2^{f_n}",
            family.len()
        )));
    }
    if let Some(s) = family.iter().find(|s| s.n != n) {
        return Err(Error::PreconditionViolated(format!(
            "slice of length {} in a family of length {n}",
            s.n
        )));
    }
    let mut alive: Vec<&LanguageSlice> = family.iter().collect();
    let mut out = LanguageSlice::empty(n);
    let mut survivors = vec![alive.len()];
    for i in 0..=f_n {
        let bi = b(i, n);
        let (with, without): (Vec<_>, Vec<_>) = alive.into_iter().partition(|s| s.contains(&bi));
        alive = if with.len() < without.len() {
            out.members.insert(bi);
            with
        } else {
            without
        };
        survivors.push(alive.len());
    }
    Ok(DiagonalTrace {
        slice: out,
        survivors,
    })
}

/// `n -> 1^(g(n)-f(n)-1) 0 a(n)`, after checking `g(n) > f(n)` on `0..=n_max`.
pub fn pad_advice(a: &Advice, g: &BoundFunction, n_max: usize) -> Result<Advice> {
    if let Some(n) = (0..=n_max).find(|&n| g.eval(n) <= a.size.eval(n)) {
        return Err(Error::PreconditionViolated(format!(
            "padded size {} does not exceed advice size {} at n = {n}",
            g.eval(n),
            a.size.eval(n)
        )));
    }
    let (inner, size) = (a.clone(), g.clone());
    Ok(Advice::new(
        format!("pad({},{g})", a.name),
        g.clone(),
        false,
        move |n| {
            let w = inner.at(n);
            let mut out = BitWord::from_bits(vec![true; size.eval(n) - w.len() - 1]);
            out.push(false);
            out.concat(&w)
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::BitStream;
    use crate::machines::advice::advice_from_stream;

    #[test]
    fn empty_language_family() {
        let t = halving_diagonal(&[LanguageSlice::empty(2)], 2, 1).unwrap();
        assert_eq!(t.slice.to_string(), "2: 00");
        assert_eq!(t.survivors, vec![1, 0, 0]);
    }

    #[test]
    fn no_languages_gives_the_empty_slice() {
        let t = halving_diagonal(&[], 3, 2).unwrap();
        assert!(t.slice.is_empty());
    }

    #[test]
    fn preconditions() {
        assert!(halving_diagonal(&[], 2, 4).is_err());
        let fam = vec![LanguageSlice::empty(3); 5];
        assert!(halving_diagonal(&fam, 3, 2).is_err());
        assert!(halving_diagonal(&[LanguageSlice::empty(2)], 3, 1).is_err());
    }

    #[test]
    fn slice_text_roundtrip() {
        let fam = parse_family("# family\n3: 101 000\n3:\n").unwrap();
        assert_eq!(fam[0].to_string(), "3: 000 101");
        assert!(fam[1].is_empty());
        assert!(parse_family("3: 10").is_err());
        assert!(parse_family("3 101").is_err());
    }

    #[test]
    fn padding_instantiated() {
        let a = advice_from_stream(
            &BitStream::word(BitWord::from("101")),
            &BoundFunction::constant(3),
        );
        let p = pad_advice(&a, &BoundFunction::constant(6), 10).unwrap();
        assert_eq!(p.at(4), BitWord::from("110101"));
        let q = pad_advice(&a, &BoundFunction::constant(4), 10).unwrap();
        assert_eq!(q.at(0), BitWord::from("0101"));
        assert!(pad_advice(&a, &BoundFunction::constant(3), 10).is_err());
    }
}
