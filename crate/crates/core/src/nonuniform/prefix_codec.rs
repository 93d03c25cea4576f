//! Prefix advice carrying one diagonal slice per sample length `n_i`.
//!
//! Symbols are bit pairs: `00` and `11` encode data bits, `01` separates
//! slices, `10` is padding. The advice at length `n` lists the slices for
//! every `n_i <= n`, followed by a separator when `n_0 < n` is not a sample
//! length, then padding up to `g(n)`. An odd `g(n)` takes one trailing `1`.

use super::bounds::BoundFunction;
use super::diagonal::{b, LanguageSlice};
use crate::encodings::BitWord;
use crate::error::{Error, Result};
use crate::machines::advice::Advice;

const SEP: [bool; 2] = [false, true];
const PAD: [bool; 2] = [true, false];

/// Doubles every bit.
pub fn h(w: &BitWord) -> BitWord {
    BitWord::from_bits(w.iter().flat_map(|x| [x, x]).collect())
}

/// How the sample-length inequalities account for separators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiRule {
    /// `2 sum_{j<i} (f(n_j)+1) + 2(f(n)+1) <= g(n)`; separators uncounted.
    Uncounted,
    /// Adds the `i` separators between slices and one trailing separator, so
    /// every advice word fits in `g(n)`.
    Counted,
}

fn need(rule: NiRule, f: &BoundFunction, i: usize, before: usize, n: usize) -> usize {
    let own = 2 * (f.eval(n) + 1);
    match rule {
        NiRule::Uncounted => 2 * before + own,
        NiRule::Counted => 2 * before + 2 * i + own + 2,
    }
}

/// First `count` sample lengths, each the least `n` above its predecessor
/// with `need(n) <= g(n)`, searching up to `cap`.
pub fn compute_ni_sequence(
    f: &BoundFunction,
    g: &BoundFunction,
    count: usize,
    rule: NiRule,
    cap: usize,
) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::with_capacity(count);
    let mut before = 0;
    for i in 0..count {
        let lo = out.last().map_or(0, |&p| p + 1);
        let n = (lo..=cap)
            .find(|&n| need(rule, f, i, before, n) <= g.eval(n))
            .ok_or(Error::SearchExhausted { cap })?;
        before += f.eval(n) + 1;
        out.push(n);
    }
    Ok(out)
}

/// `beta_j = [b(j) in A]` for `j = 0..=f(n)`.
fn indicator(a: &LanguageSlice, f_n: usize) -> BitWord {
    BitWord::from_bits((0..=f_n).map(|j| a.contains(&b(j, a.n))).collect())
}

/// Advice for `slices[i]` at sample length `lengths[i]`, checked to fit in
/// `g(n)` for every `n < range_end`.
#[derive(Clone, Debug)]
pub struct PrefixEncoding {
    pub lengths: Vec<usize>,
    /// Next sample length after the last encoded one.
    pub range_end: usize,
    pub advice: Advice,
}

impl PrefixEncoding {
    /// Advice at `n` before padding.
    pub fn core(&self, n: usize) -> BitWord {
        core_word(&self.advice.at(n))
    }
}

fn core_word(padded: &BitWord) -> BitWord {
    let mut bits = padded.bits().to_vec();
    if bits.len() % 2 == 1 {
        bits.pop();
    }
    while bits.len() >= 2 && bits[bits.len() - 2..] == PAD {
        bits.truncate(bits.len() - 2);
    }
    BitWord::from_bits(bits)
}

/// Encodes `slices`, which must sit at the first `slices.len()` sample
/// lengths of `rule` and lie inside `{b(j) : j <= f(n_i)}`.
pub fn prefix_codec_encode(
    slices: &[LanguageSlice],
    f: &BoundFunction,
    g: &BoundFunction,
    rule: NiRule,
    cap: usize,
) -> Result<PrefixEncoding> {
    let all = compute_ni_sequence(f, g, slices.len() + 1, rule, cap)?;
    let (lengths, range_end) = (all[..slices.len()].to_vec(), all[slices.len()]);
    let mut blocks = vec![];
    for (s, &n) in slices.iter().zip(&lengths) {
        if s.n != n {
            return Err(Error::PreconditionViolated(format!(
                "slice of length {} at sample length {n}",
                s.n
            )));
        }
        let f_n = f.eval(n);
        if let Some(w) = s.members().find(|w| w.to_index() > f_n as u128) {
            return Err(Error::PreconditionViolated(format!(
                "{w} lies beyond b({f_n})"
            )));
        }
        blocks.push(h(&indicator(s, f_n)));
    }
    let ls = lengths.clone();
    let core = move |n: usize| {
        let k = ls.iter().take_while(|&&m| m <= n).count();
        let mut out = BitWord::new();
        for (i, block) in blocks[..k].iter().enumerate() {
            if i > 0 {
                out.extend_from(&BitWord::from_bits(SEP.to_vec()));
            }
            out.extend_from(block);
        }
        if k > 0 && ls[k - 1] != n {
            out.extend_from(&BitWord::from_bits(SEP.to_vec()));
        }
        out
    };
    if let Some(n) = (0..range_end).find(|&n| core(n).len() > g.eval(n)) {
        return Err(Error::PreconditionViolated(format!(
            "advice of {} bits exceeds g({n}) = {}",
            core(n).len(),
            g.eval(n)
        )));
    }
    let size = g.clone();
    let advice = Advice::new(
        format!("prefix-codec({f},{g})"),
        g.clone(),
        false,
        move |n| {
            let mut out = core(n);
            let target = size.eval(n);
            while out.len() + 2 <= target {
                out.extend_from(&BitWord::from_bits(PAD.to_vec()));
            }
            if out.len() < target {
                out.push(true);
            }
            out
        },
    );
    Ok(PrefixEncoding {
        lengths,
        range_end,
        advice,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    Slice(LanguageSlice),
    NotASampleLength,
}

/// Inverse of the encoding at length `n`: the last slice when the advice
/// does not end in a separator.
pub fn prefix_codec_decode(advice: &BitWord, n: usize) -> Result<Decoded> {
    let core = core_word(advice);
    let pairs: Vec<[bool; 2]> = core.bits().chunks(2).map(|c| [c[0], c[1]]).collect();
    if pairs.contains(&PAD) {
        return Err(Error::MalformedAdvice(
            "padding symbol before the end".into(),
        ));
    }
    if pairs.last().is_none_or(|p| *p == SEP) {
        return Ok(Decoded::NotASampleLength);
    }
    let start = pairs.iter().rposition(|p| *p == SEP).map_or(0, |i| i + 1);
    let mut slice = LanguageSlice::empty(n);
    for (j, p) in pairs[start..].iter().enumerate() {
        if p[0] {
            if n < 64 && j as u64 >= 1u64 << n {
                return Err(Error::MalformedAdvice(format!(
                    "index {j} has no {n}-bit representation"
                )));
            }
            slice.insert(b(j, n))?;
        }
    }
    Ok(Decoded::Slice(slice))
}
