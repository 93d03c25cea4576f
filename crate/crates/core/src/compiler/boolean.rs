//! Two-layer threshold circuits for truth tables over {0,1} inputs.

use super::Builder;
use crate::encodings::int;
use crate::error::{Error, Result};
use crate::rnn::{NetworkState, RnnConfig};

pub const MAX_ARITY: usize = 10;

/// Inputs are read from `h0`; the output cell holds the table value after
/// [`BooleanBlock::DEPTH`] steps.
#[derive(Clone, Debug)]
pub struct BooleanBlock {
    pub cfg: RnnConfig,
    pub inputs: Vec<usize>,
    pub output: usize,
}

impl BooleanBlock {
    pub const DEPTH: usize = 2;

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        let mut cfg = self.cfg.clone();
        for (&cell, &b) in self.inputs.iter().zip(x) {
            cfg.h0[cell] = int(b as i64);
        }
        let mut st = NetworkState::initial(&cfg);
        for _ in 0..Self::DEPTH {
            st = crate::rnn::step(&cfg, &st, (false, false))?.0;
        }
        crate::activation::theta(&st.h[self.output])
    }
}

/// `table[i]` is the value on inputs `x` with `i = sum x_j 2^j`. One
/// conjunction cell per true row, OR-ed into the output.
pub fn build_boolean_block(table: &[bool]) -> Result<BooleanBlock> {
    let arity = table.len().trailing_zeros() as usize;
    if !table.len().is_power_of_two() {
        return Err(Error::Invalid(format!(
            "truth table length {} is not a power of two",
            table.len()
        )));
    }
    if arity > MAX_ARITY {
        return Err(Error::ArityExceeded {
            arity,
            cap: MAX_ARITY,
        });
    }
    let mut b = Builder::new();
    let inputs: Vec<usize> = (0..arity).map(|j| b.cell(format!("in.{j}"))).collect();
    let output = b.cell("out");
    for (row, _) in table.iter().enumerate().filter(|(_, v)| **v) {
        let term = b.cell(format!("row.{row}"));
        let mut ones = 0;
        for (j, &x) in inputs.iter().enumerate() {
            if row >> j & 1 == 1 {
                b.w(term, x, int(1));
                ones += 1;
            } else {
                b.w(term, x, int(-1));
            }
        }
        b.bias(term, int(1 - ones));
        b.w(output, term, int(1));
    }
    Ok(BooleanBlock {
        cfg: b.cfg,
        inputs,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(i: usize, n: usize) -> Vec<bool> {
        (0..n).map(|j| i >> j & 1 == 1).collect()
    }

    #[test]
    fn and_not_and_selector() {
        let and = build_boolean_block(&[false, false, false, true]).unwrap();
        for i in 0..4 {
            assert_eq!(and.eval(&bits(i, 2)).unwrap(), i == 3);
        }
        let not = build_boolean_block(&[true, false]).unwrap();
        assert!(not.eval(&[false]).unwrap());
        assert!(!not.eval(&[true]).unwrap());
        // exactly one of three lines raised
        let table: Vec<bool> = (0..8).map(|i: usize| i.count_ones() == 1).collect();
        let sel = build_boolean_block(&table).unwrap();
        for i in 0..8 {
            assert_eq!(sel.eval(&bits(i, 3)).unwrap(), table[i]);
        }
    }

    #[test]
    fn arity_cap() {
        assert!(matches!(
            build_boolean_block(&vec![false; 1 << (MAX_ARITY + 1)]),
            Err(Error::ArityExceeded {
                arity: 11,
                cap: MAX_ARITY
            })
        ));
        assert!(build_boolean_block(&[true, false, true]).is_err());
    }
}
