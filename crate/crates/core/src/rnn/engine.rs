//! Arithmetic-generic network stepping shared by the exact, truncated, analog,
//! evolving and stochastic semantics.

use num_traits::Zero;

use super::{Decision, RnnConfig};
use crate::activation::{sigma, theta};
use crate::encodings::{BitWord, Rational};
use crate::error::{Error, Result};

/// Value domain of activations together with the two nonlinearities.
pub trait Arith {
    type V: Clone;

    fn lift(&self, q: &Rational) -> Self::V;
    fn is_zero(&self, v: &Self::V) -> bool;
    /// `acc += w * x`
    fn axpy(&self, acc: &mut Self::V, w: &Rational, x: &Self::V);
    /// `acc += x`
    fn add(&self, acc: &mut Self::V, x: &Self::V);
    fn activate(&mut self, v: Self::V) -> Result<Self::V>;
    fn threshold(&mut self, v: &Self::V) -> Result<bool>;
}

/// Plain exact rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Arith for Exact {
    type V = Rational;

    fn lift(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn is_zero(&self, v: &Rational) -> bool {
        v.is_zero()
    }
    fn axpy(&self, acc: &mut Rational, w: &Rational, x: &Rational) {
        *acc += w * x;
    }
    fn add(&self, acc: &mut Rational, x: &Rational) {
        *acc += x;
    }
    fn activate(&mut self, v: Rational) -> Result<Rational> {
        Ok(sigma(v))
    }
    fn threshold(&mut self, v: &Rational) -> Result<bool> {
        theta(v)
    }
}

/// Per-step external inputs beyond the word protocol.
pub struct Extra<V> {
    /// Replaces the bias term of cell 0 for this step.
    pub bias0: Option<V>,
    /// Value of the stochastic input line.
    pub x2: bool,
}

impl<V> Default for Extra<V> {
    fn default() -> Self {
        Extra {
            bias0: None,
            x2: false,
        }
    }
}

/// Network weights rearranged for sparse stepping.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub k: usize,
    w_in: Vec<[Rational; 3]>,
    /// Column-major recurrent weights: `cols[j]` lists `(i, W[i][j])`.
    cols: Vec<Vec<(usize, Rational)>>,
    out: [Vec<(usize, Rational)>; 2],
    x2: Vec<(usize, Rational)>,
    pub h0: Vec<Rational>,
}

impl Prepared {
    pub fn new(cfg: &RnnConfig, x2_column: Option<&[Rational]>) -> Self {
        Self::mapped(cfg, x2_column, |q| q.clone())
    }

    /// Same network with every weight and initial activation passed through `map`.
    pub fn mapped(
        cfg: &RnnConfig,
        x2_column: Option<&[Rational]>,
        map: impl Fn(&Rational) -> Rational,
    ) -> Self {
        let mut cols = vec![Vec::new(); cfg.k];
        for (i, row) in cfg.w_res.iter().enumerate() {
            for (j, w) in row {
                let w = map(w);
                if !w.is_zero() {
                    cols[*j].push((i, w));
                }
            }
        }
        let sparse = |row: &[(usize, Rational)]| -> Vec<(usize, Rational)> {
            row.iter()
                .map(|(j, w)| (*j, map(w)))
                .filter(|(_, w)| !w.is_zero())
                .collect()
        };
        let x2 = x2_column
            .map(|col| {
                col.iter()
                    .enumerate()
                    .map(|(i, w)| (i, map(w)))
                    .filter(|(_, w)| !w.is_zero())
                    .collect()
            })
            .unwrap_or_default();
        Prepared {
            k: cfg.k,
            w_in: cfg
                .w_in
                .iter()
                .map(|r| [map(&r[0]), map(&r[1]), map(&r[2])])
                .collect(),
            cols,
            out: [sparse(&cfg.w_out[0]), sparse(&cfg.w_out[1])],
            x2,
            h0: cfg.h0.iter().map(map).collect(),
        }
    }

    pub fn initial<A: Arith>(&self, arith: &A) -> Vec<A::V> {
        self.h0.iter().map(|q| arith.lift(q)).collect()
    }

    /// One application of the update and output equations.
    pub fn step<A: Arith>(
        &self,
        arith: &mut A,
        h: &[A::V],
        x0: bool,
        x1: bool,
        extra: &Extra<A::V>,
    ) -> Result<(Vec<A::V>, (bool, bool))> {
        let zero = arith.lift(&Rational::zero());
        let mut acc = vec![zero; self.k];
        for (i, slot) in acc.iter_mut().enumerate() {
            let row = &self.w_in[i];
            let mut c = row[2].clone();
            if i == 0 && extra.bias0.is_some() {
                c = Rational::zero();
            }
            if x0 {
                c += &row[0];
            }
            if x1 {
                c += &row[1];
            }
            if !c.is_zero() {
                *slot = arith.lift(&c);
            }
        }
        if let (Some(b), true) = (&extra.bias0, self.k > 0) {
            arith.add(&mut acc[0], b);
        }
        if extra.x2 {
            for (i, w) in &self.x2 {
                let c = arith.lift(w);
                arith.add(&mut acc[*i], &c);
            }
        }
        for (j, hj) in h.iter().enumerate() {
            if arith.is_zero(hj) {
                continue;
            }
            for (i, w) in &self.cols[j] {
                arith.axpy(&mut acc[*i], w, hj);
            }
        }
        let next = acc
            .into_iter()
            .map(|v| arith.activate(v))
            .collect::<Result<Vec<_>>>()?;
        let mut y = [false; 2];
        for (r, row) in self.out.iter().enumerate() {
            let mut s = arith.lift(&Rational::zero());
            for (j, w) in row {
                if !arith.is_zero(&next[*j]) {
                    arith.axpy(&mut s, w, &next[*j]);
                }
            }
            y[r] = arith.threshold(&s)?;
        }
        Ok((next, (y[0], y[1])))
    }

    /// Runs the word protocol: `(w_t, 1)` while `t < |w|`, then `(0, 0)`.
    /// `extra(t)` supplies the bias override and stochastic line for step `t`.
    pub fn run<A: Arith>(
        &self,
        arith: &mut A,
        w: &BitWord,
        max_steps: u64,
        mut extra: impl FnMut(u64) -> Result<Extra<A::V>>,
        mut observe: impl FnMut(u64, &[A::V], (bool, bool)),
    ) -> Result<Decision> {
        let mut h = self.initial(arith);
        for t in 0..max_steps {
            let (x0, x1) = if (t as usize) < w.len() {
                (w.bit(t as usize), true)
            } else {
                (false, false)
            };
            let ex = extra(t)?;
            let (next, y) = self.step(arith, &h, x0, x1, &ex)?;
            h = next;
            observe(t + 1, &h, y);
            match y {
                (d, true) => {
                    return Ok(if d {
                        Decision::Accept(t + 1)
                    } else {
                        Decision::Reject(t + 1)
                    })
                }
                (true, false) => return Err(Error::ProtocolViolation { step: t + 1 }),
                (false, false) => {}
            }
        }
        Ok(Decision::Timeout)
    }
}
