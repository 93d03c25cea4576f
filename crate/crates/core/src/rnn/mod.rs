//! Exact simulation of the saturated-linear recurrent network model and its
//! word input/output protocol.

pub mod engine;
pub mod format;

use std::fmt;

use num_traits::{One, Zero};

use crate::encodings::{BitWord, Rational};
use crate::error::{Error, Result};
use engine::{Exact, Extra, Prepared};

/// Outcome of a bounded run. The payload is the decision time (network runs)
/// or the step count (machine runs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept(u64),
    Reject(u64),
    Timeout,
}

impl Decision {
    pub fn accepted(&self) -> Option<bool> {
        match self {
            Decision::Accept(_) => Some(true),
            Decision::Reject(_) => Some(false),
            Decision::Timeout => None,
        }
    }

    pub fn time(&self) -> Option<u64> {
        match self {
            Decision::Accept(t) | Decision::Reject(t) => Some(*t),
            Decision::Timeout => None,
        }
    }

    /// Same verdict, ignoring timing.
    pub fn agrees(&self, other: &Decision) -> bool {
        self.accepted() == other.accepted()
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Accept(t) => write!(f, "accept@{t}"),
            Decision::Reject(t) => write!(f, "reject@{t}"),
            Decision::Timeout => f.write_str("timeout"),
        }
    }
}

/// Weights and initial state of a network with `k` cells.
///
/// Input columns are data `x0`, validation `x1` and the constant bias.
/// `w_res` and `w_out` rows are sparse: absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RnnConfig {
    pub k: usize,
    pub w_in: Vec<[Rational; 3]>,
    pub w_res: Vec<Vec<(usize, Rational)>>,
    pub w_out: [Vec<(usize, Rational)>; 2],
    pub h0: Vec<Rational>,
}

impl RnnConfig {
    pub fn zeros(k: usize) -> Self {
        RnnConfig {
            k,
            w_in: vec![[Rational::zero(), Rational::zero(), Rational::zero()]; k],
            w_res: vec![Vec::new(); k],
            w_out: [Vec::new(), Vec::new()],
            h0: vec![Rational::zero(); k],
        }
    }

    /// Adds `w` to the recurrent weight from cell `j` into cell `i`.
    pub fn add_res(&mut self, i: usize, j: usize, w: Rational) {
        add_sparse(&mut self.w_res[i], j, w);
    }

    pub fn add_out(&mut self, row: usize, j: usize, w: Rational) {
        add_sparse(&mut self.w_out[row], j, w);
    }

    pub fn res(&self, i: usize, j: usize) -> Rational {
        self.w_res[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, w)| w.clone())
            .unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.w_in.len() != self.k || self.w_res.len() != self.k || self.h0.len() != self.k {
            return bad(format!("dimension mismatch for {} cells", self.k));
        }
        for (i, row) in self.w_res.iter().chain(self.w_out.iter()).enumerate() {
            if row.iter().any(|(j, _)| *j >= self.k) {
                return bad(format!("row {i} references a cell beyond {}", self.k));
            }
        }
        if self
            .h0
            .iter()
            .any(|v| *v < Rational::zero() || *v > Rational::one())
        {
            return bad("initial activations must lie in [0,1]".into());
        }
        Ok(())
    }
}

fn add_sparse(row: &mut Vec<(usize, Rational)>, j: usize, w: Rational) {
    match row.iter_mut().find(|(c, _)| *c == j) {
        Some(slot) => slot.1 += w,
        None => row.push((j, w)),
    }
    row.retain(|(_, w)| !w.is_zero());
    row.sort_by_key(|(c, _)| *c);
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    pub t: u64,
    pub h: Vec<Rational>,
}

impl NetworkState {
    pub fn initial(cfg: &RnnConfig) -> Self {
        NetworkState {
            t: 0,
            h: cfg.h0.clone(),
        }
    }
}

/// One network step on input `(x0, x1)`; returns the next state and `(y0, y1)`.
pub fn step(
    cfg: &RnnConfig,
    st: &NetworkState,
    input: (bool, bool),
) -> Result<(NetworkState, (bool, bool))> {
    let prepared = Prepared::new(cfg, None);
    let (h, y) = prepared.step(&mut Exact, &st.h, input.0, input.1, &Extra::default())?;
    Ok((NetworkState { t: st.t + 1, h }, y))
}

/// Decides `w` under the word protocol within `max_steps` steps.
pub fn run_word(cfg: &RnnConfig, w: &BitWord, max_steps: u64) -> Result<Decision> {
    Prepared::new(cfg, None).run(
        &mut Exact,
        w,
        max_steps,
        |_| Ok(Extra::default()),
        |_, _, _| {},
    )
}

/// One line per step: `t=<t> y=<y0><y1> h=<activations>`.
pub fn trace_word(cfg: &RnnConfig, w: &BitWord, max_steps: u64) -> Result<(Decision, Vec<String>)> {
    let mut lines = Vec::new();
    let decision = Prepared::new(cfg, None).run(
        &mut Exact,
        w,
        max_steps,
        |_| Ok(Extra::default()),
        |t, h, y| {
            let hs: Vec<String> = h.iter().map(|v| v.to_string()).collect();
            lines.push(format!(
                "t={t} y={}{} h={}",
                y.0 as u8,
                y.1 as u8,
                hs.join(",")
            ));
        },
    )?;
    Ok((decision, lines))
}
