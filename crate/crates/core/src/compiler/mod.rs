//! Machine-to-network compilation.
//!
//! A p-stack machine becomes a network that first accumulates the input word
//! into a register cell and then runs a fixed four-phase pipeline per machine
//! step:
//!
//! | phase | cells                                                       |
//! |-------|-------------------------------------------------------------|
//! | A     | stack contents `C_k`, state one-hot `X_q`                   |
//! | B     | tops `T_k`, nonempty flags `N_k`, copies of `C_k` and `X_q` |
//! | C     | rule selectors `R_j`, second copies of `C_k`, copies of `T_k` |
//! | D     | gated operation results `O_{k,op}`, next-state latches `L_q` |
//!
//! Phase D feeds phase A of the next machine step. The input phase ends with
//! a start pulse that acts as a rule selector performing the initial loads,
//! so a run on an input of length `n` taking `s` machine steps decides at
//! time `n + RAMP + STEP * s`.

mod boolean;
mod layout;
mod stack_circuit;

use std::collections::BTreeSet;

use num_traits::One;

pub use boolean::{build_boolean_block, BooleanBlock, MAX_ARITY};
pub use layout::Layout;
pub use stack_circuit::{build_stack_circuit, StackCircuit, StackOpKind, StackTemplate};

use crate::encodings::{int, rat, Rational};
use crate::error::{Error, Result};
use crate::machines::stack::{InputCode, Obs, Register, StackMachineSpec};
use crate::rnn::RnnConfig;

/// Network steps per machine step.
pub const STEP: u64 = 4;
/// Network steps between the end of the input and phase A of the first
/// machine step.
pub const RAMP: u64 = 3;
/// Network steps for one gated stack operation in isolation.
pub const OP: u64 = 4;
pub const MAX_STACKS: usize = 16;

/// Where the advice register of `Load(Advice)` comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdviceWiring {
    None,
    /// The bias of cell 0, holding a fixed encoded word.
    StaticBias,
    /// Cell 0 receives one bit per step as its bias; an accumulator cell
    /// appends each bit below the bits already held, so the first bit stays
    /// on top.
    EvolvingBias,
}

#[derive(Clone, Debug)]
pub struct CompiledNetwork {
    pub cfg: RnnConfig,
    pub layout: Layout,
    pub wiring: AdviceWiring,
}

impl CompiledNetwork {
    /// Decision time for an input of length `n` and `steps` machine steps.
    pub fn decision_time(n: usize, steps: u64) -> u64 {
        n as u64 + RAMP + STEP * steps
    }

    /// Symbols held by the evolving-bias accumulator when the machine loads it
    /// at machine step `s` (`-1` for the initial load): `n + STEP * (s + 1)`.
    pub fn arriving_symbols(n: usize) -> (usize, usize) {
        (n, STEP as usize)
    }
}

pub(crate) struct Builder {
    pub cfg: RnnConfig,
    pub layout: Layout,
}

impl Builder {
    pub fn new() -> Self {
        Builder {
            cfg: RnnConfig::zeros(0),
            layout: Layout::default(),
        }
    }

    pub fn cell(&mut self, role: impl Into<String>) -> usize {
        let i = self.cfg.k;
        self.cfg.k += 1;
        self.cfg.w_in.push([
            Rational::default(),
            Rational::default(),
            Rational::default(),
        ]);
        self.cfg.w_res.push(Vec::new());
        self.cfg.h0.push(Rational::default());
        self.layout.insert(role.into(), i);
        i
    }

    pub fn w(&mut self, to: usize, from: usize, w: Rational) {
        self.cfg.add_res(to, from, w);
    }

    pub fn bias(&mut self, to: usize, b: Rational) {
        self.cfg.w_in[to][2] += b;
    }

    /// `to` becomes a one-step delayed copy of `from`.
    pub fn copy(&mut self, to: usize, from: usize) {
        self.w(to, from, int(1));
    }
}

/// Observation literal of a guard as `(constant, [(cell, weight)])`, each
/// evaluating to exactly 0 or 1 on encoded stack contents.
fn literal(obs: Obs, top: usize, nonempty: usize) -> (i64, Vec<(usize, i64)>) {
    match obs {
        Obs::Top(true) => (0, vec![(top, 1)]),
        Obs::Top(false) => (0, vec![(nonempty, 1), (top, -1)]),
        Obs::Empty => (1, vec![(nonempty, -1)]),
    }
}

struct InputCells {
    register: usize,
    start: usize,
}

/// Accumulates the encoded input word into a register cell and emits a start
/// pulse at time `n + 1`, when the register is complete.
fn input_phase(b: &mut Builder, code: InputCode) -> InputCells {
    let scale = b.cell("input.scale");
    let digit = b.cell("input.digit");
    let data = b.cell("input.data");
    let register = b.cell("input.register");
    let over = b.cell("input.over");
    let start = b.cell("input.start");
    let (shrink, digit_w, data_w) = match code {
        InputCode::Raw => (rat(1, 4), rat(1, 4), rat(1, 2)),
        InputCode::Marked => (rat(1, 16), rat(13, 16), rat(1, 8)),
    };
    // scale^{t+1} = scale^t * shrink while the validation line is up
    b.cfg.h0[scale] = int(1);
    b.w(scale, scale, shrink);
    b.cfg.w_in[scale][1] = int(1);
    b.bias(scale, int(-1));
    // digit = scale * x1, data = scale * x0
    b.w(digit, scale, int(1));
    b.cfg.w_in[digit][1] = int(1);
    b.bias(digit, int(-1));
    b.w(data, scale, int(1));
    b.cfg.w_in[data][0] = int(1);
    b.bias(data, int(-1));
    b.w(register, register, int(1));
    b.w(register, digit, digit_w);
    b.w(register, data, data_w);
    // over latches once the validation line drops; start fires exactly then
    b.w(over, over, int(1));
    b.cfg.w_in[over][1] = int(-1);
    b.bias(over, int(1));
    b.bias(start, int(1));
    b.cfg.w_in[start][1] = int(-1);
    b.w(start, over, int(-1));
    InputCells { register, start }
}

/// Cells realizing the advice register.
fn advice_register(b: &mut Builder, wiring: &AdviceWiring) -> Option<usize> {
    match wiring {
        AdviceWiring::None => None,
        AdviceWiring::StaticBias => Some(0),
        AdviceWiring::EvolvingBias => {
            let live = b.cell("advice.live");
            let scale = b.cell("advice.scale");
            let unit = b.cell("advice.unit");
            let acc = b.cell("advice.accumulator");
            b.cfg.h0[live] = int(1);
            b.bias(live, int(1));
            // scale^t = 4^-t; cell 0 gates the arriving bit: bit^t * 4^-t
            b.cfg.h0[scale] = int(1);
            b.w(scale, scale, rat(1, 4));
            b.w(0, scale, int(1));
            b.w(0, live, int(-1));
            b.w(unit, scale, int(1));
            b.w(unit, live, int(1));
            b.bias(unit, int(-1));
            // acc^{t+1} = acc^t + (unit^t + 2 bit^t) / 4 appends digit 2 bit + 1
            b.w(acc, acc, int(1));
            b.w(acc, unit, rat(1, 4));
            b.w(acc, 0, rat(1, 2));
            Some(acc)
        }
    }
}

pub fn compile(sm: &StackMachineSpec, wiring: AdviceWiring) -> Result<CompiledNetwork> {
    sm.validate()?;
    let p = sm.stacks.len();
    if p > MAX_STACKS {
        return Err(Error::Compile(format!(
            "{}: {p} stacks exceed the limit of {MAX_STACKS}",
            sm.name
        )));
    }
    if sm.uses_register(Register::Advice) && wiring == AdviceWiring::None {
        return Err(Error::Compile(format!(
            "{} loads advice but no advice wiring was requested",
            sm.name
        )));
    }
    let mut b = Builder::new();
    let bias_cell = b.cell("bias");
    debug_assert_eq!(bias_cell, 0);
    let input = input_phase(&mut b, sm.input_code);
    let advice = advice_register(&mut b, &wiring);

    // Which (stack, op) pairs occur, including initial loads.
    let mut used: Vec<BTreeSet<StackOpKind>> = vec![BTreeSet::new(); p];
    for r in &sm.rules {
        for (k, op) in r.ops.iter().enumerate() {
            used[k].extend(StackOpKind::of(*op));
        }
    }
    for (k, reg) in sm.init.iter().enumerate() {
        if let Some(reg) = reg {
            used[k].insert(StackOpKind::Load(*reg));
        }
    }

    let registers = |reg: Register| -> Option<usize> {
        match reg {
            Register::Input => Some(input.register),
            Register::Advice => advice,
        }
    };
    let circuits: Vec<StackCircuit> = (0..p)
        .map(|k| {
            StackCircuit::attach(
                &mut b,
                &format!("stack.{}", sm.stacks[k]),
                &used[k],
                registers,
            )
        })
        .collect();

    let states: Vec<(usize, usize, usize)> = sm
        .states
        .iter()
        .map(|q| {
            (
                b.cell(format!("state.{q}")),
                b.cell(format!("state.{q}.copy")),
                b.cell(format!("state.{q}.next")),
            )
        })
        .collect();
    for &(x, x1, next) in &states {
        b.copy(x1, x);
        b.copy(x, next);
    }

    for (j, r) in sm.rules.iter().enumerate() {
        let sel = b.cell(format!("rule.{j}"));
        b.w(sel, states[r.state].1, int(1));
        let mut constant = 0i64;
        let mut guarded = 0i64;
        for (k, g) in r.guard.iter().enumerate() {
            if let Some(obs) = g {
                let (c, terms) = literal(*obs, circuits[k].top, circuits[k].nonempty);
                constant += c;
                guarded += 1;
                for (cell, wt) in terms {
                    b.w(sel, cell, int(wt));
                }
            }
        }
        b.bias(sel, int(constant - guarded));
        b.w(states[r.next].2, sel, int(1));
        for (k, op) in r.ops.iter().enumerate() {
            if let Some(kind) = StackOpKind::of(*op) {
                let gate = circuits[k].gate(kind);
                b.w(gate, sel, int(1));
            }
        }
    }

    // The start pulse acts as a selector for the initial loads.
    b.w(states[sm.start].2, input.start, int(1));
    for (k, reg) in sm.init.iter().enumerate() {
        if let Some(reg) = reg {
            let gate = circuits[k].gate(StackOpKind::Load(*reg));
            b.w(gate, input.start, int(1));
        }
    }

    let acc = states[sm.accept].0;
    let rej = states[sm.reject].0;
    b.cfg.add_out(0, acc, Rational::one());
    b.cfg.add_out(1, acc, Rational::one());
    b.cfg.add_out(1, rej, Rational::one());
    b.cfg.validate()?;
    let mut layout = b.layout;
    layout.constants = vec![
        ("step".into(), STEP),
        ("ramp".into(), RAMP),
        ("op".into(), OP),
    ];
    Ok(CompiledNetwork {
        cfg: b.cfg,
        layout,
        wiring,
    })
}
