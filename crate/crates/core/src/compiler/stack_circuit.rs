//! Per-stack cells: content, top and nonempty readouts, delay copies, and one
//! gated cell per operation the machine uses on that stack.

use std::collections::{BTreeMap, BTreeSet};

use super::{Builder, Layout, OP};
use crate::encodings::{int, rat, Rational};
use crate::machines::stack::{Register, StackOp};
use crate::rnn::RnnConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StackOpKind {
    Noop,
    Push(bool),
    Pop,
    Load(Register),
}

impl StackOpKind {
    /// `None` for `Clear`, which needs no cell: the content simply gets no
    /// contribution.
    pub fn of(op: StackOp) -> Option<StackOpKind> {
        match op {
            StackOp::Noop => Some(StackOpKind::Noop),
            StackOp::Push(b) => Some(StackOpKind::Push(b)),
            StackOp::Pop => Some(StackOpKind::Pop),
            StackOp::Clear => None,
            StackOp::Load(r) => Some(StackOpKind::Load(r)),
        }
    }

    fn name(self) -> String {
        match self {
            StackOpKind::Noop => "noop".into(),
            StackOpKind::Push(b) => format!("push{}", b as u8),
            StackOpKind::Pop => "pop".into(),
            StackOpKind::Load(Register::Input) => "load_input".into(),
            StackOpKind::Load(Register::Advice) => "load_advice".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StackCircuit {
    pub content: usize,
    pub top: usize,
    pub nonempty: usize,
    pub gates: BTreeMap<StackOpKind, usize>,
}

impl StackCircuit {
    /// Adds the cells of one stack. A gate cell fires its operation when it
    /// receives a total control input of exactly 1 two steps after the
    /// content was valid; the result lands in `content` one step later.
    pub(crate) fn attach(
        b: &mut Builder,
        prefix: &str,
        ops: &BTreeSet<StackOpKind>,
        register: impl Fn(Register) -> Option<usize>,
    ) -> StackCircuit {
        let content = b.cell(format!("{prefix}.content"));
        let top = b.cell(format!("{prefix}.top"));
        let nonempty = b.cell(format!("{prefix}.nonempty"));
        let copy1 = b.cell(format!("{prefix}.copy1"));
        let copy2 = b.cell(format!("{prefix}.copy2"));
        let top1 = b.cell(format!("{prefix}.top1"));
        b.w(top, content, int(4));
        b.bias(top, int(-2));
        b.w(nonempty, content, int(4));
        b.copy(copy1, content);
        b.copy(copy2, copy1);
        b.copy(top1, top);
        let mut gates = BTreeMap::new();
        for &kind in ops {
            let g = b.cell(format!("{prefix}.{}", kind.name()));
            // affine operation result, then shifted down by 1 so that only a
            // control input of 1 lets it through
            match kind {
                StackOpKind::Noop => b.w(g, copy2, int(1)),
                StackOpKind::Push(bit) => {
                    b.w(g, copy2, rat(1, 4));
                    b.bias(g, rat(2 * bit as i64 + 1, 4));
                }
                StackOpKind::Pop => {
                    b.w(g, copy2, int(4));
                    b.w(g, top1, int(-2));
                    b.bias(g, int(-1));
                }
                StackOpKind::Load(reg) => {
                    let r = register(reg).expect("register wired for every load");
                    b.w(g, r, int(1));
                }
            }
            b.bias(g, int(-1));
            b.w(content, g, int(1));
            gates.insert(kind, g);
        }
        StackCircuit {
            content,
            top,
            nonempty,
            gates,
        }
    }

    pub fn gate(&self, kind: StackOpKind) -> usize {
        self.gates[&kind]
    }
}

/// Standalone single-stack template with every operation available.
///
/// Set `h0[content]` to an encoded word, `h0[register]` to the loadable
/// word, and `h0` of exactly one control cell to 1. After [`OP`] steps with
/// zero input, `content` holds the result; `top` and `nonempty` hold the
/// readouts of the initial content after one step.
#[derive(Clone, Debug)]
pub struct StackTemplate {
    pub cfg: RnnConfig,
    pub circuit: StackCircuit,
    pub register: usize,
    pub controls: BTreeMap<StackOpKind, usize>,
    pub layout: Layout,
}

impl StackTemplate {
    /// Runs the template on `content` with the operation `kind` selected
    /// (`None` selects nothing) and returns the readouts and final content.
    pub fn apply(
        &self,
        content: &Rational,
        register: &Rational,
        kind: Option<StackOpKind>,
    ) -> (Rational, Rational, Rational) {
        let mut cfg = self.cfg.clone();
        cfg.h0[self.circuit.content] = content.clone();
        cfg.h0[self.register] = register.clone();
        if let Some(k) = kind {
            cfg.h0[self.controls[&k]] = int(1);
        }
        let mut st = crate::rnn::NetworkState::initial(&cfg);
        let mut readouts = None;
        for _ in 0..OP {
            st = crate::rnn::step(&cfg, &st, (false, false))
                .expect("template outputs nothing")
                .0;
            readouts.get_or_insert_with(|| {
                (
                    st.h[self.circuit.top].clone(),
                    st.h[self.circuit.nonempty].clone(),
                )
            });
        }
        let (t, n) = readouts.expect("at least one step");
        (t, n, st.h[self.circuit.content].clone())
    }
}

pub fn build_stack_circuit() -> StackTemplate {
    let mut b = Builder::new();
    let register = b.cell("register");
    b.copy(register, register);
    let all: BTreeSet<StackOpKind> = [
        StackOpKind::Noop,
        StackOpKind::Push(false),
        StackOpKind::Push(true),
        StackOpKind::Pop,
        StackOpKind::Load(Register::Input),
    ]
    .into_iter()
    .collect();
    let circuit = StackCircuit::attach(&mut b, "stack", &all, |_| Some(register));
    let mut controls = BTreeMap::new();
    for (&kind, &gate) in &circuit.gates {
        let c0 = b.cell(format!("control.{}", kind.name()));
        let c1 = b.cell(format!("control.{}.delay1", kind.name()));
        let c2 = b.cell(format!("control.{}.delay2", kind.name()));
        b.copy(c1, c0);
        b.copy(c2, c1);
        b.w(gate, c2, int(1));
        controls.insert(kind, c0);
    }
    StackTemplate {
        cfg: b.cfg,
        circuit,
        register,
        controls,
        layout: b.layout,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{delta4, stack_empty, stack_pop, stack_push, stack_top, BitWord};
    use num_traits::Zero;

    #[test]
    fn template_examples() {
        let t = build_stack_circuit();
        let zero = Rational::zero();
        let (_, _, c) = t.apply(&delta4(&BitWord::from("01")), &zero, Some(StackOpKind::Pop));
        assert_eq!(c, rat(3, 4));
        let (_, n, _) = t.apply(&zero, &zero, None);
        assert_eq!(n, zero);
        let (top, _, _) = t.apply(&rat(253, 256), &zero, None);
        assert_eq!(top, int(1));
    }

    #[test]
    fn template_matches_stack_algebra_to_length_6() {
        let t = build_stack_circuit();
        let reg = delta4(&BitWord::from("110"));
        for n in 0..=6 {
            for w in BitWord::all_of_length(n) {
                let q = delta4(&w);
                for kind in t.controls.keys() {
                    let (top, nonempty, c) = t.apply(&q, &reg, Some(*kind));
                    assert_eq!(top, stack_top(&q));
                    assert_eq!(nonempty, stack_empty(&q));
                    let want = match kind {
                        StackOpKind::Noop => q.clone(),
                        StackOpKind::Push(b) => stack_push(&q, *b),
                        StackOpKind::Pop => stack_pop(&q),
                        StackOpKind::Load(_) => reg.clone(),
                    };
                    assert_eq!(c, want, "{kind:?} on {w}");
                }
                assert_eq!(t.apply(&q, &reg, None).2, Rational::zero());
            }
        }
    }
}
