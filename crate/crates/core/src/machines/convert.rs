//! Turing machine to stack machine translation.
//!
//! The tape left of the head lives on stack `left` (nearest cell on top), the
//! head cell and everything right of it on stack `right`. Each cell occupies
//! two stack symbols, marker on top: blank = `00`, 0 = `10`, 1 = `11`. The
//! input is loaded already paired (`InputCode::Marked`). With an advice tape,
//! stacks `adv_l` and `adv_r` split the advice tape the same way, one symbol
//! per cell; an exhausted `adv_r` reads as blank.
//!
//! Every machine step costs at most [`STEPS_PER_TM_STEP`] stack steps.

use std::collections::HashMap;

use super::stack::{InputCode, Obs, Register, StackMachineSpec, StackOp, StackRule};
use super::tm::{Move, Sym, TmSpec};
use crate::error::{Error, Result};

pub const STEPS_PER_TM_STEP: u64 = 7;

pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
pub const ADV_L: usize = 2;
pub const ADV_R: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Read(usize),
    ReadBit(usize),
    ReadBlank(usize),
    Write {
        sym: Sym,
        mv: Move,
        adv_mv: Move,
        next: usize,
        stage: u8,
    },
    Fetch {
        next: usize,
    },
    FetchBlank {
        next: usize,
    },
    FetchBit {
        next: usize,
        marker: bool,
    },
    FetchMarker {
        next: usize,
        marker: bool,
    },
}

fn code(s: Sym) -> (bool, bool) {
    match s {
        Sym::Blank => (false, false),
        Sym::Zero => (true, false),
        Sym::One => (true, true),
    }
}

fn mv_name(m: Move) -> &'static str {
    match m {
        Move::Left => "L",
        Move::Right => "R",
        Move::Stay => "S",
    }
}

struct Builder<'a> {
    tm: &'a TmSpec,
    p: usize,
    states: Vec<String>,
    index: HashMap<Node, usize>,
    pending: Vec<Node>,
    rules: Vec<StackRule>,
    accept: usize,
    reject: usize,
}

impl<'a> Builder<'a> {
    fn node(&mut self, n: Node) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        let tm = self.tm;
        let name = match n {
            Node::Read(q) => format!("{}.read", tm.states[q]),
            Node::ReadBit(q) => format!("{}.bit", tm.states[q]),
            Node::ReadBlank(q) => format!("{}.blank", tm.states[q]),
            Node::Write {
                sym,
                mv,
                adv_mv,
                next,
                stage,
            } => {
                let s = match sym {
                    Sym::Zero => "0",
                    Sym::One => "1",
                    Sym::Blank => "_",
                };
                format!(
                    "write{s}{}{}>{}.{stage}",
                    mv_name(mv),
                    mv_name(adv_mv),
                    tm.states[next]
                )
            }
            Node::Fetch { next } => format!("fetch>{}", tm.states[next]),
            Node::FetchBlank { next } => format!("fetch_blank>{}", tm.states[next]),
            Node::FetchBit { next, marker } => {
                format!("fetch_bit{}>{}", marker as u8, tm.states[next])
            }
            Node::FetchMarker { next, marker } => {
                format!("fetch_marker{}>{}", marker as u8, tm.states[next])
            }
        };
        let i = self.states.len();
        self.states.push(name);
        self.index.insert(n, i);
        self.pending.push(n);
        i
    }

    /// Target of entering machine state `q`.
    fn enter(&mut self, q: usize) -> usize {
        if q == self.tm.accept {
            self.accept
        } else if q == self.tm.reject {
            self.reject
        } else {
            self.node(Node::Read(q))
        }
    }

    fn rule(&mut self, from: usize, guard: &[(usize, Obs)], ops: &[(usize, StackOp)], next: usize) {
        let mut g = vec![None; self.p];
        for (k, o) in guard {
            g[*k] = Some(*o);
        }
        let mut o = vec![StackOp::Noop; self.p];
        for (k, op) in ops {
            o[*k] = *op;
        }
        self.rules.push(StackRule {
            state: from,
            guard: g,
            next,
            ops: o,
        });
    }

    /// Rules for the step in which the head symbol `read` becomes known.
    fn resolve(
        &mut self,
        from: usize,
        q: usize,
        read: Sym,
        guard: &[(usize, Obs)],
        ops: &[(usize, StackOp)],
    ) {
        let tm = self.tm;
        let variants: Vec<(Option<Obs>, Sym)> = if tm.advice && tm.reads_advice(q, read) {
            vec![
                (Some(Obs::Top(false)), Sym::Zero),
                (Some(Obs::Top(true)), Sym::One),
                (Some(Obs::Empty), Sym::Blank),
            ]
        } else {
            vec![(None, Sym::Zero)]
        };
        for (obs, adv) in variants {
            let Some(ri) = tm.lookup(q, read, adv, false) else {
                continue;
            };
            let r = &tm.rules[ri];
            let target = if tm.is_halting(r.next) {
                self.enter(r.next)
            } else {
                let sym = r.write.unwrap_or(read);
                self.node(Node::Write {
                    sym,
                    mv: r.mv,
                    adv_mv: r.adv_mv,
                    next: r.next,
                    stage: 0,
                })
            };
            let mut g = guard.to_vec();
            if let Some(o) = obs {
                g.push((ADV_R, o));
            }
            self.rule(from, &g, ops, target);
        }
    }

    fn expand(&mut self, n: Node) {
        let from = self.index[&n];
        let pop = StackOp::Pop;
        match n {
            Node::Read(q) => {
                self.resolve(from, q, Sym::Blank, &[(RIGHT, Obs::Empty)], &[]);
                let bit = self.node(Node::ReadBit(q));
                self.rule(from, &[(RIGHT, Obs::Top(true))], &[(RIGHT, pop)], bit);
                let blank = self.node(Node::ReadBlank(q));
                self.rule(from, &[(RIGHT, Obs::Top(false))], &[(RIGHT, pop)], blank);
            }
            Node::ReadBit(q) => {
                for v in [false, true] {
                    self.resolve(
                        from,
                        q,
                        Sym::bit(v),
                        &[(RIGHT, Obs::Top(v))],
                        &[(RIGHT, pop)],
                    );
                }
            }
            Node::ReadBlank(q) => {
                self.resolve(
                    from,
                    q,
                    Sym::Blank,
                    &[(RIGHT, Obs::Top(false))],
                    &[(RIGHT, pop)],
                );
            }
            Node::Write {
                sym,
                mv,
                adv_mv,
                next,
                stage,
            } => {
                let target = if mv == Move::Right { LEFT } else { RIGHT };
                let (marker, value) = code(sym);
                if stage == 0 {
                    let to = self.node(Node::Write {
                        sym,
                        mv,
                        adv_mv,
                        next,
                        stage: 1,
                    });
                    let push = (target, StackOp::Push(value));
                    match adv_mv {
                        Move::Stay => self.rule(from, &[], &[push], to),
                        Move::Right | Move::Left => {
                            let (src, dst) = if adv_mv == Move::Right {
                                (ADV_R, ADV_L)
                            } else {
                                (ADV_L, ADV_R)
                            };
                            for c in [false, true] {
                                self.rule(
                                    from,
                                    &[(src, Obs::Top(c))],
                                    &[push, (src, pop), (dst, StackOp::Push(c))],
                                    to,
                                );
                            }
                            self.rule(from, &[(src, Obs::Empty)], &[push], to);
                        }
                    }
                } else {
                    let to = if mv == Move::Left {
                        self.node(Node::Fetch { next })
                    } else {
                        self.enter(next)
                    };
                    self.rule(from, &[], &[(target, StackOp::Push(marker))], to);
                }
            }
            Node::Fetch { next } => {
                let blank = self.node(Node::FetchBlank { next });
                self.rule(
                    from,
                    &[(LEFT, Obs::Empty)],
                    &[(RIGHT, StackOp::Push(false))],
                    blank,
                );
                for m in [false, true] {
                    let to = self.node(Node::FetchBit { next, marker: m });
                    self.rule(from, &[(LEFT, Obs::Top(m))], &[(LEFT, pop)], to);
                }
            }
            Node::FetchBlank { next } => {
                let to = self.enter(next);
                self.rule(from, &[], &[(RIGHT, StackOp::Push(false))], to);
            }
            Node::FetchBit { next, marker } => {
                let to = self.node(Node::FetchMarker { next, marker });
                for v in [false, true] {
                    self.rule(
                        from,
                        &[(LEFT, Obs::Top(v))],
                        &[(LEFT, pop), (RIGHT, StackOp::Push(v))],
                        to,
                    );
                }
            }
            Node::FetchMarker { next, marker } => {
                let to = self.enter(next);
                self.rule(from, &[], &[(RIGHT, StackOp::Push(marker))], to);
            }
        }
    }
}

pub fn tm_to_stack(tm: &TmSpec) -> Result<StackMachineSpec> {
    if tm.probabilistic {
        return Err(Error::Invalid(format!(
            "{}: probabilistic machines are not translated",
            tm.name
        )));
    }
    let p = if tm.advice { 4 } else { 2 };
    let mut b = Builder {
        tm,
        p,
        states: vec![
            format!("{}.accept", tm.states[tm.accept]),
            format!("{}.reject", tm.states[tm.reject]),
        ],
        index: HashMap::new(),
        pending: Vec::new(),
        rules: Vec::new(),
        accept: 0,
        reject: 1,
    };
    let start = b.enter(tm.start);
    while let Some(n) = b.pending.pop() {
        b.expand(n);
    }
    let mut stacks = vec!["left".to_string(), "right".to_string()];
    let mut init = vec![None, Some(Register::Input)];
    if tm.advice {
        stacks.extend(["adv_l".to_string(), "adv_r".to_string()]);
        init.extend([None, Some(Register::Advice)]);
    }
    let sm = StackMachineSpec {
        name: format!("{}-stack", tm.name),
        states: b.states,
        stacks,
        start,
        accept: b.accept,
        reject: b.reject,
        input_code: InputCode::Marked,
        init,
        rules: b.rules,
    };
    sm.validate()?;
    Ok(sm)
}
