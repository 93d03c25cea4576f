//! Deterministic p-stack machines observing the top symbol and emptiness of
//! each stack.

use super::tm::AdviceTape;
use crate::encodings::{BitStream, BitWord};
use crate::error::{Error, Result};
use crate::rnn::Decision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obs {
    Empty,
    Top(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Register {
    Input,
    Advice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StackOp {
    Noop,
    Pop,
    Push(bool),
    Clear,
    /// Replace the stack content with a register's word.
    Load(Register),
}

/// How the input word is laid out when loaded onto a stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputCode {
    /// `w_0 w_1 ...` with `w_0` on top.
    Raw,
    /// Each bit `b` becomes the pair `1 b`, marker on top.
    Marked,
}

impl InputCode {
    pub fn encode(self, w: &BitWord) -> BitWord {
        match self {
            InputCode::Raw => w.clone(),
            InputCode::Marked => w.iter().flat_map(|b| [true, b]).collect(),
        }
    }
}

/// A guard entry of `None` does not observe that stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackRule {
    pub state: usize,
    pub guard: Vec<Option<Obs>>,
    pub next: usize,
    pub ops: Vec<StackOp>,
}

#[derive(Clone, Debug)]
pub struct StackMachineSpec {
    pub name: String,
    pub states: Vec<String>,
    pub stacks: Vec<String>,
    pub start: usize,
    pub accept: usize,
    pub reject: usize,
    pub input_code: InputCode,
    /// Register loaded onto each stack before the first step.
    pub init: Vec<Option<Register>>,
    pub rules: Vec<StackRule>,
}

fn compatible(a: &[Option<Obs>], b: &[Option<Obs>]) -> bool {
    a.iter().zip(b).all(|(x, y)| match (x, y) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    })
}

impl StackMachineSpec {
    /// Checks dimensions and that no two rules of a state can fire together.
    pub fn validate(&self) -> Result<()> {
        let p = self.stacks.len();
        let n = self.states.len();
        let bad = |m: String| Err(Error::Compile(format!("{}: {m}", self.name)));
        if p == 0 {
            return bad("at least one stack required".into());
        }
        if [self.start, self.accept, self.reject]
            .iter()
            .any(|&s| s >= n)
            || self.accept == self.reject
        {
            return bad("start/accept/reject states out of range or coincide".into());
        }
        if self.init.len() != p {
            return bad("init list must name every stack".into());
        }
        for (i, r) in self.rules.iter().enumerate() {
            if r.state >= n || r.next >= n {
                return bad(format!("rule {i} references an unknown state"));
            }
            if r.guard.len() != p || r.ops.len() != p {
                return bad(format!("rule {i} must observe and act on {p} stacks"));
            }
            if r.state == self.accept || r.state == self.reject {
                return bad(format!("rule {i} leaves a halting state"));
            }
        }
        for (i, a) in self.rules.iter().enumerate() {
            for (j, b) in self.rules.iter().enumerate().skip(i + 1) {
                if a.state == b.state && compatible(&a.guard, &b.guard) {
                    return bad(format!(
                        "rules {i} and {j} overlap in state {}",
                        self.states[a.state]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn uses_register(&self, reg: Register) -> bool {
        self.init.contains(&Some(reg))
            || self
                .rules
                .iter()
                .any(|r| r.ops.contains(&StackOp::Load(reg)))
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

/// Content of the advice register over the course of a run.
#[derive(Clone, Debug)]
pub enum AdviceSource {
    None,
    Word(BitWord),
    Stream(BitStream),
    /// A growing prefix of a stream, first symbol on top: at step `s` (init
    /// is `s = -1`) the register holds the first `base + per_step * (s + 1)`
    /// symbols.
    Arriving {
        stream: BitStream,
        base: usize,
        per_step: usize,
    },
}

impl From<AdviceTape> for AdviceSource {
    fn from(t: AdviceTape) -> Self {
        match t {
            AdviceTape::Finite(w) => AdviceSource::Word(w),
            AdviceTape::Stream(s) => AdviceSource::Stream(s),
        }
    }
}

/// Stack with an optional lazily read infinite part below the explicit items.
#[derive(Clone, Debug, Default)]
pub struct Stack {
    /// Top is the last element.
    items: Vec<bool>,
    tail: Option<(BitStream, usize)>,
}

impl Stack {
    pub fn from_word(w: &BitWord) -> Self {
        Stack {
            items: w.iter().rev().collect(),
            tail: None,
        }
    }

    pub fn from_stream(s: &BitStream) -> Self {
        Stack {
            items: Vec::new(),
            tail: Some((s.clone(), 0)),
        }
    }

    pub fn observe(&self) -> Obs {
        match (self.items.last(), &self.tail) {
            (Some(&b), _) => Obs::Top(b),
            (None, Some((s, i))) => Obs::Top(s.bit(*i)),
            (None, None) => Obs::Empty,
        }
    }

    pub fn pop(&mut self) {
        if self.items.pop().is_none() {
            if let Some((_, i)) = &mut self.tail {
                *i += 1;
            }
        }
    }

    pub fn push(&mut self, b: bool) {
        self.items.push(b);
    }

    /// Finite content, top first; `None` for stacks with an infinite part.
    pub fn word(&self) -> Option<BitWord> {
        match self.tail {
            None => Some(self.items.iter().rev().copied().collect()),
            Some(_) => None,
        }
    }
}

/// Interpreter state exposed for step-by-step comparison.
#[derive(Clone, Debug)]
pub struct StackRun<'a> {
    pub m: &'a StackMachineSpec,
    pub state: usize,
    pub stacks: Vec<Stack>,
    pub steps: u64,
    input: BitWord,
    advice: AdviceSource,
}

impl<'a> StackRun<'a> {
    pub fn new(m: &'a StackMachineSpec, w: &BitWord, advice: AdviceSource) -> Result<Self> {
        let mut run = StackRun {
            m,
            state: m.start,
            stacks: vec![Stack::default(); m.stacks.len()],
            steps: 0,
            input: m.input_code.encode(w),
            advice,
        };
        for (k, reg) in m.init.iter().enumerate() {
            if let Some(reg) = reg {
                run.stacks[k] = run.load(*reg, -1)?;
            }
        }
        Ok(run)
    }

    fn load(&self, reg: Register, step: i64) -> Result<Stack> {
        match reg {
            Register::Input => Ok(Stack::from_word(&self.input)),
            Register::Advice => match &self.advice {
                AdviceSource::None => Err(Error::Invalid(format!(
                    "{} loads advice but none is supplied",
                    self.m.name
                ))),
                AdviceSource::Word(w) => Ok(Stack::from_word(w)),
                AdviceSource::Stream(s) => Ok(Stack::from_stream(s)),
                AdviceSource::Arriving {
                    stream,
                    base,
                    per_step,
                } => Ok(Stack::from_word(
                    &stream.prefix(base + per_step * (step + 1) as usize),
                )),
            },
        }
    }

    pub fn decision(&self) -> Option<Decision> {
        if self.state == self.m.accept {
            Some(Decision::Accept(self.steps))
        } else if self.state == self.m.reject {
            Some(Decision::Reject(self.steps))
        } else {
            None
        }
    }

    /// Index of the rule that fires next.
    pub fn enabled(&self) -> Result<usize> {
        let obs: Vec<Obs> = self.stacks.iter().map(Stack::observe).collect();
        self.m
            .rules
            .iter()
            .position(|r| {
                r.state == self.state
                    && r.guard
                        .iter()
                        .zip(&obs)
                        .all(|(g, o)| g.is_none_or(|g| g == *o))
            })
            .ok_or_else(|| Error::Stuck {
                state: self.m.states[self.state].clone(),
            })
    }

    pub fn step(&mut self) -> Result<usize> {
        let idx = self.enabled()?;
        let rule = &self.m.rules[idx];
        for (k, op) in rule.ops.iter().enumerate() {
            match op {
                StackOp::Noop => {}
                StackOp::Pop => self.stacks[k].pop(),
                StackOp::Push(b) => self.stacks[k].push(*b),
                StackOp::Clear => self.stacks[k] = Stack::default(),
                StackOp::Load(reg) => self.stacks[k] = self.load(*reg, self.steps as i64)?,
            }
        }
        self.state = rule.next;
        self.steps += 1;
        Ok(idx)
    }

    pub fn run(mut self, bound: u64) -> Result<Decision> {
        loop {
            if let Some(d) = self.decision() {
                return Ok(d);
            }
            if self.steps >= bound {
                return Ok(Decision::Timeout);
            }
            self.step()?;
        }
    }
}

pub fn stack_run(
    m: &StackMachineSpec,
    w: &BitWord,
    advice: AdviceSource,
    bound: u64,
) -> Result<Decision> {
    StackRun::new(m, w, advice)?.run(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::library::{self, stack};

    fn balanced(w: &BitWord) -> bool {
        let mut depth = 0i64;
        for b in w.iter() {
            depth += if b { -1 } else { 1 };
            if depth < 0 {
                return false;
            }
        }
        depth == 0
    }

    #[test]
    fn dyck1_matches_counter() {
        let m = stack(library::DYCK1);
        for n in 0..=10 {
            for w in BitWord::all_of_length(n) {
                let d = stack_run(&m, &w, AdviceSource::None, 1000).unwrap();
                assert_eq!(d.accepted(), Some(balanced(&w)), "{w}");
            }
        }
    }

    #[test]
    fn always_accept_takes_one_step() {
        let m = stack(library::ALWAYS_ACCEPT);
        assert_eq!(
            stack_run(&m, &BitWord::new(), AdviceSource::None, 5).unwrap(),
            Decision::Accept(1)
        );
    }

    #[test]
    fn arriving_advice_grows_per_step() {
        let text = "stack grow\nstacks a\nstates s t acc rej\nstart s\naccept acc\nreject rej\ninput raw\n\
                    init a advice\ns * -> t advice\nt * -> acc nop\n";
        let m = crate::machines::parse_stack_text(text).unwrap();
        let src = AdviceSource::Arriving {
            stream: BitStream::constant(true),
            base: 1,
            per_step: 2,
        };
        let mut run = StackRun::new(&m, &BitWord::new(), src).unwrap();
        assert_eq!(run.stacks[0].word().unwrap().len(), 1);
        run.step().unwrap();
        assert_eq!(run.stacks[0].word().unwrap().len(), 3);
        let src = AdviceSource::Arriving {
            stream: "word:0111".parse().unwrap(),
            base: 2,
            per_step: 1,
        };
        let run = StackRun::new(&m, &BitWord::new(), src).unwrap();
        assert_eq!(run.stacks[0].word().unwrap(), BitWord::from("01"));
    }

    #[test]
    fn overlapping_guards_fail_validation() {
        let text =
            "stack bad\nstacks a\nstates s acc rej\nstart s\naccept acc\nreject rej\ninput raw\n\
                    s * -> acc nop\ns 1 -> rej nop\n";
        assert!(matches!(
            crate::machines::parse_stack_text(text),
            Err(Error::Compile(_))
        ));
    }

    #[test]
    fn stream_stacks_never_empty() {
        let mut s = Stack::from_stream(&BitStream::thue_morse());
        for i in 0..20 {
            assert_eq!(s.observe(), Obs::Top(BitStream::thue_morse().bit(i)));
            s.pop();
        }
        assert!(s.word().is_none());
    }
}
