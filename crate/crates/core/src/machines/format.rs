//! Text formats for machines.
//!
//! Turing machines (`tm`) and probabilistic ones (`ptm`):
//!
//! ```text
//! tm even-parity
//! states even odd acc rej
//! start even
//! accept acc
//! reject rej
//! advice no
//! # state read [adv] -> next write move [advmove]
//! even 1 -> odd * R
//! ```
//!
//! Symbols are `0`, `1`, `_` (blank) and `*` (any / keep). Rules of a `ptm`
//! may be prefixed by `@0` or `@1` to apply under that coin only. Advice
//! machines give the `adv` and `advmove` columns on every rule.
//!
//! Stack machines:
//!
//! ```text
//! stack dyck1
//! stacks input depth
//! states scan acc rej
//! start scan
//! accept acc
//! reject rej
//! input raw            # or: marked
//! init input input     # stack, register (input | advice)
//! # state guard-per-stack -> next op-per-stack
//! scan 0 * -> scan pop push1
//! ```
//!
//! Guards are `0`, `1`, `e` (empty) or `*`; ops are `nop`, `pop`, `push0`,
//! `push1`, `clear`, `input`, `advice`.

use std::collections::HashMap;

use super::stack::{InputCode, Obs, Register, StackMachineSpec, StackOp, StackRule};
use super::tm::{Move, Rule, Sym, TmSpec};
use crate::error::{Error, Result};

pub enum MachineFile {
    Tm(TmSpec),
    Stack(StackMachineSpec),
}

impl MachineFile {
    pub fn name(&self) -> &str {
        match self {
            MachineFile::Tm(m) => &m.name,
            MachineFile::Stack(m) => &m.name,
        }
    }
}

struct Header {
    kind: String,
    name: String,
    states: Vec<String>,
    fields: HashMap<String, (usize, Vec<String>)>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            (
                i + 1,
                l.split('#')
                    .next()
                    .unwrap_or("")
                    .split_whitespace()
                    .collect::<Vec<_>>(),
            )
        })
        .filter(|(_, t)| !t.is_empty())
}

const HEADER_KEYS: [&str; 8] = [
    "states", "start", "accept", "reject", "advice", "stacks", "input", "init",
];

fn split(text: &str) -> Result<(Header, Vec<(usize, Vec<&str>)>)> {
    let mut it = lines(text);
    let (n, first) = it
        .next()
        .ok_or_else(|| Error::parse(1, "empty machine file"))?;
    if first.len() != 2 || !["tm", "ptm", "stack"].contains(&first[0]) {
        return Err(Error::parse(
            n,
            "expected `tm <name>`, `ptm <name>` or `stack <name>`",
        ));
    }
    let mut header = Header {
        kind: first[0].to_string(),
        name: first[1].to_string(),
        states: Vec::new(),
        fields: HashMap::new(),
    };
    let mut body = Vec::new();
    for (n, toks) in it {
        if HEADER_KEYS.contains(&toks[0]) && !toks.contains(&"->") {
            let vals: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
            if toks[0] == "states" {
                header.states = vals.clone();
            }
            if toks[0] == "init" {
                let entry = header
                    .fields
                    .entry(format!("init:{}", header.fields.len()))
                    .or_default();
                *entry = (n, vals);
                continue;
            }
            if header
                .fields
                .insert(toks[0].to_string(), (n, vals))
                .is_some()
            {
                return Err(Error::parse(n, format!("duplicate `{}` line", toks[0])));
            }
        } else {
            body.push((n, toks));
        }
    }
    Ok((header, body))
}

impl Header {
    fn state(&self, n: usize, s: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| Error::parse(n, format!("unknown state {s:?}")))
    }

    fn single(&self, key: &str) -> Result<(usize, &str)> {
        match self.fields.get(key) {
            Some((n, v)) if v.len() == 1 => Ok((*n, v[0].as_str())),
            Some((n, _)) => Err(Error::parse(*n, format!("`{key}` takes one value"))),
            None => Err(Error::parse(1, format!("missing `{key}` line"))),
        }
    }

    fn named_state(&self, key: &str) -> Result<usize> {
        let (n, s) = self.single(key)?;
        self.state(n, s)
    }
}

fn sym(n: usize, t: &str) -> Result<Option<Sym>> {
    match t {
        "0" => Ok(Some(Sym::Zero)),
        "1" => Ok(Some(Sym::One)),
        "_" => Ok(Some(Sym::Blank)),
        "*" => Ok(None),
        _ => Err(Error::parse(n, format!("bad tape symbol {t:?}"))),
    }
}

fn mv(n: usize, t: &str) -> Result<Move> {
    match t {
        "L" => Ok(Move::Left),
        "R" => Ok(Move::Right),
        "S" => Ok(Move::Stay),
        _ => Err(Error::parse(n, format!("bad move {t:?}"))),
    }
}

fn parse_tm(h: Header, body: Vec<(usize, Vec<&str>)>) -> Result<TmSpec> {
    let probabilistic = h.kind == "ptm";
    let advice = match h.single("advice")?.1 {
        "yes" => true,
        "no" => false,
        _ => {
            return Err(Error::parse(
                h.fields["advice"].0,
                "advice must be yes or no",
            ))
        }
    };
    let mut rules = Vec::new();
    for (n, mut toks) in body {
        let coin = match toks[0] {
            "@0" => Some(false),
            "@1" => Some(true),
            _ => None,
        };
        if coin.is_some() {
            if !probabilistic {
                return Err(Error::parse(n, "coin prefix in a deterministic machine"));
            }
            toks.remove(0);
        }
        let arrow = toks
            .iter()
            .position(|t| *t == "->")
            .ok_or_else(|| Error::parse(n, "missing `->`"))?;
        let (lhs, rhs) = (&toks[..arrow], &toks[arrow + 1..]);
        let want = if advice { (3, 4) } else { (2, 3) };
        if (lhs.len(), rhs.len()) != want {
            return Err(Error::parse(
                n,
                format!(
                    "expected {} symbols before and {} after `->`",
                    want.0, want.1
                ),
            ));
        }
        rules.push(Rule {
            coin,
            state: h.state(n, lhs[0])?,
            read: sym(n, lhs[1])?,
            adv: if advice { sym(n, lhs[2])? } else { None },
            next: h.state(n, rhs[0])?,
            write: sym(n, rhs[1])?,
            mv: mv(n, rhs[2])?,
            adv_mv: if advice { mv(n, rhs[3])? } else { Move::Stay },
        });
    }
    TmSpec::new(
        h.name.clone(),
        h.states.clone(),
        h.named_state("start")?,
        h.named_state("accept")?,
        h.named_state("reject")?,
        advice,
        probabilistic,
        rules,
    )
}

fn parse_stack(h: Header, body: Vec<(usize, Vec<&str>)>) -> Result<StackMachineSpec> {
    let (sn, stacks) = h
        .fields
        .get("stacks")
        .cloned()
        .ok_or_else(|| Error::parse(1, "missing `stacks` line"))?;
    if stacks.is_empty() {
        return Err(Error::parse(sn, "no stacks declared"));
    }
    let p = stacks.len();
    let input_code = match h.single("input")? {
        (_, "raw") => InputCode::Raw,
        (_, "marked") => InputCode::Marked,
        (n, _) => return Err(Error::parse(n, "input must be raw or marked")),
    };
    let mut init = vec![None; p];
    let mut inits: Vec<&(usize, Vec<String>)> = h
        .fields
        .iter()
        .filter(|(k, _)| k.starts_with("init:"))
        .map(|(_, v)| v)
        .collect();
    inits.sort_by_key(|(n, _)| *n);
    for (n, vals) in inits {
        if vals.len() != 2 {
            return Err(Error::parse(*n, "init takes a stack and a register"));
        }
        let k = stacks
            .iter()
            .position(|s| *s == vals[0])
            .ok_or_else(|| Error::parse(*n, "unknown stack"))?;
        init[k] = Some(match vals[1].as_str() {
            "input" => Register::Input,
            "advice" => Register::Advice,
            _ => return Err(Error::parse(*n, "register must be input or advice")),
        });
    }
    let mut rules = Vec::new();
    for (n, toks) in body {
        if toks.len() != 2 * p + 3 || toks[p + 1] != "->" {
            return Err(Error::parse(
                n,
                format!("expected state, {p} guards, ->, next, {p} ops"),
            ));
        }
        let guard = toks[1..=p]
            .iter()
            .map(|t| match *t {
                "0" => Ok(Some(Obs::Top(false))),
                "1" => Ok(Some(Obs::Top(true))),
                "e" => Ok(Some(Obs::Empty)),
                "*" => Ok(None),
                _ => Err(Error::parse(n, format!("bad guard {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let ops = toks[p + 3..]
            .iter()
            .map(|t| match *t {
                "nop" => Ok(StackOp::Noop),
                "pop" => Ok(StackOp::Pop),
                "push0" => Ok(StackOp::Push(false)),
                "push1" => Ok(StackOp::Push(true)),
                "clear" => Ok(StackOp::Clear),
                "input" => Ok(StackOp::Load(Register::Input)),
                "advice" => Ok(StackOp::Load(Register::Advice)),
                _ => Err(Error::parse(n, format!("bad op {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rules.push(StackRule {
            state: h.state(n, toks[0])?,
            guard,
            next: h.state(n, toks[p + 2])?,
            ops,
        });
    }
    let sm = StackMachineSpec {
        name: h.name.clone(),
        states: h.states.clone(),
        stacks,
        start: h.named_state("start")?,
        accept: h.named_state("accept")?,
        reject: h.named_state("reject")?,
        input_code,
        init,
        rules,
    };
    sm.validate()?;
    Ok(sm)
}

pub fn parse_machine(text: &str) -> Result<MachineFile> {
    let (h, body) = split(text)?;
    if h.states.is_empty() {
        return Err(Error::parse(1, "missing `states` line"));
    }
    match h.kind.as_str() {
        "stack" => parse_stack(h, body).map(MachineFile::Stack),
        _ => parse_tm(h, body).map(MachineFile::Tm),
    }
}

pub fn parse_tm_text(text: &str) -> Result<TmSpec> {
    match parse_machine(text)? {
        MachineFile::Tm(m) => Ok(m),
        MachineFile::Stack(m) => Err(Error::Invalid(format!("{} is a stack machine", m.name))),
    }
}

pub fn parse_stack_text(text: &str) -> Result<StackMachineSpec> {
    match parse_machine(text)? {
        MachineFile::Stack(m) => Ok(m),
        MachineFile::Tm(m) => Err(Error::Invalid(format!("{} is a Turing machine", m.name))),
    }
}
