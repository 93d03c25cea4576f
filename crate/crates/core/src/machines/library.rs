//! Machines shipped with the toolkit.

use super::format::{parse_stack_text, parse_tm_text};
use super::stack::StackMachineSpec;
use super::tm::{Move, Rule, TmSpec};
use crate::error::Result;

pub const EVEN_PARITY: &str = include_str!("../../machines/even_parity.tm");
pub const DYCK1: &str = include_str!("../../machines/dyck1.sm");
pub const ALWAYS_ACCEPT: &str = include_str!("../../machines/always_accept.sm");
pub const ADVICE_PARITY: &str = include_str!("../../machines/advice_parity.tm");
pub const ADVICE_INDEX: &str = include_str!("../../machines/advice_index.tm");
pub const INDEX_LOOKUP: &str = include_str!("../../machines/index_lookup.tm");
pub const FIRST_COIN: &str = include_str!("../../machines/first_coin.ptm");
pub const MAJORITY3_COINS: &str = include_str!("../../machines/majority3_coins.ptm");
pub const DET_ACCEPT: &str = include_str!("../../machines/det_accept.ptm");
pub const NOISY_ADVICE: &str = include_str!("../../machines/noisy_advice.ptm");

/// `(file name, text)` of every shipped machine.
pub const ALL: [(&str, &str); 10] = [
    ("even_parity.tm", EVEN_PARITY),
    ("dyck1.sm", DYCK1),
    ("always_accept.sm", ALWAYS_ACCEPT),
    ("advice_parity.tm", ADVICE_PARITY),
    ("advice_index.tm", ADVICE_INDEX),
    ("index_lookup.tm", INDEX_LOOKUP),
    ("first_coin.ptm", FIRST_COIN),
    ("majority3_coins.ptm", MAJORITY3_COINS),
    ("det_accept.ptm", DET_ACCEPT),
    ("noisy_advice.ptm", NOISY_ADVICE),
];

pub fn tm(text: &str) -> TmSpec {
    parse_tm_text(text).expect("shipped machine parses")
}

pub fn stack(text: &str) -> StackMachineSpec {
    parse_stack_text(text).expect("shipped machine parses")
}

/// Wraps an advice machine so that it runs on advice `1^k 0 a` as the
/// original runs on `a`: the advice head first skips the ones and the zero.
/// Assumes the wrapped machine never moves its advice head left of cell 0.
pub fn unpad_wrapper(m: &TmSpec) -> Result<TmSpec> {
    let skip = m.states.len();
    let mut states = m.states.clone();
    states.push("unpad".to_string());
    let mut rules = m.rules.clone();
    let unpad = |adv, next, adv_mv| Rule {
        coin: None,
        state: skip,
        read: None,
        adv: Some(adv),
        next,
        write: None,
        mv: Move::Stay,
        adv_mv,
    };
    use super::tm::Sym;
    rules.push(unpad(Sym::One, skip, Move::Right));
    rules.push(unpad(Sym::Zero, m.start, Move::Right));
    rules.push(unpad(Sym::Blank, m.reject, Move::Stay));
    TmSpec::new(
        format!("{}-unpadded", m.name),
        states,
        skip,
        m.accept,
        m.reject,
        true,
        m.probabilistic,
        rules,
    )
}
