//! Single-tape Turing machines with an optional read-only advice tape and an
//! optional pair of transition maps selected by fair coins.

use num_traits::{One, Zero};
use rand::Rng;

use super::advice::Advice;
use crate::encodings::{inv_pow, rat, BitStream, BitWord, Rational};
use crate::error::{Error, Result};
use crate::rnn::Decision;
use crate::seeding::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Zero,
    One,
    Blank,
}

impl Sym {
    pub const ALL: [Sym; 3] = [Sym::Zero, Sym::One, Sym::Blank];

    pub fn bit(b: bool) -> Sym {
        if b {
            Sym::One
        } else {
            Sym::Zero
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

/// `None` in `read`, `adv` or `coin` matches anything; `None` in `write` keeps
/// the symbol read. The most specific matching rule applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub coin: Option<bool>,
    pub state: usize,
    pub read: Option<Sym>,
    pub adv: Option<Sym>,
    pub next: usize,
    pub write: Option<Sym>,
    pub mv: Move,
    pub adv_mv: Move,
}

impl Rule {
    fn specificity(&self) -> (bool, bool, bool) {
        (self.read.is_some(), self.adv.is_some(), self.coin.is_some())
    }
}

#[derive(Clone, Debug)]
pub struct TmSpec {
    pub name: String,
    pub states: Vec<String>,
    pub start: usize,
    pub accept: usize,
    pub reject: usize,
    /// Has an advice tape.
    pub advice: bool,
    /// Consumes one fair coin per step.
    pub probabilistic: bool,
    pub rules: Vec<Rule>,
    table: Vec<Option<usize>>,
}

fn key(state: usize, read: Sym, adv: Sym, coin: bool) -> usize {
    ((state * 3 + read.index()) * 3 + adv.index()) * 2 + coin as usize
}

impl TmSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        start: usize,
        accept: usize,
        reject: usize,
        advice: bool,
        probabilistic: bool,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let name = name.into();
        let n = states.len();
        let bad = |m: String| Err(Error::Invalid(format!("machine {name}: {m}")));
        if [start, accept, reject].iter().any(|&s| s >= n) || accept == reject {
            return bad("start/accept/reject states out of range or coincide".into());
        }
        let mut table = vec![None; n * 18];
        for (idx, r) in rules.iter().enumerate() {
            if r.state >= n || r.next >= n {
                return bad(format!("rule {idx} references an unknown state"));
            }
            if r.state == accept || r.state == reject {
                return bad(format!("rule {idx} leaves a halting state"));
            }
            if r.coin.is_some() && !probabilistic {
                return bad(format!(
                    "rule {idx} is coin-specific in a deterministic machine"
                ));
            }
            if (r.adv.is_some() || r.adv_mv != Move::Stay) && !advice {
                return bad(format!("rule {idx} uses an advice tape the machine lacks"));
            }
        }
        for state in 0..n {
            for read in Sym::ALL {
                for adv in Sym::ALL {
                    for coin in [false, true] {
                        let matching: Vec<usize> = rules
                            .iter()
                            .enumerate()
                            .filter(|(_, r)| {
                                r.state == state
                                    && r.read.is_none_or(|s| s == read)
                                    && r.adv.is_none_or(|s| s == adv)
                                    && r.coin.is_none_or(|c| c == coin)
                            })
                            .map(|(i, _)| i)
                            .collect();
                        let best = matching.iter().map(|&i| rules[i].specificity()).max();
                        if let Some(best) = best {
                            let top: Vec<usize> = matching
                                .into_iter()
                                .filter(|&i| rules[i].specificity() == best)
                                .collect();
                            if top.len() > 1 {
                                return bad(format!(
                                    "rules {top:?} are equally specific for state {}",
                                    states[state]
                                ));
                            }
                            table[key(state, read, adv, coin)] = Some(top[0]);
                        }
                    }
                }
            }
        }
        Ok(TmSpec {
            name,
            states,
            start,
            accept,
            reject,
            advice,
            probabilistic,
            rules,
            table,
        })
    }

    pub fn lookup(&self, state: usize, read: Sym, adv: Sym, coin: bool) -> Option<usize> {
        self.table[key(state, read, adv, coin)]
    }

    /// Whether the applicable rule in `(state, read)` depends on the advice symbol.
    pub fn reads_advice(&self, state: usize, read: Sym) -> bool {
        let first = self.lookup(state, read, Sym::Zero, false);
        Sym::ALL
            .iter()
            .any(|&a| self.lookup(state, read, a, false) != first)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn is_halting(&self, state: usize) -> bool {
        state == self.accept || state == self.reject
    }
}

/// Contents of the advice tape: a finite word followed by blanks, or an
/// infinite binary sequence.
#[derive(Clone, Debug)]
pub enum AdviceTape {
    Finite(BitWord),
    Stream(BitStream),
}

impl AdviceTape {
    pub fn empty() -> Self {
        AdviceTape::Finite(BitWord::new())
    }

    pub fn sym(&self, i: usize) -> Sym {
        match self {
            AdviceTape::Finite(w) if i < w.len() => Sym::bit(w.bit(i)),
            AdviceTape::Finite(_) => Sym::Blank,
            AdviceTape::Stream(s) => Sym::bit(s.bit(i)),
        }
    }
}

/// Tape infinite in both directions; cells outside `cells` are blank.
#[derive(Clone, Debug)]
struct Tape {
    cells: Vec<Sym>,
    origin: i64,
}

impl Tape {
    fn with_input(w: &BitWord) -> Self {
        Tape {
            cells: w.iter().map(Sym::bit).collect(),
            origin: 0,
        }
    }

    fn get(&self, pos: i64) -> Sym {
        let i = pos + self.origin;
        if i < 0 || i as usize >= self.cells.len() {
            Sym::Blank
        } else {
            self.cells[i as usize]
        }
    }

    fn set(&mut self, pos: i64, s: Sym) {
        while pos + self.origin < 0 {
            self.cells.insert(0, Sym::Blank);
            self.origin += 1;
        }
        let i = (pos + self.origin) as usize;
        if i >= self.cells.len() {
            self.cells.resize(i + 1, Sym::Blank);
        }
        self.cells[i] = s;
    }
}

#[derive(Clone, Debug)]
struct Config {
    state: usize,
    tape: Tape,
    head: i64,
    adv_head: usize,
    steps: u64,
}

impl Config {
    fn new(m: &TmSpec, w: &BitWord) -> Self {
        Config {
            state: m.start,
            tape: Tape::with_input(w),
            head: 0,
            adv_head: 0,
            steps: 0,
        }
    }

    fn rule(&self, m: &TmSpec, adv: &AdviceTape, coin: bool) -> Result<usize> {
        let read = self.tape.get(self.head);
        let a = if m.advice {
            adv.sym(self.adv_head)
        } else {
            Sym::Blank
        };
        m.lookup(self.state, read, a, coin)
            .ok_or_else(|| Error::Stuck {
                state: m.states[self.state].clone(),
            })
    }

    fn apply(&mut self, m: &TmSpec, adv: &AdviceTape, rule: usize) {
        let r = &m.rules[rule];
        if let Some(s) = r.write {
            self.tape.set(self.head, s);
        }
        match r.mv {
            Move::Left => self.head -= 1,
            Move::Right => self.head += 1,
            Move::Stay => {}
        }
        match r.adv_mv {
            Move::Left => self.adv_head = self.adv_head.saturating_sub(1),
            Move::Right if adv.sym(self.adv_head) != Sym::Blank => self.adv_head += 1,
            _ => {}
        }
        self.state = r.next;
        self.steps += 1;
    }

    fn decision(&self, m: &TmSpec) -> Option<Decision> {
        if self.state == m.accept {
            Some(Decision::Accept(self.steps))
        } else if self.state == m.reject {
            Some(Decision::Reject(self.steps))
        } else {
            None
        }
    }
}

/// Runs with coin `coins(t)` at step `t`; deterministic machines ignore coins.
pub fn run_with(
    m: &TmSpec,
    adv: &AdviceTape,
    w: &BitWord,
    bound: u64,
    mut coins: impl FnMut(u64) -> bool,
) -> Result<Decision> {
    let mut c = Config::new(m, w);
    loop {
        if let Some(d) = c.decision(m) {
            return Ok(d);
        }
        if c.steps >= bound {
            return Ok(Decision::Timeout);
        }
        let coin = m.probabilistic && coins(c.steps);
        let r = c.rule(m, adv, coin)?;
        c.apply(m, adv, r);
    }
}

pub fn tm_run(m: &TmSpec, w: &BitWord, bound: u64) -> Result<Decision> {
    run_with(m, &AdviceTape::empty(), w, bound, |_| false)
}

/// Runs with the advice tape preloaded with `a(|w|)`.
pub fn tma_run(m: &TmSpec, a: &Advice, w: &BitWord, bound: u64) -> Result<Decision> {
    run_with(m, &AdviceTape::Finite(a.at(w.len())), w, bound, |_| false)
}

/// Runs against an infinite advice tape.
pub fn tma_run_stream(m: &TmSpec, r: &BitStream, w: &BitWord, bound: u64) -> Result<Decision> {
    run_with(m, &AdviceTape::Stream(r.clone()), w, bound, |_| false)
}

/// As [`tma_run`], additionally checking that advice for each of the longer
/// lengths in `others` yields the same verdict.
pub fn tma_run_checked(
    m: &TmSpec,
    a: &Advice,
    w: &BitWord,
    bound: u64,
    others: &[usize],
) -> Result<Decision> {
    let base = tma_run(m, a, w, bound)?;
    for &n2 in others.iter().filter(|&&n2| n2 >= w.len()) {
        let d = run_with(m, &AdviceTape::Finite(a.at(n2)), w, bound, |_| false)?;
        if !d.agrees(&base) {
            return Err(Error::ConsistencyViolation {
                n: w.len(),
                n_prime: n2,
                word: w.to_string(),
            });
        }
    }
    Ok(base)
}

/// Exact distribution of a probabilistic run.
#[derive(Clone, Debug, PartialEq)]
pub struct PtmOutcome {
    pub accept: Rational,
    pub reject: Rational,
    pub timeout: Rational,
    pub leaves: u64,
}

impl PtmOutcome {
    /// Accept iff Pr[accept] >= 2/3, reject iff Pr[reject] >= 2/3.
    pub fn decide(&self) -> Result<bool> {
        bpp_decide(&self.accept, &self.reject)
    }
}

pub fn bpp_decide(accept: &Rational, reject: &Rational) -> Result<bool> {
    let two_thirds = rat(2, 3);
    if *accept >= two_thirds {
        Ok(true)
    } else if *reject >= two_thirds {
        Ok(false)
    } else {
        Err(Error::BppViolation {
            probability: accept.to_string(),
        })
    }
}

/// Enumerates every coin sequence; steps where both maps agree do not branch.
pub fn ptm_run_exact(
    m: &TmSpec,
    adv: &AdviceTape,
    w: &BitWord,
    bound: u64,
    budget: u64,
) -> Result<PtmOutcome> {
    let mut out = PtmOutcome {
        accept: Rational::zero(),
        reject: Rational::zero(),
        timeout: Rational::zero(),
        leaves: 0,
    };
    let mut todo = vec![(Config::new(m, w), 0usize)];
    while let Some((mut c, mut depth)) = todo.pop() {
        loop {
            let slot = match c.decision(m) {
                Some(Decision::Accept(_)) => Some(&mut out.accept),
                Some(_) => Some(&mut out.reject),
                None if c.steps >= bound => Some(&mut out.timeout),
                None => None,
            };
            if let Some(slot) = slot {
                *slot += inv_pow(2, depth);
                out.leaves += 1;
                if out.leaves > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                break;
            }
            let r0 = c.rule(m, adv, false)?;
            let r1 = if m.probabilistic {
                c.rule(m, adv, true)?
            } else {
                r0
            };
            if r0 != r1 {
                let mut other = c.clone();
                other.apply(m, adv, r1);
                todo.push((other, depth + 1));
                depth += 1;
            }
            c.apply(m, adv, r0);
        }
    }
    debug_assert_eq!(&out.accept + &out.reject + &out.timeout, Rational::one());
    Ok(out)
}

/// Monte Carlo estimate with a normal-approximation 95% interval.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub accepts: u64,
    pub timeouts: u64,
    pub estimate: f64,
    pub ci: (f64, f64),
}

pub const Z95: f64 = 1.959_963_984_540_054;

impl McEstimate {
    pub fn from_counts(trials: u64, accepts: u64, timeouts: u64) -> Self {
        let p = accepts as f64 / trials as f64;
        let half = Z95 * (p * (1.0 - p) / trials as f64).sqrt();
        McEstimate {
            trials,
            accepts,
            timeouts,
            estimate: p,
            ci: ((p - half).max(0.0), (p + half).min(1.0)),
        }
    }
}

/// Trial `i` draws its coins from the stream derived from `(seed, i)`.
pub fn ptm_run_mc(
    m: &TmSpec,
    adv: &AdviceTape,
    w: &BitWord,
    bound: u64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial required".into()));
    }
    let (mut accepts, mut timeouts) = (0, 0);
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        match run_with(m, adv, w, bound, |_| rng.gen())? {
            Decision::Accept(_) => accepts += 1,
            Decision::Timeout => timeouts += 1,
            Decision::Reject(_) => {}
        }
    }
    Ok(McEstimate::from_counts(trials, accepts, timeouts))
}

/// Deterministic replay of a probabilistic machine on a fixed coin sequence;
/// running out of coins is a timeout.
pub fn ptm_run_with_coins(
    m: &TmSpec,
    adv: &AdviceTape,
    w: &BitWord,
    coins: &[bool],
) -> Result<Decision> {
    run_with(m, adv, w, coins.len() as u64, |t| coins[t as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::library::{self, tm};
    use crate::nonuniform::bounds::BoundFunction;

    #[test]
    fn even_parity_matches_popcount() {
        let m = tm(library::EVEN_PARITY);
        assert_eq!(
            tm_run(&m, &BitWord::new(), 10).unwrap(),
            Decision::Accept(1)
        );
        assert!(!tm_run(&m, &BitWord::from("1"), 10)
            .unwrap()
            .accepted()
            .unwrap());
        for n in 0..=10 {
            for w in BitWord::all_of_length(n) {
                let d = tm_run(&m, &w, 100).unwrap();
                assert_eq!(
                    d,
                    if w.count_ones() % 2 == 0 {
                        Decision::Accept(n as u64 + 1)
                    } else {
                        Decision::Reject(n as u64 + 1)
                    }
                );
            }
        }
        assert_eq!(
            tm_run(&m, &BitWord::from("0101"), 3).unwrap(),
            Decision::Timeout
        );
    }

    #[test]
    fn empty_advice_behaves_as_plain_run() {
        let m = tm(library::EVEN_PARITY);
        for w in BitWord::all_of_length(5) {
            assert_eq!(
                tma_run(&m, &Advice::empty(), &w, 50).unwrap(),
                tm_run(&m, &w, 50).unwrap()
            );
        }
    }

    #[test]
    fn index_lookup_reads_the_indexed_advice_bit() {
        let m = tm(library::INDEX_LOOKUP);
        let bits = BitWord::from("0110100");
        for n in 0..=4 {
            for w in BitWord::all_of_length(n) {
                let i = w.to_index() as usize;
                let d =
                    run_with(&m, &AdviceTape::Finite(bits.clone()), &w, 10_000, |_| false).unwrap();
                assert_eq!(d.accepted(), Some(i < bits.len() && bits.bit(i)), "{w}");
            }
        }
    }

    #[test]
    fn consistency_check_catches_inconsistent_advice() {
        let m = tm(library::ADVICE_PARITY);
        let flipping = Advice::new("flip", BoundFunction::constant(1), false, |n| {
            BitWord::binary(n as u64 % 2, 1)
        });
        let w = BitWord::from("0");
        assert!(matches!(
            tma_run_checked(&m, &flipping, &w, 50, &[2, 3]),
            Err(Error::ConsistencyViolation { n: 1, .. })
        ));
        let steady = Advice::new("one", BoundFunction::constant(1), true, |_| {
            BitWord::from("1")
        });
        assert_eq!(
            tma_run_checked(&m, &steady, &w, 50, &[2, 3])
                .unwrap()
                .accepted(),
            Some(false)
        );
    }

    #[test]
    fn ptm_examples() {
        let det = tm(library::DET_ACCEPT);
        let out = ptm_run_exact(&det, &AdviceTape::empty(), &BitWord::new(), 10, 100).unwrap();
        assert_eq!(out.accept, rat(1, 1));
        assert_eq!(out.leaves, 1);
        let coin = tm(library::FIRST_COIN);
        let out = ptm_run_exact(&coin, &AdviceTape::empty(), &BitWord::new(), 10, 100).unwrap();
        assert_eq!((out.accept.clone(), out.leaves), (rat(1, 2), 2));
        assert!(matches!(out.decide(), Err(Error::BppViolation { .. })));
        let maj = tm(library::MAJORITY3_COINS);
        let out = ptm_run_exact(&maj, &AdviceTape::empty(), &BitWord::new(), 10, 100).unwrap();
        assert_eq!(out.accept, rat(1, 2));
        assert_eq!(out.leaves, 6);
        assert!(out.decide().is_err());
        assert!(matches!(
            ptm_run_exact(&maj, &AdviceTape::empty(), &BitWord::new(), 10, 3),
            Err(Error::BudgetExceeded { budget: 3 })
        ));
    }

    #[test]
    fn monte_carlo_estimates() {
        let det = tm(library::DET_ACCEPT);
        let e = ptm_run_mc(&det, &AdviceTape::empty(), &BitWord::new(), 10, 100, 1).unwrap();
        assert_eq!(e.estimate, 1.0);
        let coin = tm(library::FIRST_COIN);
        let a = ptm_run_mc(&coin, &AdviceTape::empty(), &BitWord::new(), 10, 10_000, 42).unwrap();
        assert!((0.47..=0.53).contains(&a.estimate), "{}", a.estimate);
        assert!(a.ci.0 <= a.estimate && a.estimate <= a.ci.1 && a.ci.1 - a.ci.0 < 0.02);
        let b = ptm_run_mc(&coin, &AdviceTape::empty(), &BitWord::new(), 10, 10_000, 42).unwrap();
        assert_eq!(a, b);
        assert!(ptm_run_mc(&coin, &AdviceTape::empty(), &BitWord::new(), 10, 0, 42).is_err());
    }

    #[test]
    fn coin_replay_and_bpp_rule() {
        let maj = tm(library::MAJORITY3_COINS);
        let w = BitWord::new();
        let adv = AdviceTape::empty();
        assert_eq!(
            ptm_run_with_coins(&maj, &adv, &w, &[true, false, true]).unwrap(),
            Decision::Accept(3)
        );
        assert_eq!(
            ptm_run_with_coins(&maj, &adv, &w, &[false, false]).unwrap(),
            Decision::Reject(2)
        );
        assert_eq!(
            ptm_run_with_coins(&maj, &adv, &w, &[true]).unwrap(),
            Decision::Timeout
        );
        assert!(bpp_decide(&rat(2, 3), &rat(1, 3)).unwrap());
        assert!(!bpp_decide(&rat(1, 4), &rat(3, 4)).unwrap());
        assert!(bpp_decide(&rat(3, 5), &rat(2, 5)).is_err());
    }

    #[test]
    fn ambiguous_rules_are_rejected() {
        let text = "tm bad\nstates a acc rej\nstart a\naccept acc\nreject rej\nadvice no\na * -> acc * S\na * -> rej * S\n";
        assert!(crate::machines::parse_tm_text(text).is_err());
    }
}
