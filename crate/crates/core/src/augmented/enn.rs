//! Evolving networks: cell 0 receives bit `t` of the evolving bias at step
//! `t`, and a replay wrapper that lets such a network run an advice machine
//! on advice bits that are still arriving.

use super::truncation::int_bit;
use super::EnnSpec;
use crate::compiler::{compile, AdviceWiring, CompiledNetwork};
use crate::encodings::{BitStream, BitWord};
use crate::error::Result;
use crate::machines::convert::{ADV_L, ADV_R, LEFT, RIGHT};
use crate::machines::stack::{
    AdviceSource, Obs, Register, StackMachineSpec, StackOp, StackRule, StackRun,
};
use crate::machines::tm::TmSpec;
use crate::machines::tm_to_stack;
use crate::rnn::engine::{Exact, Extra, Prepared};
use crate::rnn::Decision;

pub fn enn_run(spec: &EnnSpec, w: &BitWord, max_steps: u64) -> Result<Decision> {
    let net = Prepared::new(&spec.base, None);
    let e = &spec.evolving_bias;
    net.run(
        &mut Exact,
        w,
        max_steps,
        |t| {
            Ok(Extra {
                bias0: Some(int_bit(e.bit(t as usize))),
                x2: false,
            })
        },
        |_, _, _| {},
    )
}

#[derive(Clone, Debug)]
pub struct EnnBuild {
    pub spec: EnnSpec,
    pub network: CompiledNetwork,
    /// Stack machine the network was compiled from.
    pub machine: StackMachineSpec,
    /// Number of states belonging to the translated advice machine.
    translated: usize,
    restart: Option<usize>,
}

const SNAP: usize = 4;
const NEED: usize = 5;
const TMP: usize = 6;
const STACKS: usize = 7;

struct Wrapper {
    states: Vec<String>,
    rules: Vec<StackRule>,
}

impl Wrapper {
    fn state(&mut self, name: &str) -> usize {
        self.states.push(format!("replay.{name}"));
        self.states.len() - 1
    }

    fn rule(
        &mut self,
        state: usize,
        guard: &[(usize, Obs)],
        ops: &[(usize, StackOp)],
        next: usize,
    ) {
        let mut g = vec![None; STACKS];
        for &(k, o) in guard {
            g[k] = Some(o);
        }
        let mut o = vec![StackOp::Noop; STACKS];
        for &(k, op) in ops {
            o[k] = op;
        }
        self.rules.push(StackRule {
            state,
            guard: g,
            next,
            ops: o,
        });
    }

    /// Moves every 1 from `TMP` back onto `NEED`, then continues at `done`.
    fn refill(&mut self, from: usize, done: usize) {
        self.rule(
            from,
            &[(TMP, Obs::Top(true))],
            &[(TMP, StackOp::Pop), (NEED, StackOp::Push(true))],
            from,
        );
        self.rule(from, &[(TMP, Obs::Empty)], &[], done);
    }
}

/// Replay loop around a translated advice machine.
///
/// `need` holds `2^k` ones. Each round snapshots the advice bits received so
/// far, checks that there are at least `2^k` of them (waiting and retrying
/// otherwise), and restarts the machine from its initial configuration on
/// that snapshot. A read past the end of the snapshot doubles `need` and
/// starts a new round.
fn replay_wrapper(sm: &StackMachineSpec) -> (StackMachineSpec, usize, usize) {
    let translated = sm.states.len();
    let mut w = Wrapper {
        states: sm.states.clone(),
        rules: Vec::new(),
    };
    let init0 = w.state("init0");
    let init1 = w.state("init1");
    let snap = w.state("snap");
    let count = w.state("count");
    let go = w.state("go");
    let wait = w.state("wait");
    let restart = w.state("restart");
    let double = w.state("double");
    let regrow = w.state("regrow");

    for r in &sm.rules {
        let mut guard = r.guard.clone();
        guard.resize(STACKS, None);
        let (next, ops) = if r.guard[ADV_R] == Some(Obs::Empty) {
            (restart, vec![StackOp::Noop; STACKS])
        } else {
            let mut ops = r.ops.clone();
            ops.resize(STACKS, StackOp::Noop);
            (r.next, ops)
        };
        w.rules.push(StackRule {
            state: r.state,
            guard,
            next,
            ops,
        });
    }

    let push1 = StackOp::Push(true);
    w.rule(init0, &[], &[(NEED, push1)], init1);
    w.rule(init1, &[], &[(NEED, push1)], snap);
    w.rule(
        snap,
        &[],
        &[
            (LEFT, StackOp::Clear),
            (RIGHT, StackOp::Load(Register::Input)),
            (ADV_L, StackOp::Clear),
            (ADV_R, StackOp::Load(Register::Advice)),
            (SNAP, StackOp::Load(Register::Advice)),
        ],
        count,
    );
    for b in [false, true] {
        w.rule(
            count,
            &[(NEED, Obs::Top(true)), (SNAP, Obs::Top(b))],
            &[(NEED, StackOp::Pop), (TMP, push1), (SNAP, StackOp::Pop)],
            count,
        );
    }
    w.rule(
        count,
        &[(NEED, Obs::Top(true)), (SNAP, Obs::Empty)],
        &[],
        wait,
    );
    w.rule(count, &[(NEED, Obs::Empty)], &[], go);
    w.refill(go, sm.start);
    w.refill(wait, snap);
    w.rule(
        restart,
        &[(NEED, Obs::Top(true))],
        &[(NEED, StackOp::Pop), (TMP, push1)],
        double,
    );
    w.rule(restart, &[(NEED, Obs::Empty)], &[], regrow);
    w.rule(double, &[], &[(TMP, push1)], restart);
    w.refill(regrow, snap);

    let mut stacks = sm.stacks.clone();
    stacks.extend(["snapshot", "need", "need_tmp"].map(String::from));
    let wrapped = StackMachineSpec {
        name: format!("{}-replay", sm.name),
        states: w.states,
        stacks,
        start: init0,
        accept: sm.accept,
        reject: sm.reject,
        input_code: sm.input_code,
        init: vec![None; STACKS],
        rules: w.rules,
    };
    (wrapped, translated, restart)
}

/// Network with evolving bias `e` deciding as the advice machine `m` does
/// with prefix advice of `e`. Machines without advice compile directly.
pub fn enn_from_tma(m: &TmSpec, e: &BitStream) -> Result<EnnBuild> {
    let sm = tm_to_stack(m)?;
    let (machine, translated, restart, wiring) = if m.advice {
        let (wrapped, translated, restart) = replay_wrapper(&sm);
        (
            wrapped,
            translated,
            Some(restart),
            AdviceWiring::EvolvingBias,
        )
    } else {
        let n = sm.states.len();
        (sm, n, None, AdviceWiring::None)
    };
    let network = compile(&machine, wiring)?;
    let spec = EnnSpec {
        base: network.cfg.clone(),
        evolving_bias: e.clone(),
    };
    Ok(EnnBuild {
        spec,
        network,
        machine,
        translated,
        restart,
    })
}

/// Counters of one replayed run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReplayStats {
    pub restarts: u64,
    pub stack_steps: u64,
    /// Time at which the compiled network decides.
    pub network_time: u64,
}

/// Runs the wrapped stack machine with the advice bits that have reached the
/// network by each step.
pub fn enn_replay(
    build: &EnnBuild,
    w: &BitWord,
    max_stack_steps: u64,
) -> Result<(Decision, ReplayStats)> {
    let (base, per_step) = CompiledNetwork::arriving_symbols(w.len());
    let advice = match build.network.wiring {
        AdviceWiring::None => AdviceSource::None,
        _ => AdviceSource::Arriving {
            stream: build.spec.evolving_bias.clone(),
            base,
            per_step,
        },
    };
    replay_with(build, w, advice, max_stack_steps)
}

fn replay_with(
    build: &EnnBuild,
    w: &BitWord,
    advice: AdviceSource,
    max_stack_steps: u64,
) -> Result<(Decision, ReplayStats)> {
    let mut run = StackRun::new(&build.machine, w, advice)?;
    let mut stats = ReplayStats::default();
    let decision = loop {
        if let Some(d) = run.decision() {
            break d;
        }
        if run.steps >= max_stack_steps {
            break Decision::Timeout;
        }
        let from = run.state;
        run.step()?;
        if from < build.translated && Some(run.state) == build.restart {
            stats.restarts += 1;
        }
    };
    stats.stack_steps = run.steps;
    if let Some(s) = decision.time() {
        stats.network_time = CompiledNetwork::decision_time(w.len(), s);
    }
    Ok((decision, stats))
}
