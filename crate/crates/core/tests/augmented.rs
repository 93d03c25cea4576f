use sigmanet::augmented::{
    algo1_tma_simulate_ann, algo2_tma_simulate_enn, algo3_budget, ann_from_tma, ann_run,
    calibrate_c, demo, enn_from_tma, enn_replay, enn_run, snn_run, SnnMode, Target,
};
use sigmanet::compiler::CompiledNetwork;
use sigmanet::corpus;
use sigmanet::machines::advice::advice_from_stream;
use sigmanet::machines::library::{self, tm};
use sigmanet::machines::stack::{stack_run, AdviceSource};
use sigmanet::machines::tm::{tma_run, tma_run_stream};
use sigmanet::nonuniform::bounds::BoundFunction;
use sigmanet::{BitStream, BitWord};

fn streams() -> Vec<BitStream> {
    vec![
        BitStream::thue_morse(),
        BitStream::primes(),
        BitStream::periodic(BitWord::from("0"), BitWord::from("110")),
    ]
}

#[test]
fn analog_networks_decide_as_their_advice_machines() {
    for text in [library::ADVICE_PARITY, library::ADVICE_INDEX] {
        let m = tm(text);
        for r in streams() {
            let build = ann_from_tma(&m, &r).unwrap();
            for w in corpus::exhaustive(5) {
                let steps = stack_run(&build.machine, &w, AdviceSource::Stream(r.clone()), 100_000)
                    .unwrap();
                let tau = CompiledNetwork::decision_time(w.len(), steps.time().unwrap());
                let d = ann_run(&build.spec, &w, tau).unwrap();
                assert_eq!(d.time(), Some(tau));
                assert!(
                    d.agrees(&tma_run_stream(&m, &r, &w, 100_000).unwrap()),
                    "{} on {w}",
                    m.name
                );
            }
        }
    }
}

#[test]
fn evolving_networks_decide_as_their_advice_machines() {
    let f = BoundFunction::linear(1, 1);
    for text in [library::ADVICE_PARITY, library::ADVICE_INDEX] {
        let m = tm(text);
        for e in streams() {
            let build = enn_from_tma(&m, &e).unwrap();
            let advice = advice_from_stream(&e, &f);
            for w in corpus::exhaustive(4) {
                let (d, stats) = enn_replay(&build, &w, 1_000_000).unwrap();
                let net = enn_run(&build.spec, &w, stats.network_time).unwrap();
                assert_eq!(net.time(), Some(stats.network_time));
                assert!(
                    net.agrees(&d) && net.agrees(&tma_run(&m, &advice, &w, 100_000).unwrap()),
                    "{} on {w}",
                    m.name
                );
            }
        }
    }
}

#[test]
fn truncated_simulations_agree_once_calibrated() {
    let m = tm(library::ADVICE_INDEX);
    let r = BitStream::thue_morse();
    let build = ann_from_tma(&m, &r).unwrap();
    let words = corpus::exhaustive(3);
    // enough steps for every word of length <= 3 to decide
    let f = BoundFunction::linear(0, 80);
    let cal = calibrate_c(Target::Ann(&build.spec), &words, &f, 64).unwrap();
    for w in &words {
        let exact = ann_run(&build.spec, w, f.eval(w.len()) as u64).unwrap();
        assert!(exact.accepted().is_some());
        assert_eq!(
            algo1_tma_simulate_ann(&build.spec, &f, cal.c, w).unwrap(),
            exact,
            "{w}"
        );
    }
    let e = BitStream::primes();
    let eb = enn_from_tma(&m, &e).unwrap();
    let cal = calibrate_c(Target::Enn(&eb.spec), &words, &f, 64).unwrap();
    for w in &words {
        let exact = enn_run(&eb.spec, w, f.eval(w.len()) as u64).unwrap();
        assert_eq!(
            algo2_tma_simulate_enn(&eb.spec, &f, cal.c, w).unwrap(),
            exact,
            "{w}"
        );
    }
}

#[test]
fn stochastic_runs_stop_at_the_fixed_time_on_every_pattern() {
    let spec = demo::majority3(BitStream::periodic(BitWord::new(), BitWord::from("10")));
    for w in corpus::exhaustive(4) {
        // exact mode fails on any pattern deciding away from the fixed time
        let out = snn_run(
            &spec,
            &w,
            demo::MAJORITY3_TAU,
            SnnMode::Exact { budget: 64 },
        )
        .unwrap();
        assert_eq!(out.decision.time(), Some(demo::MAJORITY3_TAU));
        assert_eq!(out.samples, 1 << demo::MAJORITY3_TAU);
    }
}

#[test]
fn coin_simulation_budget_holds() {
    let spec = demo::majority3(BitStream::thue_morse());
    let f = BoundFunction::constant(6);
    let b = algo3_budget(&spec, &f, 1, &BitWord::from("1"), 4000, 21).unwrap();
    assert!(
        b.per_step_divergence <= b.per_step_bound + 3.0 * b.per_step_sigma,
        "{b:?}"
    );
    assert!(b.run_divergence <= b.run_bound + 3.0 * b.run_sigma, "{b:?}");
}
