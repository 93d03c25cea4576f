use num_traits::{One, Zero};

use sigmanet::compiler::{compile, AdviceWiring, CompiledNetwork, RAMP, STEP};
use sigmanet::corpus;
use sigmanet::encodings::{delta4, delta4_decode, Rational};
use sigmanet::machines::library::{self, stack, tm};
use sigmanet::machines::{stack_run, tm_to_stack, AdviceSource, StackMachineSpec};
use sigmanet::rnn::engine::{Exact, Extra, Prepared};
use sigmanet::rnn::run_word;

fn plain_machines() -> Vec<StackMachineSpec> {
    vec![
        stack(library::DYCK1),
        stack(library::ALWAYS_ACCEPT),
        tm_to_stack(&tm(library::EVEN_PARITY)).unwrap(),
    ]
}

fn is_control(role: &str) -> bool {
    role.starts_with("state.")
        || role.starts_with("rule.")
        || role.ends_with(".top")
        || role.ends_with(".nonempty")
}

fn is_encoded_word(q: &Rational) -> bool {
    (0..64).any(|d| delta4_decode(q, d).is_ok_and(|u| delta4(&u) == *q))
}

#[test]
fn compiled_networks_match_their_machines_with_time_bound() {
    let mut words = corpus::exhaustive(7);
    words.extend(corpus::random(40, 16, 5));
    for sm in plain_machines() {
        let net = compile(&sm, AdviceWiring::None).unwrap();
        for w in &words {
            let d = stack_run(&sm, w, AdviceSource::None, 1_000_000).unwrap();
            let steps = d.time().unwrap();
            let tau = CompiledNetwork::decision_time(w.len(), steps);
            assert!(tau <= RAMP + STEP * (steps + w.len() as u64));
            let got = run_word(&net.cfg, w, tau).unwrap();
            assert!(got.agrees(&d), "{} on {w}: {d} vs {got}", sm.name);
            assert_eq!(got.time(), Some(tau));
        }
    }
}

#[test]
fn traced_runs_keep_control_boolean_and_stacks_encoded() {
    for sm in plain_machines() {
        let net = compile(&sm, AdviceWiring::None).unwrap();
        let control: Vec<(String, usize)> = net
            .layout
            .roles
            .iter()
            .filter(|(r, _)| is_control(r))
            .cloned()
            .collect();
        let stacks: Vec<usize> = net
            .layout
            .cells_with_prefix("stack.")
            .filter(|(r, _)| r.ends_with(".content"))
            .map(|(_, c)| c)
            .collect();
        assert!(!control.is_empty() && !stacks.is_empty());
        let prepared = Prepared::new(&net.cfg, None);
        for w in corpus::exhaustive(5) {
            let mut outputs = vec![];
            prepared
                .run(
                    &mut Exact,
                    &w,
                    10_000,
                    |_| Ok(Extra::default()),
                    |t, h, _| {
                        for (role, c) in &control {
                            assert!(
                                h[*c].is_zero() || h[*c].is_one(),
                                "{} {role} at {t}: {}",
                                sm.name,
                                h[*c]
                            );
                        }
                        for &c in &stacks {
                            assert!(
                                is_encoded_word(&h[c]),
                                "{} stack cell {c} at {t}: {}",
                                sm.name,
                                h[c]
                            );
                        }
                        for v in h {
                            assert!(*v >= Rational::zero() && *v <= Rational::one());
                        }
                        outputs.push(t);
                    },
                )
                .unwrap();
            assert!(!outputs.is_empty());
        }
    }
}
