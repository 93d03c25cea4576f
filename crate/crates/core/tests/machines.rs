use num_traits::{One, Signed, Zero};

use sigmanet::augmented::majority_probability;
use sigmanet::corpus;
use sigmanet::encodings::{inv_pow, rat, Rational};
use sigmanet::machines::advice::advice_from_stream;
use sigmanet::machines::convert::tm_to_stack;
use sigmanet::machines::format::{parse_machine, MachineFile};
use sigmanet::machines::library::{self, tm};
use sigmanet::machines::stack::{stack_run, AdviceSource};
use sigmanet::machines::tm::{
    ptm_run_exact, ptm_run_with_coins, tm_run, tma_run, tma_run_stream, AdviceTape,
};
use sigmanet::nonuniform::bounds::BoundFunction;
use sigmanet::{BitStream, BitWord, Decision};

/// Exhaustive to length 10, plus random words to length 40 for machines
/// running in time polynomial in the input length (index lookup counts down
/// the input's binary value).
fn words(file: &str) -> Vec<BitWord> {
    let mut w = corpus::exhaustive(10);
    if file != "index_lookup.tm" {
        w.extend(corpus::random(200, 40, 11));
    }
    w
}

#[test]
fn deterministic_machines_agree_with_their_stack_translation() {
    let streams = [
        BitStream::thue_morse(),
        BitStream::seeded(3),
        BitStream::constant(true),
    ];
    for (file, text) in library::ALL {
        let MachineFile::Tm(m) = parse_machine(text).unwrap() else {
            continue;
        };
        if m.probabilistic {
            continue;
        }
        let sm = tm_to_stack(&m).unwrap();
        for w in words(file) {
            if m.advice {
                for r in &streams {
                    let want = tma_run_stream(&m, r, &w, 1_000_000).unwrap();
                    let got =
                        stack_run(&sm, &w, AdviceSource::Stream(r.clone()), 10_000_000).unwrap();
                    assert_eq!(want.accepted(), got.accepted(), "{file} on {w}");
                }
            } else {
                let want = tm_run(&m, &w, 1_000_000).unwrap();
                let got = stack_run(&sm, &w, AdviceSource::None, 10_000_000).unwrap();
                assert_eq!(want.accepted(), got.accepted(), "{file} on {w}");
            }
        }
    }
}

#[test]
fn finite_advice_equals_stream_advice_when_unread_past_its_end() {
    let m = tm(library::ADVICE_INDEX);
    let r = BitStream::seeded(9);
    let a = advice_from_stream(&r, &BoundFunction::linear(1, 1));
    for w in corpus::exhaustive(8) {
        assert_eq!(
            tma_run(&m, &a, &w, 10_000).unwrap().accepted(),
            tma_run_stream(&m, &r, &w, 10_000).unwrap().accepted()
        );
    }
}

/// Per-run decision distribution by replaying every coin vector of length `k`.
fn replay_distribution(
    text: &str,
    adv: &AdviceTape,
    w: &BitWord,
    k: usize,
) -> Vec<(bool, Rational)> {
    let m = tm(text);
    (0..1u32 << k)
        .map(|mask| {
            let coins: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            let d = ptm_run_with_coins(&m, adv, w, &coins).unwrap();
            assert_ne!(d, Decision::Timeout);
            (d.accepted().unwrap(), inv_pow(2, k))
        })
        .collect()
}

#[test]
fn three_fold_majority_never_shrinks_the_margin() {
    let half = rat(1, 2);
    let cases: Vec<(&str, AdviceTape, usize)> = vec![
        (library::FIRST_COIN, AdviceTape::empty(), 1),
        (library::MAJORITY3_COINS, AdviceTape::empty(), 3),
        (library::DET_ACCEPT, AdviceTape::empty(), 1),
        (
            library::NOISY_ADVICE,
            AdviceTape::Finite(BitWord::from("1")),
            2,
        ),
        (
            library::NOISY_ADVICE,
            AdviceTape::Finite(BitWord::from("0")),
            2,
        ),
    ];
    for (text, adv, k) in cases {
        let w = BitWord::from("01");
        let exact = ptm_run_exact(&tm(text), &adv, &w, 100, 1 << 12).unwrap();
        let dist = replay_distribution(text, &adv, &w, k);
        let single: Rational = dist
            .iter()
            .filter(|(a, _)| *a)
            .map(|(_, p)| p.clone())
            .sum();
        assert_eq!(single, exact.accept);
        // enumerate all triples of independent runs
        let mut amplified = Rational::zero();
        for x in &dist {
            for y in &dist {
                for z in &dist {
                    if (x.0 as u8 + y.0 as u8 + z.0 as u8) >= 2 {
                        amplified += &x.1 * &y.1 * &z.1;
                    }
                }
            }
        }
        assert_eq!(amplified, majority_probability(&exact.accept, 3));
        assert!((&amplified - &half).abs() >= (&exact.accept - &half).abs());
        assert!(amplified <= Rational::one());
    }
}
