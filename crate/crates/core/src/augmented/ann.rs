//! Analog networks: one real bias, read lazily to the precision each run
//! demands.

use super::real::RealBias;
use super::AnnSpec;
use crate::compiler::{compile, AdviceWiring, CompiledNetwork};
use crate::encodings::{BitStream, BitWord};
use crate::error::{Error, Result};
use crate::machines::stack::StackMachineSpec;
use crate::machines::tm::TmSpec;
use crate::machines::tm_to_stack;
use crate::rnn::engine::{Exact, Extra, Prepared};
use crate::rnn::Decision;

const INITIAL_DIGITS: usize = 16;
const MAX_DIGITS: usize = 1 << 14;

/// Decision of the analog network and the number of bias digits that
/// settled every comparison (0 for eventually periodic biases, which are
/// used exactly).
pub fn ann_run_digits(spec: &AnnSpec, w: &BitWord, max_steps: u64) -> Result<(Decision, usize)> {
    let net = Prepared::new(&spec.base, None);
    if let Some(r) = spec.bias_stream.exact_delta4() {
        let d = net.run(
            &mut Exact,
            w,
            max_steps,
            |_| {
                Ok(Extra {
                    bias0: Some(r.clone()),
                    x2: false,
                })
            },
            |_, _, _| {},
        )?;
        return Ok((d, 0));
    }
    let mut digits = INITIAL_DIGITS;
    loop {
        let mut arith = RealBias::new(digits);
        let bias = arith.bias(&spec.bias_stream);
        let run = net.run(
            &mut arith,
            w,
            max_steps,
            |_| {
                Ok(Extra {
                    bias0: Some(bias.clone()),
                    x2: false,
                })
            },
            |_, _, _| {},
        );
        match run {
            Err(Error::PrecisionExhausted { .. }) if digits < MAX_DIGITS => digits *= 2,
            other => return other.map(|d| (d, digits)),
        }
    }
}

pub fn ann_run(spec: &AnnSpec, w: &BitWord, max_steps: u64) -> Result<Decision> {
    ann_run_digits(spec, w, max_steps).map(|(d, _)| d)
}

/// Analog network simulating an advice machine together with the pieces it
/// was built from.
#[derive(Clone, Debug)]
pub struct AnnBuild {
    pub spec: AnnSpec,
    pub network: CompiledNetwork,
    pub machine: StackMachineSpec,
}

/// The machine's advice tape becomes a stack loaded from the real bias
/// `delta4(r)`, so the network reads advice bit `i` after `i` pops.
pub fn ann_from_tma(m: &TmSpec, r: &BitStream) -> Result<AnnBuild> {
    let machine = tm_to_stack(m)?;
    let wiring = if m.advice {
        AdviceWiring::StaticBias
    } else {
        AdviceWiring::None
    };
    let network = compile(&machine, wiring)?;
    let spec = AnnSpec {
        base: network.cfg.clone(),
        bias_stream: r.clone(),
    };
    Ok(AnnBuild {
        spec,
        network,
        machine,
    })
}
