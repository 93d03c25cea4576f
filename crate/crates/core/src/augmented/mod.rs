//! Networks augmented with a real bias (analog), a binary time-varying bias
//! (evolving) or a Bernoulli input line (stochastic), their truncated
//! execution, and the procedures translating between them and advice
//! machines.

mod algo;
mod amplify;
mod ann;
pub mod demo;
mod enn;
mod real;
mod snn;
mod truncation;

pub use algo::{
    algo1_tma_simulate_ann, algo2_tma_simulate_enn, algo3_budget, algo3_paired_trial,
    algo3_prefix_len, algo3_ptma_simulate_snn, algo4_budget, algo4_fair_coin_repeats,
    algo4_sample_count, algo4_snn_simulate_ptma, lex_less_than_stream, Algo3Budget, Algo3Trial,
    Algo4Budget, Algo4Run,
};
pub use amplify::{amplify_majority, majority_probability, repeats_for};
pub use ann::{ann_from_tma, ann_run, ann_run_digits, AnnBuild};
pub use enn::{enn_from_tma, enn_replay, enn_run, EnnBuild, ReplayStats};
pub use real::RealBias;
pub use snn::{bernoulli, snn_run, SnnMode, SnnOutcome};
pub use truncation::{
    calibrate_c, exact_run, truncate, truncate_run, truncated_delta4, Calibration, Target,
    Truncated, TruncationPolicy,
};

use crate::encodings::{BitStream, Rational};
use crate::error::{Error, Result};
use crate::rnn::format::NetworkFile;
use crate::rnn::RnnConfig;

/// Network whose cell-0 bias is the real `delta4(bias_stream)`.
#[derive(Clone, Debug)]
pub struct AnnSpec {
    pub base: RnnConfig,
    pub bias_stream: BitStream,
}

/// Network whose cell-0 bias at step `t` is bit `t` of `evolving_bias`.
#[derive(Clone, Debug)]
pub struct EnnSpec {
    pub base: RnnConfig,
    pub evolving_bias: BitStream,
}

/// Network with one stochastic input line that is 1 with probability equal
/// to the binary value of `prob_stream`.
#[derive(Clone, Debug)]
pub struct SnnSpec {
    pub base: RnnConfig,
    /// Weight of the stochastic line into each cell.
    pub x2: Vec<Rational>,
    pub prob_stream: BitStream,
}

/// A network file interpreted by its augmentation.
#[derive(Clone, Debug)]
pub enum Network {
    Plain(RnnConfig),
    Analog(AnnSpec),
    Evolving(EnnSpec),
    Stochastic(SnnSpec),
}

impl Network {
    pub fn from_file(file: NetworkFile) -> Result<Self> {
        let NetworkFile {
            cfg,
            x2,
            bias_stream,
            evolving_bias,
            prob_stream,
        } = file;
        match (bias_stream, evolving_bias, prob_stream) {
            (None, None, None) if x2.is_none() => Ok(Network::Plain(cfg)),
            (Some(r), None, None) if x2.is_none() => Ok(Network::Analog(AnnSpec {
                base: cfg,
                bias_stream: r,
            })),
            (None, Some(e), None) if x2.is_none() => Ok(Network::Evolving(EnnSpec {
                base: cfg,
                evolving_bias: e,
            })),
            (None, None, Some(p)) => {
                let x2 = x2.unwrap_or_else(|| vec![Rational::default(); cfg.k]);
                Ok(Network::Stochastic(SnnSpec {
                    base: cfg,
                    x2,
                    prob_stream: p,
                }))
            }
            _ => Err(Error::Invalid(
                "a network carries at most one kind of augmentation".into(),
            )),
        }
    }

    pub fn to_file(&self) -> NetworkFile {
        match self {
            Network::Plain(cfg) => NetworkFile::plain(cfg.clone()),
            Network::Analog(a) => NetworkFile {
                bias_stream: Some(a.bias_stream.clone()),
                ..NetworkFile::plain(a.base.clone())
            },
            Network::Evolving(e) => NetworkFile {
                evolving_bias: Some(e.evolving_bias.clone()),
                ..NetworkFile::plain(e.base.clone())
            },
            Network::Stochastic(s) => NetworkFile {
                x2: Some(s.x2.clone()),
                prob_stream: Some(s.prob_stream.clone()),
                ..NetworkFile::plain(s.base.clone())
            },
        }
    }

    pub fn config(&self) -> &RnnConfig {
        match self {
            Network::Plain(cfg) => cfg,
            Network::Analog(a) => &a.base,
            Network::Evolving(e) => &e.base,
            Network::Stochastic(s) => &s.base,
        }
    }
}
