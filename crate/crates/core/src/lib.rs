//! Exact-arithmetic toolkit for saturated-linear recurrent networks: machine
//! interpreters, a machine-to-network compiler, analog/evolving/stochastic
//! network semantics with their cross-simulations, and advice constructions.

pub mod activation;
pub mod augmented;
pub mod compiler;
pub mod corpus;
pub mod encodings;
pub mod error;
pub mod machines;
pub mod nonuniform;
pub mod rnn;
pub mod seeding;

pub use encodings::{BitStream, BitWord, Rational};
pub use error::{Error, Result};
pub use rnn::{Decision, RnnConfig};
