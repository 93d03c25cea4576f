//! Advice and compressibility constructions.

pub mod bounds;
pub mod diagonal;
pub mod kolmogorov;
pub mod prefix_codec;
pub mod reasonable;
