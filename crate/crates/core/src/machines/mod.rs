//! Reference interpreters: Turing machines (plain, with advice, probabilistic)
//! and p-stack machines, plus the translation between them.

pub mod advice;
pub mod convert;
pub mod format;
pub mod library;
pub mod stack;
pub mod tm;

pub use advice::{advice_from_stream, Advice};
pub use convert::tm_to_stack;
pub use format::{parse_machine, parse_stack_text, parse_tm_text, MachineFile};
pub use stack::{stack_run, AdviceSource, StackMachineSpec};
pub use tm::{ptm_run_exact, ptm_run_mc, tm_run, tma_run, AdviceTape, TmSpec};
