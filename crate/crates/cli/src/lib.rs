//! Command-line surface for `arbor-core` and the sharded range verifier.

pub mod cli;
pub mod verify;

pub use cli::run;
pub use verify::{batch_verify, VerifyOptions, VerifyReport};
