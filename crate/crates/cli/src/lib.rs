//! File formats, synthetic stand-in instances, the frontier driver and the
//! benchmark harness behind the `fmclp` command.

pub mod bench;
pub mod canonical;
pub mod error;
pub mod frontier;
pub mod input;
pub mod plain;
pub mod standin;
pub mod verify;

pub use error::{FormatError, Result};
