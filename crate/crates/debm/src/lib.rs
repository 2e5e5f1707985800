//! File formats, synthetic sequences, reports and the benchmark harness
//! built on top of `debm-core`.

mod error;
pub mod harness;
pub mod io;
pub mod report;

pub use self::error::{Error, Result};
pub use debm_core;
