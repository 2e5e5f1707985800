//! Block-matching motion estimation driven by differential evolution.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`de`]: a DE/best/1 optimizer over a bounded real search space whose
//!   fitness is supplied through the [`de::Fitness`] trait.
//! - [`strategy`]: the evaluate-or-estimate dispatch that keeps every seen
//!   data point and copies the fitness of the nearest neighbour when a
//!   request lands close to a non-best point.
//! - [`frame`], [`search`], [`baselines`] and [`motion`]: luma frames, the
//!   SAD cost, full search, the DE block matcher, three step search, diamond
//!   search, whole-frame estimation and motion compensation.
//! - [`metrics`]: MSE, PSNR, PSNR degradation and sequence aggregation.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod baselines;
pub mod de;
mod error;
pub mod frame;
pub mod metrics;
pub mod motion;
pub mod search;
pub mod strategy;
pub mod trace;

pub use self::error::{Error, Result};
pub use self::frame::{BlockRef, LumaFrame, MotionVector};
pub use self::motion::{Algorithm, MvField};
pub use self::search::{BlockResult, SearchConfig};
