//! A laboratory for studying online `{F, CR}` control in differential
//! evolution.
//!
//! The crate combines four pieces:
//!
//! - a deterministic rand/1/bin DE engine with partitioned random streams
//!   ([`de`], [`engine`], [`rng`]);
//! - five published parameter adaptation methods behind one interface
//!   ([`adaptation`]): jDE, EPSDE, JADE, MDE, and SHADE;
//! - a greedy one-step parameter oracle ([`gao`]) that samples `lambda`
//!   candidate pairs per trial event under frozen randomness, commits the
//!   best, and never charges the sampling to the evaluation budget. It is
//!   a diagnostic upper bound on what one-step parameter control can do,
//!   not a practical optimizer;
//! - the benchmark functions, metrics, and experiment harness needed to
//!   compare them ([`benchmarks`], [`metrics`], [`harness`]).
//!
//! Runs are bitwise reproducible: a run is a pure function of its
//! configuration and seed, and experiment outputs are a pure function of
//! the config document.

pub mod adaptation;
pub mod benchmarks;
pub mod config;
pub mod de;
pub mod engine;
mod error;
pub mod gao;
pub mod harness;
pub mod means;
pub mod metrics;
pub mod plot;
pub mod report;
pub mod rng;

pub use crate::benchmarks::{FunctionKind, Problem};
pub use crate::config::{ExperimentConfig, OracleSettings, ResolvedConfig};
pub use crate::de::ControlParams;
pub use crate::engine::{run_adaptive, AdaptiveRunner, RunSpec};
pub use crate::error::{GaodeError, Result};
pub use crate::gao::{run_composite, run_oracle, OracleConfig, OracleRunner, OracleTrace};
pub use crate::metrics::{RunMeta, RunRecord};
pub use crate::rng::RngStreams;
