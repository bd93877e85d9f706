//! Seeded verification harness for the identities in `ellipsum-core`.
//!
//! [`sample_instance`] draws an admissible instance for `(seed, identity,
//! trial)`, [`run_suite`] evaluates many of them and [`emit_report`] renders
//! the result as a table or as line-delimited JSON.

pub mod balance;
pub mod config;
pub mod identity;
pub mod report;
pub mod sampler;
pub mod suite;

pub use config::{SamplerConfig, Shape, ShapeBounds, ShapeSpec};
pub use identity::{parse_selection, Identity};
pub use report::{emit_report, parse_structured, Format};
pub use sampler::{sample_instance, trial_rng, Instance, ParamValue, Params};
pub use suite::{evaluate, run_suite, SuiteReport, TrialReport};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),

    #[error("bad shape for {identity}: {reason}")]
    BadShape { identity: String, reason: String },

    #[error("no admissible {identity} instance for trial {trial} after {attempts} attempts")]
    Unsampleable {
        identity: String,
        trial: u32,
        attempts: u32,
    },

    #[error("malformed report: {0}")]
    Report(String),

    #[error(transparent)]
    Core(#[from] ellipsum_core::Error),
}
