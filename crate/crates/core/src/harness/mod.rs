//! Evaluation harness: metrics on built networks and the experiment sweeps.

pub mod config;
pub mod experiments;
pub mod metrics;
pub mod table;

pub use config::{trial_rng, ExperimentConfig, Manifest, DEFAULT_TTL_MULTIPLIERS};
pub use experiments::{run, ExperimentKind, ExperimentOutput, Instance};
pub use metrics::{bridges, cut_probe, degree_vs_activity, epl, relay_load, success_fraction, DegreeRow};
pub use table::{Cell, MetricsTable};
