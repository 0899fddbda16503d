//! Fuzzy anti-sway control for suspended loads.
//!
//! A two-input (deflection, deflection rate) fuzzy controller with Gaussian
//! membership terms drives the trolley of a pendulum plant. The crate covers
//! the controller itself, the plant and its integrator, closed-loop metrics
//! and the suspension-length sensitivity sweep.

pub mod config;
pub mod error;
pub mod inference;
pub mod membership;
pub mod plant;
pub mod report;
pub mod rulebase;
pub mod simulation;

pub use config::ExperimentConfig;
pub use error::{Error, Result, RuleParseError};
pub use inference::{Engine, EngineOptions, FiringRecord, InferenceMode, Surface};
pub use membership::{build_partition, eval_membership, fuzzify, sigma_from_spacing, GaussianTerm, Partition};
pub use plant::{derivatives, natural_period, rk4_step, PendulumState, PlantParams};
pub use rulebase::{parse_rulebase, principles_3x3, table_i, RuleBase, RuleLabels, RuleWarning};
pub use simulation::{amplitude_ratio, default_length_grid, run, sweep_lengths, RunConfig, SimResult, SweepResult};
