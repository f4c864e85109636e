//! Benchmark harness for the self-adaptive CQ solvers: the reference
//! problem, experiment configuration and execution, flat-file emission
//! (CSV traces, iteration tables, SVG convergence plots) and the runtime
//! validation battery.

pub mod config;
pub mod emit;
pub mod error;
pub mod paper;
pub mod prng;
pub mod report;
pub mod runner;
pub mod validate;

pub use config::{ExperimentConfig, ResolvedExperiment};
pub use error::{HarnessError, Result};
pub use paper::{builtin_paper_problem, builtin_solution};
pub use prng::SplitMix64;
pub use runner::{run_experiment, ExperimentRun};
