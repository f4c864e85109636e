//! Experiment execution: one run per (initial point, algorithm) cell.

use std::time::Instant;

use sep_core::{solve, RunRecord, RunStatus, Vector};

use crate::config::ResolvedExperiment;
use crate::error::Result;

/// One completed run with its identifying inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub algorithm: String,
    pub x0: Vector,
    pub y0: Vector,
    pub record: RunRecord,
    /// Wall-clock duration of the run in seconds. Excluded from emitted
    /// artifacts so outputs stay byte-identical across runs.
    pub wall_seconds: f64,
}

/// Execute the full grid, initial points outermost, algorithms in config
/// order within each point. A failing run is captured in its record and
/// the experiment continues.
pub fn run_experiment(exp: &ResolvedExperiment) -> Result<Vec<ExperimentRun>> {
    let mut runs = Vec::with_capacity(exp.initial_points.len() * exp.algorithms.len());
    for (x0, y0) in &exp.initial_points {
        for cfg in &exp.algorithms {
            let started = Instant::now();
            let record = match solve(&exp.problem, cfg, x0.clone(), y0.clone(), &exp.stop) {
                Ok(record) => record,
                // Configuration-level rejection for this cell: keep the
                // experiment going with a failure record.
                Err(e) => RunRecord {
                    series: Vec::new(),
                    crossings: exp.stop.thresholds.iter().map(|&t| (t, None)).collect(),
                    final_x: x0.clone(),
                    final_y: y0.clone(),
                    steps: 0,
                    status: RunStatus::Failed {
                        message: e.to_string(),
                    },
                },
            };
            runs.push(ExperimentRun {
                algorithm: cfg.label.clone(),
                x0: x0.clone(),
                y0: y0.clone(),
                record,
                wall_seconds: started.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(runs)
}
