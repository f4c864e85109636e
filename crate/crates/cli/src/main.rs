//! `sep-bench`: benchmark runner and debug utilities for the self-adaptive
//! CQ split equality solvers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use sep_core::{
    BallSet, BoxSet, CylinderSet, HalfSpace, ParabolicSet, ProjectableSet, StoppingRule, Vector,
};
use sep_harness::config::ExperimentConfig;
use sep_harness::emit::{emit_convergence_plot, emit_csv, emit_iteration_table, fmt_f64};
use sep_harness::paper::{
    builtin_paper_problem, delta_study_algorithms, lambda_study_algorithms, table1_algorithms,
    table1_initial_vectors, TABLE1_THRESHOLDS,
};
use sep_harness::report::{render_comparison_report, reproduce_table1};
use sep_harness::runner::run_experiment;
use sep_harness::validate::{all_passed, run_full_suite};
use sep_harness::ResolvedExperiment;

#[derive(Parser)]
#[command(
    name = "sep-bench",
    about = "Benchmarks for self-adaptive CQ algorithms on split equality problems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON configuration file.
    Run {
        /// Path to the experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the configuration's `outputs`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the published iteration-count comparison and report
    /// per-cell deviations.
    ReproduceTable1 {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Regenerate the three convergence figures.
    ReproduceFigures {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Seed for the randomly drawn initial point of the parameter
        /// studies.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Project a point onto a named constraint set.
    Project {
        /// One of: cylinder, parabolic, halfspace, ball, box.
        set: String,
        /// Comma-separated decimals without whitespace, e.g. `0,0,0`.
        point: String,
        /// Half-space normal (halfspace only).
        #[arg(long)]
        normal: Option<String>,
        /// Half-space offset (halfspace only).
        #[arg(long)]
        offset: Option<f64>,
        /// Ball center (ball only).
        #[arg(long)]
        center: Option<String>,
        /// Ball radius (ball only).
        #[arg(long)]
        radius: Option<f64>,
        /// Box lower corner (box only).
        #[arg(long)]
        lower: Option<String>,
        /// Box upper corner (box only).
        #[arg(long)]
        upper: Option<String>,
    },
    /// Run the full invariant validation suite.
    Validate {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                fail(e.to_string().lines().next().unwrap_or("bad arguments"));
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out.as_deref()),
        Command::ReproduceTable1 { out } => cmd_reproduce_table1(&out),
        Command::ReproduceFigures { out, seed } => cmd_reproduce_figures(&out, seed),
        Command::Project {
            set,
            point,
            normal,
            offset,
            center,
            radius,
            lower,
            upper,
        } => cmd_project(
            &set, &point, &normal, offset, &center, radius, &lower, &upper,
        ),
        Command::Validate { seed } => cmd_validate(seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            fail(&message);
            ExitCode::FAILURE
        }
    }
}

/// The single stderr diagnostic every nonzero exit carries.
fn fail(message: &str) {
    let one_line = message.replace('\n', "; ");
    eprintln!("error: {one_line}");
}

/// Tracks files written by a command so a late failure removes partial
/// outputs.
struct Outputs {
    created: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, String> {
        fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
        Ok(Self {
            created: Vec::new(),
        })
    }

    fn emit(
        &mut self,
        path: PathBuf,
        write: impl FnOnce(&Path) -> sep_harness::Result<()>,
    ) -> Result<(), String> {
        match write(&path) {
            Ok(()) => {
                self.created.push(path);
                Ok(())
            }
            Err(e) => {
                self.remove_partial();
                Err(e.to_string())
            }
        }
    }

    fn remove_partial(&self) {
        for path in &self.created {
            let _ = fs::remove_file(path);
        }
    }
}

fn cmd_run(config_path: &Path, out_override: Option<&Path>) -> Result<(), String> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| format!("cannot read {}: {e}", config_path.display()))?;
    let config = ExperimentConfig::from_json(&text).map_err(|e| e.to_string())?;
    let resolved = config.resolve().map_err(|e| e.to_string())?;
    let out_dir = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| resolved.outputs.clone());

    let runs = run_experiment(&resolved).map_err(|e| e.to_string())?;

    let mut outputs = Outputs::new(&out_dir)?;
    outputs.emit(out_dir.join("runs.csv"), |p| emit_csv(&runs, p))?;
    outputs.emit(out_dir.join("table.txt"), |p| {
        emit_iteration_table(&runs, &resolved.stop.thresholds, p)
    })?;
    outputs.emit(out_dir.join("figure_1.svg"), |p| {
        emit_convergence_plot(&runs, "convergence of the error estimate", p)
    })?;

    println!(
        "{} runs written to {} (runs.csv, table.txt, figure_1.svg)",
        runs.len(),
        out_dir.display()
    );
    let failed: Vec<String> = runs
        .iter()
        .filter_map(|r| match &r.record.status {
            sep_core::RunStatus::Failed { message } => {
                Some(format!("{}: {message}", r.algorithm))
            }
            _ => None,
        })
        .collect();
    if !failed.is_empty() {
        return Err(format!(
            "{} run(s) failed [{}]",
            failed.len(),
            failed.join(" | ")
        ));
    }
    Ok(())
}

fn cmd_reproduce_table1(out_dir: &Path) -> Result<(), String> {
    let rep = reproduce_table1().map_err(|e| e.to_string())?;
    let mut outputs = Outputs::new(out_dir)?;
    outputs.emit(out_dir.join("table.txt"), |p| {
        emit_iteration_table(&rep.runs, &TABLE1_THRESHOLDS, p)
    })?;
    let report = render_comparison_report(&rep);
    outputs.emit(out_dir.join("comparison.txt"), |p| {
        fs::write(p, &report).map_err(|e| sep_harness::HarnessError::io(p, e))
    })?;
    print!("{report}");
    if rep.all_within_tolerance() {
        Ok(())
    } else {
        Err(format!(
            "{} table cell(s) deviate from the published counts by more than 20%",
            rep.failures()
        ))
    }
}

fn cmd_reproduce_figures(out_dir: &Path, seed: u64) -> Result<(), String> {
    let problem = builtin_paper_problem();
    let pairs = sep_harness::prng::random_pairs(seed, 1, 3, 3, (0.0, 1.0));
    let random_start = vec![(
        Vector::new(pairs[0].0.clone()).map_err(|e| e.to_string())?,
        Vector::new(pairs[0].1.clone()).map_err(|e| e.to_string())?,
    )];

    let study = |algorithms, points, iters| ResolvedExperiment {
        problem: problem.clone(),
        algorithms,
        initial_points: points,
        stop: StoppingRule::new(0.0, iters).with_thresholds(TABLE1_THRESHOLDS.to_vec()),
        outputs: out_dir.to_path_buf(),
    };

    let mut outputs = Outputs::new(out_dir)?;
    let fig1 = run_experiment(&study(delta_study_algorithms(), random_start.clone(), 500))
        .map_err(|e| e.to_string())?;
    outputs.emit(out_dir.join("figure_1.svg"), |p| {
        emit_convergence_plot(&fig1, "viscosity iteration: mixing-schedule study", p)
    })?;

    let fig2 = run_experiment(&study(lambda_study_algorithms(), random_start, 500))
        .map_err(|e| e.to_string())?;
    outputs.emit(out_dir.join("figure_2.svg"), |p| {
        emit_convergence_plot(&fig2, "viscosity iteration: contraction-coefficient study", p)
    })?;

    let first_start = vec![table1_initial_vectors().remove(0)];
    let fig3 = run_experiment(&study(table1_algorithms(), first_start, 800))
        .map_err(|e| e.to_string())?;
    outputs.emit(out_dir.join("figure_3.svg"), |p| {
        emit_convergence_plot(&fig3, "algorithm comparison from the first printed start", p)
    })?;

    println!(
        "figures written to {} (figure_1.svg, figure_2.svg, figure_3.svg)",
        out_dir.display()
    );
    Ok(())
}

fn parse_point(text: &str) -> Result<Vector, String> {
    let coords = text
        .split(',')
        .map(|c| {
            c.parse::<f64>()
                .map_err(|e| format!("bad coordinate {c:?}: {e}"))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    Vector::new(coords).map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn cmd_project(
    set: &str,
    point: &str,
    normal: &Option<String>,
    offset: Option<f64>,
    center: &Option<String>,
    radius: Option<f64>,
    lower: &Option<String>,
    upper: &Option<String>,
) -> Result<(), String> {
    let x = parse_point(point)?;
    let set: Arc<dyn ProjectableSet> = match set {
        "cylinder" => Arc::new(CylinderSet),
        "parabolic" => Arc::new(ParabolicSet),
        "halfspace" => {
            let normal = normal
                .as_deref()
                .ok_or("halfspace needs --normal and --offset")?;
            let offset = offset.ok_or("halfspace needs --offset")?;
            Arc::new(HalfSpace::new(parse_point(normal)?, offset).map_err(|e| e.to_string())?)
        }
        "ball" => {
            let center = center
                .as_deref()
                .ok_or("ball needs --center and --radius")?;
            let radius = radius.ok_or("ball needs --radius")?;
            Arc::new(BallSet::new(parse_point(center)?, radius).map_err(|e| e.to_string())?)
        }
        "box" => {
            let lower = lower.as_deref().ok_or("box needs --lower and --upper")?;
            let upper = upper.as_deref().ok_or("box needs --upper")?;
            Arc::new(
                BoxSet::new(parse_point(lower)?, parse_point(upper)?).map_err(|e| e.to_string())?,
            )
        }
        other => {
            return Err(format!(
                "unknown set {other:?}; expected cylinder, parabolic, halfspace, ball or box"
            ))
        }
    };
    let projected = set.project(&x).map_err(|e| e.to_string())?;
    let rendered = projected
        .as_slice()
        .iter()
        .map(|&c| fmt_f64(c))
        .collect::<Vec<_>>()
        .join(",");
    println!("{rendered}");
    Ok(())
}

fn cmd_validate(seed: u64) -> Result<(), String> {
    let outcomes = run_full_suite(seed);
    for outcome in &outcomes {
        println!(
            "check {:<34} {}  ({})",
            outcome.name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    if all_passed(&outcomes) {
        println!("all {} checks passed", outcomes.len());
        Ok(())
    } else {
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        Err(format!("{failed} validation check(s) failed"))
    }
}
