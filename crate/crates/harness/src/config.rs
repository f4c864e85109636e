//! Experiment configuration: a single JSON document describing the
//! problem, the algorithm grid, the initial points and the stopping rule.
//!
//! ```json
//! {
//!   "problem": "paper-sec5",
//!   "algorithms": [
//!     { "algorithm": "svcqa", "lambda": 0.6, "delta_offset": 50 },
//!     { "algorithm": "acqa", "gamma_fraction": 0.9 }
//!   ],
//!   "initial_points": { "seed": 42, "count": 4, "component_range": [0.0, 1.0] },
//!   "thresholds": [1e-2, 1e-3, 1e-4],
//!   "max_iters": 100000,
//!   "outputs": "out"
//! }
//! ```
//!
//! `initial_points` may instead be an explicit list of
//! `{ "x0": [...], "y0": [...] }` pairs, and `problem` an inline object
//! with row-major operator entries and named constraint sets (see
//! [`InlineProblem`]).

use std::path::PathBuf;
use std::sync::Arc;

use serde::Deserialize;

use sep_core::{
    AffineContraction, AlgorithmConfig, AlphaSchedule, AnchorSchedule, AnchorSequence, BallSet,
    BoxSet, ContractionPair, CylinderSet, DeltaSchedule, DenseOperator, FixedGamma, HalfSpace,
    ParabolicSet, SepProblem, SetHandle, StoppingRule, Vector,
};

use crate::error::{HarnessError, Result};
use crate::paper::{builtin_paper_problem, BUILTIN_PROBLEM_NAME};
use crate::prng::random_pairs;

fn default_thresholds() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}

fn default_max_iters() -> u64 {
    100_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    pub initial_points: InitialPointsSpec,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
    /// Stopping tolerance; defaults to the smallest threshold.
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Output directory; defaults to `out`.
    #[serde(default)]
    pub outputs: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProblemSpec {
    /// `"paper-sec5"`.
    Named(String),
    Inline(Box<InlineProblem>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineProblem {
    pub a: OperatorSpec,
    pub b: OperatorSpec,
    pub c: SetSpec,
    pub q: SetSpec,
    #[serde(default)]
    pub known_solution: Option<PointPair>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    /// Shorthand for the parameter-free sets: `"cylinder"`, `"parabolic"`.
    Named(String),
    Full(FullSetSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullSetSpec {
    pub set: String,
    #[serde(default)]
    pub normal: Option<Vec<f64>>,
    #[serde(default)]
    pub offset: Option<f64>,
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub lower: Option<Vec<f64>>,
    #[serde(default)]
    pub upper: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InitialPointsSpec {
    Explicit(Vec<PointPair>),
    Random {
        seed: u64,
        count: usize,
        #[serde(default)]
        component_range: Option<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointPair {
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
}

/// One algorithm of the grid. Only the parameters meaningful for the
/// chosen algorithm may be present.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    /// One of `shcqa`, `halpern`, `srhcqa`, `relaxed-halpern`, `svcqa`,
    /// `srvcqa`, `acqa`, `scqa`, `racqa`, `dong`.
    pub algorithm: String,
    #[serde(default)]
    pub label: Option<String>,
    /// `delta_n = delta_scale / (n + delta_offset)`; defaults 1/(n+50).
    #[serde(default)]
    pub delta_offset: Option<f64>,
    #[serde(default)]
    pub delta_scale: Option<f64>,
    /// `alpha_n = r n/(r n + 1)` ramp factor; default 3.
    #[serde(default)]
    pub alpha_ramp: Option<f64>,
    /// Constant stepsize relaxation (Dong only); default 0.65.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Contraction coefficient for the viscosity variants and Dong;
    /// default 0.6.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Contraction shifts; default zero vectors.
    #[serde(default)]
    pub shift_x: Option<Vec<f64>>,
    #[serde(default)]
    pub shift_y: Option<Vec<f64>>,
    /// Halpern anchor targets; default zero vectors.
    #[serde(default)]
    pub anchor_u: Option<Vec<f64>>,
    #[serde(default)]
    pub anchor_v: Option<Vec<f64>>,
    /// `constant`, `decreasing`, `increasing` or `alternating`; default
    /// `constant`.
    #[serde(default)]
    pub anchor_schedule: Option<String>,
    /// Literal fixed stepsize for the baselines.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Fixed stepsize as a fraction of the admissible bound; default 0.9.
    #[serde(default)]
    pub gamma_fraction: Option<f64>,
}

/// A fully validated experiment, ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub problem: SepProblem,
    pub algorithms: Vec<AlgorithmConfig>,
    pub initial_points: Vec<(Vector, Vector)>,
    pub stop: StoppingRule,
    pub outputs: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config(
                "at least one algorithm is required".into(),
            ));
        }
        if self.max_iters < 1 {
            return Err(HarnessError::Config("max_iters must be at least 1".into()));
        }
        if self.thresholds.is_empty() {
            return Err(HarnessError::Config(
                "at least one threshold is required".into(),
            ));
        }
        if self
            .thresholds
            .iter()
            .any(|t| !(t.is_finite() && *t > 0.0))
        {
            return Err(HarnessError::Config(
                "thresholds must be positive and finite".into(),
            ));
        }
        if self.thresholds.windows(2).any(|w| w[0] <= w[1]) {
            return Err(HarnessError::Config(
                "thresholds must be strictly decreasing".into(),
            ));
        }

        let problem = self.build_problem()?;
        let dim_x = problem.a().cols();
        let dim_y = problem.b().cols();

        let initial_points = match &self.initial_points {
            InitialPointsSpec::Explicit(pairs) => {
                if pairs.is_empty() {
                    return Err(HarnessError::Config(
                        "at least one initial point is required".into(),
                    ));
                }
                pairs
                    .iter()
                    .map(|p| {
                        Ok((
                            Vector::from_slice(&p.x0)?,
                            Vector::from_slice(&p.y0)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            InitialPointsSpec::Random {
                seed,
                count,
                component_range,
            } => {
                if *count == 0 {
                    return Err(HarnessError::Config(
                        "at least one initial point is required".into(),
                    ));
                }
                let range = component_range.unwrap_or([0.0, 1.0]);
                if !(range[0].is_finite() && range[1].is_finite() && range[0] < range[1]) {
                    return Err(HarnessError::Config(format!(
                        "component_range must be a nonempty interval, got [{}, {}]",
                        range[0], range[1]
                    )));
                }
                random_pairs(*seed, *count, dim_x, dim_y, (range[0], range[1]))
                    .into_iter()
                    .map(|(x, y)| Ok((Vector::new(x)?, Vector::new(y)?)))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        for (x0, y0) in &initial_points {
            if x0.dim() != dim_x || y0.dim() != dim_y {
                return Err(HarnessError::Config(format!(
                    "initial point dimensions ({}, {}) do not match the problem ({dim_x}, {dim_y})",
                    x0.dim(),
                    y0.dim()
                )));
            }
        }

        let algorithms = self
            .algorithms
            .iter()
            .map(|spec| spec.build(dim_x, dim_y))
            .collect::<Result<Vec<_>>>()?;
        let mut labels: Vec<&str> = algorithms.iter().map(|a| a.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != algorithms.len() {
            return Err(HarnessError::Config(
                "algorithm labels must be unique; set \"label\" to disambiguate".into(),
            ));
        }
        for cfg in &algorithms {
            if cfg.label.contains(',') || cfg.label.contains('\n') {
                return Err(HarnessError::Config(format!(
                    "algorithm label {:?} may not contain commas or newlines",
                    cfg.label
                )));
            }
        }

        let tolerance = match self.tolerance {
            Some(t) => {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(HarnessError::Config(format!(
                        "tolerance must be nonnegative, got {t}"
                    )));
                }
                t
            }
            None => *self.thresholds.last().expect("nonempty thresholds"),
        };

        Ok(ResolvedExperiment {
            problem,
            algorithms,
            initial_points,
            stop: StoppingRule::new(tolerance, self.max_iters)
                .with_thresholds(self.thresholds.clone()),
            outputs: PathBuf::from(self.outputs.as_deref().unwrap_or("out")),
        })
    }

    fn build_problem(&self) -> Result<SepProblem> {
        match &self.problem {
            ProblemSpec::Named(name) if name == BUILTIN_PROBLEM_NAME => {
                Ok(builtin_paper_problem())
            }
            ProblemSpec::Named(name) => Err(HarnessError::Config(format!(
                "unknown problem {name:?}; expected {BUILTIN_PROBLEM_NAME:?} or an inline problem object"
            ))),
            ProblemSpec::Inline(inline) => {
                let a = DenseOperator::new(inline.a.rows, inline.a.cols, inline.a.entries.clone())
                    .map_err(HarnessError::Core)?;
                let b = DenseOperator::new(inline.b.rows, inline.b.cols, inline.b.entries.clone())
                    .map_err(HarnessError::Core)?;
                let c = inline.c.build(a.cols())?;
                let q = inline.q.build(b.cols())?;
                let mut problem = SepProblem::new(a, b, c, q).map_err(HarnessError::Core)?;
                if let Some(sol) = &inline.known_solution {
                    problem = problem
                        .with_known_solution(
                            Vector::from_slice(&sol.x0)?,
                            Vector::from_slice(&sol.y0)?,
                        )
                        .map_err(HarnessError::Core)?;
                }
                Ok(problem)
            }
        }
    }
}

impl SetSpec {
    fn build(&self, expected_dim: usize) -> Result<SetHandle> {
        let full = match self {
            SetSpec::Named(name) => FullSetSpec {
                set: name.clone(),
                normal: None,
                offset: None,
                center: None,
                radius: None,
                lower: None,
                upper: None,
            },
            SetSpec::Full(full) => full.clone(),
        };
        let handle = match full.set.as_str() {
            "cylinder" => {
                SetHandle::with_both(Arc::new(CylinderSet), Arc::new(CylinderSet))?
            }
            "parabolic" => {
                SetHandle::with_both(Arc::new(ParabolicSet), Arc::new(ParabolicSet))?
            }
            "halfspace" => {
                let normal = full.normal.as_deref().ok_or_else(|| {
                    HarnessError::Config("halfspace requires \"normal\"".into())
                })?;
                let offset = full
                    .offset
                    .ok_or_else(|| HarnessError::Config("halfspace requires \"offset\"".into()))?;
                let h = HalfSpace::new(Vector::from_slice(normal)?, offset)?;
                SetHandle::with_both(Arc::new(h.clone()), Arc::new(h))?
            }
            "ball" => {
                let center = full.center.as_deref().ok_or_else(|| {
                    HarnessError::Config("ball requires \"center\"".into())
                })?;
                let radius = full
                    .radius
                    .ok_or_else(|| HarnessError::Config("ball requires \"radius\"".into()))?;
                let ball = BallSet::new(Vector::from_slice(center)?, radius)?;
                SetHandle::with_both(Arc::new(ball.clone()), Arc::new(ball))?
            }
            "box" => {
                let lower = full
                    .lower
                    .as_deref()
                    .ok_or_else(|| HarnessError::Config("box requires \"lower\"".into()))?;
                let upper = full
                    .upper
                    .as_deref()
                    .ok_or_else(|| HarnessError::Config("box requires \"upper\"".into()))?;
                let b = BoxSet::new(Vector::from_slice(lower)?, Vector::from_slice(upper)?)?;
                SetHandle::with_both(Arc::new(b.clone()), Arc::new(b))?
            }
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown set {other:?}; expected cylinder, parabolic, halfspace, ball or box"
                )))
            }
        };
        if handle.dim() != expected_dim {
            return Err(HarnessError::Config(format!(
                "set {:?} has dimension {}, the operator expects {}",
                full.set,
                handle.dim(),
                expected_dim
            )));
        }
        Ok(handle)
    }
}

impl AlgorithmSpec {
    /// Lower to a solver configuration, rejecting parameters that do not
    /// belong to the chosen algorithm.
    pub fn build(&self, dim_x: usize, dim_y: usize) -> Result<AlgorithmConfig> {
        let name = self.algorithm.to_ascii_lowercase();
        let cfg = match name.as_str() {
            "shcqa" | "halpern" | "srhcqa" | "relaxed-halpern" => {
                self.forbid(&[
                    ("alpha", self.alpha.is_some()),
                    ("lambda", self.lambda.is_some()),
                    ("shift_x", self.shift_x.is_some()),
                    ("shift_y", self.shift_y.is_some()),
                    ("gamma", self.gamma.is_some()),
                    ("gamma_fraction", self.gamma_fraction.is_some()),
                ])?;
                let anchors = self.anchors(dim_x, dim_y, name == "halpern" || name == "relaxed-halpern")?;
                let delta = self.delta()?;
                let alpha = self.alpha_ramp()?;
                let cfg = match name.as_str() {
                    "shcqa" => AlgorithmConfig::shcqa(anchors, delta, alpha),
                    "srhcqa" => AlgorithmConfig::srhcqa(anchors, delta, alpha),
                    "halpern" => AlgorithmConfig::shcqa(anchors, delta, alpha).with_label("Halpern"),
                    _ => AlgorithmConfig::srhcqa(anchors, delta, alpha)
                        .with_label("RelaxedHalpern"),
                };
                cfg
            }
            "svcqa" | "srvcqa" => {
                self.forbid(&[
                    ("alpha", self.alpha.is_some()),
                    ("anchor_u", self.anchor_u.is_some()),
                    ("anchor_v", self.anchor_v.is_some()),
                    ("anchor_schedule", self.anchor_schedule.is_some()),
                    ("gamma", self.gamma.is_some()),
                    ("gamma_fraction", self.gamma_fraction.is_some()),
                ])?;
                let contractions = self.contractions(dim_x, dim_y)?;
                let delta = self.delta()?;
                let alpha = self.alpha_ramp()?;
                if name == "svcqa" {
                    AlgorithmConfig::svcqa(contractions, delta, alpha)
                } else {
                    AlgorithmConfig::srvcqa(contractions, delta, alpha)
                }
            }
            "acqa" | "scqa" | "racqa" => {
                self.forbid(&[
                    ("alpha", self.alpha.is_some()),
                    ("alpha_ramp", self.alpha_ramp.is_some()),
                    ("lambda", self.lambda.is_some()),
                    ("shift_x", self.shift_x.is_some()),
                    ("shift_y", self.shift_y.is_some()),
                    ("anchor_u", self.anchor_u.is_some()),
                    ("anchor_v", self.anchor_v.is_some()),
                    ("anchor_schedule", self.anchor_schedule.is_some()),
                    ("delta_offset", self.delta_offset.is_some()),
                    ("delta_scale", self.delta_scale.is_some()),
                ])?;
                let gamma = match (self.gamma, self.gamma_fraction) {
                    (Some(_), Some(_)) => {
                        return Err(HarnessError::Config(
                            "specify either gamma or gamma_fraction, not both".into(),
                        ))
                    }
                    (Some(v), None) => FixedGamma::Value(v),
                    (None, fraction) => FixedGamma::FractionOfBound(fraction.unwrap_or(0.9)),
                };
                match name.as_str() {
                    "acqa" => AlgorithmConfig::acqa(gamma),
                    "scqa" => AlgorithmConfig::scqa(gamma),
                    _ => AlgorithmConfig::racqa(gamma),
                }
            }
            "dong" => {
                self.forbid(&[
                    ("alpha_ramp", self.alpha_ramp.is_some()),
                    ("anchor_u", self.anchor_u.is_some()),
                    ("anchor_v", self.anchor_v.is_some()),
                    ("anchor_schedule", self.anchor_schedule.is_some()),
                    ("gamma", self.gamma.is_some()),
                    ("gamma_fraction", self.gamma_fraction.is_some()),
                ])?;
                AlgorithmConfig::dong(
                    self.contractions(dim_x, dim_y)?,
                    self.delta()?,
                    self.alpha.unwrap_or(0.65),
                )
            }
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown algorithm {other:?}"
                )))
            }
        };
        Ok(match &self.label {
            Some(label) => cfg.with_label(label.clone()),
            None => cfg,
        })
    }

    fn forbid(&self, fields: &[(&str, bool)]) -> Result<()> {
        for (field, present) in fields {
            if *present {
                return Err(HarnessError::Config(format!(
                    "parameter {field:?} does not apply to algorithm {:?}",
                    self.algorithm
                )));
            }
        }
        Ok(())
    }

    fn delta(&self) -> Result<DeltaSchedule> {
        Ok(DeltaSchedule::new(
            self.delta_scale.unwrap_or(1.0),
            self.delta_offset.unwrap_or(50.0),
        )?)
    }

    fn alpha_ramp(&self) -> Result<AlphaSchedule> {
        Ok(AlphaSchedule::ramp(self.alpha_ramp.unwrap_or(3.0))?)
    }

    fn contractions(&self, dim_x: usize, dim_y: usize) -> Result<ContractionPair> {
        let lambda = self.lambda.unwrap_or(0.6);
        let f = match &self.shift_x {
            Some(shift) => AffineContraction::new(lambda, Vector::from_slice(shift)?)?,
            None => AffineContraction::scaling(lambda, dim_x)?,
        };
        let g = match &self.shift_y {
            Some(shift) => AffineContraction::new(lambda, Vector::from_slice(shift)?)?,
            None => AffineContraction::scaling(lambda, dim_y)?,
        };
        Ok(ContractionPair::new(f, g))
    }

    fn anchors(
        &self,
        dim_x: usize,
        dim_y: usize,
        constant_only: bool,
    ) -> Result<(AnchorSequence, AnchorSequence)> {
        let schedule = match self.anchor_schedule.as_deref() {
            None => AnchorSchedule::Constant,
            Some(name) if constant_only => {
                return Err(HarnessError::Config(format!(
                    "anchor_schedule {name:?} does not apply to the constant-anchor variants"
                )))
            }
            Some("constant") => AnchorSchedule::Constant,
            Some("decreasing") => AnchorSchedule::DecreasingRatio,
            Some("increasing") => AnchorSchedule::IncreasingRatio,
            Some("alternating") => AnchorSchedule::Alternating,
            Some(other) => {
                return Err(HarnessError::Config(format!(
                    "unknown anchor schedule {other:?}"
                )))
            }
        };
        let u = match &self.anchor_u {
            Some(u) => Vector::from_slice(u)?,
            None => Vector::zeros(dim_x)?,
        };
        let v = match &self.anchor_v {
            Some(v) => Vector::from_slice(v)?,
            None => Vector::zeros(dim_y)?,
        };
        Ok((
            AnchorSequence::new(u, schedule),
            AnchorSequence::new(v, schedule),
        ))
    }
}
