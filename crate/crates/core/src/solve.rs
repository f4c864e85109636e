//! Algorithm configurations and the iteration driver.

use crate::engines::{
    residual_map, step_acqa, step_dong, step_racqa, step_scqa, step_shcqa, step_srhcqa,
    step_srvcqa, step_svcqa, IterateState, StepsizePolicy,
};
use crate::error::{Error, Result};
use crate::linalg::{norm, Vector};
use crate::problem::SepProblem;
use crate::schedules::{
    AlphaSchedule, AnchorSequence, ContractionPair, DeltaSchedule, N_START,
};
use crate::spectral::spectral_norm_sq;

/// Fixed stepsize for the classical baselines, either a literal value or a
/// fraction of the problem-dependent admissible upper bound.
#[derive(Clone, Debug, PartialEq)]
pub enum FixedGamma {
    Value(f64),
    /// `fraction * bound`, with the bound `min(1/|A|^2, 1/|B|^2)` for the
    /// alternating baselines and `2/(|A|^2 + |B|^2)` for the simultaneous
    /// one. Fraction must lie in (0, 1).
    FractionOfBound(f64),
}

/// The iteration methods shipped by this crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    /// Self-adaptive Halpern-type CQ iteration with anchor sequences
    /// `(u_n, v_n)`. Constant anchors give the classical Halpern scheme.
    Shcqa {
        anchors: (AnchorSequence, AnchorSequence),
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    },
    /// Relaxed Halpern-type iteration over half-space linearizations.
    Srhcqa {
        anchors: (AnchorSequence, AnchorSequence),
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    },
    /// Self-adaptive viscosity-type CQ iteration with contraction maps.
    Svcqa {
        contractions: ContractionPair,
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    },
    /// Relaxed viscosity-type iteration.
    Srvcqa {
        contractions: ContractionPair,
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    },
    /// Alternating CQ baseline with a fixed stepsize.
    Acqa { gamma: FixedGamma },
    /// Simultaneous CQ baseline with a fixed stepsize.
    Scqa { gamma: FixedGamma },
    /// Relaxed alternating CQ baseline.
    Racqa { gamma: FixedGamma },
    /// Dong et al. comparison algorithm with the two-ratio stepsize.
    Dong {
        contractions: ContractionPair,
        delta: DeltaSchedule,
        alpha: f64,
    },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Shcqa { .. } => "SHCQA",
            Method::Srhcqa { .. } => "SRHCQA",
            Method::Svcqa { .. } => "SVCQA",
            Method::Srvcqa { .. } => "SRVCQA",
            Method::Acqa { .. } => "ACQA",
            Method::Scqa { .. } => "SCQA",
            Method::Racqa { .. } => "RACQA",
            Method::Dong { .. } => "Dong",
        }
    }
}

/// An algorithm identity plus everything its step needs.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmConfig {
    pub label: String,
    pub method: Method,
}

impl AlgorithmConfig {
    pub fn new(label: impl Into<String>, method: Method) -> Self {
        Self {
            label: label.into(),
            method,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn from_method(method: Method) -> Self {
        Self {
            label: method.name().to_string(),
            method,
        }
    }

    pub fn shcqa(
        anchors: (AnchorSequence, AnchorSequence),
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    ) -> Self {
        Self::from_method(Method::Shcqa {
            anchors,
            delta,
            alpha,
        })
    }

    /// Classical Halpern scheme: constant anchors `(u, v)`.
    pub fn halpern(u: Vector, v: Vector, delta: DeltaSchedule, alpha: AlphaSchedule) -> Self {
        Self::from_method(Method::Shcqa {
            anchors: (AnchorSequence::constant(u), AnchorSequence::constant(v)),
            delta,
            alpha,
        })
        .with_label("Halpern")
    }

    pub fn srhcqa(
        anchors: (AnchorSequence, AnchorSequence),
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    ) -> Self {
        Self::from_method(Method::Srhcqa {
            anchors,
            delta,
            alpha,
        })
    }

    /// Relaxed classical Halpern scheme: constant anchors.
    pub fn relaxed_halpern(
        u: Vector,
        v: Vector,
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    ) -> Self {
        Self::from_method(Method::Srhcqa {
            anchors: (AnchorSequence::constant(u), AnchorSequence::constant(v)),
            delta,
            alpha,
        })
        .with_label("RelaxedHalpern")
    }

    pub fn svcqa(contractions: ContractionPair, delta: DeltaSchedule, alpha: AlphaSchedule) -> Self {
        Self::from_method(Method::Svcqa {
            contractions,
            delta,
            alpha,
        })
    }

    pub fn srvcqa(
        contractions: ContractionPair,
        delta: DeltaSchedule,
        alpha: AlphaSchedule,
    ) -> Self {
        Self::from_method(Method::Srvcqa {
            contractions,
            delta,
            alpha,
        })
    }

    pub fn acqa(gamma: FixedGamma) -> Self {
        Self::from_method(Method::Acqa { gamma })
    }

    pub fn scqa(gamma: FixedGamma) -> Self {
        Self::from_method(Method::Scqa { gamma })
    }

    pub fn racqa(gamma: FixedGamma) -> Self {
        Self::from_method(Method::Racqa { gamma })
    }

    pub fn dong(contractions: ContractionPair, delta: DeltaSchedule, alpha: f64) -> Self {
        Self::from_method(Method::Dong {
            contractions,
            delta,
            alpha,
        })
    }
}

/// Stopping criterion plus the list of error thresholds whose first
/// crossings should be recorded.
#[derive(Clone, Debug, PartialEq)]
pub struct StoppingRule {
    /// Stop once `E_n <= tolerance`, evaluated before each step.
    pub tolerance: f64,
    /// Maximum number of steps.
    pub max_iters: u64,
    /// Thresholds for the iterations-to-threshold record.
    pub thresholds: Vec<f64>,
}

impl StoppingRule {
    pub fn new(tolerance: f64, max_iters: u64) -> Self {
        Self {
            tolerance,
            max_iters,
            thresholds: Vec::new(),
        }
    }

    pub fn with_thresholds(mut self, thresholds: Vec<f64>) -> Self {
        self.thresholds = thresholds;
        self
    }
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    /// `E <= tolerance` and the fixed-point residuals confirm a solution.
    Converged,
    /// Step budget exhausted.
    MaxIters,
    /// A step failed, or `E` reached the tolerance at a point the
    /// fixed-point oracle rejects.
    Failed { message: String },
}

impl RunStatus {
    pub fn is_converged(&self) -> bool {
        matches!(self, RunStatus::Converged)
    }
}

/// One row of the iteration trace: the error estimate at iterate `n`
/// together with the stepsize and mixing parameter the step leaving `n`
/// uses (for the final row, would use).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub n: u64,
    pub e: f64,
    pub gamma: f64,
    pub delta: f64,
}

/// Full trace of a single run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub series: Vec<SeriesRow>,
    /// For each requested threshold, the number of steps taken when `E`
    /// first reached it, if it ever did.
    pub crossings: Vec<(f64, Option<u64>)>,
    pub final_x: Vector,
    pub final_y: Vector,
    pub steps: u64,
    pub status: RunStatus,
}

impl RunRecord {
    /// Crossing count for one threshold.
    pub fn crossing(&self, threshold: f64) -> Option<u64> {
        self.crossings
            .iter()
            .find(|(t, _)| *t == threshold)
            .and_then(|(_, c)| *c)
    }
}

/// First index `i` with `series[i].e <= threshold`; since index `i` holds
/// the state after `i` steps, this is also the steps-to-threshold count.
pub fn first_crossing(series: &[SeriesRow], threshold: f64) -> Option<u64> {
    series
        .iter()
        .position(|row| row.e <= threshold)
        .map(|i| i as u64)
}

struct Stepper<'a> {
    problem: &'a SepProblem,
    method: &'a Method,
    resolved_gamma: f64,
    policy: Option<StepsizePolicy>,
}

impl<'a> Stepper<'a> {
    fn prepare(problem: &'a SepProblem, method: &'a Method) -> Result<Self> {
        // Validate capability requirements up front so misconfigurations
        // fail before the loop rather than at the first step.
        match method {
            Method::Shcqa { anchors, .. } => {
                problem.c().projector()?;
                problem.q().projector()?;
                check_anchor_dims(problem, anchors)?;
            }
            Method::Svcqa { contractions, .. } => {
                problem.c().projector()?;
                problem.q().projector()?;
                check_contraction_dims(problem, contractions)?;
            }
            Method::Srhcqa { anchors, .. } => {
                problem.c().level_set()?;
                problem.q().level_set()?;
                check_anchor_dims(problem, anchors)?;
            }
            Method::Srvcqa { contractions, .. } => {
                problem.c().level_set()?;
                problem.q().level_set()?;
                check_contraction_dims(problem, contractions)?;
            }
            Method::Acqa { .. } | Method::Scqa { .. } => {
                problem.c().projector()?;
                problem.q().projector()?;
            }
            Method::Racqa { .. } => {
                problem.c().level_set()?;
                problem.q().level_set()?;
            }
            Method::Dong {
                contractions,
                alpha,
                ..
            } => {
                problem.c().projector()?;
                problem.q().projector()?;
                check_contraction_dims(problem, contractions)?;
                if !(alpha.is_finite() && *alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::RejectedConfig(format!(
                        "Dong stepsize relaxation must lie in (0, 1), got {alpha}"
                    )));
                }
            }
        }

        let resolved_gamma = match method {
            Method::Acqa { gamma } | Method::Racqa { gamma } => {
                resolve_gamma(problem, gamma, BaselineKind::Alternating)?
            }
            Method::Scqa { gamma } => resolve_gamma(problem, gamma, BaselineKind::Simultaneous)?,
            _ => 0.0,
        };

        let policy = match method {
            Method::Shcqa { alpha, .. }
            | Method::Srhcqa { alpha, .. }
            | Method::Svcqa { alpha, .. }
            | Method::Srvcqa { alpha, .. } => Some(StepsizePolicy::SelfAdaptive {
                alpha: alpha.clone(),
            }),
            Method::Dong { alpha, .. } => Some(StepsizePolicy::DongAdaptive {
                alpha: AlphaSchedule::constant(*alpha)?,
            }),
            _ => None,
        };

        Ok(Self {
            problem,
            method,
            resolved_gamma,
            policy,
        })
    }

    fn step(&self, s: &IterateState) -> Result<IterateState> {
        let p = self.problem;
        match self.method {
            Method::Shcqa {
                anchors, delta, ..
            } => step_shcqa(
                p,
                s,
                anchors,
                delta.eval(s.n),
                self.policy.as_ref().expect("policy prepared"),
            ),
            Method::Srhcqa {
                anchors, delta, ..
            } => step_srhcqa(
                p,
                s,
                anchors,
                delta.eval(s.n),
                self.policy.as_ref().expect("policy prepared"),
            ),
            Method::Svcqa {
                contractions,
                delta,
                ..
            } => step_svcqa(
                p,
                s,
                contractions,
                delta.eval(s.n),
                self.policy.as_ref().expect("policy prepared"),
            ),
            Method::Srvcqa {
                contractions,
                delta,
                ..
            } => step_srvcqa(
                p,
                s,
                contractions,
                delta.eval(s.n),
                self.policy.as_ref().expect("policy prepared"),
            ),
            Method::Acqa { .. } => step_acqa(p, s, self.resolved_gamma),
            Method::Scqa { .. } => step_scqa(p, s, self.resolved_gamma),
            Method::Racqa { .. } => step_racqa(p, s, self.resolved_gamma),
            Method::Dong {
                contractions,
                delta,
                alpha,
            } => step_dong(p, s, contractions, delta.eval(s.n), *alpha),
        }
    }

    /// Trace values for the row at state `s`: the stepsize and mixing
    /// parameter the step leaving `s` uses.
    fn row(&self, s: &IterateState) -> Result<SeriesRow> {
        let gamma = match &self.policy {
            Some(policy) => policy.eval(self.problem, &s.x, &s.y, s.n)?,
            None => self.resolved_gamma,
        };
        let delta = match self.method {
            Method::Shcqa { delta, .. }
            | Method::Srhcqa { delta, .. }
            | Method::Svcqa { delta, .. }
            | Method::Srvcqa { delta, .. }
            | Method::Dong { delta, .. } => delta.eval(s.n),
            _ => 0.0,
        };
        Ok(SeriesRow {
            n: s.n,
            e: s.e,
            gamma,
            delta,
        })
    }
}

enum BaselineKind {
    Alternating,
    Simultaneous,
}

fn resolve_gamma(p: &SepProblem, gamma: &FixedGamma, kind: BaselineKind) -> Result<f64> {
    let a_sq = spectral_norm_sq(p.a())?;
    let b_sq = spectral_norm_sq(p.b())?;
    if a_sq == 0.0 || b_sq == 0.0 {
        return Err(Error::RejectedConfig(
            "baseline stepsize bounds require nonzero operators".into(),
        ));
    }
    let bound = match kind {
        BaselineKind::Alternating => (1.0 / a_sq).min(1.0 / b_sq),
        BaselineKind::Simultaneous => 2.0 / (a_sq + b_sq),
    };
    let value = match gamma {
        FixedGamma::Value(v) => *v,
        FixedGamma::FractionOfBound(f) => {
            if !(f.is_finite() && *f > 0.0 && *f < 1.0) {
                return Err(Error::RejectedConfig(format!(
                    "stepsize bound fraction must lie in (0, 1), got {f}"
                )));
            }
            f * bound
        }
    };
    if !(value.is_finite() && value > 0.0 && value < bound) {
        return Err(Error::RejectedConfig(format!(
            "fixed stepsize {value} outside the admissible range (0, {bound}) for this problem"
        )));
    }
    Ok(value)
}

fn check_anchor_dims(p: &SepProblem, anchors: &(AnchorSequence, AnchorSequence)) -> Result<()> {
    if anchors.0.dim() != p.a().cols() {
        return Err(Error::dims("anchor u", p.a().cols(), anchors.0.dim()));
    }
    if anchors.1.dim() != p.b().cols() {
        return Err(Error::dims("anchor v", p.b().cols(), anchors.1.dim()));
    }
    Ok(())
}

fn check_contraction_dims(p: &SepProblem, c: &ContractionPair) -> Result<()> {
    if c.f.dim() != p.a().cols() {
        return Err(Error::dims("contraction f", p.a().cols(), c.f.dim()));
    }
    if c.g.dim() != p.b().cols() {
        return Err(Error::dims("contraction g", p.b().cols(), c.g.dim()));
    }
    Ok(())
}

/// Run one algorithm from the given starting pair until the error
/// estimate reaches the tolerance at an iterate the fixed-point oracle
/// confirms, or the step budget is exhausted. The error estimate alone is
/// not trusted: it can dip below tolerance far from the solution set, so
/// a dip without oracle confirmation keeps the iteration going.
/// Iterations-to-threshold counts always record the first dip.
///
/// Step failures do not abort with an `Err`: they are captured in the
/// returned record so an experiment over many runs can continue. `Err` is
/// reserved for configurations that can never run (wrong capabilities,
/// out-of-range parameters, dimension mismatches).
pub fn solve(
    p: &SepProblem,
    cfg: &AlgorithmConfig,
    x0: Vector,
    y0: Vector,
    stop: &StoppingRule,
) -> Result<RunRecord> {
    if !(stop.tolerance.is_finite() && stop.tolerance >= 0.0) {
        return Err(Error::RejectedConfig(format!(
            "stopping tolerance must be nonnegative, got {}",
            stop.tolerance
        )));
    }
    let stepper = Stepper::prepare(p, &cfg.method)?;

    let mut state = IterateState::initial(p, x0, y0, N_START)?;
    let mut series: Vec<SeriesRow> = Vec::new();
    let mut steps: u64 = 0;

    let status = loop {
        match stepper.row(&state) {
            Ok(row) => series.push(row),
            Err(e) => break RunStatus::Failed {
                message: e.to_string(),
            },
        }
        // Convergence requires the error estimate below tolerance AND the
        // fixed-point oracle to confirm a solution; the error estimate
        // alone can dip below tolerance far from the solution set.
        if state.e <= stop.tolerance {
            match oracle_confirms(p, &state, stop.tolerance) {
                Ok(true) => break RunStatus::Converged,
                Ok(false) => {}
                Err(e) => {
                    break RunStatus::Failed {
                        message: format!("fixed-point oracle failed: {e}"),
                    }
                }
            }
        }
        if steps >= stop.max_iters {
            break RunStatus::MaxIters;
        }
        match stepper.step(&state) {
            Ok(next) => {
                state = next;
                steps += 1;
            }
            Err(e) => {
                break RunStatus::Failed {
                    message: e.to_string(),
                }
            }
        }
    };

    let crossings = stop
        .thresholds
        .iter()
        .map(|&t| (t, first_crossing(&series, t)))
        .collect();

    Ok(RunRecord {
        series,
        crossings,
        final_x: state.x,
        final_y: state.y,
        steps,
        status,
    })
}

/// Whether both fixed-point residual components are within `10 sqrt(tol)`
/// at the given iterate.
fn oracle_confirms(p: &SepProblem, state: &IterateState, tolerance: f64) -> Result<bool> {
    let limit = 10.0 * tolerance.sqrt();
    let (rx, ry) = residual_map(p, &state.x, &state.y)?;
    Ok(norm(&rx)? <= limit && norm(&ry)? <= limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseOperator;
    use crate::problem::SetHandle;
    use crate::sets::{CylinderSet, ParabolicSet};
    use std::sync::Arc;

    fn v(entries: &[f64]) -> Vector {
        Vector::from_slice(entries).unwrap()
    }

    fn paper_problem() -> SepProblem {
        let a = DenseOperator::diagonal(&[5.0_f64.sqrt(), 5.0, 1.0]).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::with_both(Arc::new(CylinderSet), Arc::new(CylinderSet)).unwrap();
        let q = SetHandle::with_both(Arc::new(ParabolicSet), Arc::new(ParabolicSet)).unwrap();
        SepProblem::new(a, b, c, q)
            .unwrap()
            .with_known_solution(v(&[0.0, 1.0, 0.0]), v(&[0.0, 5.0, 0.0]))
            .unwrap()
    }

    fn svcqa_paper_config() -> AlgorithmConfig {
        AlgorithmConfig::svcqa(
            ContractionPair::scaling(0.6, 3, 3).unwrap(),
            DeltaSchedule::one_over_n_plus(50.0).unwrap(),
            AlphaSchedule::ramp(3.0).unwrap(),
        )
    }

    #[test]
    fn starting_at_the_solution_terminates_immediately() {
        let p = paper_problem();
        let record = solve(
            &p,
            &svcqa_paper_config(),
            v(&[0.0, 1.0, 0.0]),
            v(&[0.0, 5.0, 0.0]),
            &StoppingRule::new(1e-12, 100),
        )
        .unwrap();
        assert_eq!(record.steps, 0);
        assert_eq!(record.series.len(), 1);
        assert_eq!(record.series[0].n, N_START);
        assert_eq!(record.series[0].e, 0.0);
        assert!(record.status.is_converged());
    }

    #[test]
    fn zero_step_budget_records_only_the_initial_state() {
        let p = paper_problem();
        let record = solve(
            &p,
            &svcqa_paper_config(),
            v(&[0.5, 0.5, 0.5]),
            v(&[0.5, 0.5, 0.5]),
            &StoppingRule::new(1e-12, 0),
        )
        .unwrap();
        assert_eq!(record.steps, 0);
        assert_eq!(record.series.len(), 1);
        assert_eq!(record.status, RunStatus::MaxIters);
    }

    #[test]
    fn svcqa_reaches_table_one_threshold_near_the_printed_count() {
        let p = paper_problem();
        let record = solve(
            &p,
            &svcqa_paper_config(),
            v(&[0.7922, 0.9595, 0.6557]),
            v(&[0.0357, 0.8491, 0.9340]),
            &StoppingRule::new(1e-2, 10_000).with_thresholds(vec![1e-2]),
        )
        .unwrap();
        assert!(record.status.is_converged());
        let count = record.crossing(1e-2).unwrap();
        // Printed count is 11; allow the acceptance slack of 20% or one
        // iteration, whichever is larger.
        assert!((count as f64 - 11.0).abs() <= 2.2, "count = {count}");
    }

    #[test]
    fn out_of_range_fixed_stepsize_is_rejected_naming_the_bound() {
        let p = paper_problem();
        // Admissible ACQA range on this problem is (0, 0.04).
        let err = solve(
            &p,
            &AlgorithmConfig::acqa(FixedGamma::Value(0.05)),
            v(&[0.5, 0.5, 0.5]),
            v(&[0.5, 0.5, 0.5]),
            &StoppingRule::new(1e-6, 10),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.04"), "message should name the bound: {msg}");
    }

    #[test]
    fn relaxed_method_requires_level_sets() {
        let a = DenseOperator::diagonal(&[1.0, 1.0, 1.0]).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::exact(Arc::new(CylinderSet));
        let q = SetHandle::exact(Arc::new(ParabolicSet));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let cfg = AlgorithmConfig::relaxed_halpern(
            Vector::zeros(3).unwrap(),
            Vector::zeros(3).unwrap(),
            DeltaSchedule::one_over_n_plus(50.0).unwrap(),
            AlphaSchedule::ramp(3.0).unwrap(),
        );
        assert!(solve(
            &p,
            &cfg,
            v(&[0.5, 0.5, 0.5]),
            v(&[0.5, 0.5, 0.5]),
            &StoppingRule::new(1e-6, 10),
        )
        .is_err());
    }

    #[test]
    fn crossings_are_consistent_with_the_series() {
        let p = paper_problem();
        let record = solve(
            &p,
            &svcqa_paper_config(),
            v(&[0.7922, 0.9595, 0.6557]),
            v(&[0.0357, 0.8491, 0.9340]),
            &StoppingRule::new(1e-3, 10_000).with_thresholds(vec![1e-2, 1e-3, 1e-9]),
        )
        .unwrap();
        for (threshold, crossing) in &record.crossings {
            match crossing {
                Some(k) => {
                    let k = *k as usize;
                    assert!(record.series[k].e <= *threshold);
                    assert!(record.series[..k].iter().all(|row| row.e > *threshold));
                }
                None => {
                    assert!(record.series.iter().all(|row| row.e > *threshold));
                }
            }
        }
        // 1e-9 is below the stopping tolerance, so it is never crossed.
        assert_eq!(record.crossing(1e-9), None);
    }

    #[test]
    fn step_failures_are_captured_in_the_record() {
        // An empty linearization makes the first relaxed step fail; the
        // run must end with a diagnostic record, not an Err.
        struct Unsatisfiable;
        impl crate::sets::LevelSetFunction for Unsatisfiable {
            fn dim(&self) -> usize {
                3
            }
            fn value(&self, _x: &Vector) -> crate::error::Result<f64> {
                Ok(1.0)
            }
            fn subgradient(&self, _x: &Vector) -> crate::error::Result<Vector> {
                Vector::zeros(3)
            }
        }
        let a = DenseOperator::identity(3).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::from_level_set(Arc::new(Unsatisfiable));
        let q = SetHandle::from_level_set(Arc::new(ParabolicSet));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let cfg = AlgorithmConfig::relaxed_halpern(
            Vector::zeros(3).unwrap(),
            Vector::zeros(3).unwrap(),
            DeltaSchedule::one_over_n_plus(50.0).unwrap(),
            AlphaSchedule::ramp(3.0).unwrap(),
        );
        let record = solve(
            &p,
            &cfg,
            v(&[0.5, 0.5, 0.5]),
            v(&[0.1, 0.2, 0.3]),
            &StoppingRule::new(1e-6, 100),
        )
        .unwrap();
        match &record.status {
            RunStatus::Failed { message } => assert!(message.contains("infeasible")),
            other => panic!("expected a failure record, got {other:?}"),
        }
        assert_eq!(record.steps, 0);
    }

    #[test]
    fn level_set_only_problems_still_certify_convergence() {
        // Without exact projectors the convergence oracle falls back to
        // the half-space relaxations, which agree on membership.
        let a = DenseOperator::diagonal(&[5.0_f64.sqrt(), 5.0, 1.0]).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::from_level_set(Arc::new(CylinderSet));
        let q = SetHandle::from_level_set(Arc::new(ParabolicSet));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let cfg = AlgorithmConfig::srvcqa(
            ContractionPair::scaling(0.6, 3, 3).unwrap(),
            DeltaSchedule::one_over_n_plus(50.0).unwrap(),
            AlphaSchedule::ramp(3.0).unwrap(),
        );
        let record = solve(
            &p,
            &cfg,
            v(&[0.7922, 0.9595, 0.6557]),
            v(&[0.0357, 0.8491, 0.9340]),
            &StoppingRule::new(1e-4, 50_000),
        )
        .unwrap();
        assert!(record.status.is_converged(), "{:?}", record.status);
    }

    #[test]
    fn identical_runs_produce_identical_records() {
        let p = paper_problem();
        let stop = StoppingRule::new(1e-4, 5_000).with_thresholds(vec![1e-2, 1e-3, 1e-4]);
        let run = || {
            solve(
                &p,
                &svcqa_paper_config(),
                v(&[0.7060, 0.0318, 0.2769]),
                v(&[0.0462, 0.0971, 0.8235]),
                &stop,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
