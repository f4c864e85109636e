//! Per-iteration step engines for the split equality problem, plus the
//! fixed-point residual oracle and the self-adaptive stepsizes.
//!
//! A solution of the problem is exactly a fixed point of
//!
//! ```text
//! x = x - gamma [ (I - P_C) x + A*(A x - B y) ]
//! y = y - gamma [ (I - P_Q) y - B*(A x - B y) ]
//! ```
//!
//! for any `gamma > 0`, so every engine descends along those bracketed
//! directions and differs only in how the result is mixed with an anchor
//! (Halpern type), a contraction image (viscosity type), or projected
//! directly (the classical alternating/simultaneous baselines).

use crate::error::{Error, Result};
use crate::linalg::{combine, norm_sq, Vector};
use crate::problem::SepProblem;
use crate::schedules::{AlphaSchedule, AnchorSequence, ContractionPair};
use crate::sets::{relaxed_halfspace, ProjectableSet};

/// Equality residuals below this threshold are treated as `Ax = By` when
/// selecting the stepsize branch.
pub const RESIDUAL_ZERO_TOL: f64 = 1e-24;

/// Denominators below this threshold are treated as vanished in the
/// adaptive stepsize ratios.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

/// Snapshot of one iterate.
///
/// `x_hat`/`y_hat`, `gamma` and `delta` describe the transition that
/// produced this state; the initial state carries `x_hat = x`,
/// `y_hat = y` and zero parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct IterateState {
    pub n: u64,
    pub x: Vector,
    pub y: Vector,
    pub x_hat: Vector,
    pub y_hat: Vector,
    /// `A x - B y` at `(x, y)`.
    pub residual: Vector,
    /// Error estimate `E = |A x - B y|^2`.
    pub e: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl IterateState {
    pub fn initial(p: &SepProblem, x: Vector, y: Vector, n: u64) -> Result<Self> {
        let residual = p.equality_residual(&x, &y)?;
        let e = norm_sq(&residual)?;
        Ok(Self {
            n,
            x_hat: x.clone(),
            y_hat: y.clone(),
            x,
            y,
            residual,
            e,
            gamma: 0.0,
            delta: 0.0,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn advanced(
        p: &SepProblem,
        n: u64,
        x: Vector,
        y: Vector,
        x_hat: Vector,
        y_hat: Vector,
        gamma: f64,
        delta: f64,
    ) -> Result<Self> {
        let residual = p.equality_residual(&x, &y)?;
        let e = norm_sq(&residual)?;
        Ok(Self {
            n,
            x,
            y,
            x_hat,
            y_hat,
            residual,
            e,
            gamma,
            delta,
        })
    }
}

/// Fixed-point residual of the equivalent system above, evaluated with
/// `gamma = 1`:
/// `( (I - P_C) x + A* r , (I - P_Q) y - B* r )` with `r = A x - B y`.
/// Both components vanish iff `(x, y)` solves the problem.
pub fn residual_map(p: &SepProblem, x: &Vector, y: &Vector) -> Result<(Vector, Vector)> {
    let r = p.equality_residual(x, y)?;
    let cx = p.c().project(x)?;
    let qy = p.q().project(y)?;
    let first = combine(1.0, &combine(1.0, x, -1.0, &cx)?, 1.0, &p.a().adjoint_apply(&r)?)?;
    let second = combine(
        1.0,
        &combine(1.0, y, -1.0, &qy)?,
        -1.0,
        &p.b().adjoint_apply(&r)?,
    )?;
    Ok((first, second))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
        return Err(Error::RejectedConfig(format!(
            "stepsize relaxation alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Self-adaptive stepsize
/// `gamma = alpha * min(1, E / (|A* r|^2 + |B* r|^2))`,
/// falling back to `alpha` when `Ax = By` or when the denominator has
/// vanished while `E > 0`.
pub fn self_adaptive_stepsize(p: &SepProblem, x: &Vector, y: &Vector, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let r = p.equality_residual(x, y)?;
    let e = norm_sq(&r)?;
    if e <= RESIDUAL_ZERO_TOL {
        return Ok(alpha);
    }
    let denom = norm_sq(&p.a().adjoint_apply(&r)?)? + norm_sq(&p.b().adjoint_apply(&r)?)?;
    if denom <= DENOMINATOR_FLOOR {
        return Ok(alpha);
    }
    Ok(alpha * (e / denom).min(1.0))
}

/// Two-ratio stepsize of the Dong et al. comparison algorithm:
/// `gamma = alpha * min(E / |A* r|^2, E / |B* r|^2)`,
/// with vanished denominators treated as `+inf` and `gamma = alpha` when
/// both vanish or `E = 0`.
pub fn dong_stepsize(p: &SepProblem, x: &Vector, y: &Vector, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let r = p.equality_residual(x, y)?;
    let e = norm_sq(&r)?;
    if e == 0.0 {
        return Ok(alpha);
    }
    let da = norm_sq(&p.a().adjoint_apply(&r)?)?;
    let db = norm_sq(&p.b().adjoint_apply(&r)?)?;
    let ratio_a = if da <= DENOMINATOR_FLOOR {
        f64::INFINITY
    } else {
        e / da
    };
    let ratio_b = if db <= DENOMINATOR_FLOOR {
        f64::INFINITY
    } else {
        e / db
    };
    let m = ratio_a.min(ratio_b);
    if m.is_infinite() {
        return Ok(alpha);
    }
    Ok(alpha * m)
}

/// Stepsize rule attached to an algorithm.
#[derive(Clone, Debug, PartialEq)]
pub enum StepsizePolicy {
    /// The min-with-1 self-adaptive rule of the Halpern/viscosity engines.
    SelfAdaptive { alpha: AlphaSchedule },
    /// The two-ratio rule of the Dong et al. engine.
    DongAdaptive { alpha: AlphaSchedule },
    /// Constant stepsize; only the classical baselines use it.
    Fixed { gamma: f64 },
}

impl StepsizePolicy {
    /// Stepsize the step leaving iterate `(x, y)` at index `n` will use.
    pub fn eval(&self, p: &SepProblem, x: &Vector, y: &Vector, n: u64) -> Result<f64> {
        match self {
            StepsizePolicy::SelfAdaptive { alpha } => {
                self_adaptive_stepsize(p, x, y, alpha.eval(n)?)
            }
            StepsizePolicy::DongAdaptive { alpha } => dong_stepsize(p, x, y, alpha.eval(n)?),
            StepsizePolicy::Fixed { gamma } => {
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return Err(Error::RejectedConfig(format!(
                        "fixed stepsize must be positive, got {gamma}"
                    )));
                }
                Ok(*gamma)
            }
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(Error::RejectedConfig(format!(
            "mixing parameter delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Gradient-on-residual intermediates shared by the Halpern and viscosity
/// engines:
/// `x_hat = x - gamma [ (x - c_x) + A* r ]`,
/// `y_hat = y - gamma [ (y - q_y) - B* r ]`,
/// where `c_x`/`q_y` are the projections of the current iterates.
fn hat_pair(
    p: &SepProblem,
    s: &IterateState,
    gamma: f64,
    cx: &Vector,
    qy: &Vector,
) -> Result<(Vector, Vector)> {
    let atr = p.a().adjoint_apply(&s.residual)?;
    let btr = p.b().adjoint_apply(&s.residual)?;
    let dir_x = combine(1.0, &combine(1.0, &s.x, -1.0, cx)?, 1.0, &atr)?;
    let dir_y = combine(1.0, &combine(1.0, &s.y, -1.0, qy)?, -1.0, &btr)?;
    let x_hat = combine(1.0, &s.x, -gamma, &dir_x)?;
    let y_hat = combine(1.0, &s.y, -gamma, &dir_y)?;
    Ok((x_hat, y_hat))
}

/// One step of the self-adaptive Halpern-type CQ algorithm:
/// the hat pair above followed by anchor mixing
/// `x+ = delta u_n + (1 - delta) x_hat` (and likewise for `y`).
pub fn step_shcqa(
    p: &SepProblem,
    s: &IterateState,
    anchors: &(AnchorSequence, AnchorSequence),
    delta: f64,
    policy: &StepsizePolicy,
) -> Result<IterateState> {
    check_delta(delta)?;
    let gamma = policy.eval(p, &s.x, &s.y, s.n)?;
    let cx = p.c().projector()?.project(&s.x)?;
    let qy = p.q().projector()?.project(&s.y)?;
    let (x_hat, y_hat) = hat_pair(p, s, gamma, &cx, &qy)?;
    let u_n = anchors.0.eval(s.n)?;
    let v_n = anchors.1.eval(s.n)?;
    let x_next = combine(delta, &u_n, 1.0 - delta, &x_hat)?;
    let y_next = combine(delta, &v_n, 1.0 - delta, &y_hat)?;
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, delta)
}

/// One step of the self-adaptive viscosity-type CQ algorithm:
/// the hat pair followed by `x+ = delta f(x_hat) + (1 - delta) x_hat`.
pub fn step_svcqa(
    p: &SepProblem,
    s: &IterateState,
    contractions: &ContractionPair,
    delta: f64,
    policy: &StepsizePolicy,
) -> Result<IterateState> {
    check_delta(delta)?;
    let gamma = policy.eval(p, &s.x, &s.y, s.n)?;
    let cx = p.c().projector()?.project(&s.x)?;
    let qy = p.q().projector()?.project(&s.y)?;
    let (x_hat, y_hat) = hat_pair(p, s, gamma, &cx, &qy)?;
    let fx = contractions.f.apply(&x_hat)?;
    let gy = contractions.g.apply(&y_hat)?;
    let x_next = combine(delta, &fx, 1.0 - delta, &x_hat)?;
    let y_next = combine(delta, &gy, 1.0 - delta, &y_hat)?;
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, delta)
}

/// Projections of the current iterates onto the half-space relaxations
/// rebuilt at every iteration from the level-set descriptions.
fn relaxed_projections(p: &SepProblem, s: &IterateState) -> Result<(Vector, Vector)> {
    let cn = relaxed_halfspace(p.c().level_set()?, &s.x)?;
    let qn = relaxed_halfspace(p.q().level_set()?, &s.y)?;
    Ok((cn.project(&s.x)?, qn.project(&s.y)?))
}

/// Relaxed Halpern-type step: as [`step_shcqa`] with the exact projections
/// replaced by half-space relaxations linearized at the current iterates.
pub fn step_srhcqa(
    p: &SepProblem,
    s: &IterateState,
    anchors: &(AnchorSequence, AnchorSequence),
    delta: f64,
    policy: &StepsizePolicy,
) -> Result<IterateState> {
    check_delta(delta)?;
    let gamma = policy.eval(p, &s.x, &s.y, s.n)?;
    let (cx, qy) = relaxed_projections(p, s)?;
    let (x_hat, y_hat) = hat_pair(p, s, gamma, &cx, &qy)?;
    let u_n = anchors.0.eval(s.n)?;
    let v_n = anchors.1.eval(s.n)?;
    let x_next = combine(delta, &u_n, 1.0 - delta, &x_hat)?;
    let y_next = combine(delta, &v_n, 1.0 - delta, &y_hat)?;
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, delta)
}

/// Relaxed viscosity-type step: as [`step_svcqa`] with half-space
/// relaxations in place of the exact projections.
pub fn step_srvcqa(
    p: &SepProblem,
    s: &IterateState,
    contractions: &ContractionPair,
    delta: f64,
    policy: &StepsizePolicy,
) -> Result<IterateState> {
    check_delta(delta)?;
    let gamma = policy.eval(p, &s.x, &s.y, s.n)?;
    let (cx, qy) = relaxed_projections(p, s)?;
    let (x_hat, y_hat) = hat_pair(p, s, gamma, &cx, &qy)?;
    let fx = contractions.f.apply(&x_hat)?;
    let gy = contractions.g.apply(&y_hat)?;
    let x_next = combine(delta, &fx, 1.0 - delta, &x_hat)?;
    let y_next = combine(delta, &gy, 1.0 - delta, &y_hat)?;
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, delta)
}

/// One step of the alternating CQ baseline:
/// `x+ = P_C(x - gamma A* (A x - B y))` followed by
/// `y+ = P_Q(y + gamma B* (A x+ - B y))`; note the updated `x+` inside the
/// second line.
pub fn step_acqa(p: &SepProblem, s: &IterateState, gamma: f64) -> Result<IterateState> {
    let x_next = p.c().projector()?.project(&combine(
        1.0,
        &s.x,
        -gamma,
        &p.a().adjoint_apply(&s.residual)?,
    )?)?;
    let mid = p.equality_residual(&x_next, &s.y)?;
    let y_next = p
        .q()
        .projector()?
        .project(&combine(1.0, &s.y, gamma, &p.b().adjoint_apply(&mid)?)?)?;
    let (x_hat, y_hat) = (x_next.clone(), y_next.clone());
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, 0.0)
}

/// One step of the simultaneous CQ baseline: both updates use the current
/// residual `A x - B y`.
pub fn step_scqa(p: &SepProblem, s: &IterateState, gamma: f64) -> Result<IterateState> {
    let x_next = p.c().projector()?.project(&combine(
        1.0,
        &s.x,
        -gamma,
        &p.a().adjoint_apply(&s.residual)?,
    )?)?;
    let y_next = p.q().projector()?.project(&combine(
        1.0,
        &s.y,
        gamma,
        &p.b().adjoint_apply(&s.residual)?,
    )?)?;
    let (x_hat, y_hat) = (x_next.clone(), y_next.clone());
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, 0.0)
}

/// Relaxed alternating CQ baseline: the alternating pattern with the exact
/// projections replaced by half-space relaxations built at the current
/// iterates.
pub fn step_racqa(p: &SepProblem, s: &IterateState, gamma: f64) -> Result<IterateState> {
    let cn = relaxed_halfspace(p.c().level_set()?, &s.x)?;
    let x_next = cn.project(&combine(
        1.0,
        &s.x,
        -gamma,
        &p.a().adjoint_apply(&s.residual)?,
    )?)?;
    let qn = relaxed_halfspace(p.q().level_set()?, &s.y)?;
    let mid = p.equality_residual(&x_next, &s.y)?;
    let y_next = qn.project(&combine(1.0, &s.y, gamma, &p.b().adjoint_apply(&mid)?)?)?;
    let (x_hat, y_hat) = (x_next.clone(), y_next.clone());
    IterateState::advanced(p, s.n + 1, x_next, y_next, x_hat, y_hat, gamma, 0.0)
}

/// One step of the Dong et al. comparison algorithm:
/// `x+ = delta f(x) + (1 - delta) P_C(x - gamma A* r)`,
/// `y+ = delta g(y) + (1 - delta) P_Q(y + gamma B* r)`,
/// with the two-ratio stepsize and the contractions applied to the current
/// iterates rather than the projected points.
pub fn step_dong(
    p: &SepProblem,
    s: &IterateState,
    contractions: &ContractionPair,
    delta: f64,
    alpha: f64,
) -> Result<IterateState> {
    check_delta(delta)?;
    let gamma = dong_stepsize(p, &s.x, &s.y, alpha)?;
    let px = p.c().projector()?.project(&combine(
        1.0,
        &s.x,
        -gamma,
        &p.a().adjoint_apply(&s.residual)?,
    )?)?;
    let py = p.q().projector()?.project(&combine(
        1.0,
        &s.y,
        gamma,
        &p.b().adjoint_apply(&s.residual)?,
    )?)?;
    let fx = contractions.f.apply(&s.x)?;
    let gy = contractions.g.apply(&s.y)?;
    let x_next = combine(delta, &fx, 1.0 - delta, &px)?;
    let y_next = combine(delta, &gy, 1.0 - delta, &py)?;
    IterateState::advanced(p, s.n + 1, x_next, y_next, px, py, gamma, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm, DenseOperator};
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

    #[test]
    fn residual_map_vanishes_exactly_at_the_solution() {
        let p = paper_problem();
        let (rx, ry) = residual_map(&p, &v(&[0.0, 1.0, 0.0]), &v(&[0.0, 5.0, 0.0])).unwrap();
        assert!(norm(&rx).unwrap() <= 1e-12);
        assert!(norm(&ry).unwrap() <= 1e-12);
    }

    #[test]
    fn residual_map_with_identity_b_and_whole_space_q() {
        // With B = I and Q the whole space the second component reduces to
        // -(A x - B y).
        let a = DenseOperator::diagonal(&[2.0, 3.0]).unwrap();
        let b = DenseOperator::identity(2).unwrap();
        let whole = crate::sets::HalfSpace::new(Vector::zeros(2).unwrap(), 0.0).unwrap();
        let c = SetHandle::exact(Arc::new(whole.clone()));
        let q = SetHandle::exact(Arc::new(whole));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let (x, y) = (v(&[1.0, 1.0]), v(&[0.5, -0.5]));
        let r = p.equality_residual(&x, &y).unwrap();
        let (_, ry) = residual_map(&p, &x, &y).unwrap();
        assert_eq!(ry, r.scale(-1.0).unwrap());
    }

    #[test]
    fn residual_map_is_nonzero_away_from_solutions() {
        let p = paper_problem();
        let (rx, ry) = residual_map(&p, &v(&[1.0, -2.0, 0.3]), &v(&[2.0, 1.0, -4.0])).unwrap();
        assert!(norm(&rx).unwrap() + norm(&ry).unwrap() > 1e-3);
    }

    #[test]
    fn self_adaptive_stepsize_hand_computed_case() {
        // x = (1,1,1), y = 0: r = (sqrt 5, 5, 1), E = 31,
        // |A* r|^2 = 651, |B* r|^2 = 31, so gamma = 0.75 * 31/682.
        let p = paper_problem();
        let gamma =
            self_adaptive_stepsize(&p, &v(&[1.0, 1.0, 1.0]), &Vector::zeros(3).unwrap(), 0.75)
                .unwrap();
        assert!((gamma - 0.75 * 31.0 / 682.0).abs() < 1e-15);
    }

    #[test]
    fn self_adaptive_stepsize_returns_alpha_at_solutions() {
        let p = paper_problem();
        let gamma =
            self_adaptive_stepsize(&p, &v(&[0.0, 1.0, 0.0]), &v(&[0.0, 5.0, 0.0]), 0.4).unwrap();
        assert_eq!(gamma, 0.4);
    }

    #[test]
    fn self_adaptive_stepsize_halves_for_identity_operators() {
        let a = DenseOperator::identity(2).unwrap();
        let b = DenseOperator::identity(2).unwrap();
        let ball = crate::sets::BallSet::new(Vector::zeros(2).unwrap(), 10.0).unwrap();
        let c = SetHandle::exact(Arc::new(ball.clone()));
        let q = SetHandle::exact(Arc::new(ball));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let gamma = self_adaptive_stepsize(&p, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 0.8).unwrap();
        assert!((gamma - 0.4).abs() < 1e-15);
    }

    #[test]
    fn dong_stepsize_hand_computed_case() {
        // Same point as above: ratios 31/651 and 31/31; min is 31/651.
        let p = paper_problem();
        let gamma =
            dong_stepsize(&p, &v(&[1.0, 1.0, 1.0]), &Vector::zeros(3).unwrap(), 0.65).unwrap();
        assert!((gamma - 0.65 * 31.0 / 651.0).abs() < 1e-15);
    }

    #[test]
    fn dong_stepsize_is_alpha_for_identity_operators() {
        let a = DenseOperator::identity(2).unwrap();
        let b = DenseOperator::identity(2).unwrap();
        let ball = crate::sets::BallSet::new(Vector::zeros(2).unwrap(), 10.0).unwrap();
        let c = SetHandle::exact(Arc::new(ball.clone()));
        let q = SetHandle::exact(Arc::new(ball));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let gamma = dong_stepsize(&p, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 0.65).unwrap();
        assert!((gamma - 0.65).abs() < 1e-15);
    }

    #[test]
    fn alpha_bounds_are_enforced() {
        let p = paper_problem();
        let x = v(&[1.0, 1.0, 1.0]);
        let y = Vector::zeros(3).unwrap();
        assert!(self_adaptive_stepsize(&p, &x, &y, 0.0).is_err());
        assert!(self_adaptive_stepsize(&p, &x, &y, 1.0).is_err());
        assert!(dong_stepsize(&p, &x, &y, -0.2).is_err());
    }

    #[test]
    fn shcqa_zero_gamma_zero_delta_limit_is_the_identity() {
        // gamma = 0 (via a zero fixed stepsize) and delta -> 0 freeze the
        // iterate; check with the smallest delta the engine accepts.
        let p = paper_problem();
        let s = IterateState::initial(&p, v(&[0.3, 0.2, 0.1]), v(&[0.4, 0.5, 0.6]), 1).unwrap();
        let anchors = (
            AnchorSequence::constant(s.x.clone()),
            AnchorSequence::constant(s.y.clone()),
        );
        // Anchors equal to the iterate isolate the hat step: with gamma = 0
        // the hats equal the iterates and mixing them with themselves is the
        // identity.
        let next = step_shcqa(
            &p,
            &s,
            &anchors,
            0.5,
            &StepsizePolicy::Fixed { gamma: 1e-300 },
        )
        .unwrap();
        assert!(norm(&combine(1.0, &next.x, -1.0, &s.x).unwrap()).unwrap() < 1e-12);
        assert!(norm(&combine(1.0, &next.y, -1.0, &s.y).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn shcqa_fixes_the_solution_with_anchors_at_it() {
        let p = paper_problem();
        let (xs, ys) = p.known_solution().unwrap().clone();
        let s = IterateState::initial(&p, xs.clone(), ys.clone(), 1).unwrap();
        let anchors = (
            AnchorSequence::constant(xs.clone()),
            AnchorSequence::constant(ys.clone()),
        );
        let policy = StepsizePolicy::SelfAdaptive {
            alpha: AlphaSchedule::ramp(3.0).unwrap(),
        };
        let next = step_shcqa(&p, &s, &anchors, 1.0 / 51.0, &policy).unwrap();
        assert!(norm(&combine(1.0, &next.x, -1.0, &xs).unwrap()).unwrap() < 1e-15);
        assert!(norm(&combine(1.0, &next.y, -1.0, &ys).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn svcqa_with_zero_contraction_shrinks_toward_origin() {
        let p = paper_problem();
        let s = IterateState::initial(&p, v(&[0.0, 0.5, 0.0]), v(&[0.0, 5.5, 0.0]), 1).unwrap();
        let contractions = ContractionPair::scaling(0.0, 3, 3).unwrap();
        let delta = 0.25;
        let next = step_svcqa(
            &p,
            &s,
            &contractions,
            delta,
            &StepsizePolicy::Fixed { gamma: 1e-300 },
        )
        .unwrap();
        // With gamma ~ 0 the hats equal the iterates, so x+ = (1 - delta) x.
        assert!(norm(&combine(1.0, &next.x, -(1.0 - delta), &s.x).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn dong_fixes_the_solution_when_contractions_do() {
        let p = paper_problem();
        let (xs, ys) = p.known_solution().unwrap().clone();
        // f(x) = 0.6 x + 0.4 x*, so f(x*) = x*.
        let f = AffineContractionAt(0.6, &xs);
        let g = AffineContractionAt(0.6, &ys);
        let contractions = ContractionPair::new(f.build(), g.build());
        let s = IterateState::initial(&p, xs.clone(), ys.clone(), 1).unwrap();
        let next = step_dong(&p, &s, &contractions, 1.0 / 51.0, 0.65).unwrap();
        assert!(norm(&combine(1.0, &next.x, -1.0, &xs).unwrap()).unwrap() < 1e-12);
        assert!(norm(&combine(1.0, &next.y, -1.0, &ys).unwrap()).unwrap() < 1e-12);
    }

    /// Helper building `z -> lambda z + (1 - lambda) target`.
    struct AffineContractionAt<'a>(f64, &'a Vector);

    impl AffineContractionAt<'_> {
        fn build(&self) -> crate::schedules::AffineContraction {
            crate::schedules::AffineContraction::new(
                self.0,
                self.1.scale(1.0 - self.0).unwrap(),
            )
            .unwrap()
        }
    }

    #[test]
    fn baselines_fix_the_solution() {
        let p = paper_problem();
        let (xs, ys) = p.known_solution().unwrap().clone();
        let s = IterateState::initial(&p, xs.clone(), ys.clone(), 1).unwrap();
        for next in [
            step_acqa(&p, &s, 0.036).unwrap(),
            step_scqa(&p, &s, 0.9 * 2.0 / 26.0).unwrap(),
            step_racqa(&p, &s, 0.036).unwrap(),
        ] {
            assert!(norm(&combine(1.0, &next.x, -1.0, &xs).unwrap()).unwrap() < 1e-12);
            assert!(norm(&combine(1.0, &next.y, -1.0, &ys).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn relaxed_step_reduces_to_gradient_step_at_interior_points() {
        // At an interior iterate with vanishing subgradient the relaxed
        // projection is the identity and only the residual gradient acts.
        let p = paper_problem();
        let x = v(&[0.2, 0.0, 0.0]); // cylinder gradient vanishes here
        let y = v(&[0.0, 6.0, 0.0]); // strictly inside Q
        let s = IterateState::initial(&p, x.clone(), y.clone(), 1).unwrap();
        let anchors = (
            AnchorSequence::constant(Vector::zeros(3).unwrap()),
            AnchorSequence::constant(Vector::zeros(3).unwrap()),
        );
        let policy = StepsizePolicy::SelfAdaptive {
            alpha: AlphaSchedule::ramp(3.0).unwrap(),
        };
        let next = step_srhcqa(&p, &s, &anchors, 1.0 / 51.0, &policy).unwrap();
        // Reconstruct the expected hats without any projection terms.
        let gamma = next.gamma;
        let atr = p.a().adjoint_apply(&s.residual).unwrap();
        let btr = p.b().adjoint_apply(&s.residual).unwrap();
        let x_hat = combine(1.0, &x, -gamma, &atr).unwrap();
        let y_hat = combine(1.0, &y, gamma, &btr).unwrap();
        assert!(norm(&combine(1.0, &next.x_hat, -1.0, &x_hat).unwrap()).unwrap() < 1e-14);
        assert!(norm(&combine(1.0, &next.y_hat, -1.0, &y_hat).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn relaxed_steps_propagate_infeasible_halfspaces() {
        // A constant positive level-set function has a zero subgradient
        // everywhere, so its linearization is empty at every point.
        struct Unsatisfiable;
        impl crate::sets::LevelSetFunction for Unsatisfiable {
            fn dim(&self) -> usize {
                3
            }
            fn value(&self, _x: &Vector) -> Result<f64> {
                Ok(1.0)
            }
            fn subgradient(&self, _x: &Vector) -> Result<Vector> {
                Vector::zeros(3)
            }
        }
        let a = DenseOperator::identity(3).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::from_level_set(Arc::new(Unsatisfiable));
        let q = SetHandle::from_level_set(Arc::new(ParabolicSet));
        let p = SepProblem::new(a, b, c, q).unwrap();
        let s = IterateState::initial(&p, v(&[0.5, 0.5, 0.5]), v(&[0.1, 0.2, 0.3]), 1).unwrap();
        let anchors = (
            AnchorSequence::constant(Vector::zeros(3).unwrap()),
            AnchorSequence::constant(Vector::zeros(3).unwrap()),
        );
        let policy = StepsizePolicy::SelfAdaptive {
            alpha: AlphaSchedule::ramp(3.0).unwrap(),
        };
        assert!(matches!(
            step_srhcqa(&p, &s, &anchors, 0.1, &policy),
            Err(Error::InfeasibleHalfSpace)
        ));
    }

    #[test]
    fn relaxed_projection_zeroes_the_linearized_value() {
        use crate::sets::{LevelSetFunction, ProjectableSet};
        // With f(x_n) > 0 the half-space projection of x_n lands on the
        // bounding hyperplane: f(x_n) + <xi, P x_n - x_n> = 0.
        let x = v(&[0.0, 2.0, 0.0]);
        let h = relaxed_halfspace(&CylinderSet, &x).unwrap();
        let px = h.project(&x).unwrap();
        let xi = CylinderSet.subgradient(&x).unwrap();
        let lin = CylinderSet.value(&x).unwrap()
            + crate::linalg::inner(&xi, &combine(1.0, &px, -1.0, &x).unwrap()).unwrap();
        assert!(lin.abs() < 1e-12);
    }
}
