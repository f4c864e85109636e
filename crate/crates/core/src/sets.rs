//! Metric projections and subgradient machinery for the convex sets used by
//! the CQ iterations.
//!
//! Two capabilities are exposed as traits: [`ProjectableSet`] for sets with a
//! computable nearest-point map, and [`LevelSetFunction`] for sets given as
//! `{x : f(x) <= 0}` with a convex, subdifferentiable `f`. The relaxed
//! algorithm variants never project onto the set itself; they project onto
//! the outer half-space obtained by linearizing `f` at the current iterate
//! (see [`relaxed_halfspace`]).

use crate::error::{Error, Result};
use crate::linalg::{combine, inner, norm_sq, Vector};

/// Absolute tolerance on the defining inequality below which a point is
/// treated as a member of the set.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Closed convex set with an exact metric projection.
pub trait ProjectableSet: Send + Sync {
    /// Ambient dimension.
    fn dim(&self) -> usize;

    /// Nearest point of the set.
    fn project(&self, x: &Vector) -> Result<Vector>;

    /// Nonnegative violation of the defining inequality; zero iff `x` is a
    /// member (up to [`MEMBERSHIP_TOL`]).
    fn violation(&self, x: &Vector) -> Result<f64>;

    fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.violation(x)? <= MEMBERSHIP_TOL)
    }
}

/// Convex function `f` whose zero sublevel set is the constraint set, with
/// a selection of the subdifferential available everywhere.
pub trait LevelSetFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &Vector) -> Result<f64>;

    /// A subgradient of `f` at `x`; the gradient wherever `f` is smooth.
    fn subgradient(&self, x: &Vector) -> Result<Vector>;
}

/// Half-space `{x : <normal, x> <= offset}`.
///
/// A zero normal is allowed only with a nonnegative offset, in which case
/// the half-space is the whole space and projection is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    normal: Vector,
    offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite("half-space offset"));
        }
        if normal.is_zero() && offset < 0.0 {
            return Err(Error::InfeasibleHalfSpace);
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_whole_space(&self) -> bool {
        self.normal.is_zero()
    }
}

impl ProjectableSet for HalfSpace {
    fn dim(&self) -> usize {
        self.normal.dim()
    }

    fn project(&self, x: &Vector) -> Result<Vector> {
        if self.is_whole_space() {
            return Ok(x.clone());
        }
        let s = inner(&self.normal, x)?;
        if s <= self.offset {
            return Ok(x.clone());
        }
        let nn = norm_sq(&self.normal)?;
        combine(1.0, x, -(s - self.offset) / nn, &self.normal)
    }

    fn violation(&self, x: &Vector) -> Result<f64> {
        if self.is_whole_space() {
            return Ok(0.0);
        }
        Ok((inner(&self.normal, x)? - self.offset).max(0.0))
    }
}

impl LevelSetFunction for HalfSpace {
    fn dim(&self) -> usize {
        self.normal.dim()
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        Ok(inner(&self.normal, x)? - self.offset)
    }

    fn subgradient(&self, _x: &Vector) -> Result<Vector> {
        Ok(self.normal.clone())
    }
}

/// Outer half-space linearization of `{f <= 0}` at `point`:
/// `{x : f(point) + <g, x - point> <= 0}` with `g` a subgradient at `point`.
///
/// By the subgradient inequality this half-space contains the sublevel set.
/// When the subgradient vanishes the linearization degenerates: if
/// `f(point) <= 0` the constraint is vacuous and the whole space is
/// returned; otherwise the half-space would be empty, which is an error.
pub fn relaxed_halfspace(f: &dyn LevelSetFunction, point: &Vector) -> Result<HalfSpace> {
    let g = f.subgradient(point)?;
    let val = f.value(point)?;
    if g.is_zero() {
        if val <= 0.0 {
            return HalfSpace::new(g, -val);
        }
        return Err(Error::InfeasibleHalfSpace);
    }
    let offset = inner(&g, point)? - val;
    HalfSpace::new(g, offset)
}

fn require_dim(context: &'static str, expected: usize, x: &Vector) -> Result<()> {
    if x.dim() != expected {
        return Err(Error::dims(context, expected, x.dim()));
    }
    Ok(())
}

/// Benchmark constraint set `C = {x in R^3 : x2^2 + x3^2 - 1 <= 0}`, the
/// solid cylinder around the first coordinate axis.
#[derive(Clone, Copy, Debug, Default)]
pub struct CylinderSet;

impl CylinderSet {
    fn defining(x: &Vector) -> f64 {
        x[1] * x[1] + x[2] * x[2] - 1.0
    }
}

impl ProjectableSet for CylinderSet {
    fn dim(&self) -> usize {
        3
    }

    /// First coordinate is untouched; `(x2, x3)` is scaled radially onto
    /// the closed unit disk when outside it.
    fn project(&self, x: &Vector) -> Result<Vector> {
        require_dim("cylinder projection", 3, x)?;
        let r_sq = x[1] * x[1] + x[2] * x[2];
        if r_sq <= 1.0 {
            return Ok(x.clone());
        }
        let r = r_sq.sqrt();
        Vector::new(vec![x[0], x[1] / r, x[2] / r])
    }

    fn violation(&self, x: &Vector) -> Result<f64> {
        require_dim("cylinder violation", 3, x)?;
        Ok(Self::defining(x).max(0.0))
    }
}

impl LevelSetFunction for CylinderSet {
    fn dim(&self) -> usize {
        3
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        require_dim("cylinder level value", 3, x)?;
        Ok(Self::defining(x))
    }

    fn subgradient(&self, x: &Vector) -> Result<Vector> {
        require_dim("cylinder subgradient", 3, x)?;
        Vector::new(vec![0.0, 2.0 * x[1], 2.0 * x[2]])
    }
}

/// Benchmark constraint set `Q = {y in R^3 : y1^2 - y2 + 5 <= 0}`, the
/// epigraph of `t -> t^2 + 5` in the first two coordinates.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParabolicSet;

impl ParabolicSet {
    fn defining(y: &Vector) -> f64 {
        y[0] * y[0] - y[1] + 5.0
    }

    /// Distance-squared from `(y1, y2)` to the boundary point `(t, t^2+5)`.
    fn boundary_dist_sq(y1: f64, y2: f64, t: f64) -> f64 {
        let s = t * t + 5.0;
        (t - y1) * (t - y1) + (s - y2) * (s - y2)
    }
}

impl ProjectableSet for ParabolicSet {
    fn dim(&self) -> usize {
        3
    }

    /// Third coordinate is untouched. For exterior points the projection
    /// lands on the boundary `s = t^2 + 5`; its first coordinate is the
    /// real root of the stationarity cubic `2t^3 + (11 - 2 y2) t - y1 = 0`
    /// minimizing the distance.
    fn project(&self, y: &Vector) -> Result<Vector> {
        require_dim("parabolic projection", 3, y)?;
        if Self::defining(y) <= 0.0 {
            return Ok(y.clone());
        }
        let t = nearest_parabola_parameter(y[0], y[1])?;
        Vector::new(vec![t, t * t + 5.0, y[2]])
    }

    fn violation(&self, y: &Vector) -> Result<f64> {
        require_dim("parabolic violation", 3, y)?;
        Ok(Self::defining(y).max(0.0))
    }
}

impl LevelSetFunction for ParabolicSet {
    fn dim(&self) -> usize {
        3
    }

    fn value(&self, y: &Vector) -> Result<f64> {
        require_dim("parabolic level value", 3, y)?;
        Ok(Self::defining(y))
    }

    fn subgradient(&self, y: &Vector) -> Result<Vector> {
        require_dim("parabolic subgradient", 3, y)?;
        Vector::new(vec![2.0 * y[0], -1.0, 0.0])
    }
}

const CUBIC_ITERATION_CAP: usize = 200;

/// First coordinate of the nearest point of `{(t, s) : s >= t^2 + 5}` to
/// `(y1, y2)`, assuming `(y1, y2)` lies strictly below the parabola.
fn nearest_parabola_parameter(y1: f64, y2: f64) -> Result<f64> {
    // Stationarity of (t - y1)^2 + (t^2 + 5 - y2)^2 gives the cubic
    // c(t) = 2 t^3 + p t - y1 with p = 11 - 2 y2.
    let p = 11.0 - 2.0 * y2;
    let c = |t: f64| 2.0 * t * t * t + p * t - y1;
    let dc = |t: f64| 6.0 * t * t + p;

    // Every real root lies inside [-bound, bound]: c has the sign of its
    // leading term at both ends of this interval.
    let bound = 1.0 + y1.abs() + y2.max(0.0).sqrt();
    let residual_tol = 1e-12 * (1.0 + y1.abs() + p.abs() + bound * bound * bound);

    let mut candidates: Vec<f64> = Vec::with_capacity(3);
    if p >= 0.0 {
        // c is nondecreasing: a single real root.
        candidates.push(cubic_root_in(
            &c,
            &dc,
            -bound,
            bound,
            residual_tol,
            CUBIC_ITERATION_CAP,
        )?);
    } else {
        // Up to three roots, one per monotone piece between the critical
        // points +-m of c.
        let m = (-p / 6.0).sqrt();
        for (lo, hi) in [(-bound, -m), (-m, m), (m, bound)] {
            let (clo, chi) = (c(lo), c(hi));
            if clo == 0.0 {
                candidates.push(lo);
            } else if chi == 0.0 {
                candidates.push(hi);
            } else if clo.signum() != chi.signum() {
                candidates.push(cubic_root_in(
                    &c,
                    &dc,
                    lo,
                    hi,
                    residual_tol,
                    CUBIC_ITERATION_CAP,
                )?);
            }
        }
    }

    candidates
        .into_iter()
        .min_by(|a, b| {
            ParabolicSet::boundary_dist_sq(y1, y2, *a)
                .total_cmp(&ParabolicSet::boundary_dist_sq(y1, y2, *b))
        })
        .ok_or_else(|| Error::NumericalFailure("parabolic projection found no cubic root".into()))
}

/// Safeguarded Newton/bisection on a monotone bracket of the cubic.
fn cubic_root_in(
    c: &dyn Fn(f64) -> f64,
    dc: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    residual_tol: f64,
    cap: usize,
) -> Result<f64> {
    let mut t = 0.5 * (lo + hi);
    let rising = c(hi) >= c(lo);
    for _ in 0..cap {
        let ct = c(t);
        if ct.abs() <= residual_tol {
            return Ok(t);
        }
        if (ct > 0.0) == rising {
            hi = t;
        } else {
            lo = t;
        }
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return Ok(t);
        }
        let d = dc(t);
        let newton = t - ct / d;
        t = if d != 0.0 && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NumericalFailure(format!(
        "parabolic projection root finder did not converge within {cap} iterations"
    )))
}

/// Closed Euclidean ball of the given center and radius.
#[derive(Clone, Debug)]
pub struct BallSet {
    center: Vector,
    radius: f64,
}

impl BallSet {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::RejectedConfig(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

impl ProjectableSet for BallSet {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn project(&self, x: &Vector) -> Result<Vector> {
        require_dim("ball projection", self.center.dim(), x)?;
        let d = combine(1.0, x, -1.0, &self.center)?;
        let dist = norm_sq(&d)?.sqrt();
        if dist <= self.radius {
            return Ok(x.clone());
        }
        combine(1.0, &self.center, self.radius / dist, &d)
    }

    fn violation(&self, x: &Vector) -> Result<f64> {
        require_dim("ball violation", self.center.dim(), x)?;
        let d = combine(1.0, x, -1.0, &self.center)?;
        Ok((norm_sq(&d)?.sqrt() - self.radius).max(0.0))
    }
}

impl LevelSetFunction for BallSet {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    /// `f(x) = |x - center|^2 - radius^2`, smooth and convex.
    fn value(&self, x: &Vector) -> Result<f64> {
        require_dim("ball level value", self.center.dim(), x)?;
        let d = combine(1.0, x, -1.0, &self.center)?;
        Ok(norm_sq(&d)? - self.radius * self.radius)
    }

    fn subgradient(&self, x: &Vector) -> Result<Vector> {
        require_dim("ball subgradient", self.center.dim(), x)?;
        let d = combine(1.0, x, -1.0, &self.center)?;
        d.scale(2.0)
    }
}

/// Axis-aligned box `{x : lower <= x <= upper}` (componentwise).
#[derive(Clone, Debug)]
pub struct BoxSet {
    lower: Vector,
    upper: Vector,
}

impl BoxSet {
    pub fn new(lower: Vector, upper: Vector) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::dims("box bounds", lower.dim(), upper.dim()));
        }
        if lower
            .as_slice()
            .iter()
            .zip(upper.as_slice())
            .any(|(l, u)| l > u)
        {
            return Err(Error::RejectedConfig(
                "box lower bound exceeds upper bound".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    /// Largest one-sided bound violation over all coordinates; negative in
    /// the interior. Convex as a maximum of affine functions.
    fn max_violation(&self, x: &Vector) -> (usize, f64, f64) {
        let mut best = (0usize, f64::NEG_INFINITY, 0.0f64);
        for i in 0..x.dim() {
            let below = self.lower[i] - x[i];
            let above = x[i] - self.upper[i];
            let (v, sign) = if below >= above {
                (below, -1.0)
            } else {
                (above, 1.0)
            };
            if v > best.1 {
                best = (i, v, sign);
            }
        }
        best
    }
}

impl ProjectableSet for BoxSet {
    fn dim(&self) -> usize {
        self.lower.dim()
    }

    fn project(&self, x: &Vector) -> Result<Vector> {
        require_dim("box projection", self.lower.dim(), x)?;
        Vector::new(
            x.as_slice()
                .iter()
                .enumerate()
                .map(|(i, &v)| v.clamp(self.lower[i], self.upper[i]))
                .collect(),
        )
    }

    fn violation(&self, x: &Vector) -> Result<f64> {
        require_dim("box violation", self.lower.dim(), x)?;
        Ok(self.max_violation(x).1.max(0.0))
    }
}

impl LevelSetFunction for BoxSet {
    fn dim(&self) -> usize {
        self.lower.dim()
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        require_dim("box level value", self.lower.dim(), x)?;
        Ok(self.max_violation(x).1)
    }

    fn subgradient(&self, x: &Vector) -> Result<Vector> {
        require_dim("box subgradient", self.lower.dim(), x)?;
        let (i, _, sign) = self.max_violation(x);
        let mut g = vec![0.0; x.dim()];
        g[i] = sign;
        Vector::new(g)
    }
}
