//! Parameter sequences driving the iterations: the relaxation weights
//! `alpha_n` and `delta_n`, the anchor sequences of the Halpern-type
//! algorithms, and the affine contraction maps of the viscosity-type
//! algorithms.
//!
//! Iteration indices start at 1: several of the stock schedules
//! (`alpha_n = 3n/(3n+1)`, the increasing anchor ratio `(n+1)^2/n^2`) are
//! zero or undefined at `n = 0`.

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// First iteration index used by the drivers and schedules.
pub const N_START: u64 = 1;

/// Schedule for the stepsize relaxation `alpha_n`, constrained to (0, 1).
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSchedule {
    /// Constant `alpha`.
    Constant(f64),
    /// `alpha_n = factor*n / (factor*n + 1)`, e.g. factor 3 gives the
    /// benchmark's `3n/(3n+1)`.
    RampRatio { factor: f64 },
}

impl AlphaSchedule {
    pub fn constant(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return Err(Error::RejectedConfig(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(AlphaSchedule::Constant(alpha))
    }

    pub fn ramp(factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::RejectedConfig(format!(
                "alpha ramp factor must be positive, got {factor}"
            )));
        }
        Ok(AlphaSchedule::RampRatio { factor })
    }

    /// Value at iteration `n`; rejected unless it lies in (0, 1).
    pub fn eval(&self, n: u64) -> Result<f64> {
        let a = match self {
            AlphaSchedule::Constant(a) => *a,
            AlphaSchedule::RampRatio { factor } => {
                let fnn = factor * n as f64;
                fnn / (fnn + 1.0)
            }
        };
        if !(a.is_finite() && a > 0.0 && a < 1.0) {
            return Err(Error::RejectedConfig(format!(
                "alpha schedule produced {a} outside (0, 1) at n = {n}"
            )));
        }
        Ok(a)
    }
}

/// Anchor-mixing schedule `delta_n = scale / (n + offset)`, constrained to
/// (0, 1) for every `n >= 1`. The benchmark cases are `1/(n+1)`,
/// `1/(n+10)`, `1/(n+30)` and `1/(n+50)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSchedule {
    scale: f64,
    offset: f64,
}

impl DeltaSchedule {
    pub fn new(scale: f64, offset: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0 && offset.is_finite() && offset >= 0.0) {
            return Err(Error::RejectedConfig(format!(
                "delta schedule requires scale > 0 and offset >= 0, got {scale}/(n+{offset})"
            )));
        }
        if scale / (1.0 + offset) >= 1.0 {
            return Err(Error::RejectedConfig(format!(
                "delta schedule {scale}/(n+{offset}) leaves (0, 1) at n = 1"
            )));
        }
        Ok(Self { scale, offset })
    }

    /// `1/(n + offset)`.
    pub fn one_over_n_plus(offset: f64) -> Result<Self> {
        Self::new(1.0, offset)
    }

    pub fn eval(&self, n: u64) -> f64 {
        self.scale / (n as f64 + self.offset)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// How an anchor sequence approaches its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorSchedule {
    /// `u_n = u` for all n.
    Constant,
    /// `u_n = n^2/(n+1)^2 * u`, monotonically increasing coefficients.
    DecreasingRatio,
    /// `u_n = (n+1)^2/n^2 * u`, defined for `n >= 1`.
    IncreasingRatio,
    /// `u_n = (2n + (-1)^n)/(2n) * u`, defined for `n >= 1`.
    Alternating,
}

/// Convergent anchor sequence `u_n -> target` mixed into the Halpern-type
/// updates.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorSequence {
    target: Vector,
    schedule: AnchorSchedule,
}

impl AnchorSequence {
    pub fn new(target: Vector, schedule: AnchorSchedule) -> Self {
        Self { target, schedule }
    }

    pub fn constant(target: Vector) -> Self {
        Self::new(target, AnchorSchedule::Constant)
    }

    pub fn target(&self) -> &Vector {
        &self.target
    }

    pub fn schedule(&self) -> AnchorSchedule {
        self.schedule
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    fn coefficient(&self, n: u64) -> Result<f64> {
        let nf = n as f64;
        match self.schedule {
            AnchorSchedule::Constant => Ok(1.0),
            AnchorSchedule::DecreasingRatio => Ok(nf * nf / ((nf + 1.0) * (nf + 1.0))),
            AnchorSchedule::IncreasingRatio => {
                if n == 0 {
                    return Err(Error::RejectedConfig(
                        "increasing anchor ratio is undefined at n = 0".into(),
                    ));
                }
                Ok((nf + 1.0) * (nf + 1.0) / (nf * nf))
            }
            AnchorSchedule::Alternating => {
                if n == 0 {
                    return Err(Error::RejectedConfig(
                        "alternating anchor ratio is undefined at n = 0".into(),
                    ));
                }
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                Ok((2.0 * nf + sign) / (2.0 * nf))
            }
        }
    }

    /// Anchor value at iteration `n`.
    pub fn eval(&self, n: u64) -> Result<Vector> {
        match self.schedule {
            // Bitwise-identical to the target, so constant-anchor Halpern
            // reproduces constant-map viscosity exactly.
            AnchorSchedule::Constant => Ok(self.target.clone()),
            _ => self.target.scale(self.coefficient(n)?),
        }
    }

    /// Range of the scalar coefficients over all `n >= 1`; the extremes are
    /// attained at small `n`, which makes the boundedness constant of the
    /// convergence analysis computable.
    pub fn coefficient_range(&self) -> (f64, f64) {
        match self.schedule {
            AnchorSchedule::Constant => (1.0, 1.0),
            AnchorSchedule::DecreasingRatio => (0.25, 1.0),
            AnchorSchedule::IncreasingRatio => (1.0, 4.0),
            AnchorSchedule::Alternating => (0.5, 1.25),
        }
    }
}

/// Affine contraction `x -> lambda * x + shift` with `lambda` in
/// [0, 1/sqrt(2)), the coefficient range the viscosity-type iterations
/// admit.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineContraction {
    lambda: f64,
    shift: Vector,
}

/// Margin keeping contraction coefficients strictly below `1/sqrt(2)`.
pub const CONTRACTION_MARGIN: f64 = 1e-12;

impl AffineContraction {
    pub fn new(lambda: f64, shift: Vector) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0)
            || lambda >= std::f64::consts::FRAC_1_SQRT_2 - CONTRACTION_MARGIN
        {
            return Err(Error::RejectedConfig(format!(
                "contraction coefficient must lie in [0, 1/sqrt(2)), got {lambda}"
            )));
        }
        Ok(Self { lambda, shift })
    }

    /// Pure scaling `x -> lambda * x`.
    pub fn scaling(lambda: f64, dim: usize) -> Result<Self> {
        Self::new(lambda, Vector::zeros(dim)?)
    }

    /// Constant map `x -> value`, i.e. `lambda = 0`.
    pub fn constant(value: Vector) -> Self {
        Self {
            lambda: 0.0,
            shift: value,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.shift.dim() {
            return Err(Error::dims("contraction apply", self.shift.dim(), x.dim()));
        }
        Vector::new(
            x.as_slice()
                .iter()
                .zip(self.shift.as_slice())
                .map(|(v, c)| self.lambda * v + c)
                .collect(),
        )
    }
}

/// The pair of contraction maps `(f, g)` acting on the two variable spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionPair {
    pub f: AffineContraction,
    pub g: AffineContraction,
}

impl ContractionPair {
    pub fn new(f: AffineContraction, g: AffineContraction) -> Self {
        Self { f, g }
    }

    /// `f(x) = lambda*x`, `g(y) = lambda*y` on spaces of the given sizes.
    pub fn scaling(lambda: f64, dim_x: usize, dim_y: usize) -> Result<Self> {
        Ok(Self {
            f: AffineContraction::scaling(lambda, dim_x)?,
            g: AffineContraction::scaling(lambda, dim_y)?,
        })
    }
}
