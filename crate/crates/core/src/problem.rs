//! The split equality problem: find `x in C`, `y in Q` with `A x = B y`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{combine, norm, DenseOperator, Vector};
use crate::sets::{relaxed_halfspace, LevelSetFunction, ProjectableSet, MEMBERSHIP_TOL};

/// A constraint set as seen by the solvers: an exact projector, a level-set
/// description, or both.
///
/// The plain algorithm variants require the exact projector; the relaxed
/// variants require the level-set description. The benchmark sets provide
/// both.
#[derive(Clone)]
pub struct SetHandle {
    projector: Option<Arc<dyn ProjectableSet>>,
    level_set: Option<Arc<dyn LevelSetFunction>>,
    dim: usize,
}

impl SetHandle {
    pub fn exact(projector: Arc<dyn ProjectableSet>) -> Self {
        let dim = projector.dim();
        Self {
            projector: Some(projector),
            level_set: None,
            dim,
        }
    }

    pub fn from_level_set(level_set: Arc<dyn LevelSetFunction>) -> Self {
        let dim = level_set.dim();
        Self {
            projector: None,
            level_set: Some(level_set),
            dim,
        }
    }

    pub fn with_both(
        projector: Arc<dyn ProjectableSet>,
        level_set: Arc<dyn LevelSetFunction>,
    ) -> Result<Self> {
        if projector.dim() != level_set.dim() {
            return Err(Error::dims(
                "set handle descriptions",
                projector.dim(),
                level_set.dim(),
            ));
        }
        let dim = projector.dim();
        Ok(Self {
            projector: Some(projector),
            level_set: Some(level_set),
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projector(&self) -> Result<&dyn ProjectableSet> {
        self.projector.as_deref().ok_or_else(|| {
            Error::RejectedConfig("this set has no exact projection; use a relaxed variant".into())
        })
    }

    pub fn level_set(&self) -> Result<&dyn LevelSetFunction> {
        self.level_set.as_deref().ok_or_else(|| {
            Error::RejectedConfig(
                "this set has no level-set description; relaxed variants need one".into(),
            )
        })
    }

    pub fn has_projector(&self) -> bool {
        self.projector.is_some()
    }

    pub fn has_level_set(&self) -> bool {
        self.level_set.is_some()
    }

    /// Projection used by diagnostics: exact when available, otherwise the
    /// half-space relaxation linearized at `x` (which agrees on membership:
    /// the result equals `x` iff `x` is in the set).
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        if let Some(p) = &self.projector {
            return p.project(x);
        }
        let h = relaxed_halfspace(self.level_set()?, x)?;
        h.project(x)
    }

    pub fn violation(&self, x: &Vector) -> Result<f64> {
        if let Some(p) = &self.projector {
            return p.violation(x);
        }
        Ok(self.level_set()?.value(x)?.max(0.0))
    }
}

impl fmt::Debug for SetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetHandle")
            .field("dim", &self.dim)
            .field("projector", &self.projector.is_some())
            .field("level_set", &self.level_set.is_some())
            .finish()
    }
}

/// Problem data bundle `(A, B, C, Q)` with an optional known solution used
/// for diagnostics.
#[derive(Clone, Debug)]
pub struct SepProblem {
    a: DenseOperator,
    b: DenseOperator,
    c: SetHandle,
    q: SetHandle,
    known_solution: Option<(Vector, Vector)>,
}

impl SepProblem {
    pub fn new(a: DenseOperator, b: DenseOperator, c: SetHandle, q: SetHandle) -> Result<Self> {
        if a.rows() != b.rows() {
            return Err(Error::dims("operator codomains", a.rows(), b.rows()));
        }
        if c.dim() != a.cols() {
            return Err(Error::dims("first constraint set", a.cols(), c.dim()));
        }
        if q.dim() != b.cols() {
            return Err(Error::dims("second constraint set", b.cols(), q.dim()));
        }
        Ok(Self {
            a,
            b,
            c,
            q,
            known_solution: None,
        })
    }

    /// Attach a solution pair used as the diagnostic target; it must be
    /// feasible and satisfy `A x = B y` to within 1e-9.
    pub fn with_known_solution(mut self, x: Vector, y: Vector) -> Result<Self> {
        if self.c.violation(&x)? > MEMBERSHIP_TOL {
            return Err(Error::RejectedConfig(
                "known solution x is not a member of C".into(),
            ));
        }
        if self.q.violation(&y)? > MEMBERSHIP_TOL {
            return Err(Error::RejectedConfig(
                "known solution y is not a member of Q".into(),
            ));
        }
        let gap = norm(&self.equality_residual(&x, &y)?)?;
        if gap > 1e-9 {
            return Err(Error::RejectedConfig(format!(
                "known solution violates Ax = By by {gap:e}"
            )));
        }
        self.known_solution = Some((x, y));
        Ok(self)
    }

    pub fn a(&self) -> &DenseOperator {
        &self.a
    }

    pub fn b(&self) -> &DenseOperator {
        &self.b
    }

    pub fn c(&self) -> &SetHandle {
        &self.c
    }

    pub fn q(&self) -> &SetHandle {
        &self.q
    }

    pub fn known_solution(&self) -> Option<&(Vector, Vector)> {
        self.known_solution.as_ref()
    }

    /// `A x - B y`, the equality residual whose squared norm is the error
    /// estimate `E_n`.
    pub fn equality_residual(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        combine(1.0, &self.a.apply(x)?, -1.0, &self.b.apply(y)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{CylinderSet, ParabolicSet};

    fn paper_like_problem() -> SepProblem {
        let a = DenseOperator::diagonal(&[5.0_f64.sqrt(), 5.0, 1.0]).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::with_both(Arc::new(CylinderSet), Arc::new(CylinderSet)).unwrap();
        let q = SetHandle::with_both(Arc::new(ParabolicSet), Arc::new(ParabolicSet)).unwrap();
        SepProblem::new(a, b, c, q).unwrap()
    }

    #[test]
    fn known_solution_is_validated() {
        let p = paper_like_problem();
        let x = Vector::from_slice(&[0.0, 1.0, 0.0]).unwrap();
        let y = Vector::from_slice(&[0.0, 5.0, 0.0]).unwrap();
        assert!(p.clone().with_known_solution(x.clone(), y.clone()).is_ok());

        // Infeasible x.
        let bad_x = Vector::from_slice(&[0.0, 2.0, 0.0]).unwrap();
        assert!(paper_like_problem()
            .with_known_solution(bad_x, y.clone())
            .is_err());

        // Feasible pair that does not satisfy Ax = By.
        let other_y = Vector::from_slice(&[1.0, 6.5, 0.0]).unwrap();
        assert!(paper_like_problem().with_known_solution(x, other_y).is_err());
    }

    #[test]
    fn mismatched_codomains_are_rejected() {
        let a = DenseOperator::new(2, 3, vec![0.0; 6]).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::exact(Arc::new(CylinderSet));
        let q = SetHandle::exact(Arc::new(ParabolicSet));
        assert!(SepProblem::new(a, b, c, q).is_err());
    }

    #[test]
    fn handle_reports_missing_capabilities() {
        let h = SetHandle::exact(Arc::new(CylinderSet));
        assert!(h.projector().is_ok());
        assert!(h.level_set().is_err());
        let h = SetHandle::from_level_set(Arc::new(CylinderSet));
        assert!(h.projector().is_err());
        assert!(h.level_set().is_ok());
    }

    #[test]
    fn problems_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<SepProblem>();
        assert_send_sync::<SetHandle>();
    }
}
