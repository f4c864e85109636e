//! Dense vectors and operators over `f64`.
//!
//! Benchmark problems are tiny (3x3), so storage is a plain row-major
//! `Vec<f64>`. Every constructor and operation validates dimensions and
//! rejects non-finite results, so a diverging iteration surfaces as an
//! error at the step that produced it rather than as NaN four modules later.

use crate::error::{Error, Result};

/// Dense real coordinate vector.
///
/// Invariants: dimension is at least 1 and every entry is finite. All
/// operations returning a `Vector` re-establish both.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    entries: Vec<f64>,
}

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::RejectedConfig(
                "vector dimension must be at least 1".into(),
            ));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vector construction"));
        }
        Ok(Self { entries })
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Entrywise scaling `s * v`.
    pub fn scale(&self, s: f64) -> Result<Self> {
        Self::new(self.entries.iter().map(|v| s * v).collect())
    }

    /// True iff every entry is exactly `0.0`.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

/// Euclidean inner product.
pub fn inner(u: &Vector, v: &Vector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::dims("inner product", u.dim(), v.dim()));
    }
    let s: f64 = u
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(a, b)| a * b)
        .sum();
    if !s.is_finite() {
        return Err(Error::NonFinite("inner product"));
    }
    Ok(s)
}

/// Squared Euclidean norm.
pub fn norm_sq(v: &Vector) -> Result<f64> {
    inner(v, v)
}

/// Euclidean norm.
pub fn norm(v: &Vector) -> Result<f64> {
    Ok(norm_sq(v)?.sqrt())
}

/// Linear combination `a*u + b*v`.
///
/// Exact for `a = 1, b = 0`: the result is bitwise equal to `u` (including
/// signed zeros, which the arithmetic path would lose).
pub fn combine(a: f64, u: &Vector, b: f64, v: &Vector) -> Result<Vector> {
    if u.dim() != v.dim() {
        return Err(Error::dims("linear combination", u.dim(), v.dim()));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("combination coefficients"));
    }
    if a == 1.0 && b == 0.0 {
        return Ok(u.clone());
    }
    Vector::new(
        u.as_slice()
            .iter()
            .zip(v.as_slice())
            .map(|(x, y)| a * x + b * y)
            .collect(),
    )
}

/// Dense real matrix with forward and adjoint (transpose) application.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    rows: usize,
    cols: usize,
    entries: Vec<f64>, // row-major
}

impl DenseOperator {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::RejectedConfig(
                "operator dimensions must be at least 1x1".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::dims("operator entries", rows * cols, entries.len()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("operator construction"));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self::new(n, n, entries)
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut entries = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = d;
        }
        Self::new(n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    /// Matrix-vector product `A v`.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.cols {
            return Err(Error::dims("operator apply", self.cols, v.dim()));
        }
        let x = v.as_slice();
        let out = self
            .entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(m, xv)| m * xv).sum())
            .collect();
        Vector::new(out)
    }

    /// Transpose action `A* w`; the adjoint of [`DenseOperator::apply`]
    /// with respect to the Euclidean inner product.
    pub fn adjoint_apply(&self, w: &Vector) -> Result<Vector> {
        if w.dim() != self.rows {
            return Err(Error::dims("operator adjoint apply", self.rows, w.dim()));
        }
        let mut out = vec![0.0; self.cols];
        for (row, wi) in self.entries.chunks_exact(self.cols).zip(w.as_slice()) {
            for (o, m) in out.iter_mut().zip(row) {
                *o += m * wi;
            }
        }
        Vector::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[f64]) -> Vector {
        Vector::from_slice(entries).unwrap()
    }

    #[test]
    fn apply_paper_diagonal_operator() {
        // A = diag(sqrt 5, 5, 1) applied to (0, 1, 0) gives (0, 5, 0).
        let a = DenseOperator::diagonal(&[5.0_f64.sqrt(), 5.0, 1.0]).unwrap();
        let out = a.apply(&v(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(out, v(&[0.0, 5.0, 0.0]));
    }

    #[test]
    fn apply_identity_is_identity() {
        let id = DenseOperator::identity(3).unwrap();
        let x = v(&[1.0, 2.0, 3.0]);
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn apply_small_rectangular() {
        let a = DenseOperator::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.apply(&v(&[1.0, 1.0])).unwrap(), v(&[3.0, 7.0]));
    }

    #[test]
    fn adjoint_extracts_transpose_row() {
        let a = DenseOperator::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.adjoint_apply(&v(&[1.0, 0.0])).unwrap(), v(&[1.0, 2.0]));
    }

    #[test]
    fn symmetric_operator_equals_its_adjoint() {
        let a = DenseOperator::diagonal(&[5.0_f64.sqrt(), 5.0, 1.0]).unwrap();
        let w = v(&[1.0, 1.0, 1.0]);
        assert_eq!(a.adjoint_apply(&w).unwrap(), a.apply(&w).unwrap());
    }

    #[test]
    fn inner_norm_combine_basics() {
        assert_eq!(inner(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
        let c = combine(0.5, &v(&[2.0, 2.0]), 0.5, &v(&[0.0, 0.0])).unwrap();
        assert_eq!(c, v(&[1.0, 1.0]));
    }

    #[test]
    fn combine_identity_coefficients_is_bitwise_exact() {
        let u = v(&[0.1, -0.0, 3.5e-11, -7.25]);
        let w = v(&[9.0, 2.0, -4.0, 1.0]);
        let c = combine(1.0, &u, 0.0, &w).unwrap();
        for (a, b) in c.as_slice().iter().zip(u.as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let a = DenseOperator::new(2, 3, vec![0.0; 6]).unwrap();
        assert!(a.apply(&v(&[1.0, 1.0])).is_err());
        assert!(a.adjoint_apply(&v(&[1.0, 1.0, 1.0])).is_err());
        assert!(inner(&v(&[1.0]), &v(&[1.0, 2.0])).is_err());
        assert!(combine(1.0, &v(&[1.0]), 1.0, &v(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn non_finite_values_are_hard_errors() {
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
        assert!(Vector::new(vec![]).is_err());
        let huge = v(&[1e308, 1e308]);
        assert!(inner(&huge, &huge).is_err());
        assert!(combine(1e308, &huge, 1e308, &huge).is_err());
    }
}
