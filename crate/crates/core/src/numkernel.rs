//! Dense complex linear algebra: matrices, vectorization, incremental span
//! tracking with an explicit rank tolerance, and spectral utilities.
//!
//! Conventions fixed here and shared by every other module:
//!
//! - **Vectorization is row-major stacking**: the matrix entry `(i, j)` lands
//!   at vector position `i * cols + j`. See [`CMatrix::vectorize`].
//! - **Rank** counts singular values above `rank_rel` times the largest one.
//! - Span membership is decided by modified Gram–Schmidt with one
//!   re-orthogonalization pass; a new direction is accepted only if its
//!   residual survives both passes.

use ndarray::prelude::*;
use ndarray_linalg::{Eig, SVD};
use num_complex::{Complex64, ComplexFloat};

use crate::{Error, Result};

/// Thresholds for all floating-point rank, span and eigenvalue decisions.
///
/// Defaults assume O(1)-normalized generators; every word or bracket is
/// normalized to unit Frobenius norm before span insertion, which keeps the
/// dynamic range of the tracked vectors within double precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative threshold for accepting a new basis direction and for rank
    /// decisions: a residual (or singular value) below `rank_rel` times the
    /// reference scale is treated as zero.
    pub rank_rel: f64,
    /// Acceptance threshold for the orthonormality of tracked basis vectors.
    pub ortho: f64,
    /// Relative tolerance for eigenvalue-modulus comparisons.
    pub eig_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: 1e-9,
            ortho: 1e-10,
            eig_rel: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel", self.rank_rel),
            ("ortho", self.ortho),
            ("eig_rel", self.eig_rel),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance field {name} must lie strictly between 0 and 1, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Dense n×m complex matrix with finite entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    data: Array2<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        let data = Array2::from_shape_vec((rows, cols), entries)
            .expect("shape already checked");
        Self::from_array(data)
    }

    /// Wraps an existing array, checking finiteness.
    pub fn from_array(data: Array2<Complex64>) -> Result<Self> {
        if let Some(((i, j), z)) = data
            .indexed_iter()
            .find(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(format!("entry ({i}, {j}) = {z}")));
        }
        // Keep a standard (row-major) layout so vectorize is a plain copy.
        let data = if data.is_standard_layout() {
            data
        } else {
            data.as_standard_layout().to_owned()
        };
        Ok(CMatrix { data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            data: Array2::zeros((rows, cols)),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix {
            data: Array2::eye(n),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        Self::from_array(Array2::from_shape_fn((rows, cols), |(i, j)| f(i, j)))
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn array(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[[i, j]]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        CMatrix {
            data: self.data.t().mapv(|z| z.conj()),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(CMatrix {
            data: self.data.dot(&other.data),
        })
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        Ok(CMatrix {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch("matrix subtraction".into()));
        }
        Ok(CMatrix {
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            data: self.data.mapv(|z| z * c),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns the matrix scaled to unit Frobenius norm, or `None` for zero.
    pub fn normalized(&self) -> Option<CMatrix> {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            None
        } else {
            Some(self.scale(Complex64::new(1.0 / norm, 0.0)))
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (ar, ac) = (self.rows(), self.cols());
        let (br, bc) = (other.rows(), other.cols());
        let mut out = Array2::zeros((ar * br, ac * bc));
        for i in 0..ar {
            for j in 0..ac {
                let a = self.data[[i, j]];
                for k in 0..br {
                    for l in 0..bc {
                        out[[i * br + k, j * bc + l]] = a * other.data[[k, l]];
                    }
                }
            }
        }
        CMatrix { data: out }
    }

    /// Row-major vectorization: entry `(i, j)` goes to position `i*cols + j`.
    ///
    /// This is the single vectorization convention used throughout the crate;
    /// it is linear, injective and isometric for the Frobenius norm.
    pub fn vectorize(&self) -> Array1<Complex64> {
        Array1::from_iter(self.data.iter().copied())
    }

    /// Inverse of [`CMatrix::vectorize`] for a `rows`×`cols` target shape.
    pub fn from_vectorized(rows: usize, cols: usize, v: ArrayView1<Complex64>) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} cannot fill a {}x{} matrix",
                v.len(),
                rows,
                cols
            )));
        }
        Self::from_array(
            Array2::from_shape_vec((rows, cols), v.to_vec()).expect("length checked"),
        )
    }

    /// Number of singular values above `tol.rank_rel` times the largest one.
    pub fn rank(&self, tol: &Tolerance) -> Result<usize> {
        let (_, s, _) = self
            .data
            .svd(false, false)
            .map_err(|e| Error::EigenConvergence(format!("svd: {e}")))?;
        let smax = s.iter().cloned().fold(0.0_f64, f64::max);
        if smax == 0.0 {
            return Ok(0);
        }
        Ok(s.iter().filter(|&&sv| sv > tol.rank_rel * smax).count())
    }

    /// Full (right) eigendecomposition of a square matrix.
    ///
    /// Returns `(eigenvalue, eigenvector)` pairs with unit-norm eigenvectors.
    pub fn eig_full(&self) -> Result<Vec<(Complex64, Array1<Complex64>)>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "eigendecomposition of a non-square matrix".into(),
            ));
        }
        let (vals, vecs) = self
            .data
            .eig()
            .map_err(|e| Error::EigenConvergence(format!("eig: {e}")))?;
        Ok(vals
            .iter()
            .zip(vecs.columns())
            .map(|(&l, v)| (l, v.to_owned()))
            .collect())
    }
}

/// Convenience wrapper matching the free-function shape used elsewhere.
pub fn vectorize(m: &CMatrix) -> Array1<Complex64> {
    m.vectorize()
}

/// Rank of `m` under `tol`; see [`CMatrix::rank`].
pub fn matrix_rank(m: &CMatrix, tol: &Tolerance) -> Result<usize> {
    m.rank(tol)
}

/// Outcome of a [`SpanTracker::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Added,
    AlreadyInSpan,
}

/// Incrementally maintained orthonormal basis of a subspace of `C^d` (or
/// `R^d` when instantiated at `f64`).
///
/// Uses modified Gram–Schmidt with one re-orthogonalization pass. Plain MGS
/// loses orthogonality near saturation, which is exactly where length
/// decisions are made, hence the second pass.
#[derive(Debug, Clone)]
pub struct SpanTracker<T = Complex64> {
    ambient_dim: usize,
    basis: Vec<Array1<T>>,
    tol: Tolerance,
}

impl<T> SpanTracker<T>
where
    T: ComplexFloat<Real = f64> + 'static,
{
    pub fn new(ambient_dim: usize, tol: Tolerance) -> Self {
        SpanTracker {
            ambient_dim,
            basis: Vec::new(),
            tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Array1<T>] {
        &self.basis
    }

    fn norm(v: &Array1<T>) -> f64 {
        v.iter().map(|&z| z.abs() * z.abs()).sum::<f64>().sqrt()
    }

    /// One MGS sweep: subtract the projection onto every basis vector.
    fn orthogonalize(&self, v: &mut Array1<T>) {
        for b in &self.basis {
            // <b, v> with the conjugate-linear slot on the basis vector.
            let mut ip = T::zero();
            for (&bi, &vi) in b.iter().zip(v.iter()) {
                ip = ip + bi.conj() * vi;
            }
            for (vi, &bi) in v.iter_mut().zip(b.iter()) {
                *vi = *vi - ip * bi;
            }
        }
    }

    /// Inserts `v`, extending the basis if `v` has a component outside the
    /// current span. The zero vector is always `AlreadyInSpan`.
    pub fn insert(&mut self, v: ArrayView1<T>) -> Result<InsertOutcome> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        if v.iter().any(|z| !z.abs().is_finite()) {
            return Err(Error::NonFinite("span_insert input".into()));
        }
        let vnorm = Self::norm(&v.to_owned());
        if vnorm == 0.0 {
            return Ok(InsertOutcome::AlreadyInSpan);
        }
        if self.is_full() {
            return Ok(InsertOutcome::AlreadyInSpan);
        }
        let threshold = self.tol.rank_rel * vnorm;
        let mut r = v.to_owned();
        self.orthogonalize(&mut r);
        if Self::norm(&r) <= threshold {
            return Ok(InsertOutcome::AlreadyInSpan);
        }
        // Re-orthogonalization pass; the direction must survive this too.
        self.orthogonalize(&mut r);
        let rnorm = Self::norm(&r);
        if rnorm <= threshold {
            return Ok(InsertOutcome::AlreadyInSpan);
        }
        let inv = T::from(1.0 / rnorm).expect("real scalar converts");
        self.basis.push(r.mapv(|z| z * inv));
        Ok(InsertOutcome::Added)
    }

    /// Largest pairwise deviation from orthonormality, for diagnostics.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let mut ip = T::zero();
                for (&ai, &bi) in a.iter().zip(b.iter()) {
                    ip = ip + ai.conj() * bi;
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip.abs() - target).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vectorize_identity_2x2() {
        let m = CMatrix::identity(2);
        let v = m.vectorize();
        assert_eq!(v.to_vec(), vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
    }

    #[test]
    fn vectorize_zero_3x3() {
        let m = CMatrix::zeros(3, 3);
        let v = m.vectorize();
        assert_eq!(v.len(), 9);
        assert!(v.iter().all(|z| *z == Complex64::new(0., 0.)));
    }

    #[test]
    fn vectorize_is_linear() {
        // Random-ish fixed 3x3 inputs; linearity must hold exactly up to
        // floating-point rounding.
        let m = CMatrix::from_fn(3, 3, |i, j| c(i as f64 + 0.3, j as f64 - 1.7)).unwrap();
        let n = CMatrix::from_fn(3, 3, |i, j| c((i * j) as f64 - 0.5, 0.25 * i as f64)).unwrap();
        let (alpha, beta) = (c(0.7, -1.1), c(-2.0, 0.4));
        let lhs = m.scale(alpha).add(&n.scale(beta)).unwrap().vectorize();
        let rhs = m.vectorize().mapv(|z| z * alpha) + n.vectorize().mapv(|z| z * beta);
        let err: f64 = (&lhs - &rhs).iter().map(|z| z.norm()).sum();
        assert!(err < 1e-12, "linearity defect {err}");
    }

    #[test]
    fn vectorize_preserves_frobenius_norm() {
        let m = CMatrix::from_fn(4, 3, |i, j| c(1.0 / (1 + i + j) as f64, (i as f64).sin())).unwrap();
        let v = m.vectorize();
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((vnorm - m.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn non_finite_entries_rejected() {
        let res = CMatrix::new(1, 2, vec![c(1., 0.), c(f64::NAN, 0.)]);
        assert!(matches!(res, Err(Error::NonFinite(_))));
    }

    #[test]
    fn rank_identity_and_rank_one() {
        let tol = Tolerance::default();
        assert_eq!(CMatrix::identity(4).rank(&tol).unwrap(), 4);
        // |2><3| in M_4 (zero-based indices 1 and 2).
        let mut e = CMatrix::zeros(4, 4);
        e.data[[1, 2]] = c(1., 0.);
        assert_eq!(e.rank(&tol).unwrap(), 1);
        assert_eq!(CMatrix::zeros(3, 3).rank(&tol).unwrap(), 0);
    }

    #[test]
    fn eig_diagonal_and_shift() {
        let d = CMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c((i + 1) as f64, 0.)
            } else {
                c(0., 0.)
            }
        })
        .unwrap();
        let mut vals: Vec<f64> = d.eig_full().unwrap().iter().map(|(l, _)| l.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.).abs() < 1e-12 && (vals[2] - 3.).abs() < 1e-12);

        let shift = CMatrix::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let mut vals: Vec<f64> = shift.eig_full().unwrap().iter().map(|(l, _)| l.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.).abs() < 1e-12 && (vals[1] - 1.).abs() < 1e-12);
    }

    #[test]
    fn eig_residuals_small() {
        let tol = Tolerance::default();
        let m = CMatrix::from_fn(5, 5, |i, j| c((i as f64 - 2.0) * 0.3 + j as f64, (i * j) as f64 * 0.1)).unwrap();
        let scale = m.frobenius_norm();
        for (l, v) in m.eig_full().unwrap() {
            let mv = m.array().dot(&v);
            let resid: f64 = (&mv - &v.mapv(|z| z * l))
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 10.0 * tol.eig_rel * scale, "residual {resid}");
        }
    }

    #[test]
    fn span_insert_basics() {
        let tol = Tolerance::default();
        let mut tr: SpanTracker<Complex64> = SpanTracker::new(4, tol);
        let e1 = Array1::from_vec(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        assert_eq!(tr.insert(e1.view()).unwrap(), InsertOutcome::Added);
        assert_eq!(tr.dim(), 1);
        let e1x2 = e1.mapv(|z| z * c(2., 0.));
        assert_eq!(tr.insert(e1x2.view()).unwrap(), InsertOutcome::AlreadyInSpan);
        assert_eq!(tr.dim(), 1);
        let e2 = Array1::from_vec(vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        tr.insert(e2.view()).unwrap();
        // e1 + e3 extends {e1, e2} to dimension 3.
        let v = Array1::from_vec(vec![c(1., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
        assert_eq!(tr.insert(v.view()).unwrap(), InsertOutcome::Added);
        assert_eq!(tr.dim(), 3);
    }

    #[test]
    fn span_insert_zero_vector() {
        let mut tr: SpanTracker<Complex64> = SpanTracker::new(3, Tolerance::default());
        let z = Array1::from_vec(vec![c(0., 0.); 3]);
        assert_eq!(tr.insert(z.view()).unwrap(), InsertOutcome::AlreadyInSpan);
    }

    #[test]
    fn span_insert_dimension_mismatch() {
        let mut tr: SpanTracker<Complex64> = SpanTracker::new(3, Tolerance::default());
        let v = Array1::from_vec(vec![c(1., 0.); 4]);
        assert!(matches!(tr.insert(v.view()), Err(Error::DimensionMismatch(_))));
    }

    proptest! {
        #[test]
        fn tracker_monotone_and_bounded(vecs in proptest::collection::vec(
            proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 6), 0..24)) {
            let tol = Tolerance::default();
            let mut tr: SpanTracker<Complex64> = SpanTracker::new(6, tol);
            let mut last = 0usize;
            for v in &vecs {
                let arr = Array1::from_iter(v.iter().map(|&(re, im)| c(re, im)));
                tr.insert(arr.view()).unwrap();
                prop_assert!(tr.dim() >= last);
                prop_assert!(tr.dim() <= 6);
                last = tr.dim();
            }
            // Re-inserting every basis vector never changes the count.
            let before = tr.dim();
            let basis: Vec<_> = tr.basis().to_vec();
            for b in basis {
                prop_assert_eq!(tr.insert(b.view()).unwrap(), InsertOutcome::AlreadyInSpan);
            }
            prop_assert_eq!(tr.dim(), before);
            prop_assert!(tr.orthonormality_defect() < tol.ortho);
        }

        #[test]
        fn rank_invariant_under_well_conditioned_equivalence(seed in 0u64..200) {
            use crate::ensembles::{ginibre, RngSpec};
            let n = 4 + (seed % 5) as usize; // up to 8x8
            let tol = Tolerance::default();
            let m = ginibre(n, &RngSpec { seed, stream: 0 });
            // I + 0.1*G is well conditioned with overwhelming probability.
            let p = CMatrix::identity(n)
                .add(&ginibre(n, &RngSpec { seed, stream: 1 }).scale(c(0.1, 0.)))
                .unwrap();
            let q = CMatrix::identity(n)
                .add(&ginibre(n, &RngSpec { seed, stream: 2 }).scale(c(0.1, 0.)))
                .unwrap();
            let pmq = p.matmul(&m).unwrap().matmul(&q).unwrap();
            prop_assert_eq!(m.rank(&tol).unwrap(), pmq.rank(&tol).unwrap());
        }
    }
}
