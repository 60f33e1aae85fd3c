//! Quantum channels in Kraus form: Choi machinery, the index of eventual
//! full Kraus rank, the strong-irreducibility spectral test, primitivity
//! bounds and the zero-error capacity dichotomy.
//!
//! A channel `E(X) = Σ Aᵢ X Aᵢ†` reaches full Kraus rank at step `m` exactly
//! when the words of length `m` in its Kraus operators span `M_n(C)`, so the
//! index of full Kraus rank *is* the Wie-length of the Kraus tuple; this
//! module delegates that computation to [`crate::wordspan`] and layers the
//! channel-theoretic views (Choi rank, transfer spectrum, strict positivity)
//! on top.
//!
//! Transfer-matrix convention, shared by every function here: `T` is the
//! n²×n² matrix with `T · vectorize(X) = vectorize(E(X))` under the crate's
//! row-major vectorization, i.e. `T = Σ Aᵢ ⊗ conj(Aᵢ)`. Channel powers are
//! composed as `T^m`, never by expanding the `g^m` Kraus products.

use ndarray::prelude::*;
use ndarray_linalg::Solve;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::numkernel::{CMatrix, Tolerance};
use crate::wordspan::{wie_length, GeneratingSystem, LengthReport, LengthValue};
use crate::{Error, Result};

/// Maximum admissible trace-preservation residual ‖Σ Aᵢ†Aᵢ − 1‖_F.
pub const TP_TOL: f64 = 1e-8;
/// Absolute window around 1 for picking the fixed-point eigenspace.
const FIXED_POINT_EIG_TOL: f64 = 1e-8;
/// Positive-definiteness floor for candidate fixed points.
const PD_MIN_EIG: f64 = 1e-8;
/// A pair (φ, ψ) with `⟨ψ| E^ℓ(φφ†) |ψ⟩` below this certifies q(E) > ℓ.
const WITNESS_RESIDUAL: f64 = 1e-10;
/// Random restarts of the alternating witness search.
const WITNESS_RESTARTS: usize = 20;

/// Trace-preserving channel given by `g` Kraus operators on `C^n`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    n: usize,
    kraus: Vec<CMatrix>,
    tp_residual: f64,
}

impl KrausChannel {
    /// Validates shapes and trace preservation (residual ≤ `TP_TOL`).
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("a channel needs g >= 1 Kraus operators".into()))?;
        if !first.is_square() {
            return Err(Error::DimensionMismatch("Kraus operators must be square".into()));
        }
        let n = first.rows();
        let mut sum = CMatrix::zeros(n, n);
        for (i, a) in kraus.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            sum = sum.add(&a.dagger().matmul(a)?)?;
        }
        let tp_residual = sum.sub(&CMatrix::identity(n))?.frobenius_norm();
        if tp_residual > TP_TOL {
            return Err(Error::InvalidArgument(format!(
                "Kraus tuple is not trace preserving: residual {tp_residual:.3e} > {TP_TOL:.0e}"
            )));
        }
        Ok(KrausChannel { n, kraus, tp_residual })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn tp_residual(&self) -> f64 {
        self.tp_residual
    }

    /// The Kraus tuple viewed as a generating system of `M_n(C)`.
    pub fn generating_system(&self) -> GeneratingSystem {
        GeneratingSystem::new(self.kraus.clone()).expect("validated at construction")
    }
}

/// `E(X) = Σ Aᵢ X Aᵢ†`.
pub fn apply_channel(e: &KrausChannel, x: &CMatrix) -> Result<CMatrix> {
    if x.rows() != e.n || x.cols() != e.n {
        return Err(Error::DimensionMismatch(format!(
            "channel on M_{} applied to a {}x{} matrix",
            e.n,
            x.rows(),
            x.cols()
        )));
    }
    let mut out = CMatrix::zeros(e.n, e.n);
    for a in &e.kraus {
        out = out.add(&a.matmul(x)?.matmul(&a.dagger())?)?;
    }
    Ok(out)
}

/// Transfer matrix `T = Σ Aᵢ ⊗ conj(Aᵢ)` of the tuple (not necessarily TP).
fn transfer_of(kraus: &[CMatrix]) -> CMatrix {
    let n = kraus[0].rows();
    let mut t = CMatrix::zeros(n * n, n * n);
    for a in kraus {
        let conj_a = CMatrix::from_array(a.array().mapv(|z| z.conj())).expect("finite");
        t = t.add(&a.kron(&conj_a)).expect("same shape");
    }
    t
}

/// The n²×n² transfer matrix with `T · vectorize(X) = vectorize(E(X))`.
pub fn transfer_matrix(e: &KrausChannel) -> CMatrix {
    transfer_of(&e.kraus)
}

fn mat_power(m: &CMatrix, k: usize) -> CMatrix {
    let mut out = CMatrix::identity(m.rows());
    for _ in 0..k {
        out = out.matmul(m).expect("square");
    }
    out
}

/// Assembles a Choi matrix from the block map `(i, j) → E(E_ij)`.
fn choi_from_blocks(n: usize, block: impl Fn(usize, usize) -> Result<CMatrix>) -> Result<CMatrix> {
    let mut out = Array2::zeros((n * n, n * n));
    for i in 0..n {
        for j in 0..n {
            let b = block(i, j)?;
            for k in 0..n {
                for l in 0..n {
                    out[[i * n + k, j * n + l]] = b.get(k, l);
                }
            }
        }
    }
    CMatrix::from_array(out)
}

/// Choi matrix `ω(E) = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)`.
pub fn choi(e: &KrausChannel) -> Result<CMatrix> {
    choi_from_blocks(e.n, |i, j| {
        let mut eij = Array2::zeros((e.n, e.n));
        eij[[i, j]] = Complex64::new(1.0, 0.0);
        apply_channel(e, &CMatrix::from_array(eij)?)
    })
}

/// Choi matrix of the m-fold composition `E^m`, assembled from the columns
/// of `T^m` (column `i·n+j` of `T^m` is `vectorize(E^m(E_ij))`).
pub fn choi_of_power(e: &KrausChannel, m: usize) -> Result<CMatrix> {
    let tm = mat_power(&transfer_matrix(e), m);
    choi_from_blocks(e.n, |i, j| {
        CMatrix::from_vectorized(e.n, e.n, tm.array().column(i * e.n + j))
    })
}

/// Kraus rank: the rank of the Choi matrix.
pub fn kraus_rank(e: &KrausChannel, tol: &Tolerance) -> Result<usize> {
    choi(e)?.rank(tol)
}

/// Kraus rank of the composed channel `E^m`.
pub fn kraus_rank_of_power(e: &KrausChannel, m: usize, tol: &Tolerance) -> Result<usize> {
    choi_of_power(e, m)?.rank(tol)
}

/// Index of eventual full Kraus rank `i(A)`: the minimal `m` with `E^m` of
/// Kraus rank n², which equals the Wie-length of the Kraus tuple.
/// `NotGenerating` in the report plays the role of "not primitive".
pub fn full_kraus_rank_index(e: &KrausChannel, tol: &Tolerance) -> Result<LengthReport> {
    wie_length(&e.generating_system(), None, tol)
}

/// Smallest eigenvalue and eigenvector of a (numerically) Hermitian matrix.
fn min_eig_hermitian(h: &CMatrix) -> Result<(f64, Array1<Complex64>)> {
    let pairs = h.eig_full()?;
    pairs
        .into_iter()
        .map(|(l, v)| (l.re, v))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::InvalidArgument("empty matrix".into()))
}

fn hermitize(x: &CMatrix) -> CMatrix {
    x.add(&x.dagger())
        .expect("square")
        .scale(Complex64::new(0.5, 0.0))
}

/// True iff the transfer matrix has exactly one eigenvalue of modulus within
/// `10·eig_rel` of 1, and its eigenvector — phase-fixed via the trace, then
/// Hermitized and trace-normalized — is positive definite.
pub fn strong_irreducibility(e: &KrausChannel, tol: &Tolerance) -> Result<bool> {
    let t = transfer_matrix(e);
    let window = 10.0 * tol.eig_rel;
    let peripheral: Vec<_> = t
        .eig_full()?
        .into_iter()
        .filter(|(l, _)| (l.norm() - 1.0).abs() <= window)
        .collect();
    if peripheral.len() != 1 {
        return Ok(false);
    }
    let x = CMatrix::from_vectorized(e.n, e.n, peripheral[0].1.view())?;
    // Numerical eigenvectors carry an arbitrary global phase; a positive
    // definite candidate has a trace of maximal modulus among its phases,
    // so rotating the trace onto the positive real axis removes the gauge.
    let tr = x.trace();
    if tr.norm() < 1e-12 {
        return Ok(false); // traceless, cannot be positive definite
    }
    let x = x.scale(tr.conj() / tr.norm());
    let h = hermitize(&x);
    let htr = h.trace().re;
    if htr <= 0.0 {
        return Ok(false);
    }
    let h = h.scale(Complex64::new(1.0 / htr, 0.0));
    let (min_eig, _) = min_eig_hermitian(&h)?;
    Ok(min_eig > PD_MIN_EIG)
}

/// Maximal-support fixed point of `E`: the spectral projection of `1/n` onto
/// the eigenvalue-1 eigenspace of the transfer matrix (the Cesàro limit of
/// `E^m(1/n)`), Hermitized.
pub fn fixed_point(e: &KrausChannel) -> Result<CMatrix> {
    let n = e.n;
    let dim = n * n;
    let t = transfer_matrix(e);
    let pairs = t.eig_full()?;
    let mut vmat = Array2::zeros((dim, dim));
    for (j, (_, v)) in pairs.iter().enumerate() {
        for i in 0..dim {
            vmat[[i, j]] = v[i];
        }
    }
    let x0 = CMatrix::identity(n)
        .scale(Complex64::new(1.0 / n as f64, 0.0))
        .vectorize();
    let coords = vmat.solve(&x0).map_err(|err| {
        Error::EigenConvergence(format!("transfer eigenbasis is numerically singular: {err}"))
    })?;
    let mut proj = Array1::zeros(dim);
    for (j, (l, v)) in pairs.iter().enumerate() {
        if (l - Complex64::new(1.0, 0.0)).norm() <= FIXED_POINT_EIG_TOL {
            proj = proj + v.mapv(|z| z * coords[j]);
        }
    }
    let fp = hermitize(&CMatrix::from_vectorized(n, n, proj.view())?);
    // Trace preservation guarantees the projection has unit trace; a violation
    // means the eigen-decomposition was unreliable.
    if (fp.trace().re - 1.0).abs() > 1e-6 {
        return Err(Error::Inconsistent(format!(
            "fixed-point projection has trace {} instead of 1",
            fp.trace()
        )));
    }
    Ok(fp)
}

/// Zero-error capacity classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dichotomy {
    /// Non-primitive with a full-rank fixed point: one bit is transmissible
    /// with zero error at every block length.
    CapacityAtLeastOne,
    /// Primitive: zero-error capacity vanishes from the given index on.
    CapacityZeroAtIndex(usize),
    /// The fixed point is rank deficient; the dichotomy does not apply.
    Inapplicable,
}

/// Classifies the channel per the full-rank-fixed-point dichotomy: with a
/// full-rank fixed point, the zero-error capacity either vanishes at the
/// index `i(A)` (primitive case) or stays ≥ 1 forever.
pub fn zero_error_dichotomy(e: &KrausChannel, tol: &Tolerance) -> Result<Dichotomy> {
    let fp = fixed_point(e)?;
    if fp.rank(tol)? < e.n {
        return Ok(Dichotomy::Inapplicable);
    }
    Ok(match full_kraus_rank_index(e, tol)?.value {
        LengthValue::Finite(i) => Dichotomy::CapacityZeroAtIndex(i),
        LengthValue::NotGenerating => Dichotomy::CapacityAtLeastOne,
    })
}

/// A unit pair (φ, ψ) with `⟨ψ| E^level(φφ†) |ψ⟩ = residual < 10⁻¹⁰`,
/// certifying that `E^level` is not strictly positive, i.e. q(E) > level.
#[derive(Debug, Clone)]
pub struct PositivityWitness {
    pub phi: Array1<Complex64>,
    pub psi: Array1<Complex64>,
    pub level: usize,
    pub residual: f64,
}

fn random_unit_vector(n: usize, rng: &mut ChaCha12Rng) -> Array1<Complex64> {
    loop {
        let v = Array1::from_shape_fn(n, |_| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.mapv(|z| z / norm);
        }
    }
}

/// Searches for a strict-positivity violation of `E^level` by alternating
/// minimization of `⟨ψ| E^level(φφ†) |ψ⟩` over unit vectors: for fixed φ the
/// optimal ψ is the bottom eigenvector of the positive matrix `E^level(φφ†)`,
/// and for fixed ψ symmetrically with the adjoint channel. `None` means the
/// heuristic found no violation — a one-sided answer, not a positivity proof.
pub fn positivity_witness(
    e: &KrausChannel,
    level: usize,
    heuristic_iters: usize,
    seed: u64,
) -> Result<Option<PositivityWitness>> {
    if level == 0 || heuristic_iters == 0 {
        return Err(Error::InvalidArgument(
            "positivity_witness needs level >= 1 and heuristic_iters >= 1".into(),
        ));
    }
    let n = e.n;
    let tl = mat_power(&transfer_of(&e.kraus), level);
    let adjoint: Vec<CMatrix> = e.kraus.iter().map(|a| a.dagger()).collect();
    let tal = mat_power(&transfer_of(&adjoint), level);
    // `E^level(φφ†)`, Hermitized against rounding.
    let objective = |transfer: &CMatrix, v: &Array1<Complex64>| -> Result<CMatrix> {
        let rho = Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj());
        let out = transfer
            .array()
            .dot(&CMatrix::from_array(rho)?.vectorize());
        Ok(hermitize(&CMatrix::from_vectorized(n, n, out.view())?))
    };
    let mut best: Option<PositivityWitness> = None;
    for restart in 0..WITNESS_RESTARTS {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let mut phi = random_unit_vector(n, &mut rng);
        for _ in 0..heuristic_iters {
            let (_, best_psi) = min_eig_hermitian(&objective(&tl, &phi)?)?;
            let (_, best_phi) = min_eig_hermitian(&objective(&tal, &best_psi)?)?;
            phi = best_phi;
        }
        let (res, psi) = min_eig_hermitian(&objective(&tl, &phi)?)?;
        let residual = res.max(0.0);
        if best.as_ref().map_or(true, |b| residual < b.residual) {
            best = Some(PositivityWitness {
                phi: phi.clone(),
                psi,
                level,
                residual,
            });
        }
    }
    Ok(best.filter(|w| w.residual < WITNESS_RESIDUAL))
}

/// Two-sided information about the index of primitivity q(E).
#[derive(Debug, Clone)]
pub struct PrimitivityBounds {
    /// `i(A)`: full Kraus rank at m forces `E^m` strictly positive.
    pub upper: usize,
    /// Smallest level at which the witness search found no violation;
    /// one-sided (the heuristic may miss violations), hence "certified"
    /// only in the sense that every earlier level carries a witness.
    pub certified_lower: usize,
    /// The deepest violation found, if any.
    pub witness: Option<PositivityWitness>,
}

/// Brackets q(E): `upper = i(A)` always holds; `certified_lower` is the first
/// level where the alternating search fails to exhibit a violating pair.
pub fn primitivity_bounds(
    e: &KrausChannel,
    heuristic_iters: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<PrimitivityBounds> {
    let idx = full_kraus_rank_index(e, tol)?;
    let Some(upper) = idx.value.finite() else {
        return Err(Error::InvalidArgument(
            "primitivity_bounds requires a primitive channel (finite full-Kraus-rank index)".into(),
        ));
    };
    let mut witness = None;
    for level in 1..=upper {
        match positivity_witness(e, level, heuristic_iters, seed)? {
            Some(w) => witness = Some(w),
            None => {
                return Ok(PrimitivityBounds {
                    upper,
                    certified_lower: level,
                    witness,
                })
            }
        }
    }
    // Full Kraus rank at `upper` makes E^upper strictly positive, so a
    // sub-threshold residual there contradicts the index computation.
    Err(Error::Inconsistent(format!(
        "positivity violation found at the full-Kraus-rank index {upper}"
    )))
}

/// Summary of all channel-level diagnostics.
#[derive(Debug, Clone)]
pub struct ChannelReport {
    /// `i(A)` — minimal m with `E^m` of full Kraus rank; `NotGenerating`
    /// means the channel is not primitive.
    pub kraus_rank_index: LengthValue,
    /// The Wie-length of the Kraus tuple; definitionally equal to
    /// `kraus_rank_index`, kept as an explicit cross-check field.
    pub wie_len: LengthValue,
    pub strongly_irreducible: bool,
    pub fixed_point_rank: usize,
    pub dichotomy: Dichotomy,
}

pub fn channel_report(e: &KrausChannel, tol: &Tolerance) -> Result<ChannelReport> {
    let idx = full_kraus_rank_index(e, tol)?;
    let strongly_irreducible = strong_irreducibility(e, tol)?;
    let fixed_point_rank = fixed_point(e)?.rank(tol)?;
    let dichotomy = zero_error_dichotomy(e, tol)?;
    Ok(ChannelReport {
        kraus_rank_index: idx.value,
        wie_len: idx.value,
        strongly_irreducible,
        fixed_point_rank,
        dichotomy,
    })
}
