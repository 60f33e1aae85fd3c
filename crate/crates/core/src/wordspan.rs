//! Length and Wie-length of generating systems of `M_n(C)`.
//!
//! A finite tuple `S = (A_1, …, A_g)` of n×n matrices *generates* `M_n(C)` if
//! words of bounded length in the letters `S ∪ {1}` span the full algebra;
//! the minimal such bound is the *length* `ℓ(S)`. It *Wie-generates* if the
//! words of some exact length `k` span, and the minimal such `k` is the
//! *Wie-length* `Wieℓ(S)`. The two notions sandwich each other:
//! `ℓ(S) ≤ Wieℓ(S) ≤ (n²+n)·ℓ(S)`.
//!
//! Spans are never computed by enumerating all `g^k` words. The exact-length
//! space `V_{j+1}` is spanned by `{A·M : A ∈ S, M ∈ basis representatives of
//! V_j}`, so at most `g·n²` products per layer suffice; representatives are
//! kept as actual (normalized) word products so that spanning witnesses come
//! out for free.

use num_complex::Complex64;

use crate::numkernel::{matrix_rank, CMatrix, InsertOutcome, SpanTracker, Tolerance};
use crate::{Error, Result};

/// A word over the generator alphabet: a sequence of indices `< g`.
pub type Word = Vec<usize>;

/// Ordered tuple of `g` square matrices in `M_n(C)`.
#[derive(Debug, Clone)]
pub struct GeneratingSystem {
    n: usize,
    mats: Vec<CMatrix>,
}

impl GeneratingSystem {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidArgument("a generating system needs g >= 1".into()))?;
        if !first.is_square() {
            return Err(Error::DimensionMismatch("generators must be square".into()));
        }
        let n = first.rows();
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator {i} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(GeneratingSystem { n, mats })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    /// Duplicates change nothing mathematically but are worth flagging.
    pub fn has_duplicates(&self) -> bool {
        for i in 0..self.mats.len() {
            for j in (i + 1)..self.mats.len() {
                if self.mats[i]
                    .sub(&self.mats[j])
                    .map(|d| d.frobenius_norm() == 0.0)
                    .unwrap_or(false)
                {
                    return true;
                }
            }
        }
        false
    }

    /// Evaluates the matrix product of a word; the empty word is the identity.
    pub fn word_product(&self, word: &[usize]) -> Result<CMatrix> {
        let mut p = CMatrix::identity(self.n);
        for &i in word {
            let a = self.mats.get(i).ok_or_else(|| {
                Error::InvalidArgument(format!("word index {i} out of range (g = {})", self.g()))
            })?;
            p = p.matmul(a)?;
        }
        Ok(p)
    }
}

/// Which notion of length a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthKind {
    Length,
    WieLength,
}

/// Value of a length computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthValue {
    Finite(usize),
    NotGenerating,
}

impl LengthValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            LengthValue::Finite(k) => Some(k),
            LengthValue::NotGenerating => None,
        }
    }
}

/// Result of a length or Wie-length computation.
#[derive(Debug, Clone)]
pub struct LengthReport {
    pub kind: LengthKind,
    pub value: LengthValue,
    /// Span dimension after each word length `1, 2, …`.
    pub dims_per_step: Vec<usize>,
    pub search_cap: usize,
    /// For `WieLength`: `n²` words of the reported length whose products span
    /// `M_n(C)`; checkable independently via [`verify_spanning_words`].
    pub witness_words: Option<Vec<Word>>,
    /// Set when the input tuple contains duplicate generators.
    pub duplicate_generators: bool,
}

/// Exact-length layer iterator: layer `j` holds up to n² representatives
/// (normalized word products) spanning `span{words of length j}`.
struct ExactLayers<'a> {
    sys: &'a GeneratingSystem,
    tol: Tolerance,
    /// (normalized product, word) representatives of the current layer.
    reps: Vec<(CMatrix, Word)>,
    depth: usize,
}

impl<'a> ExactLayers<'a> {
    fn new(sys: &'a GeneratingSystem, tol: Tolerance) -> Self {
        ExactLayers {
            sys,
            tol,
            reps: vec![(CMatrix::identity(sys.n), Vec::new())],
            depth: 0,
        }
    }

    /// Advances one layer; returns the dimension of the new layer's span and
    /// leaves its representatives in `self.reps`.
    fn step(&mut self) -> Result<(usize, SpanTracker)> {
        let n = self.sys.n;
        let mut tracker: SpanTracker = SpanTracker::new(n * n, self.tol);
        let mut next: Vec<(CMatrix, Word)> = Vec::new();
        for a_idx in 0..self.sys.g() {
            for (m, word) in &self.reps {
                let prod = self.sys.mats[a_idx].matmul(m)?;
                let Some(unit) = prod.normalized() else {
                    continue; // zero product spans nothing
                };
                if tracker.insert(unit.vectorize().view())? == InsertOutcome::Added {
                    let mut w = Vec::with_capacity(word.len() + 1);
                    w.push(a_idx);
                    w.extend_from_slice(word);
                    next.push((unit, w));
                }
            }
        }
        self.reps = next;
        self.depth += 1;
        Ok((self.reps.len(), tracker))
    }
}

/// Dimension of `span{words of length exactly k}` together with the tracker
/// holding its orthonormal basis.
pub fn span_at_exact_length(
    sys: &GeneratingSystem,
    k: usize,
    tol: &Tolerance,
) -> Result<(usize, SpanTracker)> {
    if k == 0 {
        return Err(Error::InvalidArgument("word length k must be >= 1".into()));
    }
    let mut layers = ExactLayers::new(sys, *tol);
    let mut last = None;
    for _ in 0..k {
        last = Some(layers.step()?);
    }
    Ok(last.expect("k >= 1"))
}

/// Length `ℓ(S)`: cumulative spans of words of length at most `ℓ`, with the
/// identity as an allowed letter. The chain is seeded with `span{1}` and the
/// first stalled step proves `NotGenerating` (a stalled cumulative chain is
/// an algebra and never grows again).
pub fn length(sys: &GeneratingSystem, tol: &Tolerance) -> Result<LengthReport> {
    let n = sys.n;
    let full = n * n;
    let mut tracker: SpanTracker = SpanTracker::new(full, *tol);
    let ident = CMatrix::identity(n).normalized().expect("identity nonzero");
    tracker.insert(ident.vectorize().view())?;
    // Newly accepted representatives of the last step; products with older
    // representatives are already in the span.
    let mut fresh: Vec<CMatrix> = vec![ident];
    let mut dims = Vec::new();
    let cap = full; // each productive step adds at least one dimension
    for step in 1..=cap {
        let mut next_fresh = Vec::new();
        for a in sys.mats() {
            for m in &fresh {
                let prod = a.matmul(m)?;
                let Some(unit) = prod.normalized() else { continue };
                if tracker.insert(unit.vectorize().view())? == InsertOutcome::Added {
                    next_fresh.push(unit);
                }
            }
        }
        dims.push(tracker.dim());
        if tracker.dim() == full {
            return Ok(LengthReport {
                kind: LengthKind::Length,
                value: LengthValue::Finite(step),
                dims_per_step: dims,
                search_cap: cap,
                witness_words: None,
                duplicate_generators: sys.has_duplicates(),
            });
        }
        if next_fresh.is_empty() {
            return Ok(LengthReport {
                kind: LengthKind::Length,
                value: LengthValue::NotGenerating,
                dims_per_step: dims,
                search_cap: cap,
                witness_words: None,
                duplicate_generators: sys.has_duplicates(),
            });
        }
        fresh = next_fresh;
    }
    // Unreachable mathematically: the chain either saturates or stalls
    // within n² steps. Reaching here means the tolerance is inconsistent.
    Err(Error::CapExceeded { cap, dims })
}

/// Wie-length `Wieℓ(S)`: minimal `k` such that words of length exactly `k`
/// span `M_n(C)`.
///
/// `ℓ(S)` is computed first; if `S` does not generate, it does not
/// Wie-generate either, and otherwise `(n²+n)·ℓ(S)` is a principled search
/// cap. Exhausting that cap is reported as [`Error::CapExceeded`] because it
/// signals a numerical-tolerance problem, not a mathematical outcome.
pub fn wie_length(
    sys: &GeneratingSystem,
    cap: Option<usize>,
    tol: &Tolerance,
) -> Result<LengthReport> {
    let n = sys.n;
    let full = n * n;
    let len_report = length(sys, tol)?;
    let Some(ell) = len_report.value.finite() else {
        return Ok(LengthReport {
            kind: LengthKind::WieLength,
            value: LengthValue::NotGenerating,
            dims_per_step: Vec::new(),
            search_cap: cap.unwrap_or(0),
            witness_words: None,
            duplicate_generators: sys.has_duplicates(),
        });
    };
    let cap = cap.unwrap_or((full + n) * ell);
    let mut layers = ExactLayers::new(sys, *tol);
    let mut dims = Vec::new();
    for k in 1..=cap {
        let (dim, _) = layers.step()?;
        dims.push(dim);
        if dim == full {
            let witness = layers.reps.iter().map(|(_, w)| w.clone()).collect();
            return Ok(LengthReport {
                kind: LengthKind::WieLength,
                value: LengthValue::Finite(k),
                dims_per_step: dims,
                search_cap: cap,
                witness_words: Some(witness),
                duplicate_generators: sys.has_duplicates(),
            });
        }
    }
    Err(Error::CapExceeded { cap, dims })
}

/// True iff the exact-length span stays full for `extra` lengths beyond the
/// Wie-length (the stabilization lemma); an error if `S` does not generate.
pub fn check_stabilization(
    sys: &GeneratingSystem,
    extra: usize,
    tol: &Tolerance,
) -> Result<bool> {
    let report = wie_length(sys, None, tol)?;
    let Some(k) = report.value.finite() else {
        return Err(Error::InvalidArgument(
            "check_stabilization requires a Wie-generating system".into(),
        ));
    };
    let full = sys.n * sys.n;
    let mut layers = ExactLayers::new(sys, *tol);
    for _ in 0..k {
        layers.step()?;
    }
    for _ in 0..extra {
        let (dim, _) = layers.step()?;
        if dim != full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks both sides of the sandwich `ℓ(S) ≤ Wieℓ(S) ≤ (n²+n)·ℓ(S)`.
pub fn check_sandwich(sys: &GeneratingSystem, tol: &Tolerance) -> Result<(bool, bool)> {
    let len = length(sys, tol)?;
    let Some(ell) = len.value.finite() else {
        return Err(Error::InvalidArgument(
            "check_sandwich requires a generating system".into(),
        ));
    };
    let wie = wie_length(sys, None, tol)?;
    let Some(wl) = wie.value.finite() else {
        // A generating system always Wie-generates; reaching here is a
        // tolerance inconsistency.
        return Err(Error::Inconsistent(
            "system generates but reported as not Wie-generating".into(),
        ));
    };
    let n = sys.n;
    Ok((ell <= wl, wl <= (n * n + n) * ell))
}

/// The worst-case catalog pair: `A` the cyclic shift `|i+1 mod n><i|` and
/// `B = |2><n|`. This family realizes Wie-lengths far above the generic
/// `2⌈log₂ n⌉` bound.
pub fn worst_case_pair(n: usize) -> Result<GeneratingSystem> {
    worst_case_pair_with(n, false)
}

/// Variant switch for the shift matrix: `nilpotent = true` drops the
/// wrap-around term `|1><n|`, leaving the nilpotent truncation. The text the
/// pair comes from does not determine which was intended; the cyclic reading
/// is the default.
pub fn worst_case_pair_with(n: usize, nilpotent: bool) -> Result<GeneratingSystem> {
    if n < 2 {
        return Err(Error::InvalidArgument("worst_case_pair needs n >= 2".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut a = CMatrix::zeros(n, n);
    let mut a_arr = a.array().clone();
    let top = if nilpotent { n - 1 } else { n };
    for i in 0..top {
        a_arr[[(i + 1) % n, i]] = one;
    }
    a = CMatrix::from_array(a_arr)?;
    let mut b_arr = CMatrix::zeros(n, n).array().clone();
    b_arr[[1, n - 1]] = one; // |2><n| with one-based kets
    let b = CMatrix::from_array(b_arr)?;
    GeneratingSystem::new(vec![a, b])
}

/// Integer ⌈log_base x⌉: the smallest `t ≥ 0` with `base^t ≥ x`. This is the
/// word-counting bound: `g^k` words cannot span more than `g^k` dimensions.
pub fn ceil_log(base: usize, x: usize) -> Result<usize> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("ceil_log base must be >= 2, got {base}")));
    }
    if x == 0 {
        return Err(Error::InvalidArgument("ceil_log of 0 is undefined".into()));
    }
    let mut t = 0usize;
    let mut p: u128 = 1;
    while p < x as u128 {
        p = p.checked_mul(base as u128).ok_or_else(|| {
            Error::Overflow(format!("ceil_log({base}, {x})"))
        })?;
        t += 1;
    }
    Ok(t)
}

/// Certificate checker: evaluates the given `n²` same-length words, stacks
/// their vectorizations into an n²×n² matrix and tests full rank.
pub fn verify_spanning_words(
    sys: &GeneratingSystem,
    words: &[Word],
    tol: &Tolerance,
) -> Result<bool> {
    let n = sys.n;
    let full = n * n;
    if words.len() != full {
        return Err(Error::InvalidArgument(format!(
            "expected exactly {} words, got {}",
            full,
            words.len()
        )));
    }
    let len0 = words[0].len();
    if words.iter().any(|w| w.len() != len0) {
        return Err(Error::InvalidArgument("words must share one length".into()));
    }
    let mut columns = Vec::with_capacity(full * full);
    for w in words {
        let p = sys.word_product(w)?; // validates indices
        columns.extend(p.vectorize().into_iter());
    }
    // Rows of this matrix are the vectorized words; rank is side-agnostic.
    let stacked = CMatrix::new(full, full, columns)?;
    Ok(matrix_rank(&stacked, tol)? == full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{ginibre, RngSpec};
    use crate::numkernel::Tolerance;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn matrix_units(n: usize) -> Vec<CMatrix> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut arr = CMatrix::zeros(n, n).array().clone();
                arr[[i, j]] = Complex64::new(1.0, 0.0);
                out.push(CMatrix::from_array(arr).unwrap());
            }
        }
        out
    }

    fn ginibre_pair(n: usize, seed: u64) -> GeneratingSystem {
        GeneratingSystem::new(vec![
            ginibre(n, &RngSpec { seed, stream: 0 }),
            ginibre(n, &RngSpec { seed, stream: 1 }),
        ])
        .unwrap()
    }

    /// Exhaustive oracle: span dimension of all g^k words of length exactly k.
    fn brute_force_exact_dim(sys: &GeneratingSystem, k: usize) -> usize {
        let g = sys.g();
        let n = sys.n();
        let mut tracker: SpanTracker = SpanTracker::new(n * n, tol());
        let mut word = vec![0usize; k];
        loop {
            let p = sys.word_product(&word).unwrap();
            if let Some(u) = p.normalized() {
                tracker.insert(u.vectorize().view()).unwrap();
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == k {
                    return tracker.dim();
                }
                word[pos] += 1;
                if word[pos] < g {
                    break;
                }
                word[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn span_exact_identity_only() {
        let sys = GeneratingSystem::new(vec![CMatrix::identity(2)]).unwrap();
        for k in 1..5 {
            let (dim, _) = span_at_exact_length(&sys, k, &tol()).unwrap();
            assert_eq!(dim, 1);
        }
    }

    #[test]
    fn span_exact_matrix_units() {
        let sys = GeneratingSystem::new(matrix_units(2)).unwrap();
        let (dim, _) = span_at_exact_length(&sys, 1, &tol()).unwrap();
        assert_eq!(dim, 4);
    }

    #[test]
    fn span_exact_ginibre_pair_m2() {
        let sys = ginibre_pair(2, 7);
        let (dim, _) = span_at_exact_length(&sys, 2, &tol()).unwrap();
        assert_eq!(dim, 4);
        assert_eq!(brute_force_exact_dim(&sys, 2), 4);
    }

    #[test]
    fn wie_length_units_plus_identity() {
        let mut mats = matrix_units(2);
        mats.push(CMatrix::identity(2));
        let sys = GeneratingSystem::new(mats).unwrap();
        let rep = wie_length(&sys, None, &tol()).unwrap();
        assert_eq!(rep.value, LengthValue::Finite(1));
        assert!(rep.duplicate_generators == false);
        let witness = rep.witness_words.unwrap();
        assert!(verify_spanning_words(&sys, &witness, &tol()).unwrap());
    }

    #[test]
    fn wie_length_scalar_not_generating() {
        let sys = GeneratingSystem::new(vec![CMatrix::identity(3).scale(Complex64::new(2.5, 0.))])
            .unwrap();
        let rep = wie_length(&sys, None, &tol()).unwrap();
        assert_eq!(rep.value, LengthValue::NotGenerating);
    }

    #[test]
    fn wie_length_ginibre_pair_m2() {
        let sys = ginibre_pair(2, 3);
        let rep = wie_length(&sys, None, &tol()).unwrap();
        // Counting forces Wieℓ ≥ ⌈log₂ 4⌉ = 2; the four products span.
        assert_eq!(rep.value, LengthValue::Finite(2));
        let witness = rep.witness_words.unwrap();
        assert_eq!(witness.len(), 4);
        assert!(witness.iter().all(|w| w.len() == 2));
        assert!(verify_spanning_words(&sys, &witness, &tol()).unwrap());
    }

    #[test]
    fn length_matrix_units_m3() {
        let sys = GeneratingSystem::new(matrix_units(3)).unwrap();
        let rep = length(&sys, &tol()).unwrap();
        assert_eq!(rep.value, LengthValue::Finite(1));
    }

    #[test]
    fn length_commutative_stalls() {
        let d = CMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1., 0.),
                Complex64::new(0., 0.),
                Complex64::new(0., 0.),
                Complex64::new(2., 0.),
            ],
        )
        .unwrap();
        let sys = GeneratingSystem::new(vec![d]).unwrap();
        let rep = length(&sys, &tol()).unwrap();
        assert_eq!(rep.value, LengthValue::NotGenerating);
        // The chain stalls at the diagonal algebra, dimension 2 < 4.
        assert_eq!(*rep.dims_per_step.last().unwrap(), 2);
    }

    #[test]
    fn length_ginibre_pair_m3() {
        // Counting forces ℓ ≥ 3: only 1 + 2 + 4 = 7 words of length ≤ 2.
        let sys = ginibre_pair(3, 11);
        let rep = length(&sys, &tol()).unwrap();
        assert_eq!(rep.value, LengthValue::Finite(3));
        assert_eq!(rep.dims_per_step, vec![3, 7, 9]);
    }

    #[test]
    fn stabilization_examples() {
        let mut mats = matrix_units(2);
        mats.push(CMatrix::identity(2));
        let sys = GeneratingSystem::new(mats).unwrap();
        assert!(check_stabilization(&sys, 3, &tol()).unwrap());

        let sys = ginibre_pair(2, 5);
        assert!(check_stabilization(&sys, 3, &tol()).unwrap());
        for m in 3..=5 {
            assert_eq!(brute_force_exact_dim(&sys, m), 4);
        }
    }

    #[test]
    fn sandwich_examples() {
        let mut mats = matrix_units(2);
        mats.push(CMatrix::identity(2));
        let sys = GeneratingSystem::new(mats).unwrap();
        assert_eq!(check_sandwich(&sys, &tol()).unwrap(), (true, true));

        let sys = ginibre_pair(2, 9);
        assert_eq!(check_sandwich(&sys, &tol()).unwrap(), (true, true));
    }

    #[test]
    fn worst_case_pair_structure() {
        let sys = worst_case_pair(3).unwrap();
        let a = &sys.mats()[0];
        let b = &sys.mats()[1];
        let nz = |m: &CMatrix| {
            m.array()
                .iter()
                .filter(|z| z.norm() > 0.0)
                .count()
        };
        assert_eq!(nz(a), 3);
        assert_eq!(nz(b), 1);
        assert_eq!(b.get(1, 2), Complex64::new(1., 0.));

        let sys2 = worst_case_pair(2).unwrap();
        assert_eq!(sys2.mats()[0].get(0, 1), Complex64::new(1., 0.));
        assert_eq!(sys2.mats()[0].get(1, 0), Complex64::new(1., 0.));
        assert_eq!(sys2.mats()[1].get(1, 1), Complex64::new(1., 0.));

        let trunc = worst_case_pair_with(3, true).unwrap();
        assert_eq!(nz(&trunc.mats()[0]), 2);
    }

    #[test]
    fn worst_case_pair_exceeds_generic_bound_n4() {
        let sys = worst_case_pair(4).unwrap();
        let rep = wie_length(&sys, None, &tol()).unwrap();
        let k = rep.value.finite().expect("worst-case pair generates");
        assert!(k > 4, "Wie-length {k} should exceed 2*ceil(log2 4) = 4");
        assert_eq!(brute_force_exact_dim(&sys, k), 16);
        assert!(brute_force_exact_dim(&sys, k - 1) < 16);
    }

    #[test]
    fn verify_spanning_words_cases() {
        let sys = GeneratingSystem::new(matrix_units(2)).unwrap();
        let singles: Vec<Word> = (0..4).map(|i| vec![i]).collect();
        assert!(verify_spanning_words(&sys, &singles, &tol()).unwrap());

        let sys = GeneratingSystem::new(vec![CMatrix::identity(2), CMatrix::identity(2)]).unwrap();
        assert!(sys.has_duplicates());
        let words: Vec<Word> = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        assert!(!verify_spanning_words(&sys, &words, &tol()).unwrap());

        let sys = ginibre_pair(2, 3);
        let words: Vec<Word> = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        assert!(verify_spanning_words(&sys, &words, &tol()).unwrap());

        // malformed index
        let bad = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![2, 1]];
        assert!(verify_spanning_words(&sys, &bad, &tol()).is_err());
    }

    #[test]
    fn incremental_engine_matches_brute_force_small() {
        for seed in 0..10u64 {
            for n in [2usize, 3] {
                let sys = ginibre_pair(n, 100 + seed);
                let rep = wie_length(&sys, None, &tol()).unwrap();
                let k = rep.value.finite().unwrap();
                assert_eq!(brute_force_exact_dim(&sys, k), n * n);
                if k > 1 {
                    assert!(brute_force_exact_dim(&sys, k - 1) < n * n);
                }
            }
        }
    }

    #[test]
    fn length_dims_strictly_increase_until_saturation() {
        for seed in 0..5u64 {
            let sys = ginibre_pair(4, 40 + seed);
            let rep = length(&sys, &tol()).unwrap();
            let dims = &rep.dims_per_step;
            for w in dims.windows(2) {
                assert!(w[1] > w[0] || w[0] == 16);
            }
        }
    }
}
