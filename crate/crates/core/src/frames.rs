//! Frames and rank-one measurements: the data model, the explicit maximal
//! constructions over ℝ and ℂ, the Cauchy full-spark family, the size-2n
//! dependent-vector family, and the exact measurement map `A ↦ (⟨A, E_i⟩)_i`.
//!
//! Certification always runs on unwhitened frames in exact arithmetic;
//! whitening (in [`crate::povm`]) is a floating-point convenience for the
//! tomography simulator.

use crate::exactlin::{
    gauss_i, rat, ExactScalar, GaussRational, Matrix, Rational, Vector,
};
use crate::rng::SplitMix64;
use num_traits::Zero;

/// Base field of a frame.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    Real,
    Complex,
}

impl FieldTag {
    pub fn of<T: ExactScalar>() -> FieldTag {
        if T::IS_COMPLEX {
            FieldTag::Complex
        } else {
            FieldTag::Real
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FieldTag::Real => "R",
            FieldTag::Complex => "C",
        }
    }
}

/// Provenance of a frame: which construction produced it and from which
/// seed (0 for deterministic constructions).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrameMeta {
    pub construction: String,
    pub seed: u64,
}

impl FrameMeta {
    pub fn new(construction: &str, seed: u64) -> Self {
        FrameMeta { construction: construction.to_string(), seed }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FrameError {
    #[error("not a frame: the vectors do not span the ambient space")]
    NotAFrame,
    #[error("measurement input must be symmetric/Hermitian")]
    NonHermitianInput,
    #[error("dimension too small: need n >= {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("invalid frame: {0}")]
    Invalid(String),
    #[error("whitening unstable: Parseval residual {residual} exceeds {tol}")]
    WhiteningUnstable { residual: f64, tol: f64 },
}

/// An ordered list of nonzero vectors in `K^n` with per-vector labels and
/// construction provenance. Spanning is not enforced at construction; call
/// [`Frame::spans_ambient`] where it matters.
#[derive(Clone, PartialEq, Debug)]
pub struct Frame<T: ExactScalar> {
    n: usize,
    vectors: Vec<Vector<T>>,
    labels: Vec<String>,
    meta: FrameMeta,
}

/// A frame over either base field, as read from the wire.
#[derive(Clone, Debug)]
pub enum AnyFrame {
    Real(Frame<Rational>),
    Complex(Frame<GaussRational>),
}

impl AnyFrame {
    pub fn field(&self) -> FieldTag {
        match self {
            AnyFrame::Real(_) => FieldTag::Real,
            AnyFrame::Complex(_) => FieldTag::Complex,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyFrame::Real(f) => f.n(),
            AnyFrame::Complex(f) => f.n(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyFrame::Real(f) => f.len(),
            AnyFrame::Complex(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: ExactScalar> Frame<T> {
    pub fn new(
        n: usize,
        vectors: Vec<Vector<T>>,
        labels: Vec<String>,
        meta: FrameMeta,
    ) -> Result<Self, FrameError> {
        if labels.len() != vectors.len() {
            return Err(FrameError::Invalid(format!(
                "{} labels for {} vectors",
                labels.len(),
                vectors.len()
            )));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != n {
                return Err(FrameError::Invalid(format!(
                    "vector {i} has dimension {}, frame has n = {n}",
                    v.dim()
                )));
            }
            if v.is_zero() {
                return Err(FrameError::Invalid(format!("vector {i} is zero")));
            }
        }
        Ok(Frame { n, vectors, labels, meta })
    }

    /// Like `new` but with generated labels `v0..v{m-1}`.
    pub fn unlabeled(n: usize, vectors: Vec<Vector<T>>, meta: FrameMeta) -> Result<Self, FrameError> {
        let labels = (0..vectors.len()).map(|i| format!("v{i}")).collect();
        Self::new(n, vectors, labels, meta)
    }

    pub fn field(&self) -> FieldTag {
        FieldTag::of::<T>()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &Vector<T> {
        &self.vectors[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn meta(&self) -> &FrameMeta {
        &self.meta
    }

    pub fn spans_ambient(&self) -> bool {
        crate::exactlin::spans(&self.vectors, self.n)
    }

    /// The frame with vector `j` removed (labels follow; meta unchanged).
    pub fn without(&self, j: usize) -> Frame<T> {
        let mut vectors = self.vectors.clone();
        let mut labels = self.labels.clone();
        vectors.remove(j);
        labels.remove(j);
        Frame { n: self.n, vectors, labels, meta: self.meta.clone() }
    }

    /// Frame operator `S = Σ v_i v_i*` (Hermitian, PSD; invertible iff the
    /// frame spans).
    pub fn frame_operator(&self) -> Matrix<T> {
        let mut s = Matrix::zeros(self.n, self.n);
        for v in &self.vectors {
            s = s.add(&v.outer_self());
        }
        s
    }

    /// The `m × dim` matrix of the measurement map in operator-space
    /// coordinates: row `i` applied to `coords(A)` equals `Tr(A · v_i v_i*)`
    /// exactly. Entries are always rational, also over ℚ(i).
    pub fn measurement_matrix(&self) -> Matrix<Rational> {
        let dim = op_dim(T::IS_COMPLEX, self.n);
        let rows = self
            .vectors
            .iter()
            .map(|v| measurement_row(v, dim))
            .collect();
        Matrix::from_rows(rows)
    }

    /// Exact Born values `(Tr(A E_i))_i` for a symmetric/Hermitian `A`.
    /// Agrees with `measurement_matrix() · coords(A)`.
    pub fn apply_measurement(&self, a: &Matrix<T>) -> Result<Vec<Rational>, FrameError> {
        if a.rows() != self.n || a.cols() != self.n || !a.is_hermitian() {
            return Err(FrameError::NonHermitianInput);
        }
        Ok(self
            .vectors
            .iter()
            .map(|v| {
                // v* A v is real for Hermitian A.
                let value = v.inner(&a.mul_vector(v));
                debug_assert!(value.im().is_zero());
                value.re()
            })
            .collect())
    }

    /// GL-standard form: the first `n` linearly independent vectors are
    /// moved to the front and mapped to the standard basis by the inverse
    /// of their matrix; every other vector is transformed alongside. The
    /// result is equivalent to `self`.
    pub fn standard_form(&self) -> Result<Frame<T>, FrameError> {
        let mut ech = crate::exactlin::Echelon::new(self.n);
        let mut chosen = Vec::new();
        for (i, v) in self.vectors.iter().enumerate() {
            if ech.add(v) {
                chosen.push(i);
                if chosen.len() == self.n {
                    break;
                }
            }
        }
        if chosen.len() < self.n {
            return Err(FrameError::NotAFrame);
        }
        let basis: Vec<Vector<T>> = chosen.iter().map(|&i| self.vectors[i].clone()).collect();
        let b = Matrix::from_col_vectors(&basis);
        let inv = b.inverse().expect("chosen vectors are independent");
        let mut vectors = Vec::with_capacity(self.len());
        let mut labels = Vec::with_capacity(self.len());
        for &i in &chosen {
            vectors.push(inv.mul_vector(&self.vectors[i]));
            labels.push(self.labels[i].clone());
        }
        for (i, v) in self.vectors.iter().enumerate() {
            if !chosen.contains(&i) {
                vectors.push(inv.mul_vector(v));
                labels.push(self.labels[i].clone());
            }
        }
        let meta = FrameMeta::new(
            &format!("{}/standard-form", self.meta.construction),
            self.meta.seed,
        );
        Frame::new(self.n, vectors, labels, meta)
    }

    /// Applies an invertible transform to every vector (used by the
    /// equivalence tests). Fails if `a` is singular.
    pub fn transformed(&self, a: &Matrix<T>) -> Result<Frame<T>, FrameError> {
        if a.inverse().is_none() {
            return Err(FrameError::Invalid("transform is singular".into()));
        }
        let vectors = self.vectors.iter().map(|v| a.mul_vector(v)).collect();
        let meta = FrameMeta::new(
            &format!("{}/gl-image", self.meta.construction),
            self.meta.seed,
        );
        Frame::new(self.n, vectors, self.labels.clone(), meta)
    }

    /// Reorders vectors by the given permutation (`perm[i]` = index into
    /// `self` of the new `i`-th vector).
    pub fn permuted(&self, perm: &[usize]) -> Result<Frame<T>, FrameError> {
        if perm.len() != self.len() {
            return Err(FrameError::Invalid("permutation length mismatch".into()));
        }
        let vectors = perm.iter().map(|&i| self.vectors[i].clone()).collect();
        let labels = perm.iter().map(|&i| self.labels[i].clone()).collect();
        Frame::new(self.n, vectors, labels, self.meta.clone())
    }
}

/// Dimension of the operator space carrying the measurement map:
/// `binom(n+1,2)` for real symmetric matrices, `n²` for Hermitian ones.
pub fn op_dim(complex: bool, n: usize) -> usize {
    if complex {
        n * n
    } else {
        n * (n + 1) / 2
    }
}

/// Coordinate index of the off-diagonal pair `(k, l)`, `k < l`, within the
/// lexicographically ordered upper triangle.
fn pair_index(n: usize, k: usize, l: usize) -> usize {
    debug_assert!(k < l && l < n);
    k * (2 * n - k - 1) / 2 + (l - k - 1)
}

/// Unweighted operator-space coordinates of a symmetric/Hermitian matrix:
/// diagonal entries first, then the real parts of the upper triangle in
/// lexicographic order, then (complex only) the imaginary parts. The
/// Hilbert–Schmidt pairing carries weight 2 on every off-diagonal
/// coordinate; [`measurement_row`] absorbs that factor.
pub fn op_coords<T: ExactScalar>(a: &Matrix<T>) -> Vector<Rational> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    let mut c = Vec::with_capacity(op_dim(T::IS_COMPLEX, n));
    for k in 0..n {
        c.push(a.get(k, k).re());
    }
    for k in 0..n {
        for l in (k + 1)..n {
            c.push(a.get(k, l).re());
        }
    }
    if T::IS_COMPLEX {
        for k in 0..n {
            for l in (k + 1)..n {
                c.push(a.get(k, l).im());
            }
        }
    }
    Vector::new(c)
}

/// Inverse of [`op_coords`]: rebuilds the symmetric/Hermitian matrix.
pub fn op_from_coords<T: ExactScalar>(n: usize, c: &Vector<Rational>) -> Matrix<T> {
    assert_eq!(c.dim(), op_dim(T::IS_COMPLEX, n), "coordinate dimension mismatch");
    let off = n * (n - 1) / 2;
    let mut a = Matrix::zeros(n, n);
    for k in 0..n {
        a.set(k, k, T::from_rational(c.get(k).clone()));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let idx = n + pair_index(n, k, l);
            let re = c.get(idx).clone();
            let im = if T::IS_COMPLEX {
                c.get(idx + off).clone()
            } else {
                Rational::zero()
            };
            let upper = T::from_re_im(re, im);
            a.set(k, l, upper.clone());
            a.set(l, k, upper.conj());
        }
    }
    a
}

/// Measurement-matrix row of the rank-one operator `E = v v*`: entry
/// `E_kk` on diagonal coordinates and `2·Re E_kl`, `2·Im E_kl` on
/// off-diagonal ones, so that `row · coords(A) = Tr(A E)` exactly.
fn measurement_row<T: ExactScalar>(v: &Vector<T>, dim: usize) -> Vec<Rational> {
    let n = v.dim();
    let two = rat(2, 1);
    let mut row = Vec::with_capacity(dim);
    for k in 0..n {
        row.push(v.get(k).abs_sq());
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let e_kl = v.get(k).clone() * v.get(l).conj();
            row.push(&two * e_kl.re());
        }
    }
    if T::IS_COMPLEX {
        for k in 0..n {
            for l in (k + 1)..n {
                let e_kl = v.get(k).clone() * v.get(l).conj();
                row.push(&two * e_kl.im());
            }
        }
    }
    debug_assert_eq!(row.len(), dim);
    row
}

fn basis_label(k: usize) -> String {
    format!("e{}", k + 1)
}

/// `{e_1, …, e_n} ∪ {e_i + e_j}_{i<j}`: the maximal real vital family of
/// size `binom(n+1,2)`. Basis vectors first, then pairs in lexicographic
/// order.
pub fn construct_real_max(n: usize) -> Result<Frame<Rational>, FrameError> {
    if n < 2 {
        return Err(FrameError::DimensionTooSmall { min: 2, got: n });
    }
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for k in 0..n {
        vectors.push(Vector::basis(n, k));
        labels.push(basis_label(k));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            vectors.push(Vector::basis(n, i).add(&Vector::basis(n, j)));
            labels.push(format!("e{}+e{}", i + 1, j + 1));
        }
    }
    Frame::new(n, vectors, labels, FrameMeta::new("real-max", 0))
}

/// `{e_k} ∪ {e_k + e_l}_{k<l} ∪ {e_k + i·e_l}_{k<l}`: the maximal complex
/// vital family of size `n²`.
pub fn construct_complex_max(n: usize) -> Result<Frame<GaussRational>, FrameError> {
    if n < 2 {
        return Err(FrameError::DimensionTooSmall { min: 2, got: n });
    }
    let mut vectors: Vec<Vector<GaussRational>> = Vec::new();
    let mut labels = Vec::new();
    for k in 0..n {
        vectors.push(Vector::basis(n, k));
        labels.push(basis_label(k));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            vectors.push(Vector::basis(n, k).add(&Vector::basis(n, l)));
            labels.push(format!("e{}+e{}", k + 1, l + 1));
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let mut v = Vector::basis(n, k);
            v.set(l, gauss_i());
            vectors.push(v);
            labels.push(format!("e{}+i*e{}", k + 1, l + 1));
        }
    }
    Frame::new(n, vectors, labels, FrameMeta::new("complex-max", 0))
}

/// `{e_1, …, e_n}` plus the columns of the `n × (n−1)` Cauchy matrix
/// `V[i][j] = 1/(i + j)` (1-based), a totally nonsingular matrix, giving a
/// fully explicit full-spark vital frame of size `2n−1`.
pub fn construct_cauchy_full_spark(n: usize) -> Result<Frame<Rational>, FrameError> {
    if n < 2 {
        return Err(FrameError::DimensionTooSmall { min: 2, got: n });
    }
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for k in 0..n {
        vectors.push(Vector::basis(n, k));
        labels.push(basis_label(k));
    }
    for j in 1..n {
        let col = Vector::new((1..=n).map(|i| rat(1, (i + j) as i64)).collect());
        vectors.push(col);
        labels.push(format!("cauchy{j}"));
    }
    Frame::new(n, vectors, labels, FrameMeta::new("cauchy", 0))
}

/// The size-2n family that is not equivalent to any block-design frame for
/// `n > 3`: `{e_1, …, e_n, w_1, …, w_n}` where `w_ℓ` (ℓ ≤ n−1) has random
/// nonzero entries exactly on `[n] ∖ {n−ℓ+1}` and `w_n = Σ λ_ℓ w_ℓ` with
/// random nonzero `λ_ℓ`. Entries are drawn in vector order, coordinate
/// order, then the λ's, from a single SplitMix64 stream.
pub fn construct_gonzalez_2n(n: usize, seed: u64) -> Result<Frame<Rational>, FrameError> {
    if n < 3 {
        return Err(FrameError::DimensionTooSmall { min: 3, got: n });
    }
    let mut rng = SplitMix64::new(seed);
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for k in 0..n {
        vectors.push(Vector::basis(n, k));
        labels.push(basis_label(k));
    }
    let mut ws: Vec<Vector<Rational>> = Vec::new();
    for ell in 1..n {
        // Support [n] ∖ {n−ℓ+1}, i.e. 0-based coordinate n−ℓ stays zero.
        let hole = n - ell;
        let mut w = Vector::zeros(n);
        for coord in 0..n {
            if coord != hole {
                w.set(coord, rng.nonzero_rational());
            }
        }
        ws.push(w.clone());
        vectors.push(w);
        labels.push(format!("w{ell}"));
    }
    let mut w_n = Vector::zeros(n);
    for w in &ws {
        let lambda = rng.nonzero_rational();
        w_n = w_n.add(&w.scale(&lambda));
    }
    vectors.push(w_n);
    labels.push(format!("w{n}"));
    Frame::new(n, vectors, labels, FrameMeta::new("gonzalez", seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{gauss_int, rat_int, spans};
    use num_traits::One;

    fn qvec(vals: &[i64]) -> Vector<Rational> {
        Vector::new(vals.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn real_max_sizes_match_binomial() {
        for (n, size) in [(2, 3), (3, 6), (5, 15)] {
            let f = construct_real_max(n).unwrap();
            assert_eq!(f.len(), size);
            assert!(f.spans_ambient());
        }
    }

    #[test]
    fn real_max_order_is_basis_then_pairs() {
        let f = construct_real_max(2).unwrap();
        assert_eq!(f.vector(0), &qvec(&[1, 0]));
        assert_eq!(f.vector(1), &qvec(&[0, 1]));
        assert_eq!(f.vector(2), &qvec(&[1, 1]));
    }

    #[test]
    fn complex_max_sizes_are_n_squared() {
        for (n, size) in [(2, 4), (3, 9)] {
            let f = construct_complex_max(n).unwrap();
            assert_eq!(f.len(), size);
        }
        let f = construct_complex_max(2).unwrap();
        assert_eq!(f.vector(2).entries(), &[gauss_int(1, 0), gauss_int(1, 0)]);
        assert_eq!(f.vector(3).entries(), &[gauss_int(1, 0), gauss_int(0, 1)]);
    }

    #[test]
    fn cauchy_frame_matches_formula() {
        let f = construct_cauchy_full_spark(2).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.vector(2).entries(), &[rat(1, 2), rat(1, 3)]);
        assert_eq!(construct_cauchy_full_spark(4).unwrap().len(), 7);
    }

    #[test]
    fn cauchy_two_by_two_minors_are_nonzero() {
        // Super-regularity oracle at n = 4: every 2×2 minor of V is nonzero.
        let n = 4;
        let v = |i: usize, j: usize| rat(1, (i + j) as i64);
        for i1 in 1..=n {
            for i2 in (i1 + 1)..=n {
                for j1 in 1..n {
                    for j2 in (j1 + 1)..n {
                        let det = v(i1, j1) * v(i2, j2) - v(i1, j2) * v(i2, j1);
                        assert!(!det.is_zero(), "zero minor at ({i1},{i2})x({j1},{j2})");
                    }
                }
            }
        }
    }

    #[test]
    fn gonzalez_support_pattern() {
        let n = 5;
        let f = construct_gonzalez_2n(n, 11).unwrap();
        assert_eq!(f.len(), 2 * n);
        // w_1 is supported on [n] ∖ {n}.
        let w1 = f.vector(n);
        assert_eq!(w1.support(), vec![0, 1, 2, 3]);
        // {e_1, …, e_{n−1}, w_1} does not span.
        let mut part: Vec<_> = (0..n - 1).map(|k| Vector::basis(n, k)).collect();
        part.push(w1.clone());
        assert!(!spans(&part, n));
        // {w_1, …, w_n} does not span: w_n is a combination of the others.
        let ws: Vec<_> = (n..2 * n).map(|i| f.vector(i).clone()).collect();
        assert!(!spans(&ws, n));
        assert!(f.spans_ambient());
    }

    #[test]
    fn gonzalez_needs_n_at_least_three() {
        assert!(matches!(
            construct_gonzalez_2n(2, 0),
            Err(FrameError::DimensionTooSmall { min: 3, got: 2 })
        ));
    }

    #[test]
    fn gonzalez_is_seed_deterministic() {
        let a = construct_gonzalez_2n(4, 3).unwrap();
        let b = construct_gonzalez_2n(4, 3).unwrap();
        let c = construct_gonzalez_2n(4, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn frame_operator_orthonormal_basis_is_identity() {
        let f = Frame::unlabeled(
            2,
            vec![qvec(&[1, 0]), qvec(&[0, 1])],
            FrameMeta::new("test", 0),
        )
        .unwrap();
        assert_eq!(f.frame_operator(), Matrix::identity(2));
    }

    #[test]
    fn frame_operator_counts_repeats() {
        let f = Frame::unlabeled(
            2,
            vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[0, 1])],
            FrameMeta::new("test", 0),
        )
        .unwrap();
        let mut expected = Matrix::zeros(2, 2);
        expected.set(0, 0, rat_int(1));
        expected.set(1, 1, rat_int(2));
        assert_eq!(f.frame_operator(), expected);
    }

    #[test]
    fn frame_operator_real_max_3() {
        // Summing the six outer products by hand: diagonal 3, off-diagonal 1.
        let f = construct_real_max(3).unwrap();
        let s = f.frame_operator();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { rat_int(3) } else { rat_int(1) };
                assert_eq!(s.get(i, j), &expect);
            }
        }
    }

    #[test]
    fn measurement_matrix_of_basis_selects_diagonal() {
        let n = 3;
        let f = Frame::unlabeled(
            n,
            (0..n).map(|k| Vector::<Rational>::basis(n, k)).collect(),
            FrameMeta::new("test", 0),
        )
        .unwrap();
        let m = f.measurement_matrix();
        assert_eq!((m.rows(), m.cols()), (3, 6));
        for i in 0..n {
            for c in 0..6 {
                let expect = if c == i { Rational::one() } else { Rational::zero() };
                assert_eq!(m.get(i, c), &expect);
            }
        }
    }

    #[test]
    fn measurement_rank_real_max_is_full() {
        for n in 2..=4 {
            let f = construct_real_max(n).unwrap();
            assert_eq!(f.measurement_matrix().rank(), op_dim(false, n));
        }
    }

    #[test]
    fn measurement_rank_complex_max_is_full() {
        for n in 2..=3 {
            let f = construct_complex_max(n).unwrap();
            assert_eq!(f.measurement_matrix().rank(), op_dim(true, n));
        }
    }

    #[test]
    fn apply_measurement_agrees_with_matrix_route() {
        let f = construct_real_max(3).unwrap();
        let m = f.measurement_matrix();
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let mut a = Matrix::<Rational>::zeros(3, 3);
            for i in 0..3 {
                for j in i..3 {
                    let v = rng.nonzero_rational();
                    a.set(i, j, v.clone());
                    a.set(j, i, v);
                }
            }
            let direct = f.apply_measurement(&a).unwrap();
            let via_coords = m.mul_vector(&op_coords(&a));
            assert_eq!(direct, via_coords.entries().to_vec());
        }
    }

    #[test]
    fn apply_measurement_on_projector() {
        let n = 4;
        let f = Frame::unlabeled(
            n,
            (0..n).map(|k| Vector::<Rational>::basis(n, k)).collect(),
            FrameMeta::new("test", 0),
        )
        .unwrap();
        let proj = Vector::<Rational>::basis(n, 0).outer_self();
        let p = f.apply_measurement(&proj).unwrap();
        assert_eq!(p[0], Rational::one());
        assert!(p[1..].iter().all(Zero::is_zero));
        // A = I against the (Parseval) basis frame: all-ones weights
        // summing to n.
        let p = f.apply_measurement(&Matrix::identity(n)).unwrap();
        assert!(p.iter().all(One::is_one));
        assert_eq!(p.iter().sum::<Rational>(), rat_int(n as i64));
    }

    #[test]
    fn apply_measurement_symmetric_off_diagonal() {
        // A = e1·e2ᵀ + e2·e1ᵀ against the maximal real frame: zero
        // everywhere except the e1+e2 row, where the value is 2.
        let n = 4;
        let f = construct_real_max(n).unwrap();
        let mut a = Matrix::<Rational>::zeros(n, n);
        a.set(0, 1, rat_int(1));
        a.set(1, 0, rat_int(1));
        let p = f.apply_measurement(&a).unwrap();
        for (i, value) in p.iter().enumerate() {
            let expect = if f.labels()[i] == "e1+e2" { rat_int(2) } else { Rational::zero() };
            assert_eq!(value, &expect, "row {i} ({})", f.labels()[i]);
        }
    }

    #[test]
    fn apply_measurement_rejects_non_hermitian() {
        let f = construct_real_max(2).unwrap();
        let mut a = Matrix::<Rational>::zeros(2, 2);
        a.set(0, 1, rat_int(1));
        assert!(matches!(
            f.apply_measurement(&a),
            Err(FrameError::NonHermitianInput)
        ));
    }

    #[test]
    fn coords_round_trip_real_and_complex() {
        let mut a = Matrix::<Rational>::zeros(3, 3);
        a.set(0, 0, rat_int(2));
        a.set(0, 2, rat(1, 3));
        a.set(2, 0, rat(1, 3));
        let c = op_coords(&a);
        assert_eq!(op_from_coords::<Rational>(3, &c), a);

        let mut h = Matrix::<GaussRational>::identity(2);
        h.set(0, 1, gauss_int(1, 2));
        h.set(1, 0, gauss_int(1, -2));
        let c = op_coords(&h);
        assert_eq!(c.dim(), 4);
        assert_eq!(op_from_coords::<GaussRational>(2, &c), h);
    }

    #[test]
    fn complex_measurement_row_tracks_imaginary_part() {
        // For v = e1 + i·e2, E = vv* has E_12 = -i, so the measurement row
        // is (1, 1, 2·Re E_12 = 0, 2·Im E_12 = -2).
        let f = construct_complex_max(2).unwrap();
        let m = f.measurement_matrix();
        let row: Vec<Rational> = (0..4).map(|c| m.get(3, c).clone()).collect();
        assert_eq!(row, vec![rat_int(1), rat_int(1), rat_int(0), rat_int(-2)]);
    }

    #[test]
    fn deleted_row_kernel_is_the_offdiagonal_unit() {
        // Deleting the e1+e2 row from the measurement matrix of the n=3
        // maximal real frame leaves a rank-5 map whose kernel is spanned
        // by the coordinates of e1·e2ᵀ + e2·e1ᵀ, i.e. (0,0,0,1,0,0).
        let f = construct_real_max(3).unwrap();
        assert_eq!(f.labels()[3], "e1+e2");
        let m = f.measurement_matrix();
        let rows: Vec<Vec<Rational>> = (0..m.rows())
            .filter(|&i| i != 3)
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
            .collect();
        let reduced = Matrix::from_rows(rows);
        let kernel = reduced.nullspace();
        assert_eq!(kernel.len(), 1);
        let mut expected = Vector::zeros(6);
        expected.set(3, rat_int(1));
        assert_eq!(kernel[0].normalized(), expected);
        let mut a = Matrix::<Rational>::zeros(3, 3);
        a.set(0, 1, rat_int(1));
        a.set(1, 0, rat_int(1));
        assert_eq!(op_coords(&a), expected);
    }

    #[test]
    fn standard_form_is_idempotent_and_fixes_basis() {
        let f = construct_gonzalez_2n(4, 9).unwrap();
        let s = f.standard_form().unwrap();
        for k in 0..4 {
            assert_eq!(s.vector(k), &Vector::basis(4, k));
        }
        let s2 = s.standard_form().unwrap();
        assert_eq!(s.vectors(), s2.vectors());
    }

    #[test]
    fn standard_form_of_permuted_frame_is_standard() {
        let f = construct_gonzalez_2n(4, 9).unwrap().standard_form().unwrap();
        let m = f.len();
        let perm: Vec<usize> = (0..m).map(|i| (i + 3) % m).collect();
        let s = f.permuted(&perm).unwrap().standard_form().unwrap();
        for k in 0..4 {
            assert_eq!(s.vector(k), &Vector::basis(4, k));
        }
    }

    #[test]
    fn standard_form_commutes_with_gl_action() {
        let f = construct_gonzalez_2n(4, 2).unwrap();
        let mut a = Matrix::<Rational>::identity(4);
        a.set(0, 1, rat_int(3));
        a.set(2, 3, rat(-1, 2));
        a.set(3, 0, rat_int(5));
        let g = f.transformed(&a).unwrap();
        assert_eq!(f.standard_form().unwrap().vectors(), g.standard_form().unwrap().vectors());
    }

    #[test]
    fn frame_rejects_zero_vectors_and_bad_labels() {
        let zero = Vector::<Rational>::zeros(2);
        assert!(Frame::unlabeled(2, vec![zero], FrameMeta::new("test", 0)).is_err());
        assert!(Frame::new(
            2,
            vec![qvec(&[1, 0])],
            vec!["a".into(), "b".into()],
            FrameMeta::new("test", 0)
        )
        .is_err());
    }
}
