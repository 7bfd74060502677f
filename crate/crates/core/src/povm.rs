//! Whitening: the floating-point Parseval normalization `w_i = S^{-1/2} v_i`
//! turning any spanning frame into a rank-one POVM. Everything here is
//! numeric; exact certification never depends on it.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::exactlin::{ExactScalar, FloatScalar, Matrix, Vector};
use crate::frames::{FieldTag, Frame, FrameError, FrameMeta};

/// Default ceiling on `‖Σ E_i − I‖_max` accepted from whitening.
pub const DEFAULT_PARSEVAL_TOL: f64 = 1e-10;

/// A rank-one POVM in floating point: whitened vectors `w_i`, their
/// rank-one elements `E_i = w_i w_i*`, and the square root of the source
/// frame operator (used to map exact collision pairs into whitened
/// coordinates).
#[derive(Clone, Debug)]
pub struct FloatPovm<F: FloatScalar> {
    field: FieldTag,
    n: usize,
    vectors: Vec<DVector<F>>,
    elements: Vec<DMatrix<F>>,
    labels: Vec<String>,
    meta: FrameMeta,
    sqrt_s: DMatrix<F>,
    parseval_residual: f64,
}

/// A POVM over either base field.
#[derive(Clone, Debug)]
pub enum AnyPovm {
    Real(FloatPovm<f64>),
    Complex(FloatPovm<nalgebra::Complex<f64>>),
}

impl<F: FloatScalar> FloatPovm<F> {
    pub fn field(&self) -> FieldTag {
        self.field
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

    pub fn vectors(&self) -> &[DVector<F>] {
        &self.vectors
    }

    pub fn elements(&self) -> &[DMatrix<F>] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn meta(&self) -> &FrameMeta {
        &self.meta
    }

    pub fn parseval_residual(&self) -> f64 {
        self.parseval_residual
    }

    /// `S^{1/2} x`: maps a vector expressed against the unwhitened frame
    /// into whitened coordinates, so that `⟨w_i, S^{1/2}x⟩ = ⟨v_i, x⟩`.
    pub fn lift(&self, x: &DVector<F>) -> DVector<F> {
        &self.sqrt_s * x
    }

    /// Unnormalized Born weights `|⟨w_i, x⟩|²`, skipping element `skip`
    /// when given.
    pub fn unnormalized_born(&self, x: &DVector<F>, skip: Option<usize>) -> Vec<f64> {
        self.vectors
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, w)| w.dotc(x).modulus().powi(2))
            .collect()
    }
}

pub fn to_float_vector<T: ExactScalar>(v: &Vector<T>) -> DVector<T::Float> {
    DVector::from_iterator(v.dim(), v.iter().map(|e| e.to_float()))
}

pub fn to_float_matrix<T: ExactScalar>(m: &Matrix<T>) -> DMatrix<T::Float> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_float())
}

/// Whitens a spanning frame into a Parseval POVM, `w_i = S^{-1/2} v_i`,
/// via symmetric eigendecomposition of the frame operator. Fails with
/// `NotAFrame` when the frame does not span (decided exactly) and with
/// `WhiteningUnstable` when `‖Σ E_i − I‖_max` exceeds `tol`.
pub fn whiten_with_tol<T: ExactScalar>(
    frame: &Frame<T>,
    tol: f64,
) -> Result<FloatPovm<T::Float>, FrameError> {
    if !frame.spans_ambient() {
        return Err(FrameError::NotAFrame);
    }
    let n = frame.n();
    let s = to_float_matrix(&frame.frame_operator());
    let eig = s.symmetric_eigen();
    let mut inv_sqrt_diag = DVector::<T::Float>::zeros(n);
    let mut sqrt_diag = DVector::<T::Float>::zeros(n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            return Err(FrameError::WhiteningUnstable { residual: f64::INFINITY, tol });
        }
        inv_sqrt_diag[k] = <T::Float as nalgebra::ComplexField>::from_real(1.0 / lambda.sqrt());
        sqrt_diag[k] = <T::Float as nalgebra::ComplexField>::from_real(lambda.sqrt());
    }
    let u = &eig.eigenvectors;
    let inv_sqrt = u * DMatrix::from_diagonal(&inv_sqrt_diag) * u.adjoint();
    let sqrt_s = u * DMatrix::from_diagonal(&sqrt_diag) * u.adjoint();

    let vectors: Vec<DVector<T::Float>> = frame
        .vectors()
        .iter()
        .map(|v| &inv_sqrt * to_float_vector(v))
        .collect();
    let elements: Vec<DMatrix<T::Float>> = vectors
        .iter()
        .map(|w| w * w.adjoint())
        .collect();
    let mut sum = DMatrix::<T::Float>::zeros(n, n);
    for e in &elements {
        sum += e;
    }
    let residual = (sum - DMatrix::<T::Float>::identity(n, n))
        .iter()
        .map(|z| z.modulus())
        .fold(0.0, f64::max);
    if residual > tol {
        return Err(FrameError::WhiteningUnstable { residual, tol });
    }
    Ok(FloatPovm {
        field: frame.field(),
        n,
        vectors,
        elements,
        labels: frame.labels().to_vec(),
        meta: frame.meta().clone(),
        sqrt_s,
        parseval_residual: residual,
    })
}

/// [`whiten_with_tol`] at the default tolerance.
pub fn whiten<T: ExactScalar>(frame: &Frame<T>) -> Result<FloatPovm<T::Float>, FrameError> {
    whiten_with_tol(frame, DEFAULT_PARSEVAL_TOL)
}

impl AnyPovm {
    pub fn field(&self) -> FieldTag {
        match self {
            AnyPovm::Real(p) => p.field(),
            AnyPovm::Complex(p) => p.field(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyPovm::Real(p) => p.n(),
            AnyPovm::Complex(p) => p.n(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyPovm::Real(p) => p.len(),
            AnyPovm::Complex(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
