//! Floating-point pure-state tomography: Born statistics on whitened
//! POVMs, linear-inversion reconstruction (least squares over the operator
//! space followed by a leading-eigenvector projection), and a seeded noise
//! sweep.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::exactlin::FloatScalar;
use crate::frames::op_dim;
use crate::povm::FloatPovm;
use crate::rng::SplitMix64;

/// Modulus threshold for picking the phase-anchor entry of a unit vector.
const PHASE_ANCHOR_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum TomoError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("POVM is not informationally complete: measurement rank {rank} < {dim}")]
    NotIC { rank: usize, dim: usize },
    #[error("cannot normalize a (near-)zero state vector")]
    ZeroState,
}

/// A unit-norm state vector with canonical phase: the first entry of
/// modulus above `1e-9` is made real positive, so equal projectors get
/// equal representatives.
#[derive(Clone, Debug)]
pub struct PureState<F: FloatScalar> {
    vector: DVector<F>,
}

impl<F: FloatScalar> PureState<F> {
    pub fn new(mut vector: DVector<F>) -> Result<Self, TomoError> {
        let norm = vector.norm();
        if norm < 1e-12 {
            return Err(TomoError::ZeroState);
        }
        vector /= F::from_real(norm);
        let anchor = vector
            .iter()
            .find(|z| z.modulus() > PHASE_ANCHOR_TOL)
            .copied()
            .ok_or(TomoError::ZeroState)?;
        let phase = anchor / F::from_real(anchor.modulus());
        vector /= phase;
        Ok(PureState { vector })
    }

    pub fn vector(&self) -> &DVector<F> {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// Frobenius distance of the rank-one projectors `‖ψψ* − φφ*‖_F`
    /// (equal to `sqrt(2 − 2|⟨ψ,φ⟩|²)`, but computed entrywise: the
    /// overlap form loses half the significant digits to cancellation
    /// near zero distance). Always in `[0, √2]`.
    pub fn projector_distance(&self, other: &PureState<F>) -> f64 {
        let diff = self.vector() * self.vector().adjoint() - other.vector() * other.vector().adjoint();
        diff.iter().map(|z| z.modulus_squared()).sum::<f64>().sqrt()
    }
}

/// Born probabilities `p_i = ⟨ψ, E_i ψ⟩ = |⟨w_i, ψ⟩|²` of a pure state
/// under a whitened POVM. The probabilities of a Parseval POVM sum to 1;
/// deviation beyond 1e-9 is a bug and panics in debug builds.
pub fn born_probabilities<F: FloatScalar>(
    povm: &FloatPovm<F>,
    psi: &PureState<F>,
) -> Result<Vec<f64>, TomoError> {
    if psi.dim() != povm.n() {
        return Err(TomoError::DimensionMismatch { expected: povm.n(), got: psi.dim() });
    }
    let probs: Vec<f64> = povm
        .vectors()
        .iter()
        .map(|w| w.dotc(psi.vector()).modulus().powi(2))
        .collect();
    debug_assert!(
        (probs.iter().sum::<f64>() - 1.0).abs() < 1e-9,
        "Born probabilities of a Parseval POVM must sum to 1"
    );
    Ok(probs)
}

/// Measurement matrix of the POVM in floating point, rows matching the
/// exact operator-space convention: `E_kk` on diagonal coordinates, then
/// `2·Re E_kl`, then (complex) `2·Im E_kl`.
pub fn float_measurement_matrix<F: FloatScalar>(povm: &FloatPovm<F>) -> DMatrix<f64> {
    let n = povm.n();
    let dim = op_dim(F::IS_COMPLEX, n);
    let mut m = DMatrix::zeros(povm.len(), dim);
    for (i, e) in povm.elements().iter().enumerate() {
        let mut c = 0;
        for k in 0..n {
            m[(i, c)] = e[(k, k)].real();
            c += 1;
        }
        for k in 0..n {
            for l in (k + 1)..n {
                m[(i, c)] = 2.0 * e[(k, l)].real();
                c += 1;
            }
        }
        if F::IS_COMPLEX {
            for k in 0..n {
                for l in (k + 1)..n {
                    m[(i, c)] = 2.0 * e[(k, l)].imaginary();
                    c += 1;
                }
            }
        }
    }
    m
}

fn operator_from_coords<F: FloatScalar>(n: usize, c: &DVector<f64>) -> DMatrix<F> {
    let off = n * (n - 1) / 2;
    let mut a = DMatrix::zeros(n, n);
    for k in 0..n {
        a[(k, k)] = F::from_parts(c[k], 0.0);
    }
    let mut idx = n;
    for k in 0..n {
        for l in (k + 1)..n {
            let re = c[idx];
            let im = if F::IS_COMPLEX { c[idx + off] } else { 0.0 };
            a[(k, l)] = F::from_parts(re, im);
            a[(l, k)] = F::from_parts(re, -im);
            idx += 1;
        }
    }
    a
}

/// Linear-inversion reconstruction: least-squares solve of
/// `Φ(A) ≈ p` over the symmetric/Hermitian space, then projection onto
/// the leading eigenvector. Requires an informationally complete POVM.
pub fn reconstruct<F: FloatScalar>(
    povm: &FloatPovm<F>,
    probs: &[f64],
) -> Result<PureState<F>, TomoError> {
    if probs.len() != povm.len() {
        return Err(TomoError::DimensionMismatch { expected: povm.len(), got: probs.len() });
    }
    let n = povm.n();
    let dim = op_dim(F::IS_COMPLEX, n);
    let m = float_measurement_matrix(povm);
    let svd = m.svd(true, true);
    let sv_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank_tol = sv_max * 1e-9;
    let rank = svd.singular_values.iter().filter(|&&s| s > rank_tol).count();
    if rank < dim {
        return Err(TomoError::NotIC { rank, dim });
    }
    let coords = svd
        .solve(&DVector::from_column_slice(probs), rank_tol)
        .expect("SVD solve with computed U/V");
    let a = operator_from_coords::<F>(n, &coords);
    let eig = SymmetricEigen::new(a);
    let (leading, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, &l)| if l > acc.1 { (k, l) } else { acc });
    PureState::new(eig.eigenvectors.column(leading).into_owned())
}

/// Haar-like random pure state: i.i.d. standard normal entries (real and
/// imaginary over ℂ), normalized.
pub fn random_state<F: FloatScalar>(n: usize, rng: &mut SplitMix64) -> PureState<F> {
    loop {
        let v = DVector::from_iterator(
            n,
            (0..n).map(|_| {
                let re = rng.standard_normal();
                let im = if F::IS_COMPLEX { rng.standard_normal() } else { 0.0 };
                F::from_parts(re, im)
            }),
        );
        if let Ok(state) = PureState::new(v) {
            return state;
        }
    }
}

/// One tomography trial.
#[derive(Clone, Debug)]
pub struct TomoResult<F: FloatScalar> {
    pub true_state: PureState<F>,
    pub estimate: PureState<F>,
    pub projector_error: f64,
    pub outcomes: Vec<f64>,
}

/// Summary statistics of a noise sweep.
#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub trials: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    pub mean_error: f64,
    pub median_error: f64,
    pub max_error: f64,
    pub errors: Vec<f64>,
}

/// Samples random pure states, perturbs their Born vectors with additive
/// Gaussian noise of deviation `noise_sigma`, reconstructs, and reports
/// projector errors. Per-trial RNG streams are derived from
/// `(seed, trial)`, so results are independent of evaluation order.
pub fn noise_sweep<F: FloatScalar>(
    povm: &FloatPovm<F>,
    trials: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<SweepSummary, TomoError> {
    assert!(trials >= 1, "need at least one trial");
    let mut errors = Vec::with_capacity(trials);
    for trial in 0..trials {
        let result = run_trial(povm, noise_sigma, seed, trial as u64)?;
        errors.push(result.projector_error);
    }
    let mut sorted = errors.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    Ok(SweepSummary {
        trials,
        noise_sigma,
        seed,
        mean_error: errors.iter().sum::<f64>() / trials as f64,
        median_error: median,
        max_error: sorted.last().copied().unwrap_or(0.0),
        errors,
    })
}

/// Single seeded trial, exposed for the per-trial reports of the CLI.
pub fn run_trial<F: FloatScalar>(
    povm: &FloatPovm<F>,
    noise_sigma: f64,
    seed: u64,
    trial: u64,
) -> Result<TomoResult<F>, TomoError> {
    let mut rng = SplitMix64::stream(seed, trial);
    let true_state = random_state::<F>(povm.n(), &mut rng);
    let mut outcomes = born_probabilities(povm, &true_state)?;
    if noise_sigma > 0.0 {
        for p in outcomes.iter_mut() {
            *p += noise_sigma * rng.standard_normal();
        }
    }
    let estimate = reconstruct(povm, &outcomes)?;
    let projector_error = true_state.projector_distance(&estimate);
    Ok(TomoResult { true_state, estimate, projector_error, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{Rational, Vector};
    use crate::frames::{construct_complex_max, construct_real_max, Frame, FrameMeta};
    use crate::povm::whiten;
    use nalgebra::Complex;

    fn basis_povm(n: usize) -> FloatPovm<f64> {
        let f = Frame::unlabeled(
            n,
            (0..n).map(|k| Vector::<Rational>::basis(n, k)).collect(),
            FrameMeta::new("basis", 0),
        )
        .unwrap();
        whiten(&f).unwrap()
    }

    #[test]
    fn born_on_orthonormal_basis() {
        let p = basis_povm(3);
        let psi = PureState::new(DVector::from_vec(vec![1.0, 0.0, 0.0])).unwrap();
        let probs = born_probabilities(&p, &psi).unwrap();
        assert!((probs[0] - 1.0).abs() < 1e-12);
        assert!(probs[1].abs() < 1e-12 && probs[2].abs() < 1e-12);
    }

    #[test]
    fn born_sums_to_one() {
        let p = whiten(&construct_real_max(4).unwrap()).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let psi = random_state::<f64>(4, &mut rng);
            let probs = born_probabilities(&p, &psi).unwrap();
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn born_on_whitened_real_max_2_hand_values() {
        // For F = {e1, e2, e1+e2}, S has eigenvalues 1 and 3 with ψ =
        // (e1+e2)/√2 in the λ=3 eigenspace, so S^{-1/2}ψ = ψ/√3 and the
        // probabilities are |⟨v_i, ψ⟩|²/3 = (1/6, 1/6, 2/3).
        let p = whiten(&construct_real_max(2).unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(DVector::from_vec(vec![s, s])).unwrap();
        let probs = born_probabilities(&p, &psi).unwrap();
        assert!((probs[0] - 1.0 / 6.0).abs() < 1e-12, "{probs:?}");
        assert!((probs[1] - 1.0 / 6.0).abs() < 1e-12);
        assert!((probs[2] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn born_rejects_dimension_mismatch() {
        let p = basis_povm(3);
        let psi = PureState::new(DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert!(matches!(
            born_probabilities(&p, &psi),
            Err(TomoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reconstruct_round_trip_real() {
        let p = whiten(&construct_real_max(3).unwrap()).unwrap();
        let mut rng = SplitMix64::new(7);
        for _ in 0..25 {
            let psi = random_state::<f64>(3, &mut rng);
            let probs = born_probabilities(&p, &psi).unwrap();
            let est = reconstruct(&p, &probs).unwrap();
            assert!(psi.projector_distance(&est) <= 1e-8);
        }
    }

    #[test]
    fn reconstruct_round_trip_complex() {
        let p = whiten(&construct_complex_max(2).unwrap()).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..25 {
            let psi = random_state::<Complex<f64>>(2, &mut rng);
            let probs = born_probabilities(&p, &psi).unwrap();
            let est = reconstruct(&p, &probs).unwrap();
            assert!(psi.projector_distance(&est) <= 1e-8);
        }
    }

    #[test]
    fn global_phase_invariance() {
        let p = whiten(&construct_complex_max(2).unwrap()).unwrap();
        let mut rng = SplitMix64::new(19);
        let psi = random_state::<Complex<f64>>(2, &mut rng);
        let theta = 1.234f64;
        let rotated = PureState::new(psi.vector() * Complex::new(theta.cos(), theta.sin())).unwrap();
        let a = born_probabilities(&p, &psi).unwrap();
        let b = born_probabilities(&p, &rotated).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        // Canonical phase makes the representatives identical too.
        assert!((psi.vector() - rotated.vector()).norm() < 1e-12);
    }

    #[test]
    fn reconstruct_rejects_rank_deficient_povm() {
        // The basis POVM spans only the diagonal coordinates.
        let p = basis_povm(3);
        let psi = PureState::new(DVector::from_vec(vec![0.6, 0.8, 0.0])).unwrap();
        let probs = born_probabilities(&p, &psi).unwrap();
        assert!(matches!(
            reconstruct(&p, &probs),
            Err(TomoError::NotIC { rank: 3, dim: 6 })
        ));
    }

    #[test]
    fn colliding_states_are_indistinguishable_after_removal() {
        // Remove e1+e2 from the maximal real frame in ℝ³: the kernel pair
        // ψ ∝ e1+e2, φ ∝ e1−e2 has identical Born vectors on the reduced
        // POVM (lifted through S^{1/2}).
        let f = construct_real_max(3).unwrap();
        let p = whiten(&f).unwrap();
        let j = 3; // label "e1+e2"
        assert_eq!(f.labels()[j], "e1+e2");
        let psi = DVector::from_vec(vec![1.0, 1.0, 0.0]);
        let phi = DVector::from_vec(vec![1.0, -1.0, 0.0]);
        let bp = p.unnormalized_born(&p.lift(&psi), Some(j));
        let bq = p.unnormalized_born(&p.lift(&phi), Some(j));
        for (x, y) in bp.iter().zip(&bq) {
            assert!((x - y).abs() < 1e-10, "{bp:?} vs {bq:?}");
        }
        // The full POVM still tells them apart at the removed element.
        let full_p = p.unnormalized_born(&p.lift(&psi), None);
        let full_q = p.unnormalized_born(&p.lift(&phi), None);
        assert!((full_p[j] - full_q[j]).abs() > 0.5);
    }

    #[test]
    fn full_frame_collision_survives_whitening() {
        // An exact full-scope collision pair maps through S^{1/2} to a
        // pair of unit states with identical Born probabilities on the
        // whitened POVM.
        use crate::certify::{is_psi_complete_real, PsiOutcome};
        use crate::exactlin::rat_int;
        use crate::povm::to_float_vector;
        let n = 4;
        let mut vectors: Vec<Vector<Rational>> =
            (0..n).map(|k| Vector::<Rational>::basis(n, k)).collect();
        for i in 0..n {
            let mut v = Vector::zeros(n);
            for j in 0..n {
                if j != i {
                    v.set(j, rat_int(1));
                }
            }
            vectors.push(v);
        }
        let f = Frame::unlabeled(n, vectors, FrameMeta::new("counterexample", 0)).unwrap();
        let pair = match is_psi_complete_real(&f).unwrap() {
            PsiOutcome::Refuted(pair) => pair,
            _ => panic!("counterexample must be refuted"),
        };
        let p = whiten(&f).unwrap();
        let psi = PureState::new(p.lift(&to_float_vector(&pair.psi))).unwrap();
        let phi = PureState::new(p.lift(&to_float_vector(&pair.phi))).unwrap();
        let born_psi = born_probabilities(&p, &psi).unwrap();
        let born_phi = born_probabilities(&p, &phi).unwrap();
        for (a, b) in born_psi.iter().zip(&born_phi) {
            assert!((a - b).abs() <= 1e-10, "{born_psi:?} vs {born_phi:?}");
        }
        assert!(psi.projector_distance(&phi) > 0.1, "collision states are distinct");
    }

    #[test]
    fn noiseless_sweep_is_a_round_trip() {
        let p = whiten(&construct_real_max(3).unwrap()).unwrap();
        let summary = noise_sweep(&p, 50, 0.0, 5).unwrap();
        assert!(summary.max_error <= 1e-8, "max {}", summary.max_error);
    }

    #[test]
    fn sweep_errors_grow_with_noise() {
        let p = whiten(&construct_real_max(3).unwrap()).unwrap();
        let medians: Vec<f64> = [0.0, 1e-4, 1e-3]
            .iter()
            .map(|&sigma| noise_sweep(&p, 500, sigma, 42).unwrap().median_error)
            .collect();
        assert!(medians[0] < medians[1], "{medians:?}");
        assert!(medians[1] < medians[2], "{medians:?}");
    }

    #[test]
    fn structure_robustness_comparison_runs_at_equal_noise() {
        // Maximal frame vs Cauchy frame under the same noise, raw numbers
        // only (no ordering asserted). Linear inversion needs an IC POVM,
        // which for the 2n−1-element Cauchy family holds only at n = 2
        // (3 = binom(3,2) outcomes), so that is where the comparison runs;
        // larger Cauchy frames are refused with NotIC.
        use crate::frames::construct_cauchy_full_spark;
        let dense = whiten(&construct_real_max(2).unwrap()).unwrap();
        let sparse = whiten(&construct_cauchy_full_spark(2).unwrap()).unwrap();
        let a = noise_sweep(&dense, 100, 1e-3, 7).unwrap();
        let b = noise_sweep(&sparse, 100, 1e-3, 7).unwrap();
        for s in [&a, &b] {
            assert!(s.median_error.is_finite() && s.median_error > 0.0);
        }
        println!(
            "median projector error at sigma=1e-3: real-max {:.3e}, cauchy {:.3e}",
            a.median_error, b.median_error
        );
        let big = whiten(&construct_cauchy_full_spark(4).unwrap()).unwrap();
        assert!(matches!(
            noise_sweep(&big, 1, 0.0, 0),
            Err(TomoError::NotIC { rank: 7, dim: 10 })
        ));
    }

    #[test]
    fn sweep_is_seed_deterministic() {
        let p = whiten(&construct_real_max(3).unwrap()).unwrap();
        let a = noise_sweep(&p, 20, 1e-3, 9).unwrap();
        let b = noise_sweep(&p, 20, 1e-3, 9).unwrap();
        assert_eq!(a.errors, b.errors);
        let c = noise_sweep(&p, 20, 1e-3, 10).unwrap();
        assert_ne!(a.errors, c.errors);
    }

    #[test]
    fn projector_distance_bounds() {
        let a = PureState::new(DVector::from_vec(vec![1.0, 0.0])).unwrap();
        let b = PureState::new(DVector::from_vec(vec![0.0, 1.0])).unwrap();
        assert!((a.projector_distance(&b) - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(a.projector_distance(&a) < 1e-12);
    }

    #[test]
    fn zero_state_is_rejected() {
        assert!(matches!(
            PureState::<f64>::new(DVector::zeros(3)),
            Err(TomoError::ZeroState)
        ));
    }
}
