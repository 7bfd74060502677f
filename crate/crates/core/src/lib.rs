//! Construction and exact certification of phase-retrieval frames and
//! vital rank-one POVMs, plus a floating-point pure-state tomography
//! simulator.
//!
//! A rank-one POVM `{w_i w_i*}` is *PSI-complete* when the Born
//! probabilities `|⟨w_i, ψ⟩|²` determine any pure state `ψ` up to a global
//! phase, and *vital* when additionally removing any single element
//! destroys that property. This crate builds the known maximal families
//! over ℝ and ℂ, the block-design families, and certifies both properties
//! with machine-checkable witnesses in exact rational arithmetic:
//!
//! - [`exactlin`] — rank / nullspace / span tests over ℚ and ℚ(i)
//!   (fraction-free elimination; no floating point anywhere near a rank
//!   decision);
//! - [`frames`] — the frame data model, explicit constructions, and the
//!   exact measurement map;
//! - [`designs`] — block designs, their axioms, the incidence-graph
//!   condition, Hall matchings, and design-to-frame construction;
//! - [`certify`] — complement property, PSI-completeness, informational
//!   completeness, vitality certificates, and GL-equivalence fingerprints;
//! - [`povm`] / [`tomo`] — whitening and a linear-inversion tomography
//!   simulator with a noise sweep.
//!
//! The concrete scalar types are [`Rational`] and [`GaussRational`]; all
//! core linear algebra is generic over [`exactlin::ExactScalar`].

pub mod certify;
pub mod designs;
pub mod exactlin;
pub mod frames;
pub mod json;
pub mod povm;
pub mod rng;
pub mod tomo;

pub use exactlin::{GaussRational, Rational};
pub use frames::{AnyFrame, FieldTag, Frame, FrameMeta};

/// Frame over ℚ.
pub type RealFrame = Frame<Rational>;
/// Frame over ℚ(i).
pub type ComplexFrame = Frame<GaussRational>;
/// Matrix over ℚ.
pub type RationalMatrix = exactlin::Matrix<Rational>;
/// Matrix over ℚ(i).
pub type GaussMatrix = exactlin::Matrix<GaussRational>;
/// Vector over ℚ.
pub type RationalVector = exactlin::Vector<Rational>;
/// Vector over ℚ(i).
pub type GaussVector = exactlin::Vector<GaussRational>;
