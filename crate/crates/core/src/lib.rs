//! Simulation of magic-state distillation circuits built from transversal
//! CNOTs on rotated surface-code patches.
//!
//! Probability arithmetic is generic over [`scalar::Scalar`], so closed forms
//! and weight enumerators evaluate in `f32`, `f64` or exact rationals.

pub mod circuit;
pub mod decoder;
pub mod error;
pub mod harness;
pub mod pauli;
pub mod protocols;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};

/// Floating-point probability used by the Monte Carlo paths.
pub type Prob = f64;
/// Exact rational probability for equivalence checks.
pub type ExactProb = num_rational::BigRational;
/// Wilson interval bounds in the default precision.
pub type Interval = (Prob, Prob);
