//! Numerical workbench for the `L^p -> L^q` operator-norm asymptotics of the
//! oscillatory integral operators `T^{j,k}_N f(s) = ∫_B f(x) e^{iN|x|^j s^k} dx`
//! with linear versus quadratic phases.
//!
//! The crate measures, at desk scale, the frequency-decay exponents of these
//! operator norms against the closed-form exponent surface, reproduces the
//! lower-bound test-function constructions and the interpolation upper bound,
//! verifies the stationary/non-stationary phase estimates and the kernel and
//! bilinear inequalities behind the energy estimate, and rebuilds the forced
//! Schrödinger counterexample that motivates the whole comparison.

pub mod error;
mod fit;
pub mod fresnel;
pub mod ineq;
pub mod opnorm;
pub mod phase;
pub mod quad;
pub mod schrod;
pub mod theory;

pub use error::{Error, Result};
