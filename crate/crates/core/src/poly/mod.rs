//! Exact polynomial arithmetic over the rationals, elimination and
//! numerical root isolation.

pub mod gcd;
pub mod modular;
pub mod mpoly;
pub mod resultant;
pub mod roots;
pub mod zpoly;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use gcd::mp_gcd;
pub use mpoly::{rat_to_f64, RatMPoly};
pub use resultant::{resultant, resultant_bareiss};
pub use roots::{univariate_roots, CPoly, Root};
pub use zpoly::{ZBiPoly, ZPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial has degree zero in `{0}`")]
    DegenerateDegree(String),
    #[error("{0} variables exceed the supported maximum")]
    TooManyVariables(usize),
    #[error("variable sets do not match: {0}")]
    VariableMismatch(String),
    #[error("leading coefficient is negligible relative to the others")]
    IllConditionedLeading,
    #[error("polynomial is constant")]
    ConstantPolynomial,
}

/// A point of the complexified plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint2 {
    pub x: Complex64,
    pub y: Complex64,
}

impl ComplexPoint2 {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y }
    }

    pub fn real(x: f64, y: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.conj(), self.y.conj())
    }

    /// Largest coordinate modulus.
    pub fn max_abs(&self) -> f64 {
        self.x.norm().max(self.y.norm())
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.x.im.abs().max(self.y.im.abs())
    }

    /// Euclidean distance in `C^2` viewed as `R^4`.
    pub fn dist(&self, other: &Self) -> f64 {
        ((self.x - other.x).norm_sqr() + (self.y - other.y).norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}
