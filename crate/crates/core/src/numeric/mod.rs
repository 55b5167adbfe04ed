//! Complex scalar and polynomial arithmetic, root solving, resultants and the
//! projective metric.

mod poly;
mod projective;
mod tripoly;

pub use num_complex::Complex64 as Complex;
pub use poly::{resultant, solve_univariate, Root, UniPoly};
pub(crate) use poly::sylvester_determinant;
pub use projective::{chordal_distance, normalize_point, vector_chordal_distance, ProjectivePoint};
pub(crate) use projective::norm;
pub use tripoly::{monomials, TriPoly};

/// Primitive cube root of unity `e^(2 pi i / 3)`.
pub fn omega() -> Complex {
    Complex::new(-0.5, 3f64.sqrt() / 2.0)
}

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn cr(re: f64) -> Complex {
    Complex::new(re, 0.0)
}
