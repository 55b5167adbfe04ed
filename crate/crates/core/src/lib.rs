//! Distinguished point configurations on smooth complex plane cubics.
//!
//! The crate computes inflection points, torsion points and points of type
//! `3k` on a smooth cubic, the chord-tangent group law with an inflection as
//! identity, projective symmetries of the Fermat cubic and their action on
//! these configurations, and the monodromy of configurations transported
//! along loops of cubics.

pub mod config;
pub mod curve;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod numeric;
pub mod pointset;
pub mod monodromy;
pub mod random;
pub mod symmetry;
pub mod transform;

pub use config::Tolerances;
pub use curve::{CubicForm, CurvePoint, Smoothness};
pub use error::{Error, Result};
pub use numeric::{Complex, ProjectivePoint};
pub use elliptic::{EllipticChart, TorsionSet};
pub use pointset::PointSet;
pub use transform::ProjectiveTransform;
