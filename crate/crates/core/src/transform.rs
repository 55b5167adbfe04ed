use std::fmt;

use nalgebra::Matrix3;

use crate::curve::{apply, CubicForm};
use crate::error::{Error, Result};
use crate::numeric::{cr, normalize_point, omega, Complex, ProjectivePoint};

/// Entrywise tolerance for equality in PGL3.
pub const PGL_EQ_TOL: f64 = 1e-8;

/// An element of PGL3(C), stored as a unit-determinant representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveTransform {
    matrix: Matrix3<Complex>,
}

impl ProjectiveTransform {
    pub fn new(m: Matrix3<Complex>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let det = m.determinant();
        if scale == 0.0 || det.norm() <= 1e-12 * scale.powi(3) {
            return Err(Error::SingularMatrix);
        }
        Ok(Self {
            matrix: m / det.powf(1.0 / 3.0),
        })
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix3::identity(),
        }
    }

    pub fn from_rows(rows: [[Complex; 3]; 3]) -> Result<Self> {
        Self::new(Matrix3::from_fn(|r, c| rows[r][c]))
    }

    pub fn diagonal(d: [Complex; 3]) -> Result<Self> {
        Self::new(Matrix3::from_diagonal(&d.into()))
    }

    pub fn matrix(&self) -> &Matrix3<Complex> {
        &self.matrix
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.try_inverse().expect("unit determinant matrix is invertible"),
        }
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.matrix * other.matrix).expect("product of invertible matrices")
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Image of a raw homogeneous vector.
    pub fn apply_vector(&self, v: &[Complex; 3]) -> [Complex; 3] {
        apply(&self.matrix, v)
    }

    pub fn act_on_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        normalize_point(self.apply_vector(&p.coords())).expect("invertible map of a nonzero vector")
    }

    /// The cubic `f o g^-1`, so that `P` lies on `f` iff `g P` lies on `g.f`.
    pub fn act_on_cubic(&self, f: &CubicForm) -> CubicForm {
        let inv = self.inverse();
        CubicForm::new(f.poly().substitute(&inv.matrix)).expect("invertible substitution keeps a cubic nonzero")
    }

    /// Equality in PGL3: unit-determinant representatives agree up to a cube
    /// root of unity, entrywise within `tol`.
    pub fn eq_projective(&self, other: &Self, tol: f64) -> bool {
        let w = omega();
        [cr(1.0), w, w * w].iter().any(|s| {
            (self.matrix * *s - other.matrix)
                .iter()
                .all(|d| d.norm() <= tol)
        })
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.eq_projective(&Self::identity(), tol)
    }

    /// The unique transform taking four points in general position to four
    /// points in general position, in order.
    pub fn from_point_pairs(src: &[[Complex; 3]; 4], dst: &[[Complex; 3]; 4]) -> Result<Self> {
        let a = frame(src)?;
        let b = frame(dst)?;
        let inv = a.try_inverse().ok_or(Error::SingularMatrix)?;
        Self::new(b * inv)
    }
}

/// Matrix sending e1, e2, e3, (1,1,1) to the four given points.
fn frame(p: &[[Complex; 3]; 4]) -> Result<Matrix3<Complex>> {
    let base = Matrix3::from_fn(|r, c| p[c][r]);
    let scale = base.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if base.determinant().norm() <= 1e-10 * scale.powi(3) {
        return Err(Error::InvalidArgument("points not in general position".into()));
    }
    let coeffs = base
        .lu()
        .solve(&nalgebra::Vector3::from(p[3]))
        .ok_or(Error::SingularMatrix)?;
    if coeffs.iter().any(|c| c.norm() <= 1e-10 * coeffs.norm()) {
        return Err(Error::InvalidArgument("points not in general position".into()));
    }
    Ok(Matrix3::from_fn(|r, c| p[c][r] * coeffs[c]))
}

impl fmt::Display for ProjectiveTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..3 {
            let row: Vec<String> = (0..3).map(|c| format!("{}", self.matrix[(r, c)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
