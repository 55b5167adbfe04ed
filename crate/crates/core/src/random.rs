//! Seeded generators for test curves and transforms.

use nalgebra::Matrix3;
use rand::Rng;

use crate::config::Tolerances;
use crate::curve::CubicForm;
use crate::numeric::{c, Complex, TriPoly};

/// A complex number drawn uniformly from the unit disc.
pub fn unit_disc<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(r, theta)
}

/// A cubic whose ten coefficients are uniform in the unit disc, resampled
/// until its smoothness margin is at least `tol.smoothness_margin`.
pub fn random_smooth_cubic<R: Rng + ?Sized>(rng: &mut R, tol: &Tolerances) -> CubicForm {
    loop {
        let coeffs: Vec<Complex> = (0..10).map(|_| unit_disc(rng)).collect();
        let Ok(f) = CubicForm::new(TriPoly::from_dense(3, coeffs)) else { continue };
        let s = f.is_smooth(tol);
        if s.smooth && s.margin >= tol.smoothness_margin {
            return f;
        }
    }
}

/// A random invertible matrix with condition number below 50.
pub fn random_transform_matrix<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<Complex> {
    loop {
        let m = Matrix3::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let sv = m.singular_values();
        if sv[2] > 0.0 && sv[0] / sv[2] < 50.0 {
            return m;
        }
    }
}

/// A random point on `f`, found by intersecting with a random line.
pub fn random_curve_point<R: Rng + ?Sized>(rng: &mut R, f: &CubicForm, tol: &Tolerances) -> crate::numeric::ProjectivePoint {
    loop {
        let p = [0; 3].map(|_| unit_disc(rng));
        let q = [0; 3].map(|_| unit_disc(rng));
        let Ok(pts) = f.intersect_line(&p, &q, tol) else { continue };
        let pick = rng.gen_range(0..pts.len());
        let pt = pts[pick].0;
        if f.residual(&pt) <= tol.on_curve {
            return pt;
        }
    }
}
