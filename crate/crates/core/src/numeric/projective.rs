use std::fmt;

use serde::{Deserialize, Serialize};

use super::Complex;
use crate::error::{Error, Result};

/// A point of the complex projective plane, stored with its largest-modulus
/// coordinate (first such index on ties) scaled to exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    coords: [Complex; 3],
}

impl ProjectivePoint {
    pub fn new(v: [Complex; 3]) -> Result<Self> {
        normalize_point(v)
    }

    pub fn from_real(x: f64, y: f64, z: f64) -> Result<Self> {
        normalize_point([Complex::new(x, 0.0), Complex::new(y, 0.0), Complex::new(z, 0.0)])
    }

    pub fn coords(&self) -> [Complex; 3] {
        self.coords
    }

    pub fn x(&self) -> Complex {
        self.coords[0]
    }

    pub fn y(&self) -> Complex {
        self.coords[1]
    }

    pub fn z(&self) -> Complex {
        self.coords[2]
    }

    /// Representative of Euclidean norm 1.
    pub fn unit(&self) -> [Complex; 3] {
        let n = norm(&self.coords);
        self.coords.map(|c| c / n)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.coords;
        write!(f, "({x} : {y} : {z})")
    }
}

pub(crate) fn norm(v: &[Complex; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Rescales `v` so that its first maximal-modulus coordinate becomes 1.
pub fn normalize_point(v: [Complex; 3]) -> Result<ProjectivePoint> {
    if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut best = 0;
    for i in 1..3 {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut coords = v.map(|c| c / pivot);
    coords[best] = Complex::new(1.0, 0.0);
    Ok(ProjectivePoint { coords })
}

/// Fubini–Study chordal distance `sqrt(1 - |<P,Q>|^2 / (|P|^2 |Q|^2))`.
///
/// Evaluated as the length of the component of the unit representative of `Q`
/// orthogonal to `P`, which stays accurate for nearby points.
pub fn chordal_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    vector_chordal_distance(&p.coords, &q.coords).unwrap_or(0.0)
}

/// Chordal distance between the projective classes of two raw vectors.
pub fn vector_chordal_distance(p: &[Complex; 3], q: &[Complex; 3]) -> Result<f64> {
    let (np, nq) = (norm(p), norm(q));
    if np == 0.0 || nq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let pu = p.map(|c| c / np);
    let qu = q.map(|c| c / nq);
    let inner: Complex = pu.iter().zip(&qu).map(|(a, b)| a.conj() * b).sum();
    let orth: f64 = qu
        .iter()
        .zip(&pu)
        .map(|(b, a)| (b - inner * a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(orth.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn normalization_examples() {
        let p = normalize_point([c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(p.coords(), [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        // tie between |3i| and |3|: the lower index wins
        let p = normalize_point([c(0.0, 0.0), c(0.0, 3.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(p.y(), c(1.0, 0.0));
        assert!((p.z() - c(0.0, -1.0)).norm() < 1e-15);
        assert!(matches!(normalize_point([c(0.0, 0.0); 3]), Err(Error::ZeroVector)));
    }

    #[test]
    fn distance_examples() {
        let e1 = ProjectivePoint::from_real(1.0, 0.0, 0.0).unwrap();
        let e2 = ProjectivePoint::from_real(0.0, 1.0, 0.0).unwrap();
        assert_eq!(chordal_distance(&e1, &e1), 0.0);
        assert!((chordal_distance(&e1, &e2) - 1.0).abs() < 1e-15);
        let v = [c(0.3, 1.0), c(-2.0, 0.5), c(0.1, 0.1)];
        let lam = c(-0.7, 3.1);
        let d = vector_chordal_distance(&v, &v.map(|x| x * lam)).unwrap();
        assert!(d < 1e-15);
        assert!(vector_chordal_distance(&v, &[c(0.0, 0.0); 3]).is_err());
    }

    fn arb_vec() -> impl Strategy<Value = [Complex; 3]> {
        proptest::array::uniform6(-1.0f64..1.0).prop_filter_map("nonzero", |a| {
            let v = [c(a[0], a[1]), c(a[2], a[3]), c(a[4], a[5])];
            (norm(&v) > 1e-3).then_some(v)
        })
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(v in arb_vec()) {
            let p = normalize_point(v).unwrap();
            let q = normalize_point(p.coords()).unwrap();
            prop_assert_eq!(p, q);
        }

        #[test]
        fn triangle_inequality(a in arb_vec(), b in arb_vec(), w in arb_vec()) {
            let (p, q, r) = (
                normalize_point(a).unwrap(),
                normalize_point(b).unwrap(),
                normalize_point(w).unwrap(),
            );
            let lhs = chordal_distance(&p, &r);
            let rhs = chordal_distance(&p, &q) + chordal_distance(&q, &r);
            prop_assert!(lhs <= rhs + 1e-12);
            prop_assert!((chordal_distance(&p, &q) - chordal_distance(&q, &p)).abs() < 1e-12);
        }
    }
}
