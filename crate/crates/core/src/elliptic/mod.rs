//! The elliptic-curve structure of a smooth cubic with an inflection point as
//! identity: short Weierstrass chart, chord-tangent group law, torsion points
//! and points of type `3k`.

mod counting;
mod division;
mod torsion;

use nalgebra::Matrix3;

pub use counting::{constructible_sizes, jordan_totient_2, totient_subset_witness};
pub use division::DivisionPolynomials;
pub use torsion::TorsionSet;

use crate::config::Tolerances;
use crate::curve::{CubicForm, CurvePoint};
use crate::error::{Error, Result};
use crate::numeric::{cr, norm, normalize_point, vector_chordal_distance, Complex, ProjectivePoint};
use crate::transform::ProjectiveTransform;

/// A smooth cubic together with an inflection point chosen as identity and a
/// projective change of coordinates to short Weierstrass form
/// `y^2 z = x^3 + A x z^2 + B z^3`.
#[derive(Debug, Clone)]
pub struct EllipticChart {
    curve: CubicForm,
    identity: CurvePoint,
    a: Complex,
    b: Complex,
    to_weierstrass: ProjectiveTransform,
    from_weierstrass: ProjectiveTransform,
    tol: Tolerances,
}

impl EllipticChart {
    /// Builds the chart: move `identity` to `(0:1:0)` with tangent `z = 0`,
    /// complete the square in `y`, rescale `x`, and depress the cubic in `x`.
    pub fn new(curve: &CubicForm, identity: &ProjectivePoint, tol: &Tolerances) -> Result<Self> {
        curve.ensure_smooth(tol)?;
        if !curve.is_inflection(identity, tol) {
            return Err(Error::NotInflection);
        }
        let o = identity.unit();
        let grad = curve.gradient(identity);
        let u = {
            let d = curve.tangent_direction(identity);
            // remove the component along O so that u, O span the tangent line well
            let ip: Complex = o.iter().zip(&d).map(|(a, b)| a.conj() * b).sum();
            let d = [0, 1, 2].map(|i| d[i] - ip * o[i]);
            let n = norm(&d);
            d.map(|x| x / n)
        };
        let w = {
            let g = grad.map(|x| x.conj());
            let n = norm(&g);
            g.map(|x| x / n)
        };
        // new (X, Y, Z) -> old X u + Y O + Z w
        let place = Matrix3::from_fn(|r, col| [u, o, w][col][r]);
        let g0 = curve.poly().substitute(&place);
        let scale = g0.norm_inf();
        for e in [[0, 3, 0], [1, 2, 0], [2, 1, 0]] {
            if g0.coeff(e).norm() > 1e-6 * scale {
                return Err(Error::NotInflection);
            }
        }
        let alpha = g0.coeff([0, 2, 1]);
        let beta = g0.coeff([1, 1, 1]);
        let gamma = g0.coeff([0, 1, 2]);
        // Y = Y' - (beta X + gamma Z) / (2 alpha)
        let shear = Matrix3::new(
            cr(1.0), cr(0.0), cr(0.0),
            -beta / (alpha * 2.0), cr(1.0), -gamma / (alpha * 2.0),
            cr(0.0), cr(0.0), cr(1.0),
        );
        let g1 = g0.substitute(&shear);
        // alpha Y^2 Z + c3 X^3 + ... = 0: X = s X' with (-c3/alpha) s^3 = 1
        let c3 = g1.coeff([3, 0, 0]);
        let s = (-alpha / c3).powf(1.0 / 3.0);
        let stretch = Matrix3::from_diagonal(&nalgebra::Vector3::new(s, cr(1.0), cr(1.0)));
        let g2 = g1.substitute(&stretch);
        // monic in X^3 after dividing by -alpha: X^3 + a2 X^2 Z + ... ; X = X' - a2/3 Z
        let a2 = g2.coeff([2, 0, 1]) / (-alpha);
        let depress = Matrix3::new(
            cr(1.0), cr(0.0), -a2 / 3.0,
            cr(0.0), cr(1.0), cr(0.0),
            cr(0.0), cr(0.0), cr(1.0),
        );
        let from = ProjectiveTransform::new(place * shear * stretch * depress)?;
        let to = from.inverse();
        let w_form = curve.poly().substitute(from.matrix());
        let kappa = w_form.coeff([0, 2, 1]);
        let a = -w_form.coeff([1, 0, 2]) / kappa;
        let b = -w_form.coeff([0, 0, 3]) / kappa;
        let chart = Self {
            curve: curve.clone(),
            identity: curve.curve_point(*identity),
            a,
            b,
            to_weierstrass: to,
            from_weierstrass: from,
            tol: *tol,
        };
        let resid = crate::curve::proportionality_residual(&w_form, chart.weierstrass_form().poly());
        if resid > tol.on_curve.max(1e-9) * 100.0 {
            return Err(Error::Numerical(format!("Weierstrass reduction residual {resid:.3e}")));
        }
        Ok(chart)
    }

    /// Chart with the first computed inflection point as identity.
    pub fn with_default_identity(curve: &CubicForm, tol: &Tolerances) -> Result<Self> {
        let flexes = curve.inflection_points(tol)?;
        Self::new(curve, &flexes.points()[0], tol)
    }

    pub fn curve(&self) -> &CubicForm {
        &self.curve
    }

    pub fn identity(&self) -> &CurvePoint {
        &self.identity
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Short Weierstrass coefficients `(A, B)`.
    pub fn weierstrass_coefficients(&self) -> (Complex, Complex) {
        (self.a, self.b)
    }

    /// `y^2 z - x^3 - A x z^2 - B z^3`.
    pub fn weierstrass_form(&self) -> CubicForm {
        CubicForm::from_terms(&[
            ([0, 2, 1], cr(1.0)),
            ([3, 0, 0], cr(-1.0)),
            ([1, 0, 2], -self.a),
            ([0, 0, 3], -self.b),
        ])
        .expect("Weierstrass cubic is nonzero")
    }

    pub fn to_weierstrass(&self) -> &ProjectiveTransform {
        &self.to_weierstrass
    }

    pub fn from_weierstrass(&self) -> &ProjectiveTransform {
        &self.from_weierstrass
    }

    /// `1728 * 4A^3 / (4A^3 + 27B^2)`.
    pub fn j_invariant(&self) -> Complex {
        let a3 = self.a.powu(3) * 4.0;
        a3 * 1728.0 / (a3 + self.b * self.b * 27.0)
    }

    /// Third intersection of the curve with the line through `p` and `q`
    /// (the tangent line when they coincide).
    fn third_point(&self, p: &[Complex; 3], q: &[Complex; 3]) -> Result<[Complex; 3]> {
        let p = unit(p);
        let q = unit(q);
        let tangent = vector_chordal_distance(&p, &q)? < self.tol.matching;
        let scale = self.curve.poly().norm_inf();
        let (dir, r) = if tangent {
            let pp = normalize_point(p)?;
            let d = unit(&self.curve.tangent_direction(&pp));
            let r = self.curve.poly().restrict_to_line(&p, &d);
            // f(sP + tD) = t^2 (r2 s + r3 t): third root (s : t) = (-r3 : r2)
            (d, [-r[3], r[2]])
        } else {
            let r = self.curve.poly().restrict_to_line(&p, &q);
            // f(sP + tQ) = s t (r1 s + r2 t): third root (s : t) = (-r2 : r1)
            (q, [-r[2], r[1]])
        };
        if r[0].norm().max(r[1].norm()) <= 1e-14 * scale {
            return Err(Error::IllConditionedChord);
        }
        let v = [0, 1, 2].map(|i| r[0] * p[i] + r[1] * dir[i]);
        if norm(&v) == 0.0 {
            return Err(Error::IllConditionedChord);
        }
        Ok(self.snap(&v))
    }

    /// Moves `v` onto the curve by minimal-norm Newton corrections.
    fn snap(&self, v: &[Complex; 3]) -> [Complex; 3] {
        let f = self.curve.poly();
        let partials = [f.partial(0), f.partial(1), f.partial(2)];
        let mut w = unit(v);
        for _ in 0..3 {
            let val = f.eval(&w);
            let g = [0, 1, 2].map(|i| partials[i].eval(&w));
            let gn: f64 = g.iter().map(|x| x.norm_sqr()).sum();
            if gn == 0.0 || val.norm() == 0.0 {
                break;
            }
            let next = unit(&[0, 1, 2].map(|i| w[i] - val * g[i].conj() / gn));
            if f.eval(&next).norm() >= val.norm() {
                break;
            }
            w = next;
        }
        w
    }

    fn point(&self, v: &[Complex; 3]) -> Result<CurvePoint> {
        Ok(self.curve.curve_point(normalize_point(*v)?))
    }

    /// Chord-tangent sum with the chart identity as zero.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        let r = self.third_point(&p.point.coords(), &q.point.coords())?;
        let s = self.third_point(&self.identity.point.coords(), &r)?;
        self.point(&s)
    }

    pub fn negate(&self, p: &CurvePoint) -> Result<CurvePoint> {
        let r = self.third_point(&self.identity.point.coords(), &p.point.coords())?;
        self.point(&r)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.add(p, &self.negate(q)?)
    }

    /// `m P` by double-and-add; `0 P` is the identity.
    pub fn scalar_mul(&self, m: i64, p: &CurvePoint) -> Result<CurvePoint> {
        let base = if m < 0 { self.negate(p)? } else { *p };
        let mut k = m.unsigned_abs();
        let mut acc = self.identity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow)?;
            }
            k >>= 1;
            if k > 0 {
                pow = self.add(&pow, &pow)?;
            }
        }
        Ok(acc)
    }

    /// Whether `p` is the identity within the matching tolerance.
    pub fn is_identity(&self, p: &CurvePoint) -> bool {
        crate::numeric::chordal_distance(&p.point, &self.identity.point) < self.tol.matching
    }

    /// Chart point for affine Weierstrass coordinates `(x, y)`.
    pub(crate) fn from_affine(&self, x: Complex, y: Complex) -> Result<CurvePoint> {
        let v = self.from_weierstrass.apply_vector(&[x, y, cr(1.0)]);
        self.point(&self.snap(&v))
    }

    /// Affine Weierstrass coordinates of `p`, or `None` for the identity.
    pub fn weierstrass_coordinates(&self, p: &CurvePoint) -> Option<(Complex, Complex)> {
        let v = self.to_weierstrass.apply_vector(&p.point.coords());
        let n = norm(&v);
        if v[2].norm() <= 1e-12 * n {
            return None;
        }
        Some((v[0] / v[2], v[1] / v[2]))
    }
}

fn unit(v: &[Complex; 3]) -> [Complex; 3] {
    let n = norm(v);
    v.map(|x| x / n)
}

#[cfg(test)]
mod tests;
