//! Cubic plane curves: evaluation, smoothness, the Hessian covariant and
//! inflection points.

mod intersect;

use std::fmt;

use serde::{Deserialize, Serialize};

pub(crate) use intersect::{apply, chart_matrix, polish_pair, relative_residual};
use intersect::{intersect_in_chart, Elimination};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numeric::{c, cr, normalize_point, solve_univariate, Complex, ProjectivePoint, TriPoly, UniPoly};
use crate::pointset::PointSet;

/// Number of generic charts tried before an elimination is declared degenerate.
const CHART_ATTEMPTS: u64 = 8;

/// A homogeneous cubic `f(x, y, z)`, defined up to a nonzero scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicForm {
    poly: TriPoly,
    label: Option<String>,
}

/// A point on a cubic with its relative residual `|f(P)| / |f|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub point: ProjectivePoint,
    pub residual: f64,
}

/// Result of the smoothness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothness {
    pub smooth: bool,
    /// A singular point when the curve is not smooth.
    pub witness: Option<ProjectivePoint>,
    /// Smallest relative gradient norm over the candidate singular points;
    /// small values mean the curve is close to the discriminant.
    pub margin: f64,
}

impl CubicForm {
    pub fn new(poly: TriPoly) -> Result<Self> {
        if poly.degree() != 3 {
            return Err(Error::InvalidArgument(format!("degree {} is not 3", poly.degree())));
        }
        if poly.coeffs().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { poly, label: None })
    }

    pub fn from_terms(terms: &[([u32; 3], Complex)]) -> Result<Self> {
        for (e, _) in terms {
            if e.iter().sum::<u32>() != 3 {
                return Err(Error::InvalidArgument(format!("exponent {e:?} is not cubic")));
            }
        }
        Self::new(TriPoly::from_terms(3, terms))
    }

    /// `x^3 + y^3 + z^3`.
    pub fn fermat() -> Self {
        Self::hesse(cr(0.0)).with_label("fermat")
    }

    /// Member `x^3 + y^3 + z^3 + lambda xyz` of the Hesse pencil.
    pub fn hesse(lambda: Complex) -> Self {
        let one = cr(1.0);
        Self::from_terms(&[([3, 0, 0], one), ([0, 3, 0], one), ([0, 0, 3], one), ([1, 1, 1], lambda)])
            .expect("Hesse cubic is a valid cubic")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn poly(&self) -> &TriPoly {
        &self.poly
    }

    pub fn coeff(&self, e: [u32; 3]) -> Complex {
        self.poly.coeff(e)
    }

    pub fn scale(&self, s: Complex) -> Result<Self> {
        Self::new(self.poly.scale(s))
    }

    /// `f(P)` on the normalized representative of `P`.
    pub fn evaluate(&self, p: &ProjectivePoint) -> Complex {
        self.poly.eval(&p.coords())
    }

    /// `(f_x, f_y, f_z)` on the normalized representative of `P`.
    pub fn gradient(&self, p: &ProjectivePoint) -> [Complex; 3] {
        let v = p.coords();
        [0, 1, 2].map(|i| self.poly.partial(i).eval(&v))
    }

    /// Relative residual `|f(P)| / max|coeff|`.
    pub fn residual(&self, p: &ProjectivePoint) -> f64 {
        relative_residual(&self.poly, &p.coords())
    }

    pub fn curve_point(&self, p: ProjectivePoint) -> CurvePoint {
        CurvePoint {
            point: p,
            residual: self.residual(&p),
        }
    }

    /// Whether `self = s * other` for some scalar `s`, within `tol` relative
    /// to the largest coefficient.
    pub fn proportional_to(&self, other: &CubicForm, tol: f64) -> bool {
        proportionality_residual(&self.poly, &other.poly) <= tol
    }

    /// Tests `f = f_x = f_y = f_z = 0` for a projective solution.
    ///
    /// Two generic combinations of the partials are intersected by resultant
    /// elimination; every singular point is among the (at most four) common
    /// points, which are then tested against the full gradient.
    pub fn is_smooth(&self, tol: &Tolerances) -> Smoothness {
        let partials = [self.poly.partial(0), self.poly.partial(1), self.poly.partial(2)];
        let scale = self.poly.norm_inf();
        let rel_grad = |v: &[Complex; 3]| -> f64 {
            let n = crate::numeric::norm(v);
            let u = v.map(|x| x / n);
            partials.iter().map(|p| p.eval(&u).norm_sqr()).sum::<f64>().sqrt() / scale
        };
        let combos = [
            [c(0.8, 0.3), c(-0.4, 0.9), c(0.5, -0.6)],
            [c(-0.3, 0.7), c(0.6, 0.2), c(0.9, 0.4)],
        ];
        let g1 = combine(&partials, &combos[0]);
        let g2 = combine(&partials, &combos[1]);
        for chart in 0..CHART_ATTEMPTS {
            match intersect_in_chart(&g1, &g2, chart, tol) {
                Ok(Elimination::Points(pts)) => {
                    let mut margin = f64::INFINITY;
                    let mut witness = None;
                    for (v, _) in pts {
                        let v = polish_pair(&g1, &g2, v);
                        let m = rel_grad(&v);
                        if m < margin {
                            margin = m;
                            if m <= tol.on_curve {
                                witness = normalize_point(v).ok();
                            }
                        }
                    }
                    return Smoothness {
                        smooth: witness.is_none(),
                        witness,
                        margin,
                    };
                }
                Ok(Elimination::CommonComponent) => {
                    // The partials share a component, along which every partial vanishes.
                    let witness = common_component_witness(&g1, &partials, scale, tol);
                    return Smoothness {
                        smooth: false,
                        witness,
                        margin: 0.0,
                    };
                }
                Ok(Elimination::BadChart) | Err(_) => continue,
            }
        }
        Smoothness {
            smooth: false,
            witness: None,
            margin: 0.0,
        }
    }

    /// Fails with [`Error::SingularCurve`] unless the curve is smooth.
    pub fn ensure_smooth(&self, tol: &Tolerances) -> Result<Smoothness> {
        let s = self.is_smooth(tol);
        if s.smooth {
            Ok(s)
        } else {
            Err(Error::SingularCurve {
                witness: s
                    .witness
                    .unwrap_or_else(|| ProjectivePoint::from_real(0.0, 0.0, 1.0).expect("nonzero")),
            })
        }
    }

    /// Determinant of the matrix of second partials.
    pub fn hessian(&self) -> CubicForm {
        let h: Vec<Vec<TriPoly>> = (0..3)
            .map(|i| (0..3).map(|j| self.poly.partial(i).partial(j)).collect())
            .collect();
        let minor = |a: usize, b: usize, cc: usize, d: usize| {
            h[1][a].mul(&h[2][b]).sub(&h[1][cc].mul(&h[2][d]))
        };
        let det = h[0][0]
            .mul(&minor(1, 2, 2, 1))
            .sub(&h[0][1].mul(&minor(0, 2, 2, 0)))
            .add(&h[0][2].mul(&minor(0, 1, 1, 0)));
        CubicForm { poly: det, label: None }
    }

    /// The nine inflection points: common zeros of the curve and its Hessian.
    pub fn inflection_points(&self, tol: &Tolerances) -> Result<PointSet> {
        self.ensure_smooth(tol)?;
        let hess = self.hessian();
        let mut found = PointSet::new(tol.matching);
        for chart in 0..CHART_ATTEMPTS {
            let pts = match intersect_in_chart(&self.poly, &hess.poly, chart, tol) {
                Ok(Elimination::Points(pts)) => pts,
                Ok(Elimination::CommonComponent) => {
                    return Err(Error::DegenerateElimination("curve and Hessian share a component".into()))
                }
                Ok(Elimination::BadChart) | Err(_) => continue,
            };
            for (v, _) in pts {
                let v = polish_pair(&self.poly, &hess.poly, v);
                if relative_residual(&self.poly, &v) <= tol.on_curve
                    && relative_residual(&hess.poly, &v) <= tol.on_curve
                {
                    found.insert(normalize_point(v)?);
                }
            }
            if found.len() == 9 {
                return Ok(found);
            }
        }
        Err(Error::DegenerateElimination(format!(
            "found {} of 9 inflection points",
            found.len()
        )))
    }

    /// Whether `P` is an inflection point (on the curve and on the Hessian).
    pub fn is_inflection(&self, p: &ProjectivePoint, tol: &Tolerances) -> bool {
        let probe = tol.on_curve.max(tol.matching);
        self.residual(p) <= probe && self.hessian().residual(p) <= probe
    }

    /// Tangent direction at a smooth point `P`: a vector spanning the tangent
    /// line together with `P`.
    pub fn tangent_direction(&self, p: &ProjectivePoint) -> [Complex; 3] {
        let g = self.gradient(p);
        let v = p.coords();
        // candidates g x e_i lie in the tangent plane; pick the one least parallel to P
        let cands = [0, 1, 2].map(|i| {
            let mut e = [cr(0.0); 3];
            e[i] = cr(1.0);
            cross(&g, &e)
        });
        cands
            .into_iter()
            .max_by(|a, b| {
                let da = crate::numeric::vector_chordal_distance(a, &v).unwrap_or(0.0)
                    * crate::numeric::norm(a);
                let db = crate::numeric::vector_chordal_distance(b, &v).unwrap_or(0.0)
                    * crate::numeric::norm(b);
                da.total_cmp(&db)
            })
            .expect("three candidates")
    }

    /// Intersection multiplicity at `P` of the curve with its tangent line.
    pub fn tangent_contact_order(&self, p: &ProjectivePoint, tol: f64) -> usize {
        let d = self.tangent_direction(p);
        let v = p.unit();
        let n = crate::numeric::norm(&d);
        let d = d.map(|x| x / n);
        let r = self.poly.restrict_to_line(&v, &d);
        let scale = self.poly.norm_inf();
        r.iter().take_while(|c| c.norm() <= tol * scale).count()
    }

    /// Points of the curve on the line through `p` and `q`.
    pub fn intersect_line(&self, p: &[Complex; 3], q: &[Complex; 3], tol: &Tolerances) -> Result<Vec<(ProjectivePoint, usize)>> {
        let r = self.poly.restrict_to_line(p, q);
        let scale = self.poly.norm_inf() * crate::numeric::norm(p).max(crate::numeric::norm(q)).powi(3);
        if r.iter().all(|c| c.norm() <= 1e-12 * scale) {
            return Err(Error::DegenerateElimination("line is a component of the curve".into()));
        }
        let mut out = Vec::new();
        // binary form sum r_k s^(3-k) t^k; roots at s = 0 correspond to q itself
        let poly = UniPoly::new(r.clone()).trim_relative(1e-13);
        let finite_deg = poly.degree();
        if finite_deg < 3 {
            let at_q = normalize_point(*q)?;
            out.push((at_q, 3 - finite_deg));
        }
        if finite_deg >= 1 {
            for root in solve_univariate(&poly, tol)? {
                let t = root.value;
                let v = [0, 1, 2].map(|i| p[i] + t * q[i]);
                out.push((normalize_point(v)?, root.multiplicity));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        let mut first = true;
        for (e, coef) in self.poly.terms() {
            if coef.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coef})")?;
            for (v, &k) in names.iter().zip(&e) {
                match k {
                    0 => {}
                    1 => write!(f, "{v}")?,
                    _ => write!(f, "{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

fn combine(parts: &[TriPoly; 3], w: &[Complex; 3]) -> TriPoly {
    parts[0].scale(w[0]).add(&parts[1].scale(w[1])).add(&parts[2].scale(w[2]))
}

pub(crate) fn cross(a: &[Complex; 3], b: &[Complex; 3]) -> [Complex; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `min_s |a - s b|_inf / |a|_inf` for the least-squares scalar `s`.
pub(crate) fn proportionality_residual(a: &TriPoly, b: &TriPoly) -> f64 {
    let num: Complex = b.coeffs().iter().zip(a.coeffs()).map(|(x, y)| x.conj() * y).sum();
    let den: f64 = b.coeffs().iter().map(|x| x.norm_sqr()).sum();
    if den == 0.0 {
        return if a.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let s = num / den;
    let diff = a.sub(&b.scale(s));
    diff.norm_inf() / a.norm_inf().max(f64::MIN_POSITIVE)
}

/// A point on the fixed component of the partials, found on a generic line.
fn common_component_witness(g: &TriPoly, partials: &[TriPoly; 3], scale: f64, tol: &Tolerances) -> Option<ProjectivePoint> {
    for chart in 0..CHART_ATTEMPTS {
        let u = chart_matrix(chart + 100);
        let p = [u[(0, 0)], u[(1, 0)], u[(2, 0)]];
        let q = [u[(0, 1)], u[(1, 1)], u[(2, 1)]];
        let r = UniPoly::new(g.restrict_to_line(&p, &q)).trim_relative(1e-13);
        if r.degree() == 0 {
            continue;
        }
        let Ok(roots) = solve_univariate(&r, tol) else { continue };
        for root in roots {
            let v = [0, 1, 2].map(|i| p[i] + root.value * q[i]);
            let n = crate::numeric::norm(&v);
            let u = v.map(|x| x / n);
            let grad = partials.iter().map(|d| d.eval(&u).norm()).fold(0.0, f64::max);
            if grad <= 1e-8 * scale {
                return normalize_point(v).ok();
            }
        }
    }
    None
}
