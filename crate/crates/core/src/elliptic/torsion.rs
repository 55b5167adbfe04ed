//! Torsion points via division polynomials, and points of type `3k`.

use super::{jordan_totient_2, DivisionPolynomials, EllipticChart};
use crate::curve::CurvePoint;
use crate::error::{Error, Result};
use crate::numeric::{solve_univariate, Complex};
use crate::pointset::PointSet;

/// The `m^2` points of order dividing `m`.
#[derive(Debug, Clone)]
pub struct TorsionSet {
    pub order_bound: u32,
    pub points: PointSet,
    pub chart: EllipticChart,
}

fn factorize(mut m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

impl EllipticChart {
    /// Distinct `x`-roots of `poly`, each giving the points `(x, +-y)`.
    fn points_over_roots(&self, poly: &crate::numeric::UniPoly, cubic: &crate::numeric::UniPoly) -> Result<Vec<(Complex, Complex)>> {
        let roots = solve_univariate(poly, &self.tol)?;
        let mut out = Vec::new();
        for r in roots {
            if r.multiplicity != 1 {
                return Err(Error::Numerical(format!(
                    "repeated torsion abscissa {} (multiplicity {})",
                    r.value, r.multiplicity
                )));
            }
            let y = cubic.eval(r.value).sqrt();
            out.push((r.value, y));
            out.push((r.value, -y));
        }
        Ok(out)
    }

    /// Affine Weierstrass points of exact order `p^j`, for `j = 1..=e`.
    fn prime_power_layers(&self, divpoly: &mut DivisionPolynomials, p: u32, e: u32) -> Result<Vec<Vec<(Complex, Complex)>>> {
        let cubic = divpoly.cubic().clone();
        let mut layers: Vec<Vec<(Complex, Complex)>> = Vec::new();
        if p == 2 {
            // order 2: roots of the cubic, y = 0
            let roots = solve_univariate(&cubic, &self.tol)?;
            if roots.len() != 3 {
                return Err(Error::Numerical("2-torsion abscissae are not distinct".into()));
            }
            layers.push(roots.iter().map(|r| (r.value, Complex::new(0.0, 0.0))).collect());
            if e >= 2 {
                // order 4: h_4 vanishes exactly on the order-4 abscissae
                layers.push(self.points_over_roots(&divpoly.h(4), &cubic)?);
            }
        } else {
            layers.push(self.points_over_roots(&divpoly.h(p), &cubic)?);
        }
        while (layers.len() as u32) < e {
            // P has exact order p^(j+1) iff pP has exact order p^j.
            let mut abscissae: Vec<Complex> = Vec::new();
            for (x, _) in layers.last().expect("nonempty") {
                let scale = x.norm().max(1.0);
                if !abscissae.iter().any(|a| (a - x).norm() <= 1e-8 * scale) {
                    abscissae.push(*x);
                }
            }
            let mut next = Vec::new();
            for x_t in abscissae {
                next.extend(self.points_over_roots(&divpoly.preimage_polynomial(p, x_t), &cubic)?);
            }
            layers.push(next);
        }
        Ok(layers)
    }

    /// All `m^2` points `P` with `m P = O`.
    ///
    /// Each prime-power part `E[p^e]` is computed in the Weierstrass chart from
    /// the roots of `psi_p` (or of the 2-division cubic and `h_4`), lifting one
    /// level at a time through `phi_p - x_T psi_p^2`; the parts are then summed
    /// with the group law on the original curve.
    pub fn torsion_points(&self, m: u32) -> Result<TorsionSet> {
        if m == 0 {
            return Err(Error::InvalidArgument("torsion order must be at least 1".into()));
        }
        if m > self.tol.max_torsion_order {
            return Err(Error::OrderOutOfRange(m));
        }
        let mut divpoly = DivisionPolynomials::new(self.a, self.b);
        let mut total: Vec<CurvePoint> = vec![self.identity];
        for (p, e) in factorize(m) {
            let mut part: Vec<CurvePoint> = vec![self.identity];
            for layer in self.prime_power_layers(&mut divpoly, p, e)? {
                for (x, y) in layer {
                    part.push(self.from_affine(x, y)?);
                }
            }
            let mut combined = Vec::with_capacity(total.len() * part.len());
            for t in &total {
                for q in &part {
                    combined.push(self.add(t, q)?);
                }
            }
            total = combined;
        }
        let points = PointSet::from_points(total.iter().map(|p| p.point), self.tol.matching);
        let expected = (m * m) as usize;
        if points.len() != expected {
            return Err(Error::Numerical(format!(
                "found {} distinct {m}-torsion points, expected {expected}",
                points.len()
            )));
        }
        for p in points.iter() {
            let q = self.scalar_mul(m as i64, &self.curve.curve_point(*p))?;
            if !self.is_identity(&q) {
                return Err(Error::Numerical(format!("point {p} is not {m}-torsion")));
            }
        }
        Ok(TorsionSet {
            order_bound: m,
            points,
            chart: self.clone(),
        })
    }

    /// Points of type `3k`: the `3k`-torsion points that are not `3j`-torsion
    /// for any proper divisor `j` of `k`. There are `9 J2(k)` of them.
    pub fn points_of_type(&self, k: u32) -> Result<PointSet> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let order = k.checked_mul(3).ok_or(Error::OrderOutOfRange(u32::MAX))?;
        let mut set = self.torsion_points(order)?.points;
        for j in (1..k).filter(|j| k % j == 0) {
            set = set.difference(&self.torsion_points(3 * j)?.points);
        }
        let expected = 9 * jordan_totient_2(k as u64)? as usize;
        if set.len() != expected {
            return Err(Error::Numerical(format!(
                "found {} points of type {}, expected {expected}",
                set.len(),
                3 * k
            )));
        }
        Ok(set)
    }
}
