//! Intersection of two plane curves by eliminating `y` with Sylvester
//! resultants in a generic affine chart.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numeric::{c, cr, norm, solve_univariate, sylvester_determinant, Complex, TriPoly, UniPoly};

/// Outcome of eliminating between two curves in one chart.
#[derive(Debug, Clone)]
pub(crate) enum Elimination {
    /// Intersection points (raw homogeneous vectors in original coordinates)
    /// with their multiplicity as roots of the eliminant.
    Points(Vec<([Complex; 3], usize)>),
    /// The eliminant vanishes identically: the curves share a component.
    CommonComponent,
    /// Some intersection escapes to infinity in this chart; try another.
    BadChart,
}

/// Deterministic well-conditioned unitary change of coordinates used as the
/// `index`-th affine chart.
pub(crate) fn chart_matrix(index: u64) -> Matrix3<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee_u64.wrapping_add(index));
    let mut cols: Vec<[Complex; 3]> = Vec::new();
    while cols.len() < 3 {
        let mut v = [0; 3].map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        for u in &cols {
            let ip: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for k in 0..3 {
                v[k] -= ip * u[k];
            }
        }
        let n = norm(&v);
        if n > 0.2 {
            cols.push(v.map(|x| x / n));
        }
    }
    Matrix3::from_fn(|r, col| cols[col][r])
}

pub(crate) fn apply(m: &Matrix3<Complex>, v: &[Complex; 3]) -> [Complex; 3] {
    [0, 1, 2].map(|r| m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2])
}

/// Relative residual `|p(v)| / |p|` with `v` scaled so its largest coordinate has modulus 1.
pub(crate) fn relative_residual(p: &TriPoly, v: &[Complex; 3]) -> f64 {
    let m = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return f64::INFINITY;
    }
    let w = v.map(|x| x / m);
    let scale = p.norm_inf();
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(&w).norm() / scale
}

/// Eliminant `Res_y(F(x, y, 1), G(x, y, 1))` as a polynomial in `x`, recovered
/// from its values on a circle by discrete Fourier interpolation.
pub(crate) fn eliminant(f: &TriPoly, g: &TriPoly) -> UniPoly {
    let bound = (f.degree() * g.degree()) as usize;
    let n = (2 * bound + 2).next_power_of_two();
    let values: Vec<Complex> = (0..n)
        .map(|s| {
            let x = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / n as f64);
            sylvester_determinant(&f.coefficients_in_y(x), &g.coefficients_in_y(x))
        })
        .collect();
    let coeffs: Vec<Complex> = (0..=bound)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(s, v)| {
                    v * Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * s) as f64 / n as f64)
                })
                .sum::<Complex>()
                / n as f64
        })
        .collect();
    UniPoly::new(coeffs)
}

/// Scale of the eliminant expected from the coefficient sizes of the inputs.
fn eliminant_scale(f: &TriPoly, g: &TriPoly) -> f64 {
    f.norm_inf().powi(g.degree() as i32) * g.norm_inf().powi(f.degree() as i32)
}

/// Intersects `f = 0` and `g = 0` in the `chart`-th generic chart.
pub(crate) fn intersect_in_chart(f: &TriPoly, g: &TriPoly, chart: u64, tol: &Tolerances) -> Result<Elimination> {
    let u = chart_matrix(chart);
    let fc = f.substitute(&u);
    let gc = g.substitute(&u);
    let bound = (f.degree() * g.degree()) as usize;
    let res = eliminant(&fc, &gc);
    let scale = eliminant_scale(&fc, &gc);
    if res.norm_inf() <= 1e-10 * scale {
        return Ok(Elimination::CommonComponent);
    }
    let res = res.trim_relative(1e-12);
    if res.degree() < bound || res.leading().norm() < 1e-9 * res.norm_inf() {
        return Ok(Elimination::BadChart);
    }
    let roots = solve_univariate(&res, tol)?;
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let x = root.value;
        let fy = UniPoly::new(fc.coefficients_in_y(x));
        if fy.degree() == 0 {
            return Ok(Elimination::BadChart);
        }
        let ys = solve_univariate(&fy, tol)?;
        let best = ys
            .iter()
            .map(|y| {
                let v = [x, y.value, cr(1.0)];
                (v, relative_residual(&gc, &v))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(v, _)| v)
            .ok_or_else(|| Error::Numerical("no fibre point over eliminant root".into()))?;
        out.push((apply(&u, &best), root.multiplicity));
    }
    Ok(Elimination::Points(out))
}

/// Newton's method on the pair `f = g = 0` in the affine chart where the
/// largest coordinate of `v` is fixed; returns the improved vector.
pub(crate) fn polish_pair(f: &TriPoly, g: &TriPoly, v: [Complex; 3]) -> [Complex; 3] {
    let fd = [f.partial(0), f.partial(1), f.partial(2)];
    let gd = [g.partial(0), g.partial(1), g.partial(2)];
    let pivot = (0..3)
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .unwrap_or(2);
    let free: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let mut w = v.map(|x| x / v[pivot]);
    let score = |w: &[Complex; 3]| relative_residual(f, w) + relative_residual(g, w);
    let mut best = score(&w);
    for _ in 0..20 {
        let (fv, gv) = (f.eval(&w), g.eval(&w));
        let a = fd[free[0]].eval(&w);
        let b = fd[free[1]].eval(&w);
        let cc = gd[free[0]].eval(&w);
        let d = gd[free[1]].eval(&w);
        let det = a * d - b * cc;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (d * fv - b * gv) / det;
        let dy = (a * gv - cc * fv) / det;
        let mut next = w;
        next[free[0]] -= dx;
        next[free[1]] -= dy;
        let s = score(&next);
        if !(s < best) {
            break;
        }
        w = next;
        best = s;
    }
    w
}
