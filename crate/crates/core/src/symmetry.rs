//! Projective symmetries of cubics: the translation subgroup of the Fermat
//! cubic, fixed points, orbits and Hesse normal form.

use std::collections::VecDeque;

use nalgebra::{Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::curve::CubicForm;
use crate::elliptic::EllipticChart;
use crate::error::{Error, Result};
use crate::numeric::{chordal_distance, cr, omega, solve_univariate, Complex, ProjectivePoint, UniPoly};
use crate::pointset::PointSet;
use crate::transform::{ProjectiveTransform, PGL_EQ_TOL};

/// Largest group the orbit closure will enumerate.
pub const MAX_GROUP_ORDER: usize = 5000;

/// The translations `a` (cyclic shift of coordinates) and
/// `b = diag(1, w, w^2)` of the Fermat cubic.
pub fn fermat_translations() -> (ProjectiveTransform, ProjectiveTransform) {
    let (o, l) = (cr(0.0), cr(1.0));
    let a = ProjectiveTransform::from_rows([[o, o, l], [l, o, o], [o, l, o]]).expect("permutation matrix");
    let w = omega();
    let b = ProjectiveTransform::diagonal([l, w, w * w]).expect("invertible diagonal");
    (a, b)
}

/// The nine elements `a^i b^j` of the translation group, identity first.
pub fn fermat_translation_group() -> Vec<ProjectiveTransform> {
    let (a, b) = fermat_translations();
    let mut out = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            out.push(a.pow(i).compose(&b.pow(j)));
        }
    }
    out
}

/// A finite set of projective automorphisms of a cubic, closed under
/// composition, with its multiplication table.
#[derive(Debug, Clone)]
pub struct AutomorphismGroupSample {
    pub elements: Vec<ProjectiveTransform>,
    /// `closure_table[i][j]` is the index of `elements[i] * elements[j]`.
    pub closure_table: Vec<Vec<usize>>,
}

impl AutomorphismGroupSample {
    /// Closes `gens` under composition after checking that each preserves `f`.
    pub fn generate(gens: &[ProjectiveTransform], f: &CubicForm, tol: &Tolerances) -> Result<Self> {
        for g in gens {
            if !g.act_on_cubic(f).proportional_to(f, tol.matching) {
                return Err(Error::NotInvariant);
            }
        }
        let elements = close_group(gens)?;
        let closure_table = elements
            .iter()
            .map(|x| {
                elements
                    .iter()
                    .map(|y| find_element(&elements, &x.compose(y)).ok_or(Error::Numerical("group closure is not closed".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { elements, closure_table })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn find_element(elements: &[ProjectiveTransform], g: &ProjectiveTransform) -> Option<usize> {
    elements.iter().position(|e| e.eq_projective(g, PGL_EQ_TOL))
}

/// Breadth-first closure of the group generated by `gens`, identity first.
fn close_group(gens: &[ProjectiveTransform]) -> Result<Vec<ProjectiveTransform>> {
    let mut elements = vec![ProjectiveTransform::identity()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let next = g.compose(&elements[i]);
            if find_element(&elements, &next).is_none() {
                if elements.len() >= MAX_GROUP_ORDER {
                    return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
                }
                elements.push(next);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    Ok(elements)
}

/// Index map `i -> j` with `g S[i] = S[j]`; errors unless `g` permutes `S`.
pub(crate) fn index_map(g: &ProjectiveTransform, s: &PointSet, tol: f64) -> Result<Vec<usize>> {
    let mut images = Vec::with_capacity(s.len());
    let mut hit = vec![false; s.len()];
    for p in s {
        let q = g.act_on_point(p);
        let j = match s.nearest(&q) {
            Some((j, d)) if d < tol && !hit[j] => j,
            _ => return Err(Error::NotInvariant),
        };
        hit[j] = true;
        images.push(j);
    }
    Ok(images)
}

pub(crate) fn eigenvalues(m: &Matrix3<Complex>, tol: &Tolerances) -> Result<Vec<Complex>> {
    let trace = m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let charpoly = UniPoly::new(vec![-m.determinant(), minors, -trace, cr(1.0)]);
    Ok(solve_univariate(&charpoly, tol)?.into_iter().map(|r| r.value).collect())
}

/// Orthonormal basis of the eigenspace of `m` for `mu`.
pub(crate) fn eigenspace(m: &Matrix3<Complex>, mu: Complex) -> Vec<[Complex; 3]> {
    let shifted = m - Matrix3::identity() * mu;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (0..3)
        .filter(|&i| svd.singular_values[i] <= 1e-6 * scale)
        .map(|i| [0, 1, 2].map(|c| v_t[(i, c)].conj()))
        .collect()
}

/// A fixed point of `g` on the curve, the eigenvalue of its eigenvector and
/// the intersection multiplicity reported by the eigenspace analysis.
struct FixedPoint {
    point: ProjectivePoint,
    eigenvalue: Complex,
    multiplicity: usize,
}

fn fixed_point_data(g: &ProjectiveTransform, f: &CubicForm, tol: &Tolerances) -> Result<Vec<FixedPoint>> {
    if g.is_identity(PGL_EQ_TOL) {
        return Err(Error::IdentityFixesEverything);
    }
    f.ensure_smooth(tol)?;
    let m = g.matrix();
    let mut out: Vec<FixedPoint> = Vec::new();
    for mu in eigenvalues(m, tol)? {
        let basis = eigenspace(m, mu);
        match basis.len() {
            0 => return Err(Error::Numerical(format!("no eigenvector found for eigenvalue {mu}"))),
            1 => {
                let p = ProjectivePoint::new(basis[0])?;
                if f.residual(&p) <= tol.on_curve.max(tol.root) {
                    out.push(FixedPoint { point: p, eigenvalue: mu, multiplicity: 1 });
                }
            }
            2 => {
                for (p, mult) in f.intersect_line(&basis[0], &basis[1], tol)? {
                    out.push(FixedPoint { point: p, eigenvalue: mu, multiplicity: mult });
                }
            }
            _ => return Err(Error::IdentityFixesEverything),
        }
    }
    let mut dedup: Vec<FixedPoint> = Vec::new();
    for fp in out {
        if !dedup.iter().any(|d| chordal_distance(&d.point, &fp.point) < tol.matching) {
            dedup.push(fp);
        }
    }
    Ok(dedup)
}

/// Points of the curve fixed by `g`.
pub fn fixed_points_on_curve(g: &ProjectiveTransform, f: &CubicForm, tol: &Tolerances) -> Result<PointSet> {
    let data = fixed_point_data(g, f, tol)?;
    Ok(PointSet::from_points(data.into_iter().map(|d| d.point), tol.matching))
}

/// Trace of `g` on first homology by the Lefschetz formula, assuming every
/// fixed point is simple: `2 - #fixed points`.
pub fn lefschetz_trace(g: &ProjectiveTransform, f: &CubicForm, tol: &Tolerances) -> Result<i64> {
    if !g.act_on_cubic(f).proportional_to(f, tol.matching) {
        return Err(Error::NotInvariant);
    }
    let data = fixed_point_data(g, f, tol)?;
    for fp in &data {
        if fp.multiplicity > 1 {
            return Err(Error::DegenerateFixedPoint);
        }
        // g acts on the invariant tangent line; its derivative on the curve is
        // the ratio of the eigenvalues on the tangent direction and on P
        let v = fp.point.unit();
        let t = f.tangent_direction(&fp.point);
        let proj = |w: &[Complex; 3]| {
            let dot: Complex = (0..3).map(|i| v[i].conj() * w[i]).sum();
            [0, 1, 2].map(|i| w[i] - v[i] * dot)
        };
        let t_perp = proj(&t);
        let gt_perp = proj(&g.apply_vector(&t));
        let denom: f64 = t_perp.iter().map(|z| z.norm_sqr()).sum();
        let alpha: Complex = (0..3).map(|i| t_perp[i].conj() * gt_perp[i]).sum::<Complex>() / denom;
        let multiplier = alpha / fp.eigenvalue;
        if (multiplier - 1.0).norm() < 1e-6 {
            return Err(Error::DegenerateFixedPoint);
        }
    }
    Ok(2 - data.len() as i64)
}

/// Partition of a point set into orbits of a finite group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<PointSet>,
    pub group_order: usize,
    pub free: bool,
}

impl OrbitDecomposition {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(PointSet::len).collect()
    }
}

/// Orbits of `S` under the group generated by `gens`.
pub fn orbit_decomposition(gens: &[ProjectiveTransform], s: &PointSet, tol: f64) -> Result<OrbitDecomposition> {
    let gen_maps = gens.iter().map(|g| index_map(g, s, tol)).collect::<Result<Vec<_>>>()?;
    let group = close_group(gens)?;
    let mut free = true;
    for g in group.iter().skip(1) {
        let map = index_map(g, s, tol)?;
        if map.iter().enumerate().any(|(i, &j)| i == j) {
            free = false;
            break;
        }
    }
    let mut seen = vec![false; s.len()];
    let mut orbits = Vec::new();
    for start in 0..s.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut cursor = 0;
        while cursor < members.len() {
            let i = members[cursor];
            cursor += 1;
            for map in &gen_maps {
                let j = map[i];
                if !seen[j] {
                    seen[j] = true;
                    members.push(j);
                }
            }
        }
        orbits.push(PointSet::from_points(members.into_iter().map(|i| s.points()[i]), s.tolerance()));
    }
    Ok(OrbitDecomposition {
        orbits,
        group_order: group.len(),
        free,
    })
}

/// The nine common inflections of the Hesse pencil `x^3 + y^3 + z^3 + l xyz`.
pub fn hesse_base_points() -> Vec<ProjectivePoint> {
    let w = omega();
    let (o, l) = (cr(0.0), cr(1.0));
    let mut out = Vec::with_capacity(9);
    for r in [l, w, w * w] {
        out.push(ProjectivePoint::new([o, l, -r]).expect("nonzero"));
        out.push(ProjectivePoint::new([l, o, -r]).expect("nonzero"));
        out.push(ProjectivePoint::new([l, -r, o]).expect("nonzero"));
    }
    out
}

fn collinear(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> bool {
    let m = Matrix3::from_columns(&[Vector3::from(p.unit()), Vector3::from(q.unit()), Vector3::from(r.unit())]);
    m.determinant().norm() < 1e-6
}

fn general_position(pts: &[ProjectivePoint; 4]) -> bool {
    (0..4).all(|skip| {
        let rest: Vec<_> = (0..4).filter(|&i| i != skip).collect();
        !collinear(&pts[rest[0]], &pts[rest[1]], &pts[rest[2]])
    })
}

/// Best fit of `h` to `c (x^3 + y^3 + z^3 + l xyz)`: returns `(l, residual)`
/// with the residual relative to `|c|`.
pub fn hesse_fit(h: &CubicForm) -> (Complex, f64) {
    let c = (h.coeff([3, 0, 0]) + h.coeff([0, 3, 0]) + h.coeff([0, 0, 3])) / 3.0;
    if c.norm() <= 1e-14 * h.poly().norm_inf() {
        return (cr(0.0), f64::INFINITY);
    }
    let lambda = h.coeff([1, 1, 1]) / c;
    let residual = h
        .poly()
        .terms()
        .map(|(e, v)| {
            let target = match e {
                [3, 0, 0] | [0, 3, 0] | [0, 0, 3] => c,
                [1, 1, 1] => c * lambda,
                _ => cr(0.0),
            };
            (v - target).norm()
        })
        .fold(0.0, f64::max)
        / c.norm();
    (lambda, residual)
}

/// A transform `g` with `g.f` proportional to `x^3 + y^3 + z^3 + l xyz`,
/// found by matching four inflections to four Hesse base points.
pub fn hesse_normalize(f: &CubicForm, tol: &Tolerances) -> Result<(Complex, ProjectiveTransform)> {
    f.ensure_smooth(tol)?;
    let flexes = f.inflection_points(tol)?;
    let flex = flexes.points();
    let mut source = None;
    'search: for i in 0..9 {
        for j in (i + 1)..9 {
            for k in (j + 1)..9 {
                for l in (k + 1)..9 {
                    let quad = [flex[i], flex[j], flex[k], flex[l]];
                    if general_position(&quad) {
                        source = Some(quad);
                        break 'search;
                    }
                }
            }
        }
    }
    let source = source.ok_or_else(|| Error::Numerical("inflections have no four points in general position".into()))?;
    let src = source.map(|p| p.coords());

    let base = hesse_base_points();
    let targets = PointSet::from_points(base.iter().copied(), tol.matching);
    let (lambda, residual) = hesse_fit(f);
    if residual <= tol.hesse && flexes.matches(&targets) {
        return Ok((lambda, ProjectiveTransform::identity()));
    }
    let mut best = f64::INFINITY;
    for i in 0..9 {
        for j in 0..9 {
            for k in 0..9 {
                for l in 0..9 {
                    if [i, j, k, l].iter().enumerate().any(|(a, x)| [i, j, k, l][..a].contains(x)) {
                        continue;
                    }
                    let quad = [base[i], base[j], base[k], base[l]];
                    if !general_position(&quad) {
                        continue;
                    }
                    let Ok(g) = ProjectiveTransform::from_point_pairs(&src, &quad.map(|p| p.coords())) else {
                        continue;
                    };
                    let h = g.act_on_cubic(f);
                    let (lambda, residual) = hesse_fit(&h);
                    best = best.min(residual);
                    if residual > tol.hesse {
                        continue;
                    }
                    let moved = PointSet::from_points(flexes.iter().map(|p| g.act_on_point(p)), tol.matching);
                    if moved.matches(&targets) {
                        return Ok((lambda, g));
                    }
                }
            }
        }
    }
    Err(Error::NormalizationFailed(best))
}

/// Outcome of one check of the Fermat translation battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> SelfTestCheck {
    SelfTestCheck {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Largest chordal spread of `g P - P` over `samples` random points of the
/// Fermat cubic; zero when `g` acts as a translation of the group law.
pub fn translation_spread(g: &ProjectiveTransform, chart: &EllipticChart, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = chart.curve();
    let tol = *chart.tolerances();
    let mut first: Option<ProjectivePoint> = None;
    let mut spread: f64 = 0.0;
    for _ in 0..samples {
        let p = f.curve_point(crate::random::random_curve_point(&mut rng, f, &tol));
        let gp = f.curve_point(g.act_on_point(&p.point));
        let diff = chart.sub(&gp, &p)?.point;
        match first {
            None => first = Some(diff),
            Some(d0) => spread = spread.max(chordal_distance(&d0, &diff)),
        }
    }
    Ok(spread)
}

/// Checks every property of the Fermat translations used in the
/// obstruction argument; `seed` drives the sampled translation check.
pub fn fermat_self_test(tol: &Tolerances, seed: u64) -> Result<Vec<SelfTestCheck>> {
    let f = CubicForm::fermat();
    let (a, b) = fermat_translations();
    let mut out = Vec::new();
    for (name, g) in [("a", &a), ("b", &b)] {
        out.push(check(&format!("{name} has order 3"), g.pow(3).is_identity(PGL_EQ_TOL) && !g.is_identity(PGL_EQ_TOL), ""));
        out.push(check(&format!("{name} preserves the Fermat cubic"), g.act_on_cubic(&f).proportional_to(&f, tol.matching), ""));
        let fixed = fixed_points_on_curve(g, &f, tol)?;
        out.push(check(&format!("{name} has no fixed point on the curve"), fixed.is_empty(), format!("{} fixed points", fixed.len())));
        let trace = lefschetz_trace(g, &f, tol)?;
        out.push(check(&format!("{name} has Lefschetz trace 2"), trace == 2, format!("trace {trace}")));
    }
    let comm = a.compose(&b).compose(&a.inverse()).compose(&b.inverse());
    let m = comm.matrix();
    let s = m[(0, 0)];
    let scalar = m.iter().enumerate().all(|(idx, z)| {
        let (r, c) = (idx % 3, idx / 3);
        (if r == c { *z - s } else { *z }).norm() <= PGL_EQ_TOL
    });
    out.push(check("commutator of a and b is scalar", scalar, format!("{s}")));
    let group = close_group(&[a, b])?;
    out.push(check("a and b generate nine elements", group.len() == 9, format!("{} elements", group.len())));

    let o = ProjectivePoint::from_real(-1.0, 1.0, 0.0)?;
    let chart = EllipticChart::new(&f, &o, tol)?;
    for (name, g, seed) in [("a", &a, seed), ("b", &b, seed.wrapping_add(1))] {
        let spread = translation_spread(g, &chart, 50, seed)?;
        out.push(check(&format!("{name} acts as a translation"), spread <= 1e-6, format!("spread {spread:.2e}")));
    }
    let flexes = f.inflection_points(tol)?;
    let orbits = orbit_decomposition(&[a, b], &flexes, tol.matching)?;
    out.push(check(
        "translations act freely and transitively on the inflections",
        orbits.free && orbits.orbit_sizes() == vec![9],
        format!("orbit sizes {:?}", orbits.orbit_sizes()),
    ));
    Ok(out)
}
