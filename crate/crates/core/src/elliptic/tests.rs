use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::numeric::{chordal_distance, solve_univariate, UniPoly};
use crate::pointset::PointSet;
use crate::random::{random_curve_point, random_smooth_cubic};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn fermat_chart() -> EllipticChart {
    let o = ProjectivePoint::from_real(-1.0, 1.0, 0.0).unwrap();
    EllipticChart::new(&CubicForm::fermat(), &o, &tol()).unwrap()
}

fn close(a: &CurvePoint, b: &CurvePoint, eps: f64) -> bool {
    chordal_distance(&a.point, &b.point) < eps
}

/// Affine short-Weierstrass addition, independent of the chord-tangent code
/// on the original curve. `None` is the point at infinity.
fn weierstrass_add(
    a: Complex,
    p: Option<(Complex, Complex)>,
    q: Option<(Complex, Complex)>,
) -> Option<(Complex, Complex)> {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.or(q);
    };
    let scale = x1.norm().max(x2.norm()).max(1.0);
    let slope = if (x1 - x2).norm() > 1e-9 * scale {
        (y2 - y1) / (x2 - x1)
    } else if (y1 + y2).norm() <= 1e-9 * scale {
        return None;
    } else {
        (x1 * x1 * 3.0 + a) / (y1 * 2.0)
    };
    let x3 = slope * slope - x1 - x2;
    Some((x3, slope * (x1 - x3) - y1))
}

#[test]
fn fermat_chart_has_j_zero() {
    let chart = fermat_chart();
    assert!(chart.j_invariant().norm() < 1e-8, "j = {}", chart.j_invariant());
    let (a, _) = chart.weierstrass_coefficients();
    assert!(a.norm() < 1e-10);
}

#[test]
fn identity_goes_to_infinity() {
    let chart = fermat_chart();
    let img = chart.to_weierstrass().act_on_point(&chart.identity().point);
    assert!(chordal_distance(&img, &ProjectivePoint::from_real(0.0, 1.0, 0.0).unwrap()) < 1e-12);
}

#[test]
fn chart_round_trip_and_pushforward() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let t = tol();
    let f = random_smooth_cubic(&mut rng, &t);
    let chart = EllipticChart::with_default_identity(&f, &t).unwrap();
    let pushed = chart.to_weierstrass().act_on_cubic(&f);
    assert!(pushed.proportional_to(&chart.weierstrass_form(), 1e-8));
    for _ in 0..50 {
        let p = random_curve_point(&mut rng, &f, &t);
        let there = chart.to_weierstrass().act_on_point(&p);
        assert!(chart.weierstrass_form().residual(&there) < 1e-8);
        let back = chart.from_weierstrass().act_on_point(&there);
        assert!(chordal_distance(&p, &back) < 1e-10);
    }
    assert!(chart
        .from_weierstrass()
        .compose(chart.to_weierstrass())
        .is_identity(crate::transform::PGL_EQ_TOL));
}

#[test]
fn identity_must_be_a_flex() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = CubicForm::fermat();
    let p = random_curve_point(&mut rng, &f, &tol());
    assert!(matches!(EllipticChart::new(&f, &p, &tol()), Err(Error::NotInflection)));
}

#[test]
fn identity_and_inverse_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let t = tol();
    let f = random_smooth_cubic(&mut rng, &t);
    let chart = EllipticChart::with_default_identity(&f, &t).unwrap();
    let o = *chart.identity();
    assert!(close(&chart.negate(&o).unwrap(), &o, 1e-9));
    for m in [-3, 0, 1, 2, 7] {
        assert!(chart.is_identity(&chart.scalar_mul(m, &o).unwrap()));
    }
    for _ in 0..20 {
        let p = f.curve_point(random_curve_point(&mut rng, &f, &t));
        assert!(close(&chart.add(&p, &o).unwrap(), &p, 1e-9));
        assert!(close(&chart.add(&o, &p).unwrap(), &p, 1e-9));
        let neg = chart.negate(&p).unwrap();
        assert!(chart.is_identity(&chart.add(&p, &neg).unwrap()));
        assert!(chart.is_identity(&chart.scalar_mul(0, &p).unwrap()));
        let five = chart.scalar_mul(5, &p).unwrap();
        let manual = (0..5).try_fold(o, |acc, _| chart.add(&acc, &p)).unwrap();
        assert!(close(&five, &manual, 1e-7));
    }
    for flex in f.inflection_points(&t).unwrap().iter() {
        let q = chart.scalar_mul(3, &f.curve_point(*flex)).unwrap();
        assert!(chart.is_identity(&q));
    }
}

#[test]
fn group_law_matches_weierstrass_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let t = tol();
    let f = random_smooth_cubic(&mut rng, &t);
    let chart = EllipticChart::with_default_identity(&f, &t).unwrap();
    let (a, _) = chart.weierstrass_coefficients();
    for _ in 0..30 {
        let p = f.curve_point(random_curve_point(&mut rng, &f, &t));
        let q = f.curve_point(random_curve_point(&mut rng, &f, &t));
        let r = f.curve_point(random_curve_point(&mut rng, &f, &t));
        let lhs = chart.add(&chart.add(&p, &q).unwrap(), &r).unwrap();
        let rhs = chart.add(&p, &chart.add(&q, &r).unwrap()).unwrap();
        assert!(close(&lhs, &rhs, 1e-6));
        assert!(close(&chart.add(&p, &q).unwrap(), &chart.add(&q, &p).unwrap(), 1e-9));

        let w = |x: &CurvePoint| chart.weierstrass_coordinates(x);
        let oracle = weierstrass_add(a, weierstrass_add(a, w(&p), w(&q)), w(&r));
        let (x, y) = oracle.unwrap();
        let mapped = chart.from_weierstrass().act_on_point(&ProjectivePoint::new([x, y, crate::numeric::cr(1.0)]).unwrap());
        assert!(chordal_distance(&mapped, &lhs.point) < 1e-6);
    }
}

#[test]
fn small_torsion_orders() {
    let chart = fermat_chart();
    let one = chart.torsion_points(1).unwrap();
    assert_eq!(one.points.len(), 1);
    assert!(chordal_distance(&one.points.points()[0], &chart.identity().point) < 1e-9);

    // 2-torsion: identity plus the roots of x^3 + A x + B
    let two = chart.torsion_points(2).unwrap();
    let (a, b) = chart.weierstrass_coefficients();
    let roots = solve_univariate(&UniPoly::new(vec![b, a, crate::numeric::cr(0.0), crate::numeric::cr(1.0)]), &tol()).unwrap();
    let mut oracle = vec![chart.identity().point];
    for r in roots {
        oracle.push(chart.from_weierstrass().act_on_point(&ProjectivePoint::new([r.value, crate::numeric::cr(0.0), crate::numeric::cr(1.0)]).unwrap()));
    }
    assert!(two.points.matches(&PointSet::from_points(oracle, 1e-6)));

    let three = chart.torsion_points(3).unwrap();
    assert!(three.points.matches(&CubicForm::fermat().inflection_points(&tol()).unwrap()));
}

#[test]
fn torsion_order_errors() {
    let chart = fermat_chart();
    assert!(matches!(chart.torsion_points(0), Err(Error::InvalidArgument(_))));
    assert!(matches!(chart.torsion_points(13), Err(Error::OrderOutOfRange(13))));
}

#[test]
fn torsion_counts_on_random_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let t = tol();
    for _ in 0..2 {
        let f = random_smooth_cubic(&mut rng, &t);
        let chart = EllipticChart::with_default_identity(&f, &t).unwrap();
        for m in 1..=6 {
            assert_eq!(chart.torsion_points(m).unwrap().points.len(), (m * m) as usize);
        }
    }
}

#[test]
fn type_counts_on_fermat() {
    let chart = fermat_chart();
    assert_eq!(chart.points_of_type(1).unwrap().len(), 9);
    assert_eq!(chart.points_of_type(2).unwrap().len(), 27);
    assert_eq!(chart.points_of_type(3).unwrap().len(), 72);
}

#[test]
fn type_sets_do_not_depend_on_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let t = tol();
    let f = random_smooth_cubic(&mut rng, &t);
    let flexes = f.inflection_points(&t).unwrap();
    let reference: Vec<PointSet> = {
        let chart = EllipticChart::new(&f, &flexes.points()[0], &t).unwrap();
        (1..=2).map(|k| chart.points_of_type(k).unwrap()).collect()
    };
    assert!(reference[0].matches(&flexes));
    for o in flexes.iter().skip(1) {
        let chart = EllipticChart::new(&f, o, &t).unwrap();
        for (k, set) in (1..=2).zip(&reference) {
            assert!(chart.points_of_type(k).unwrap().matches(set));
        }
    }
}

/// x-only Montgomery ladder on the Kummer line of `y^2 = x^3 + A x + B`;
/// returns `(X : Z)` of `[m]P` for `x(P) = x`.
fn kummer_multiple(a: Complex, b: Complex, x: Complex, m: u32) -> (Complex, Complex) {
    let one = crate::numeric::cr(1.0);
    let double = |(xx, zz): (Complex, Complex)| {
        let t = xx * xx - a * zz * zz;
        (t * t - b * xx * zz.powu(3) * 8.0, zz * (xx.powu(3) + a * xx * zz * zz + b * zz.powu(3)) * 4.0)
    };
    let diff_add = |(x1, z1): (Complex, Complex), (x2, z2): (Complex, Complex), (xd, zd): (Complex, Complex)| {
        let t = x1 * x2 - a * z1 * z2;
        let num = t * t - b * z1 * z2 * (x1 * z2 + x2 * z1) * 4.0;
        let den = (x1 * z2 - x2 * z1).powu(2);
        (zd * num, xd * den)
    };
    let base = (x, one);
    let (mut r0, mut r1) = (base, double(base));
    for bit in (0..(31 - m.leading_zeros())).rev() {
        if (m >> bit) & 1 == 1 {
            r0 = diff_add(r0, r1, base);
            r1 = double(r1);
        } else {
            r1 = diff_add(r0, r1, base);
            r0 = double(r0);
        }
    }
    r0
}

#[test]
fn torsion_agrees_with_lattice_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let t = tol();
    let f = random_smooth_cubic(&mut rng, &t);
    let chart = EllipticChart::with_default_identity(&f, &t).unwrap();
    let (a, b) = chart.weierstrass_coefficients();
    for m in [3u32, 5] {
        // g(x) = Z/X of [m](x) vanishes to second order at torsion abscissae
        let g = |x: Complex| {
            let (xx, zz) = kummer_multiple(a, b, x, m);
            zz / xx
        };
        let radius = 3.0 * (1.0 + a.norm().sqrt() + b.norm().cbrt());
        let mut found: Vec<Complex> = Vec::new();
        let n = 30;
        for i in 0..n {
            for j in 0..n {
                let mut x = Complex::new(
                    -radius + 2.0 * radius * (i as f64 + 0.5) / n as f64,
                    -radius + 2.0 * radius * (j as f64 + 0.5) / n as f64,
                );
                for _ in 0..100 {
                    let h = 1e-6 * x.norm().max(1.0);
                    let d = (g(x + h) - g(x - h)) / (2.0 * h);
                    let step = g(x) / d * 2.0;
                    if !step.re.is_finite() || !step.im.is_finite() {
                        break;
                    }
                    x -= step;
                    if step.norm() < 1e-13 * x.norm().max(1.0) {
                        break;
                    }
                }
                let (xx, zz) = kummer_multiple(a, b, x, m);
                let converged = (zz / xx).norm() < 1e-12 && x.norm() < 10.0 * radius;
                if converged && !found.iter().any(|y| (y - x).norm() < 1e-6 * x.norm().max(1.0)) {
                    found.push(x);
                }
            }
        }
        let torsion = chart.torsion_points(m).unwrap();
        let mut abscissae: Vec<Complex> = Vec::new();
        for p in torsion.points.iter() {
            if let Some((x, _)) = chart.weierstrass_coordinates(&f.curve_point(*p)) {
                if !abscissae.iter().any(|y| (y - x).norm() < 1e-6 * x.norm().max(1.0)) {
                    abscissae.push(x);
                }
            }
        }
        assert_eq!(abscissae.len(), ((m * m - 1) / 2) as usize);
        assert_eq!(found.len(), abscissae.len(), "m = {m}");
        for x in &abscissae {
            assert!(found.iter().any(|y| (y - x).norm() < 1e-6 * x.norm().max(1.0)), "m = {m}: missing {x}");
        }
    }
}
