use cubic_sections::elliptic::jordan_totient_2;
use cubic_sections::io;
use cubic_sections::monodromy::{track, transform_path, Section};
use cubic_sections::random::{random_smooth_cubic, random_transform_matrix};
use cubic_sections::symmetry::{fermat_translations, hesse_fit, hesse_normalize, orbit_decomposition};
use cubic_sections::{CubicForm, EllipticChart, PointSet, ProjectiveTransform, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn moved(g: &ProjectiveTransform, s: &PointSet) -> PointSet {
    PointSet::from_points(s.iter().map(|p| g.act_on_point(p)), s.tolerance())
}

#[test]
fn canonical_sections_are_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..3 {
        let f = random_smooth_cubic(&mut rng, &tol());
        let g = ProjectiveTransform::new(random_transform_matrix(&mut rng)).unwrap();
        let gf = g.act_on_cubic(&f);
        let flexes = f.inflection_points(&tol()).unwrap();
        assert!(gf.inflection_points(&tol()).unwrap().matches(&moved(&g, &flexes)));

        let sextatic = EllipticChart::with_default_identity(&f, &tol()).unwrap().points_of_type(2).unwrap();
        let image = EllipticChart::with_default_identity(&gf, &tol()).unwrap().points_of_type(2).unwrap();
        assert!(image.matches(&moved(&g, &sextatic)));
    }
}

#[test]
fn type_counts_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..3 {
        let f = random_smooth_cubic(&mut rng, &tol());
        let chart = EllipticChart::with_default_identity(&f, &tol()).unwrap();
        for k in 1..=3u32 {
            let n = chart.points_of_type(k).unwrap().len() as u64;
            assert_eq!(n, 9 * jordan_totient_2(k as u64).unwrap());
        }
    }
}

#[test]
fn translations_act_freely_on_conjugate_curves() {
    // conjugating the translations by g gives the translations of g.Fermat
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let g = ProjectiveTransform::new(random_transform_matrix(&mut rng)).unwrap();
    let f = g.act_on_cubic(&CubicForm::fermat());
    let (a, b) = fermat_translations();
    let gens = [a, b].map(|t| g.compose(&t).compose(&g.inverse()));
    let sextatic = EllipticChart::with_default_identity(&f, &tol()).unwrap().points_of_type(2).unwrap();
    let orbits = orbit_decomposition(&gens, &sextatic, tol().matching).unwrap();
    assert!(orbits.free);
    assert_eq!(orbits.orbit_sizes(), vec![9, 9, 9]);
}

#[test]
fn computed_points_survive_serialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let f = random_smooth_cubic(&mut rng, &tol());
    let parsed = io::parse_cubic(&io::cubic_to_json(&f)).unwrap();
    let flexes = parsed.inflection_points(&tol()).unwrap();
    let back = io::parse_points(&io::points_to_json(flexes.points())).unwrap();
    assert_eq!(back.as_slice(), flexes.points());
}

#[test]
fn path_file_tracks_like_the_original() {
    let (a, _) = fermat_translations();
    let path = transform_path(&a, &CubicForm::fermat(), 9, 3, &tol()).unwrap();
    let reparsed = io::parse_path(&io::path_to_json(&path), tol().smoothness_margin).unwrap();
    let direct = track(&path, Section::Inflections, &tol()).unwrap();
    let via_file = track(&reparsed, Section::Inflections, &tol()).unwrap();
    assert_eq!(direct.permutation, via_file.permutation);
    assert_eq!(direct.permutation.unwrap().cycle_type(), vec![3, 3, 3]);
}

#[test]
fn sextatic_points_follow_the_translation_loop() {
    let (_, b) = fermat_translations();
    let path = transform_path(&b, &CubicForm::fermat(), 9, 2, &tol()).unwrap();
    let report = track(&path, Section::Type3k(2), &tol()).unwrap();
    let sigma = report.permutation.unwrap();
    assert_eq!(sigma.len(), 27);
    assert!(sigma.fixed_points().is_empty());
    assert_eq!(sigma.cycle_type(), vec![3; 9]);
}

#[test]
fn hesse_form_of_a_moved_fermat_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let h = ProjectiveTransform::new(random_transform_matrix(&mut rng)).unwrap();
    let f = h.act_on_cubic(&CubicForm::fermat());
    let (lambda, g) = hesse_normalize(&f, &tol()).unwrap();
    assert!(hesse_fit(&g.act_on_cubic(&f)).1 <= tol().hesse);
    // j = 0 pins lambda to 0 or a root of lambda^3 = 216
    let j = EllipticChart::with_default_identity(&CubicForm::hesse(lambda), &tol()).unwrap().j_invariant();
    assert!(j.norm() < 1e-6, "j = {j}");
}
