//! Python bindings: cubics, the chord-tangent group, canonical point sets and
//! monodromy tracking. Points cross the boundary as `(x, y, z)` tuples of
//! complex numbers, matrices as nested 3x3 lists.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cubic_sections::elliptic::{constructible_sizes, jordan_totient_2};
use cubic_sections::io::{self, CubicRecord};
use cubic_sections::monodromy::{self as mono, ParameterPath, Section};
use cubic_sections::symmetry;
use cubic_sections::{Complex, CubicForm, CurvePoint, EllipticChart, Error, PointSet, ProjectivePoint, ProjectiveTransform};

create_exception!(pycubic, SingularCurveError, PyValueError, "The cubic is singular or too close to the discriminant.");
create_exception!(pycubic, NumericalError, PyRuntimeError, "A numerical certificate failed.");
create_exception!(pycubic, TrackingError, PyRuntimeError, "Continuation along a path was ambiguous or hit the discriminant.");

type Coords = [Complex; 3];
type Rows = [[Complex; 3]; 3];

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e.exit_code() {
        2 => PyValueError::new_err(msg),
        3 => SingularCurveError::new_err(msg),
        5 => TrackingError::new_err(msg),
        _ => NumericalError::new_err(msg),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for cubic_sections::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn point(v: Coords) -> PyResult<ProjectivePoint> {
    ProjectivePoint::new(v).py()
}

fn coords(set: &PointSet) -> Vec<Coords> {
    set.iter().map(|p| p.coords()).collect()
}

fn rows(g: &ProjectiveTransform) -> Rows {
    let m = g.matrix();
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

/// Numerical tolerances; every field can be read and set.
#[pyclass(name = "Tolerances", get_all, set_all, from_py_object)]
#[derive(Clone)]
struct PyTolerances {
    root: f64,
    cluster: f64,
    matching: f64,
    on_curve: f64,
    hesse: f64,
    smoothness_margin: f64,
    max_torsion_order: u32,
}

impl PyTolerances {
    fn to_core(&self) -> PyResult<cubic_sections::Tolerances> {
        let tol = cubic_sections::Tolerances {
            root: self.root,
            cluster: self.cluster,
            matching: self.matching,
            on_curve: self.on_curve,
            hesse: self.hesse,
            smoothness_margin: self.smoothness_margin,
            max_torsion_order: self.max_torsion_order,
        };
        tol.validate().py()?;
        Ok(tol)
    }
}

#[pymethods]
impl PyTolerances {
    #[new]
    fn new() -> Self {
        let d = cubic_sections::Tolerances::default();
        Self {
            root: d.root,
            cluster: d.cluster,
            matching: d.matching,
            on_curve: d.on_curve,
            hesse: d.hesse,
            smoothness_margin: d.smoothness_margin,
            max_torsion_order: d.max_torsion_order,
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Tolerances(root={}, cluster={}, matching={}, on_curve={}, hesse={}, smoothness_margin={}, max_torsion_order={})",
            self.root, self.cluster, self.matching, self.on_curve, self.hesse, self.smoothness_margin, self.max_torsion_order
        )
    }
}

fn tolerances(tol: Option<&PyTolerances>) -> PyResult<cubic_sections::Tolerances> {
    match tol {
        Some(t) => t.to_core(),
        None => Ok(cubic_sections::Tolerances::default()),
    }
}

/// A homogeneous cubic in x, y, z. Coefficients are keyed by exponent
/// strings such as `"300"` for x^3 or `"111"` for xyz.
#[pyclass(name = "Cubic", frozen, from_py_object)]
#[derive(Clone)]
struct PyCubic {
    inner: CubicForm,
}

#[pymethods]
impl PyCubic {
    #[new]
    #[pyo3(signature = (coeffs, label=None))]
    fn new(coeffs: BTreeMap<String, Complex>, label: Option<String>) -> PyResult<Self> {
        let record = CubicRecord {
            coeffs: coeffs.into_iter().map(|(k, z)| (k, [z.re, z.im])).collect(),
            label,
        };
        Ok(Self { inner: record.to_cubic().py()? })
    }

    #[staticmethod]
    fn fermat() -> Self {
        Self { inner: CubicForm::fermat() }
    }

    /// `x^3 + y^3 + z^3 + lam * xyz`.
    #[staticmethod]
    fn hesse(lam: Complex) -> Self {
        Self { inner: CubicForm::hesse(lam) }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_cubic(text).py()? })
    }

    fn to_json(&self) -> String {
        io::cubic_to_json(&self.inner)
    }

    fn coeffs(&self) -> BTreeMap<String, Complex> {
        CubicRecord::from_cubic(&self.inner)
            .coeffs
            .into_iter()
            .map(|(k, [re, im])| (k, Complex::new(re, im)))
            .collect()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.inner.label().map(str::to_string)
    }

    fn evaluate(&self, p: Coords) -> PyResult<Complex> {
        Ok(self.inner.evaluate(&point(p)?))
    }

    /// Relative residual `|f(P)| / |f|` at the unit representative of P.
    fn residual(&self, p: Coords) -> PyResult<f64> {
        Ok(self.inner.residual(&point(p)?))
    }

    #[pyo3(signature = (tol=None))]
    fn is_smooth(&self, tol: Option<&PyTolerances>) -> PyResult<bool> {
        Ok(self.inner.is_smooth(&tolerances(tol)?).smooth)
    }

    /// Distance-like margin to the discriminant; small means nearly singular.
    #[pyo3(signature = (tol=None))]
    fn smoothness_margin(&self, tol: Option<&PyTolerances>) -> PyResult<f64> {
        Ok(self.inner.is_smooth(&tolerances(tol)?).margin)
    }

    fn hessian(&self) -> Self {
        Self { inner: self.inner.hessian() }
    }

    /// The image `f . g^-1` of the curve under the matrix `g`.
    fn transformed(&self, g: Rows) -> PyResult<Self> {
        let g = ProjectiveTransform::from_rows(g).py()?;
        Ok(Self { inner: g.act_on_cubic(&self.inner) })
    }

    #[pyo3(signature = (tol=None))]
    fn inflection_points(&self, tol: Option<&PyTolerances>) -> PyResult<Vec<Coords>> {
        Ok(coords(&self.inner.inflection_points(&tolerances(tol)?).py()?))
    }

    /// Points where a curve of degree k meets this one with multiplicity 3k.
    #[pyo3(signature = (k, tol=None))]
    fn points_of_type(&self, k: u32, tol: Option<&PyTolerances>) -> PyResult<Vec<Coords>> {
        let chart = EllipticChart::with_default_identity(&self.inner, &tolerances(tol)?).py()?;
        Ok(coords(&chart.points_of_type(k).py()?))
    }

    #[pyo3(signature = (m, tol=None))]
    fn torsion_points(&self, m: u32, tol: Option<&PyTolerances>) -> PyResult<Vec<Coords>> {
        let chart = EllipticChart::with_default_identity(&self.inner, &tolerances(tol)?).py()?;
        Ok(coords(&chart.torsion_points(m).py()?.points))
    }

    #[pyo3(signature = (tol=None))]
    fn j_invariant(&self, tol: Option<&PyTolerances>) -> PyResult<Complex> {
        Ok(EllipticChart::with_default_identity(&self.inner, &tolerances(tol)?).py()?.j_invariant())
    }

    /// Returns `(lam, g)` with `g . f` proportional to the Hesse cubic of `lam`.
    #[pyo3(signature = (tol=None))]
    fn hesse_normalize(&self, tol: Option<&PyTolerances>) -> PyResult<(Complex, Rows)> {
        let (lam, g) = symmetry::hesse_normalize(&self.inner, &tolerances(tol)?).py()?;
        Ok((lam, rows(&g)))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.poly() == other.inner.poly()
    }

    fn __repr__(&self) -> String {
        let terms: Vec<String> = self
            .coeffs()
            .into_iter()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(k, z)| format!("'{k}': {z}"))
            .collect();
        format!("Cubic({{{}}})", terms.join(", "))
    }
}

/// The chord-tangent group on a smooth cubic with a chosen inflection as zero.
#[pyclass(name = "Chart", frozen)]
struct PyChart {
    inner: EllipticChart,
}

impl PyChart {
    fn on_curve(&self, p: Coords) -> PyResult<CurvePoint> {
        Ok(self.inner.curve().curve_point(point(p)?))
    }
}

#[pymethods]
impl PyChart {
    /// Without `identity` the first inflection point found is used.
    #[new]
    #[pyo3(signature = (cubic, identity=None, tol=None))]
    fn new(cubic: &PyCubic, identity: Option<Coords>, tol: Option<&PyTolerances>) -> PyResult<Self> {
        let tol = tolerances(tol)?;
        let inner = match identity {
            Some(o) => EllipticChart::new(&cubic.inner, &point(o)?, &tol),
            None => EllipticChart::with_default_identity(&cubic.inner, &tol),
        }
        .py()?;
        Ok(Self { inner })
    }

    #[getter]
    fn identity(&self) -> Coords {
        self.inner.identity().point.coords()
    }

    /// `(A, B)` of the short Weierstrass model `y^2 = x^3 + A x + B`.
    fn weierstrass(&self) -> (Complex, Complex) {
        self.inner.weierstrass_coefficients()
    }

    fn j_invariant(&self) -> Complex {
        self.inner.j_invariant()
    }

    fn add(&self, p: Coords, q: Coords) -> PyResult<Coords> {
        Ok(self.inner.add(&self.on_curve(p)?, &self.on_curve(q)?).py()?.point.coords())
    }

    fn negate(&self, p: Coords) -> PyResult<Coords> {
        Ok(self.inner.negate(&self.on_curve(p)?).py()?.point.coords())
    }

    fn scalar_mul(&self, m: i64, p: Coords) -> PyResult<Coords> {
        Ok(self.inner.scalar_mul(m, &self.on_curve(p)?).py()?.point.coords())
    }

    fn is_identity(&self, p: Coords) -> PyResult<bool> {
        Ok(self.inner.is_identity(&self.on_curve(p)?))
    }

    fn torsion_points(&self, m: u32) -> PyResult<Vec<Coords>> {
        Ok(coords(&self.inner.torsion_points(m).py()?.points))
    }

    fn points_of_type(&self, k: u32) -> PyResult<Vec<Coords>> {
        Ok(coords(&self.inner.points_of_type(k).py()?))
    }
}

/// Outcome of transporting a canonical point set along a path.
#[pyclass(name = "Tracking", frozen, get_all)]
struct PyTracking {
    /// For loops, point i of the start set ends at `images[i]`.
    images: Option<Vec<usize>>,
    /// Cycle notation, `()` for the identity.
    cycles: Option<String>,
    cycle_type: Option<Vec<usize>>,
    final_points: Vec<Coords>,
    steps_taken: usize,
    min_separation: f64,
    min_smoothness_margin: f64,
}

#[pymethods]
impl PyTracking {
    fn __repr__(&self) -> String {
        format!(
            "Tracking(cycles={:?}, steps_taken={}, min_separation={:.3e})",
            self.cycles, self.steps_taken, self.min_separation
        )
    }
}

fn run_track(path: &ParameterPath, section: &str, tol: &cubic_sections::Tolerances) -> PyResult<PyTracking> {
    let section: Section = section.parse().py()?;
    let report = mono::track(path, section, tol).py()?;
    let perm = report.permutation.as_ref();
    Ok(PyTracking {
        images: perm.map(|p| p.images().to_vec()),
        cycles: perm.map(|p| p.to_string()),
        cycle_type: perm.map(|p| p.cycle_type()),
        final_points: coords(&report.final_set),
        steps_taken: report.steps_taken,
        min_separation: report.min_separation,
        min_smoothness_margin: report.min_smoothness_margin,
    })
}

/// Tracks `section` (`"inflections"` or `"type3k(k)"`) along a path file's JSON.
#[pyfunction]
#[pyo3(signature = (path_json, section="inflections", tol=None))]
fn track_path(path_json: &str, section: &str, tol: Option<&PyTolerances>) -> PyResult<PyTracking> {
    let tol = tolerances(tol)?;
    let path = io::parse_path(path_json, tol.smoothness_margin).py()?;
    run_track(&path, section, &tol)
}

/// Tracks along the loop `t -> g(t) . f` with `g(0) = I` and `g(1) = g`.
#[pyfunction]
#[pyo3(signature = (g, cubic, section="inflections", samples=9, steps=3, tol=None))]
fn track_transform_loop(
    g: Rows,
    cubic: &PyCubic,
    section: &str,
    samples: usize,
    steps: usize,
    tol: Option<&PyTolerances>,
) -> PyResult<PyTracking> {
    let tol = tolerances(tol)?;
    let g = ProjectiveTransform::from_rows(g).py()?;
    let path = mono::transform_path(&g, &cubic.inner, samples, steps, &tol).py()?;
    run_track(&path, section, &tol)
}

/// Tracks around a polygon of Hesse cubics centered at `center`.
#[pyfunction]
#[pyo3(signature = (center, radius, vertices=16, steps=2, section="inflections", tol=None))]
fn track_hesse_loop(
    center: Complex,
    radius: f64,
    vertices: usize,
    steps: usize,
    section: &str,
    tol: Option<&PyTolerances>,
) -> PyResult<PyTracking> {
    let tol = tolerances(tol)?;
    let path = mono::hesse_loop(center, radius, vertices, steps, &tol).py()?;
    run_track(&path, section, &tol)
}

/// Permutation induced by an automorphism `g` on a point list.
#[pyfunction]
#[pyo3(signature = (g, points, tol=None))]
fn permutation_of(g: Rows, points: Vec<Coords>, tol: Option<&PyTolerances>) -> PyResult<Vec<usize>> {
    let tol = tolerances(tol)?;
    let g = ProjectiveTransform::from_rows(g).py()?;
    let pts = points.into_iter().map(point).collect::<PyResult<Vec<_>>>()?;
    let set = PointSet::from_points(pts, tol.matching);
    Ok(mono::permutation_of_automorphism(&g, &set, tol.matching).py()?.images().to_vec())
}

/// The generators `(a, b)` of the translations of the Fermat cubic by 3-torsion.
#[pyfunction]
fn fermat_translations() -> (Rows, Rows) {
    let (a, b) = symmetry::fermat_translations();
    (rows(&a), rows(&b))
}

/// Orbit data for the translation group acting on Fermat points of type 3k.
#[pyfunction]
#[pyo3(signature = (k, tol=None))]
fn free_action(k: u32, tol: Option<&PyTolerances>) -> PyResult<(bool, Vec<usize>, u64)> {
    let r = mono::verify_free_k_action(k, &tolerances(tol)?).py()?;
    Ok((r.passed(), r.orbit_sizes, r.expected_orbits))
}

/// `(name, passed, detail)` for each check on the Fermat translations.
#[pyfunction]
#[pyo3(signature = (seed=0, tol=None))]
fn self_test(seed: u64, tol: Option<&PyTolerances>) -> PyResult<Vec<(String, bool, String)>> {
    let checks = symmetry::fermat_self_test(&tolerances(tol)?, seed).py()?;
    Ok(checks.into_iter().map(|c| (c.name, c.passed, c.detail)).collect())
}

#[pyfunction]
fn verdict(n: i64) -> PyResult<String> {
    Ok(mono::section_verdict(n).py()?.to_string())
}

#[pyfunction]
fn sizes(bound: u64) -> Vec<u64> {
    constructible_sizes(bound)
}

#[pyfunction]
fn j2(k: u64) -> PyResult<u64> {
    jordan_totient_2(k).py()
}

#[pymodule]
pub fn pycubic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTolerances>()?;
    m.add_class::<PyCubic>()?;
    m.add_class::<PyChart>()?;
    m.add_class::<PyTracking>()?;
    m.add_function(wrap_pyfunction!(track_path, m)?)?;
    m.add_function(wrap_pyfunction!(track_transform_loop, m)?)?;
    m.add_function(wrap_pyfunction!(track_hesse_loop, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_of, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_translations, m)?)?;
    m.add_function(wrap_pyfunction!(free_action, m)?)?;
    m.add_function(wrap_pyfunction!(self_test, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(sizes, m)?)?;
    m.add_function(wrap_pyfunction!(j2, m)?)?;
    m.add("SingularCurveError", m.py().get_type::<SingularCurveError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add("TrackingError", m.py().get_type::<TrackingError>())?;
    Ok(())
}
