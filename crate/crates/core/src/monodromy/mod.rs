//! Transport of canonical point configurations along paths of smooth cubics,
//! induced permutations, and the section-size classifier.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::curve::CubicForm;
use crate::elliptic::{jordan_totient_2, totient_subset_witness, EllipticChart};
use crate::error::{Error, Result};
use crate::numeric::{chordal_distance, cr, Complex, ProjectivePoint};
use crate::pointset::PointSet;
use crate::symmetry::{eigenspace, eigenvalues, fermat_translation_group, fermat_translations, index_map};
use crate::transform::ProjectiveTransform;

/// Smallest step, as a fraction of a segment, before tracking gives up.
pub const MIN_STEP: f64 = 1e-6;
/// A match is ambiguous when the second-nearest candidate is closer than this
/// multiple of the nearest.
pub const AMBIGUITY_RATIO: f64 = 10.0;

/// A bijection of `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("images do not form a bijection".into()));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutations of different sizes");
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.images[i] == i).collect()
    }

    /// Cycles of length at least two, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted lengths of all cycles, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.extend(std::iter::repeat(1).take(self.fixed_points().len()));
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

/// Cycle notation on 0-based indices; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let parts: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A piecewise linear path in coefficient space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPath {
    pub segments: Vec<(CubicForm, CubicForm)>,
    /// Nominal number of steps per segment.
    pub steps: usize,
    pub smoothness_margin: f64,
}

impl ParameterPath {
    pub fn new(segments: Vec<(CubicForm, CubicForm)>, steps: usize, smoothness_margin: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("path has no segments".into()));
        }
        if steps == 0 {
            return Err(Error::InvalidArgument("path needs at least one step per segment".into()));
        }
        for w in segments.windows(2) {
            if !w[0].1.proportional_to(&w[1].0, 1e-9) {
                return Err(Error::InvalidArgument("consecutive segments do not meet".into()));
            }
        }
        Ok(Self {
            segments,
            steps,
            smoothness_margin,
        })
    }

    /// Path through a sampled sequence of cubics.
    pub fn from_samples(samples: &[CubicForm], steps: usize, smoothness_margin: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument("a sampled path needs two cubics".into()));
        }
        let segments = samples.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Self::new(segments, steps, smoothness_margin)
    }

    pub fn constant(f: &CubicForm, steps: usize, smoothness_margin: f64) -> Result<Self> {
        Self::new(vec![(f.clone(), f.clone())], steps, smoothness_margin)
    }

    pub fn start(&self) -> &CubicForm {
        &self.segments[0].0
    }

    pub fn end(&self) -> &CubicForm {
        &self.segments[self.segments.len() - 1].1
    }

    /// Whether the path returns to its starting curve.
    pub fn is_loop(&self) -> bool {
        self.end().proportional_to(self.start(), 1e-9)
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            segments: self.segments.iter().rev().map(|(a, b)| (b.clone(), a.clone())).collect(),
            ..self.clone()
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Self::new(segments, self.steps.max(other.steps), self.smoothness_margin.max(other.smoothness_margin))
    }

    pub fn with_steps(&self, steps: usize) -> Self {
        Self { steps, ..self.clone() }
    }

    /// Cubic at parameter `t` in `[0, 1]` of segment `seg`.
    pub fn at(&self, seg: usize, t: f64) -> Result<CubicForm> {
        let (a, b) = &self.segments[seg];
        CubicForm::new(a.poly().scale(cr(1.0 - t)).add(&b.poly().scale(cr(t))))
    }
}

/// A canonical point configuration that can be recomputed on any smooth cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Section {
    Inflections,
    Type3k(u32),
}

impl Section {
    pub fn compute(&self, f: &CubicForm, tol: &Tolerances) -> Result<PointSet> {
        match self {
            Section::Inflections => f.inflection_points(tol),
            Section::Type3k(k) => EllipticChart::with_default_identity(f, tol)?.points_of_type(*k),
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Inflections => write!(f, "inflections"),
            Section::Type3k(k) => write!(f, "type3k({k})"),
        }
    }
}

impl std::str::FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inflections" {
            return Ok(Section::Inflections);
        }
        let k = s
            .strip_prefix("type3k(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("type3k:"))
            .ok_or_else(|| Error::Parse(format!("unknown section {s:?}")))?;
        k.trim()
            .parse()
            .map(Section::Type3k)
            .map_err(|_| Error::Parse(format!("bad order in section {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingReport {
    /// Present for closed loops: point `i` of the initial set ends at point `permutation[i]`.
    pub permutation: Option<Permutation>,
    /// Final configuration, in the order inherited from the initial indexing.
    pub final_set: PointSet,
    pub initial_set: PointSet,
    pub steps_taken: usize,
    pub min_separation: f64,
    pub min_smoothness_margin: f64,
}

/// Reorders `next` to follow `current`; `None` if any match is ambiguous.
fn match_sets(current: &[ProjectivePoint], next: &PointSet) -> Option<Vec<ProjectivePoint>> {
    if current.len() != next.len() {
        return None;
    }
    let mut used = vec![false; next.len()];
    let mut out = Vec::with_capacity(current.len());
    for p in current {
        let mut dists: Vec<(usize, f64)> = next.iter().enumerate().map(|(j, q)| (j, chordal_distance(p, q))).collect();
        dists.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (j, d0) = dists[0];
        if let Some(&(_, d1)) = dists.get(1) {
            if d1 < AMBIGUITY_RATIO * d0 {
                return None;
            }
        }
        if std::mem::replace(&mut used[j], true) {
            return None;
        }
        out.push(next.points()[j]);
    }
    Some(out)
}

/// Transports `section` along `path`, recomputing it at every step and
/// matching consecutive configurations by nearest neighbours.
pub fn track(path: &ParameterPath, section: Section, tol: &Tolerances) -> Result<TrackingReport> {
    tol.validate()?;
    let margin_floor = path.smoothness_margin.max(tol.smoothness_margin);
    let checked_margin = |seg: usize, t: f64, f: &CubicForm| -> Result<f64> {
        let margin = f.is_smooth(tol).margin;
        if margin < margin_floor {
            return Err(Error::PathHitsDiscriminant { t: seg as f64 + t, margin });
        }
        Ok(margin)
    };

    // reject the path up front if any nominal sample is too close to the discriminant
    let mut min_margin = f64::INFINITY;
    for seg in 0..path.segments.len() {
        for i in 0..=path.steps {
            let t = i as f64 / path.steps as f64;
            min_margin = min_margin.min(checked_margin(seg, t, &path.at(seg, t)?)?);
        }
    }

    let initial = section.compute(path.start(), tol)?;
    let mut min_separation = initial.min_separation();
    let mut current: Vec<ProjectivePoint> = initial.points().to_vec();
    let nominal = 1.0 / path.steps as f64;
    let mut steps_taken = 0;
    for seg in 0..path.segments.len() {
        let mut t = 0.0;
        let mut h = nominal;
        if seg > 0 {
            // re-anchor on the start of the segment, which is the same curve up to scale
            let set = section.compute(&path.at(seg, 0.0)?, tol)?;
            current = match_sets(&current, &set).ok_or(Error::TrackingAmbiguity(seg as f64))?;
        }
        while t < 1.0 {
            let t_next = (t + h).min(1.0);
            let f = path.at(seg, t_next)?;
            min_margin = min_margin.min(checked_margin(seg, t_next, &f)?);
            let set = section.compute(&f, tol)?;
            match match_sets(&current, &set) {
                Some(next) => {
                    let sep = set.min_separation();
                    if sep <= 2.0 * tol.matching {
                        return Err(Error::TrackingAmbiguity(seg as f64 + t_next));
                    }
                    min_separation = min_separation.min(sep);
                    current = next;
                    t = t_next;
                    steps_taken += 1;
                    h = (2.0 * h).min(nominal);
                }
                None => {
                    h /= 2.0;
                    if h < MIN_STEP {
                        return Err(Error::TrackingAmbiguity(seg as f64 + t));
                    }
                }
            }
        }
    }

    let permutation = if path.is_loop() {
        let mut images = Vec::with_capacity(current.len());
        for p in &current {
            match initial.nearest(p) {
                Some((j, d)) if d < tol.matching => images.push(j),
                _ => return Err(Error::TrackingAmbiguity(path.segments.len() as f64)),
            }
        }
        Some(Permutation::new(images).map_err(|_| Error::TrackingAmbiguity(path.segments.len() as f64))?)
    } else {
        None
    };
    Ok(TrackingReport {
        permutation,
        final_set: PointSet::from_points(current, tol.matching),
        initial_set: initial,
        steps_taken,
        min_separation,
        min_smoothness_margin: min_margin,
    })
}

/// The permutation `i -> j` with `g S[i] = S[j]`.
pub fn permutation_of_automorphism(g: &ProjectiveTransform, s: &PointSet, tol: f64) -> Result<Permutation> {
    Permutation::new(index_map(g, s, tol)?)
}

/// Result of checking that the translations of the Fermat cubic permute the
/// points of type `3k` without fixed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeActionReport {
    pub k: u32,
    pub point_count: usize,
    pub group_order: usize,
    pub free: bool,
    /// `(group element, point)` index pairs with a fixed point.
    pub fixed: Vec<(usize, usize)>,
    pub orbit_sizes: Vec<usize>,
    pub expected_orbits: u64,
}

impl FreeActionReport {
    pub fn passed(&self) -> bool {
        self.free && self.orbit_sizes.iter().all(|&s| s == self.group_order) && self.orbit_sizes.len() as u64 == self.expected_orbits
    }
}

pub fn verify_free_k_action(k: u32, tol: &Tolerances) -> Result<FreeActionReport> {
    let f = CubicForm::fermat();
    let o = ProjectivePoint::from_real(-1.0, 1.0, 0.0)?;
    let points = EllipticChart::new(&f, &o, tol)?.points_of_type(k)?;
    let group = fermat_translation_group();
    let perms = group
        .iter()
        .map(|g| permutation_of_automorphism(g, &points, tol.matching))
        .collect::<Result<Vec<_>>>()?;
    let fixed: Vec<(usize, usize)> = perms
        .iter()
        .enumerate()
        .skip(1)
        .flat_map(|(g, p)| p.fixed_points().into_iter().map(move |i| (g, i)))
        .collect();
    let (a, b) = fermat_translations();
    let gens = [
        permutation_of_automorphism(&a, &points, tol.matching)?,
        permutation_of_automorphism(&b, &points, tol.matching)?,
    ];
    let mut seen = vec![false; points.len()];
    let mut orbit_sizes = Vec::new();
    for start in 0..points.len() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            for g in &gens {
                let j = g.apply(i);
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        orbit_sizes.push(size);
    }
    Ok(FreeActionReport {
        k,
        point_count: points.len(),
        group_order: group.len(),
        free: fixed.is_empty(),
        fixed,
        orbit_sizes,
        expected_orbits: jordan_totient_2(k as u64)?,
    })
}

/// Classification of a section size `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `n` is not a multiple of 9: no continuous section exists.
    Obstructed,
    /// A section of this size is built from the points of type `3k`, `k` in the witness.
    Constructible(Vec<u64>),
    /// A multiple of 9 that is not a sum of distinct `J2(k)`.
    Open,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Obstructed => write!(f, "OBSTRUCTED (n is not a multiple of 9)"),
            Verdict::Constructible(s) => {
                let parts: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "CONSTRUCTIBLE S={{{}}}", parts.join(","))
            }
            Verdict::Open => write!(f, "OPEN"),
        }
    }
}

pub fn section_verdict(n: i64) -> Result<Verdict> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("section size must be positive, got {n}")));
    }
    let n = n as u64;
    if n % 9 != 0 {
        return Ok(Verdict::Obstructed);
    }
    Ok(match totient_subset_witness(n / 9) {
        Some(s) => Verdict::Constructible(s),
        None => Verdict::Open,
    })
}

/// The loop `t -> g(t).f` for a one-parameter subgroup `g(t)` from the
/// identity to `g`, sampled at `samples` points. `g` must be diagonalizable
/// and preserve `f` for the result to be a loop.
pub fn transform_path(g: &ProjectiveTransform, f: &CubicForm, samples: usize, steps: usize, tol: &Tolerances) -> Result<ParameterPath> {
    let m = g.matrix();
    let values = eigenvalues(m, tol)?;
    if values.len() != 3 {
        return Err(Error::InvalidArgument("transform has a repeated eigenvalue".into()));
    }
    let mut columns = Vec::with_capacity(3);
    for mu in &values {
        let basis = eigenspace(m, *mu);
        let v = basis.first().ok_or_else(|| Error::Numerical("missing eigenvector".into()))?;
        columns.push(Vector3::from(*v));
    }
    let v = Matrix3::from_columns(&columns);
    let v_inv = v.try_inverse().ok_or(Error::SingularMatrix)?;
    let logs: Vec<Complex> = values.iter().map(|mu| mu.ln()).collect();
    let mut cubics = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let d = Matrix3::from_diagonal(&Vector3::from_fn(|r, _| (logs[r] * t).exp()));
        let gt = ProjectiveTransform::new(v * d * v_inv)?;
        cubics.push(gt.act_on_cubic(f));
    }
    // close the loop exactly on the starting curve
    if cubics[samples].proportional_to(f, 1e-9) {
        cubics[samples] = f.clone();
    }
    ParameterPath::from_samples(&cubics, steps, tol.smoothness_margin)
}

/// A polygonal loop of Hesse-pencil members `x^3 + y^3 + z^3 + l xyz` with
/// `l` on the circle of radius `radius` about `center`.
pub fn hesse_loop(center: Complex, radius: f64, vertices: usize, steps: usize, tol: &Tolerances) -> Result<ParameterPath> {
    let cubics: Vec<CubicForm> = (0..=vertices)
        .map(|i| {
            let angle = std::f64::consts::TAU * (i % vertices) as f64 / vertices as f64;
            CubicForm::hesse(center + Complex::from_polar(radius, angle))
        })
        .collect();
    ParameterPath::from_samples(&cubics, steps, tol.smoothness_margin)
}
