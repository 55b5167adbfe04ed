use serde::{Deserialize, Serialize};

use crate::numeric::{chordal_distance, ProjectivePoint};

/// An unordered configuration of distinct projective points, compared up to a
/// chordal matching tolerance. Insertion order is kept and serves as the
/// indexing of the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<ProjectivePoint>,
    tolerance: f64,
}

impl PointSet {
    pub fn new(tolerance: f64) -> Self {
        Self {
            points: Vec::new(),
            tolerance,
        }
    }

    /// Collects points, dropping those within `tolerance` of an earlier one.
    pub fn from_points<I: IntoIterator<Item = ProjectivePoint>>(points: I, tolerance: f64) -> Self {
        let mut set = Self::new(tolerance);
        for p in points {
            set.insert(p);
        }
        set
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ProjectivePoint> {
        self.points.iter()
    }

    /// Inserts `p` unless an existing point matches it; returns whether it was added.
    pub fn insert(&mut self, p: ProjectivePoint) -> bool {
        if self.position(&p).is_some() {
            return false;
        }
        self.points.push(p);
        true
    }

    /// Index of the nearest point within tolerance.
    pub fn position(&self, p: &ProjectivePoint) -> Option<usize> {
        let (idx, d) = self.nearest(p)?;
        (d < self.tolerance).then_some(idx)
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.position(p).is_some()
    }

    /// Nearest point and its chordal distance.
    pub fn nearest(&self, p: &ProjectivePoint) -> Option<(usize, f64)> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, chordal_distance(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Points of `self` not matched by any point of `other`.
    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            points: self.points.iter().copied().filter(|p| !other.contains(p)).collect(),
            tolerance: self.tolerance,
        }
    }

    /// Setwise equality within tolerance.
    pub fn matches(&self, other: &PointSet) -> bool {
        self.len() == other.len()
            && self.points.iter().all(|p| other.contains(p))
            && other.points.iter().all(|p| self.contains(p))
    }

    /// Smallest pairwise chordal distance (infinite for fewer than two points).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                best = best.min(chordal_distance(&self.points[i], &self.points[j]));
            }
        }
        best
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ProjectivePoint;
    type IntoIter = std::slice::Iter<'a, ProjectivePoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
