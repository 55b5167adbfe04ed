//! JSON and CSV formats for cubics, points and paths.
//!
//! Complex numbers are `[re, im]` pairs. A cubic is
//! `{"coeffs": {"300": [1, 0], ...}}` keyed by exponent triples, a point is
//! `{"xyz": [[re, im], [re, im], [re, im]]}` and a path is
//! `{"segments": [{"from": cubic, "to": cubic}], "steps": N}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::CubicForm;
use crate::error::{Error, Result};
use crate::monodromy::ParameterPath;
use crate::numeric::{monomials, Complex, ProjectivePoint, TriPoly};

pub type ComplexPair = [f64; 2];

fn pair(z: Complex) -> ComplexPair {
    [z.re, z.im]
}

fn complex(p: ComplexPair) -> Result<Complex> {
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Complex::new(p[0], p[1]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubicRecord {
    pub coeffs: BTreeMap<String, ComplexPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CubicRecord {
    pub fn from_cubic(f: &CubicForm) -> Self {
        let coeffs = monomials(3)
            .into_iter()
            .map(|e| (format!("{}{}{}", e[0], e[1], e[2]), pair(f.coeff(e))))
            .collect();
        Self {
            coeffs,
            label: f.label().map(str::to_string),
        }
    }

    /// Missing monomials are zero.
    pub fn to_cubic(&self) -> Result<CubicForm> {
        let mut poly = TriPoly::zero(3);
        for (key, value) in &self.coeffs {
            let digits: Vec<u32> = key.chars().filter_map(|ch| ch.to_digit(10)).collect();
            if digits.len() != 3 || key.len() != 3 || digits.iter().sum::<u32>() != 3 {
                return Err(Error::Parse(format!("bad monomial key {key:?}")));
            }
            poly.set_coeff([digits[0], digits[1], digits[2]], complex(*value)?);
        }
        let f = CubicForm::new(poly)?;
        Ok(match &self.label {
            Some(l) => f.with_label(l.clone()),
            None => f,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub xyz: [ComplexPair; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl PointRecord {
    pub fn from_point(p: &ProjectivePoint) -> Self {
        Self {
            xyz: p.coords().map(pair),
            residual: None,
        }
    }

    pub fn with_residual(p: &ProjectivePoint, f: &CubicForm) -> Self {
        Self {
            residual: Some(f.residual(p)),
            ..Self::from_point(p)
        }
    }

    pub fn to_point(&self) -> Result<ProjectivePoint> {
        let v = [complex(self.xyz[0])?, complex(self.xyz[1])?, complex(self.xyz[2])?];
        ProjectivePoint::new(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentRecord {
    pub from: CubicRecord,
    pub to: CubicRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathRecord {
    pub segments: Vec<SegmentRecord>,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness_margin: Option<f64>,
}

impl PathRecord {
    pub fn from_path(path: &ParameterPath) -> Self {
        Self {
            segments: path
                .segments
                .iter()
                .map(|(a, b)| SegmentRecord {
                    from: CubicRecord::from_cubic(a),
                    to: CubicRecord::from_cubic(b),
                })
                .collect(),
            steps: path.steps,
            smoothness_margin: Some(path.smoothness_margin),
        }
    }

    /// `default_margin` applies when the file does not set one.
    pub fn to_path(&self, default_margin: f64) -> Result<ParameterPath> {
        let segments = self
            .segments
            .iter()
            .map(|s| Ok((s.from.to_cubic()?, s.to.to_cubic()?)))
            .collect::<Result<Vec<_>>>()?;
        ParameterPath::new(segments, self.steps, self.smoothness_margin.unwrap_or(default_margin))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("records serialize") + "\n"
}

pub fn parse_cubic(text: &str) -> Result<CubicForm> {
    parse::<CubicRecord>(text)?.to_cubic()
}

pub fn cubic_to_json(f: &CubicForm) -> String {
    render(&CubicRecord::from_cubic(f))
}

pub fn parse_point(text: &str) -> Result<ProjectivePoint> {
    parse::<PointRecord>(text)?.to_point()
}

pub fn point_to_json(p: &ProjectivePoint) -> String {
    render(&PointRecord::from_point(p))
}

/// A JSON array of points.
pub fn parse_points(text: &str) -> Result<Vec<ProjectivePoint>> {
    parse::<Vec<PointRecord>>(text)?.iter().map(PointRecord::to_point).collect()
}

pub fn points_to_json(points: &[ProjectivePoint]) -> String {
    render(&points.iter().map(PointRecord::from_point).collect::<Vec<_>>())
}

pub fn parse_path(text: &str, default_margin: f64) -> Result<ParameterPath> {
    parse::<PathRecord>(text)?.to_path(default_margin)
}

pub fn path_to_json(path: &ParameterPath) -> String {
    render(&PathRecord::from_path(path))
}

pub const CSV_HEADER: &str = "index,x_re,x_im,y_re,y_im,z_re,z_im,residual";

/// One point per row; the residual column is empty when unknown.
pub fn points_to_csv(points: &[PointRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        let coords: Vec<String> = p.xyz.iter().flat_map(|z| [z[0].to_string(), z[1].to_string()]).collect();
        let residual = p.residual.map(|r| r.to_string()).unwrap_or_default();
        out.push_str(&format!("{i},{},{residual}\n", coords.join(",")));
    }
    out
}

pub fn parse_points_csv(text: &str) -> Result<Vec<PointRecord>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Parse("missing CSV header".into()));
    }
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::Parse(format!("expected 8 fields in {line:?}")));
            }
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
            let v: Vec<f64> = fields[1..7].iter().map(|s| num(s)).collect::<Result<_>>()?;
            let residual = if fields[7].trim().is_empty() { None } else { Some(num(fields[7])?) };
            Ok(PointRecord {
                xyz: [[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]],
                residual,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cubic_round_trip_is_byte_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = crate::random::random_smooth_cubic(&mut rng, &Default::default()).with_label("random");
        let text = cubic_to_json(&f);
        let g = parse_cubic(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(cubic_to_json(&g), text);
    }

    #[test]
    fn sparse_cubic_file() {
        let f = parse_cubic(r#"{"coeffs": {"300": [1, 0], "030": [1, 0], "003": [1.0, 0.0]}}"#).unwrap();
        assert_eq!(f.poly(), CubicForm::fermat().poly());
        assert!(matches!(parse_cubic(r#"{"coeffs": {"301": [1, 0]}}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_cubic(r#"{"coeffs": {"3000": [1, 0]}}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_cubic(r#"{"coeffs": {}}"#), Err(Error::ZeroPolynomial)));
        assert!(matches!(parse_cubic(r#"{"coef": {}}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_cubic("not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn point_round_trip() {
        let p = ProjectivePoint::new([c(0.3, -0.1), c(1.0, 0.0), c(-2.0, 0.5)]).unwrap();
        let text = point_to_json(&p);
        assert_eq!(parse_point(&text).unwrap(), p);
        assert_eq!(point_to_json(&parse_point(&text).unwrap()), text);
        let list = points_to_json(&[p, p]);
        assert_eq!(points_to_json(&parse_points(&list).unwrap()), list);
        assert!(matches!(parse_point(r#"{"xyz": [[0,0],[0,0],[0,0]]}"#), Err(Error::ZeroVector)));
    }

    #[test]
    fn path_round_trip() {
        let path = ParameterPath::new(
            vec![(CubicForm::fermat(), CubicForm::hesse(c(1.0, 2.0)))],
            7,
            1e-4,
        )
        .unwrap();
        let text = path_to_json(&path);
        let back = parse_path(&text, 1e-4).unwrap();
        assert_eq!(back, path);
        assert_eq!(path_to_json(&back), text);
    }

    #[test]
    fn csv_round_trip() {
        let f = CubicForm::fermat();
        let points: Vec<PointRecord> = f
            .inflection_points(&Default::default())
            .unwrap()
            .iter()
            .map(|p| PointRecord::with_residual(p, &f))
            .collect();
        let text = points_to_csv(&points);
        assert_eq!(text.lines().count(), 10);
        assert_eq!(parse_points_csv(&text).unwrap(), points);
    }
}
