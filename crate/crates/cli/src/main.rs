use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cubic_sections::elliptic::{constructible_sizes, jordan_totient_2};
use cubic_sections::io::{self, PointRecord};
use cubic_sections::monodromy::{section_verdict, track, Section, Verdict};
use cubic_sections::symmetry::{fermat_self_test, hesse_fit, hesse_normalize};
use cubic_sections::{CubicForm, EllipticChart, Error, PointSet, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Distinguished points, group law and monodromy on smooth plane cubics.
#[derive(Debug, Parser)]
#[command(name = "cubic-sections", version)]
struct Cli {
    /// Chordal tolerance for identifying points.
    #[arg(long, global = true)]
    tol_match: Option<f64>,
    /// Relative residual tolerance for polynomial roots.
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The nine inflection points of a curve.
    Inflections { curve: PathBuf },
    /// Points where a smooth cubic meets a curve of degree k with multiplicity 3k.
    Type3k { curve: PathBuf, k: u32 },
    /// Observed and expected counts of type-3k points for k = 1..k_max.
    Counts {
        curve: PathBuf,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
    },
    /// The m-torsion points for the group law with an inflection as identity.
    Torsion { curve: PathBuf, m: u32 },
    /// Whether a canonical section of size n exists.
    Verdict { n: i64 },
    /// Section sizes up to a bound that the type-3k construction realizes.
    Sizes { bound: u64 },
    /// A projective transform to Hesse form x^3 + y^3 + z^3 + l xyz.
    Hesse { curve: PathBuf },
    /// Transport a point configuration along a path file.
    Track {
        path: PathBuf,
        /// `inflections` or `type3k(k)`.
        #[arg(long, default_value = "inflections")]
        section: String,
    },
    /// Checks on the translations of the Fermat cubic.
    Selftest,
    /// The Jordan totient J2(k).
    J2 { k: u64 },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_cubic(path: &Path) -> Result<CubicForm> {
    io::parse_cubic(&read(path)?)
}

fn json_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

/// Quotes a CSV field when needed.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn point_output(set: &PointSet, f: &CubicForm, format: Format) -> String {
    let records: Vec<PointRecord> = set.iter().map(|p| PointRecord::with_residual(p, f)).collect();
    match format {
        Format::Json => json_text(&json!({ "count": records.len(), "points": records })),
        Format::Csv => io::points_to_csv(&records),
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol_match {
        tol.matching = t;
    }
    if let Some(t) = cli.tol_root {
        tol.root = t;
    }
    tol.validate()?;
    Ok(tol)
}

fn run(cli: &Cli) -> Result<String> {
    let tol = tolerances(cli)?;
    let format = cli.format;
    Ok(match &cli.command {
        Command::Inflections { curve } => {
            let f = read_cubic(curve)?;
            point_output(&f.inflection_points(&tol)?, &f, format)
        }
        Command::Type3k { curve, k } => {
            let f = read_cubic(curve)?;
            let set = EllipticChart::with_default_identity(&f, &tol)?.points_of_type(*k)?;
            point_output(&set, &f, format)
        }
        Command::Torsion { curve, m } => {
            let f = read_cubic(curve)?;
            let set = EllipticChart::with_default_identity(&f, &tol)?.torsion_points(*m)?;
            point_output(&set.points, &f, format)
        }
        Command::Counts { curve, k_max } => {
            let f = read_cubic(curve)?;
            let chart = EllipticChart::with_default_identity(&f, &tol)?;
            let mut rows = Vec::new();
            for k in 1..=*k_max {
                let expected = 9 * jordan_totient_2(k as u64)?;
                let observed = chart.points_of_type(k)?.len();
                rows.push((k, expected, observed));
            }
            match format {
                Format::Json => json_text(&json!({
                    "rows": rows.iter().map(|(k, e, o)| json!({"k": k, "expected": e, "observed": o})).collect::<Vec<_>>()
                })),
                Format::Csv => csv_table(
                    &["k", "expected", "observed"],
                    &rows.iter().map(|(k, e, o)| vec![k.to_string(), e.to_string(), o.to_string()]).collect::<Vec<_>>(),
                ),
            }
        }
        Command::Verdict { n } => {
            let verdict = section_verdict(*n)?;
            let witness = match &verdict {
                Verdict::Constructible(s) => Some(s.clone()),
                _ => None,
            };
            match format {
                Format::Json => json_text(&json!({ "n": n, "verdict": verdict.to_string(), "witness": witness })),
                Format::Csv => csv_table(&["n", "verdict"], &[vec![n.to_string(), verdict.to_string()]]),
            }
        }
        Command::Sizes { bound } => {
            let sizes = constructible_sizes(*bound);
            match format {
                Format::Json => json_text(&json!({ "bound": bound, "sizes": sizes })),
                Format::Csv => csv_table(&["size"], &sizes.iter().map(|s| vec![s.to_string()]).collect::<Vec<_>>()),
            }
        }
        Command::Hesse { curve } => {
            let f = read_cubic(curve)?;
            let (lambda, g) = hesse_normalize(&f, &tol)?;
            let residual = hesse_fit(&g.act_on_cubic(&f)).1;
            let m = g.matrix();
            let rows: Vec<Vec<[f64; 2]>> = (0..3)
                .map(|r| (0..3).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect();
            match format {
                Format::Json => json_text(&json!({
                    "lambda": [lambda.re, lambda.im],
                    "transform": rows,
                    "residual": residual,
                })),
                Format::Csv => csv_table(
                    &["lambda_re", "lambda_im", "residual"],
                    &[vec![lambda.re.to_string(), lambda.im.to_string(), residual.to_string()]],
                ),
            }
        }
        Command::Track { path, section } => {
            let section: Section = section.parse()?;
            let path = io::parse_path(&read(path)?, tol.smoothness_margin)?;
            let report = track(&path, section, &tol)?;
            let cycles = report.permutation.as_ref().map(|p| p.to_string());
            match format {
                Format::Json => json_text(&json!({
                    "section": section.to_string(),
                    "permutation": cycles,
                    "images": report.permutation.as_ref().map(|p| p.images().to_vec()),
                    "steps_taken": report.steps_taken,
                    "min_separation": report.min_separation,
                    "min_smoothness_margin": report.min_smoothness_margin,
                    "final_set": report.final_set.iter().map(PointRecord::from_point).collect::<Vec<_>>(),
                })),
                Format::Csv => csv_table(
                    &["permutation", "steps_taken", "min_separation", "min_smoothness_margin"],
                    &[vec![
                        cycles.unwrap_or_default(),
                        report.steps_taken.to_string(),
                        report.min_separation.to_string(),
                        report.min_smoothness_margin.to_string(),
                    ]],
                ),
            }
        }
        Command::Selftest => {
            let checks = fermat_self_test(&tol, cli.seed)?;
            if let Some(bad) = checks.iter().find(|c| !c.passed) {
                return Err(Error::Numerical(format!("self-test failed: {} ({})", bad.name, bad.detail)));
            }
            match format {
                Format::Json => json_text(&json!({ "passed": true, "seed": cli.seed, "checks": checks })),
                Format::Csv => csv_table(
                    &["check", "passed", "detail"],
                    &checks
                        .iter()
                        .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                        .collect::<Vec<_>>(),
                ),
            }
        }
        Command::J2 { k } => {
            let value = jordan_totient_2(*k)?;
            match format {
                Format::Json => json_text(&json!({ "k": k, "j2": value })),
                Format::Csv => csv_table(&["k", "j2"], &[vec![k.to_string(), value.to_string()]]),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("S={1,2}"), "\"S={1,2}\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_table(&["a", "b"], &[vec!["1".into(), "x,y".into()]]), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn tolerance_flags() {
        let cli = Cli::parse_from(["cubic-sections", "--tol-match", "1e-5", "--tol-root", "1e-9", "j2", "3"]);
        let tol = tolerances(&cli).unwrap();
        assert_eq!(tol.matching, 1e-5);
        assert_eq!(tol.root, 1e-9);
        let bad = Cli::parse_from(["cubic-sections", "--tol-root", "0", "j2", "3"]);
        assert!(matches!(tolerances(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn flags_after_subcommand() {
        let cli = Cli::parse_from(["cubic-sections", "sizes", "50", "--format", "csv"]);
        assert_eq!(cli.format, Format::Csv);
        assert_eq!(run(&cli).unwrap(), "size\n9\n27\n36\n");
    }
}
