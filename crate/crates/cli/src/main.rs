//! `lamcert`: verify the large T4 operator, query its wave cone, and export
//! exact laminate fields.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 malformed input or
//! usage.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lamcert::data::{paper_potential_basis, paper_preset, parse_large_t4, parse_vector};
use lamcert::laminate::{
    refine_field, simple_laminate_field, LaminateError, LaminateTree, PiecewisePolyField, Rect, Refinement,
};
use lamcert::operator::CertifiedOperator;
use lamcert::scalar::to_decimal;
use lamcert::t4::LargeT4Data;
use lamcert::verify::{run_full_verification, solve_coefficients};
use lamcert::{format_rational, parse_rational, QVector, Rational};
use num_traits::{One, Zero};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LaminateError> for CliError {
    fn from(e: LaminateError) -> Self {
        match e {
            LaminateError::BadParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "lamcert", version, about = "Exact certificates for the four-state T4 operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run every certificate and write the report.
    Verify(VerifyArgs),
    /// Decide whether a vector lies in the wave cone.
    Wavecone(WaveconeArgs),
    /// Build a one- or two-level laminate field and export it.
    Laminate(LaminateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Args)]
struct Source {
    /// Built-in dataset (the default when no input is given).
    #[arg(long, value_enum, conflicts_with = "input")]
    preset: Option<Preset>,
    /// Large T4 document (JSON, rationals as strings).
    #[arg(long)]
    input: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<LargeT4Data, CliError> {
        match (&self.input, self.preset) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                parse_large_t4(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
            }
            (None, Some(Preset::Paper) | None) => Ok(paper_preset()),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Report path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WaveconeArgs {
    #[command(flatten)]
    source: Source,
    /// Vector in R^3, e.g. `7/15,-1/15,-2/15`.
    #[arg(long, short = 'v', allow_hyphen_values = true, value_parser = vector_arg)]
    vector: QVector,
}

#[derive(Args)]
struct LaminateArgs {
    #[command(flatten)]
    source: Source,
    /// Volume fraction of `a` in the first-level laminate.
    #[arg(long, default_value = "1/2", value_parser = rational_arg)]
    lambda: Rational,
    /// Length scale of the first level.
    #[arg(long, default_value = "1/10", value_parser = rational_arg)]
    eps: Rational,
    /// First-level direction.
    #[arg(long, default_value = "-14,5", allow_hyphen_values = true, value_parser = vector_arg)]
    xi0: QVector,
    /// 1: laminate between `a` and `b`. 2: additionally refine `p` into `a4` and `P3`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    levels: u8,
    /// Largest fraction of each refined slab left uncovered.
    #[arg(long, default_value = "1/10", value_parser = rational_arg)]
    alpha: Rational,
    /// Grid cells per side of the export.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    grid: u32,
    /// Fraction-`λ` state; defaults to the first state.
    #[arg(long, allow_hyphen_values = true, value_parser = vector_arg)]
    a: Option<QVector>,
    /// Other state; defaults to the base point of the first staircase.
    #[arg(long, allow_hyphen_values = true, value_parser = vector_arg)]
    b: Option<QVector>,
    /// Domain as `x0,y0,x1,y1`.
    #[arg(long, default_value = "0,0,1,1", allow_hyphen_values = true, value_parser = vector_arg)]
    domain: QVector,
    /// Grid CSV path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Fractions report path.
    #[arg(long)]
    fractions: Option<PathBuf>,
    /// Decimal digits in the grid export.
    #[arg(long, default_value_t = 6)]
    digits: usize,
    /// Check every n-th refined window for exactness (all first-level slabs are always checked).
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    stride: u64,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

fn vector_arg(s: &str) -> Result<QVector, String> {
    parse_vector(s).map_err(|e| e.to_string())
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn certified_operator(data: &LargeT4Data) -> Result<CertifiedOperator, CliError> {
    let family = solve_coefficients(data).map_err(|e| CliError::Math(e.to_string()))?;
    CertifiedOperator::new(family).map_err(|e| CliError::Math(e.to_string()))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let data = args.source.load()?;
    let (report, _) = run_full_verification(&data);
    let mut text = report.to_json();
    text.push('\n');
    write_text(args.output.as_deref(), &text)?;
    let failed: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
    eprintln!("overall {} ({} checks)", report.overall(), report.entries.len());
    if failed.is_empty() && report.passed() {
        Ok(())
    } else {
        Err(CliError::Math(format!("failing checks: {}", failed.join(", "))))
    }
}

fn cmd_wavecone(args: &WaveconeArgs) -> Result<(), CliError> {
    if args.vector.len() != 3 {
        return Err(CliError::Usage(format!("expected 3 components, got {}", args.vector.len())));
    }
    let data = args.source.load()?;
    let op = certified_operator(&data)?;
    let verdict = op.wave_cone_member(&args.vector).map_err(|e| CliError::Usage(e.to_string()))?;
    let head = if verdict.member { "member" } else { "non-member" };
    let witness = verdict.witness_direction.as_deref().map_or_else(|| "none".to_string(), fmt_vec);
    println!("{head} v={} witness={witness} certificate: {}", fmt_vec(&args.vector), verdict.certificate());
    Ok(())
}

struct Built {
    field: PiecewisePolyField,
    labels: Vec<(QVector, &'static str)>,
    tree: LaminateTree,
    refinement: Option<Refinement>,
}

fn build_field(args: &LaminateArgs, data: &LargeT4Data, op: &CertifiedOperator) -> Result<Built, CliError> {
    if args.xi0.len() != 2 {
        return Err(CliError::Usage("--xi0 needs two components".into()));
    }
    if args.domain.len() != 4 {
        return Err(CliError::Usage("--domain needs x0,y0,x1,y1".into()));
    }
    let [x0, y0, x1, y1] = <[Rational; 4]>::try_from(args.domain.clone()).expect("length checked");
    let domain = Rect::new(x0, y0, x1, y1)?;
    let cfg = &data.configs[0];
    let a = args.a.clone().unwrap_or_else(|| data.states[0].clone());
    let b = args.b.clone().unwrap_or_else(|| cfg.p.clone());
    if a.len() != 3 || b.len() != 3 {
        return Err(CliError::Usage("--a and --b need three components".into()));
    }
    let basis = paper_potential_basis(data);
    let field = simple_laminate_field(op.family(), &a, &b, &args.lambda, &args.xi0, &args.eps, &domain, &basis)?;
    let mean: QVector =
        a.iter().zip(&b).map(|(x, y)| x * &args.lambda + y * (Rational::one() - &args.lambda)).collect();
    let tree = LaminateTree::new(mean.clone()).split(op, &mean, &a, &b, &args.lambda, &Rational::one())?;

    if args.levels == 1 {
        return Ok(Built { field, labels: vec![(a, "a"), (b, "b")], tree, refinement: None });
    }
    if args.a.is_some() || args.b.is_some() {
        return Err(CliError::Usage("--a/--b apply to one-level runs only".into()));
    }
    let half = Rational::new(1.into(), 2.into());
    let (target, b2, c2) = (cfg.p.clone(), data.states[3].clone(), cfg.corner(3));
    let eps2 = &args.eps / Rational::from_integer(10.into());
    let refinement = refine_field(&field, &target, &b2, &c2, &half, &args.alpha, op, data.node(0, 3), &eps2)?;
    let covered = if refinement.target_area.is_zero() {
        Rational::zero()
    } else {
        (&refinement.target_area - &refinement.defect_area) / &refinement.target_area
    };
    let tree = if covered.is_zero() { tree } else { tree.split(op, &target, &b2, &c2, &half, &covered)? };
    Ok(Built {
        field: refinement.field.clone(),
        labels: vec![(a, "a1"), (target, "p"), (b2, "a4"), (c2, "P3")],
        tree,
        refinement: Some(refinement),
    })
}

fn label_of<'a>(labels: &'a [(QVector, &'static str)], v: &[Rational]) -> &'a str {
    labels.iter().find(|(w, _)| w.as_slice() == v).map_or("other", |(_, l)| l)
}

fn write_grid(args: &LaminateArgs, built: &Built) -> Result<(), CliError> {
    let n = args.grid as usize;
    let rows = built.field.sample_grid(n, n)?;
    let sink: Box<dyn Write> = match &args.output {
        Some(p) => {
            Box::new(fs::File::create(p).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(["x", "y", "state", "v1", "v2", "v3", "x_exact", "y_exact", "v1_exact", "v2_exact", "v3_exact"])
        .map_err(csv_err)?;
    let d = args.digits;
    for row in rows {
        let mut rec =
            vec![to_decimal(&row.x, d), to_decimal(&row.y, d), label_of(&built.labels, &row.value).to_string()];
        rec.extend(row.value.iter().map(|v| to_decimal(v, d)));
        rec.push(format_rational(&row.x));
        rec.push(format_rational(&row.y));
        rec.extend(row.value.iter().map(format_rational));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn fractions_report(built: &Built, exact: &lamcert::laminate::ExactnessSummary, bound_met: bool) -> serde_json::Value {
    let area = built.field.domain().area();
    let fractions = built.field.volume_fractions();
    let total: Rational = fractions.values().sum();
    let entries: Vec<_> = fractions
        .iter()
        .map(|(v, a)| {
            json!({
                "state": label_of(&built.labels, v),
                "value": fmt_vec(v),
                "area": format_rational(a),
                "fraction": to_decimal(&(a / &area), 12),
            })
        })
        .collect();
    let tree: BTreeMap<String, String> =
        built.tree.leaves().iter().map(|(v, w)| (label_of(&built.labels, v).to_string(), format_rational(w))).collect();
    let mut doc = json!({
        "domain_area": format_rational(&area),
        "total": format_rational(&total),
        "total_matches_domain": total == area,
        "fractions": entries,
        "tree_weights": tree,
        "exactness": {
            "checked": exact.checked,
            "exact": exact.exact(),
            "failures": exact.failures,
        },
    });
    if let Some(r) = &built.refinement {
        let ratio = if r.target_area.is_zero() { Rational::zero() } else { &r.defect_area / &r.target_area };
        doc["refinement"] = json!({
            "windows": r.windows,
            "target_area": format_rational(&r.target_area),
            "defect_area": format_rational(&r.defect_area),
            "defect_ratio": to_decimal(&ratio, 12),
            "defect_bound_met": bound_met,
        });
    }
    doc
}

fn cmd_laminate(args: &LaminateArgs) -> Result<(), CliError> {
    let data = args.source.load()?;
    let op = certified_operator(&data)?;
    let built = build_field(args, &data, &op)?;
    write_grid(args, &built)?;
    let exact = built.field.check_exactness(args.stride as usize);
    let bound_met = built.refinement.as_ref().is_none_or(|r| r.defect_area <= &args.alpha * &r.target_area);
    if let Some(path) = &args.fractions {
        let mut text = serde_json::to_string_pretty(&fractions_report(&built, &exact, bound_met))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        text.push('\n');
        write_text(Some(path), &text)?;
    }
    if !exact.exact() {
        return Err(CliError::Math(format!("potential mismatch on {} slab(s)", exact.failures.len())));
    }
    if !bound_met {
        return Err(CliError::Math("refinement defect exceeds alpha times the target area".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Wavecone(a) => cmd_wavecone(a),
        Command::Laminate(a) => cmd_laminate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
