mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use betaforge_core::acceptance::{run_all, AcceptanceConfig};
use betaforge_core::exactnum::FieldElem;
use betaforge_core::json::{self as fmtjson, to_pretty};
use betaforge_core::plmaps::{
    counterexample_map, validate_membership, Arrangement, Cell, MembershipReport, PlMap, SubringOracle,
};
use betaforge_core::representability::{
    decide_nonneg, verify_certificate, Certificate, CertificateKind, CoeffVector, DEFAULT_MAX_N,
};
use betaforge_core::subdivision::{
    enumerate_carets, multinomial, validate_subdivision, validate_subdivision_u64, Ctx, DEFAULT_CARET_CAP,
};
use betaforge_core::treepairs::{
    check_relations, compose_pairs, emit_presentation, equivalent, reduce, RelationKind, TreePair,
    DEFAULT_COMPOSE_BUDGET,
};

use output::{emit, read_json};

const EXIT_WITNESS: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IMPOSSIBLE: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "betaforge", version, about = "Exact computations in groups of PL maps with slopes in powers of an algebraic root")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

impl Output {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn path(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a subdivision polynomial a_n x^n + ... + a_1 x - 1 given as a_1 ... a_n.
    #[command(allow_negative_numbers = true)]
    Group {
        #[arg(required = true)]
        coeffs: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// List the caret shapes of a context.
    #[command(allow_negative_numbers = true)]
    Carets {
        #[arg(required = true)]
        coeffs: Vec<String>,
        /// Refuse to enumerate more shapes than this.
        #[arg(long, default_value_t = DEFAULT_CARET_CAP)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether some A^N p is nonnegative and write the certificate.
    #[command(allow_negative_numbers = true)]
    Obstruct {
        #[arg(required = true)]
        coeffs: Vec<String>,
        /// Coefficient vector p in the basis λ^{n-1}, ..., λ, 1.
        #[arg(long = "vec", required = true, num_args = 1.., allow_negative_numbers = true)]
        vector: Vec<String>,
        #[arg(long, env = "BETAFORGE_MAXN", default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check a certificate file against a recomputation.
    VerifyCert { file: PathBuf },
    /// Piecewise-linear maps in JSON form.
    Plmap {
        #[command(subcommand)]
        op: PlmapOp,
    },
    /// Tree pairs in JSON form.
    Treepair {
        #[command(subcommand)]
        op: TreepairOp,
    },
    /// Relations of the group for ax^2 + bx - 1.
    Presentation {
        a: u64,
        b: u64,
        #[arg(long, default_value_t = 3)]
        max_index: u32,
        /// Evaluate each relation as exact maps under both conventions (a = b = 1 only).
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// The map of ax^4 + bx^2 - 1 permuting cells of [0, √β], with its membership report.
    Counterexample {
        a: u64,
        b: u64,
        /// Domain cell order as a word in S (short), L (long) and R (rest).
        #[arg(long)]
        domain: Option<String>,
        /// Codomain cell order, same alphabet.
        #[arg(long)]
        codomain: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run every acceptance criterion and print a table.
    VerifyPaper {
        #[arg(long, env = "BETAFORGE_MAXN", default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long, hide = true)]
        corrupt_matrix: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum PlmapOp {
    /// f then g.
    Compose {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    Invert {
        f: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate at a rational `p/q` or at power-basis coordinates `c0,c1,...`.
    Eval {
        f: PathBuf,
        x: String,
        #[command(flatten)]
        output: Output,
    },
    /// Exit 0 iff the map lies in the group of the target context (default: its own).
    #[command(allow_negative_numbers = true)]
    Validate {
        f: PathBuf,
        #[arg(long, num_args = 1..)]
        target: Option<Vec<String>>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum TreepairOp {
    /// Build a pair from bracket notation such as `(2,1)[L,(2,1)]`.
    #[command(allow_negative_numbers = true)]
    New {
        #[arg(required = true)]
        coeffs: Vec<String>,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        output: Output,
    },
    /// a then b.
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_COMPOSE_BUDGET)]
        budget: usize,
        #[command(flatten)]
        output: Output,
    },
    Reduce {
        a: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Exit 0 iff the pairs represent the same map.
    Equiv { a: PathBuf, b: PathBuf },
    Render {
        a: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// The map of a pair.
    ToPlmap {
        a: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Group { coeffs, output } => group(&coeffs, &output),
        Command::Carets { coeffs, cap, output } => carets(&coeffs, cap, &output),
        Command::Obstruct { coeffs, vector, max_n, output } => obstruct(&coeffs, &vector, max_n, &output),
        Command::VerifyCert { file } => verify_cert(&file),
        Command::Plmap { op } => plmap(op),
        Command::Treepair { op } => treepair(op),
        Command::Presentation { a, b, max_index, check, output } => presentation(a, b, max_index, check, &output),
        Command::Counterexample { a, b, domain, codomain, output } => {
            counterexample(a, b, domain.as_deref(), codomain.as_deref(), &output)
        }
        Command::VerifyPaper { max_n, corrupt_matrix, output } => verify_paper(max_n, corrupt_matrix, &output),
    }
}

fn context(coeffs: &[String]) -> Result<Ctx> {
    let parsed = coeffs
        .iter()
        .map(|c| BigInt::from_str(c).with_context(|| format!("coefficient {c:?} is not an integer")))
        .collect::<Result<Vec<_>>>()?;
    Ok(validate_subdivision(&parsed)?)
}

fn group(coeffs: &[String], output: &Output) -> Result<u8> {
    let ctx = context(coeffs)?;
    let iv = ctx.root_interval();
    let approx = format!("{:.6}", FieldElem::beta(&ctx).to_f64());
    let count = multinomial(ctx.poly().coeffs());
    let shapes = enumerate_carets(&ctx, DEFAULT_CARET_CAP).ok();
    let rel = ctx.reciprocal_relation();
    let content = match output.format(Format::Text) {
        Format::Json => to_pretty(&json!({
            "context": fmtjson::context(&ctx),
            "polynomial": ctx.poly().to_string(),
            "root": { "lo": fmtjson::rat(&iv.lo), "hi": fmtjson::rat(&iv.hi), "approx": approx },
            "reciprocal": rel.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "caret_count": count.to_string(),
            "carets": shapes.as_ref().map(|s| s.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        })),
        Format::Text => {
            let mut s = format!(
                "polynomial  {}\nverdict     valid\nroot        {approx} in [{}, {}]\nrelation    {}\ncarets      {count}\n",
                ctx.poly(),
                iv.lo,
                iv.hi,
                reciprocal_text(rel)
            );
            match &shapes {
                Some(shapes) => shapes.iter().for_each(|c| s.push_str(&format!("  {c}\n"))),
                None => s.push_str(&format!("  (more than {DEFAULT_CARET_CAP}, not listed)\n")),
            }
            s
        }
        Format::Dot => bail!("group has no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(0)
}

/// `λ^n = r_1 λ^{n-1} + ... + r_n`, zero terms dropped.
fn reciprocal_text(rel: &[BigUint]) -> String {
    let n = rel.len();
    let terms: Vec<String> = rel
        .iter()
        .enumerate()
        .filter(|(_, r)| **r != BigUint::ZERO)
        .map(|(i, r)| {
            let e = n - 1 - i;
            let pow = match e {
                0 => String::new(),
                1 => "λ".into(),
                _ => format!("λ^{e}"),
            };
            match (r == &BigUint::from(1u8), e) {
                (true, 0) => "1".into(),
                (true, _) => pow,
                (false, _) => format!("{r}{pow}"),
            }
        })
        .collect();
    let lhs = if n == 1 { "λ".to_string() } else { format!("λ^{n}") };
    format!("{lhs} = {}", terms.join(" + "))
}

fn carets(coeffs: &[String], cap: usize, output: &Output) -> Result<u8> {
    let ctx = context(coeffs)?;
    let shapes: Vec<String> = enumerate_carets(&ctx, cap)?.iter().map(|c| c.to_string()).collect();
    let content = match output.format(Format::Text) {
        Format::Json => to_pretty(&json!(shapes)),
        Format::Text => shapes.join("\n"),
        Format::Dot => bail!("carets has no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(0)
}

fn obstruct(coeffs: &[String], vector: &[String], max_n: usize, output: &Output) -> Result<u8> {
    let ctx = context(coeffs)?;
    let v = vector
        .iter()
        .map(|c| BigInt::from_str(c).with_context(|| format!("vector entry {c:?} is not an integer")))
        .collect::<Result<Vec<_>>>()?;
    let cert = decide_nonneg(&ctx, &CoeffVector(v), max_n)?;
    let content = match output.format(Format::Json) {
        Format::Json => to_pretty(&cert.to_json()),
        Format::Text => certificate_text(&cert),
        Format::Dot => bail!("certificates have no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(match cert.kind {
        CertificateKind::Witness { .. } => EXIT_WITNESS,
        CertificateKind::Impossible(_) => EXIT_IMPOSSIBLE,
        CertificateKind::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    })
}

fn ints(v: &CoeffVector) -> String {
    v.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn certificate_text(cert: &Certificate) -> String {
    match &cert.kind {
        CertificateKind::Witness { n, result } => format!("witness: A^{n} p = [{}]", ints(result)),
        CertificateKind::Impossible(c) => format!(
            "impossible: split at N={}, supports repeat with period {} from N={}",
            c.split_at, c.cycle_length, c.cycle_start
        ),
        CertificateKind::Inconclusive { bound } => format!("inconclusive: no decision up to N={bound}"),
    }
}

fn verify_cert(file: &Path) -> Result<u8> {
    let cert = Certificate::from_json(&read_json(file)?)?;
    if verify_certificate(&cert.context, &cert.vector, &cert) {
        println!("valid {}", cert.kind_name());
        Ok(0)
    } else {
        println!("invalid {}", cert.kind_name());
        Ok(EXIT_FAILED)
    }
}

fn load_map(path: &Path) -> Result<PlMap> {
    Ok(PlMap::from_json(&read_json(path)?)?)
}

fn emit_map(f: &PlMap, output: &Output) -> Result<u8> {
    let content = match output.format(Format::Json) {
        Format::Json => to_pretty(&f.to_json()),
        Format::Text => f.to_string(),
        Format::Dot => bail!("maps have no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(0)
}

/// `p/q` or comma-separated power-basis coordinates.
fn parse_point(ctx: &Ctx, s: &str) -> Result<FieldElem> {
    let coords: Vec<Value> = s.split(',').map(|c| Value::String(c.trim().to_string())).collect();
    Ok(fmtjson::parse_field_coords(ctx, &Value::Array(coords))?)
}

fn plmap(op: PlmapOp) -> Result<u8> {
    match op {
        PlmapOp::Compose { f, g, output } => emit_map(&load_map(&f)?.compose(&load_map(&g)?)?, &output),
        PlmapOp::Invert { f, output } => emit_map(&load_map(&f)?.invert(), &output),
        PlmapOp::Eval { f, x, output } => {
            let f = load_map(&f)?;
            let y = f.eval(&parse_point(f.context(), &x)?)?;
            let content = match output.format(Format::Text) {
                Format::Json => to_pretty(&fmtjson::field(&y)),
                Format::Text => y.to_string(),
                Format::Dot => bail!("points have no DOT form"),
            };
            emit(output.path(), &content)?;
            Ok(0)
        }
        PlmapOp::Validate { f, target, output } => {
            let f = load_map(&f)?;
            let target = match target {
                Some(c) => context(&c)?,
                None => f.context().clone(),
            };
            let report = validate_membership(&f, &target)?;
            let content = match output.format(Format::Text) {
                Format::Json => to_pretty(&report_json(&report)),
                Format::Text => report_text(&report),
                Format::Dot => bail!("reports have no DOT form"),
            };
            emit(output.path(), &content)?;
            Ok(if report.verdict { 0 } else { EXIT_FAILED })
        }
    }
}

fn oracle_text(o: &SubringOracle) -> String {
    match o {
        SubringOracle::Adic { n } => format!("Z[1/{n}]"),
        SubringOracle::IntegerBasis => "integer power-basis coordinates".into(),
    }
}

fn report_json(r: &MembershipReport) -> Value {
    json!({
        "oracle": oracle_text(&r.oracle),
        "power": r.power.to_string(),
        "slopes": r.slopes.iter().map(|s| json!({
            "slope": fmtjson::field_coords(&s.slope),
            "exponent": s.exponent.map(|k| k.to_string()),
        })).collect::<Vec<_>>(),
        "slopes_ok": r.slopes_ok,
        "breakpoints": r.breakpoints.iter().map(|b| json!({
            "x": fmtjson::field_coords(&b.x),
            "y": fmtjson::field_coords(&b.y),
            "x_ok": b.x_ok,
            "y_ok": b.y_ok,
        })).collect::<Vec<_>>(),
        "breakpoints_ok": r.breakpoints_ok,
        "offending": r.offending.iter().map(fmtjson::field_coords).collect::<Vec<_>>(),
        "verdict": r.verdict,
    })
}

fn report_text(r: &MembershipReport) -> String {
    let yes = |b: bool| if b { "ok" } else { "FAIL" };
    let mut s = format!("oracle       {}\nslopes       {}\n", oracle_text(&r.oracle), yes(r.slopes_ok));
    for c in &r.slopes {
        let e = c.exponent.map_or("none".to_string(), |k| k.to_string());
        s.push_str(&format!("  {}  exponent {e}\n", c.slope));
    }
    s.push_str(&format!("breakpoints  {}\n", yes(r.breakpoints_ok)));
    for b in &r.breakpoints {
        s.push_str(&format!("  ({}, {})  {} {}\n", b.x, b.y, yes(b.x_ok), yes(b.y_ok)));
    }
    for x in &r.offending {
        s.push_str(&format!("offending    {x}\n"));
    }
    s.push_str(&format!("verdict      {}", if r.verdict { "member" } else { "not a member" }));
    s
}

fn load_pair(path: &Path) -> Result<TreePair> {
    Ok(TreePair::from_json(&read_json(path)?)?)
}

fn emit_pair(p: &TreePair, output: &Output) -> Result<u8> {
    let content = match output.format(Format::Json) {
        Format::Json => to_pretty(&p.to_json()),
        Format::Dot => p.to_dot("treepair"),
        Format::Text => p.to_string(),
    };
    emit(output.path(), &content)?;
    Ok(0)
}

fn treepair(op: TreepairOp) -> Result<u8> {
    match op {
        TreepairOp::New { coeffs, left, right, output } => {
            emit_pair(&TreePair::parse(&context(&coeffs)?, &left, &right)?, &output)
        }
        TreepairOp::Compose { a, b, budget, output } => {
            emit_pair(&compose_pairs(&load_pair(&a)?, &load_pair(&b)?, budget)?, &output)
        }
        TreepairOp::Reduce { a, output } => emit_pair(&reduce(&load_pair(&a)?), &output),
        TreepairOp::Equiv { a, b } => {
            let same = equivalent(&load_pair(&a)?, &load_pair(&b)?)?;
            println!("{}", if same { "equivalent" } else { "not equivalent" });
            Ok(if same { 0 } else { EXIT_FAILED })
        }
        TreepairOp::Render { a, output } => {
            let p = load_pair(&a)?;
            let content = match output.format(Format::Dot) {
                Format::Dot => p.to_dot("treepair"),
                Format::Json => to_pretty(&p.to_json()),
                Format::Text => {
                    let depths = |d: Vec<u32>| d.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                    format!(
                        "left   {}\nright  {}\ndepths {} -> {}",
                        p.left(),
                        p.right(),
                        depths(p.left().leaf_depths()),
                        depths(p.right().leaf_depths())
                    )
                }
            };
            emit(output.path(), &content)?;
            Ok(0)
        }
        TreepairOp::ToPlmap { a, output } => emit_map(&load_pair(&a)?.to_plmap(), &output),
    }
}

fn presentation(a: u64, b: u64, max_index: u32, check: bool, output: &Output) -> Result<u8> {
    let rels = emit_presentation(a, b, max_index)?;
    let kind = |k: RelationKind| match k {
        RelationKind::Conjugation => "conjugation",
        RelationKind::Caret => "caret",
    };
    if !check {
        let content = match output.format(Format::Text) {
            Format::Json => to_pretty(&json!(rels
                .iter()
                .map(|r| json!({ "kind": kind(r.kind), "relation": r.to_string() }))
                .collect::<Vec<_>>())),
            Format::Text => rels.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
            Format::Dot => bail!("relations have no DOT form"),
        };
        emit(output.path(), &content)?;
        return Ok(0);
    }
    if (a, b) != (1, 1) {
        bail!("relations can be checked only for a = b = 1");
    }
    let report = check_relations(&rels);
    let convention = match report.convention() {
        Some(c) => format!("{c:?}"),
        None => "none".into(),
    };
    let content = match output.format(Format::Text) {
        Format::Json => to_pretty(&json!({
            "relations": report.checks.iter().map(|c| json!({
                "kind": kind(c.relation.kind),
                "relation": c.relation.to_string(),
                "left_to_right": c.holds_left_to_right,
                "right_to_left": c.holds_right_to_left,
            })).collect::<Vec<_>>(),
            "convention": convention,
        })),
        Format::Text => {
            let mark = |b: bool| if b { "holds" } else { "fails" };
            let mut s: String = report
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "{:<24} left-to-right {}  right-to-left {}\n",
                        c.relation.to_string(),
                        mark(c.holds_left_to_right),
                        mark(c.holds_right_to_left)
                    )
                })
                .collect();
            s.push_str(&format!("convention {convention}"));
            s
        }
        Format::Dot => bail!("relations have no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(if report.convention().is_some() { 0 } else { EXIT_FAILED })
}

fn cells(word: &str) -> Result<Vec<Cell>> {
    word.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'S' => Ok(Cell::Short),
            'L' => Ok(Cell::Long),
            'R' => Ok(Cell::Rest),
            _ => bail!("cell {c:?} is not one of S, L, R"),
        })
        .collect()
}

fn counterexample(a: u64, b: u64, domain: Option<&str>, codomain: Option<&str>, output: &Output) -> Result<u8> {
    let mut arr = Arrangement::standard(a, b);
    if let Some(d) = domain {
        arr.domain = cells(d)?;
    }
    if let Some(c) = codomain {
        arr.codomain = cells(c)?;
    }
    let f = counterexample_map(a, b, &arr)?;
    let target = validate_subdivision_u64(&[b, a])?;
    let report = validate_membership(&f, &target)?;
    let content = match output.format(Format::Json) {
        Format::Json => to_pretty(&json!({ "map": f.to_json(), "membership": report_json(&report) })),
        Format::Text => format!("map          {f}\n{}", report_text(&report)),
        Format::Dot => bail!("maps have no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(0)
}

fn verify_paper(max_n: usize, corrupt_matrix: bool, output: &Output) -> Result<u8> {
    let results = run_all(&AcceptanceConfig { max_n, corrupt_matrix });
    let passed = results.iter().filter(|r| r.passed).count();
    let content = match output.format(Format::Text) {
        Format::Json => to_pretty(&json!(results
            .iter()
            .map(|r| json!({
                "criterion": r.number.to_string(),
                "title": r.title,
                "passed": r.passed,
                "detail": r.detail,
            }))
            .collect::<Vec<_>>())),
        Format::Text => {
            let mut s: String = results.iter().map(|r| format!("{r}\n")).collect();
            s.push_str(&format!("{passed} of {} criteria pass", results.len()));
            s
        }
        Format::Dot => bail!("the report has no DOT form"),
    };
    emit(output.path(), &content)?;
    Ok(if passed == results.len() { 0 } else { EXIT_FAILED })
}
