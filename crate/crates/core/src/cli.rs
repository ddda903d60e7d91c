//! Command-line front end. Every command returns a [`CommandOutcome`];
//! the binary prints the report and exits with its status.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{
    builtin_script, derive_nonrationality, emit_realization_system, parse_script, pentagon11, pentagon9,
    run_construction, AbstractConfiguration, ConfigJson, RealizationJson,
};
use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, rational_root_test, rational_to_string, ExactText, OrderedField, Rational};
use crate::io::{AnyPolytope, AnyRealization, FieldSpec};
use crate::lawrence::{
    certify_lifting, collinearity_pattern, default_heights, infer_lines, lift_realization, matrix_from_json,
    recover_configuration, source_vectors, CertificateJson, FaceCertificate, LabeledPolytope, LawrenceLifting,
    LiftingJson,
};
use crate::surface::{
    build_pentagon_surface, default_s144, default_s48, export_obj, reference_gadget, verify_flat_convex, QuadMesh,
    TripleMode,
};

/// Exit status, report text and written files of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub status: i32,
    pub report: String,
    pub artifacts: Vec<PathBuf>,
}

impl CommandOutcome {
    fn failed(e: &Error) -> Self {
        let status = if e.is_usage() { 2 } else { 1 };
        Self { status, report: format!("error: {e}\n"), artifacts: Vec::new() }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "nonrational",
    version,
    about = "Exact constructions of non-rational configurations, polytopes and surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a construction script and derive its constraint and realization.
    Derive {
        /// Script file, or builtin:pentagon11 / builtin:pentagon9 / builtin:square-rational.
        script: String,
        /// Realization JSON to write.
        #[arg(long, default_value = "realization.json")]
        out: PathBuf,
    },
    /// Lawrence lifting of a realization.
    Lift {
        realization: PathBuf,
        #[arg(long, default_value = "lifting.json")]
        out: PathBuf,
        /// Lifting heights h1,h2 with 0 < h1 < h2.
        #[arg(long, value_parser = parse_heights)]
        heights: Option<(Rational, Rational)>,
        /// Expected field of the input.
        #[arg(long)]
        field: Option<String>,
    },
    /// Edge and facet certificates of a lifting.
    Certify {
        lifting: PathBuf,
        /// Configuration JSON naming the lines; inferred from the points otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "certificates.json")]
        out: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Recover the configuration from a labelled lifting.
    Recover {
        lifting: PathBuf,
        #[arg(long, default_value = "recovered.json")]
        out: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Build and verify a gadget or partial surface.
    Surface {
        target: SurfaceTarget,
        /// Writes <prefix>.json, <prefix>.obj and <prefix>.exact.json.
        #[arg(long, default_value = "surface")]
        out_prefix: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        triples: Triples,
        /// Decimal digits in the OBJ file.
        #[arg(long, default_value_t = 6)]
        precision: usize,
    },
    /// Polynomial system describing all realizations of a configuration.
    Emit {
        /// Configuration JSON, or builtin:pentagon11 / builtin:pentagon9.
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SurfaceTarget {
    Gadget,
    S48,
    S144,
    Pentagon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Triples {
    All,
    PerLine,
}

fn parse_heights(s: &str) -> std::result::Result<(Rational, Rational), String> {
    let (a, b) = s.split_once(',').ok_or("expected h1,h2")?;
    Ok((parse_rational(a.trim())?, parse_rational(b.trim())?))
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            CommandOutcome { status, report: e.to_string(), artifacts: Vec::new() }
        }
    }
}

pub fn execute(cmd: Command) -> CommandOutcome {
    let result = match cmd {
        Command::Derive { script, out } => cmd_derive(&script, &out),
        Command::Lift { realization, out, heights, field } => {
            cmd_lift(&realization, &out, heights.unwrap_or_else(default_heights), field.as_deref())
        }
        Command::Certify { lifting, config, out, field } => {
            cmd_certify(&lifting, config.as_deref(), &out, field.as_deref())
        }
        Command::Recover { lifting, out, field } => cmd_recover(&lifting, &out, field.as_deref()),
        Command::Surface { target, out_prefix, triples, precision } => {
            let mode = match triples {
                Triples::All => TripleMode::All,
                Triples::PerLine => TripleMode::PerLine,
            };
            cmd_surface(target, &out_prefix, mode, precision)
        }
        Command::Emit { config, out } => cmd_emit(&config, out.as_deref()),
    };
    result.unwrap_or_else(|e| CommandOutcome::failed(&e))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    artifacts.push(path.to_path_buf());
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn check_field(actual: &str, expected: Option<&str>) -> Result<()> {
    match expected {
        Some(want) if FieldSpec::parse(want)? != FieldSpec::parse(actual)? => {
            Err(Error::Invalid(format!("input field is {actual}, expected {want}")))
        }
        _ => Ok(()),
    }
}

fn load_script(source: &str) -> Result<String> {
    match source.strip_prefix("builtin:") {
        Some(name) => builtin_script(name)
            .map(str::to_string)
            .ok_or_else(|| Error::Invalid(format!("unknown builtin script {name}"))),
        None => read(Path::new(source)),
    }
}

pub fn cmd_derive(source: &str, out: &Path) -> Result<CommandOutcome> {
    let script = parse_script(&load_script(source)?)?;
    let construction = run_construction(&script)?;
    let mut report = format!("constraint: {}\n", construction.constraint.to_string_in("a"));
    let roots = if construction.constraint.is_zero() {
        Vec::new()
    } else {
        rational_root_test(&construction.constraint).map_err(Error::Invalid)?
    };
    if !roots.is_empty() {
        let list: Vec<String> = roots.iter().map(rational_to_string).collect();
        report.push_str(&format!("rational roots: {}\n", list.join(", ")));
        report.push_str(&format!("error: constraint has rational root {}\n", list[0]));
        return Ok(CommandOutcome { status: 1, report, artifacts: Vec::new() });
    }
    report.push_str("no rational roots\n");
    let cert = derive_nonrationality(&script)?;
    report.push_str(&format!("d={}\n", cert.radicand));
    report.push_str(&format!("root: a = {}\n", cert.root.to_exact_string()));
    report.push_str(&format!("verification: {}\n", cert.report.summary()));
    let mut artifacts = Vec::new();
    write(out, &to_json(&cert.realization.to_json()), &mut artifacts)?;
    report.push_str(&format!("wrote {}\n", out.display()));
    Ok(CommandOutcome { status: 0, report, artifacts })
}

fn lift_report<F: OrderedField + ExactText>(
    r: &crate::config::Realization<F>,
    heights: (Rational, Rational),
) -> Result<(LiftingJson, String)> {
    let l = lift_realization(r, heights)?;
    let m = l.matrix();
    let mut report = format!("lifting: {} rows, {} columns, rank {}\n", m.rows(), m.cols(), m.rank());
    report.push_str(&format!(
        "heights: {}, {}\n",
        rational_to_string(&l.heights().0),
        rational_to_string(&l.heights().1)
    ));
    if !l.is_stable() {
        report.push_str("warning: source configuration is not stable\n");
    }
    Ok((l.to_json(), report))
}

pub fn cmd_lift(
    input: &Path,
    out: &Path,
    heights: (Rational, Rational),
    field: Option<&str>,
) -> Result<CommandOutcome> {
    let j: RealizationJson = read_json(input)?;
    check_field(&j.field, field)?;
    let (lj, report) = match AnyRealization::from_json(&j)? {
        AnyRealization::Rational(r) => lift_report(&r, heights)?,
        AnyRealization::Quad(r) => lift_report(&r, heights)?,
    };
    let mut artifacts = Vec::new();
    write(out, &to_json(&lj), &mut artifacts)?;
    let report = format!("{report}wrote {}\n", out.display());
    Ok(CommandOutcome { status: 0, report, artifacts })
}

#[derive(Serialize)]
struct CertificatesJson {
    field: String,
    n: usize,
    dimension: usize,
    vertices: usize,
    edges: Vec<CertificateJson>,
    point_facets: Vec<CertificateJson>,
    line_facets: Vec<CertificateJson>,
    all_verified: bool,
}

fn certify_generic<F: OrderedField + ExactText>(
    ctx: &F::Ctx,
    j: &LiftingJson,
    lines: Option<Vec<Vec<usize>>>,
) -> Result<(CertificatesJson, String, Vec<String>)> {
    let (m, _) = matrix_from_json::<F>(ctx, j)?;
    let l = LawrenceLifting::from_matrix(m)?;
    let lines = lines.unwrap_or_else(|| infer_lines(l.points()));
    let set = certify_lifting(&l, &lines)?;
    let count = |cs: &[FaceCertificate<F>]| cs.iter().filter(|c| c.verified).count();
    let mut report = String::new();
    for (name, cs) in [("edge", &set.edges), ("point-facet", &set.point_facets), ("line-facet", &set.line_facets)] {
        report.push_str(&format!("{name} certificates: {}/{} verified\n", count(cs), cs.len()));
    }
    report.push_str(&format!("all verified: {}\n", set.all_verified()));
    let failures: Vec<String> =
        set.all().filter_map(|c| c.failure.as_ref().map(|f| format!("{}: {f}", c.kind.name()))).collect();
    let json = CertificatesJson {
        field: F::field_name(ctx),
        n: l.n(),
        dimension: l.n() + 2,
        vertices: 2 * l.n(),
        edges: set.edges.iter().map(FaceCertificate::to_json).collect(),
        point_facets: set.point_facets.iter().map(FaceCertificate::to_json).collect(),
        line_facets: set.line_facets.iter().map(FaceCertificate::to_json).collect(),
        all_verified: set.all_verified(),
    };
    Ok((json, report, failures))
}

pub fn cmd_certify(input: &Path, config: Option<&Path>, out: &Path, field: Option<&str>) -> Result<CommandOutcome> {
    let j: LiftingJson = read_json(input)?;
    check_field(&j.field, field)?;
    let lines = match config {
        Some(p) => {
            let c = AbstractConfiguration::from_json(&read_json::<ConfigJson>(p)?)?;
            if c.n() != j.n {
                return Err(Error::Invalid(format!("configuration has {} points, lifting has {}", c.n(), j.n)));
            }
            Some(c.lines().to_vec())
        }
        None => None,
    };
    let (json, mut report, failures) = match FieldSpec::parse(&j.field)? {
        FieldSpec::Rational => certify_generic::<Rational>(&(), &j, lines)?,
        FieldSpec::Quad(k) => certify_generic::<crate::exactnum::QuadExt>(&k, &j, lines)?,
    };
    let mut artifacts = Vec::new();
    write(out, &to_json(&json), &mut artifacts)?;
    for f in &failures {
        report.push_str(&format!("failed {f}\n"));
    }
    report.push_str(&format!("wrote {}\n", out.display()));
    Ok(CommandOutcome { status: if failures.is_empty() { 0 } else { 1 }, report, artifacts })
}

#[derive(Serialize)]
struct RecoveryJson {
    realization: RealizationJson,
    r_basis: Vec<Vec<String>>,
    collinear_triples: Vec<[usize; 3]>,
    round_trip: Option<bool>,
}

fn collinear_triples(pattern: &[bool], n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                if pattern[k] {
                    out.push([i + 1, j + 1, l + 1]);
                }
                k += 1;
            }
        }
    }
    out
}

fn recover_generic<F: OrderedField + ExactText>(
    ctx: &F::Ctx,
    p: &LabeledPolytope<F>,
    j: &LiftingJson,
) -> Result<(RecoveryJson, String)> {
    let rec = recover_configuration(p)?;
    let n = rec.vectors.len();
    let pattern = collinearity_pattern(&rec.vectors);
    // The source pattern is only known when the rows are a genuine lifting.
    let source = matrix_from_json::<F>(ctx, j)
        .ok()
        .and_then(|(m, _)| LawrenceLifting::from_matrix(m).ok())
        .map(|l| collinearity_pattern(&source_vectors(&l)));
    let round_trip = source.map(|s| s == pattern);
    let triples = collinear_triples(&pattern, n);
    let mut report = format!("R has dimension 3\nrecovered {n} points, {} collinear triples\n", triples.len());
    match round_trip {
        Some(true) => report.push_str("round trip: collinearity pattern matches\n"),
        Some(false) => report.push_str("round trip: collinearity pattern differs\n"),
        None => report.push_str("round trip: no source pattern\n"),
    }
    let json = RecoveryJson {
        realization: rec.realization()?.to_json(),
        r_basis: rec.r_basis.row_vecs().iter().map(|r| r.iter().map(ExactText::to_exact_string).collect()).collect(),
        collinear_triples: triples,
        round_trip,
    };
    Ok((json, report))
}

pub fn cmd_recover(input: &Path, out: &Path, field: Option<&str>) -> Result<CommandOutcome> {
    let j: LiftingJson = read_json(input)?;
    check_field(&j.field, field)?;
    let (json, mut report) = match AnyPolytope::from_json(&j)? {
        AnyPolytope::Rational(p) => recover_generic(&(), &p, &j)?,
        AnyPolytope::Quad(p) => {
            let ctx = *p.vertices.ctx();
            recover_generic(&ctx, &p, &j)?
        }
    };
    let mut artifacts = Vec::new();
    write(out, &to_json(&json), &mut artifacts)?;
    report.push_str(&format!("wrote {}\n", out.display()));
    let status = if json.round_trip == Some(false) { 1 } else { 0 };
    Ok(CommandOutcome { status, report, artifacts })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_mesh<F: OrderedField + ExactText>(
    m: &QuadMesh<F>,
    prefix: &Path,
    precision: usize,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let (obj, exact) = export_obj(m, precision);
    write(&with_suffix(prefix, ".json"), &to_json(&m.to_json()), artifacts)?;
    write(&with_suffix(prefix, ".obj"), &obj, artifacts)?;
    write(&with_suffix(prefix, ".exact.json"), &format!("{exact}\n"), artifacts)
}

/// Counts line, flat/convex line and overall verdict.
fn mesh_summary<F: OrderedField + ExactText>(m: &QuadMesh<F>) -> (String, String, bool) {
    let bad = verify_flat_convex(m).failures();
    let combinatorial = crate::surface::combinatorial_violations(m);
    let counts = format!("{} faces, {} vertices", m.faces().len(), m.vertices().len());
    let mut flat = format!("flat+convex: {}/{} faces", m.faces().len() - bad.len(), m.faces().len());
    for (f, s) in bad.iter().take(10) {
        flat.push_str(&format!("\nfailed face {}: {s:?}", f + 1));
    }
    if !combinatorial.is_empty() {
        flat.push_str(&format!("\n{} face pairs do not intersect nicely", combinatorial.len()));
    }
    (counts, flat, bad.is_empty() && combinatorial.is_empty())
}

pub fn cmd_surface(target: SurfaceTarget, prefix: &Path, mode: TripleMode, precision: usize) -> Result<CommandOutcome> {
    let mut artifacts = Vec::new();
    let verdict = |ok: bool, what: &str| format!("{what} {}", if ok { "OK" } else { "FAILED" });
    let (line, flat, ok) = match target {
        SurfaceTarget::Gadget => {
            let g = reference_gadget();
            let r = g.verify();
            write_mesh(&g.mesh, prefix, precision, &mut artifacts)?;
            let (counts, flat, ok) = mesh_summary(&g.mesh);
            let boundary = r.boundary == crate::projgeom::QuadStatus::FlatConvex;
            let b = if boundary { "boundary flat+convex" } else { "boundary FAILED" };
            (format!("{counts}, {b}"), flat, ok && r.all_ok())
        }
        SurfaceTarget::S48 => {
            let m = default_s48()?;
            let special: Vec<usize> = crate::surface::SPECIAL_LABELS.iter().filter_map(|t| m.tag(t)).collect();
            let plane = m.homogenized(&special).rank() == 3;
            write_mesh(&m, prefix, precision, &mut artifacts)?;
            let (counts, flat, ok) = mesh_summary(&m);
            (format!("{counts}, {}", verdict(plane, "special plane")), flat, ok && plane)
        }
        SurfaceTarget::S144 => {
            let m = default_s144()?;
            let abc: Vec<usize> = ["a", "b", "c"].iter().filter_map(|t| m.tag(t)).collect();
            let line = m.homogenized(&abc).rank() == 2;
            write_mesh(&m, prefix, precision, &mut artifacts)?;
            let (counts, flat, ok) = mesh_summary(&m);
            (format!("{counts}, {}", verdict(line, "anchor line")), flat, ok && line)
        }
        SurfaceTarget::Pentagon => {
            let m = build_pentagon_surface(mode)?;
            write_mesh(&m, prefix, precision, &mut artifacts)?;
            let (counts, flat, ok) = mesh_summary(&m);
            (
                format!(
                    "{counts}, field {}",
                    <crate::exactnum::QuadExt as crate::exactnum::Field>::field_name(m.ctx())
                ),
                flat,
                ok,
            )
        }
    };
    let mut report = format!("{line}\n{flat}\n");
    for a in &artifacts {
        report.push_str(&format!("wrote {}\n", a.display()));
    }
    Ok(CommandOutcome { status: if ok { 0 } else { 1 }, report, artifacts })
}

fn load_config(source: &str) -> Result<AbstractConfiguration> {
    match source.strip_prefix("builtin:") {
        Some("pentagon11" | "pentagon") => Ok(pentagon11()),
        Some("pentagon9") => Ok(pentagon9()),
        Some(name) => Err(Error::Invalid(format!("unknown builtin configuration {name}"))),
        None => AbstractConfiguration::from_json(&read_json(Path::new(source))?),
    }
}

pub fn cmd_emit(source: &str, out: Option<&Path>) -> Result<CommandOutcome> {
    let sys = emit_realization_system(&load_config(source)?);
    let mut artifacts = Vec::new();
    let report = match out {
        Some(p) => {
            write(p, &sys.text, &mut artifacts)?;
            format!(
                "{} equations, {} inequalities\nwrote {}\n",
                sys.equations.len(),
                sys.inequalities.len(),
                p.display()
            )
        }
        None => sys.text.clone(),
    };
    Ok(CommandOutcome { status: 0, report, artifacts })
}
