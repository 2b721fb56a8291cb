//! `gctet`: build, inspect, dualize and measure lightlike and ideal tetrahedra.
//!
//! Exit codes: 0 success, 2 bad input or domain error, 3 verification
//! failure or unreachable tolerance, 4 I/O error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod descriptor;
mod mesh;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gctet::tetrahedra::{dualize_tet, edge_data, recover_parameters, Vertices};
use gctet::verify;
use gctet::volumes::{self, VolumeReport};
use gctet::{Kind, Lambda, Tetrahedron};
use serde_json::{json, Value};

use descriptor::{pose_from_array, PoseArray, TetDescriptor};

#[derive(Debug)]
pub enum CliError {
    Lib(gctet::Error),
    /// Malformed input that never reached the library: (name, message).
    Input(&'static str, String),
    Verification(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Lib(gctet::Error::ToleranceNotReached { .. }) => 3,
            CliError::Lib(_) | CliError::Input(..) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Input(name, m) => format!("{name}: {m}"),
            CliError::Verification(m) => format!("VerificationFailure: {m}"),
            CliError::Io(m) => format!("IoError: {m}"),
        }
    }
}

impl From<gctet::Error> for CliError {
    fn from(e: gctet::Error) -> CliError {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Lightlike,
    Ideal,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Lightlike => Kind::Lightlike,
            KindArg::Ideal => Kind::Ideal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Parser, Debug)]
#[command(name = "gctet", version, about = "Lightlike and generalized ideal tetrahedra for Λ ∈ {-1, 0, 1}")]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative tolerance for `volume --oracle on`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Seed for `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TetArgs {
    /// Descriptor file ("-" for stdin). Alternative to the inline flags.
    descriptor: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<i64>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// JSON file with a 2×2 matrix of [re, im] pairs applied to the standard tetrahedron.
    #[arg(long)]
    pose: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a tetrahedron and write its descriptor.
    Build(TetArgs),
    /// Vertices, recovered parameters and edge data of a tetrahedron.
    Info(TetArgs),
    /// Closed-form volume with optional cubature oracle and power series.
    Volume {
        #[command(flatten)]
        tet: TetArgs,
        #[arg(long, value_enum, default_value = "off")]
        oracle: Switch,
        /// Power-series order K (lightlike only).
        #[arg(long)]
        series: Option<usize>,
    },
    /// Descriptor of the projectively dual tetrahedron.
    Dual(TetArgs),
    /// Klein-chart polygon mesh of the faces.
    Mesh {
        #[command(flatten)]
        tet: TetArgs,
        /// Each face is cut into density² triangles.
        #[arg(long, default_value_t = 8)]
        density: usize,
    },
    /// CSV of both volumes over an (α, β) grid.
    Plot {
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        /// Points per axis; the grid is α, β ∈ {max/N, 2max/N, …, max}.
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 1.5)]
        max: f64,
    },
    /// Run the invariant suites.
    Verify {
        /// Run a single suite.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn load_tet(a: &TetArgs) -> CliResult<Tetrahedron> {
    let inline = a.lambda.is_some() || a.kind.is_some() || a.alpha.is_some() || a.beta.is_some();
    if let Some(path) = &a.descriptor {
        if inline || a.pose.is_some() {
            return Err(CliError::Input("UsageError", "give a descriptor file or inline flags, not both".into()));
        }
        return Ok(TetDescriptor::parse(&read_input(path)?)?.tetrahedron()?);
    }
    let (Some(lambda), Some(kind), Some(alpha), Some(beta)) = (a.lambda, a.kind, a.alpha, a.beta) else {
        return Err(CliError::Input("UsageError", "need a descriptor file or all of --lambda, --kind, --alpha, --beta".into()));
    };
    let lam = Lambda::from_i64(lambda)?;
    let t = gctet::tetrahedra::from_angles(kind.into(), lam, alpha, beta)?;
    Ok(match &a.pose {
        Some(p) => {
            let arr: PoseArray =
                serde_json::from_str(&read_input(p)?).map_err(|e| CliError::Input("ParseError", format!("pose: {e}")))?;
            t.transformed(&pose_from_array(lam, &arr)?)
        }
        None => t,
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Input("UsageError", format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn vertex_vectors(t: &Tetrahedron) -> [[f64; 4]; 4] {
    match t.vertices() {
        Vertices::Lightlike(v) => std::array::from_fn(|i| v[i].vec()),
        Vertices::Ideal(v) => std::array::from_fn(|i| v[i].vec4()),
    }
}

fn summary(t: &Tetrahedron) -> String {
    let mut s = String::new();
    let (space, what) = match t.kind() {
        Kind::Lightlike => ("X", "length"),
        Kind::Ideal => ("Y", "angle"),
    };
    writeln!(s, "{} tetrahedron, Λ = {}, α = {}, β = {}, γ = {}", t.kind(), t.lambda(), t.alpha(), t.beta(), t.gamma()).unwrap();
    writeln!(s, "vertices in {space} (ℝ⁴ coordinates):").unwrap();
    for (i, v) in vertex_vectors(t).iter().enumerate() {
        writeln!(s, "  {} [{:.9}, {:.9}, {:.9}, {:.9}]", i + 1, v[0], v[1], v[2], v[3]).unwrap();
    }
    writeln!(s, "edge  {what:>12}  {:>27}  {:>12}  {:>12}  σ", "z", "|z|", "φ").unwrap();
    for e in edge_data(t) {
        let z = format!("{:.9} + ℓ {:.9}", e.z.re, e.z.im);
        writeln!(s, "{}{}    {:>12.9}  {z:>27}  {:>12.9}  {:>12.9}  {:+}", e.label.0, e.label.1, e.length, e.modulus, e.phi, e.sigma).unwrap();
    }
    s
}

fn cmd_build(cli: &Cli, a: &TetArgs) -> CliResult<()> {
    let t = load_tet(a)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            emit(&cli.out, &TetDescriptor::from_tet(&t).to_json())?;
            eprint!("{}", summary(&t));
            Ok(())
        }
        Format::Text => emit(&cli.out, &summary(&t)),
        f => Err(unsupported("build", f)),
    }
}

fn cmd_info(cli: &Cli, a: &TetArgs) -> CliResult<()> {
    let t = load_tet(a)?;
    let rec = recover_parameters(t.vertices(), t.lambda())?;
    let edges = edge_data(&t);
    match cli.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = summary(&t);
            writeln!(s, "recovered from vertices: α = {}, β = {}, labeling {:?}", rec.alpha, rec.beta, rec.perm.map(|i| i + 1)).unwrap();
            emit(&cli.out, &s)
        }
        Format::Json => {
            let v = json!({
                "descriptor": TetDescriptor::from_tet(&t),
                "gamma": t.gamma(),
                "vertices": vertex_vectors(&t),
                "recovered": {"alpha": rec.alpha, "beta": rec.beta, "labeling": rec.perm.map(|i| i + 1)},
                "edges": edges.iter().map(|e| json!({
                    "edge": [e.label.0, e.label.1],
                    "length": e.length,
                    "z": [e.z.re, e.z.im],
                    "modulus": e.modulus,
                    "phi": e.phi,
                    "sigma": e.sigma,
                })).collect::<Vec<_>>(),
            });
            emit(&cli.out, &json_text(&v))
        }
        Format::Csv => {
            let mut s = String::from("edge,length,z_re,z_im,modulus,phi,sigma\n");
            for e in edges {
                writeln!(s, "{}{},{:?},{:?},{:?},{:?},{:?},{}", e.label.0, e.label.1, e.length, e.z.re, e.z.im, e.modulus, e.phi, e.sigma).unwrap();
            }
            emit(&cli.out, &s)
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

fn volume_output(r: &VolumeReport, f: Format) -> String {
    match f {
        Format::Json => json_text(&json!({
            "kind": r.kind.to_string(),
            "lambda": r.lambda.sign(),
            "alpha": r.alpha,
            "beta": r.beta,
            "closed_form": r.closed_form,
            "oracle": r.oracle.map(|e| json!({"value": e.value, "error": e.error})),
            "series": r.series.map(|s| json!({"order": s.order, "value": s.value, "converges": s.converges})),
            "rel_discrepancy": r.rel_discrepancy,
        })),
        Format::Csv => format!(
            "kind,lambda,alpha,beta,closed_form,oracle,oracle_error,series_order,series,series_converges,rel_discrepancy\n{},{},{:?},{:?},{:?},{},{},{},{},{},{}\n",
            r.kind,
            r.lambda,
            r.alpha,
            r.beta,
            r.closed_form,
            opt(r.oracle.map(|e| e.value)),
            opt(r.oracle.map(|e| e.error)),
            r.series.map(|s| s.order.to_string()).unwrap_or_default(),
            opt(r.series.map(|s| s.value)),
            r.series.map(|s| s.converges.to_string()).unwrap_or_default(),
            opt(r.rel_discrepancy),
        ),
        Format::Text => {
            let mut s = format!("{} Λ = {} α = {} β = {}\nclosed form      {:.15}\n", r.kind, r.lambda, r.alpha, r.beta, r.closed_form);
            if let Some(e) = r.oracle {
                writeln!(s, "cubature oracle  {:.15} ± {:.1e}", e.value, e.error).unwrap();
            }
            if let Some(d) = r.rel_discrepancy {
                writeln!(s, "rel discrepancy  {d:.3e}").unwrap();
            }
            if let Some(v) = r.series {
                let note = if v.converges { "" } else { " (outside the disc of convergence)" };
                writeln!(s, "series K={:<6}  {:.15}{note}", v.order, v.value).unwrap();
            }
            s
        }
    }
}

fn cmd_volume(cli: &Cli, a: &TetArgs, oracle: Switch, series: Option<usize>) -> CliResult<()> {
    let t = load_tet(a)?;
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(gctet::Error::DomainError(format!("--tol must be positive, got {}", cli.tol)).into());
    }
    // the cubature runs three digits tighter than the reported tolerance
    let oracle_tol = (oracle == Switch::On).then(|| (cli.tol * 1e-3).max(1e-10));
    let r = volumes::volume_report(t.kind(), t.lambda(), t.alpha(), t.beta(), oracle_tol, series)?;
    emit(&cli.out, &volume_output(&r, cli.format.unwrap_or(Format::Json)))?;
    if let Some(s) = r.series {
        if !s.converges {
            eprintln!("ConvergenceWarning: α + β is outside the disc of convergence of the series");
        }
    }
    match r.rel_discrepancy {
        Some(d) if !(d <= cli.tol) => Err(CliError::Verification(format!("relative discrepancy {d:e} exceeds --tol {}", cli.tol))),
        _ => Ok(()),
    }
}

fn cmd_dual(cli: &Cli, a: &TetArgs) -> CliResult<()> {
    let t = load_tet(a)?;
    let d = dualize_tet(&t)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => emit(&cli.out, &TetDescriptor::from_tet(&d).to_json()),
        Format::Text => emit(&cli.out, &summary(&d)),
        f => Err(unsupported("dual", f)),
    }
}

fn cmd_mesh(cli: &Cli, a: &TetArgs, density: usize) -> CliResult<()> {
    if let Some(f) = cli.format.filter(|f| *f != Format::Text) {
        return Err(unsupported("mesh", f));
    }
    let t = load_tet(a)?;
    emit(&cli.out, &mesh::mesh(&t, density)?)
}

fn cmd_plot(cli: &Cli, lambda: i64, grid: usize, max: f64) -> CliResult<()> {
    let lam = Lambda::from_i64(lambda)?;
    if grid == 0 {
        return Err(gctet::Error::DomainError("--grid must be at least 1".into()).into());
    }
    if !(max > 0.0 && max.is_finite()) || (lam == Lambda::Pos && 2.0 * max >= std::f64::consts::PI) {
        return Err(gctet::Error::DomainError(format!("--max {max} is outside the admissible range for Λ = {lam}")).into());
    }
    let mut rows = Vec::with_capacity(grid * grid);
    for j in 1..=grid {
        let b = max * j as f64 / grid as f64;
        for i in 1..=grid {
            let a = max * i as f64 / grid as f64;
            rows.push((a, b, volumes::lightlike_volume(lam, a, b)?, volumes::ideal_volume(lam, a, b)?));
        }
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("alpha,beta,lightlike_volume,ideal_volume\n");
            for (a, b, l, i) in rows {
                writeln!(s, "{a:?},{b:?},{l:?},{i:?}").unwrap();
            }
            s
        }
        Format::Json => json_text(&json!({
            "lambda": lam.sign(),
            "rows": rows.iter().map(|&(a, b, l, i)| json!({"alpha": a, "beta": b, "lightlike_volume": l, "ideal_volume": i})).collect::<Vec<_>>(),
        })),
        f => return Err(unsupported("plot", f)),
    };
    emit(&cli.out, &text)
}

fn cmd_verify(cli: &Cli, suite: &Option<String>) -> CliResult<()> {
    let reports = match suite {
        Some(name) => vec![verify::run_suite(name, cli.seed)
            .ok_or_else(|| CliError::Input("UsageError", format!("unknown suite {name:?}; known: {}", verify::SUITES.join(", "))))?],
        None => verify::run_suites(cli.seed),
    };
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                writeln!(s, "{r}").unwrap();
                for f in &r.failures {
                    writeln!(s, "    {f}").unwrap();
                }
            }
            s
        }
        Format::Json => json_text(&json!({
            "seed": cli.seed,
            "suites": reports.iter().map(|r| json!({
                "name": r.name,
                "passed": r.passed(),
                "checks": r.checks,
                "failed": r.failed,
                "worst_ratio": r.worst_ratio,
                "failures": r.failures,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("suite,passed,checks,failed,worst_ratio\n");
            for r in &reports {
                writeln!(s, "{},{},{},{},{:?}", r.name, r.passed(), r.checks, r.failed, r.worst_ratio).unwrap();
            }
            s
        }
    };
    emit(&cli.out, &text)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("failed suites: {}", failed.join(", "))))
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Build(a) => cmd_build(cli, a),
        Command::Info(a) => cmd_info(cli, a),
        Command::Volume { tet, oracle, series } => cmd_volume(cli, tet, *oracle, *series),
        Command::Dual(a) => cmd_dual(cli, a),
        Command::Mesh { tet, density } => cmd_mesh(cli, tet, *density),
        Command::Plot { lambda, grid, max } => cmd_plot(cli, *lambda, *grid, *max),
        Command::Verify { suite } => cmd_verify(cli, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
