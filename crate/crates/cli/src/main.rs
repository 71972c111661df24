use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use polyfock::io::{complex_array_json, indices_json, read_point_pairs, write_text, PointRepr, SymbolFile};
use polyfock::kernels::{kernel_f, kernel_g, kernel_h, kernel_s, kernel_true_poly, ComplexPoint, KernelSpec};
use polyfock::multiindex::{IndexTable, MultiIndex};
use polyfock::spectral::{r_f_apply, r_f_kernel_image, FiberOrders, FiberVector, XiGrid};
use polyfock::symbols::{gamma_direct, gamma_toeplitz, parse_symbol, sigma_direct, sigma_from_gamma, SymbolMatrix};
use polyfock::transforms::kernel_section_f;
use polyfock::verify::{ball_point, run_suite, SuiteConfig, SuiteSelection};
use polyfock::Error;

#[derive(Parser)]
#[command(name = "polyfock", version, about = "Kernels, transforms and symbols of polyanalytic Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ordered index table J_{n,m}.
    Indices(IndicesArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Evaluate reproducing kernels.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Fiber components of a kernel section at given frequencies.
    Fiber(FiberArgs),
    /// Matrix symbols of Toeplitz operators with vertical symbols.
    Symbol(SymbolArgs),
    /// Write any of the above to a file.
    Emit(EmitArgs),
}

#[derive(Args, Clone)]
struct IndicesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// laguerre, kernel-basis, reproducing, sum-products, fourier-laguerre,
    /// fourier-kernel, structure or all
    suite: String,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    p_max: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum KernelCommand {
    /// Print `K_z(w)` for every pair as `[re, im]`.
    Eval(KernelArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    #[value(name = "F")]
    F,
    #[value(name = "H")]
    H,
    #[value(name = "G")]
    G,
    #[value(name = "S")]
    S,
    #[value(name = "true")]
    True,
}

#[derive(Args, Clone)]
struct KernelArgs {
    #[arg(long, value_enum)]
    space: Space,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    alpha: Option<f64>,
    /// Gaussian-kernel parameter; implies alpha = 2 sigma^2
    #[arg(long)]
    sigma: Option<f64>,
    /// True-poly index, comma separated, entries ≥ 1
    #[arg(long)]
    beta: Option<String>,
    /// JSON array of {z, w} pairs
    #[arg(long, conflicts_with = "samples")]
    points: Option<PathBuf>,
    /// Number of random pairs drawn from --seed instead of a points file
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FiberRoute {
    Quadrature,
    Closed,
}

#[derive(Args, Clone)]
struct FiberArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// One frequency point, comma separated
    #[arg(long, conflicts_with = "xi_grid", allow_hyphen_values = true)]
    xi: Option<String>,
    /// lo:hi:count per axis
    #[arg(long, allow_hyphen_values = true)]
    xi_grid: Option<XiGrid>,
    /// kernel:iy=y1,… or kernel:x=x1,…;y=y1,…
    #[arg(long, allow_hyphen_values = true)]
    input: String,
    #[arg(long, value_enum, default_value_t = FiberRoute::Quadrature)]
    route: FiberRoute,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SymbolKind {
    Gamma,
    Sigma,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SymbolRoute {
    Toeplitz,
    Direct,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct SymbolArgs {
    #[arg(value_enum)]
    kind: SymbolKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// const:c, poly:c0,c1,…, gauss:center,width,c0,…, sign:axis or box:lo,hi
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    #[arg(long, default_value_t = XiGrid::default(), allow_hyphen_values = true)]
    xi_grid: XiGrid,
    #[arg(long, value_enum, default_value_t = SymbolRoute::Toeplitz)]
    route: SymbolRoute,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmitArgs {
    #[command(subcommand)]
    kind: EmitKind,
}

#[derive(Subcommand)]
enum EmitKind {
    Indices(IndicesArgs),
    Kernel(KernelArgs),
    Fiber(FiberArgs),
    Symbol(SymbolArgs),
}

enum Failure {
    Verification,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => Ok(write_text(p, text)?),
        None => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::from(Error::from(e)))
}

fn run_indices(a: &IndicesArgs, out: Option<&Path>) -> Result<(), Failure> {
    let table = IndexTable::new(a.n, a.m)?;
    emit(out, &pretty(&indices_json(&table))?)
}

fn run_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let selection: SuiteSelection = a.suite.parse()?;
    let config = SuiteConfig {
        n_max: a.n_max,
        m_max: a.m_max,
        p_max: a.p_max,
        alpha: a.alpha,
        order: a.order,
        seed: a.seed,
    };
    let report = run_suite(selection, &config)?;
    emit(a.out.as_deref(), &pretty(&report)?)?;
    for c in report.failures() {
        eprintln!("FAIL {}: max_error {:e} > tolerance {:e}", c.id, c.max_error, c.tolerance);
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("bad number `{t}`: {e}"))))
        .collect()
}

fn kernel_pairs(a: &KernelArgs) -> Result<Vec<(ComplexPoint, ComplexPoint)>, Failure> {
    match (&a.points, a.samples) {
        (Some(p), _) => Ok(read_point_pairs(p)?),
        (None, Some(k)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            Ok((0..k)
                .map(|_| (ball_point(&mut rng, a.n, 1.0), ball_point(&mut rng, a.n, 1.0)))
                .collect())
        }
        (None, None) => Err(usage("kernel evaluation needs --points or --samples")),
    }
}

fn kernel_values(a: &KernelArgs, pairs: &[(ComplexPoint, ComplexPoint)]) -> Result<Vec<Complex64>, Failure> {
    let alpha = match (a.alpha, a.sigma) {
        (Some(al), Some(s)) => {
            // fails with the mismatch error unless α = 2σ²
            polyfock::transforms::SteinwartMap::new(&KernelSpec::new(a.n, a.m, al)?, s)?;
            al
        }
        (Some(al), None) => al,
        (None, Some(s)) => 2.0 * s * s,
        (None, None) => 1.0,
    };
    let spec = KernelSpec::new(a.n, a.m, alpha)?;
    let beta = match (&a.beta, a.space) {
        (Some(b), _) => Some(MultiIndex::new(
            b.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| usage(format!("bad beta `{t}`: {e}"))))
                .collect::<Result<_, _>>()?,
        )),
        (None, Space::True) => return Err(usage("--space true needs --beta")),
        (None, _) => None,
    };
    if a.space == Space::S && a.sigma.is_none() {
        return Err(usage("--space S needs --sigma"));
    }
    pairs
        .iter()
        .map(|(z, w)| {
            Ok(match a.space {
                Space::F => kernel_f(&spec, z, w)?,
                Space::H => kernel_h(a.n, a.m, z, w)?,
                Space::G => kernel_g(a.n, a.m, z, w)?,
                Space::S => kernel_s(a.n, a.m, a.sigma.unwrap_or(1.0), z, w)?,
                Space::True => kernel_true_poly(&spec, beta.as_ref().expect("checked above"), z, w)?,
            })
        })
        .collect()
}

fn run_kernel(a: &KernelArgs) -> Result<(), Failure> {
    let pairs = kernel_pairs(a)?;
    let values = kernel_values(a, &pairs)?;
    emit(a.out.as_deref(), &pretty(&complex_array_json(&values))?)
}

fn emit_kernel(a: &KernelArgs, out: &Path) -> Result<(), Failure> {
    let pairs = kernel_pairs(a)?;
    let values = kernel_values(a, &pairs)?;
    let pts: Vec<Value> = pairs
        .iter()
        .map(|(z, w)| json!({"z": PointRepr::from_point(z), "w": PointRepr::from_point(w)}))
        .collect();
    let doc = json!({
        "n": a.n,
        "m": a.m,
        "alpha": a.alpha,
        "sigma": a.sigma,
        "points": pts,
        "values": complex_array_json(&values),
    });
    emit(Some(out), &pretty(&doc)?)
}

enum FiberInput {
    Imaginary(Vec<f64>),
    Point(ComplexPoint),
}

fn parse_fiber_input(s: &str) -> Result<FiberInput, Failure> {
    let rest = s
        .strip_prefix("kernel:")
        .ok_or_else(|| usage(format!("unsupported input `{s}`; expected kernel:iy=… or kernel:x=…;y=…")))?;
    if let Some(y) = rest.strip_prefix("iy=") {
        return Ok(FiberInput::Imaginary(parse_list(y)?));
    }
    let (x, y) = rest
        .split_once(';')
        .and_then(|(x, y)| Some((x.strip_prefix("x=")?, y.strip_prefix("y=")?)))
        .ok_or_else(|| usage(format!("bad kernel input `{rest}`")))?;
    Ok(FiberInput::Point(ComplexPoint::from_split(parse_list(x)?, parse_list(y)?)?))
}

fn fiber_vectors(a: &FiberArgs) -> Result<Vec<FiberVector>, Failure> {
    let spec = KernelSpec::new(a.n, a.m, a.alpha)?;
    let xis: Vec<Vec<f64>> = match (&a.xi, a.xi_grid) {
        (Some(x), _) => vec![parse_list(x)?],
        (None, Some(g)) => g.points(a.n),
        (None, None) => return Err(usage("fiber needs --xi or --xi-grid")),
    };
    let input = parse_fiber_input(&a.input)?;
    let z = match &input {
        FiberInput::Imaginary(y) => ComplexPoint::imaginary(y.clone()),
        FiberInput::Point(p) => p.clone(),
    };
    let f = kernel_section_f(&spec, &z)?;
    let orders = a.order.map(FiberOrders::uniform);
    xis.iter()
        .map(|xi| match (a.route, &input) {
            (FiberRoute::Closed, FiberInput::Imaginary(y)) => Ok(r_f_kernel_image(&spec, y, xi)?),
            (FiberRoute::Closed, FiberInput::Point(_)) => {
                Err(usage("the closed route is available for kernel:iy=… inputs only"))
            }
            (FiberRoute::Quadrature, _) => Ok(r_f_apply(&spec, &f, xi, orders)?),
        })
        .collect()
}

fn run_fiber(a: &FiberArgs, out: Option<&Path>) -> Result<(), Failure> {
    let v = fiber_vectors(a)?;
    let text = if a.xi.is_some() { pretty(&v[0])? } else { pretty(&v)? };
    emit(out, &text)
}

fn symbol_matrices(a: &SymbolArgs) -> Result<(IndexTable, Vec<SymbolMatrix>), Failure> {
    let table = IndexTable::new(a.n, a.m)?;
    let g = parse_symbol(&a.g, a.n)?;
    let mats = a
        .xi_grid
        .points(a.n)
        .iter()
        .map(|xi| {
            Ok(match (a.kind, a.route) {
                (SymbolKind::Gamma, SymbolRoute::Toeplitz) => gamma_toeplitz(&table, &g, xi)?,
                (SymbolKind::Gamma, SymbolRoute::Direct) => gamma_direct(&table, &g, xi)?,
                (SymbolKind::Sigma, SymbolRoute::Toeplitz) => sigma_from_gamma(&table, &g, xi)?,
                (SymbolKind::Sigma, SymbolRoute::Direct) => sigma_direct(&table, &g, xi)?,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok((table, mats))
}

fn run_symbol(a: &SymbolArgs, out: Option<&Path>) -> Result<(), Failure> {
    let (table, mats) = symbol_matrices(a)?;
    let file = SymbolFile::new(&table, &mats)?;
    let text = match a.format {
        Format::Json => pretty(&file)?,
        Format::Csv => file.to_csv(),
    };
    emit(out, text.trim_end())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Indices(a) => run_indices(&a, a.out.as_deref()),
        Command::Verify(a) => run_verify(&a),
        Command::Kernel(KernelCommand::Eval(a)) => run_kernel(&a),
        Command::Fiber(a) => run_fiber(&a, a.out.as_deref()),
        Command::Symbol(a) => run_symbol(&a, a.out.as_deref()),
        Command::Emit(e) => {
            let need = |o: &Option<PathBuf>| o.clone().ok_or_else(|| usage("emit needs --out"));
            match e.kind {
                EmitKind::Indices(a) => run_indices(&a, Some(&need(&a.out)?)),
                EmitKind::Kernel(a) => emit_kernel(&a, &need(&a.out)?),
                EmitKind::Fiber(a) => run_fiber(&a, Some(&need(&a.out)?)),
                EmitKind::Symbol(a) => run_symbol(&a, Some(&need(&a.out)?)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
