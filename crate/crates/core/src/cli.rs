//! Command-line front end. `run` parses arguments, executes one command and
//! returns the process exit code.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::convexfn::{guarded_min, guarded_min_max_affine, inf_convolve, pointwise_max, ConeRestriction, Conjugate};
use crate::decompose::{
    dual_decompose, dual_decompose_via_conjugate, homogeneous_components_with, polarize, polynomial_fit,
    vandermonde_coeffs_with, verify_homogeneity, component_oracle, NodeScheme,
};
use crate::error::Error;
use crate::geometry::Polyhedron;
use crate::harness::{
    coercive_divergence_demo, continuity_suite, growth_demo, inclusion_exclusion_suite, valuation_identity_suite,
    SmoothTarget, SuiteReport, CONTINUITY_TOLERANCE, INCLUSION_EXCLUSION_TOLERANCE, VALUATION_TOLERANCE,
};
use crate::hessian::{duality_check, hessian_measure, ps_volume_mc, ExponentSign, Window};
use crate::io::{
    fmt_f64, oracle_on_cell_pa, oracle_on_max_affine, parse_box, parse_json, parse_point, parse_points, read_text,
    to_json_string, weight, write_text, AnyFunction, IoFailure,
};
use crate::repro::{run_all, run_criterion, DEFAULT_SEED};
use crate::valuations::{body_valuation, cylinder_witness, TestFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_SUITE: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug, Parser, Serialize)]
#[command(name = "epival", version, about = "Valuations on piecewise-affine convex functions")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Also write the parsed run configuration to this path.
    #[arg(long, global = true)]
    pub dump_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Function algebra.
    #[command(subcommand, name = "fn")]
    Func(FnCommand),
    /// Valuation evaluation.
    #[command(subcommand)]
    Val(ValCommand),
    /// Hessian measures.
    #[command(subcommand)]
    Hess(HessCommand),
    /// Homogeneous decomposition and mixed valuations.
    #[command(subcommand)]
    Decomp(DecompCommand),
    /// Property suites and demonstrations.
    #[command(subcommand)]
    Suite(SuiteCommand),
    /// Reproduce an acceptance criterion (1..=13) or `all`.
    Repro {
        criterion: String,
        #[arg(long, env = "EPIVAL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct Output {
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum FnCommand {
    /// Legendre conjugate.
    Conjugate {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Value at a point.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// `lambda u` or, with `--epi`, the epi-multiple `lambda □ u`.
    Scale {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        epi: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Weighted inf-convolution of functions with bounded domain.
    Infconv {
        #[arg(long = "in", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Pointwise maximum.
    Max {
        #[arg(long = "in", num_args = 2, required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Pointwise minimum; fails when it is not convex.
    Min {
        #[arg(long = "in", num_args = 2, required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Subdifferential at a point.
    Subdiff {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ValCommand {
    /// Oracle value on a function (bounded domain, or finite for dual oracles).
    Eval {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long = "fn")]
        function: PathBuf,
    },
    /// `Z(<y, .> + I_K)` for the hull `K` of the given vertices.
    Body {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Vertices `x,y;x,y;...`.
        #[arg(long, allow_hyphen_values = true)]
        vertices: String,
    },
    /// Linear-plus-cylinder function on which the weight's valuation is `±κ_{n-1}`.
    Cylinder {
        #[arg(long, default_value = "")]
        zeta: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct WindowArgs {
    /// Domain box `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Gradient box `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
}

impl WindowArgs {
    fn window(&self) -> crate::Result<Window> {
        Window::new(parse_box(&self.b)?, parse_box(&self.c)?)
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum HessCommand {
    /// Hessian measures `Θ_0..Θ_n` of a window.
    Measure {
        #[arg(long = "fn")]
        function: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Monte-Carlo volume of the displaced graph against the polynomial.
    Mc {
        #[arg(long = "fn")]
        function: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, env = "EPIVAL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Measures of a finite function against those of its conjugate.
    Duality {
        #[arg(long = "fn")]
        function: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum SchemeArg {
    Integer,
    Chebyshev,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum DecompCommand {
    /// Homogeneous components `Z_0(u)..Z_n(u)`.
    Run {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "integer")]
        scheme: SchemeArg,
        /// Scaling factors for the homogeneity check.
        #[arg(long, default_value = "0.5,1,2,3")]
        lambdas: String,
    },
    /// Components of a dual oracle on a finite function, by both routes.
    Dual {
        #[arg(long, default_value = "dual-zeta")]
        oracle: String,
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Mixed value `Z̄(u_1, ..., u_m)`.
    Polarize {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        /// Comma-separated function paths.
        #[arg(long)]
        fns: String,
    },
    /// Polynomial in the epi-multiples of the arguments.
    Fit {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long)]
        fns: String,
        #[arg(long, default_value = "0.5,1,1.5,2")]
        lambdas: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum SignArg {
    Displayed,
    Literal,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum SuiteCommand {
    /// Valuation identity on seeded lattice pairs.
    Valuation {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, env = "EPIVAL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = VALUATION_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Inclusion-exclusion over families of `m` functions.
    Inclexcl {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, env = "EPIVAL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = INCLUSION_EXCLUSION_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Values along approximants of `|x|^2/2` on `[-1, 1]`.
    Continuity {
        #[arg(long, default_value = "zeta")]
        oracle: String,
        #[arg(long, default_value = "4,8,16,32,64")]
        probes: String,
        #[arg(long, default_value_t = CONTINUITY_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Growth of the valuation on truncations of a linear function on a cone.
    Coercive {
        #[arg(long, default_value = "")]
        zeta: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Cone rays `x,y;x,y`.
        #[arg(long, allow_hyphen_values = true)]
        rays: String,
        #[arg(long, default_value = "1,2,4,8,16")]
        radii: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Growth of the non-invariant example along `λ |x|^2 / 2`.
    Growth {
        /// Weight JSON; the built-in bump when absent.
        #[arg(long)]
        eta: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "0,1,2,3,4,5,6")]
        lambdas: String,
        #[arg(long, value_enum, default_value = "displayed")]
        sign: SignArg,
        #[arg(long, default_value_t = 1.0 / 32.0)]
        h: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionUnsupported(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidInput(_)
            | Error::ArityMismatch(_)
            | Error::NegativeScale(_)
            | Error::UnboundedWindow
            | Error::EmptyInput
            | Error::ZeroWeight
            | Error::SupportExceedsGrid
            | Error::OutsideDomain => EXIT_VALIDATION,
            Error::DegenerateInput(_)
            | Error::Unbounded
            | Error::EmptyDomain
            | Error::RankDeficient(_)
            | Error::RetryExhausted(_)
            | Error::DegreeTooLarge(_)
            | Error::NotConvex(_)
            | Error::OracleFailure(_) => EXIT_NUMERIC,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<IoFailure> for CliError {
    fn from(e: IoFailure) -> Self {
        CliError { code: EXIT_IO, message: e.0 }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_fn(path: &Path) -> CliResult<AnyFunction> {
    Ok(AnyFunction::parse(&read_text(path)?)?)
}

fn file_reader(path: &str) -> crate::Result<String> {
    read_text(Path::new(path)).map_err(|e| Error::InvalidInput(e.0))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => Ok(write_text(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult<()> {
    emit(out, &to_json_string(value)?)
}

fn list(s: &str) -> crate::Result<Vec<f64>> {
    parse_point(s)
}

fn counts(s: &str) -> crate::Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidInput(format!("not a count: {t:?}"))))
        .collect()
}

fn cell_functions(fns: &str) -> CliResult<Vec<crate::convexfn::CellPA>> {
    fns.split(',')
        .map(|p| Ok(read_fn(Path::new(p.trim()))?.into_cell_pa()?))
        .collect()
}

/// Parses `args` and runs the command, printing errors to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            log::warn!("worker pool already configured: {e}");
        }
    }
    let result = (|| -> CliResult<i32> {
        if let Some(path) = &cli.dump_config {
            write_text(path, &to_json_string(&cli)?)?;
        }
        execute(&cli.command)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn execute(cmd: &Command) -> CliResult<i32> {
    match cmd {
        Command::Func(c) => func(c),
        Command::Val(c) => val(c),
        Command::Hess(c) => hess(c),
        Command::Decomp(c) => decomp(c),
        Command::Suite(c) => suite(c),
        Command::Repro { criterion, seed, out } => repro(criterion, *seed, out),
    }
}

fn func(cmd: &FnCommand) -> CliResult<i32> {
    match cmd {
        FnCommand::Conjugate { input, out } => {
            let f = match read_fn(input)? {
                AnyFunction::MaxAffine(v) => AnyFunction::CellPA(v.conjugate()?),
                AnyFunction::CellPA(u) => AnyFunction::MaxAffine(u.conjugate()?),
            };
            emit(&out.out, &f.to_json()?)?;
        }
        FnCommand::Eval { input, at } => {
            let x = parse_point(at)?;
            let f = read_fn(input)?;
            if x.len() != f.dim() {
                return Err(Error::DimensionMismatch { expected: f.dim(), got: x.len() }.into());
            }
            let value = match f {
                AnyFunction::MaxAffine(v) => v.eval(&x),
                AnyFunction::CellPA(u) => u.eval(&x),
            };
            emit_json(&None, &serde_json::json!({ "value": if value.is_finite() { Some(value) } else { None } }))?;
        }
        FnCommand::Scale { input, lambda, epi, out } => {
            let f = match (read_fn(input)?, epi) {
                (AnyFunction::MaxAffine(v), false) => AnyFunction::MaxAffine(v.scale_values(*lambda)?),
                (AnyFunction::MaxAffine(v), true) => AnyFunction::MaxAffine(v.epi_scale(*lambda)?),
                (AnyFunction::CellPA(u), false) => AnyFunction::CellPA(u.scale_values(*lambda)?),
                (AnyFunction::CellPA(u), true) => AnyFunction::CellPA(u.epi_scale(*lambda)?),
            };
            emit(&out.out, &f.to_json()?)?;
        }
        FnCommand::Infconv { inputs, weights, out } => {
            let fs = inputs
                .iter()
                .map(|p| Ok(read_fn(p)?.into_cell_pa()?))
                .collect::<CliResult<Vec<_>>>()?;
            let w = match weights {
                Some(s) => list(s)?,
                None => vec![1.0; fs.len()],
            };
            emit_json(&out.out, &inf_convolve(&w, &fs)?)?;
        }
        FnCommand::Max { inputs, out } => {
            let f = match (read_fn(&inputs[0])?, read_fn(&inputs[1])?) {
                (AnyFunction::CellPA(a), AnyFunction::CellPA(b)) => AnyFunction::CellPA(pointwise_max(&a, &b)?),
                (AnyFunction::MaxAffine(a), AnyFunction::MaxAffine(b)) => AnyFunction::MaxAffine(a.pointwise_max(&b)?),
                _ => return Err(Error::InvalidInput("both functions must have the same form".into()).into()),
            };
            emit(&out.out, &f.to_json()?)?;
        }
        FnCommand::Min { inputs, out } => {
            let f = match (read_fn(&inputs[0])?, read_fn(&inputs[1])?) {
                (AnyFunction::CellPA(a), AnyFunction::CellPA(b)) => guarded_min(&a, &b)?.convex().map(AnyFunction::CellPA),
                (AnyFunction::MaxAffine(a), AnyFunction::MaxAffine(b)) => {
                    guarded_min_max_affine(&a, &b)?.convex().map(AnyFunction::MaxAffine)
                }
                _ => return Err(Error::InvalidInput("both functions must have the same form".into()).into()),
            };
            let f = f.ok_or_else(|| CliError::from(Error::NotConvex("pointwise minimum".into())))?;
            emit(&out.out, &f.to_json()?)?;
        }
        FnCommand::Subdiff { input, at } => {
            let x = parse_point(at)?;
            let p: Polyhedron = match read_fn(input)? {
                AnyFunction::MaxAffine(v) => v.subdifferential(&x)?,
                AnyFunction::CellPA(u) => u.subdifferential(&x)?,
            };
            emit_json(&None, &p)?;
        }
    }
    Ok(EXIT_OK)
}

fn val(cmd: &ValCommand) -> CliResult<i32> {
    match cmd {
        ValCommand::Eval { oracle, function } => {
            let value = match read_fn(function)? {
                AnyFunction::CellPA(u) => oracle_on_cell_pa(oracle, u.dim(), &file_reader)?.oracle.eval(&u)?,
                AnyFunction::MaxAffine(v) => oracle_on_max_affine(oracle, v.dim(), &file_reader)?.eval(&v)?,
            };
            emit_json(&None, &serde_json::json!({ "value": value }))?;
        }
        ValCommand::Body { oracle, y, vertices } => {
            let y = parse_point(y)?;
            let k = Polyhedron::from_points(y.len(), &parse_points(vertices)?)?;
            let z = oracle_on_cell_pa(oracle, y.len(), &file_reader)?.oracle;
            emit_json(&None, &serde_json::json!({ "value": body_valuation(&z, &y, &k)? }))?;
        }
        ValCommand::Cylinder { zeta, y, out } => {
            let y = parse_point(y)?;
            let z = weight(zeta, y.len(), &file_reader)?;
            let (u, value) = cylinder_witness(&z, &y)?;
            emit_json(&out.out, &serde_json::json!({ "function": u, "value": value }))?;
        }
    }
    Ok(EXIT_OK)
}

fn hess(cmd: &HessCommand) -> CliResult<i32> {
    match cmd {
        HessCommand::Measure { function, window } => {
            let w = window.window()?;
            let table = match read_fn(function)? {
                AnyFunction::CellPA(u) => hessian_measure(&u, &w)?,
                AnyFunction::MaxAffine(v) => crate::hessian::hessian_measure_finite(&v, &w)?,
            };
            emit_json(&None, &table)?;
        }
        HessCommand::Mc { function, window, s, samples, seed } => {
            let u = read_fn(function)?.into_cell_pa()?;
            let w = window.window()?;
            let exact = hessian_measure(&u, &w)?.ps_polynomial(*s);
            let mc = ps_volume_mc(&u, *s, &w, *samples, *seed)?;
            emit_json(&None, &serde_json::json!({ "polynomial": exact, "monte_carlo": mc, "seed": seed }))?;
        }
        HessCommand::Duality { function, window } => {
            let v = read_fn(function)?.into_max_affine()?;
            emit_json(&None, &duality_check(&v, &window.window()?)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn decomp(cmd: &DecompCommand) -> CliResult<i32> {
    match cmd {
        DecompCommand::Run { oracle, function, n, scheme, lambdas } => {
            let u = read_fn(function)?.into_cell_pa()?;
            let z = oracle_on_cell_pa(oracle, u.dim(), &file_reader)?.oracle;
            let scheme = match scheme {
                SchemeArg::Integer => NodeScheme::Integer,
                SchemeArg::Chebyshev => NodeScheme::Chebyshev,
            };
            let alpha = vandermonde_coeffs_with(*n, scheme)?;
            let comps = homogeneous_components_with(&z, &u, &alpha)?;
            let direct = z.eval(&u)?;
            let ls = list(lambdas)?;
            let defects = (0..=*n)
                .map(|i| verify_homogeneity(&component_oracle(&z, i, *n)?, &u, i, &ls))
                .collect::<crate::Result<Vec<f64>>>()?;
            emit_json(
                &None,
                &serde_json::json!({
                    "components": comps,
                    "direct": direct,
                    "reconstruction_defect": (comps.iter().sum::<f64>() - direct).abs(),
                    "homogeneity_defects": defects,
                }),
            )?;
        }
        DecompCommand::Dual { oracle, function, n } => {
            let v = read_fn(function)?.into_max_affine()?;
            let z = oracle_on_max_affine(oracle, v.dim(), &file_reader)?;
            let a = dual_decompose(&z, &v, *n)?;
            let b = dual_decompose_via_conjugate(&z, &v, *n)?;
            let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            emit_json(&None, &serde_json::json!({ "components": a, "via_conjugate": b, "max_discrepancy": gap }))?;
        }
        DecompCommand::Polarize { oracle, fns } => {
            let us = cell_functions(fns)?;
            let z = oracle_on_cell_pa(oracle, us[0].dim(), &file_reader)?.oracle;
            emit_json(&None, &serde_json::json!({ "value": polarize(&z, &us)? }))?;
        }
        DecompCommand::Fit { oracle, fns, lambdas } => {
            let us = cell_functions(fns)?;
            let z = oracle_on_cell_pa(oracle, us[0].dim(), &file_reader)?.oracle;
            emit_json(&None, &polynomial_fit(&z, &us, &list(lambdas)?)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn suite_exit(report: &SuiteReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_SUITE
    }
}

fn suite(cmd: &SuiteCommand) -> CliResult<i32> {
    match cmd {
        SuiteCommand::Valuation { oracle, n, cases, seed, tolerance, out } => {
            let parsed = oracle_on_cell_pa(oracle, *n, &file_reader)?;
            let mut r = valuation_identity_suite(&parsed.oracle, *n, *cases, *seed, *tolerance)?;
            if parsed.control {
                r = r.expecting_failures();
            }
            emit_json(&out.out, &r)?;
            Ok(suite_exit(&r))
        }
        SuiteCommand::Inclexcl { oracle, n, m, cases, seed, tolerance, out } => {
            let parsed = oracle_on_cell_pa(oracle, *n, &file_reader)?;
            let mut r = inclusion_exclusion_suite(&parsed.oracle, *n, *m, *cases, *seed, *tolerance)?;
            if parsed.control {
                r = r.expecting_failures();
            }
            emit_json(&out.out, &r)?;
            Ok(suite_exit(&r))
        }
        SuiteCommand::Continuity { oracle, probes, tolerance, out } => {
            let parsed = oracle_on_cell_pa(oracle, 1, &file_reader)?;
            let f = |x: f64| 0.5 * x * x;
            let g = |x: f64| x;
            let t = SmoothTarget { f: &f, grad: &g, lo: -1.0, hi: 1.0 };
            let rep = continuity_suite(&parsed.oracle, &t, &counts(probes)?, None)?;
            let converged = rep.converged(*tolerance);
            emit_json(&out.out, &serde_json::json!({ "report": rep, "converged": converged }))?;
            Ok(if converged != parsed.control { EXIT_OK } else { EXIT_SUITE })
        }
        SuiteCommand::Coercive { zeta, y, rays, radii, csv, out } => {
            let y = parse_point(y)?;
            let z = weight(zeta, y.len(), &file_reader)?;
            let cone = ConeRestriction::new(y, parse_points(rays)?)?;
            let rep = coercive_divergence_demo(&z, &cone, &list(radii)?)?;
            if let Some(p) = csv {
                let mut text = String::from("radius,value,ratio\n");
                for r in &rep.rows {
                    text += &format!("{},{},{}\n", fmt_f64(r.radius), fmt_f64(r.value), fmt_f64(r.ratio));
                }
                write_text(p, &text)?;
            }
            emit_json(&out.out, &rep)?;
            Ok(EXIT_OK)
        }
        SuiteCommand::Growth { eta, n, lambdas, sign, h, csv, out } => {
            let eta: TestFunction = match eta {
                Some(p) => parse_json(&read_text(p)?)?,
                None => TestFunction::bump(*n, 1.8, 3.0, 1)?,
            };
            let sign = match sign {
                SignArg::Displayed => ExponentSign::Displayed,
                SignArg::Literal => ExponentSign::Literal,
            };
            let rep = growth_demo(&eta, &list(lambdas)?, sign, *h)?;
            if let Some(p) = csv {
                let mut text = String::from("lambda,value\n");
                for (l, v) in rep.lambdas.iter().zip(&rep.values) {
                    text += &format!("{},{}\n", fmt_f64(*l), fmt_f64(*v));
                }
                write_text(p, &text)?;
            }
            emit_json(&out.out, &rep)?;
            Ok(EXIT_OK)
        }
    }
}

fn repro(criterion: &str, seed: u64, out: &Option<PathBuf>) -> CliResult<i32> {
    let reports = if criterion == "all" {
        run_all(seed)
    } else {
        let id: usize = criterion
            .parse()
            .map_err(|_| CliError::from(Error::InvalidInput(format!("criterion must be 1..=13 or all, got {criterion:?}"))))?;
        vec![run_criterion(id, seed)?]
    };
    for r in &reports {
        eprintln!("{}", r.line());
    }
    emit_json(out, &reports)?;
    Ok(if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_SUITE })
}
