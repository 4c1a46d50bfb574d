//! Command dispatch. Exit codes: 0 success, 1 verdict or threshold failure
//! (or a numerical failure), 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use fockpsi_core::criteria::{self, Condition, Verdict};
use fockpsi_core::linalg;
use fockpsi_core::operators::{defect_self_adjoint, truncated_matrix};
use fockpsi_core::sampling;
use fockpsi_core::verify::{self, KernelIdentity};
use fockpsi_core::{
    compute_moments, AffineMap, CMatrix, CVector, Complex64, Error, KernelEvaluator, MomentTable, MultiIndex,
    Polynomial, ResidualReport, WeightSymbol,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, Format, RunConfig};
use crate::formats::{self, FormatError};
use crate::parse::{self, ParseError};

/// Moment count used by commands that evaluate kernel series.
pub const KERNEL_R_MAX: usize = 160;
/// Moment count for `moments` when `--rmax` is not given.
pub const MOMENTS_R_MAX: usize = 64;

const MOMENTS_ABOUT: &str = "Writes the moments c_r = ∫₀^∞ s^r e^{-ψ(s)} ds for r = 0..=rmax.

CSV columns:
  r      moment index
  c_r    moment value
  err_r  absolute error estimate

JSON: {\"schema\": \"1\", \"weight\", \"tol\", \"moments\": [{\"r\", \"c_r\", \"err_r\"}, ..]}";

const MATRIX_ABOUT: &str = "Truncated matrix of C_{U,Γ} on polynomials of degree ≤ N.

JSON (default): {\"schema\": \"1\", \"n\", \"N\", \"guard\", \"index\", \"entries\"} where
entries[i][j] = [re, im] is the coefficient of index[i] in the image of index[j],
both in the orthonormal monomial basis.
CSV columns: row, col (exponents separated by spaces), re, im.";

const GRAMMAR: &str = "Literals:
  vector      a,b,c            (0 for the zero vector)
  matrix      a,b;c,d          (rows separated by ';')
  Γ           MATRIX|SHIFT, or id;SHIFT, zero;SHIFT, projJJ;SHIFT
  U           1, zero, const:c, kernel:ALPHA@q1,..,qn, poly:c@e1,..,en;c@..
  complex     2, -0.5i, i, 1+2i";

#[derive(Debug, Parser)]
#[command(name = "fockpsi", version, about = "Moments, kernels and composition operator criteria on weighted Fock spaces")]
#[command(arg_required_else_help = true, after_help = GRAMMAR)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// key = value configuration file; flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// linear, linear:A, linear-quadratic or poly:c0,c1,.. (coefficients of ψ)
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Dimension
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Truncation degree
    #[arg(long = "N", visible_alias = "degree", global = true)]
    degree: Option<usize>,
    /// Highest moment index
    #[arg(long, global = true)]
    rmax: Option<usize>,
    /// Moment quadrature tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    matrix_tol: Option<f64>,
    #[arg(long, global = true)]
    series_tol: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tail_tol: Option<f64>,
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Write to FILE instead of standard output
    #[arg(long, short = 'o', global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Read moments from a CSV or JSON file instead of computing them
    #[arg(long, global = true, value_name = "FILE")]
    moments: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    AdjointPair,
    SelfAdjoint,
    Coisometry,
    Unitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Default,
    Kernel,
    Operators,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moment table of the weight as CSV or JSON
    #[command(long_about = MOMENTS_ABOUT)]
    Moments,
    /// K_p(z) with its tail bound, as JSON
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Truncated operator matrix
    #[command(long_about = MATRIX_ABOUT)]
    Matrix {
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        u: String,
    },
    /// Decide adjoint, self-adjoint, co-isometry or unitarity conditions; prints the verdict as JSON.
    ///
    /// Without --u the unweighted composition operator is checked. The exit
    /// code is 0 when every checked condition holds, even for verdicts that
    /// only test necessary conditions.
    Check {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        /// Second symbol for adjoint-pair
        #[arg(long, allow_hyphen_values = true)]
        gamma2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u2: Option<String>,
    },
    /// Run oracle suites; one JSON line per report
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Default)]
        suite: Suite,
        /// Cross-check instances (default suite)
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Reproduce the projection and non-Hermitian examples as condition tables
    Demo,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidMoments(_)
            | Error::IndexOutOfRange { .. }
            | Error::DegreeOverflow { .. }
            | Error::SingularMatrix => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

/// `Ok(true)` on success, `Ok(false)` when a verdict or threshold failed.
type Outcome = Result<bool, Failure>;

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}\nFor more information, try '--help'.", Cli::command().render_usage());
            2
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn resolve(c: &Common) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let flags: [(&str, Option<String>); 13] = [
        ("weight", c.weight.clone()),
        ("n", c.n.map(|v| v.to_string())),
        ("N", c.degree.map(|v| v.to_string())),
        ("rmax", c.rmax.map(|v| v.to_string())),
        ("tol", c.tol.map(|v| v.to_string())),
        ("matrix_tol", c.matrix_tol.map(|v| v.to_string())),
        ("series_tol", c.series_tol.map(|v| v.to_string())),
        ("samples", c.samples.map(|v| v.to_string())),
        ("seed", c.seed.map(|v| v.to_string())),
        ("tail_tol", c.tail_tol.map(|v| v.to_string())),
        ("max_terms", c.max_terms.map(|v| v.to_string())),
        ("output", c.output.as_ref().map(|p| p.display().to_string())),
        ("format", c.format.clone()),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

struct Context {
    cfg: RunConfig,
    moments_file: Option<PathBuf>,
}

impl Context {
    fn table(&self, r_max: usize) -> Result<MomentTable, Failure> {
        match &self.moments_file {
            Some(path) => {
                if !path.is_file() {
                    return Err(Failure::Usage(format!("moments file {} does not exist", path.display())));
                }
                let t = formats::read_moments_file(path, &self.cfg.weight, self.cfg.tol)?;
                Ok(if t.r_max() > r_max { t.truncated(r_max)? } else { t })
            }
            None => Ok(compute_moments(&self.cfg.weight_function()?, r_max, self.cfg.tol)?),
        }
    }

    fn evaluator(&self, n: usize) -> Result<KernelEvaluator, Failure> {
        let table = self.table(self.cfg.rmax.unwrap_or(KERNEL_R_MAX))?;
        let r = table.r_max();
        if r < n {
            return Err(Failure::Usage(format!("dimension {n} needs moments up to at least c_{n}, have c_{r}")));
        }
        let max_terms = self.cfg.max_terms.unwrap_or(r + 1 - n);
        Ok(KernelEvaluator::new(table, n, self.cfg.tail_tol, max_terms)?)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        let written = match &self.cfg.output {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        };
        written.map_err(|e| Failure::Failed(format!("cannot write output: {e}")))
    }

    fn format(&self, default: Format) -> Format {
        self.cfg.format.unwrap_or(default)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn execute(cli: Cli) -> Outcome {
    let cfg = resolve(&cli.common)?;
    let ctx = Context { cfg, moments_file: cli.common.moments };
    match cli.command {
        Command::Moments => moments(&ctx),
        Command::Kernel { p, z } => kernel(&ctx, &p, &z),
        Command::Matrix { gamma, u } => matrix(&ctx, &gamma, &u),
        Command::Check { theorem, gamma, u, gamma2, u2 } => check(&ctx, theorem, &gamma, u, gamma2, u2),
        Command::Verify { suite, trials } => verify_suite(&ctx, suite, trials),
        Command::Demo => demo(&ctx),
    }
}

fn moments(ctx: &Context) -> Outcome {
    let table = ctx.table(ctx.cfg.rmax.unwrap_or(MOMENTS_R_MAX))?;
    let text = match ctx.format(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            formats::write_moments_csv(&table, &mut buf)?;
            String::from_utf8(buf).expect("CSV output is UTF-8")
        }
        Format::Json => pretty(&formats::moments_json(&table)),
    };
    ctx.emit(&text)?;
    Ok(true)
}

fn kernel(ctx: &Context, p: &str, z: &str) -> Outcome {
    let n = ctx.cfg.n;
    let p = parse::vector(p, Some(n))?;
    let z = parse::vector(z, Some(n))?;
    let value = ctx.evaluator(n)?.kernel_eval(&p, &z)?;
    ctx.emit(&pretty(&formats::kernel_json(&value)))?;
    Ok(true)
}

fn matrix(ctx: &Context, gamma: &str, u: &str) -> Outcome {
    let n = ctx.cfg.n;
    let g = parse::affine(gamma, Some(n))?;
    let u = parse::weight_symbol(u, n)?;
    let t = truncated_matrix(&u, &g, &ctx.evaluator(n)?, ctx.cfg.degree)?;
    let text = match ctx.format(Format::Json) {
        Format::Json => pretty(&formats::matrix_json(&t)),
        Format::Csv => {
            let mut buf = Vec::new();
            formats::write_matrix_csv(&t, &mut buf)?;
            String::from_utf8(buf).expect("CSV output is UTF-8")
        }
    };
    ctx.emit(&text)?;
    Ok(true)
}

fn check(
    ctx: &Context,
    theorem: Theorem,
    gamma: &str,
    u: Option<String>,
    gamma2: Option<String>,
    u2: Option<String>,
) -> Outcome {
    let n = ctx.cfg.n;
    let opts = ctx.cfg.check_options();
    let g = parse::affine(gamma, Some(n))?;
    let symbol = |text: &Option<String>| -> Result<WeightSymbol, Failure> {
        Ok(match text {
            Some(t) => parse::weight_symbol(t, n)?,
            None => WeightSymbol::one(),
        })
    };
    if theorem != Theorem::AdjointPair && (gamma2.is_some() || u2.is_some()) {
        return Err(Failure::Usage("--gamma2 and --u2 only apply to --theorem adjoint-pair".into()));
    }
    let verdict = match theorem {
        Theorem::AdjointPair => {
            let Some(g2) = gamma2 else {
                return Err(Failure::Usage("--theorem adjoint-pair needs --gamma2".into()));
            };
            let g2 = parse::affine(&g2, Some(n))?;
            if u.is_none() && u2.is_none() {
                criteria::adjoint_composition_pair(&g, &g2, &opts)?
            } else {
                criteria::adjoint_weighted_pair(&symbol(&u)?, &g, &symbol(&u2)?, &g2, &ctx.evaluator(n)?, &opts)?
            }
        }
        Theorem::SelfAdjoint => match &u {
            None => criteria::self_adjoint_composition(&g, &opts),
            Some(_) => criteria::self_adjoint_weighted(&symbol(&u)?, &g, &ctx.evaluator(n)?, &opts)?,
        },
        Theorem::Coisometry => match &u {
            None => criteria::coisometry_composition(&g, &opts),
            Some(_) => criteria::coisometry_weighted(&symbol(&u)?, &g, &ctx.evaluator(n)?, &opts)?,
        },
        Theorem::Unitary => {
            if u.is_some() {
                return Err(Failure::Usage("--theorem unitary checks composition operators and takes no --u".into()));
            }
            criteria::unitary_composition(&g, &ctx.evaluator(n)?, &opts, ctx.cfg.degree)?
        }
    };
    ctx.emit(&pretty(&formats::verdict_json(&verdict)))?;
    Ok(verdict.conditions_hold())
}

/// Reports emitted by `verify`, with their pass thresholds.
mod thresholds {
    pub const KERNEL_SYMMETRY: f64 = 1e-10;
    pub const REPRODUCING: f64 = 1e-6;
    pub const MONOMIAL_NORMS: f64 = 1e-8;
    pub const ADJOINT_ON_KERNEL: f64 = 1e-7;
    pub const KERNEL_PAIR: f64 = 1e-10;
    pub const SHIFT_SERIES: f64 = 1e-12;
}

/// Radius for kernel symmetry samples.
const SYMMETRY_RADIUS: f64 = 1.0;
/// Quadrature-based reproducing checks per polynomial.
const REPRODUCING_POINTS: usize = 4;
const ADJOINT_TRIALS: usize = 20;
const ADJOINT_DEGREE: usize = 12;
const CROSS_CHECK_NMAX: usize = 3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn poly(n: usize, terms: &[(&[u32], Complex64)]) -> Polynomial {
    Polynomial::from_terms(n, terms.iter().map(|(e, v)| (MultiIndex::new(e.to_vec()), *v))).expect("fixed test polynomial")
}

fn test_polynomials(n: usize) -> Vec<Polynomial> {
    if n == 1 {
        vec![
            poly(1, &[(&[0], c(1.0, 0.0))]),
            poly(1, &[(&[3], c(1.0, 0.0))]),
            poly(1, &[(&[0], c(1.0, 0.0)), (&[1], c(2.0, -1.0)), (&[5], c(-1.0, 0.0))]),
        ]
    } else {
        vec![
            poly(2, &[(&[1, 2], c(1.0, 0.0))]),
            poly(2, &[(&[3, 0], c(1.0, 0.0)), (&[0, 1], c(0.0, -1.0)), (&[2, 2], c(0.5, 0.0))]),
        ]
    }
}

fn kernel_reports(ctx: &Context, n: usize, out: &mut Vec<(ResidualReport, f64, Value)>) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let w = cfg.weight_function()?;
    let ev = ctx.evaluator(n)?;
    let dim = json!({ "n": n, "weight": ev.moments().weight_name() });

    let sym = verify::kernel_symmetry_residual(&ev, cfg.samples, SYMMETRY_RADIUS, cfg.seed)?;
    out.push((sym, thresholds::KERNEL_SYMMETRY, dim.clone()));

    let mut rng = sampling::rng(cfg.seed);
    let (mut worst, mut count) = (0.0f64, 0);
    for f in test_polynomials(n) {
        for _ in 0..REPRODUCING_POINTS {
            let p = sampling::point_in_ball(&mut rng, n, 1.0);
            worst = worst.max(verify::reproducing_residual(&w, &ev, &f, &p)?);
            count += 1;
        }
    }
    let report = ResidualReport { name: "reproducing-property".into(), max_residual: worst, points_tested: count, seed: cfg.seed };
    out.push((report, thresholds::REPRODUCING, dim.clone()));

    let (mut worst, mut count) = (0.0f64, 0);
    for alpha in fockpsi_core::MonomialBasis::new(n, 6).indices() {
        let quad = verify::quadrature_norm_sq(&w, alpha.exponents())?;
        let series = ev.monomial_norm_sq(alpha)?;
        worst = worst.max((quad - series).abs() / series);
        count += 1;
    }
    let report = ResidualReport { name: "monomial-norms".into(), max_residual: worst, points_tested: count, seed: cfg.seed };
    out.push((report, thresholds::MONOMIAL_NORMS, dim));
    Ok(())
}

/// The non-Hermitian 2×2 symbol `Γ(z) = Cz + D` whose shift inner products both vanish.
fn non_hermitian_example() -> AffineMap {
    let cm = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]);
    AffineMap::new(cm, CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])).expect("2x2 example")
}

fn operator_reports(ctx: &Context, n: usize, out: &mut Vec<(ResidualReport, f64, Value)>) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let ev = ctx.evaluator(n)?;
    let dim = json!({ "n": n, "weight": ev.moments().weight_name() });

    let r = verify::adjoint_kernel_consistency(&ev, ADJOINT_TRIALS, ADJOINT_DEGREE, cfg.seed)?;
    out.push((r, thresholds::ADJOINT_ON_KERNEL, dim.clone()));

    let mut rng = sampling::rng(cfg.seed);
    let cm = sampling::contraction(&mut rng, n);
    let g1 = AffineMap::linear(cm.clone())?;
    let g2 = AffineMap::linear(cm.adjoint())?;
    let r = verify::kernel_equation_residual(KernelIdentity::KernelPair, &g1, &g2, &ev, cfg.samples, cfg.seed)?;
    out.push((r, thresholds::KERNEL_PAIR, dim));

    if n == 2 {
        let g = non_hermitian_example();
        let r = verify::kernel_equation_residual(KernelIdentity::ShiftSeriesBalance, &g, &g, &ev, 1, cfg.seed)?;
        out.push((r, thresholds::SHIFT_SERIES, json!({ "n": 2, "weight": ev.moments().weight_name() })));
    }
    Ok(())
}

fn report_line(r: &ResidualReport, threshold: f64, extra: Value) -> (String, bool) {
    let mut v = formats::residual_json(r, threshold);
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    let passed = v["passed"].as_bool().unwrap_or(false);
    (serde_json::to_string(&v).expect("JSON values serialize"), passed)
}

fn verify_suite(ctx: &Context, suite: Suite, trials: usize) -> Outcome {
    let mut reports = Vec::new();
    if matches!(suite, Suite::Default | Suite::Kernel) {
        for n in 1..=2 {
            kernel_reports(ctx, n, &mut reports)?;
        }
    }
    if matches!(suite, Suite::Default | Suite::Operators) {
        for n in 1..=2 {
            operator_reports(ctx, n, &mut reports)?;
        }
    }
    let mut text = String::new();
    let mut all = true;
    for (r, threshold, extra) in &reports {
        let (line, passed) = report_line(r, *threshold, extra.clone());
        all &= passed;
        text.push_str(&line);
        text.push('\n');
    }
    if suite == Suite::Default {
        let cc = verify::randomized_cross_check(trials, CROSS_CHECK_NMAX, ctx.cfg.degree, ctx.cfg.seed)?;
        let missing: Vec<&str> = cc.missing_tags().iter().map(|t| t.as_str()).collect();
        let coverage: serde_json::Map<String, Value> =
            cc.coverage.iter().map(|(t, k)| (t.as_str().to_string(), json!(k))).collect();
        let extra = json!({
            "satisfied": cc.satisfied,
            "refuted": cc.refuted,
            "min_refuted_defect": if cc.min_refuted_defect.is_finite() { json!(cc.min_refuted_defect) } else { Value::Null },
            "violations": cc.violations,
            "missing_tags": missing,
            "coverage": coverage,
        });
        let (line, passed) = report_line(&cc.report(), verify::SATISFIED_DEFECT_MAX, extra);
        let ok = passed && cc.passed() && missing.is_empty();
        all &= ok;
        text.push_str(&line);
        text.push('\n');
    }
    ctx.emit(&text)?;
    Ok(all)
}

fn condition_table(out: &mut String, v: &Verdict) {
    let _ = writeln!(out, "  {:<36} {:>12} {:>12}  passed", "condition", "residual", "threshold");
    for Condition { name, passed, residual, threshold } in &v.conditions {
        let _ = writeln!(out, "  {name:<36} {residual:>12.3e} {threshold:>12.3e}  {passed}");
    }
    for note in &v.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    let kind = if v.necessary_only { " (necessary conditions only)" } else { "" };
    let _ = writeln!(out, "  verdict: {} satisfied = {}{kind}", v.theorem, v.satisfied);
}

fn fmt_vec(v: &CVector) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{}", z)).collect();
    format!("({})", parts.join(", "))
}

/// Exactness threshold for the hand-computable quantities in the examples.
const DEMO_EXACT: f64 = 1e-12;

fn demo(ctx: &Context) -> Outcome {
    let opts = ctx.cfg.check_options();
    let ev = ctx.evaluator(2)?;
    let mut out = String::new();

    let g = parse::affine("proj11;0", Some(2))?;
    let v = criteria::self_adjoint_composition(&g, &opts);
    let t = truncated_matrix(&WeightSymbol::one(), &g, &ev, ctx.cfg.degree)?;
    let defect = defect_self_adjoint(&t);
    let _ = writeln!(out, "projection symbol Γ(z) = (z₁, 0) on ℂ², weight {}", ev.moments().weight_name());
    let _ = writeln!(out, "  ||C|| = {}", g.operator_norm());
    condition_table(&mut out, &v);
    let _ = writeln!(out, "  truncated matrix (N = {}): self-adjoint defect {defect:.3e}", ctx.cfg.degree);
    let first = v.satisfied && defect <= opts.matrix_tol;

    let g = non_hermitian_example();
    let cm = g.linear_part();
    let inv = linalg::inverse(cm)?;
    let a = &inv * g.shift();
    let b = inv.adjoint() * g.shift();
    let (i_adj, i_inv) = criteria::shift_inner_products(&g)?;
    let u = parse::weight_symbol("kernel:1@1,0", 2)?;
    let v = criteria::self_adjoint_weighted(&u, &g, &ev, &opts)?;
    let _ = writeln!(out, "\nnon-Hermitian symbol C = [0, 1/2; -1/2, 0], D = (1, 0), U = K_D");
    let _ = writeln!(out, "  ||C||^2 = {:.6}", linalg::spectral_norm(cm).powi(2));
    let _ = writeln!(out, "  C^-1 D = {}, (C^*)^-1 D = {}", fmt_vec(&a), fmt_vec(&b));
    let _ = writeln!(out, "  <(C^*)^-1 D, D> = {i_adj}, <C^-1 D, D> = {i_inv}");
    let _ = writeln!(out, "  Hermitian residual of C = {:.3e}", linalg::hermitian_residual(cm));
    condition_table(&mut out, &v);
    let second = i_adj.norm() <= DEMO_EXACT && i_inv.norm() <= DEMO_EXACT && v.conditions_hold();

    ctx.emit(&out)?;
    Ok(first && second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
