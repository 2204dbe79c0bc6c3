//! The `sphint` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 oracle
//! disagreement under `--verify` (and a failed `reduce` identity).

mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use report::{format_significant, Report, STATUS_DISAGREE, STATUS_MISMATCH, STATUS_OK};

use crate::error::{Error, Result};
use crate::fluid::{fluid_closed, fluid_series, fluid_series_converged, gamma_factor, FluidParams};
use crate::integrals::{
    dirichlet_abs, dirichlet_signed, mu_power_integral, reduction_rhs, sphere_volume, Exponent,
    ExponentVector, IntegralValue, SphereDim,
};
use crate::oracle::{
    mc_integrate, poly_integrate, quad_integrate, quad_integrate_sphere, sample_uniform, MCConfig,
    OracleEstimate, Polynomial, Uncertainty,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sphint", version, about = "Exact and numerical integrals over round spheres")]
struct Cli {
    /// Print a single-line JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Significant digits of decimal text output.
    #[arg(long, global = true, default_value_t = 12,
          value_parser = clap::value_parser!(u8).range(1..=17))]
    digits: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Volume of the unit S^D.
    Volume {
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Integral over S^n of a product of powers of the cartesian coordinates.
    Dirichlet {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        alpha: AlphaArgs,
        /// Signed integrand x^a (integer exponents; the default).
        #[arg(long, conflicts_with = "abs")]
        signed: bool,
        /// Absolute integrand |x|^a (real exponents allowed).
        #[arg(long)]
        abs: bool,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Integral over S^D of a product of powers of the polar radii.
    MuPower {
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Checks the mu-power closed form against its reduction to S^n.
    Reduce {
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        alpha: AlphaArgs,
    },
    /// Integral of gamma^(D+1) for the rigidly rotating fluid.
    Fluid {
        #[arg(long = "D")]
        d: usize,
        /// Angular velocities, repeated or comma-separated.
        #[arg(long = "omega", value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        omega: Vec<f64>,
        /// Also evaluate the term-by-term series and compare.
        #[arg(long)]
        series: bool,
        /// Series truncation order; without it the order grows until the
        /// last shell is below 1e-15 of the sum.
        #[arg(long, requires = "series")]
        kmax: Option<u32>,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Exact integral over S^n of a polynomial read from a file.
    IntegratePoly {
        /// One monomial per line: `coeff e1 .. e_{n+1}`, `#` comments.
        file: PathBuf,
        /// Sphere dimension; defaults to the number of variables minus one.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Dumps uniform points of S^D with their (mu, phi) chart.
    Sample {
        #[arg(long = "D")]
        d: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: u64,
    },
}

#[derive(Args, Debug)]
struct AlphaArgs {
    /// Exponents, repeated (`--alpha 2 --alpha 0`) or comma-separated.
    #[arg(long = "alpha", value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    alpha: Vec<String>,
}

impl AlphaArgs {
    fn parse(&self) -> Result<ExponentVector> {
        self.alpha
            .iter()
            .map(|s| s.parse::<Exponent>())
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector::from)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// Monte Carlo with uniform samples.
    Mc,
    /// Tensor Gauss-Legendre quadrature.
    Quad,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run an oracle and exit 3 if it disagrees with the closed form.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = OracleKind::Mc)]
    oracle: OracleKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Quadrature nodes per axis (the bound compares N with 2N).
    #[arg(long, default_value_t = 24)]
    nodes: usize,
    /// Monte Carlo agreement threshold in standard errors.
    #[arg(long, default_value_t = 3.0)]
    sigma: f64,
}

/// Parses `args` (program name first), writes the report to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}; {}", remedy(&e));
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::LengthMismatch { .. } => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn remedy(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "numbers are integers, decimals or p/q rationals",
        Error::LengthMismatch { .. } => {
            "pass one value per entry, via repeated flags or a comma-separated list"
        }
        Error::NotInteger { .. } => "use integer exponents, or --abs for real ones",
        Error::Domain(_) => "see --help for the valid parameter ranges",
        Error::Range(_) => "the value does not fit in an f64; use smaller parameters",
        Error::NonFinite { .. } => "the integrand is singular there; try --oracle quad",
        Error::SeriesRefused { .. } => "drop --series to use only the closed form",
        Error::MixedPiPower { .. } => "split the input into terms of equal degree parity",
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let digits = usize::from(cli.digits);
    let (report, extra, verify) = match &cli.command {
        Command::Volume { d, verify } => {
            let dim = SphereDim::new(*d)?;
            let volume = sphere_volume(dim);
            let mut report = exact_report("volume", &volume)?.input("D", *d);
            attach_oracle(&mut report, verify, |v| match v.oracle {
                OracleKind::Mc => mc_integrate(dim, |_| 1.0, mc_config(v)),
                OracleKind::Quad => quad_integrate(dim, |_| 1.0, v.nodes),
            })?;
            (report, Vec::new(), verify.verify)
        }
        Command::Dirichlet { n, alpha, abs, verify, .. } => {
            let alphas = alpha.parse()?;
            let value = if *abs {
                dirichlet_abs(*n, &alphas)?
            } else {
                IntegralValue::Exact(dirichlet_signed(*n, &alphas)?)
            };
            let op = if *abs { "dirichlet-abs" } else { "dirichlet-signed" };
            let mut report = value_report(op, &value)?
                .input("n", *n)
                .input("alpha", exponents_json(&alphas));
            let powers: Vec<Exponent> = alphas.as_slice().to_vec();
            let abs = *abs;
            let integrand = move |xs: &[f64]| -> f64 {
                xs.iter()
                    .zip(&powers)
                    .map(|(&x, &e)| power(if abs { x.abs() } else { x }, e))
                    .product()
            };
            attach_oracle(&mut report, verify, |v| sphere_oracle(*n, v, &integrand))?;
            (report, Vec::new(), verify.verify)
        }
        Command::MuPower { d, alpha, verify } => {
            let dim = SphereDim::new(*d)?;
            let alphas = alpha.parse()?;
            let value = mu_power_integral(dim, &alphas)?;
            let mut report = value_report("mu-power", &value)?
                .input("D", *d)
                .input("alpha", exponents_json(&alphas));
            let powers: Vec<Exponent> = alphas.as_slice().to_vec();
            let integrand =
                |mus: &[f64]| -> f64 { mus.iter().zip(&powers).map(|(&m, &e)| power(m, e)).product() };
            attach_oracle(&mut report, verify, |v| match v.oracle {
                OracleKind::Mc => mc_integrate(dim, |p| integrand(p.mus()), mc_config(v)),
                OracleKind::Quad => quad_integrate(dim, integrand, v.nodes),
            })?;
            (report, Vec::new(), verify.verify)
        }
        Command::Reduce { d, alpha } => {
            let dim = SphereDim::new(*d)?;
            let alphas = alpha.parse()?;
            let lhs = mu_power_integral(dim, &alphas)?;
            let rhs = reduction_rhs(dim, &alphas)?;
            let mut report = value_report("reduce", &lhs)?
                .input("D", *d)
                .input("alpha", exponents_json(&alphas));
            let rhs_value = rhs.to_f64()?;
            let (agrees, sigma) = match (lhs.exact(), rhs.exact()) {
                (Some(a), Some(b)) => (a == b, if a == b { 0.0 } else { f64::INFINITY }),
                _ => {
                    let estimate = OracleEstimate {
                        value: rhs_value,
                        uncertainty: Uncertainty::ErrorBound(1e-12 * rhs_value.abs()),
                        samples_or_nodes: 1,
                    };
                    let sigma = estimate.sigma_from(report.decimal);
                    (sigma <= 1.0, sigma)
                }
            };
            report.oracle_value = Some(rhs_value);
            report.oracle_error = Some(0.0);
            report.agreement_sigma = Some(sigma);
            report.inputs.insert("oracle".into(), json!("reduction"));
            if !agrees {
                report.status = STATUS_MISMATCH.into();
            }
            let extra = match rhs.exact() {
                Some(e) => vec![format!("reduction: {e}")],
                None => Vec::new(),
            };
            (report, extra, true)
        }
        Command::Fluid { d, omega, series, kmax, verify } => {
            let dim = SphereDim::new(*d)?;
            let params = FluidParams::new(dim, omega.clone())?;
            let closed = fluid_closed(&params)?;
            let mut report = Report::new("fluid", closed.value)
                .input("D", *d)
                .input("omega", omega.clone());
            let mut extra = vec![format!(
                "closed form: {} / {}",
                closed.volume,
                format_significant(closed.divergence_factor, digits)
            )];
            if *series {
                let result = match kmax {
                    Some(k) => fluid_series(&params, *k)?,
                    None => fluid_series_converged(&params, 1e-15, 1 << 14)?,
                };
                extra.push(format!(
                    "series: order {}, {} terms, tail bound {}",
                    result.truncation_order,
                    result.terms_used,
                    format_significant(result.tail_bound, 3)
                ));
                let bound = result.tail_bound.max(64.0 * f64::EPSILON * result.value.abs());
                let estimate = OracleEstimate {
                    value: result.value,
                    uncertainty: Uncertainty::ErrorBound(bound),
                    samples_or_nodes: result.terms_used,
                };
                report = report.input("oracle", "series").input("kmax", result.truncation_order);
                record_estimate(&mut report, &estimate, 1.0);
            } else {
                let integrand = |mus: &[f64]| -> f64 {
                    gamma_factor(&params, mus).map_or(f64::NAN, |g| g.powi(dim.d() as i32 + 1))
                };
                attach_oracle(&mut report, verify, |v| match v.oracle {
                    OracleKind::Mc => mc_integrate(dim, |p| integrand(p.mus()), mc_config(v)),
                    OracleKind::Quad => quad_integrate(dim, integrand, v.nodes),
                })?;
            }
            (report, extra, verify.verify)
        }
        Command::IntegratePoly { file, n, verify } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", file.display())))?;
            let poly: Polynomial = text.parse()?;
            let vars = poly.variable_count().unwrap_or(n.map_or(1, |n| n + 1));
            let n = n.unwrap_or(vars.saturating_sub(1));
            if vars != n + 1 {
                return Err(Error::LengthMismatch {
                    what: "monomial exponent list",
                    expected: n + 1,
                    got: vars,
                });
            }
            let value = poly_integrate(n, &poly)?;
            let mut report = exact_report("integrate-poly", &value)?
                .input("file", file.display().to_string())
                .input("n", n)
                .input("monomials", poly.monomials().len());
            attach_oracle(&mut report, verify, |v| sphere_oracle(n, v, &|xs| poly.eval(xs)))?;
            (report, Vec::new(), verify.verify)
        }
        Command::Sample { d, seed, samples } => {
            let dim = SphereDim::new(*d)?;
            write_samples(out, dim, MCConfig::new(*seed, *samples), cli.json, digits)?;
            return Ok(EXIT_OK);
        }
    };

    if cli.json {
        writeln!(out, "{}", report.to_json()).map_err(io_error)?;
    } else {
        report.write_human(out, digits, &extra).map_err(io_error)?;
    }
    Ok(if verify && !report.is_ok() { EXIT_DISAGREE } else { EXIT_OK })
}

fn io_error(e: std::io::Error) -> Error {
    Error::Domain(format!("cannot write output: {e}"))
}

fn mc_config(v: &VerifyArgs) -> MCConfig {
    MCConfig::new(v.seed, v.samples)
}

fn power(x: f64, e: Exponent) -> f64 {
    match e {
        Exponent::Int(k) => x.powi(k as i32),
        Exponent::Real(a) => x.powf(a),
    }
}

fn exponents_json(alphas: &ExponentVector) -> Value {
    Value::Array(
        alphas
            .as_slice()
            .iter()
            .map(|e| match *e {
                Exponent::Int(k) => json!(k),
                Exponent::Real(x) => json!(x),
            })
            .collect(),
    )
}

fn exact_report(op: &str, value: &crate::PiRational) -> Result<Report> {
    let mut report = Report::new(op, value.to_f64()?);
    report.exact = Some(value.to_string());
    Ok(report)
}

fn value_report(op: &str, value: &IntegralValue) -> Result<Report> {
    match value {
        IntegralValue::Exact(v) => exact_report(op, v),
        IntegralValue::Float(x) => Ok(Report::new(op, *x)),
    }
}

/// Integral over `S^n` of a cartesian integrand. `S^0` is two points, so it
/// is always summed exactly rather than sampled.
fn sphere_oracle(n: usize, v: &VerifyArgs, f: &dyn Fn(&[f64]) -> f64) -> Result<OracleEstimate> {
    match v.oracle {
        OracleKind::Mc if n > 0 => {
            let dim = SphereDim::new(n)?;
            mc_integrate(dim, |p| f(p.xs()), mc_config(v))
        }
        _ => quad_integrate_sphere(n, f, v.nodes),
    }
}

fn attach_oracle<F>(report: &mut Report, verify: &VerifyArgs, estimate: F) -> Result<()>
where
    F: FnOnce(&VerifyArgs) -> Result<OracleEstimate>,
{
    if !verify.verify {
        return Ok(());
    }
    let est = estimate(verify)?;
    let threshold = match verify.oracle {
        OracleKind::Mc => {
            report.inputs.insert("oracle".into(), json!("monte-carlo"));
            report.inputs.insert("seed".into(), json!(verify.seed));
            report.inputs.insert("samples".into(), json!(verify.samples));
            verify.sigma
        }
        OracleKind::Quad => {
            report.inputs.insert("oracle".into(), json!("quadrature"));
            report.inputs.insert("nodes".into(), json!(verify.nodes));
            1.0
        }
    };
    record_estimate(report, &est, threshold);
    Ok(())
}

fn record_estimate(report: &mut Report, est: &OracleEstimate, threshold: f64) {
    let error = est.error();
    let sigma = est.sigma_from(report.decimal);
    report.oracle_value = Some(est.value);
    report.oracle_error = Some(error);
    report.agreement_sigma = Some(sigma);
    if sigma > threshold {
        report.status = STATUS_DISAGREE.into();
    }
}

fn write_samples(out: &mut dyn Write, dim: SphereDim, config: MCConfig, json: bool, digits: usize) -> Result<()> {
    let fmt = |v: &[f64]| -> String {
        v.iter().map(|x| format_significant(*x, digits)).collect::<Vec<_>>().join(" ")
    };
    for point in sample_uniform(dim, config) {
        let line = if json {
            json!({"x": point.xs(), "mu": point.mus(), "phi": point.phis()}).to_string()
        } else {
            format!("x: {} | mu: {} | phi: {}", fmt(point.xs()), fmt(point.mus()), fmt(point.phis()))
        };
        writeln!(out, "{line}").map_err(io_error)?;
    }
    Ok(())
}
