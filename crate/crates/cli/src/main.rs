use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quatcs::integrate::{resolution_of_identity, MeasureVariant, QuadratureGrid};
use quatcs::observables::{
    ci_series, photon_stats, photon_stats_closed, rotated_quadrature_product,
    squeeze_variance_product, squeeze_variance_product_closed,
};
use quatcs::slicekit::{test_axes, verification_table, Family};
use quatcs::states::{
    coherent, fermionic, pure_squeezed, squeeze_truncation, squeezed_ds, squeezed_sd,
};
use quatcs::verify::{self, VerifyConfig, SCHEMA};
use quatcs::{Error, Execution, FockVector, Quaternion};

const DEFAULT_RESOLUTION_GRID: &str = "48,16,12,16";

#[derive(Parser, Debug)]
#[command(
    name = "quatcs",
    version,
    about = "Quaternionic coherent-state verification and sweep tables"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Fock-space truncation order (at least 8).
    #[arg(long, global = true, default_value_t = 64)]
    truncation: usize,
    /// Tolerance for pass/fail decisions.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_TOL)]
    tol: f64,
    /// Output format; `verify`, `state`, `ci` and `resolution` default to
    /// json, `table` to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sweep grid. `table`: "radii[;thetas]" as comma-separated reals.
    /// `resolution`: "n_r,n_theta,n_phi,n_psi" node counts.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every identity check and report the deviations.
    ///
    /// Exit status is 0 when all checks pass and 1 otherwise.
    /// CSV columns: name,max_dev,passed,detail
    Verify,
    /// Sweep closed-form statistics over a parameter grid.
    #[command(after_long_help = TABLE_HELP)]
    Table {
        #[arg(value_enum)]
        sweep: Sweep,
    },
    /// Print the coefficient vector of a state as JSON.
    State {
        #[command(subcommand)]
        family: StateFamily,
    },
    /// Evaluate the series e^{-|q|²} Σ q̄ⁿ·axis·qⁿ/n!.
    Ci {
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        q: Quaternion,
        /// Unit imaginary axis.
        #[arg(long, default_value = "i", value_parser = parse_quaternion, allow_hyphen_values = true)]
        axis: Quaternion,
    },
    /// Accumulate the coherent-state resolution of the identity on a grid.
    Resolution {
        /// Size of the compared leading block.
        #[arg(long, default_value_t = 7)]
        nmax: usize,
    },
}

const TABLE_HELP: &str = "\
Grid: --grid \"radii[;thetas]\", e.g. \"0.25,0.5,1.0;0,1.5708\".
Squeeze parameters are p = |p|(cos θ + i sin θ); the slice tables use the
axes i, j, k and (i+j+k)/√3 with q = 0.7 + 0.2·axis.

CSV columns:
  mandel:     p_abs,truncation,mean_n,mean_n_closed,var_n,var_n_closed,
              mandel_q,mandel_q_closed,difference,within_tol
  variances:  p_abs,theta,truncation,product,product_closed,difference,
              var_u,var_v,rotated_product,within_tol
  two_photon: family,axis,p_abs,theta,which,truncation,safe_dim,max_dev,
              within_tol

mandel_q is empty when the mean photon number is zero. The truncation
column is the order actually used; it is raised above --truncation when
the squeezed state would otherwise reach the top levels.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sweep {
    Mandel,
    Variances,
    #[value(name = "two_photon")]
    TwoPhoton,
}

#[derive(Subcommand, Debug)]
enum StateFamily {
    /// η_q = D(q)Φ_0.
    Coherent {
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        q: Quaternion,
    },
    /// S(p)Φ_0.
    #[command(name = "pure_squeezed")]
    PureSqueezed {
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        p: Quaternion,
    },
    /// S(p)D(q)Φ_0.
    #[command(name = "squeezed_SD")]
    SqueezedSd {
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        q: Quaternion,
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        p: Quaternion,
    },
    /// D(q)S(p)Φ_0.
    #[command(name = "squeezed_DS")]
    SqueezedDs {
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        q: Quaternion,
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        p: Quaternion,
    },
    /// Two-level states η_0 and η_1.
    Fermionic {
        #[arg(value_parser = parse_quaternion, allow_hyphen_values = true)]
        q: Quaternion,
    },
}

fn parse_quaternion(s: &str) -> Result<Quaternion, Error> {
    s.parse()
}

fn parse_reals(s: &str, what: &str) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let x: f64 = tok
            .parse()
            .map_err(|_| Error::BadGrid(format!("{what}: cannot parse {tok:?}")))?;
        if !x.is_finite() {
            return Err(Error::BadGrid(format!("{what}: {tok:?} is not finite")));
        }
        out.push(x);
    }
    if out.is_empty() {
        return Err(Error::BadGrid(format!("{what} is empty")));
    }
    Ok(out)
}

/// Parses "radii[;thetas]".
fn parse_sweep_grid(spec: &str, default_thetas: &[f64]) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let mut parts = spec.split(';');
    let radii = parse_reals(parts.next().unwrap_or(""), "radii")?;
    if radii.iter().any(|&r| r < 0.0) {
        return Err(Error::BadGrid("radii must be non-negative".into()));
    }
    let thetas = match parts.next() {
        Some(t) => parse_reals(t, "thetas")?,
        None => default_thetas.to_vec(),
    };
    if parts.next().is_some() {
        return Err(Error::BadGrid("expected at most one ';'".into()));
    }
    Ok((radii, thetas))
}

fn parse_node_counts(spec: &str) -> Result<[usize; 4], Error> {
    let counts: Vec<usize> = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::BadGrid(format!("cannot parse node count {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    counts
        .try_into()
        .map_err(|v: Vec<usize>| Error::BadGrid(format!("expected 4 node counts, got {}", v.len())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = cli.config;
    let exec = Execution::default();
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Verify => {
            let vcfg = VerifyConfig::new(cfg.truncation, cfg.tol, cfg.seed)?;
            let report = verify::run(&vcfg);
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => write_json(&mut out, &report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["name", "max_dev", "passed", "detail"])?;
                    for c in &report.checks {
                        w.write_record([
                            c.name.to_string(),
                            c.max_dev.map(|d| format!("{d:e}")).unwrap_or_default(),
                            c.passed.to_string(),
                            c.detail.clone().unwrap_or_default(),
                        ])?;
                    }
                    w.flush()?;
                }
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Table { sweep } => {
            check_config(&cfg)?;
            table(&mut out, &cfg, sweep, exec)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::State { family } => {
            check_config(&cfg)?;
            state(&mut out, &cfg, family)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ci { q, axis } => {
            let ci = ci_series(q, axis)?;
            let conj_dev = (ci.value.conj() + ci.value).max_abs();
            let report = CiReport {
                schema: SCHEMA,
                q,
                value: ci.value,
                r: ci.r,
                axis: ci.axis,
                terms_used: ci.terms_used,
                checks: CiChecks {
                    conj_is_negation: conj_dev <= cfg.tol,
                    conj_dev,
                    norm: ci.value.norm(),
                    norm_at_most_one: ci.value.norm() <= 1.0 + cfg.tol,
                },
            };
            write_json(&mut out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolution { nmax } => {
            check_config(&cfg)?;
            let spec = cfg.grid.as_deref().unwrap_or(DEFAULT_RESOLUTION_GRID);
            let [n_r, n_theta, n_phi, n_psi] = parse_node_counts(spec)?;
            let grid = QuadratureGrid::new(MeasureVariant::Plain, n_r, n_theta, n_phi, n_psi)?;
            if nmax == 0 {
                bail!(Error::InvalidArgument("nmax must be positive".into()));
            }
            let n = cfg.truncation.max(nmax);
            let res = resolution_of_identity(nmax, &grid, n, exec)?;
            let mut entries = Vec::with_capacity(nmax * nmax);
            for row in 0..nmax {
                for col in 0..nmax {
                    let value = res.block.get(row, col);
                    let target = if row == col {
                        Quaternion::ONE
                    } else {
                        Quaternion::ZERO
                    };
                    entries.push(ResolutionEntry {
                        row,
                        col,
                        value,
                        deviation: (value - target).max_abs(),
                    });
                }
            }
            let report = ResolutionReport {
                schema: SCHEMA,
                variant: "plain",
                grid: GridParams {
                    n_r,
                    n_theta,
                    n_phi,
                    n_psi,
                    cutoff: grid.cutoff,
                },
                nmax,
                truncation: n,
                entries,
                diagonal_dev: res.diagonal_dev,
                off_diagonal_dev: res.off_diagonal_dev,
                max_dev: res.max_dev,
                passed: res.max_dev <= cfg.tol.max(1e-3),
            };
            write_json(&mut out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn check_config(cfg: &RunConfig) -> anyhow::Result<()> {
    VerifyConfig::new(cfg.truncation, cfg.tol, cfg.seed)?;
    Ok(())
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct CiChecks {
    conj_is_negation: bool,
    conj_dev: f64,
    norm: f64,
    norm_at_most_one: bool,
}

#[derive(Serialize)]
struct CiReport {
    schema: u32,
    q: Quaternion,
    value: Quaternion,
    r: f64,
    axis: Quaternion,
    terms_used: usize,
    checks: CiChecks,
}

#[derive(Serialize)]
struct GridParams {
    n_r: usize,
    n_theta: usize,
    n_phi: usize,
    n_psi: usize,
    cutoff: f64,
}

#[derive(Serialize)]
struct ResolutionEntry {
    row: usize,
    col: usize,
    value: Quaternion,
    deviation: f64,
}

#[derive(Serialize)]
struct ResolutionReport {
    schema: u32,
    variant: &'static str,
    grid: GridParams,
    nmax: usize,
    truncation: usize,
    entries: Vec<ResolutionEntry>,
    diagonal_dev: f64,
    off_diagonal_dev: f64,
    max_dev: f64,
    passed: bool,
}

#[derive(Serialize)]
struct StateVector {
    coefficients: Vec<Quaternion>,
    norm: f64,
}

impl From<FockVector> for StateVector {
    fn from(v: FockVector) -> Self {
        StateVector {
            norm: v.norm(),
            coefficients: v.into_coeffs(),
        }
    }
}

#[derive(Serialize)]
struct StateReport {
    schema: u32,
    truncation: usize,
    #[serde(flatten)]
    state: StateVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta1: Option<StateVector>,
}

fn state<W: Write>(out: &mut W, cfg: &RunConfig, family: StateFamily) -> anyhow::Result<()> {
    let n = cfg.truncation;
    let (truncation, vector, eta1) = match family {
        StateFamily::Coherent { q } => (n, coherent(q, n)?.vector, None),
        StateFamily::PureSqueezed { p } => (n, pure_squeezed(p, n)?, None),
        StateFamily::SqueezedSd { q, p } => (n, squeezed_sd(q, p, n)?, None),
        StateFamily::SqueezedDs { q, p } => (n, squeezed_ds(q, p, n)?, None),
        StateFamily::Fermionic { q } => {
            let pair = fermionic(q);
            (2, pair.eta0, Some(pair.eta1.into()))
        }
    };
    let report = StateReport {
        schema: SCHEMA,
        truncation,
        state: vector.into(),
        eta1,
    };
    write_json(out, &report)
}

#[derive(Serialize)]
struct MandelRow {
    p_abs: f64,
    truncation: usize,
    mean_n: f64,
    mean_n_closed: f64,
    var_n: f64,
    var_n_closed: f64,
    mandel_q: Option<f64>,
    mandel_q_closed: f64,
    difference: f64,
    within_tol: bool,
}

#[derive(Serialize)]
struct VarianceRow {
    p_abs: f64,
    theta: f64,
    truncation: usize,
    product: f64,
    product_closed: f64,
    difference: f64,
    var_u: f64,
    var_v: f64,
    rotated_product: f64,
    within_tol: bool,
}

#[derive(Serialize)]
struct SliceRow {
    family: Family,
    axis: String,
    p_abs: f64,
    theta: f64,
    which: &'static str,
    truncation: usize,
    safe_dim: usize,
    max_dev: f64,
    within_tol: bool,
}

#[derive(Serialize)]
struct TableReport<'a, R> {
    schema: u32,
    sweep: &'a str,
    rows: &'a [R],
}

fn squeeze_param(r: f64, theta: f64) -> Quaternion {
    Quaternion::new(r * theta.cos(), r * theta.sin(), 0.0, 0.0)
}

fn table<W: Write>(
    out: &mut W,
    cfg: &RunConfig,
    sweep: Sweep,
    exec: Execution,
) -> anyhow::Result<()> {
    let format = cfg.format.unwrap_or(Format::Csv);
    let default_spec = match sweep {
        Sweep::Mandel => "0.25,0.5,1.0",
        Sweep::Variances => "0.25,0.5,1.0;0,1.5707963267948966",
        Sweep::TwoPhoton => "0.25,0.5,0.75;0,1.5707963267948966,3.141592653589793",
    };
    let spec = cfg.grid.as_deref().unwrap_or(default_spec);
    match sweep {
        Sweep::Mandel => {
            let (radii, _) = parse_sweep_grid(spec, &[0.0])?;
            let mut rows = Vec::with_capacity(radii.len());
            for r in radii {
                let n = squeeze_truncation(r, cfg.truncation);
                let s = photon_stats(Quaternion::real(r), n)
                    .with_context(|| format!("photon statistics at |p| = {r}"))?;
                let (mean_c, var_c, q_c) = photon_stats_closed(r);
                let mut difference = (s.mean_n - mean_c).abs().max((s.var_n - var_c).abs());
                if let Some(q) = s.mandel_q {
                    difference = difference.max((q - q_c).abs());
                }
                rows.push(MandelRow {
                    p_abs: r,
                    truncation: n,
                    mean_n: s.mean_n,
                    mean_n_closed: mean_c,
                    var_n: s.var_n,
                    var_n_closed: var_c,
                    mandel_q: s.mandel_q,
                    mandel_q_closed: q_c,
                    difference,
                    within_tol: difference <= cfg.tol,
                });
            }
            emit(out, format, "mandel", &rows)
        }
        Sweep::Variances => {
            let (radii, thetas) = parse_sweep_grid(spec, &[0.0, FRAC_PI_2])?;
            let mut rows = Vec::with_capacity(radii.len() * thetas.len());
            for &r in &radii {
                let n = squeeze_truncation(r, cfg.truncation);
                for &theta in &thetas {
                    let p = squeeze_param(r, theta);
                    let product = squeeze_variance_product(p, n)?;
                    let product_closed = squeeze_variance_product_closed(p);
                    let rot = rotated_quadrature_product(p, n)?;
                    let difference = (product - product_closed)
                        .abs()
                        .max((rot.product - 0.25).abs());
                    rows.push(VarianceRow {
                        p_abs: r,
                        theta,
                        truncation: n,
                        product,
                        product_closed,
                        difference,
                        var_u: rot.var_u,
                        var_v: rot.var_v,
                        rotated_product: rot.product,
                        within_tol: difference <= cfg.tol,
                    });
                }
            }
            emit(out, format, "variances", &rows)
        }
        Sweep::TwoPhoton => {
            let (radii, thetas) = parse_sweep_grid(spec, &[0.0, FRAC_PI_2])?;
            let table = verification_table(&test_axes(), &radii, &thetas, cfg.truncation, exec)?;
            let rows: Vec<SliceRow> = table
                .into_iter()
                .map(|row| SliceRow {
                    family: row.family,
                    axis: row.axis.to_string(),
                    p_abs: row.p_abs,
                    theta: row.theta_p,
                    which: row.which.name(),
                    truncation: row.truncation,
                    safe_dim: row.safe_dim,
                    max_dev: row.max_dev,
                    within_tol: row.max_dev <= cfg.tol,
                })
                .collect();
            emit(out, format, "two_photon", &rows)
        }
    }
}

fn emit<W: Write, R: Serialize>(
    out: &mut W,
    format: Format,
    sweep: &str,
    rows: &[R],
) -> anyhow::Result<()> {
    match format {
        Format::Json => write_json(
            out,
            &TableReport {
                schema: SCHEMA,
                sweep,
                rows,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
