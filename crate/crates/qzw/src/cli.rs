//! Command-line front end: configuration, dispatch and CSV/JSON output.
//!
//! Every CSV file starts with one comment line `# {json}` holding the command,
//! the resolved configuration and the seed, followed by a header row.

use crate::boundary_approx::{approx_boundary_link, lln_check, ApproxOptions, BoundaryPoint};
use crate::graph_links::{branching_identity_check, link_compose, link_row, ComposeOptions, ComposeStrategy, RowEntry};
use crate::lattice::{random_configuration, Configuration, ConfigurationFile, LatticeParams, LatticePoint, TailSpec};
use crate::limit_kernel::BoundaryKernel;
use crate::verify::{self, CheckResult, VerifyConfig};
use crate::zw_measures::{DppSampler, EnsembleN, GibbsEnsembleSampler, ParamQuadruple};
use crate::{boundary_approx, stream_rng};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
    #[error("{0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed { .. } => 2,
            _ => 1,
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

/// JSON run configuration. Complex numbers are `[re, im]`; missing fields
/// take the reference values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub q: f64,
    pub zeta_minus: f64,
    pub zeta_plus: f64,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
    pub delta: [f64; 2],
    /// Negligibility threshold for truncations: window intensities and
    /// pruning of composed rows.
    pub tol: f64,
    /// Lattice sums stop at `|x| = q^tail_exponent` near zero and at
    /// `q^-tail_exponent` near infinity.
    pub tail_exponent: i64,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 0.5,
            zeta_minus: -1.0,
            zeta_plus: 1.0,
            alpha: [1.0, 1.0],
            beta: [1.0, -1.0],
            gamma: [8.0, 8.0],
            delta: [8.0, -8.0],
            tol: 1e-12,
            tail_exponent: 64,
            seed: 0,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn lattice(&self) -> Result<LatticeParams, CliError> {
        LatticeParams::new(self.q, self.zeta_minus, self.zeta_plus).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn quadruple(&self) -> Result<ParamQuadruple, CliError> {
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        ParamQuadruple::new(c(self.alpha), c(self.beta), c(self.gamma), c(self.delta), &self.lattice()?)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn tail(&self) -> Result<TailSpec, CliError> {
        let lat = self.lattice()?;
        let lo = lat.zeta_plus.min(-lat.zeta_minus);
        let hi = lat.zeta_plus.max(-lat.zeta_minus);
        Ok(TailSpec { cutoff: lat.q.pow(self.tail_exponent) * lo, cap: lat.q.pow(-self.tail_exponent) * hi })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.tail_exponent < 1 {
            return Err(CliError::Config("tail_exponent must be positive".into()));
        }
        self.quadruple().map(|_| ())
    }
}

#[derive(Parser, Debug)]
#[command(name = "qzw", version, about = "q-links, pseudo big q-Jacobi ensembles and boundary kernels on a double q-lattice")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory (falls back to QZW_OUT_DIR, then the config, then `qzw-out`).
    #[arg(long, global = true, env = "QZW_OUT_DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// q-links between levels.
    #[command(subcommand)]
    Links(LinksCmd),
    /// Pseudo big q-Jacobi identities.
    #[command(subcommand)]
    Pbqj(PbqjCmd),
    /// Finite-N ensembles.
    #[command(subcommand)]
    Zw(ZwCmd),
    /// Boundary kernel.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Finite-level approximation of boundary points.
    #[command(subcommand)]
    Boundary(BoundaryCmd),
    /// Run the full acceptance suite.
    VerifyAll,
}

#[derive(Args, Debug, Clone)]
pub struct PointsArg {
    /// Comma-separated points such as `+q^0,-q^2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<LatticePoint>,
    /// Configuration file `{"q", "zeta_minus", "zeta_plus", "points"}`; its
    /// lattice replaces the configured one.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum LinksCmd {
    /// Row `Λ(X, ·)` as a JSON array of {configuration, probability}.
    Row(PointsArg),
    /// Row of the composed link down to level `k`.
    Compose {
        #[command(flatten)]
        x: PointsArg,
        #[arg(long)]
        k: usize,
        /// Monte-Carlo paths; exact composition when omitted.
        #[arg(long)]
        paths: Option<usize>,
    },
    /// Schur-function branching identity for one signature.
    VerifyBranching {
        #[command(flatten)]
        x: PointsArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Vec<i64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PbqjCmd {
    /// Orthogonality, closed-form h_0 and backward-shift checks.
    Verify,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Method {
    Dpp,
    Gibbs,
}

#[derive(Subcommand, Debug)]
pub enum ZwCmd {
    /// Kernel matrix `K_N` on given points or on the adaptive window.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<LatticePoint>,
    },
    /// Draws from the N-particle measure.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long, value_enum, default_value_t = Method::Dpp)]
        method: Method,
        #[arg(long, default_value_t = 50)]
        sweeps: usize,
    },
    /// `M_{N+1} Λ = M_N` at random configurations of level `n`.
    VerifyCoherency {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum KernelCmd {
    /// `K(x, y)` for one pair.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        x: LatticePoint,
        #[arg(long, allow_hyphen_values = true)]
        y: LatticePoint,
    },
    /// `K_N(x, y)` against `K(x, y)` along a schedule of levels.
    Converge {
        #[arg(long, allow_hyphen_values = true)]
        x: LatticePoint,
        #[arg(long, allow_hyphen_values = true)]
        y: LatticePoint,
        #[arg(long, value_delimiter = ',', default_value = "10,15,20,25,30")]
        schedule: Vec<usize>,
    },
    /// Correlation function of a point set, finite N against the limit.
    Correlations {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        points: Vec<LatticePoint>,
        #[arg(long, value_delimiter = ',', default_value = "10,15,20,25,30")]
        schedule: Vec<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum PrefixKind {
    /// `{q^{2k}}`
    Sparse,
    /// `{±q^k}`
    TwoSided,
}

#[derive(Subcommand, Debug)]
pub enum BoundaryCmd {
    /// Rows `Λ^N_K(X(N), ·)` along a schedule, with optional law-of-large-numbers table.
    Approx {
        #[arg(long, value_enum, default_value_t = PrefixKind::Sparse)]
        prefix: PrefixKind,
        #[arg(long, default_value_t = 16)]
        len: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9")]
        schedule: Vec<usize>,
        #[arg(long, default_value_t = 20_000)]
        paths: usize,
        /// Levels for the `P[y_(1) = x_(1)]` table.
        #[arg(long, value_delimiter = ',')]
        lln_levels: Vec<usize>,
        #[arg(long, default_value_t = 4000)]
        lln_samples: usize,
    },
}

/// Resolved configuration and output location for one invocation.
pub struct Context {
    pub config: RunConfig,
    pub out: PathBuf,
    pub command: String,
}

impl Context {
    fn meta(&self, extra: serde_json::Value) -> serde_json::Value {
        json!({ "command": self.command, "config": self.config, "extra": extra })
    }

    fn path(&self, name: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out)?;
        Ok(self.out.join(name))
    }

    pub fn write_csv(&self, name: &str, extra: serde_json::Value, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
        let path = self.path(name)?;
        let mut buf = format!("# {}\n", serde_json::to_string(&self.meta(extra))?).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        fs::write(&path, buf)?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.path(name)?;
        fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
        Ok(path)
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn points_of(arg: &PointsArg, lat: LatticeParams) -> Result<(LatticeParams, Configuration), CliError> {
    if let Some(p) = &arg.input {
        let text = fs::read_to_string(p)?;
        let file: ConfigurationFile = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
        return file.parts().map_err(|e| CliError::Config(e.to_string()));
    }
    if arg.points.is_empty() {
        return Err(CliError::Config("give --points or --input".into()));
    }
    let x = Configuration::from_unsorted(arg.points.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((lat, x))
}

/// Shortest round-trip form, scientific outside `[1e-4, 1e6)`.
fn f(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn row_entries(row: &crate::graph_links::LinkRow) -> serde_json::Value {
    json!({
        "source": row.source,
        "tail_mass_bound": row.tail_mass_bound,
        "samples": row.samples,
        "entries": row.to_entries(),
    })
}

fn report_lines(results: &[CheckResult]) -> Vec<Vec<String>> {
    results
        .iter()
        .map(|r| vec![r.id.to_string(), r.name.clone(), f(r.tolerance), f(r.measured), r.passed.to_string(), r.detail.clone()])
        .collect()
}

fn finish_checks(ctx: &Context, name: &str, results: Vec<CheckResult>) -> Result<(), CliError> {
    for r in &results {
        println!("{}", r.line());
    }
    let p = ctx.write_csv(
        &format!("{name}.csv"),
        json!({}),
        &["id", "name", "tolerance", "measured", "passed", "detail"],
        &report_lines(&results),
    )?;
    ctx.write_json(&format!("{name}.json"), &results)?;
    println!("wrote {}", p.display());
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        println!("{}", serde_json::to_string(&results.iter().filter(|r| !r.passed).collect::<Vec<_>>())?);
        return Err(CliError::CheckFailed { failed, total: results.len() });
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(&cli)?;
    if let Some(n) = cli.threads {
        // a pool can only be installed once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = cli.out.clone().or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("qzw-out"));
    let lat = config.lattice()?;
    let quad = config.quadruple()?;
    let tail = config.tail()?;
    let seed = config.seed;
    let tol = config.tol;
    let command = match &cli.command {
        Command::Links(c) => format!("links {}", sub_name(c)),
        Command::Pbqj(_) => "pbqj verify".into(),
        Command::Zw(c) => format!("zw {}", sub_name(c)),
        Command::Kernel(c) => format!("kernel {}", sub_name(c)),
        Command::Boundary(_) => "boundary approx".into(),
        Command::VerifyAll => "verify-all".into(),
    };
    let ctx = Context { config: config.clone(), out, command };
    let vcfg = VerifyConfig { lattice: lat, quadruple: quad, seed };
    match cli.command {
        Command::Links(LinksCmd::Row(arg)) => {
            let (lat, x) = points_of(&arg, lat)?;
            let row = link_row(&lat, &x, &tail).map_err(compute)?;
            println!("{} entries, mass {}, tail bound {:e}", row.entries.len(), row.mass(), row.tail_mass_bound);
            let p = ctx.write_json("links_row.json", &row.to_entries())?;
            println!("wrote {}", p.display());
        }
        Command::Links(LinksCmd::Compose { x, k, paths }) => {
            let (lat, x) = points_of(&x, lat)?;
            let strategy = match paths {
                Some(paths) => ComposeStrategy::MonteCarlo { paths, seed },
                None => ComposeStrategy::Exact { prune: tol },
            };
            let opts = ComposeOptions { tail, ..ComposeOptions::default_for(&lat) };
            let row = link_compose(&lat, &x, k, strategy, &opts).map_err(compute)?;
            println!("{} entries, mass {}, tail bound {:e}", row.entries.len(), row.mass(), row.tail_mass_bound);
            let entries: Vec<RowEntry> = row.to_entries();
            let p = ctx.write_json("links_compose.json", &entries)?;
            ctx.write_json("links_compose_meta.json", &row_entries(&row))?;
            println!("wrote {}", p.display());
        }
        Command::Links(LinksCmd::VerifyBranching { x, k, nu }) => {
            let (lat, x) = points_of(&x, lat)?;
            let opts = ComposeOptions { tail, ..ComposeOptions::default_for(&lat) };
            let (lhs, rhs, err) = branching_identity_check(&lat, &x, k, &nu, &opts, 0.0).map_err(compute)?;
            println!("lhs {lhs} rhs {rhs} rel {:e} bound {err:e}", (lhs - rhs).abs() / rhs.abs());
            let p = ctx.write_csv(
                "links_verify_branching.csv",
                json!({ "x": x, "k": k, "nu": nu }),
                &["lhs", "rhs", "rel_err", "tail_bound"],
                &[vec![f(lhs), f(rhs), f((lhs - rhs).abs() / rhs.abs()), f(err)]],
            )?;
            println!("wrote {}", p.display());
        }
        Command::Pbqj(PbqjCmd::Verify) => {
            let results = vec![verify::pbqj_orthogonality(&vcfg), verify::h0_closed_form(&vcfg), verify::backward_shift(&vcfg)];
            finish_checks(&ctx, "pbqj_verify", results)?;
        }
        Command::Zw(ZwCmd::Kernel { n, points }) => {
            let ens = EnsembleN::new(quad, lat, n).map_err(compute)?;
            let pts = if points.is_empty() { ens.window(tol).map_err(compute)? } else { points };
            let m = ens.kernel_matrix(&pts).map_err(compute)?;
            let mut rows = Vec::new();
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    rows.push(vec![pts[i].to_string(), pts[j].to_string(), f(m[(i, j)])]);
                }
            }
            let window: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
            let p = ctx.write_csv("zw_kernel.csv", json!({ "n": n, "window": window, "trace": m.trace() }), &["x", "y", "K"], &rows)?;
            println!("{} points, trace {}", pts.len(), m.trace());
            println!("wrote {}", p.display());
        }
        Command::Zw(ZwCmd::Sample { n, draws, method, sweeps }) => {
            let ens = EnsembleN::new(quad, lat, n).map_err(compute)?;
            let mut rng = stream_rng(seed, 0);
            let samples: Vec<Configuration> = match method {
                Method::Dpp => {
                    let s = DppSampler::new(&ens, tol, 1e-6).map_err(compute)?;
                    (0..draws).map(|_| s.sample(&mut rng)).collect()
                }
                Method::Gibbs => {
                    let s = GibbsEnsembleSampler::new(&ens, tol, sweeps).map_err(compute)?;
                    (0..draws).map(|_| s.sample(&mut rng)).collect()
                }
            };
            let rows: Vec<Vec<String>> = samples.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect();
            let p = ctx.write_csv("zw_sample.csv", json!({ "n": n, "method": format!("{method:?}") }), &["draw", "configuration"], &rows)?;
            println!("wrote {}", p.display());
        }
        Command::Zw(ZwCmd::VerifyCoherency { n, count }) => {
            let lower = EnsembleN::new(quad, lat, n).map_err(compute)?;
            let upper = EnsembleN::new(quad, lat, n + 1).map_err(compute)?;
            let ctail = TailSpec { cutoff: lat.q.pow(45), cap: lat.q.pow(-14) };
            let mut rng = stream_rng(seed, 8);
            let mut rows = Vec::new();
            for _ in 0..count {
                let y = random_configuration(n, -2, 4, &mut rng);
                let (lhs, rhs, t) = upper.coherency_check(&lower, &y, &ctail).map_err(compute)?;
                rows.push(vec![y.to_string(), f(lhs), f(rhs), f((lhs - rhs).abs() / rhs), f(t)]);
            }
            for r in &rows {
                println!("{}", r.join("  "));
            }
            let p = ctx.write_csv("zw_verify_coherency.csv", json!({ "n": n }), &["y", "lhs", "rhs", "rel_err", "tail_estimate"], &rows)?;
            println!("wrote {}", p.display());
        }
        Command::Kernel(KernelCmd::Eval { x, y }) => {
            let bk = BoundaryKernel::new(quad, lat).map_err(compute)?;
            let k = bk.eval(&x, &y).map_err(compute)?;
            println!("K({x}, {y}) = {k}");
            let p = ctx.write_csv("kernel_eval.csv", json!({}), &["x", "y", "K"], &[vec![x.to_string(), y.to_string(), f(k)]])?;
            println!("wrote {}", p.display());
        }
        Command::Kernel(KernelCmd::Converge { x, y, schedule }) => {
            let bk = BoundaryKernel::new(quad, lat).map_err(compute)?;
            let k = bk.eval(&x, &y).map_err(compute)?;
            let mut rows = Vec::new();
            for n in schedule {
                let ens = EnsembleN::new(quad, lat, n).map_err(compute)?;
                let kn = ens.kernel(&x, &y).map_err(compute)?;
                rows.push(vec![n.to_string(), f(kn), f(k), f((kn.abs() - k.abs()).abs())]);
            }
            for r in &rows {
                println!("{}", r.join("  "));
            }
            let p = ctx.write_csv("kernel_converge.csv", json!({ "x": x, "y": y }), &["n", "K_N", "K", "abs_gap"], &rows)?;
            println!("wrote {}", p.display());
        }
        Command::Kernel(KernelCmd::Correlations { points, schedule }) => {
            let table = boundary_approx::correlation_convergence(quad, lat, &schedule, &points).map_err(compute)?;
            let rows: Vec<Vec<String>> = table.iter().map(|r| vec![r.n.to_string(), f(r.finite), f(r.boundary), f(r.gap)]).collect();
            for r in &rows {
                println!("{}", r.join("  "));
            }
            let pts: Vec<String> = points.iter().map(|p| p.to_string()).collect();
            let p = ctx.write_csv("kernel_correlations.csv", json!({ "points": pts }), &["n", "rho_N", "rho", "gap"], &rows)?;
            println!("wrote {}", p.display());
        }
        Command::Boundary(BoundaryCmd::Approx { prefix, len, k, schedule, paths, lln_levels, lln_samples }) => {
            let bp = match prefix {
                PrefixKind::Sparse => BoundaryPoint::sparse_positive(lat, len),
                PrefixKind::TwoSided => BoundaryPoint::two_sided(lat, len),
            };
            let opts = ApproxOptions { paths, seed, prune: tol, ..ApproxOptions::default_for(&lat) };
            let rep = approx_boundary_link(&bp, k, &schedule, &opts).map_err(compute)?;
            let rows: Vec<Vec<String>> = rep
                .steps
                .iter()
                .map(|s| {
                    vec![
                        s.n.to_string(),
                        if s.row.samples.is_some() { "monte-carlo" } else { "exact" }.to_string(),
                        s.row.entries.len().to_string(),
                        f(s.row.mass()),
                        f(s.row.tail_mass_bound),
                        s.tv_to_previous.map(f).unwrap_or_default(),
                    ]
                })
                .collect();
            for r in &rows {
                println!("{}", r.join("  "));
            }
            let meta = json!({ "prefix": format!("{prefix:?}"), "len": len, "k": k, "tail_bound": bp.tail_bound, "stabilized_at": rep.stabilized_at });
            let p = ctx.write_csv("boundary_approx.csv", meta, &["n", "method", "support", "mass", "tail_bound", "tv_to_previous"], &rows)?;
            println!("wrote {}", p.display());
            if !lln_levels.is_empty() {
                let table = lln_check(&bp, 1, &lln_levels, lln_samples, seed, &opts).map_err(compute)?;
                let rows: Vec<Vec<String>> =
                    table.iter().map(|r| vec![r.level.to_string(), f(r.estimate), f(r.std_error), r.samples.to_string()]).collect();
                let p = ctx.write_csv("boundary_lln.csv", json!({ "prefix": format!("{prefix:?}"), "len": len }), &["level", "estimate", "std_error", "samples"], &rows)?;
                println!("wrote {}", p.display());
            }
        }
        Command::VerifyAll => {
            let results = verify::run_all(&vcfg);
            finish_checks(&ctx, "verify_all", results)?;
        }
    }
    Ok(())
}

fn sub_name<T: std::fmt::Debug>(c: &T) -> String {
    let s = format!("{c:?}");
    let head: String = s.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qzw: {e}");
            e.exit_code()
        }
    }
}

/// File contents without the `# {json}` header line.
pub fn read_csv_body(path: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(text.lines().skip(1).collect::<Vec<_>>().join("\n"))
}
