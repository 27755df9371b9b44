//! Command-line driver for `gasket-core`: argument parsing, text formats for
//! certificates and a priori reports, the report cache and the SVG renderer.
//!
//! Exit codes: `0` success (and, for `certify`/`apriori`, every claim backed by
//! a completed certified computation), `1` a computation or verification
//! failure, `2` invalid arguments or configuration.

pub mod cache;
pub mod emcheck;
pub mod format;
pub mod render;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use gasket_core::apriori::{verify_all, AprioriConfig, VerifiedConstants};
use gasket_core::certify::{
    certify_from_estimate, estimate_dimension, phi_from_values, CertifyConfig, DimensionCertificate, Estimate,
};
use gasket_core::chebyshev::{hardy_norm_bound, projection_error};
use gasket_core::euler_maclaurin::PlanOverrides;
use gasket_core::operator::{chebyshev_order, AprioriConstants};
use gasket_core::Error as CoreError;
use log::info;

use crate::cache::ReportCache;
use crate::format::{certificate_to_string, constants_from_doc, reports_to_string, KvDoc, ReportSet};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable giving the default worker count.
pub const THREADS_ENV: &str = "GASKET_THREADS";

#[derive(Parser, Debug)]
#[command(name = "gasket", version, about = "Certified Hausdorff dimension of the Apollonian gasket")]
pub struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Log progress to stderr (RUST_LOG overrides).
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Non-rigorous secant search for the dimension.
    Estimate(EstimateArgs),
    /// Certified enclosure of the dimension; writes a certificate.
    Certify(CertifyArgs),
    /// Verify the a priori constants on box subdivisions.
    Apriori(AprioriArgs),
    /// Compare accelerated sums with closed forms and brute-force sums.
    EmCheck(EmCheckArgs),
    /// Draw the gasket as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Target accuracy ε = 2^-bits.
    #[arg(long, default_value_t = 60)]
    pub eps_bits: u32,
    /// Working precision in bits (default 2·eps-bits).
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Chebyshev order per axis.
    #[arg(long)]
    pub k: Option<usize>,
    /// Euler–Maclaurin head length.
    #[arg(long)]
    pub n: Option<u64>,
    /// Number of Bernoulli correction terms.
    #[arg(long)]
    pub l: Option<usize>,
    /// Quadrature nodes for the tail integral.
    #[arg(long)]
    pub m: Option<usize>,
    /// Nodes for the derivative contour integrals.
    #[arg(long)]
    pub mp: Option<usize>,
    /// Use the y → −y symmetry to halve the matrix (default).
    #[arg(long, overrides_with = "no_y_even")]
    pub y_even: bool,
    #[arg(long, overrides_with = "y_even")]
    pub no_y_even: bool,
    /// A priori constants file (default: the built-in values).
    #[arg(long)]
    pub constants: Option<PathBuf>,
}

impl RunArgs {
    pub fn certify_config(&self) -> CertifyConfig {
        CertifyConfig {
            precision: self.precision_bits,
            k: self.k,
            overrides: PlanOverrides { n: self.n, l: self.l, m: self.m, mp: self.mp },
            y_even: !self.no_y_even,
            ..CertifyConfig::new(self.eps_bits)
        }
    }
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Certificate path.
    #[arg(long, default_value = "certificate.txt")]
    pub out: PathBuf,
    /// Run the a priori verification if no cached reports exist.
    #[arg(long)]
    pub run_apriori: bool,
    /// Cells per axis for the a priori verification.
    #[arg(long, default_value_t = 40)]
    pub subdivision: usize,
    /// Report cache directory (default $GASKET_CACHE_DIR or ./.gasket-cache).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AprioriArgs {
    /// Cells per axis of the initial grid.
    #[arg(long, default_value_t = 40)]
    pub subdivision: usize,
    /// Interval precision in bits.
    #[arg(long, default_value_t = 64)]
    pub precision_bits: u32,
    /// A priori constants file (default: the built-in values).
    #[arg(long)]
    pub constants: Option<PathBuf>,
    /// Also write the reports to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Recompute even if cached reports exist.
    #[arg(long)]
    pub fresh: bool,
    /// Report cache directory (default $GASKET_CACHE_DIR or ./.gasket-cache).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EmCheckArgs {
    /// Plan accuracy ε = 2^-bits.
    #[arg(long, default_value_t = 60)]
    pub eps_bits: u32,
    /// Terms in the brute-force partial sums.
    #[arg(long, default_value_t = 1_000_000)]
    pub terms: u64,
    #[arg(long, default_value_t = 128)]
    pub precision_bits: u32,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Word length of the generator compositions.
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Image side in pixels.
    #[arg(long, default_value_t = 800)]
    pub size: u32,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Marks an error as a usage/configuration problem (exit code 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn exit_code_for(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<UsageError>() || matches!(cause.downcast_ref::<CoreError>(), Some(CoreError::Parameter(_))) {
            return EXIT_USAGE;
        }
    }
    EXIT_FAILED
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(UsageError("--threads must be positive".into()).into());
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building the worker pool")?;
    info!("{} worker threads", pool.current_num_threads());
    pool.install(|| match &cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Apriori(a) => cmd_apriori(a),
        Command::EmCheck(a) => cmd_em_check(a),
        Command::Render(a) => cmd_render(a),
    })
}

/// Reads a constants file; any document with the seven constant keys works.
pub fn load_constants(path: Option<&Path>) -> anyhow::Result<AprioriConstants> {
    let Some(path) = path else { return Ok(AprioriConstants::default()) };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = KvDoc::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    constants_from_doc(&doc).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// RFC 3339 time from `SOURCE_DATE_EPOCH` when set, else the current time.
pub fn timestamp() -> String {
    use chrono::{DateTime, SecondsFormat, Utc};
    let t = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| DateTime::<Utc>::from_timestamp(s, 0))
        .unwrap_or_else(Utc::now);
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Validates the configuration (plan invariants included) before any heavy work.
fn check_config(cfg: &CertifyConfig, constants: &AprioriConstants) -> anyhow::Result<()> {
    cfg.template(constants).map(|_| ()).map_err(|e| UsageError(format!("invalid configuration: {e}")).into())
}

/// `W_A·‖φ‖·E_{2,K}(R_A)`: the interpolation part of the certified error,
/// evaluated at the estimate. Compares the chosen `K` against `ε`.
pub fn discretization_error(est: &Estimate) -> f64 {
    let params = &est.params;
    let c = params.constants;
    let phi = phi_from_values(params, &est.eigen.phi_values);
    let vnorm = hardy_norm_bound(&phi, c.r_small).to_f64();
    let e = projection_error(2, params.k, c.r_big, 64).map(|x| x.to_f64()).unwrap_or(f64::INFINITY);
    c.w * vnorm * e
}

pub fn estimate_doc(cfg: &CertifyConfig, est: &Estimate) -> KvDoc {
    let mut doc = KvDoc::new();
    doc.comment("non-rigorous estimate (floating point, no enclosure)");
    doc.push("format", "gasket-estimate/1");
    doc.push("status", "non-rigorous");
    doc.push_float("s_star", &est.s_star);
    doc.push_float("lambda", &est.lambda);
    doc.push("iterations", est.iterations);
    doc.push("eps_bits", cfg.eps_bits);
    doc.push("precision", est.params.prec());
    doc.push("k", est.params.k);
    let plan = &est.params.plan;
    doc.push("n", plan.n);
    doc.push("l", plan.l);
    doc.push("m", plan.m);
    doc.push("mp", plan.mp);
    doc.push("y_even", est.params.y_even);
    for (i, (s, l)) in est.history.iter().enumerate() {
        doc.push(format!("history.{i}.s"), format::float_to_string(s));
        doc.push(format!("history.{i}.lambda"), format::float_to_string(l));
    }
    let d = discretization_error(est);
    let required = chebyshev_order(cfg.epsilon(), est.params.constants.r_big);
    doc.push("discretization_error", format!("{d:e}"));
    doc.push("required_k", required);
    doc.push("discretization_limited", est.params.k < required);
    doc
}

fn cmd_estimate(a: &EstimateArgs) -> anyhow::Result<u8> {
    let constants = load_constants(a.run.constants.as_deref())?;
    let cfg = a.run.certify_config();
    check_config(&cfg, &constants)?;
    let t = Instant::now();
    let est = estimate_dimension(&cfg, &constants).context("secant search failed")?;
    info!("estimate took {:.1?}", t.elapsed());
    let doc = estimate_doc(&cfg, &est);
    let text = doc.render();
    print!("{text}");
    if doc.get("discretization_limited") == Some("true") {
        eprintln!(
            "warning: K = {} is below the order {} required for eps = 2^-{}; interpolation error estimate {}",
            est.params.k,
            doc.get("required_k").unwrap_or("?"),
            cfg.eps_bits,
            doc.get("discretization_error").unwrap_or("?")
        );
    }
    if let Some(out) = &a.out {
        write_file(out, &text)?;
    }
    Ok(EXIT_OK)
}

/// Runs the four claims and stores the result in `cache`.
pub fn run_apriori(constants: &AprioriConstants, cfg: &AprioriConfig, cache: &ReportCache) -> anyhow::Result<ReportSet> {
    let t = Instant::now();
    let reports = verify_all(constants, cfg);
    info!("a priori verification took {:.1?}", t.elapsed());
    let set = ReportSet { config: cfg.clone(), constants: *constants, reports };
    match cache.store(&set) {
        Ok(p) => info!("cached reports in {}", p.display()),
        Err(e) => log::warn!("could not cache reports in {}: {e}", cache.dir().display()),
    }
    Ok(set)
}

fn cmd_apriori(a: &AprioriArgs) -> anyhow::Result<u8> {
    let constants = load_constants(a.constants.as_deref())?;
    let cfg = AprioriConfig { subdivision: a.subdivision, prec: a.precision_bits, ..AprioriConfig::default() };
    if cfg.subdivision == 0 || cfg.prec < 32 {
        bail!(UsageError("--subdivision must be positive and --precision-bits at least 32".into()));
    }
    let cache = ReportCache::locate(a.cache_dir.as_deref());
    let set = match (a.fresh, cache.load(&constants, &cfg)) {
        (false, Some(set)) => {
            info!("using cached reports");
            set
        }
        _ => run_apriori(&constants, &cfg, &cache)?,
    };
    let text = reports_to_string(&set);
    print!("{text}");
    if let Some(out) = &a.out {
        write_file(out, &text)?;
    }
    for r in &set.reports {
        let status = if r.passed { format!("pass (slack {:e})", r.slack) } else { format!("FAIL: {}", r.message) };
        eprintln!("{:<20} {status}", r.claim.id());
    }
    Ok(if set.all_passed() { EXIT_OK } else { EXIT_FAILED })
}

/// A non-certified record written next to the requested certificate path
/// when the certified stage fails after an estimate exists.
fn uncertified_doc(cfg: &CertifyConfig, est: &Estimate, reason: &str) -> KvDoc {
    let est_doc = estimate_doc(cfg, est);
    let mut doc = KvDoc::new();
    doc.comment("NOT CERTIFIED: the certified stage failed; nothing here is a proof");
    doc.push("format", "gasket-uncertified/1");
    for (k, v) in est_doc.entries().iter().filter(|(k, _)| k != "format") {
        doc.push(k.clone(), v);
    }
    doc.push("status_reason", reason);
    doc
}

pub fn uncertified_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".uncertified");
    PathBuf::from(s)
}

fn cmd_certify(a: &CertifyArgs) -> anyhow::Result<u8> {
    let constants = load_constants(a.run.constants.as_deref())?;
    let cfg = a.run.certify_config();
    check_config(&cfg, &constants)?;
    let acfg = AprioriConfig::with_subdivision(a.subdivision);
    if acfg.subdivision == 0 {
        bail!(UsageError("--subdivision must be positive".into()));
    }
    let cache = ReportCache::locate(a.cache_dir.as_deref());
    let set = match cache.load(&constants, &acfg) {
        Some(set) => set,
        None if a.run_apriori => run_apriori(&constants, &acfg, &cache)?,
        None => bail!(
            "no a priori reports for these constants at subdivision {} in {}; run `gasket apriori` or pass --run-apriori",
            a.subdivision,
            cache.dir().display()
        ),
    };
    let verified = VerifiedConstants::from_reports(constants, &set.reports).context("refusing to certify")?;

    let t = Instant::now();
    let est = estimate_dimension(&cfg, &constants).context("secant search failed")?;
    let cert = match certify_from_estimate(&cfg, &verified, &est) {
        Ok(c) => c,
        Err(e) => {
            let path = uncertified_path(&a.out);
            write_file(&path, &uncertified_doc(&cfg, &est, &e.to_string()).render())?;
            return Err(anyhow!(e).context(format!("certification failed (estimate written to {})", path.display())));
        }
    };
    info!("certificate computed in {:.1?}", t.elapsed());
    let cert = DimensionCertificate { timestamp: timestamp(), ..cert };
    write_file(&a.out, &certificate_to_string(&cert))?;
    println!("s in [{}, {}]", cert.s_lo.to_string_radix(10, Some(25)), cert.s_hi.to_string_radix(10, Some(25)));
    println!("width {:e}", cert.width().to_f64());
    println!("certified digits ({}): {}", cert.certified_digits, cert.digits);
    println!("certificate written to {}", a.out.display());
    Ok(EXIT_OK)
}

fn cmd_em_check(a: &EmCheckArgs) -> anyhow::Result<u8> {
    if !(21..=1000).contains(&a.eps_bits) || a.terms == 0 || a.precision_bits < 64 {
        bail!(UsageError("need 21 <= --eps-bits <= 1000, --terms > 0, --precision-bits >= 64".into()));
    }
    let cfg = emcheck::EmCheckConfig { eps_bits: a.eps_bits, terms: a.terms, prec: a.precision_bits };
    let results = emcheck::run(&cfg)?;
    let mut ok = true;
    for r in &results {
        ok &= r.passed;
        println!("{} {}: {}", if r.passed { "pass" } else { "FAIL" }, r.name, r.detail);
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_render(a: &RenderArgs) -> anyhow::Result<u8> {
    if a.depth > 12 || a.size == 0 {
        bail!(UsageError("--depth must be at most 12 and --size positive".into()));
    }
    let svg = render::svg(a.depth, a.size);
    match &a.out {
        Some(p) => write_file(p, &svg)?,
        None => print!("{svg}"),
    }
    Ok(EXIT_OK)
}
