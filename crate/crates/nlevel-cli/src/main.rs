//! Batch experiment runner: configuration, zero-cache management, and
//! JSONL result emission for the number-theory and random-matrix
//! pipelines.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use nlevel_core::cache::ZeroCache;
use nlevel_core::dirichlet::enumerate_primitive;
use nlevel_core::ntstat::{
    als_sum_exact, d_weight_asymptotic, d_weight_exact, l0_statistic, l1_statistic, ZeroSource,
};
use nlevel_core::prediction::{
    arithmetic_constant, euler_b4, euler_b5, euler_b6, i_integral, main_term,
};
use nlevel_core::rmt::{finite_n_density, monte_carlo_density, rmt_prediction};
use nlevel_core::testfn::C4Family;
use nlevel_core::weight::WeightFunction;
use nlevel_core::zeros::verify_explicit_formula;

#[derive(Parser)]
#[command(name = "nlevel", about = "n-level density experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// TOML experiment configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// output directory for JSONL artifacts
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// zero-cache directory (flag > NLEVEL_CACHE > config > ./zero-cache)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy, PartialEq)]
enum Cmd {
    /// Populate the zero cache for all moduli in (Q, 2Q]
    Zeros,
    /// Empirical zero statistic over the family, normalized by D
    Empirical,
    /// Exact off-diagonal character sum at finite Q
    Als,
    /// Q → ∞ main term over the partition lattice
    Predict,
    /// CUE statistics: exact finite-N density, Monte Carlo, prediction
    Rmt,
    /// Explicit-formula residuals for all primitive characters q ≤ q_max
    VerifyExplicit,
    /// Arithmetic constants and Euler-product values with tail bounds
    Constants,
    /// Side-by-side comparison of all evaluators with discrepancies
    Matchup,
}

impl Cmd {
    fn name(self) -> &'static str {
        match self {
            Cmd::Zeros => "zeros",
            Cmd::Empirical => "empirical",
            Cmd::Als => "als",
            Cmd::Predict => "predict",
            Cmd::Rmt => "rmt",
            Cmd::VerifyExplicit => "verify-explicit",
            Cmd::Constants => "constants",
            Cmd::Matchup => "matchup",
        }
    }
}

fn default_family() -> Vec<String> {
    vec!["hat:1".into()]
}
fn default_matrix_size() -> usize {
    20
}
fn default_samples() -> usize {
    10_000
}
fn default_height() -> f64 {
    60.0
}
fn default_gh() -> usize {
    40
}
fn default_statistic() -> String {
    "l1".into()
}
fn default_pmod() -> u64 {
    1
}
fn default_tvals() -> Vec<f64> {
    vec![0.0, 1.0]
}
fn default_qmax() -> u64 {
    20
}
fn default_qref() -> f64 {
    1e6
}
fn default_seed() -> u64 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    schema_version: u32,
    #[serde(default = "default_family")]
    family: Vec<String>,
    #[serde(default)]
    q: Option<f64>,
    #[serde(default)]
    q_list: Vec<f64>,
    #[serde(default = "default_matrix_size")]
    matrix_size: usize,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_height")]
    zero_height: f64,
    #[serde(default = "default_gh")]
    gh_order: usize,
    /// "l0" or "l1"
    #[serde(default = "default_statistic")]
    statistic: String,
    #[serde(default = "default_pmod")]
    p_modulus: u64,
    /// second factor list for `als` (defaults to `family`)
    #[serde(default)]
    b_family: Vec<String>,
    #[serde(default = "default_tvals")]
    t_values: Vec<f64>,
    #[serde(default = "default_qmax")]
    q_max: u64,
    /// scale entering 𝒰 = log Q / 2π for verify-explicit
    #[serde(default = "default_qref")]
    q_reference: f64,
    #[serde(default = "default_seed")]
    seed: u64,
    /// compute missing zeros on demand instead of erroring
    #[serde(default)]
    compute_missing: bool,
    #[serde(default)]
    cache: Option<PathBuf>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    workers: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        toml::from_str("schema_version = 1").unwrap()
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let cfg: Config = toml::from_str(&text)
        .map_err(|e| anyhow!("config schema error in {}: {e}", path.display()))?;
    if cfg.schema_version != 1 {
        bail!("config schema error: schema_version: expected 1, got {}", cfg.schema_version);
    }
    if !["l0", "l1"].contains(&cfg.statistic.as_str()) {
        bail!("config schema error: statistic: expected \"l0\" or \"l1\"");
    }
    Ok(cfg)
}

struct Emitter {
    file: std::fs::File,
}

impl Emitter {
    fn new(out_dir: &Path, kind: &str) -> Result<Self> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join(format!("{kind}.jsonl"));
        Ok(Emitter {
            file: std::fs::File::create(path)?,
        })
    }

    fn emit(&mut self, record: &Value) -> Result<()> {
        let line = serde_json::to_string(record)?;
        // ignore stdout errors (e.g. closed pipe); the file copy is the artifact
        let _ = writeln!(std::io::stdout(), "{line}");
        writeln!(self.file, "{line}")?;
        Ok(())
    }
}

fn record(id: &str, q: f64, n: usize, value: f64, diagnostics: Value) -> Value {
    json!({
        "experiment_id": id,
        "Q": q,
        "n": n,
        "value": value,
        "diagnostics": diagnostics,
    })
}

/// A source that refuses to compute: surfaces cache misses as errors
/// pointing at the `zeros` subcommand.
struct StrictSource<'a>(&'a ZeroCache);

impl ZeroSource for StrictSource<'_> {
    fn tables(
        &self,
        q: u64,
        t_max: f64,
    ) -> std::result::Result<Vec<nlevel_core::zeros::ZeroTable>, nlevel_core::Error> {
        match self.0.cached_height(q) {
            Some(h) if h >= t_max => self.0.load(q),
            _ => Err(nlevel_core::Error::Cache(format!(
                "no cached zeros for q={q} up to height {t_max}; run the `zeros` subcommand first"
            ))),
        }
    }
}

fn q_values(cfg: &Config) -> Vec<f64> {
    if !cfg.q_list.is_empty() {
        cfg.q_list.clone()
    } else {
        vec![cfg.q.unwrap_or(10.0)]
    }
}

fn family(cfg: &Config) -> Result<C4Family> {
    Ok(C4Family::from_specs(&cfg.family)?)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let cfg = load_config(cli.config.as_deref())?;
    let workers = cli.workers.or(cfg.workers).unwrap_or(0);
    if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .ok();
    }
    let seed = cli.seed.unwrap_or(cfg.seed);
    let out_dir = cli
        .out
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let cache_dir = cli
        .cache
        .or_else(|| std::env::var_os("NLEVEL_CACHE").map(PathBuf::from))
        .or_else(|| cfg.cache.clone())
        .unwrap_or_else(|| PathBuf::from("zero-cache"));
    let cache = ZeroCache::new(&cache_dir)?;
    let mut emitter = Emitter::new(&out_dir, cli.cmd.name())?;
    let fam = family(&cfg)?;
    let n = fam.n();
    let w = WeightFunction;

    match cli.cmd {
        Cmd::Zeros => {
            for q_scale in q_values(&cfg) {
                let lo = q_scale.ceil() as u64;
                let hi = (2.0 * q_scale).floor() as u64;
                let mut hits = 0u64;
                let mut computed = 0u64;
                for q in lo..=hi {
                    let (tables, hit) = cache.ensure(q, cfg.zero_height)?;
                    if hit {
                        hits += 1;
                    } else {
                        computed += 1;
                    }
                    let zero_count: usize = tables.iter().map(|t| t.zeros.len()).sum();
                    emitter.emit(&record(
                        &format!("zeros-q{q}"),
                        q_scale,
                        n,
                        zero_count as f64,
                        json!({
                            "q": q,
                            "height": cfg.zero_height,
                            "cache_hit": hit,
                            "characters": tables.len(),
                            "abs_err": nlevel_core::zeros::BISECT_TOL,
                        }),
                    ))?;
                }
                eprintln!(
                    "zeros Q={q_scale}: {hits} cache hits, {computed} computed"
                );
            }
        }
        Cmd::Empirical => {
            for q_scale in q_values(&cfg) {
                let source = StrictSource(&cache);
                let direct;
                let src: &dyn ZeroSource = if cfg.compute_missing {
                    direct = &cache;
                    direct
                } else {
                    &source
                };
                let stat = if cfg.statistic == "l0" {
                    l0_statistic(&fam, &w, q_scale, src, cfg.zero_height)?
                } else {
                    l1_statistic(&fam, &w, q_scale, src, cfg.zero_height, cfg.gh_order)?
                };
                let d = d_weight_exact(&w, q_scale);
                emitter.emit(&record(
                    &format!("empirical-{}-Q{q_scale}", cfg.statistic),
                    q_scale,
                    n,
                    stat.value / d,
                    json!({
                        "statistic": cfg.statistic,
                        "raw": stat.value,
                        "d_weight": d,
                        "d_weight_asymptotic": d_weight_asymptotic(&w, q_scale),
                        "zero_height": stat.zero_height,
                        "truncation_bound": stat.truncation_bound / d,
                        "t_nodes": stat.t_nodes,
                        "family": stat.family,
                    }),
                ))?;
            }
        }
        Cmd::Als => {
            let fa: Vec<_> = fam.functions.iter().map(|f| f.fhat.clone()).collect();
            let b_fam = if cfg.b_family.is_empty() {
                fam.clone()
            } else {
                C4Family::from_specs(&cfg.b_family)?
            };
            let fb: Vec<_> = b_fam.functions.iter().map(|f| f.fhat.clone()).collect();
            for q_scale in q_values(&cfg) {
                let value = als_sum_exact(cfg.p_modulus, &fa, &fb, &w, q_scale)?;
                let (k, r) = (fa.len(), fb.len());
                let (c_arith, c_tail) = arithmetic_constant(1_000_000)?;
                let (ival, ierr) = i_integral(
                    &(0..k).collect::<Vec<_>>(),
                    &(k..k + r).collect::<Vec<_>>(),
                    &fa.iter().chain(fb.iter()).cloned().collect::<Vec<_>>(),
                )?;
                let scale = q_scale
                    * q_scale.ln().powi((k + r) as i32)
                    * std::f64::consts::PI.sqrt()
                    * w.mellin(1.0)
                    * c_arith
                    * ival;
                emitter.emit(&record(
                    &format!("als-Q{q_scale}-P{}", cfg.p_modulus),
                    q_scale,
                    k + r,
                    value,
                    json!({
                        "p_modulus": cfg.p_modulus,
                        "k": k,
                        "r": r,
                        "asymptotic_scale": scale,
                        "ratio_to_asymptotic": if scale != 0.0 { value / scale } else { f64::NAN },
                        "i_integral": ival,
                        "i_integral_err": ierr,
                        "arithmetic_constant_tail": c_tail,
                    }),
                ))?;
            }
        }
        Cmd::Predict => {
            let report = main_term(&fam)?;
            emitter.emit(&record(
                "predict-main-term",
                f64::INFINITY,
                n,
                report.total,
                json!({
                    "error_estimate": report.error_estimate,
                    "per_partition": serde_json::to_value(&report.per_partition)?,
                }),
            ))?;
        }
        Cmd::Rmt => {
            let big_n = cfg.matrix_size;
            let exact = finite_n_density(&fam, big_n)?;
            let mc = monte_carlo_density(&fam, big_n, cfg.samples, seed)?;
            let (pred, pred_err) = rmt_prediction(&fam)?;
            emitter.emit(&record(
                &format!("rmt-N{big_n}"),
                big_n as f64,
                n,
                mc.mean,
                json!({
                    "N": big_n,
                    "samples": mc.samples,
                    "mean": mc.mean,
                    "stderr": mc.stderr,
                    "seed": seed,
                    "finite_n_density": exact,
                    "mc_minus_exact_sigmas": (mc.mean - exact) / mc.stderr,
                    "prediction": pred,
                    "prediction_err": pred_err,
                }),
            ))?;
        }
        Cmd::VerifyExplicit => {
            let f = fam.functions[0].clone();
            for q in 3..=cfg.q_max {
                for chi in enumerate_primitive(q)? {
                    let (tables, _) = cache.ensure(q, cfg.zero_height)?;
                    let table = tables
                        .iter()
                        .find(|t| t.char_label == chi.label)
                        .ok_or_else(|| anyhow!("missing zero table for q={q}"))?;
                    for &t in &cfg.t_values {
                        let rep =
                            verify_explicit_formula(&chi, table, &f, t, cfg.q_reference)?;
                        emitter.emit(&record(
                            &format!("verify-{}-t{t}", table.char_label),
                            cfg.q_reference,
                            1,
                            rep.residual,
                            json!({
                                "q": q,
                                "char": table.char_label,
                                "t": t,
                                "zero_sum": rep.zero_sum,
                                "prime_sum": rep.prime_sum,
                                "archimedean": rep.archimedean,
                                "truncation_bound": rep.truncation_bound,
                            }),
                        ))?;
                    }
                }
            }
        }
        Cmd::Constants => {
            let (c, tail) = arithmetic_constant(1_000_000)?;
            emitter.emit(&record(
                "constants-arithmetic",
                f64::INFINITY,
                0,
                c,
                json!({ "tail_bound": tail, "p_max": 1_000_000 }),
            ))?;
            let mellin = w.mellin(1.0);
            emitter.emit(&record(
                "constants-weight-mellin-1",
                f64::INFINITY,
                0,
                mellin,
                json!({ "abs_err": 1e-13 }),
            ))?;
            let (b5, b5_tail) = euler_b5(1.0 - 1e-9, 1_000_000)?;
            emitter.emit(&record(
                "constants-b5-at-1",
                f64::INFINITY,
                0,
                b5,
                json!({ "tail_bound": b5_tail }),
            ))?;
            for p_mod in [1u64, 2, 6, 30, 210] {
                let b4 = euler_b4(-1.0, p_mod);
                let (b6, b6_tail) = euler_b6(1.0, p_mod, 1_000_000)?;
                emitter.emit(&record(
                    &format!("constants-b4b6-P{p_mod}"),
                    f64::INFINITY,
                    0,
                    b4 * b6,
                    json!({ "b4": b4, "b6": b6, "tail_bound": b6_tail }),
                ))?;
            }
        }
        Cmd::Matchup => {
            let q_scale = cfg.q.unwrap_or(20.0);
            let report = main_term(&fam)?;
            let (pred, pred_err) = rmt_prediction(&fam)?;
            let exact_n = finite_n_density(&fam, cfg.matrix_size)?;
            let mc = monte_carlo_density(&fam, cfg.matrix_size, cfg.samples, seed)?;
            let source = StrictSource(&cache);
            let direct;
            let src: &dyn ZeroSource = if cfg.compute_missing {
                direct = &cache;
                direct
            } else {
                &source
            };
            let stat = l1_statistic(&fam, &w, q_scale, src, cfg.zero_height, cfg.gh_order)?;
            let d = d_weight_exact(&w, q_scale);
            let empirical = stat.value / d;
            let rec = record(
                &format!("matchup-Q{q_scale}-N{}", cfg.matrix_size),
                q_scale,
                n,
                empirical,
                json!({
                    "empirical": { "value": empirical, "error": stat.truncation_bound / d },
                    "main_term": { "value": report.total, "error": report.error_estimate },
                    "rmt_prediction": { "value": pred, "error": pred_err },
                    "finite_n_density": { "value": exact_n, "N": cfg.matrix_size },
                    "monte_carlo": { "value": mc.mean, "stderr": mc.stderr, "samples": mc.samples },
                    "discrepancy": {
                        "main_vs_rmt": (report.total - pred).abs(),
                        "main_vs_rmt_budget": report.error_estimate + pred_err,
                        "empirical_vs_main": (empirical - report.total).abs(),
                        "mc_vs_finite_n_sigmas": (mc.mean - exact_n) / mc.stderr,
                        "finite_n_vs_limit": (exact_n - report.total).abs(),
                    },
                }),
            );
            emitter.emit(&rec)?;
            std::fs::write(
                out_dir.join("matchup-report.json"),
                serde_json::to_string_pretty(&rec)?,
            )?;
        }
    }
    Ok(())
}
