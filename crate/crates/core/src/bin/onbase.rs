//! `onbase` — run, benchmark, and analyze online basestation-allocation
//! algorithms.
//!
//! Exit codes: 0 success, 2 configuration error (unknown names, bad
//! parameters, malformed config files; clap usage errors too), 1 runtime
//! error (I/O, enumeration guards, contract violations).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use onbase::adversary::{family_names, model_names, Family, FamilyParams, RandomModel};
use onbase::analytics;
use onbase::error::{Error, Result};
use onbase::harness::{
    self, baseline_names, figure_names, reproduce_figures, run_average_case,
    run_worst_case_family, Baseline, ExperimentConfig, FigureKind, WorstCaseConfig,
};
use onbase::io;
use onbase::online::{allocation_names, matching_names, AlgParams};

const ANALYTIC_OPS: [&str; 8] = [
    "success",
    "degree-law",
    "selected-law",
    "selected-exact",
    "a-sum",
    "bound-two",
    "bound-m",
    "maximize-bound",
];

#[derive(Parser)]
#[command(
    name = "onbase",
    version,
    about = "Online basestation allocation: algorithms, adversaries, analytics"
)]
struct Cli {
    /// Print every registry name (algorithms, families, models, baselines,
    /// figures, analytic ops) and exit.
    #[arg(long)]
    list: bool,

    /// Cap worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// JSON config file with the same keys as the long flags; explicit
    /// flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo ratio estimates of algorithms on random input models.
    Run(RunArgs),
    /// Exact worst-case sweep of an algorithm over an adversarial family.
    #[command(name = "worst-case")]
    WorstCase(WorstArgs),
    /// Closed-form probabilities and bound curves.
    Analytic(AnalyticArgs),
    /// Canned comparison datasets (ksec, arbweights, reassign).
    Figures(FiguresArgs),
    /// Sample a random model or materialize a family member as a matrix file.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm registry name(s), comma-separated or repeated.
    #[arg(long = "alg", value_delimiter = ',')]
    alg: Vec<String>,
    /// Random model name.
    #[arg(long)]
    model: Option<String>,
    /// Users per instance; a list sweeps instance sizes.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Basestations per instance.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed (also: ONBASE_SEED environment variable).
    #[arg(long)]
    seed: Option<u64>,
    /// Ratio baseline: brute-force, identical-optimal, or mwm-upper
    /// (default picked from the model).
    #[arg(long)]
    baseline: Option<String>,
    /// Sample length for threshold rules (default floor(n/e)).
    #[arg(long)]
    r: Option<usize>,
    /// Sampling probability for price-based rules (default 0.5).
    #[arg(long)]
    p: Option<f64>,
    /// Upper endpoint of the uniform models.
    #[arg(long)]
    hi: Option<f64>,
    /// Mean of the strong column in correlated models.
    #[arg(long = "strong-mean")]
    strong_mean: Option<f64>,
    /// Mean of the weak columns in correlated models.
    #[arg(long = "weak-mean")]
    weak_mean: Option<f64>,
    /// Results CSV path; stdout when omitted. A `<out>.manifest.json` is
    /// written alongside a file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WorstArgs {
    /// Adversarial family name.
    #[arg(long)]
    family: Option<String>,
    /// Allocation algorithm to drive through the family.
    #[arg(long)]
    alg: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Geometric growth base of the family.
    #[arg(long)]
    beta: Option<f64>,
    /// Weak-entry weight of the one-strong-column family.
    #[arg(long)]
    eps: Option<f64>,
    /// Weights of the reassign-pair family.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Seeds per member (1 suffices for deterministic algorithms).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Operation: success, degree-law, selected-law, selected-exact, a-sum,
    /// bound-two, bound-m, maximize-bound.
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Degree (selected-exact, a-sum).
    #[arg(long)]
    d: Option<usize>,
    /// Lower index bound of a-sum.
    #[arg(long)]
    t: Option<usize>,
    /// Sampled fraction of the bound curves.
    #[arg(long)]
    alpha: Option<f64>,
    /// Series truncation of the bound curves (default 10).
    #[arg(long)]
    dmax: Option<usize>,
    /// Interior grid points of maximize-bound (default 99).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Dataset: ksec, arbweights, or reassign.
    #[arg(long)]
    which: Option<String>,
    /// Trials per (algorithm, model, n) cell (default 100).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Random model to sample (exclusive with --family).
    #[arg(long)]
    model: Option<String>,
    /// Family whose member to materialize (exclusive with --model).
    #[arg(long)]
    family: Option<String>,
    /// Member index within the family (0-based, default 0).
    #[arg(long)]
    member: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long = "strong-mean")]
    strong_mean: Option<f64>,
    #[arg(long = "weak-mean")]
    weak_mean: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    /// Matrix path; `.json` writes JSON, anything else CSV; stdout (CSV)
    /// when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("onbase: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    if cli.list {
        print_registry();
        return Ok(());
    }
    let conf = ConfigFile::load(cli.config.as_deref())?;
    let command = cli.command.ok_or_else(|| {
        Error::InvalidParam("no subcommand given (try --list or --help)".into())
    })?;

    let threads = match cli.threads {
        Some(t) => Some(t),
        None => conf.usize("threads")?,
    };
    let body = || match command {
        Command::Run(args) => cmd_run(args, &conf),
        Command::WorstCase(args) => cmd_worst_case(args, &conf),
        Command::Analytic(args) => cmd_analytic(args, &conf),
        Command::Figures(args) => cmd_figures(args, &conf),
        Command::Gen(args) => cmd_gen(args, &conf),
    };
    match threads {
        None => body(),
        Some(0) => Err(Error::InvalidParam("threads must be >= 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
            pool.install(body)
        }
    }
}

fn print_registry() {
    println!("allocation algorithms: {}", allocation_names().join(", "));
    println!("matching policies:     {}", matching_names().join(", "));
    println!("adversarial families:  {}", family_names().join(", "));
    println!("random models:         {}", model_names().join(", "));
    println!("baselines:             {}", baseline_names().join(", "));
    println!("figures:               {}", figure_names().join(", "));
    println!("analytic ops:          {}", ANALYTIC_OPS.join(", "));
}

/// Values from `--config`, used wherever a flag was not given explicitly.
struct ConfigFile {
    map: serde_json::Map<String, serde_json::Value>,
}

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<ConfigFile> {
        let map = match path {
            None => serde_json::Map::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidParam(format!("config {}: {e}", p.display())))?;
                match value {
                    serde_json::Value::Object(map) => map,
                    _ => {
                        return Err(Error::InvalidParam(format!(
                            "config {} must be a JSON object",
                            p.display()
                        )))
                    }
                }
            }
        };
        Ok(ConfigFile { map })
    }

    fn bad(&self, key: &str, want: &str) -> Error {
        Error::InvalidParam(format!("config key '{key}' must be {want}"))
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|u| Some(u as usize))
                .ok_or_else(|| self.bad(key, "a nonnegative integer")),
        }
    }

    fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| self.bad(key, "a nonnegative integer")),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| self.bad(key, "a number")),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| self.bad(key, "a string")),
        }
    }

    /// A single integer or a list of integers.
    fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        match self.map.get(key) {
            None => Ok(Vec::new()),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|u| u as usize)
                        .ok_or_else(|| self.bad(key, "a list of integers"))
                })
                .collect(),
            Some(v) => Ok(vec![v
                .as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| self.bad(key, "an integer or list of integers"))?]),
        }
    }

    fn strings(&self, key: &str) -> Result<Vec<String>> {
        match self.map.get(key) {
            None => Ok(Vec::new()),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| self.bad(key, "a list of strings"))
                })
                .collect(),
            Some(v) => Ok(vec![v
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| self.bad(key, "a string or list of strings"))?]),
        }
    }
}

fn pick<T>(flag: Option<T>, conf: Result<Option<T>>) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => conf,
    }
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParam(format!("missing required option {what}")))
}

/// Seed resolution: flag, then config, then `ONBASE_SEED`, then 0.
fn resolve_seed(flag: Option<u64>, conf: &ConfigFile) -> Result<u64> {
    if let Some(s) = pick(flag, conf.u64("seed"))? {
        return Ok(s);
    }
    match std::env::var("ONBASE_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::InvalidParam(format!("ONBASE_SEED='{text}' is not an integer seed"))
        }),
        Err(_) => Ok(0),
    }
}

/// Writes `text` to `path`, or stdout when `path` is `None`. Returns the
/// paths written (for the manifest).
fn emit(text: &str, path: Option<&Path>) -> Result<Vec<String>> {
    match path {
        None => {
            print!("{text}");
            Ok(Vec::new())
        }
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(vec![p.display().to_string()])
        }
    }
}

/// Writes the per-run manifest next to `out`, echoing the resolved config.
fn emit_manifest(out: Option<&Path>, command: &str, config: serde_json::Value) -> Result<()> {
    let Some(out) = out else { return Ok(()) };
    let manifest_path = PathBuf::from(format!("{}.manifest.json", out.display()));
    let mut buf = Vec::new();
    io::write_manifest(
        command,
        &config,
        &[out.display().to_string()],
        &mut buf,
    )?;
    std::fs::write(manifest_path, buf)?;
    Ok(())
}

fn model_from(
    name: &str,
    hi: Option<f64>,
    strong_mean: Option<f64>,
    weak_mean: Option<f64>,
) -> Result<RandomModel> {
    RandomModel::from_name(name, hi, strong_mean, weak_mean)
}

fn cmd_run(args: RunArgs, conf: &ConfigFile) -> Result<()> {
    let mut algs = args.alg;
    if algs.is_empty() {
        algs = conf.strings("alg")?;
    }
    if algs.is_empty() {
        return Err(Error::InvalidParam("missing required option --alg".into()));
    }
    let model_name = require(pick(args.model, conf.string("model"))?, "--model")?;
    let mut ns = args.n;
    if ns.is_empty() {
        ns = conf.usize_list("n")?;
    }
    if ns.is_empty() {
        return Err(Error::InvalidParam("missing required option --n".into()));
    }
    let m = require(pick(args.m, conf.usize("m"))?, "--m")?;
    let trials = pick(args.trials, conf.usize("trials"))?.unwrap_or(1000);
    let seed = resolve_seed(args.seed, conf)?;
    let params = AlgParams {
        r: pick(args.r, conf.usize("r"))?,
        p: pick(args.p, conf.f64("p"))?,
    };
    let hi = pick(args.hi, conf.f64("hi"))?;
    let strong_mean = pick(args.strong_mean, conf.f64("strong-mean"))?;
    let weak_mean = pick(args.weak_mean, conf.f64("weak-mean"))?;
    let model = model_from(&model_name, hi, strong_mean, weak_mean)?;
    let baseline = match pick(args.baseline, conf.string("baseline"))? {
        Some(name) => Baseline::from_name(&name)?,
        None if model.is_identical() => Baseline::IdenticalOptimal,
        None => Baseline::MwmUpper,
    };

    let mut reports = Vec::new();
    for alg in &algs {
        for &n in &ns {
            reports.push(run_average_case(&ExperimentConfig {
                algorithm: alg.clone(),
                params,
                model,
                n,
                m,
                trials,
                seed,
                baseline,
            })?);
        }
    }

    let mut buf = Vec::new();
    io::write_reports_csv(&reports, &mut buf)?;
    let text = String::from_utf8(buf).expect("CSV is UTF-8");
    emit(&text, args.out.as_deref())?;
    emit_manifest(
        args.out.as_deref(),
        "run",
        json!({
            "alg": algs,
            "model": model.name(),
            "n": ns,
            "m": m,
            "trials": trials,
            "seed": seed,
            "baseline": baseline.name(),
            "r": params.r,
            "p": params.p,
            "hi": hi,
            "strong-mean": strong_mean,
            "weak-mean": weak_mean,
        }),
    )
}

fn cmd_worst_case(args: WorstArgs, conf: &ConfigFile) -> Result<()> {
    let family_name = require(pick(args.family, conf.string("family"))?, "--family")?;
    let alg = require(pick(args.alg, conf.string("alg"))?, "--alg")?;
    let n = require(pick(args.n, conf.usize("n"))?, "--n")?;
    let family_params = FamilyParams {
        n,
        m: pick(args.m, conf.usize("m"))?,
        beta: pick(args.beta, conf.f64("beta"))?,
        eps: pick(args.eps, conf.f64("eps"))?,
        a: pick(args.a, conf.f64("a"))?,
        b: pick(args.b, conf.f64("b"))?,
        c: pick(args.c, conf.f64("c"))?,
        x: pick(args.x, conf.f64("x"))?,
    };
    let family = Family::from_name(&family_name, &family_params)?;
    let trials = pick(args.trials, conf.usize("trials"))?.unwrap_or(1);
    let seed = resolve_seed(args.seed, conf)?;
    let params = AlgParams {
        r: pick(args.r, conf.usize("r"))?,
        p: pick(args.p, conf.f64("p"))?,
    };

    let report = run_worst_case_family(&WorstCaseConfig {
        family,
        algorithm: alg.clone(),
        params,
        trials,
        seed,
    })?;

    let mut buf = Vec::new();
    io::write_worst_case_csv(&report, &mut buf)?;
    let text = String::from_utf8(buf).expect("CSV is UTF-8");
    emit(&text, args.out.as_deref())?;
    emit_manifest(
        args.out.as_deref(),
        "worst-case",
        json!({
            "family": report.family,
            "alg": alg,
            "n": n,
            "m": report.m,
            "trials": trials,
            "seed": seed,
            "worst-member": report.worst_member().member,
            "worst-log-eta": report.worst_member().log_eta,
        }),
    )
}

fn cmd_analytic(args: AnalyticArgs, conf: &ConfigFile) -> Result<()> {
    let op = require(pick(args.op, conf.string("op"))?, "--op")?;
    let n = pick(args.n, conf.usize("n"))?;
    let r = pick(args.r, conf.usize("r"))?;
    let m = pick(args.m, conf.usize("m"))?;
    let d = pick(args.d, conf.usize("d"))?;
    let t = pick(args.t, conf.usize("t"))?;
    let alpha = pick(args.alpha, conf.f64("alpha"))?;
    let dmax = pick(args.dmax, conf.usize("dmax"))?.unwrap_or(10);
    let grid = pick(args.grid, conf.usize("grid"))?.unwrap_or(99);

    let need_n = || require(n, "--n");
    let need_r = || require(r, "--r");
    let doc = match op.as_str() {
        "success" => {
            let (n, r) = (need_n()?, need_r()?);
            json!({"op": op, "n": n, "r": r, "value": analytics::secretary_success(n, r)?})
        }
        "degree-law" => {
            let (n, r) = (need_n()?, need_r()?);
            json!({"op": op, "n": n, "r": r,
                   "law": analytics::modified_secretary_degree_law(n, r)?})
        }
        "selected-law" => {
            let (n, r, m) = (need_n()?, need_r()?, require(m, "--m")?);
            json!({"op": op, "n": n, "r": r, "m": m,
                   "law": analytics::k_secretary_selected_law(n, r, m)?})
        }
        "selected-exact" => {
            let (n, r, m, d) = (need_n()?, need_r()?, require(m, "--m")?, require(d, "--d")?);
            json!({"op": op, "n": n, "r": r, "m": m, "d": d,
                   "value": analytics::k_secretary_selected_exact(n, r, m, d)?})
        }
        "a-sum" => {
            let (d, t, n) = (require(d, "--d")?, require(t, "--t")?, need_n()?);
            json!({"op": op, "d": d, "t": t, "n": n, "value": analytics::a_d_sum(d, t, n)})
        }
        "bound-two" => {
            let alpha = require(alpha, "--alpha")?;
            json!({"op": op, "alpha": alpha, "dmax": dmax,
                   "value": analytics::bound_two_bs(alpha, dmax)?})
        }
        "bound-m" => {
            let (alpha, m) = (require(alpha, "--alpha")?, require(m, "--m")?);
            json!({"op": op, "alpha": alpha, "dmax": dmax, "m": m,
                   "value": analytics::bound_m_bs(alpha, dmax, m)?})
        }
        "maximize-bound" => {
            let m = m.unwrap_or(2);
            let best = analytics::maximize_bound(m, dmax, grid)?;
            json!({"op": op, "m": m, "dmax": dmax, "grid": grid,
                   "alpha": best.alpha, "value": best.value})
        }
        _ => {
            return Err(Error::UnknownName(format!(
                "analytic op '{op}' (expected one of {})",
                ANALYTIC_OPS.join(", ")
            )))
        }
    };

    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    Ok(())
}

fn cmd_figures(args: FiguresArgs, conf: &ConfigFile) -> Result<()> {
    let which = require(pick(args.which, conf.string("which"))?, "--which")?;
    let kind = FigureKind::from_name(&which)?;
    let trials = pick(args.trials, conf.usize("trials"))?.unwrap_or(100);
    let seed = resolve_seed(args.seed, conf)?;

    let rows = reproduce_figures(kind, seed, trials)?;
    let mut buf = Vec::new();
    io::write_figures_csv(&rows, &mut buf)?;
    let text = String::from_utf8(buf).expect("CSV is UTF-8");
    emit(&text, args.out.as_deref())?;
    emit_manifest(
        args.out.as_deref(),
        "figures",
        json!({
            "which": kind.name(),
            "trials": trials,
            "seed": seed,
            // the arbitrary-weight datasets intentionally use the
            // exponential correlated flavour; each row records its model
            "models": rows
                .iter()
                .map(|r| r.report.model.clone())
                .collect::<std::collections::BTreeSet<_>>(),
        }),
    )
}

fn cmd_gen(args: GenArgs, conf: &ConfigFile) -> Result<()> {
    let model = pick(args.model, conf.string("model"))?;
    let family = pick(args.family, conf.string("family"))?;
    let n = require(pick(args.n, conf.usize("n"))?, "--n")?;
    let seed = resolve_seed(args.seed, conf)?;

    let w = match (model, family) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParam(
                "--model and --family are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(Error::InvalidParam(
                "gen needs either --model or --family".into(),
            ))
        }
        (Some(model_name), None) => {
            use rand::SeedableRng;
            let m = require(pick(args.m, conf.usize("m"))?, "--m")?;
            let model = model_from(
                &model_name,
                pick(args.hi, conf.f64("hi"))?,
                pick(args.strong_mean, conf.f64("strong-mean"))?,
                pick(args.weak_mean, conf.f64("weak-mean"))?,
            )?;
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(harness::derive_seed(seed, 0, 0));
            model.sample(n, m, &mut rng)?
        }
        (None, Some(family_name)) => {
            let family_params = FamilyParams {
                n,
                m: pick(args.m, conf.usize("m"))?,
                beta: pick(args.beta, conf.f64("beta"))?,
                eps: pick(args.eps, conf.f64("eps"))?,
                a: pick(args.a, conf.f64("a"))?,
                b: pick(args.b, conf.f64("b"))?,
                c: pick(args.c, conf.f64("c"))?,
                x: pick(args.x, conf.f64("x"))?,
            };
            let family = Family::from_name(&family_name, &family_params)?;
            let member = pick(args.member, conf.usize("member"))?.unwrap_or(0);
            if member >= family.member_count() {
                return Err(Error::InvalidParam(format!(
                    "member {member} out of range; family '{}' at n={n} has {} members",
                    family.name(),
                    family.member_count()
                )));
            }
            family.linear_member(member)?
        }
    };

    match args.out.as_deref() {
        None => {
            let mut buf = Vec::new();
            io::write_matrix_csv(&w, &mut buf)?;
            print!("{}", String::from_utf8(buf).expect("CSV is UTF-8"));
            Ok(())
        }
        Some(path) => io::write_matrix_path(&w, path),
    }
}
