//! Seeded experiment runner: Monte Carlo ratio estimates over random input
//! models, exact worst-case sweeps over the adversarial families, and the
//! canned figure datasets.
//!
//! Reproducibility contract: every trial derives its own RNG seed from
//! `(master seed, experiment tag, trial index)` with a splittable counter
//! scheme, trials are evaluated in parallel but aggregated in trial order,
//! so results are byte-identical regardless of thread count.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::adversary::{log_space_ts, log_sum_exp, Family, RandomModel};
use crate::error::{Error, Result};
use crate::model::{
    run_online_matching_ordered, run_online_ordered, ts_utility, ArrivalOrder, WeightMatrix,
};
use crate::offline::{brute_force_matching, brute_force_optimal, max_weight_matching,
    optimal_identical_offline};
use crate::online::registry::{
    allocation_algorithm, allocation_names, matching_names, matching_policy, AlgParams,
};

/// SplitMix64 finalizer: a bijective avalanche mix on `u64`.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a hash, used to turn experiment labels into seed-domain tags.
fn fnv1a(s: &str) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for b in s.as_bytes() {
        h = (h ^ u64::from(*b)).wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Seed for one trial of one experiment. Different tags (and different
/// trial indices) give statistically independent streams, and the result
/// depends only on the three inputs, never on scheduling.
pub fn derive_seed(master: u64, tag: u64, trial: u64) -> u64 {
    let z = mix64(master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    mix64(z ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Offline value an online run is divided by.
///
/// `BruteForce` and `IdenticalOptimal` are exact optima of the respective
/// objective; `MwmUpper` is the maximum-weight matching, which for the
/// time-sharing objective is only an upper bound on the optimum (each
/// basestation's average is at most its best attached rate, and those best
/// users form a matching). Ratios against it are flagged as bound-relative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Exhaustive partition search; guarded by the enumeration limit.
    BruteForce,
    /// Closed-form optimum for identical basestations.
    IdenticalOptimal,
    /// Maximum-weight matching: exact for matching runs, an upper bound
    /// for allocation runs.
    MwmUpper,
}

pub fn baseline_names() -> &'static [&'static str] {
    &["brute-force", "identical-optimal", "mwm-upper"]
}

impl Baseline {
    /// Accepts the registry names plus `prop1` as a legacy alias for
    /// `identical-optimal`.
    pub fn from_name(name: &str) -> Result<Baseline> {
        match name {
            "brute-force" => Ok(Baseline::BruteForce),
            "identical-optimal" | "prop1" => Ok(Baseline::IdenticalOptimal),
            "mwm-upper" => Ok(Baseline::MwmUpper),
            _ => Err(Error::UnknownName(format!(
                "baseline '{name}' (expected one of {})",
                baseline_names().join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Baseline::BruteForce => "brute-force",
            Baseline::IdenticalOptimal => "identical-optimal",
            Baseline::MwmUpper => "mwm-upper",
        }
    }

    /// Whether the baseline equals the true offline optimum for runs of the
    /// given kind. Only `MwmUpper` on allocation runs is a proxy.
    pub fn is_exact_for(&self, kind: RunKind) -> bool {
        !(matches!(self, Baseline::MwmUpper) && kind == RunKind::Allocation)
    }

    fn compute(&self, w: &WeightMatrix, kind: RunKind) -> Result<f64> {
        match (self, kind) {
            (Baseline::BruteForce, RunKind::Allocation) => {
                Ok(brute_force_optimal(w)?.0.value())
            }
            (Baseline::BruteForce, RunKind::Matching) => brute_force_matching(w),
            (Baseline::IdenticalOptimal, RunKind::Allocation) => {
                let rates = w.identical_rates().ok_or_else(|| {
                    Error::InvalidParam(
                        "baseline identical-optimal needs identical basestations \
                         (every row constant)"
                            .into(),
                    )
                })?;
                Ok(optimal_identical_offline(&rates, w.m())?.0.value())
            }
            (Baseline::IdenticalOptimal, RunKind::Matching) => Err(Error::InvalidParam(
                "baseline identical-optimal does not apply to matching policies; \
                 use mwm-upper"
                    .into(),
            )),
            (Baseline::MwmUpper, _) => Ok(max_weight_matching(w).weight),
        }
    }
}

/// Whether a registry name runs through the allocation engine (placing every
/// user, value = time-sharing utility) or the matching engine (users may
/// stay unmatched, value = matched weight).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Allocation,
    Matching,
}

pub fn run_kind(algorithm: &str) -> Result<RunKind> {
    if allocation_names().contains(&algorithm) {
        Ok(RunKind::Allocation)
    } else if matching_names().contains(&algorithm) {
        Ok(RunKind::Matching)
    } else {
        Err(Error::UnknownName(format!(
            "algorithm '{algorithm}' (expected one of {}, {})",
            allocation_names().join(", "),
            matching_names().join(", ")
        )))
    }
}

/// Human-readable tuning-parameter label for reports ("r=12", "p=0.5", or
/// "" for algorithms without knobs).
pub fn param_label(algorithm: &str, params: &AlgParams, n: usize) -> String {
    match algorithm {
        "secretary" | "secretary-modified" | "k-secretary" => {
            let r = params
                .r
                .unwrap_or_else(|| crate::online::default_sample_len(n));
            format!("r={r}")
        }
        "sample-and-price" | "hide-and-seek" | "hide-and-seek-reassign" => {
            format!("p={}", params.p.unwrap_or(0.5))
        }
        _ => String::new(),
    }
}

/// One Monte Carlo experiment: a named algorithm against a random input
/// model, ratioed against a baseline.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: String,
    pub params: AlgParams,
    pub model: RandomModel,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub baseline: Baseline,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<RunKind> {
        if self.trials == 0 {
            return Err(Error::InvalidParam("trials must be >= 1".into()));
        }
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidParam(format!(
                "need n >= 1 users and m >= 1 basestations, got n={}, m={}",
                self.n, self.m
            )));
        }
        self.model.validate()?;
        let kind = run_kind(&self.algorithm)?;
        if self.baseline == Baseline::IdenticalOptimal {
            if kind == RunKind::Matching {
                return Err(Error::InvalidParam(
                    "baseline identical-optimal does not apply to matching policies"
                        .into(),
                ));
            }
            if !self.model.is_identical() {
                return Err(Error::InvalidParam(format!(
                    "baseline identical-optimal needs an identical-basestation model, \
                     got '{}'",
                    self.model.name()
                )));
            }
        }
        Ok(kind)
    }

    /// Tag folding everything that shapes a trial's input, so two configs
    /// share per-trial randomness only when their trials really are
    /// exchangeable. `trials` is deliberately excluded: growing the trial
    /// count extends a run without re-rolling its prefix.
    fn tag(&self) -> u64 {
        let mut t = fnv1a(&self.algorithm);
        t = mix64(t ^ fnv1a(self.model.name()));
        t = mix64(t ^ self.n as u64);
        t = mix64(t ^ (self.m as u64).rotate_left(32));
        t
    }
}

/// Sample mean and standard error (`sd / sqrt(trials)`, 0 for one trial).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

fn estimate(xs: &[f64]) -> Estimate {
    let t = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / t;
    if xs.len() < 2 {
        return Estimate { mean, se: 0.0 };
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (t - 1.0);
    Estimate {
        mean,
        se: (var / t).sqrt(),
    }
}

/// Ratio summary of a Monte Carlo run, in both orientations and both
/// aggregation orders (the mean of per-trial ratios and the ratio of mean
/// values; neither subsumes the other, so both are reported).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    /// Per-trial `ALG / BASE`, averaged.
    pub rho: Estimate,
    /// Per-trial `BASE / ALG`, averaged.
    pub eta: Estimate,
    /// `mean(ALG) / mean(BASE)`.
    pub rho_of_means: f64,
    /// `mean(BASE) / mean(ALG)`.
    pub eta_of_means: f64,
    pub mean_alg: f64,
    pub mean_base: f64,
}

/// Everything a results row needs: config echo plus the estimates.
#[derive(Debug, Clone)]
pub struct AverageCaseReport {
    pub algorithm: String,
    pub model: String,
    pub n: usize,
    pub m: usize,
    pub r_or_p: String,
    pub trials: usize,
    pub seed: u64,
    pub baseline: &'static str,
    /// False only when the baseline is the matching upper bound on an
    /// allocation run; such rows are bound-relative, not optimum-relative.
    pub baseline_is_exact: bool,
    pub ratios: RatioEstimate,
    /// Deduplicated warnings surfaced by the algorithm across all trials.
    pub warnings: Vec<String>,
}

struct Trial {
    alg: f64,
    base: f64,
    warnings: Vec<String>,
}

fn run_trial(cfg: &ExperimentConfig, kind: RunKind, trial: u64) -> Result<Trial> {
    use rand::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, cfg.tag(), trial));
    let w = cfg.model.sample(cfg.n, cfg.m, &mut rng)?;
    let order = ArrivalOrder::uniform(cfg.n, &mut rng);
    let run_seed = rng.next_u64();

    let (alg, warnings) = match kind {
        RunKind::Allocation => {
            let mut alg = allocation_algorithm(&cfg.algorithm, &cfg.params)?;
            let (alloc, trace) = run_online_ordered(alg.as_mut(), &w, &order, run_seed)?;
            // Recompute from the final allocation instead of trusting the
            // incremental tally: reassignment-heavy runs would otherwise
            // carry add/remove rounding noise into the ratios.
            (ts_utility(&alloc, &w)?.value(), trace.warnings)
        }
        RunKind::Matching => {
            let mut policy = matching_policy(&cfg.algorithm, &cfg.params)?;
            let (outcome, trace) = run_online_matching_ordered(policy.as_mut(), &w, &order, run_seed)?;
            (outcome.weight, trace.warnings)
        }
    };
    let base = cfg.baseline.compute(&w, kind)?;
    // Every supported baseline dominates the online value (exact optima by
    // definition, the matching bound by the per-basestation max argument),
    // so a crossing means a bookkeeping bug, not a good algorithm.
    if alg > base * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::ContractViolation(format!(
            "online value {alg} exceeds baseline {} value {base}",
            cfg.baseline.name()
        )));
    }
    Ok(Trial {
        alg,
        base,
        warnings,
    })
}

/// Runs `cfg.trials` seeded trials in parallel and aggregates the ratio
/// estimates in trial order.
pub fn run_average_case(cfg: &ExperimentConfig) -> Result<AverageCaseReport> {
    let kind = cfg.validate()?;
    let trials: Vec<Trial> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, kind, t))
        .collect::<Result<_>>()?;

    let rho: Vec<f64> = trials.iter().map(|t| t.alg / t.base).collect();
    let eta: Vec<f64> = trials.iter().map(|t| t.base / t.alg).collect();
    let mean_alg = trials.iter().map(|t| t.alg).sum::<f64>() / trials.len() as f64;
    let mean_base = trials.iter().map(|t| t.base).sum::<f64>() / trials.len() as f64;
    let mut warnings = BTreeSet::new();
    for t in &trials {
        warnings.extend(t.warnings.iter().cloned());
    }

    Ok(AverageCaseReport {
        algorithm: cfg.algorithm.clone(),
        model: cfg.model.name().to_string(),
        n: cfg.n,
        m: cfg.m,
        r_or_p: param_label(&cfg.algorithm, &cfg.params, cfg.n),
        trials: cfg.trials,
        seed: cfg.seed,
        baseline: cfg.baseline.name(),
        baseline_is_exact: cfg.baseline.is_exact_for(kind),
        ratios: RatioEstimate {
            rho: estimate(&rho),
            eta: estimate(&eta),
            rho_of_means: mean_alg / mean_base,
            eta_of_means: mean_base / mean_alg,
            mean_alg,
            mean_base,
        },
        warnings: warnings.into_iter().collect(),
    })
}

/// Exact ratio of one family member, computed in log space.
#[derive(Debug, Clone)]
pub struct MemberRatio {
    /// Member index within the family (0-based).
    pub member: usize,
    /// `ln OPT` from the family's closed form.
    pub log_opt: f64,
    /// `ln` of the algorithm's (expected) value.
    pub log_alg: f64,
    /// `log_opt - log_alg`; `eta = exp(log_eta)` may overflow to `inf` for
    /// extreme members, the log stays finite.
    pub log_eta: f64,
    pub eta: f64,
    /// `ln` of each seeded run's value (one entry for deterministic
    /// algorithms; `log_alg` is their log-mean-exp).
    pub per_seed_log_alg: Vec<f64>,
}

/// Worst member of a family sweep.
#[derive(Debug, Clone)]
pub struct WorstCaseReport {
    pub family: String,
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub members: Vec<MemberRatio>,
    /// Index into `members` of the largest `log_eta` (first on ties).
    pub worst: usize,
}

impl WorstCaseReport {
    pub fn worst_member(&self) -> &MemberRatio {
        &self.members[self.worst]
    }
}

/// Sweep configuration for [`run_worst_case_family`]. `trials` is the
/// number of seeds per member; 1 suffices for deterministic algorithms.
#[derive(Debug, Clone)]
pub struct WorstCaseConfig {
    pub family: Family,
    pub algorithm: String,
    pub params: AlgParams,
    pub trials: usize,
    pub seed: u64,
}

/// Runs an allocation algorithm over every member of an adversarial family
/// and reports the exact per-member ratios and the worst one.
///
/// The run happens on the member's rank surrogate (every algorithm in the
/// registry is comparison-based, so decisions are unchanged) and the value
/// is evaluated against the log-space member, which keeps geometric
/// families with thousands of users exact where their linear weights would
/// overflow.
pub fn run_worst_case_family(cfg: &WorstCaseConfig) -> Result<WorstCaseReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParam("trials must be >= 1".into()));
    }
    cfg.family.validate()?;
    if run_kind(&cfg.algorithm)? != RunKind::Allocation {
        return Err(Error::InvalidParam(format!(
            "worst-case sweeps drive allocation algorithms; '{}' is a matching policy",
            cfg.algorithm
        )));
    }
    let tag = mix64(fnv1a(&cfg.algorithm) ^ fnv1a(cfg.family.name()));

    let members: Vec<MemberRatio> = (0..cfg.family.member_count())
        .into_par_iter()
        .map(|idx| -> Result<MemberRatio> {
            let logm = cfg.family.log_member(idx)?;
            let surrogate = logm.surrogate();
            let order = ArrivalOrder::identity(logm.n());
            let mut per_seed = Vec::with_capacity(cfg.trials);
            for t in 0..cfg.trials as u64 {
                let run_seed = derive_seed(cfg.seed, mix64(tag ^ idx as u64), t);
                let mut alg = allocation_algorithm(&cfg.algorithm, &cfg.params)?;
                let (alloc, _) = run_online_ordered(alg.as_mut(), &surrogate, &order, run_seed)?;
                per_seed.push(log_space_ts(&alloc, &logm)?);
            }
            let log_opt = cfg.family.log_opt(idx)?;
            // Expected value over seeds, still in log space.
            let log_alg = log_sum_exp(&per_seed) - (cfg.trials as f64).ln();
            let log_eta = log_opt - log_alg;
            Ok(MemberRatio {
                member: idx,
                log_opt,
                log_alg,
                log_eta,
                eta: log_eta.exp(),
                per_seed_log_alg: per_seed,
            })
        })
        .collect::<Result<_>>()?;

    let worst = members
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.log_eta.total_cmp(&b.1.log_eta))
        .map(|(i, _)| i)
        .expect("families have at least one member");

    Ok(WorstCaseReport {
        family: cfg.family.name().to_string(),
        algorithm: cfg.algorithm.clone(),
        n: cfg.family.n(),
        m: cfg.family.m(),
        trials: cfg.trials,
        seed: cfg.seed,
        members,
        worst,
    })
}

/// The three canned comparison datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// Threshold rules vs. weight/load heuristics on identical basestations.
    Ksec,
    /// Price-based matching vs. greedy weight chasing on correlated weights.
    Arbweights,
    /// Reassignment variants against their irrevocable versions.
    Reassign,
}

pub fn figure_names() -> &'static [&'static str] {
    &["ksec", "arbweights", "reassign"]
}

impl FigureKind {
    pub fn from_name(name: &str) -> Result<FigureKind> {
        match name {
            "ksec" => Ok(FigureKind::Ksec),
            "arbweights" => Ok(FigureKind::Arbweights),
            "reassign" => Ok(FigureKind::Reassign),
            _ => Err(Error::UnknownName(format!(
                "figure '{name}' (expected one of {})",
                figure_names().join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FigureKind::Ksec => "ksec",
            FigureKind::Arbweights => "arbweights",
            FigureKind::Reassign => "reassign",
        }
    }
}

/// One dataset row: an average-case report tagged with its figure.
#[derive(Debug, Clone)]
pub struct FigureRow {
    pub figure: &'static str,
    pub report: AverageCaseReport,
}

/// Produces the rows of one comparison dataset. `trials` applies per
/// (algorithm, model, n) cell; the default the CLI passes is 100.
///
/// Models: the identical-rate dataset uses uniform rates; the
/// arbitrary-weight datasets pair iid-uniform with the exponential flavour
/// of the correlated model (heavier tails are what separate the price-based
/// rules from max-weight; the uniform flavour stays available through the
/// `run` path). The choice is recorded in each row's `model` column and in
/// run manifests.
pub fn reproduce_figures(kind: FigureKind, seed: u64, trials: usize) -> Result<Vec<FigureRow>> {
    let mut rows = Vec::new();
    let push = |rows: &mut Vec<FigureRow>,
                    algorithm: &str,
                    model: &RandomModel,
                    n: usize,
                    m: usize,
                    baseline: Baseline|
     -> Result<()> {
        let report = run_average_case(&ExperimentConfig {
            algorithm: algorithm.to_string(),
            params: AlgParams::default(),
            model: *model,
            n,
            m,
            trials,
            seed,
            baseline,
        })?;
        rows.push(FigureRow {
            figure: kind.name(),
            report,
        });
        Ok(())
    };

    let m = 10;
    match kind {
        FigureKind::Ksec => {
            let model = RandomModel::from_name("identical-uniform", None, None, None)?;
            for n in [50, 100, 200, 400, 800] {
                for alg in ["k-secretary", "max-weight", "least-loaded"] {
                    push(&mut rows, alg, &model, n, m, Baseline::IdenticalOptimal)?;
                }
            }
        }
        FigureKind::Arbweights => {
            for model_name in ["iid-uniform", "correlated-exponential"] {
                let model = RandomModel::from_name(model_name, None, None, None)?;
                for n in [100, 300, 1000] {
                    for alg in ["max-weight", "sample-and-price", "hide-and-seek"] {
                        push(&mut rows, alg, &model, n, m, Baseline::MwmUpper)?;
                    }
                }
            }
        }
        FigureKind::Reassign => {
            for model_name in ["iid-uniform", "correlated-exponential"] {
                let model = RandomModel::from_name(model_name, None, None, None)?;
                for n in [100, 300, 1000] {
                    for alg in ["hide-and-seek", "hide-and-seek-reassign"] {
                        push(&mut rows, alg, &model, n, m, Baseline::MwmUpper)?;
                    }
                }
            }
        }
    }
    Ok(rows)
}
