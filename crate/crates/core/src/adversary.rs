//! Adversarial input families with closed-form optima, and the random
//! models used for average-case benchmarks.
//!
//! The lower-bound families use geometrically growing weights, so their
//! members quickly leave f64 range in linear form. Every family therefore
//! exposes three views of each member:
//!
//! - a *linear* [`WeightMatrix`] (errors once values overflow),
//! - a *log* matrix holding `ln w` exactly (`-inf` for zero weights), and
//! - a *surrogate* [`WeightMatrix`] mapping weights to their ranks.
//!
//! Every algorithm in this crate is comparison-based: its decisions depend
//! on weights only through `<`/`=` comparisons between entries of one
//! matrix. The rank surrogate preserves all those comparisons, so running an
//! algorithm on the surrogate yields exactly the allocation it would produce
//! on the true member, and [`log_space_ts`] then evaluates that allocation
//! against the log matrix without ever forming the linear weights.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::model::{Allocation, WeightMatrix};

/// Numerically stable `ln(sum(exp(x)))`; `-inf` entries drop out, an empty
/// or all `-inf` input gives `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Weight matrix in log space: entry `(i, j)` holds `ln w[i][j]`, with
/// `-inf` standing for a zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMatrix {
    n: usize,
    m: usize,
    logw: Vec<f64>,
}

impl LogMatrix {
    pub fn new(n: usize, m: usize, logw: Vec<f64>) -> Result<Self> {
        if logw.len() != n * m {
            return Err(Error::ShapeMismatch(format!(
                "expected {} log-entries for a {}x{} matrix, got {}",
                n * m,
                n,
                m,
                logw.len()
            )));
        }
        if logw.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::NonFinite(
                "log-weights must be finite or -inf".into(),
            ));
        }
        Ok(LogMatrix { n, m, logw })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, user: usize, bs: usize) -> f64 {
        self.logw[user * self.m + bs]
    }

    /// Exponentiates into a linear matrix, failing once any entry overflows.
    pub fn to_linear(&self) -> Result<WeightMatrix> {
        let data: Vec<f64> = self.logw.iter().map(|&v| v.exp()).collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(
                "member overflows f64 in linear form; use the log-space views".into(),
            ));
        }
        WeightMatrix::new(self.n, self.m, data)
    }

    /// Order-isomorphic surrogate: each distinct log-weight is replaced by
    /// its rank (1-based), zero weights by 0. All intra-matrix comparisons,
    /// and hence the behavior of every comparison-based algorithm, are
    /// preserved.
    pub fn surrogate(&self) -> WeightMatrix {
        let mut distinct: Vec<f64> = self
            .logw
            .iter()
            .copied()
            .filter(|v| *v != f64::NEG_INFINITY)
            .collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        let data: Vec<f64> = self
            .logw
            .iter()
            .map(|&v| {
                if v == f64::NEG_INFINITY {
                    0.0
                } else {
                    (distinct.partition_point(|&x| x < v) + 1) as f64
                }
            })
            .collect();
        WeightMatrix::new(self.n, self.m, data).expect("ranks are finite and nonnegative")
    }
}

/// Log of the time-sharing utility of `alloc` on a log-space matrix:
/// per basestation `ln(sum_i w_i) - ln d`, combined across basestations
/// with [`log_sum_exp`]. Returns `-inf` when every occupied basestation has
/// only zero weights.
pub fn log_space_ts(alloc: &Allocation, w: &LogMatrix) -> Result<f64> {
    if alloc.len() > w.n() {
        return Err(Error::InvalidAllocation(format!(
            "allocation covers {} users, matrix has {}",
            alloc.len(),
            w.n()
        )));
    }
    if alloc.m() != w.m() {
        return Err(Error::ShapeMismatch(format!(
            "allocation has {} basestations, matrix has {}",
            alloc.m(),
            w.m()
        )));
    }
    let mut per_bs: Vec<Vec<f64>> = vec![Vec::new(); w.m()];
    for (i, &j) in alloc.assignments().iter().enumerate() {
        per_bs[j].push(w.get(i, j));
    }
    let contribs: Vec<f64> = per_bs
        .iter()
        .filter(|logs| !logs.is_empty())
        .map(|logs| log_sum_exp(logs) - (logs.len() as f64).ln())
        .collect();
    Ok(log_sum_exp(&contribs))
}

/// Log-space evaluation of the identical-basestation offline optimum for
/// the given per-user log-rates: the `m-1` largest rates sit alone, the
/// rest share one basestation.
pub fn log_identical_opt(log_rates: &[f64], m: usize) -> f64 {
    let n = log_rates.len();
    let mut sorted = log_rates.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if m > n {
        return log_sum_exp(&sorted);
    }
    let solos = &sorted[..m - 1];
    let shared = log_sum_exp(&sorted[m - 1..]) - ((n - m + 1) as f64).ln();
    let mut parts = solos.to_vec();
    parts.push(shared);
    log_sum_exp(&parts)
}

fn check_finite(family: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "family '{family}' member overflows f64; use the log-space member"
        )));
    }
    Ok(())
}

/// Parameter bag for building a [`Family`] by name; unset fields take the
/// family's documented defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FamilyParams {
    pub n: usize,
    pub m: Option<usize>,
    /// Geometric growth base (default 10).
    pub beta: Option<f64>,
    /// Small weight of the weak columns (default 0.01).
    pub eps: Option<f64>,
    /// Weights of the two-matrix reassignment trap
    /// (defaults a=1, b=100, c=101, x=1e6).
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub x: Option<f64>,
}

/// A parametrized family of adversarial weight matrices. An online
/// algorithm is judged by its worst member: members share prefixes, so the
/// algorithm cannot tell which one it is facing until too late.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Identical basestations, member `l` has rates
    /// `[beta, beta^2, ..., beta^l, 0, ..., 0]`. Forces every deterministic
    /// algorithm toward ratio `n/m`; round-robin meets it.
    IdenticalGeometric { n: usize, m: usize, beta: f64 },
    /// Member `l`: column 0 reads `[beta, ..., beta^l, eps, ..., eps]`, all
    /// other columns are `eps`. Punishes any rule that ever leaves column 0
    /// (ratio unbounded) and stacks the rest there (ratio `n`); max-weight
    /// walks into the second branch.
    OneStrongColumn { n: usize, m: usize, beta: f64, eps: f64 },
    /// Single member, two basestations: user `i` weighs
    /// `(beta^i, beta^(i-1/2))`. Max-weight piles everyone onto
    /// basestation 0 even under random arrival orders, for ratio about `n`.
    MaxWeightPathology { n: usize, beta: f64 },
    /// Identical basestations with a zero pad between records: member `l`
    /// reads `[beta, 0, beta^2, 0, ..., beta^l, 0, ..., 0]`. When only the
    /// immediately preceding arrival may be moved, records pile up and the
    /// ratio returns to `n/m`.
    PaddedRecords { n: usize, beta: f64 },
    /// Two matrices (two basestations, `n` even) identical except for the
    /// last user, who weighs `(x, a)` in member 0 and `(a, x)` in member 1
    /// with `a << b ~ c << x`. Any algorithm moving at most one user per
    /// arrival has ratio above `n/2 - 1` on one of them.
    ReassignPair {
        n: usize,
        a: f64,
        b: f64,
        c: f64,
        x: f64,
    },
}

/// Stable names of the adversarial families.
pub fn family_names() -> &'static [&'static str] {
    &[
        "identical-geometric",
        "one-strong-column",
        "max-weight-pathology",
        "padded-records",
        "reassign-pair",
    ]
}

impl Family {
    /// Builds a family by registry name from a parameter bag.
    pub fn from_name(name: &str, params: &FamilyParams) -> Result<Family> {
        let n = params.n;
        let beta = params.beta.unwrap_or(10.0);
        let fixed_m = |required: usize| -> Result<usize> {
            match params.m {
                Some(m) if m != required => Err(Error::InvalidParam(format!(
                    "family '{name}' is defined for m={required}, got m={m}"
                ))),
                _ => Ok(required),
            }
        };
        let family = match name {
            "identical-geometric" => Family::IdenticalGeometric {
                n,
                m: params.m.unwrap_or(2),
                beta,
            },
            "one-strong-column" => Family::OneStrongColumn {
                n,
                m: params.m.unwrap_or(2),
                beta,
                eps: params.eps.unwrap_or(0.01),
            },
            "max-weight-pathology" => Family::MaxWeightPathology {
                n,
                beta,
            },
            "padded-records" => Family::PaddedRecords { n, beta },
            "reassign-pair" => Family::ReassignPair {
                n,
                a: params.a.unwrap_or(1.0),
                b: params.b.unwrap_or(100.0),
                c: params.c.unwrap_or(101.0),
                x: params.x.unwrap_or(1e6),
            },
            _ => {
                return Err(Error::UnknownName(format!(
                    "unknown family '{name}'; available: {}",
                    family_names().join(", ")
                )))
            }
        };
        if let Family::MaxWeightPathology { .. } | Family::PaddedRecords { .. }
        | Family::ReassignPair { .. } = family
        {
            fixed_m(2)?;
        }
        family.validate()?;
        Ok(family)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::IdenticalGeometric { .. } => "identical-geometric",
            Family::OneStrongColumn { .. } => "one-strong-column",
            Family::MaxWeightPathology { .. } => "max-weight-pathology",
            Family::PaddedRecords { .. } => "padded-records",
            Family::ReassignPair { .. } => "reassign-pair",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Family::IdenticalGeometric { n, .. }
            | Family::OneStrongColumn { n, .. }
            | Family::MaxWeightPathology { n, .. }
            | Family::PaddedRecords { n, .. }
            | Family::ReassignPair { n, .. } => n,
        }
    }

    pub fn m(&self) -> usize {
        match *self {
            Family::IdenticalGeometric { m, .. } | Family::OneStrongColumn { m, .. } => m,
            Family::MaxWeightPathology { .. }
            | Family::PaddedRecords { .. }
            | Family::ReassignPair { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_beta = |beta: f64| -> Result<()> {
            // NaN fails the finiteness test, so the two clauses cover it.
            if beta <= 1.0 || !beta.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "growth base beta={beta} must be finite and > 1"
                )));
            }
            Ok(())
        };
        match *self {
            Family::IdenticalGeometric { n, m, beta } => {
                check_beta(beta)?;
                if m < 1 || n < m {
                    return Err(Error::InvalidParam(format!(
                        "identical-geometric needs n >= m >= 1, got n={n}, m={m}"
                    )));
                }
            }
            Family::OneStrongColumn { n, m, beta, eps } => {
                check_beta(beta)?;
                if m < 2 || n < m {
                    return Err(Error::InvalidParam(format!(
                        "one-strong-column needs n >= m >= 2, got n={n}, m={m}"
                    )));
                }
                if !(eps > 0.0 && eps < 1.0) {
                    return Err(Error::InvalidParam(format!(
                        "weak weight eps={eps} must lie in (0, 1)"
                    )));
                }
            }
            Family::MaxWeightPathology { n, beta } => {
                check_beta(beta)?;
                if n < 2 {
                    return Err(Error::InvalidParam(
                        "max-weight-pathology needs n >= 2".into(),
                    ));
                }
            }
            Family::PaddedRecords { n, beta } => {
                check_beta(beta)?;
                if n < 2 {
                    return Err(Error::InvalidParam("padded-records needs n >= 2".into()));
                }
            }
            Family::ReassignPair { n, a, b, c, x } => {
                if n < 4 || n % 2 != 0 {
                    return Err(Error::InvalidParam(format!(
                        "reassign-pair needs even n >= 4, got n={n}"
                    )));
                }
                for (label, v) in [("a", a), ("b", b), ("c", c), ("x", x)] {
                    if !v.is_finite() || v <= 0.0 {
                        return Err(Error::InvalidParam(format!(
                            "weight {label}={v} must be finite and > 0"
                        )));
                    }
                }
                if !(a < b && a < c && x > b && x > c) {
                    return Err(Error::InvalidParam(format!(
                        "reassign-pair needs a < b, a < c and x > b, x > c; \
                         got a={a}, b={b}, c={c}, x={x}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of matrices in the family.
    pub fn member_count(&self) -> usize {
        match *self {
            Family::IdenticalGeometric { n, .. } | Family::OneStrongColumn { n, .. } => n,
            Family::MaxWeightPathology { .. } => 1,
            Family::PaddedRecords { n, .. } => n.div_ceil(2),
            Family::ReassignPair { .. } => 2,
        }
    }

    /// Per-user log-rates of the identical-basestation members.
    fn identical_log_rates(&self, idx: usize) -> Option<Vec<f64>> {
        match *self {
            Family::IdenticalGeometric { n, beta, .. } => {
                let l = idx + 1;
                let lb = beta.ln();
                Some(
                    (1..=n)
                        .map(|i| if i <= l { i as f64 * lb } else { f64::NEG_INFINITY })
                        .collect(),
                )
            }
            Family::PaddedRecords { n, beta } => {
                let l = idx + 1;
                let lb = beta.ln();
                // records at 1-based positions 1, 3, ..., 2l-1
                Some(
                    (1..=n)
                        .map(|pos| {
                            if pos % 2 == 1 && pos < 2 * l {
                                (pos.div_ceil(2)) as f64 * lb
                            } else {
                                f64::NEG_INFINITY
                            }
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Member `idx` (0-based) in log space.
    pub fn log_member(&self, idx: usize) -> Result<LogMatrix> {
        if idx >= self.member_count() {
            return Err(Error::InvalidParam(format!(
                "member {idx} out of range; family '{}' has {} members",
                self.name(),
                self.member_count()
            )));
        }
        match *self {
            Family::IdenticalGeometric { n, .. } | Family::PaddedRecords { n, .. } => {
                let m = self.m();
                let rates = self.identical_log_rates(idx).unwrap();
                let mut data = Vec::with_capacity(n * m);
                for &r in &rates {
                    data.extend(std::iter::repeat_n(r, m));
                }
                LogMatrix::new(n, m, data)
            }
            Family::OneStrongColumn { n, m, beta, eps } => {
                let l = idx + 1;
                let (lb, le) = (beta.ln(), eps.ln());
                let mut data = Vec::with_capacity(n * m);
                for i in 1..=n {
                    data.push(if i <= l { i as f64 * lb } else { le });
                    data.extend(std::iter::repeat_n(le, m - 1));
                }
                LogMatrix::new(n, m, data)
            }
            Family::MaxWeightPathology { n, beta } => {
                let lb = beta.ln();
                let mut data = Vec::with_capacity(n * 2);
                for i in 1..=n {
                    data.push(i as f64 * lb);
                    data.push((i as f64 - 0.5) * lb);
                }
                LogMatrix::new(n, 2, data)
            }
            Family::ReassignPair { n, a, b, c, x } => {
                let half = n / 2;
                let last = if idx == 0 { (x, a) } else { (a, x) };
                let mut rows: Vec<(f64, f64)> = Vec::with_capacity(n);
                rows.extend(std::iter::repeat_n((b, a), half));
                rows.extend(std::iter::repeat_n((a, c), half - 1));
                rows.push(last);
                let data: Vec<f64> = rows.into_iter().flat_map(|(p, q)| [p.ln(), q.ln()]).collect();
                LogMatrix::new(n, 2, data)
            }
        }
    }

    /// Member `idx` as a linear matrix; errors when it overflows f64.
    ///
    /// Built directly with repeated multiplication, not by exponentiating
    /// the log member, so small members are exact (powers of 2 bitwise,
    /// `1e6` prints as `1e6`).
    pub fn linear_member(&self, idx: usize) -> Result<WeightMatrix> {
        if idx >= self.member_count() {
            return Err(Error::InvalidParam(format!(
                "member {idx} out of range; family '{}' has {} members",
                self.name(),
                self.member_count()
            )));
        }
        let w = match *self {
            Family::IdenticalGeometric { n, m, beta } => {
                let l = idx + 1;
                let mut power = 1.0;
                let rates: Vec<f64> = (1..=n)
                    .map(|i| {
                        if i <= l {
                            power *= beta;
                            power
                        } else {
                            0.0
                        }
                    })
                    .collect();
                check_finite(self.name(), &rates)?;
                WeightMatrix::identical(&rates, m)?
            }
            Family::PaddedRecords { n, beta } => {
                let l = idx + 1;
                let mut power = 1.0;
                let rates: Vec<f64> = (1..=n)
                    .map(|pos| {
                        if pos % 2 == 1 && pos < 2 * l {
                            power *= beta;
                            power
                        } else {
                            0.0
                        }
                    })
                    .collect();
                check_finite(self.name(), &rates)?;
                WeightMatrix::identical(&rates, 2)?
            }
            Family::OneStrongColumn { n, m, beta, eps } => {
                let l = idx + 1;
                let mut power = 1.0;
                let mut data = Vec::with_capacity(n * m);
                for i in 1..=n {
                    let strong = if i <= l {
                        power *= beta;
                        power
                    } else {
                        eps
                    };
                    data.push(strong);
                    data.extend(std::iter::repeat_n(eps, m - 1));
                }
                check_finite(self.name(), &data)?;
                WeightMatrix::new(n, m, data)?
            }
            Family::MaxWeightPathology { n, beta } => {
                let root = beta.sqrt();
                let mut power = 1.0;
                let mut data = Vec::with_capacity(n * 2);
                for _ in 1..=n {
                    power *= beta;
                    data.push(power);
                    data.push(power / root);
                }
                check_finite(self.name(), &data)?;
                WeightMatrix::new(n, 2, data)?
            }
            Family::ReassignPair { n, a, b, c, x } => {
                let half = n / 2;
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
                rows.extend(std::iter::repeat_n(vec![b, a], half));
                rows.extend(std::iter::repeat_n(vec![a, c], half - 1));
                rows.push(if idx == 0 { vec![x, a] } else { vec![a, x] });
                WeightMatrix::from_rows(rows)?
            }
        };
        Ok(w)
    }

    /// Log of the offline optimal utility of member `idx`, in closed form.
    pub fn log_opt(&self, idx: usize) -> Result<f64> {
        if idx >= self.member_count() {
            return Err(Error::InvalidParam(format!(
                "member {idx} out of range; family '{}' has {} members",
                self.name(),
                self.member_count()
            )));
        }
        Ok(match *self {
            Family::IdenticalGeometric { m, .. } => {
                log_identical_opt(&self.identical_log_rates(idx).unwrap(), m)
            }
            Family::PaddedRecords { .. } => {
                log_identical_opt(&self.identical_log_rates(idx).unwrap(), 2)
            }
            Family::OneStrongColumn { m, beta, eps, .. } => {
                // user l alone on the strong column, everyone else spread
                // over the m-1 weak columns: beta^l + (m-1) eps
                let l = (idx + 1) as f64;
                log_sum_exp(&[l * beta.ln(), ((m - 1) as f64).ln() + eps.ln()])
            }
            Family::MaxWeightPathology { n, beta } => {
                // user n alone on basestation 0, the rest share 1:
                // beta^n + (sum_{i<n} beta^(i-1/2)) / (n-1)
                let lb = beta.ln();
                let shared: Vec<f64> = (1..n).map(|i| (i as f64 - 0.5) * lb).collect();
                log_sum_exp(&[
                    n as f64 * lb,
                    log_sum_exp(&shared) - ((n - 1) as f64).ln(),
                ])
            }
            Family::ReassignPair { n, a, b, c, x } => {
                // the x user sits alone; everyone else shares the other
                // basestation
                let half = (n / 2) as f64;
                let rest = if idx == 0 {
                    // others' weights on basestation 1: a (first half), c
                    half * a + (half - 1.0) * c
                } else {
                    // others' weights on basestation 0: b (first half), a
                    half * b + (half - 1.0) * a
                };
                (x + rest / (n as f64 - 1.0)).ln()
            }
        })
    }
}

/// Random ensembles for average-case benchmarks and the summary figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomModel {
    /// Identical basestations, per-user scalar rate Uniform[0, hi].
    IdenticalUniform { hi: f64 },
    /// Every entry i.i.d. Uniform[0, hi].
    IidUniform { hi: f64 },
    /// Column 0 Uniform[0, 2*strong_mean], every other column
    /// Uniform[0, 2*weak_mean]: one systematically strong basestation.
    CorrelatedUniform { strong_mean: f64, weak_mean: f64 },
    /// Same means, exponential marginals: heavy upper tail makes the strong
    /// column's records much larger than typical weights.
    CorrelatedExponential { strong_mean: f64, weak_mean: f64 },
}

/// Stable names of the random models.
pub fn model_names() -> &'static [&'static str] {
    &[
        "identical-uniform",
        "iid-uniform",
        "correlated-uniform",
        "correlated-exponential",
    ]
}

impl RandomModel {
    /// Builds a model by registry name. `hi` defaults to 10, the means to
    /// 10 (strong) and 5 (weak). The shorthands `identical`, `iid` and
    /// `correlated` resolve to the uniform flavours.
    pub fn from_name(name: &str, hi: Option<f64>, strong_mean: Option<f64>, weak_mean: Option<f64>) -> Result<RandomModel> {
        let model = match name {
            "identical-uniform" | "identical" => RandomModel::IdenticalUniform {
                hi: hi.unwrap_or(10.0),
            },
            "iid-uniform" | "iid" => RandomModel::IidUniform {
                hi: hi.unwrap_or(10.0),
            },
            "correlated-uniform" | "correlated" => RandomModel::CorrelatedUniform {
                strong_mean: strong_mean.unwrap_or(10.0),
                weak_mean: weak_mean.unwrap_or(5.0),
            },
            "correlated-exponential" => RandomModel::CorrelatedExponential {
                strong_mean: strong_mean.unwrap_or(10.0),
                weak_mean: weak_mean.unwrap_or(5.0),
            },
            _ => {
                return Err(Error::UnknownName(format!(
                    "unknown random model '{name}'; available: {}",
                    model_names().join(", ")
                )))
            }
        };
        model.validate()?;
        Ok(model)
    }

    pub fn name(&self) -> &'static str {
        match self {
            RandomModel::IdenticalUniform { .. } => "identical-uniform",
            RandomModel::IidUniform { .. } => "iid-uniform",
            RandomModel::CorrelatedUniform { .. } => "correlated-uniform",
            RandomModel::CorrelatedExponential { .. } => "correlated-exponential",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |label: &str, v: f64| -> Result<()> {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParam(format!(
                    "{label}={v} must be finite and > 0"
                )));
            }
            Ok(())
        };
        match *self {
            RandomModel::IdenticalUniform { hi } | RandomModel::IidUniform { hi } => {
                pos("hi", hi)
            }
            RandomModel::CorrelatedUniform {
                strong_mean,
                weak_mean,
            }
            | RandomModel::CorrelatedExponential {
                strong_mean,
                weak_mean,
            } => {
                pos("strong-mean", strong_mean)?;
                pos("weak-mean", weak_mean)
            }
        }
    }

    /// Whether samples have identical basestations (constant rows).
    pub fn is_identical(&self) -> bool {
        matches!(self, RandomModel::IdenticalUniform { .. })
    }

    /// Draws one `n x m` weight matrix.
    pub fn sample(&self, n: usize, m: usize, rng: &mut impl Rng) -> Result<WeightMatrix> {
        let w = match *self {
            RandomModel::IdenticalUniform { hi } => {
                let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..hi)).collect();
                WeightMatrix::identical(&rates, m)?
            }
            RandomModel::IidUniform { hi } => {
                let data: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..hi)).collect();
                WeightMatrix::new(n, m, data)?
            }
            RandomModel::CorrelatedUniform {
                strong_mean,
                weak_mean,
            } => {
                let data: Vec<f64> = (0..n * m)
                    .map(|k| {
                        let mean = if k % m == 0 { strong_mean } else { weak_mean };
                        rng.gen_range(0.0..2.0 * mean)
                    })
                    .collect();
                WeightMatrix::new(n, m, data)?
            }
            RandomModel::CorrelatedExponential {
                strong_mean,
                weak_mean,
            } => {
                let strong = Exp::new(1.0 / strong_mean).expect("validated rate");
                let weak = Exp::new(1.0 / weak_mean).expect("validated rate");
                let data: Vec<f64> = (0..n * m)
                    .map(|k| {
                        if k % m == 0 {
                            strong.sample(rng)
                        } else {
                            weak.sample(rng)
                        }
                    })
                    .collect();
                WeightMatrix::new(n, m, data)?
            }
        };
        Ok(w)
    }
}
