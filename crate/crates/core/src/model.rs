//! Core data model: weight matrices, arrival orders, allocations, and the
//! online execution contract shared by every algorithm in this crate.
//!
//! The objective throughout is the time-sharing utility. Users assigned to
//! the same basestation share it equally in time, so a basestation serving
//! the user set `M_j` with degree `d_j = |M_j|` delivers
//!
//! ```text
//! TS = sum_j ( sum_{i in M_j} w[i][j] ) / d_j
//! ```
//!
//! where an empty basestation contributes exactly 0. Weights are finite and
//! nonnegative; `w[i][j]` is the rate user `i` would get from basestation
//! `j` if served alone.
//!
//! Indices are 0-based everywhere in this API. Serialized forms (CSV, JSON,
//! trace dumps) are 1-based; the conversion lives in [`crate::io`].

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Rectangular nonnegative weight matrix, rows are users, columns are
/// basestations.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    m: usize,
    w: Vec<f64>, // row-major, length n*m
}

impl WeightMatrix {
    /// Builds a matrix from row-major data. Every entry must be finite and
    /// nonnegative; `data.len()` must equal `n * m`.
    pub fn new(n: usize, m: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParam(format!(
                "weight matrix must be nonempty, got n={n}, m={m}"
            )));
        }
        if data.len() != n * m {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n * m,
                n,
                m,
                data.len()
            )));
        }
        for (k, &v) in data.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "weight at user {}, basestation {} is {} (must be finite and >= 0)",
                    k / m,
                    k % m,
                    v
                )));
            }
        }
        Ok(WeightMatrix { n, m, w: data })
    }

    /// Builds a matrix from per-user rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        WeightMatrix::new(n, m, rows.into_iter().flatten().collect())
    }

    /// Identical-basestation matrix: every row is the user's scalar rate
    /// replicated across all `m` columns.
    pub fn identical(rates: &[f64], m: usize) -> Result<Self> {
        let rows = rates.iter().map(|&r| vec![r; m]).collect();
        WeightMatrix::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, user: usize, bs: usize) -> f64 {
        self.w[user * self.m + bs]
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.w[user * self.m..(user + 1) * self.m]
    }

    /// Per-user rates when every row is constant (identical basestations),
    /// `None` otherwise. NaN entries never count as identical.
    pub fn identical_rates(&self) -> Option<Vec<f64>> {
        let mut rates = Vec::with_capacity(self.n);
        for row in self.rows() {
            let v = row[0];
            if row.iter().any(|&x| x != v) {
                return None;
            }
            rates.push(v);
        }
        Some(rates)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.w.chunks(self.m)
    }

    /// True when every row is constant, i.e. each user sees the same rate
    /// from all basestations. Exact comparison; generators that intend
    /// identical basestations replicate bit-identical values.
    pub fn is_identical_basestations(&self) -> bool {
        self.rows().all(|r| r.iter().all(|&v| v == r[0]))
    }

    /// Column-0 values, the per-user scalar rate of an identical-basestation
    /// instance. Algorithms that assume identical basestations read this.
    pub fn scalar_rates(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, 0)).collect()
    }

    /// Returns a copy with column `bs` removed. Used by the hide-and-seek
    /// constructions that run a matching policy on all other basestations.
    pub fn without_column(&self, bs: usize) -> Result<Self> {
        if bs >= self.m {
            return Err(Error::InvalidParam(format!(
                "column {} out of range for m={}",
                bs, self.m
            )));
        }
        if self.m == 1 {
            return Err(Error::InvalidParam(
                "cannot delete the only basestation".into(),
            ));
        }
        let mut data = Vec::with_capacity(self.n * (self.m - 1));
        for row in self.rows() {
            for (j, &v) in row.iter().enumerate() {
                if j != bs {
                    data.push(v);
                }
            }
        }
        WeightMatrix::new(self.n, self.m - 1, data)
    }
}

/// A permutation of user indices; `perm[i]` is the original index of the
/// user revealed at arrival position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalOrder {
    perm: Vec<usize>,
}

impl ArrivalOrder {
    /// Validates that `perm` is a bijection on `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidParam(format!(
                    "arrival order is not a permutation of 0..{n}"
                )));
            }
            seen[p] = true;
        }
        Ok(ArrivalOrder { perm })
    }

    pub fn identity(n: usize) -> Self {
        ArrivalOrder {
            perm: (0..n).collect(),
        }
    }

    /// Uniformly random order (Fisher-Yates via `shuffle`).
    pub fn uniform(n: usize, rng: &mut impl Rng) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        ArrivalOrder { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    /// Original user index revealed at position `pos`.
    pub fn user_at(&self, pos: usize) -> usize {
        self.perm[pos]
    }
}

/// Reorders matrix rows so that row `i` of the output is the row revealed
/// at arrival position `i`. The output is the online reveal sequence.
pub fn permute_rows(w: &WeightMatrix, order: &ArrivalOrder) -> Result<WeightMatrix> {
    if order.len() != w.n() {
        return Err(Error::ShapeMismatch(format!(
            "order has {} entries for a matrix with {} users",
            order.len(),
            w.n()
        )));
    }
    let rows = order.as_slice().iter().map(|&u| w.row(u).to_vec()).collect();
    WeightMatrix::from_rows(rows)
}

/// Total assignment of users to basestations, with per-basestation degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    assign: Vec<usize>,
    degrees: Vec<usize>,
}

impl Allocation {
    /// Builds an allocation over `assign.len()` users and `m` basestations.
    pub fn from_assign(assign: Vec<usize>, m: usize) -> Result<Self> {
        let mut degrees = vec![0usize; m];
        for (i, &j) in assign.iter().enumerate() {
            if j >= m {
                return Err(Error::InvalidAllocation(format!(
                    "user {i} assigned to basestation {j}, but m={m}"
                )));
            }
            degrees[j] += 1;
        }
        Ok(Allocation { assign, degrees })
    }

    /// Number of users covered.
    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    pub fn m(&self) -> usize {
        self.degrees.len()
    }

    /// Basestation of user `i`.
    pub fn basestation_of(&self, user: usize) -> usize {
        self.assign[user]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assign
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Users on basestation `j`, ascending by user index.
    pub fn users_of(&self, bs: usize) -> Vec<usize> {
        (0..self.assign.len())
            .filter(|&i| self.assign[i] == bs)
            .collect()
    }
}

/// Nonnegative value of the time-sharing objective.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UtilityValue(f64);

impl UtilityValue {
    pub(crate) fn new_unchecked(v: f64) -> Self {
        debug_assert!(v >= 0.0 && v.is_finite());
        UtilityValue(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<UtilityValue> for f64 {
    fn from(u: UtilityValue) -> f64 {
        u.0
    }
}

/// Time-sharing utility of `alloc` under `w`: each basestation contributes
/// the sum of its users' weights divided by its degree, and an empty
/// basestation contributes exactly 0.
///
/// `alloc` may cover a prefix of the users (an online run cut short), but
/// never more users than `w` has, and must agree with `w` on the number of
/// basestations.
///
/// ```
/// use onbase::model::{Allocation, WeightMatrix, ts_utility};
/// let w = WeightMatrix::from_rows(vec![vec![3.0, 1.0], vec![1.0, 3.0]]).unwrap();
/// let a = Allocation::from_assign(vec![0, 1], 2).unwrap();
/// assert_eq!(ts_utility(&a, &w).unwrap().value(), 6.0);
/// ```
pub fn ts_utility(alloc: &Allocation, w: &WeightMatrix) -> Result<UtilityValue> {
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
    let mut sums = vec![0.0f64; w.m()];
    for (i, &j) in alloc.assignments().iter().enumerate() {
        sums[j] += w.get(i, j);
    }
    let mut total = 0.0;
    for (j, &s) in sums.iter().enumerate() {
        let d = alloc.degrees()[j];
        if d > 0 {
            total += s / d as f64;
        }
    }
    Ok(UtilityValue::new_unchecked(total))
}

/// One prior arrival moved to a different basestation, expressed in arrival
/// positions because that is all an online algorithm can see.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MovedUser {
    /// Arrival position of the user being moved (strictly before the
    /// current arrival).
    pub position: usize,
    /// Destination basestation.
    pub to: usize,
}

/// Decision returned by an allocation algorithm for one arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// Basestation for the arriving user.
    pub basestation: usize,
    /// At most one earlier user may be moved at the same arrival.
    pub moved: Option<MovedUser>,
    /// Diagnostic surfaced in the trace (e.g. a contract warning).
    pub warning: Option<String>,
}

impl Decision {
    pub fn assign(basestation: usize) -> Self {
        Decision {
            basestation,
            moved: None,
            warning: None,
        }
    }
}

/// Adjustment recorded in the trace, in original user indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjustment {
    /// User moved between basestations (reassigning allocation algorithms).
    Move { user: usize, from: usize, to: usize },
    /// User dropped from a matching (evicting matching policies).
    Evict { user: usize, from: usize },
}

/// One per-arrival record of what an online run did.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    /// Arrival position, 0-based.
    pub position: usize,
    /// Original index of the revealed user.
    pub user: usize,
    /// Chosen basestation; `None` means a matching policy left the user
    /// unmatched (never happens for allocation algorithms).
    pub basestation: Option<usize>,
    pub adjustment: Option<Adjustment>,
}

/// Full record of an online run.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTrace {
    pub entries: Vec<TraceEntry>,
    /// Deduplicated warnings emitted by the algorithm.
    pub warnings: Vec<String>,
    /// Objective value maintained incrementally while running: time-sharing
    /// utility for allocation runs, matched weight for matching runs.
    pub final_value: f64,
}

/// Online allocation algorithm: sees arrivals one at a time, must place each
/// user immediately, and may move at most one earlier user per arrival.
///
/// Instances hold per-run state; `begin` resets it. `n` and `m` are known
/// upfront (the horizon is part of the model), and `rng` is the only source
/// of randomness, so a fixed seed makes the run deterministic. Decisions at
/// position `i` may depend only on rows revealed at positions `0..=i`, which
/// is what the prefix-consistency tests check.
pub trait OnlineAlgorithm {
    /// Stable registry name.
    fn name(&self) -> &'static str;

    /// Resets state for a run over `n` users and `m` basestations. Errors
    /// are configuration problems (e.g. a sample size at least `n`).
    fn begin(&mut self, n: usize, m: usize, rng: &mut dyn RngCore) -> Result<()>;

    /// Decides where the user revealed at `position` with `weights` goes.
    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision;
}

/// Online matching policy: may leave users unmatched and holds at most one
/// user per basestation, evicting the current holder when it takes an
/// occupied one.
pub trait OnlineMatchingPolicy {
    fn name(&self) -> &'static str;

    fn begin(&mut self, n: usize, m: usize, rng: &mut dyn RngCore) -> Result<()>;

    /// `None` leaves the arrival unmatched; `Some(j)` matches it to `j`,
    /// evicting (deleting) the current holder of `j` if there is one.
    fn decide(&mut self, position: usize, weights: &[f64]) -> Option<usize>;
}

struct Bookkeeper {
    sums: Vec<f64>,
    degrees: Vec<usize>,
    utility: f64,
}

impl Bookkeeper {
    fn new(m: usize) -> Self {
        Bookkeeper {
            sums: vec![0.0; m],
            degrees: vec![0; m],
            utility: 0.0,
        }
    }

    fn contribution(&self, j: usize) -> f64 {
        if self.degrees[j] > 0 {
            self.sums[j] / self.degrees[j] as f64
        } else {
            0.0
        }
    }

    fn add(&mut self, j: usize, weight: f64) {
        self.utility -= self.contribution(j);
        self.sums[j] += weight;
        self.degrees[j] += 1;
        self.utility += self.contribution(j);
    }

    fn remove(&mut self, j: usize, weight: f64) {
        self.utility -= self.contribution(j);
        self.sums[j] -= weight;
        self.degrees[j] -= 1;
        if self.degrees[j] == 0 {
            self.sums[j] = 0.0; // keep drift out of emptied basestations
        }
        self.utility += self.contribution(j);
    }
}

fn push_warning(warnings: &mut Vec<String>, w: Option<String>) {
    if let Some(w) = w {
        if !warnings.contains(&w) {
            warnings.push(w);
        }
    }
}

/// Runs an allocation algorithm over `w` in the given arrival order.
///
/// Returns the final allocation (indexed by original user) and the decision
/// trace. The engine validates every decision: basestation in range, moved
/// user revealed earlier and actually sitting on the basestation it is
/// moved from. Violations abort the run.
pub fn run_online_ordered(
    alg: &mut dyn OnlineAlgorithm,
    w: &WeightMatrix,
    order: &ArrivalOrder,
    seed: u64,
) -> Result<(Allocation, DecisionTrace)> {
    if order.len() != w.n() {
        return Err(Error::ShapeMismatch(format!(
            "order has {} entries for a matrix with {} users",
            order.len(),
            w.n()
        )));
    }
    let (n, m) = (w.n(), w.m());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    alg.begin(n, m, &mut rng)?;

    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut books = Bookkeeper::new(m);
    let mut entries = Vec::with_capacity(n);
    let mut warnings = Vec::new();

    for pos in 0..n {
        let user = order.user_at(pos);
        let decision = alg.decide(pos, w.row(user));
        push_warning(&mut warnings, decision.warning.clone());
        if decision.basestation >= m {
            return Err(Error::ContractViolation(format!(
                "{} chose basestation {} at position {} but m={}",
                alg.name(),
                decision.basestation,
                pos,
                m
            )));
        }
        let mut adjustment = None;
        if let Some(mv) = decision.moved {
            if mv.position >= pos {
                return Err(Error::ContractViolation(format!(
                    "{} moved position {} at position {}; only earlier arrivals may move",
                    alg.name(),
                    mv.position,
                    pos
                )));
            }
            if mv.to >= m {
                return Err(Error::ContractViolation(format!(
                    "{} moved a user to basestation {} but m={}",
                    alg.name(),
                    mv.to,
                    m
                )));
            }
            let moved_user = order.user_at(mv.position);
            let from = assign[moved_user].ok_or_else(|| {
                Error::ContractViolation(format!("moved user at position {} unassigned", mv.position))
            })?;
            if from == mv.to {
                return Err(Error::ContractViolation(format!(
                    "{} moved a user from basestation {} to itself",
                    alg.name(),
                    from
                )));
            }
            books.remove(from, w.get(moved_user, from));
            books.add(mv.to, w.get(moved_user, mv.to));
            assign[moved_user] = Some(mv.to);
            adjustment = Some(Adjustment::Move {
                user: moved_user,
                from,
                to: mv.to,
            });
        }
        books.add(decision.basestation, w.get(user, decision.basestation));
        assign[user] = Some(decision.basestation);
        entries.push(TraceEntry {
            position: pos,
            user,
            basestation: Some(decision.basestation),
            adjustment,
        });
    }

    let assign: Vec<usize> = assign.into_iter().map(Option::unwrap).collect();
    let alloc = Allocation::from_assign(assign, m)?;
    let trace = DecisionTrace {
        entries,
        warnings,
        final_value: books.utility,
    };
    Ok((alloc, trace))
}

/// Runs an allocation algorithm with rows revealed in matrix order
/// (`w` is already the reveal sequence).
pub fn run_online(
    alg: &mut dyn OnlineAlgorithm,
    w: &WeightMatrix,
    seed: u64,
) -> Result<(Allocation, DecisionTrace)> {
    run_online_ordered(alg, w, &ArrivalOrder::identity(w.n()), seed)
}

/// Outcome of an online matching run: user/basestation/weight edges.
#[derive(Debug, Clone, PartialEq)]
pub struct OnlineMatchOutcome {
    /// `holder[j]` is the user currently matched to basestation `j`.
    pub holder: Vec<Option<usize>>,
    /// Total weight of the held edges.
    pub weight: f64,
}

/// Runs a matching policy over `w` in the given arrival order.
pub fn run_online_matching_ordered(
    policy: &mut dyn OnlineMatchingPolicy,
    w: &WeightMatrix,
    order: &ArrivalOrder,
    seed: u64,
) -> Result<(OnlineMatchOutcome, DecisionTrace)> {
    if order.len() != w.n() {
        return Err(Error::ShapeMismatch(format!(
            "order has {} entries for a matrix with {} users",
            order.len(),
            w.n()
        )));
    }
    let (n, m) = (w.n(), w.m());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    policy.begin(n, m, &mut rng)?;

    let mut holder: Vec<Option<usize>> = vec![None; m];
    let mut weight = 0.0f64;
    let mut entries = Vec::with_capacity(n);

    for pos in 0..n {
        let user = order.user_at(pos);
        let choice = policy.decide(pos, w.row(user));
        let mut adjustment = None;
        if let Some(j) = choice {
            if j >= m {
                return Err(Error::ContractViolation(format!(
                    "{} matched basestation {} at position {} but m={}",
                    policy.name(),
                    j,
                    pos,
                    m
                )));
            }
            if let Some(prev) = holder[j] {
                weight -= w.get(prev, j);
                adjustment = Some(Adjustment::Evict { user: prev, from: j });
            }
            holder[j] = Some(user);
            weight += w.get(user, j);
        }
        entries.push(TraceEntry {
            position: pos,
            user,
            basestation: choice,
            adjustment,
        });
    }

    let outcome = OnlineMatchOutcome { holder, weight };
    let trace = DecisionTrace {
        entries,
        warnings: Vec::new(),
        final_value: outcome.weight,
    };
    Ok((outcome, trace))
}

/// Runs a matching policy with rows revealed in matrix order.
pub fn run_online_matching(
    policy: &mut dyn OnlineMatchingPolicy,
    w: &WeightMatrix,
    seed: u64,
) -> Result<(OnlineMatchOutcome, DecisionTrace)> {
    run_online_matching_ordered(policy, w, &ArrivalOrder::identity(w.n()), seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<f64>>) -> WeightMatrix {
        WeightMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn ts_utility_splits_by_degree() {
        let w = mat(vec![vec![3.0, 1.0], vec![1.0, 3.0]]);
        let split = Allocation::from_assign(vec![0, 1], 2).unwrap();
        assert_eq!(ts_utility(&split, &w).unwrap().value(), 6.0);
        let shared = Allocation::from_assign(vec![0, 0], 2).unwrap();
        assert_eq!(ts_utility(&shared, &w).unwrap().value(), 2.0);
    }

    #[test]
    fn ts_utility_identical_example_matches_partition_brute_force() {
        let w = WeightMatrix::identical(&[4.0, 3.0, 2.0, 1.0], 2).unwrap();
        let alloc = Allocation::from_assign(vec![0, 1, 1, 1], 2).unwrap();
        let got = ts_utility(&alloc, &w).unwrap().value();
        assert_eq!(got, 4.0 + 6.0 / 3.0);

        // Independent oracle: evaluate all 2^4 partitions with plain loops.
        let rates = [4.0, 3.0, 2.0, 1.0];
        let mut best = f64::MIN;
        for mask in 0..16u32 {
            let mut s = [0.0f64; 2];
            let mut d = [0usize; 2];
            for (i, &r) in rates.iter().enumerate() {
                let j = ((mask >> i) & 1) as usize;
                s[j] += r;
                d[j] += 1;
            }
            let mut total = 0.0;
            for j in 0..2 {
                if d[j] > 0 {
                    total += s[j] / d[j] as f64;
                }
            }
            best = best.max(total);
        }
        assert_eq!(best, 6.0);
        assert_eq!(got, best);
    }

    #[test]
    fn empty_basestation_contributes_zero() {
        let w = mat(vec![vec![5.0, 7.0]]);
        let alloc = Allocation::from_assign(vec![0], 2).unwrap();
        assert_eq!(ts_utility(&alloc, &w).unwrap().value(), 5.0);
    }

    #[test]
    fn ts_utility_rejects_out_of_range() {
        let w = mat(vec![vec![1.0, 2.0]]);
        assert!(Allocation::from_assign(vec![2], 2).is_err());
        let a3 = Allocation::from_assign(vec![0], 3).unwrap();
        assert!(matches!(ts_utility(&a3, &w), Err(Error::ShapeMismatch(_))));
        let too_many = Allocation::from_assign(vec![0, 0], 2).unwrap();
        assert!(matches!(
            ts_utility(&too_many, &w),
            Err(Error::InvalidAllocation(_))
        ));
    }

    #[test]
    fn weight_matrix_rejects_bad_values() {
        assert!(WeightMatrix::new(1, 2, vec![1.0, -0.5]).is_err());
        assert!(WeightMatrix::new(1, 2, vec![f64::NAN, 0.0]).is_err());
        assert!(WeightMatrix::new(1, 2, vec![f64::INFINITY, 0.0]).is_err());
        assert!(WeightMatrix::new(2, 2, vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn permute_rows_identity_and_swap() {
        let w = mat(vec![vec![1.0], vec![2.0], vec![3.0]]);
        let id = permute_rows(&w, &ArrivalOrder::identity(3)).unwrap();
        assert_eq!(id, w);
        let swapped = permute_rows(&w, &ArrivalOrder::new(vec![2, 0, 1]).unwrap()).unwrap();
        assert_eq!(swapped.row(0), &[3.0]);
        assert_eq!(swapped.row(1), &[1.0]);
        assert_eq!(swapped.row(2), &[2.0]);
    }

    #[test]
    fn arrival_order_rejects_non_permutations() {
        assert!(ArrivalOrder::new(vec![0, 0]).is_err());
        assert!(ArrivalOrder::new(vec![0, 2]).is_err());
    }

    #[test]
    fn uniform_orders_pass_chi_square_on_three_users() {
        // 60000 draws over the 6 orders of 3 users; chi-square with 5
        // degrees of freedom, fixed seed. 20.5 is the 99.9% quantile.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..60000 {
            let o = ArrivalOrder::uniform(3, &mut rng);
            *counts.entry(o.as_slice().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = 10000.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 20.5, "chi-square statistic {chi2} too large");
    }

    struct FixedScript {
        decisions: Vec<Decision>,
    }

    impl OnlineAlgorithm for FixedScript {
        fn name(&self) -> &'static str {
            "fixed-script"
        }
        fn begin(&mut self, _n: usize, _m: usize, _rng: &mut dyn RngCore) -> Result<()> {
            Ok(())
        }
        fn decide(&mut self, position: usize, _weights: &[f64]) -> Decision {
            self.decisions[position].clone()
        }
    }

    #[test]
    fn engine_applies_single_move_and_tracks_utility() {
        let w = WeightMatrix::identical(&[1.0, 2.0], 2).unwrap();
        let mut alg = FixedScript {
            decisions: vec![
                Decision::assign(0),
                Decision {
                    basestation: 0,
                    moved: Some(MovedUser { position: 0, to: 1 }),
                    warning: None,
                },
            ],
        };
        let (alloc, trace) = run_online(&mut alg, &w, 0).unwrap();
        assert_eq!(alloc.assignments(), &[1, 0]);
        assert_eq!(alloc.degrees(), &[1, 1]);
        assert_eq!(
            trace.entries[1].adjustment,
            Some(Adjustment::Move {
                user: 0,
                from: 0,
                to: 1
            })
        );
        let scratch = ts_utility(&alloc, &w).unwrap().value();
        assert!((trace.final_value - scratch).abs() <= 1e-12 * scratch.max(1.0));
    }

    #[test]
    fn engine_rejects_contract_violations() {
        let w = WeightMatrix::identical(&[1.0, 2.0], 2).unwrap();
        let mut bad_bs = FixedScript {
            decisions: vec![Decision::assign(5), Decision::assign(0)],
        };
        assert!(matches!(
            run_online(&mut bad_bs, &w, 0),
            Err(Error::ContractViolation(_))
        ));
        let mut moves_future = FixedScript {
            decisions: vec![
                Decision {
                    basestation: 0,
                    moved: Some(MovedUser { position: 1, to: 1 }),
                    warning: None,
                },
                Decision::assign(0),
            ],
        };
        assert!(matches!(
            run_online(&mut moves_future, &w, 0),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn degrees_always_sum_to_n() {
        let w = WeightMatrix::identical(&[3.0, 1.0, 2.0], 2).unwrap();
        let mut alg = FixedScript {
            decisions: vec![Decision::assign(0), Decision::assign(1), Decision::assign(0)],
        };
        let (alloc, _) = run_online(&mut alg, &w, 0).unwrap();
        assert_eq!(alloc.degrees().iter().sum::<usize>(), 3);
    }
}
