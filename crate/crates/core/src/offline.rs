//! Exact offline baselines: brute-force search over allocations, the
//! closed-form optimum for identical basestations, and maximum-weight /
//! greedy bipartite matchings.
//!
//! These provide the denominators for competitive-ratio reports, so they are
//! exact (no heuristics) and deterministic, with explicit guards on input
//! size where the cost is exponential.

use crate::error::{Error, Result};
use crate::model::{ts_utility, Allocation, UtilityValue, WeightMatrix};

/// Hard cap on `m^n` for [`brute_force_optimal`]; beyond this the search is
/// refused rather than silently taking hours.
pub const BRUTE_FORCE_LIMIT: f64 = 2e7;

/// One user-basestation edge of a matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchEdge {
    pub user: usize,
    pub basestation: usize,
    pub weight: f64,
}

/// A bipartite matching: each user and each basestation appears in at most
/// one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub edges: Vec<MatchEdge>,
    /// Total weight of the edges.
    pub weight: f64,
}

impl Matching {
    /// Basestation matched to each user, if any.
    pub fn user_to_basestation(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for e in &self.edges {
            out[e.user] = Some(e.basestation);
        }
        out
    }
}

/// Exact optimum over every allocation, by exhaustive enumeration of all
/// `m^n` assignments. Ties break toward the lexicographically smallest
/// assignment vector. Errors with [`Error::TooLarge`] when `m^n` exceeds
/// [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_optimal(w: &WeightMatrix) -> Result<(UtilityValue, Allocation)> {
    let (n, m) = (w.n(), w.m());
    if (m as f64).powi(n as i32) > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "brute force over {m}^{n} allocations exceeds the {BRUTE_FORCE_LIMIT:e} cap"
        )));
    }
    let mut assign = vec![0usize; n];
    let mut sums = vec![0.0f64; m];
    let mut degrees = vec![0usize; m];
    let mut best_value = f64::NEG_INFINITY;
    let mut best_assign = assign.clone();
    loop {
        for s in sums.iter_mut() {
            *s = 0.0;
        }
        for d in degrees.iter_mut() {
            *d = 0;
        }
        for (i, &j) in assign.iter().enumerate() {
            sums[j] += w.get(i, j);
            degrees[j] += 1;
        }
        let mut value = 0.0;
        for j in 0..m {
            if degrees[j] > 0 {
                value += sums[j] / degrees[j] as f64;
            }
        }
        if value > best_value {
            best_value = value;
            best_assign.copy_from_slice(&assign);
        }
        // odometer: least-significant digit is the last user, so the first
        // maximizer found is lexicographically smallest
        let mut k = n;
        loop {
            if k == 0 {
                let alloc = Allocation::from_assign(best_assign, m)?;
                let value = ts_utility(&alloc, w)?;
                return Ok((value, alloc));
            }
            k -= 1;
            assign[k] += 1;
            if assign[k] < m {
                break;
            }
            assign[k] = 0;
        }
    }
}

/// Exact optimum when all basestations are identical, i.e. user `i` has one
/// scalar rate. The optimum parks each of the `m - 1` largest rates alone on
/// its own basestation and lets every remaining user share the last one:
///
/// ```text
/// OPT = w(1) + ... + w(m-1) + ( w(m) + ... + w(n) ) / (n - m + 1)
/// ```
///
/// with rates sorted descending. When `m >= n` every user sits alone and the
/// optimum is the plain sum. Returns the value together with an allocation
/// attaining it (indexed by original user position); the value is evaluated
/// through [`ts_utility`] so it is bit-identical to what any consumer of the
/// allocation would recompute.
pub fn optimal_identical_offline(rates: &[f64], m: usize) -> Result<(UtilityValue, Allocation)> {
    let n = rates.len();
    if n == 0 || m == 0 {
        return Err(Error::InvalidParam(
            "need at least one user and one basestation".into(),
        ));
    }
    for (i, &r) in rates.iter().enumerate() {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParam(format!(
                "rate {r} of user {i} must be finite and >= 0"
            )));
        }
    }
    // sort users by rate descending, index ascending on ties, so the
    // allocation is deterministic
    let mut by_rate: Vec<usize> = (0..n).collect();
    by_rate.sort_by(|&a, &b| rates[b].partial_cmp(&rates[a]).unwrap().then(a.cmp(&b)));

    let solos = m.saturating_sub(1).min(n);
    let mut assign = vec![m - 1; n];
    for (bs, &user) in by_rate.iter().take(solos).enumerate() {
        assign[user] = bs;
    }
    if m > n {
        // fewer users than basestations: everyone gets their own
        for (bs, &user) in by_rate.iter().enumerate() {
            assign[user] = bs;
        }
    }
    let alloc = Allocation::from_assign(assign, m)?;
    let w = WeightMatrix::identical(rates, m)?;
    let value = ts_utility(&alloc, &w)?;
    Ok((value, alloc))
}

/// Minimum-cost assignment of all `n` rows (n <= m) via the classical
/// potential-based shortest-augmenting-path algorithm, O(n^2 m). Returns the
/// matched column of each row. Internally 1-based with column 0 as the
/// virtual start of each augmenting path.
fn assignment_min(n: usize, m: usize, cost: &dyn Fn(usize, usize) -> f64) -> Vec<usize> {
    debug_assert!(n <= m && n > 0);
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut p = vec![0usize; m + 1]; // row matched to each column, 0 = none
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![usize::MAX; n];
    for j in 1..=m {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Exact maximum-weight bipartite matching. Since weights are nonnegative,
/// some maximum-weight matching saturates the smaller side, so the solver
/// matches every user (or every basestation when `m < n`); zero-weight edges
/// may appear and do not change the value.
pub fn max_weight_matching(w: &WeightMatrix) -> Matching {
    let (n, m) = (w.n(), w.m());
    let edges: Vec<MatchEdge> = if n <= m {
        let row_to_col = assignment_min(n, m, &|i, j| -w.get(i, j));
        row_to_col
            .into_iter()
            .enumerate()
            .map(|(i, j)| MatchEdge {
                user: i,
                basestation: j,
                weight: w.get(i, j),
            })
            .collect()
    } else {
        // transpose: rows are basestations
        let row_to_col = assignment_min(m, n, &|j, i| -w.get(i, j));
        row_to_col
            .into_iter()
            .enumerate()
            .map(|(j, i)| MatchEdge {
                user: i,
                basestation: j,
                weight: w.get(i, j),
            })
            .collect()
    };
    let weight = edges.iter().map(|e| e.weight).sum();
    let mut edges = edges;
    edges.sort_by_key(|e| e.user);
    Matching { edges, weight }
}

/// Greedy matching: scan all edges by descending weight (ties toward the
/// lower user index, then lower basestation index) and keep each edge whose
/// endpoints are both still free. Zero-weight edges participate. The result
/// is within a factor 2 of the maximum-weight matching.
pub fn greedy_matching(w: &WeightMatrix) -> Matching {
    let (n, m) = (w.n(), w.m());
    let mut order: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .collect();
    order.sort_by(|&(i1, j1), &(i2, j2)| {
        w.get(i2, j2)
            .partial_cmp(&w.get(i1, j1))
            .unwrap()
            .then(i1.cmp(&i2))
            .then(j1.cmp(&j2))
    });
    let mut user_free = vec![true; n];
    let mut bs_free = vec![true; m];
    let mut edges = Vec::new();
    for (i, j) in order {
        if user_free[i] && bs_free[j] {
            user_free[i] = false;
            bs_free[j] = false;
            edges.push(MatchEdge {
                user: i,
                basestation: j,
                weight: w.get(i, j),
            });
        }
    }
    let weight = edges.iter().map(|e| e.weight).sum();
    edges.sort_by_key(|e| e.user);
    Matching { edges, weight }
}

/// Exhaustive maximum-weight matching for cross-checks. Enumerates every
/// injective assignment of the smaller side; refuses instances where the
/// smaller side exceeds 8.
pub fn brute_force_matching(w: &WeightMatrix) -> Result<f64> {
    let (n, m) = (w.n(), w.m());
    if n.min(m) > 8 {
        return Err(Error::TooLarge(
            "brute-force matching is limited to min(n, m) <= 8".into(),
        ));
    }
    // recurse over users (or transposed basestations), each taking any free
    // column or staying unmatched
    fn rec(row: usize, rows: usize, cols: usize, taken: &mut Vec<bool>, get: &dyn Fn(usize, usize) -> f64) -> f64 {
        if row == rows {
            return 0.0;
        }
        let mut best = rec(row + 1, rows, cols, taken, get); // leave row unmatched
        for c in 0..cols {
            if !taken[c] {
                taken[c] = true;
                best = best.max(get(row, c) + rec(row + 1, rows, cols, taken, get));
                taken[c] = false;
            }
        }
        best
    }
    let (rows, cols): (usize, usize) = if n <= m { (n, m) } else { (m, n) };
    let get: Box<dyn Fn(usize, usize) -> f64> = if n <= m {
        Box::new(|i, j| w.get(i, j))
    } else {
        Box::new(|j, i| w.get(i, j))
    };
    let mut taken = vec![false; cols];
    Ok(rec(0, rows, cols, &mut taken, &*get))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_optimum_four_users_two_basestations() {
        let (v, alloc) = optimal_identical_offline(&[4.0, 3.0, 2.0, 1.0], 2).unwrap();
        assert_eq!(v.value(), 4.0 + (3.0 + 2.0 + 1.0) / 3.0);
        // largest user alone, rest together
        assert_eq!(alloc.degrees(), &[1, 3]);
        assert_eq!(alloc.basestation_of(0), 0);
    }

    #[test]
    fn identical_optimum_closed_form_matches_sorted_prefix_sum() {
        let rates = [5.0, 1.0, 9.0, 4.0, 4.0, 2.0];
        let m = 3;
        let (v, _) = optimal_identical_offline(&rates, m).unwrap();
        let mut sorted = rates.to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let solos: f64 = sorted[..m - 1].iter().sum();
        let shared: f64 = sorted[m - 1..].iter().sum::<f64>() / (rates.len() - m + 1) as f64;
        assert!((v.value() - (solos + shared)).abs() < 1e-12);
    }

    #[test]
    fn identical_optimum_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(1..=4);
            let rates: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        0.0
                    } else {
                        (rng.gen_range(0..50) as f64) / 4.0 // frequent ties
                    }
                })
                .collect();
            let (v, alloc) = optimal_identical_offline(&rates, m).unwrap();
            let w = WeightMatrix::identical(&rates, m).unwrap();
            let (bv, _) = brute_force_optimal(&w).unwrap();
            assert!(
                (v.value() - bv.value()).abs() <= 1e-12 * bv.value().max(1.0),
                "trial {trial}: closed form {} vs brute force {} on {rates:?}, m={m}",
                v.value(),
                bv.value()
            );
            assert_eq!(ts_utility(&alloc, &w).unwrap().value(), v.value());
        }
    }

    #[test]
    fn identical_optimum_handles_m_not_less_than_n() {
        let (v, alloc) = optimal_identical_offline(&[2.0, 5.0], 2).unwrap();
        assert_eq!(v.value(), 7.0);
        assert_eq!(alloc.degrees(), &[1, 1]);
        let (v, alloc) = optimal_identical_offline(&[2.0, 5.0], 4).unwrap();
        assert_eq!(v.value(), 7.0);
        assert_eq!(alloc.degrees().iter().sum::<usize>(), 2);
    }

    #[test]
    fn identical_optimum_single_basestation_is_the_mean() {
        let (v, _) = optimal_identical_offline(&[3.0, 1.0, 2.0], 1).unwrap();
        assert!((v.value() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn brute_force_refuses_oversized_instances() {
        let w = WeightMatrix::identical(&vec![1.0; 40], 4).unwrap();
        assert!(matches!(brute_force_optimal(&w), Err(Error::TooLarge(_))));
    }

    #[test]
    fn brute_force_prefers_lexicographically_smallest_tie() {
        // two identical users, two basestations: splitting them is optimal
        // both ways; the reported allocation must be [0, 1]
        let w = WeightMatrix::identical(&[1.0, 1.0], 2).unwrap();
        let (_, alloc) = brute_force_optimal(&w).unwrap();
        assert_eq!(alloc.assignments(), &[0, 1]);
    }

    #[test]
    fn matching_solver_agrees_with_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=6);
            let data: Vec<f64> = (0..n * m)
                .map(|_| {
                    if rng.gen_bool(0.15) {
                        0.0
                    } else {
                        (rng.gen_range(0..40) as f64) / 8.0
                    }
                })
                .collect();
            let w = WeightMatrix::new(n, m, data).unwrap();
            let fast = max_weight_matching(&w);
            let slow = brute_force_matching(&w).unwrap();
            assert!(
                (fast.weight - slow).abs() <= 1e-9 * slow.max(1.0),
                "trial {trial}: solver {} vs exhaustive {slow}",
                fast.weight
            );
            // validity: each endpoint at most once
            let mut seen_u = vec![false; n];
            let mut seen_b = vec![false; m];
            for e in &fast.edges {
                assert!(!seen_u[e.user] && !seen_b[e.basestation]);
                seen_u[e.user] = true;
                seen_b[e.basestation] = true;
                assert_eq!(e.weight, w.get(e.user, e.basestation));
            }
        }
    }

    #[test]
    fn matching_solver_handles_both_orientations() {
        let w = WeightMatrix::from_rows(vec![vec![1.0, 6.0], vec![5.0, 2.0], vec![4.0, 4.0]])
            .unwrap();
        let got = max_weight_matching(&w);
        assert_eq!(got.weight, 11.0); // user 0 -> bs 1, user 1 -> bs 0
        let t = WeightMatrix::from_rows(vec![vec![1.0, 5.0, 4.0], vec![6.0, 2.0, 4.0]]).unwrap();
        assert_eq!(max_weight_matching(&t).weight, 11.0);
    }

    #[test]
    fn greedy_is_deterministic_and_two_competitive() {
        // classic half-optimal trap: greedy grabs the 10 edge, blocking the
        // pair 9 + 9 = 18
        let w = WeightMatrix::from_rows(vec![vec![10.0, 9.0], vec![9.0, 0.0]]).unwrap();
        let g = greedy_matching(&w);
        assert_eq!(g.weight, 10.0); // plus the zero edge (1, 1)
        assert_eq!(g.edges.len(), 2);
        let opt = max_weight_matching(&w).weight;
        assert_eq!(opt, 18.0);
        assert!(g.weight >= opt / 2.0 && g.weight <= opt + 1e-12);
    }

    #[test]
    fn greedy_breaks_ties_toward_lower_indices() {
        let w = WeightMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let g = greedy_matching(&w);
        assert_eq!(g.edges[0].user, 0);
        assert_eq!(g.edges[0].basestation, 0);
        assert_eq!(g.edges[1].user, 1);
        assert_eq!(g.edges[1].basestation, 1);
    }

    proptest! {
        #[test]
        fn greedy_between_half_and_full_optimum(
            n in 1usize..6, m in 1usize..6,
            seed in 0u64..1000
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..10.0)).collect();
            let w = WeightMatrix::new(n, m, data).unwrap();
            let g = greedy_matching(&w).weight;
            let opt = max_weight_matching(&w).weight;
            prop_assert!(g <= opt + 1e-9);
            prop_assert!(2.0 * g >= opt - 1e-9);
        }

        #[test]
        fn identical_optimum_dominates_random_allocations(
            n in 1usize..8, m in 1usize..4, seed in 0u64..1000
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let (v, _) = optimal_identical_offline(&rates, m).unwrap();
            let w = WeightMatrix::identical(&rates, m).unwrap();
            let assign: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let alloc = Allocation::from_assign(assign, m).unwrap();
            let other = ts_utility(&alloc, &w).unwrap();
            prop_assert!(other.value() <= v.value() + 1e-9 * v.value().max(1.0));
        }
    }
}
