//! Online bipartite matching policies. Both keep at most one user per
//! basestation; they are the engines inside the hide-and-seek allocation
//! algorithms and are also exposed directly.

use rand::RngCore;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::model::OnlineMatchingPolicy;
use crate::offline::greedy_matching;
use crate::model::WeightMatrix;

/// Sample-and-price: a Binomial(n, p) random prefix is observed without
/// being matched; a greedy matching over the sampled rows sets a per-
/// basestation price (0 where greedy left a basestation free). Every later
/// arrival takes its heaviest basestation among those still free whose
/// weight meets the price, ties toward the lowest index, and stays
/// unmatched when none qualifies.
///
/// `p = 0` degenerates to arrival-order greedy, `p = 1` to the empty
/// matching. At `p = 1/2` the expected matched weight is within a constant
/// factor (8) of the offline maximum-weight matching under a uniformly
/// random arrival order.
#[derive(Debug, Clone)]
pub struct SampleAndPrice {
    p: f64,
    fixed_k: Option<usize>,
    k: usize,
    sample: Vec<Vec<f64>>,
    prices: Option<Vec<f64>>,
    taken: Vec<bool>,
}

impl SampleAndPrice {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidParam(format!(
                "sampling probability p={p} must lie in [0, 1]"
            )));
        }
        Ok(SampleAndPrice {
            p,
            fixed_k: None,
            k: 0,
            sample: Vec::new(),
            prices: None,
            taken: Vec::new(),
        })
    }

    /// Deterministic sample length instead of a Binomial draw; used by tests
    /// and by size-conditioned analysis.
    pub fn with_sample_size(k: usize) -> Self {
        SampleAndPrice {
            p: 0.0,
            fixed_k: Some(k),
            k: 0,
            sample: Vec::new(),
            prices: None,
            taken: Vec::new(),
        }
    }

    /// Per-basestation prices derived from the greedy matching over the
    /// sampled rows; 0 everywhere the sample left a basestation unmatched.
    fn compute_prices(&self, m: usize) -> Vec<f64> {
        let mut prices = vec![0.0f64; m];
        if !self.sample.is_empty() {
            let sample = WeightMatrix::from_rows(self.sample.clone())
                .expect("sampled rows are rows of a validated matrix");
            for e in greedy_matching(&sample).edges {
                prices[e.basestation] = e.weight;
            }
        }
        prices
    }
}

impl OnlineMatchingPolicy for SampleAndPrice {
    fn name(&self) -> &'static str {
        "sample-and-price"
    }

    fn begin(&mut self, n: usize, m: usize, rng: &mut dyn RngCore) -> Result<()> {
        self.k = match self.fixed_k {
            Some(k) => {
                if k > n {
                    return Err(Error::InvalidParam(format!(
                        "fixed sample size {k} exceeds n={n}"
                    )));
                }
                k
            }
            None => Binomial::new(n as u64, self.p)
                .expect("p validated in constructor")
                .sample(rng) as usize,
        };
        self.sample.clear();
        self.prices = None;
        self.taken = vec![false; m];
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Option<usize> {
        if position < self.k {
            self.sample.push(weights.to_vec());
            return None;
        }
        if self.prices.is_none() {
            self.prices = Some(self.compute_prices(weights.len()));
        }
        let prices = self.prices.as_ref().unwrap();
        let mut best: Option<usize> = None;
        for (j, (&w, &price)) in weights.iter().zip(prices).enumerate() {
            if !self.taken[j] && w >= price && best.is_none_or(|b| w > weights[b]) {
                best = Some(j);
            }
        }
        if let Some(j) = best {
            self.taken[j] = true;
        }
        best
    }
}

/// Greedy with eviction: each arrival takes the basestation maximizing its
/// weight among those that are free or held with a strictly smaller weight
/// (ties toward the lowest index), evicting the previous holder. Arrivals
/// with no improving basestation stay unmatched. The held weight of every
/// basestation is nondecreasing over time.
#[derive(Debug, Clone, Default)]
pub struct GreedyReassign {
    held: Vec<Option<f64>>,
}

impl GreedyReassign {
    pub fn new() -> Self {
        GreedyReassign::default()
    }
}

impl OnlineMatchingPolicy for GreedyReassign {
    fn name(&self) -> &'static str {
        "greedy-reassign"
    }

    fn begin(&mut self, _n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        self.held = vec![None; m];
        Ok(())
    }

    fn decide(&mut self, _position: usize, weights: &[f64]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, &w) in weights.iter().enumerate() {
            let improving = match self.held[j] {
                None => true,
                Some(h) => w > h,
            };
            if improving && best.is_none_or(|b| w > weights[b]) {
                best = Some(j);
            }
        }
        if let Some(j) = best {
            self.held[j] = Some(weights[j]);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{run_online_matching, Adjustment};
    use crate::offline::max_weight_matching;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: Vec<Vec<f64>>) -> WeightMatrix {
        WeightMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn empty_sample_is_greedy_by_arrival() {
        let w = mat(vec![vec![5.0, 1.0], vec![4.0, 3.0], vec![2.0, 2.0]]);
        let mut policy = SampleAndPrice::with_sample_size(0);
        let (out, trace) = run_online_matching(&mut policy, &w, 0).unwrap();
        assert_eq!(out.holder, vec![Some(0), Some(1)]);
        assert_eq!(out.weight, 8.0);
        assert_eq!(trace.entries[2].basestation, None);
    }

    #[test]
    fn sampled_prefix_sets_prices_and_stays_unmatched() {
        let w = mat(vec![vec![5.0, 1.0], vec![4.0, 3.0], vec![6.0, 0.0]]);
        let mut policy = SampleAndPrice::with_sample_size(1);
        let (out, _) = run_online_matching(&mut policy, &w, 0).unwrap();
        // price vector is [5, 0]: user 1 fails it on basestation 0 and
        // settles for 1, user 2 clears it
        assert_eq!(out.holder, vec![Some(2), Some(1)]);
        assert_eq!(out.weight, 9.0);
    }

    #[test]
    fn full_sample_matches_nobody() {
        let w = mat(vec![vec![5.0], vec![9.0]]);
        let mut policy = SampleAndPrice::new(1.0).unwrap();
        let (out, _) = run_online_matching(&mut policy, &w, 7).unwrap();
        assert_eq!(out.holder, vec![None]);
        assert_eq!(out.weight, 0.0);
    }

    #[test]
    fn sample_probability_is_validated() {
        assert!(SampleAndPrice::new(-0.1).is_err());
        assert!(SampleAndPrice::new(1.5).is_err());
        assert!(SampleAndPrice::new(f64::NAN).is_err());
    }

    #[test]
    fn greedy_reassign_evicts_lighter_holders() {
        let w = mat(vec![vec![5.0], vec![3.0], vec![10.0]]);
        let mut policy = GreedyReassign::new();
        let (out, trace) = run_online_matching(&mut policy, &w, 0).unwrap();
        assert_eq!(out.holder, vec![Some(2)]);
        assert_eq!(out.weight, 10.0);
        assert_eq!(trace.entries[1].basestation, None); // 3 < 5 held
        assert_eq!(
            trace.entries[2].adjustment,
            Some(Adjustment::Evict { user: 0, from: 0 })
        );
    }

    #[test]
    fn greedy_reassign_breaks_ties_low() {
        let w = mat(vec![vec![4.0, 4.0]]);
        let mut policy = GreedyReassign::new();
        let (out, _) = run_online_matching(&mut policy, &w, 0).unwrap();
        assert_eq!(out.holder, vec![Some(0), None]);
    }

    proptest! {
        #[test]
        fn greedy_reassign_brackets_between_best_edge_and_optimum(
            n in 1usize..7, m in 1usize..5, seed in 0u64..500
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..9.0)).collect();
            let w = WeightMatrix::new(n, m, data).unwrap();
            let mut policy = GreedyReassign::new();
            let (out, _) = run_online_matching(&mut policy, &w, 0).unwrap();
            let heaviest_edge = (0..n)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .map(|(i, j)| w.get(i, j))
                .fold(0.0f64, f64::max);
            let opt = max_weight_matching(&w).weight;
            prop_assert!(out.weight >= heaviest_edge - 1e-12);
            prop_assert!(out.weight <= opt + 1e-9);
        }

        #[test]
        fn sample_and_price_yields_a_matching_below_optimum(
            n in 1usize..7, m in 1usize..5, seed in 0u64..500
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..9.0)).collect();
            let w = WeightMatrix::new(n, m, data).unwrap();
            let mut policy = SampleAndPrice::new(0.5).unwrap();
            let (out, _) = run_online_matching(&mut policy, &w, seed).unwrap();
            let opt = max_weight_matching(&w).weight;
            prop_assert!(out.weight <= opt + 1e-9);
            // each user held at most once
            let mut users: Vec<usize> = out.holder.iter().flatten().copied().collect();
            users.sort_unstable();
            users.dedup();
            prop_assert_eq!(users.len(), out.holder.iter().flatten().count());
        }
    }
}
