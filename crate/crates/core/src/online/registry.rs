//! Name-based construction of algorithms and policies, shared by the CLI,
//! the harness, and the FFI layer.

use crate::error::{Error, Result};
use crate::model::{OnlineAlgorithm, OnlineMatchingPolicy};
use crate::online::basic::{LeastLoaded, MaxWeight, RoundRobin};
use crate::online::matching::{GreedyReassign, SampleAndPrice};
use crate::online::reassign::{HideAndSeek, HideAndSeekReassign, LastUserReassign, ReassignIdentical};
use crate::online::secretary::{ClassicSecretary, KSecretary, ModifiedSecretary};

/// Tuning knobs shared by the registry constructors. Unused fields are
/// ignored by algorithms that do not take them.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AlgParams {
    /// Sample length of the threshold rules; `None` means `floor(n/e)`.
    pub r: Option<usize>,
    /// Sampling probability of sample-and-price (directly or inside
    /// hide-and-seek); `None` means `1/2`.
    pub p: Option<f64>,
}

impl AlgParams {
    fn p_or_default(&self) -> f64 {
        self.p.unwrap_or(0.5)
    }
}

/// Stable names of the allocation algorithms, in presentation order.
pub fn allocation_names() -> &'static [&'static str] {
    &[
        "round-robin",
        "max-weight",
        "least-loaded",
        "secretary",
        "secretary-modified",
        "k-secretary",
        "reassign-identical",
        "last-user-reassign",
        "hide-and-seek",
        "hide-and-seek-reassign",
    ]
}

/// Stable names of the matching policies.
pub fn matching_names() -> &'static [&'static str] {
    &["sample-and-price", "greedy-reassign"]
}

/// Builds an allocation algorithm by registry name.
pub fn allocation_algorithm(name: &str, params: &AlgParams) -> Result<Box<dyn OnlineAlgorithm>> {
    Ok(match name {
        "round-robin" => Box::new(RoundRobin::new()),
        "max-weight" => Box::new(MaxWeight::new()),
        "least-loaded" => Box::new(LeastLoaded::new()),
        "secretary" => Box::new(ClassicSecretary::new(params.r)),
        "secretary-modified" => Box::new(ModifiedSecretary::new(params.r)),
        "k-secretary" => Box::new(KSecretary::new(params.r)),
        "reassign-identical" => Box::new(ReassignIdentical::new()),
        "last-user-reassign" => Box::new(LastUserReassign::new()),
        "hide-and-seek" => Box::new(HideAndSeek::new(params.p_or_default())?),
        "hide-and-seek-reassign" => Box::new(HideAndSeekReassign::new()),
        _ => {
            return Err(Error::UnknownName(format!(
                "unknown allocation algorithm '{name}'; available: {}",
                allocation_names().join(", ")
            )))
        }
    })
}

/// Builds a matching policy by registry name.
pub fn matching_policy(name: &str, params: &AlgParams) -> Result<Box<dyn OnlineMatchingPolicy>> {
    Ok(match name {
        "sample-and-price" => Box::new(SampleAndPrice::new(params.p_or_default())?),
        "greedy-reassign" => Box::new(GreedyReassign::new()),
        _ => {
            return Err(Error::UnknownName(format!(
                "unknown matching policy '{name}'; available: {}",
                matching_names().join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{run_online_ordered, ArrivalOrder, WeightMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_listed_name_constructs() {
        for name in allocation_names() {
            let alg = allocation_algorithm(name, &AlgParams::default()).unwrap();
            assert_eq!(&alg.name(), name);
        }
        for name in matching_names() {
            let policy = matching_policy(name, &AlgParams::default()).unwrap();
            assert_eq!(&policy.name(), name);
        }
    }

    #[test]
    fn unknown_names_are_config_errors() {
        let err = allocation_algorithm("does-not-exist", &AlgParams::default())
            .err()
            .expect("unknown name must fail");
        assert!(err.is_config_error());
        let err = matching_policy("does-not-exist", &AlgParams::default())
            .err()
            .expect("unknown name must fail");
        assert!(err.is_config_error());
    }

    /// Decisions at position i may depend only on the prefix up to i: runs
    /// on two matrices sharing a prefix (same seed) must produce identical
    /// trace prefixes.
    #[test]
    fn all_algorithms_are_prefix_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for name in allocation_names() {
            for trial in 0..10 {
                let n = rng.gen_range(4..=9);
                let m = rng.gen_range(2..=4);
                let cut = rng.gen_range(1..n);
                // identical rates keep every rule inside its model
                let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..9.0)).collect();
                let mut other = rates.clone();
                for v in other.iter_mut().skip(cut) {
                    *v = rng.gen_range(0.0..9.0);
                }
                let wa = WeightMatrix::identical(&rates, m).unwrap();
                let wb = WeightMatrix::identical(&other, m).unwrap();
                let seed = rng.gen();
                let order = ArrivalOrder::identity(n);
                let mut alg_a = allocation_algorithm(name, &AlgParams::default()).unwrap();
                let mut alg_b = allocation_algorithm(name, &AlgParams::default()).unwrap();
                let (_, ta) = run_online_ordered(alg_a.as_mut(), &wa, &order, seed).unwrap();
                let (_, tb) = run_online_ordered(alg_b.as_mut(), &wb, &order, seed).unwrap();
                assert_eq!(
                    &ta.entries[..cut],
                    &tb.entries[..cut],
                    "{name} trial {trial} is not prefix consistent (cut {cut})"
                );
            }
        }
    }

    #[test]
    fn fixed_seed_reruns_are_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rates: Vec<f64> = (0..12).map(|_| rng.gen_range(0.0..9.0)).collect();
        let w = WeightMatrix::identical(&rates, 3).unwrap();
        for name in allocation_names() {
            let mut a = allocation_algorithm(name, &AlgParams::default()).unwrap();
            let mut b = allocation_algorithm(name, &AlgParams::default()).unwrap();
            let (xa, ta) = crate::model::run_online(a.as_mut(), &w, 99).unwrap();
            let (xb, tb) = crate::model::run_online(b.as_mut(), &w, 99).unwrap();
            assert_eq!(xa, xb, "{name} not deterministic under a fixed seed");
            assert_eq!(ta.entries, tb.entries);
        }
    }
}
