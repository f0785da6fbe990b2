//! Online algorithms: irrevocable allocation rules, threshold (secretary)
//! rules, online matching policies, and reassigning algorithms, plus the
//! name registry the CLI and harness construct them through.

pub mod basic;
pub mod matching;
pub mod reassign;
pub mod registry;
pub mod secretary;

pub use basic::{LeastLoaded, MaxWeight, RoundRobin};
pub use matching::{GreedyReassign, SampleAndPrice};
pub use reassign::{HideAndSeek, HideAndSeekReassign, LastUserReassign, ReassignIdentical};
pub use registry::{allocation_algorithm, allocation_names, matching_names, matching_policy, AlgParams};
pub use secretary::{default_sample_len, ClassicSecretary, KSecretary, ModifiedSecretary};

/// Reads the scalar rate of an identical-basestation row; the flag is false
/// when the row is not constant and the rule is being run out of its model.
pub(crate) fn scalar_rate(weights: &[f64]) -> (f64, bool) {
    let v = weights[0];
    (v, weights.iter().all(|&x| x == v))
}

pub(crate) fn non_identical_warning(name: &str) -> String {
    format!("{name} assumes identical basestations; using column 0 of a non-constant row")
}
