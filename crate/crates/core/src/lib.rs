//! Online basestation allocation under the time-sharing objective.
//!
//! Users arrive one at a time; each reveals a row of nonnegative weights
//! (its rate from every basestation) and must be attached immediately. A
//! basestation splits its service equally among attached users, so the
//! objective is the sum over basestations of (sum of attached weights) /
//! (number attached). This crate provides:
//!
//! - exact offline baselines (brute force, a closed form for identical
//!   basestations, maximum-weight matching),
//! - online algorithms, both irrevocable and reassigning, plus online
//!   matching policies they build on,
//! - adversarial input families with closed-form optima that exhibit the
//!   algorithms' worst-case ratios,
//! - closed-form success probabilities and bounds for threshold rules,
//! - a seeded, parallel benchmark harness with CSV/JSON reporting, and a
//!   CLI (`onbase`) exposing all of it.
//!
//! Competitive ratios are reported both ways: `eta = OPT/ALG >= 1` and
//! `rho = ALG/OPT <= 1`.

pub mod analytics;
pub mod adversary;
pub mod error;
pub mod harness;
pub mod io;
pub mod model;
pub mod offline;
pub mod online;

pub use error::{Error, Result};
pub use model::{
    run_online, run_online_matching, run_online_matching_ordered, run_online_ordered, ts_utility,
    Allocation, ArrivalOrder, DecisionTrace, OnlineAlgorithm, OnlineMatchingPolicy, UtilityValue,
    WeightMatrix,
};
