//! Weight-oblivious and single-user greedy allocation rules. These are the
//! simplest irrevocable algorithms and the reference points the adversarial
//! families are built against.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::model::{Decision, OnlineAlgorithm};

/// Cycles arrivals through the basestations: the `i`-th arrival (1-based)
/// goes to basestation `1 + (i mod m)`, also 1-based. Every basestation ends
/// up with `floor(n/m)` or `ceil(n/m)` users, which makes the rule
/// `ceil(n/m)`-competitive on identical basestations.
#[derive(Debug, Default, Clone)]
pub struct RoundRobin {
    m: usize,
}

impl RoundRobin {
    pub fn new() -> Self {
        RoundRobin::default()
    }
}

impl OnlineAlgorithm for RoundRobin {
    fn name(&self) -> &'static str {
        "round-robin"
    }

    fn begin(&mut self, _n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        self.m = m;
        Ok(())
    }

    fn decide(&mut self, position: usize, _weights: &[f64]) -> Decision {
        // 1-based arrival i = position + 1 lands on 1-based 1 + (i mod m)
        Decision::assign((position + 1) % self.m)
    }
}

/// Sends each arrival to its heaviest basestation, ties toward the lowest
/// index. Irrevocable and oblivious to congestion, which is exactly what the
/// arbitrary-weight lower-bound family punishes.
#[derive(Debug, Default, Clone)]
pub struct MaxWeight;

impl MaxWeight {
    pub fn new() -> Self {
        MaxWeight
    }
}

impl OnlineAlgorithm for MaxWeight {
    fn name(&self) -> &'static str {
        "max-weight"
    }

    fn begin(&mut self, _n: usize, _m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        Ok(())
    }

    fn decide(&mut self, _position: usize, weights: &[f64]) -> Decision {
        let mut best = 0usize;
        for (j, &w) in weights.iter().enumerate() {
            if w > weights[best] {
                best = j;
            }
        }
        Decision::assign(best)
    }
}

/// Sends each arrival to the basestation with the fewest users so far, ties
/// toward the lowest index. Weight-oblivious; under exchangeable arrivals it
/// keeps degrees balanced without round-robin's fixed phase.
#[derive(Debug, Default, Clone)]
pub struct LeastLoaded {
    degrees: Vec<usize>,
}

impl LeastLoaded {
    pub fn new() -> Self {
        LeastLoaded::default()
    }
}

impl OnlineAlgorithm for LeastLoaded {
    fn name(&self) -> &'static str {
        "least-loaded"
    }

    fn begin(&mut self, _n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        self.degrees = vec![0; m];
        Ok(())
    }

    fn decide(&mut self, _position: usize, _weights: &[f64]) -> Decision {
        let best = (0..self.degrees.len())
            .min_by_key(|&j| self.degrees[j])
            .expect("m >= 1");
        self.degrees[best] += 1;
        Decision::assign(best)
    }
}

/// Shared validation for rules that only make sense with at least two
/// basestations.
pub(crate) fn require_two_basestations(name: &str, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParam(format!(
            "{name} needs at least 2 basestations, got m={m}"
        )));
    }
    Ok(())
}
