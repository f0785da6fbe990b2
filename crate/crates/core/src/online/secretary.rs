//! Threshold ("secretary") rules for identical basestations. All of them
//! sample a prefix to learn a threshold and then segregate later arrivals
//! that beat it, differing in how the threshold evolves and how many users
//! they are willing to segregate.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::model::{Decision, OnlineAlgorithm};
use crate::online::basic::require_two_basestations;
use crate::online::{non_identical_warning, scalar_rate};

/// Default sample length `floor(n / e)`, the classical optimum for
/// vanishing failure probability as `n` grows.
pub fn default_sample_len(n: usize) -> usize {
    (n as f64 / std::f64::consts::E).floor() as usize
}

fn validate_sample(name: &str, r: usize, n: usize) -> Result<()> {
    if r >= n && n > 0 {
        return Err(Error::InvalidParam(format!(
            "{name} sample length r={r} must be < n={n}"
        )));
    }
    Ok(())
}

/// Classic single-choice secretary rule. The first `r` arrivals go to
/// basestation 0 and set the threshold `T` (their maximum, `-inf` when
/// `r = 0`); the first later arrival with rate `>= T` is parked alone on
/// basestation 1. If none qualifies, the last arrival is parked there so
/// basestation 1 is never empty.
///
/// Under a uniformly random order of distinct rates, basestation 1 holds
/// exactly the best user with probability `sum_{i=r+1}^{n} (1/n) * r/(i-1)`
/// (`1/n` when `r = 0`), which [`crate::analytics::secretary_success`]
/// evaluates.
#[derive(Debug, Clone)]
pub struct ClassicSecretary {
    r_param: Option<usize>,
    r: usize,
    n: usize,
    threshold: f64,
    selected: bool,
}

impl ClassicSecretary {
    /// `r = None` defaults to [`default_sample_len`] at `begin`.
    pub fn new(r: Option<usize>) -> Self {
        ClassicSecretary {
            r_param: r,
            r: 0,
            n: 0,
            threshold: f64::NEG_INFINITY,
            selected: false,
        }
    }
}

impl OnlineAlgorithm for ClassicSecretary {
    fn name(&self) -> &'static str {
        "secretary"
    }

    fn begin(&mut self, n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        require_two_basestations(self.name(), m)?;
        self.r = self.r_param.unwrap_or_else(|| default_sample_len(n));
        validate_sample(self.name(), self.r, n)?;
        self.n = n;
        self.threshold = f64::NEG_INFINITY;
        self.selected = false;
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let (v, identical) = scalar_rate(weights);
        let mut d = if position < self.r {
            self.threshold = self.threshold.max(v);
            Decision::assign(0)
        } else if !self.selected && v >= self.threshold {
            self.selected = true;
            Decision::assign(1)
        } else if position + 1 == self.n && !self.selected {
            Decision::assign(1) // never leave basestation 1 empty
        } else {
            Decision::assign(0)
        };
        if !identical {
            d.warning = Some(non_identical_warning(self.name()));
        }
        d
    }
}

/// Record-collecting variant: the threshold is the running maximum of all
/// rates seen so far, and every strict record after the sample is sent to
/// basestation 1 (no fallback). The number of users on basestation 1 is the
/// number of records among positions `r+1..n`, records being independent
/// with probability `1/i` at position `i`; its law is computed by
/// [`crate::analytics::modified_secretary_degree_law`].
#[derive(Debug, Clone)]
pub struct ModifiedSecretary {
    r_param: Option<usize>,
    r: usize,
    running_max: f64,
}

impl ModifiedSecretary {
    pub fn new(r: Option<usize>) -> Self {
        ModifiedSecretary {
            r_param: r,
            r: 0,
            running_max: f64::NEG_INFINITY,
        }
    }
}

impl OnlineAlgorithm for ModifiedSecretary {
    fn name(&self) -> &'static str {
        "secretary-modified"
    }

    fn begin(&mut self, n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        require_two_basestations(self.name(), m)?;
        self.r = self.r_param.unwrap_or_else(|| default_sample_len(n));
        validate_sample(self.name(), self.r, n)?;
        self.running_max = f64::NEG_INFINITY;
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let (v, identical) = scalar_rate(weights);
        let record = v > self.running_max;
        self.running_max = self.running_max.max(v);
        let bs = if position >= self.r && record { 1 } else { 0 };
        let mut d = Decision::assign(bs);
        if !identical {
            d.warning = Some(non_identical_warning(self.name()));
        }
        d
    }
}

/// Multi-slot threshold rule for `m` basestations. After the sample, an
/// arrival is *selected* when its rate strictly beats the `(m-1)`-th
/// largest rate seen before it (`-inf` while fewer than `m-1` have been
/// seen, so early arrivals select unconditionally); selected users are dealt
/// round-robin across basestations `1..m`, everyone else piles onto
/// basestation 0. At `m = 2` this is exactly [`ModifiedSecretary`].
///
/// Selection at position `i` (1-based) happens with probability
/// `min(1, (m-1)/i)`, independently across positions, which is what the
/// selected-count and two-route identities in [`crate::analytics`] build on.
#[derive(Debug, Clone)]
pub struct KSecretary {
    r_param: Option<usize>,
    r: usize,
    m: usize,
    top: Vec<f64>, // largest m-1 rates seen, descending
    selected: usize,
}

impl KSecretary {
    pub fn new(r: Option<usize>) -> Self {
        KSecretary {
            r_param: r,
            r: 0,
            m: 0,
            top: Vec::new(),
            selected: 0,
        }
    }
}

impl OnlineAlgorithm for KSecretary {
    fn name(&self) -> &'static str {
        "k-secretary"
    }

    fn begin(&mut self, n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        require_two_basestations(self.name(), m)?;
        self.r = self.r_param.unwrap_or_else(|| default_sample_len(n));
        validate_sample(self.name(), self.r, n)?;
        self.m = m;
        self.top.clear();
        self.selected = 0;
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let (v, identical) = scalar_rate(weights);
        let slots = self.m - 1;
        let threshold = if self.top.len() < slots {
            f64::NEG_INFINITY
        } else {
            self.top[slots - 1]
        };
        let bs = if position >= self.r && v > threshold {
            let bs = 1 + self.selected % slots;
            self.selected += 1;
            bs
        } else {
            0
        };
        // fold v into the running top-(m-1) list
        let at = self.top.partition_point(|&x| x >= v);
        self.top.insert(at, v);
        self.top.truncate(slots);
        let mut d = Decision::assign(bs);
        if !identical {
            d.warning = Some(non_identical_warning(self.name()));
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{run_online_ordered, ArrivalOrder, WeightMatrix};
    use itertools::Itertools;

    fn all_orders(n: usize) -> Vec<ArrivalOrder> {
        (0..n)
            .permutations(n)
            .map(|p| ArrivalOrder::new(p).unwrap())
            .collect()
    }

    /// Counts the orders of `rates` in which basestation 1 ends holding
    /// exactly the single best user.
    fn classic_success_count(rates: &[f64], r: usize) -> usize {
        let w = WeightMatrix::identical(rates, 2).unwrap();
        let best = (0..rates.len())
            .max_by(|&a, &b| rates[a].partial_cmp(&rates[b]).unwrap())
            .unwrap();
        all_orders(rates.len())
            .iter()
            .filter(|order| {
                let mut alg = ClassicSecretary::new(Some(r));
                let (alloc, _) = run_online_ordered(&mut alg, &w, order, 0).unwrap();
                alloc.degrees()[1] == 1 && alloc.basestation_of(best) == 1
            })
            .count()
    }

    #[test]
    fn classic_success_is_eleven_of_twentyfour() {
        assert_eq!(classic_success_count(&[1.0, 2.0, 3.0, 4.0], 1), 11);
    }

    #[test]
    fn classic_with_empty_sample_succeeds_when_best_is_first() {
        assert_eq!(classic_success_count(&[1.0, 2.0, 3.0, 4.0], 0), 6);
    }

    #[test]
    fn classic_falls_back_to_last_user() {
        // descending arrivals: the sample holds the maximum, nobody later
        // reaches it, so the final user is parked on basestation 1
        let w = WeightMatrix::identical(&[4.0, 3.0, 2.0, 1.0], 2).unwrap();
        let mut alg = ClassicSecretary::new(Some(1));
        let (alloc, _) =
            run_online_ordered(&mut alg, &w, &ArrivalOrder::identity(4), 0).unwrap();
        assert_eq!(alloc.assignments(), &[0, 0, 0, 1]);
    }

    #[test]
    fn classic_rejects_sample_of_full_length() {
        let w = WeightMatrix::identical(&[1.0, 2.0], 2).unwrap();
        let mut alg = ClassicSecretary::new(Some(2));
        assert!(crate::model::run_online(&mut alg, &w, 0).is_err());
    }

    #[test]
    fn secretary_rules_need_two_basestations() {
        let w = WeightMatrix::identical(&[1.0, 2.0], 1).unwrap();
        assert!(crate::model::run_online(&mut ClassicSecretary::new(Some(0)), &w, 0).is_err());
        assert!(crate::model::run_online(&mut KSecretary::new(Some(0)), &w, 0).is_err());
    }

    #[test]
    fn modified_degree_counts_match_record_law() {
        // n = 3, r = 1: over the 6 orders the count of records after the
        // sample is 0, 1, 2 with probabilities 1/3, 1/2, 1/6
        let w = WeightMatrix::identical(&[1.0, 2.0, 3.0], 2).unwrap();
        let mut counts = [0usize; 3];
        for order in all_orders(3) {
            let mut alg = ModifiedSecretary::new(Some(1));
            let (alloc, _) = run_online_ordered(&mut alg, &w, &order, 0).unwrap();
            counts[alloc.degrees()[1]] += 1;
        }
        assert_eq!(counts, [2, 3, 1]);
    }

    #[test]
    fn k_secretary_selected_counts_match_enumeration() {
        // n = 3, r = 1, m = 3: selected count is 1 in 2 orders and 2 in the
        // other 4 (threshold is -inf until two rates have been seen)
        let w = WeightMatrix::identical(&[1.0, 2.0, 3.0], 3).unwrap();
        let mut counts = [0usize; 3];
        for order in all_orders(3) {
            let mut alg = KSecretary::new(Some(1));
            let (alloc, _) = run_online_ordered(&mut alg, &w, &order, 0).unwrap();
            let selected = 3 - alloc.degrees()[0];
            counts[selected] += 1;
        }
        assert_eq!(counts, [0, 2, 4]);
    }

    #[test]
    fn k_secretary_with_two_basestations_is_the_modified_rule() {
        let cases = [
            vec![0.7, 0.1, 0.9, 0.4, 0.6, 0.2],
            vec![5.0, 1.0, 4.0, 2.0, 3.0],
            vec![2.5, 2.5, 1.0, 3.0, 0.5], // tie inside
        ];
        for rates in &cases {
            let w = WeightMatrix::identical(rates, 2).unwrap();
            for r in 0..rates.len() {
                let mut a = ModifiedSecretary::new(Some(r));
                let mut b = KSecretary::new(Some(r));
                let (_, ta) = crate::model::run_online(&mut a, &w, 0).unwrap();
                let (_, tb) = crate::model::run_online(&mut b, &w, 0).unwrap();
                assert_eq!(ta.entries, tb.entries, "rates {rates:?}, r={r}");
            }
        }
    }

    #[test]
    fn k_secretary_spreads_selected_users_round_robin() {
        // ascending rates select every post-sample arrival
        let w = WeightMatrix::identical(&[1.0, 2.0, 3.0, 4.0, 5.0], 4).unwrap();
        let mut alg = KSecretary::new(Some(0));
        let (alloc, _) = crate::model::run_online(&mut alg, &w, 0).unwrap();
        // all five select (each beats the 3rd-best of its predecessors)
        assert_eq!(alloc.assignments(), &[1, 2, 3, 1, 2]);
    }

    #[test]
    fn non_identical_rows_surface_a_warning() {
        let w = WeightMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let mut alg = ClassicSecretary::new(Some(1));
        let (_, trace) = crate::model::run_online(&mut alg, &w, 0).unwrap();
        assert_eq!(trace.warnings.len(), 1);
    }
}
