//! Algorithms allowed to move one already-placed user per arrival, plus the
//! hide-and-seek constructions that lift matching policies to full
//! allocations by piling unmatched users onto a uniformly random dump
//! basestation.

use rand::{Rng, RngCore};

use crate::error::Result;
use crate::model::{Decision, MovedUser, OnlineAlgorithm, OnlineMatchingPolicy};
use crate::online::basic::require_two_basestations;
use crate::online::matching::{GreedyReassign, SampleAndPrice};
use crate::online::{non_identical_warning, scalar_rate};

/// Occupant of a solo basestation: arrival position and rate.
#[derive(Debug, Clone, Copy)]
struct Solo {
    position: usize,
    rate: f64,
}

/// Shared bookkeeping of the identical-basestation reassignment rules:
/// basestations `0..m-1` hold one provisional top user each, basestation
/// `m-1` collects everyone else. A new arrival strictly heavier than the
/// weakest solo takes that solo's basestation.
#[derive(Debug, Clone, Default)]
struct SoloLadder {
    m: usize,
    solos: Vec<Option<Solo>>,
}

enum LadderStep {
    /// Arrival takes this empty solo basestation.
    Fill(usize),
    /// Arrival takes basestation `.0`, displacing the previous solo there.
    Displace(usize, Solo),
    /// Arrival goes to the shared basestation.
    Shared,
}

impl SoloLadder {
    fn begin(&mut self, m: usize) {
        self.m = m;
        self.solos = vec![None; m.saturating_sub(1)];
    }

    fn shared(&self) -> usize {
        self.m - 1
    }

    /// Decides the arrival's slot and updates the ladder. The caller turns
    /// a `Displace` into whatever its reassignment budget allows.
    fn step(&mut self, position: usize, rate: f64) -> LadderStep {
        if let Some(idx) = self.solos.iter().position(Option::is_none) {
            self.solos[idx] = Some(Solo { position, rate });
            return LadderStep::Fill(idx);
        }
        let weakest = (0..self.solos.len()).min_by(|&a, &b| {
            let (sa, sb) = (self.solos[a].unwrap(), self.solos[b].unwrap());
            sa.rate.partial_cmp(&sb.rate).unwrap().then(a.cmp(&b))
        });
        match weakest {
            Some(idx) if rate > self.solos[idx].unwrap().rate => {
                let bumped = self.solos[idx].unwrap();
                self.solos[idx] = Some(Solo { position, rate });
                LadderStep::Displace(idx, bumped)
            }
            _ => LadderStep::Shared, // also the m = 1 case: no solos at all
        }
    }
}

/// Optimal reassigning rule for identical basestations: keeps the `m - 1`
/// heaviest users seen so far alone on basestations `0..m-1` and everyone
/// else on basestation `m-1`. A heavier arrival takes the weakest solo's
/// basestation and that solo is moved (the single allowed move) to the
/// shared one, so after every arrival the allocation is exactly offline-
/// optimal for the prefix: the performance ratio is 1.
#[derive(Debug, Clone, Default)]
pub struct ReassignIdentical {
    ladder: SoloLadder,
}

impl ReassignIdentical {
    pub fn new() -> Self {
        ReassignIdentical::default()
    }
}

impl OnlineAlgorithm for ReassignIdentical {
    fn name(&self) -> &'static str {
        "reassign-identical"
    }

    fn begin(&mut self, _n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        self.ladder.begin(m);
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let (v, identical) = scalar_rate(weights);
        let mut d = match self.ladder.step(position, v) {
            LadderStep::Fill(bs) => Decision::assign(bs),
            LadderStep::Displace(bs, bumped) => Decision {
                basestation: bs,
                moved: Some(MovedUser {
                    position: bumped.position,
                    to: self.ladder.shared(),
                }),
                warning: None,
            },
            LadderStep::Shared => Decision::assign(self.ladder.shared()),
        };
        if !identical {
            d.warning = Some(non_identical_warning(self.name()));
        }
        d
    }
}

/// Weakened variant that may only move the *immediately preceding* arrival.
/// It attempts the same ladder as [`ReassignIdentical`], but when the
/// displaced solo is any older user the move is dropped and the newcomer
/// simply crowds that solo's basestation. Alternating pad/record inputs
/// stack all records on one basestation and drive the competitive ratio to
/// `n/m`, which is what the padded adversarial family exhibits.
#[derive(Debug, Clone, Default)]
pub struct LastUserReassign {
    ladder: SoloLadder,
}

impl LastUserReassign {
    pub fn new() -> Self {
        LastUserReassign::default()
    }
}

impl OnlineAlgorithm for LastUserReassign {
    fn name(&self) -> &'static str {
        "last-user-reassign"
    }

    fn begin(&mut self, _n: usize, m: usize, _rng: &mut dyn RngCore) -> Result<()> {
        self.ladder.begin(m);
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let (v, identical) = scalar_rate(weights);
        let mut d = match self.ladder.step(position, v) {
            LadderStep::Fill(bs) => Decision::assign(bs),
            LadderStep::Displace(bs, bumped) if bumped.position + 1 == position => Decision {
                basestation: bs,
                moved: Some(MovedUser {
                    position: bumped.position,
                    to: self.ladder.shared(),
                }),
                warning: None,
            },
            // move not allowed: the newcomer shares the solo basestation
            LadderStep::Displace(bs, _) => Decision::assign(bs),
            LadderStep::Shared => Decision::assign(self.ladder.shared()),
        };
        if !identical {
            d.warning = Some(non_identical_warning(self.name()));
        }
        d
    }
}

fn delete_column(weights: &[f64], j0: usize) -> Vec<f64> {
    weights
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != j0)
        .map(|(_, &w)| w)
        .collect()
}

fn column_map(m: usize, j0: usize) -> Vec<usize> {
    (0..m).filter(|&j| j != j0).collect()
}

/// Hide-and-seek allocation: pick a dump basestation `j0` uniformly at
/// random, run [`SampleAndPrice`] on everything else, and send whatever it
/// leaves unmatched (including the sampled prefix) to `j0`. Matched users
/// sit alone, so under a uniformly random arrival order the expected
/// utility is at least `(m-1)/(8m)` times the offline maximum-weight
/// matching.
#[derive(Debug, Clone)]
pub struct HideAndSeek {
    p: f64,
    j0: usize,
    inner: SampleAndPrice,
    map: Vec<usize>,
}

impl HideAndSeek {
    /// `p` is the inner sampling probability; the analysis uses `p = 1/2`.
    pub fn new(p: f64) -> Result<Self> {
        Ok(HideAndSeek {
            p,
            j0: 0,
            inner: SampleAndPrice::new(p)?,
            map: Vec::new(),
        })
    }
}

impl OnlineAlgorithm for HideAndSeek {
    fn name(&self) -> &'static str {
        "hide-and-seek"
    }

    fn begin(&mut self, n: usize, m: usize, rng: &mut dyn RngCore) -> Result<()> {
        require_two_basestations(self.name(), m)?;
        self.j0 = rng.gen_range(0..m);
        self.inner = SampleAndPrice::new(self.p)?;
        self.inner.begin(n, m - 1, rng)?;
        self.map = column_map(m, self.j0);
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let deleted = delete_column(weights, self.j0);
        match OnlineMatchingPolicy::decide(&mut self.inner, position, &deleted) {
            Some(k) => Decision::assign(self.map[k]),
            None => Decision::assign(self.j0),
        }
    }
}

/// Reassigning hide-and-seek: same dump basestation `j0`, but the inner
/// policy is [`GreedyReassign`], and a user it evicts is *moved* to `j0`
/// (the one move the arrival is entitled to) instead of being lost. Under a
/// uniformly random arrival order the expected utility is at least
/// `(m-1)/(2m)` times the offline maximum-weight matching.
#[derive(Debug, Clone)]
pub struct HideAndSeekReassign {
    j0: usize,
    inner: GreedyReassign,
    map: Vec<usize>,
    holder_pos: Vec<Option<usize>>,
}

impl HideAndSeekReassign {
    pub fn new() -> Self {
        HideAndSeekReassign {
            j0: 0,
            inner: GreedyReassign::new(),
            map: Vec::new(),
            holder_pos: Vec::new(),
        }
    }
}

impl Default for HideAndSeekReassign {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineAlgorithm for HideAndSeekReassign {
    fn name(&self) -> &'static str {
        "hide-and-seek-reassign"
    }

    fn begin(&mut self, n: usize, m: usize, rng: &mut dyn RngCore) -> Result<()> {
        require_two_basestations(self.name(), m)?;
        self.j0 = rng.gen_range(0..m);
        self.inner = GreedyReassign::new();
        OnlineMatchingPolicy::begin(&mut self.inner, n, m - 1, rng)?;
        self.map = column_map(m, self.j0);
        self.holder_pos = vec![None; m - 1];
        Ok(())
    }

    fn decide(&mut self, position: usize, weights: &[f64]) -> Decision {
        let deleted = delete_column(weights, self.j0);
        match OnlineMatchingPolicy::decide(&mut self.inner, position, &deleted) {
            Some(k) => {
                let moved = self.holder_pos[k].map(|prev| MovedUser {
                    position: prev,
                    to: self.j0,
                });
                self.holder_pos[k] = Some(position);
                Decision {
                    basestation: self.map[k],
                    moved,
                    warning: None,
                }
            }
            None => Decision::assign(self.j0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{run_online, ts_utility, Adjustment, WeightMatrix};
    use crate::offline::optimal_identical_offline;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reassign_identical_tracks_the_prefix_optimum() {
        let w = WeightMatrix::identical(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        let mut alg = ReassignIdentical::new();
        let (alloc, trace) = run_online(&mut alg, &w, 0).unwrap();
        assert_eq!(trace.final_value, 6.0);
        assert_eq!(alloc.assignments(), &[1, 1, 1, 0]);
        // every arrival after the first displaces the current champion
        for entry in &trace.entries[1..] {
            assert!(matches!(
                entry.adjustment,
                Some(Adjustment::Move { to: 1, .. })
            ));
        }
    }

    #[test]
    fn reassign_identical_is_exactly_optimal_for_small_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..60 {
            let n = rng.gen_range(1..=9);
            let m = rng.gen_range(2..=3);
            let rates: Vec<f64> = (0..n)
                .map(|_| (rng.gen_range(0..30) as f64) / 4.0)
                .collect();
            let w = WeightMatrix::identical(&rates, m).unwrap();
            let mut alg = ReassignIdentical::new();
            let (alloc, _) = run_online(&mut alg, &w, 0).unwrap();
            let got = ts_utility(&alloc, &w).unwrap().value();
            let (opt, _) = optimal_identical_offline(&rates, m).unwrap();
            assert_eq!(got, opt.value(), "trial {trial}: rates {rates:?}, m={m}");
        }
    }

    #[test]
    fn reassign_identical_is_optimal_within_rounding_for_larger_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(4..=6);
            let rates: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..8.0)).collect();
            let w = WeightMatrix::identical(&rates, m).unwrap();
            let mut alg = ReassignIdentical::new();
            let (alloc, _) = run_online(&mut alg, &w, 0).unwrap();
            let got = ts_utility(&alloc, &w).unwrap().value();
            let (opt, _) = optimal_identical_offline(&rates, m).unwrap();
            assert!((got - opt.value()).abs() <= 1e-15 * opt.value().max(1.0));
        }
    }

    #[test]
    fn reassign_identical_handles_single_basestation() {
        let w = WeightMatrix::identical(&[3.0, 1.0], 1).unwrap();
        let mut alg = ReassignIdentical::new();
        let (alloc, _) = run_online(&mut alg, &w, 0).unwrap();
        assert_eq!(alloc.assignments(), &[0, 0]);
    }

    #[test]
    fn last_user_variant_equals_full_variant_on_ascending_input() {
        // ascending rates always displace the immediately preceding arrival
        let w = WeightMatrix::identical(&[1.0, 2.0, 3.0, 4.0, 5.0], 2).unwrap();
        let (a, ta) = run_online(&mut ReassignIdentical::new(), &w, 0).unwrap();
        let (b, tb) = run_online(&mut LastUserReassign::new(), &w, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta.entries, tb.entries);
    }

    #[test]
    fn last_user_variant_crowds_records_on_padded_input() {
        // pads between records make the displaced solo an older arrival, so
        // records pile up: [pad, B, pad, B^2, pad, B^3]
        let b = 1000.0f64;
        let rates = vec![1e-3, b, 1e-3, b * b, 1e-3, b * b * b];
        let w = WeightMatrix::identical(&rates, 2).unwrap();
        let mut alg = LastUserReassign::new();
        let (alloc, _) = run_online(&mut alg, &w, 0).unwrap();
        // records at users 1, 3, 5 all sit on basestation 0
        assert_eq!(alloc.basestation_of(1), 0);
        assert_eq!(alloc.basestation_of(3), 0);
        assert_eq!(alloc.basestation_of(5), 0);
        let got = ts_utility(&alloc, &w).unwrap().value();
        let (opt, _) = optimal_identical_offline(&rates, 2).unwrap();
        // three stacked records cost nearly a factor 3 = n/m
        let eta = opt.value() / got;
        assert!(eta > 2.9 && eta <= 3.0 + 1e-9, "eta = {eta}");
    }

    #[test]
    fn hide_and_seek_dump_choice_is_uniform() {
        let w = WeightMatrix::identical(&[1.0, 2.0], 4).unwrap();
        let mut counts = [0usize; 4];
        for seed in 0..4000 {
            let mut alg = HideAndSeek::new(0.5).unwrap();
            run_online(&mut alg, &w, seed).unwrap();
            counts[alg.j0] += 1;
        }
        let expected = 1000.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 16.27, "chi-square {chi2} too large"); // 99.9% of chi2(3)
    }

    #[test]
    fn hide_and_seek_matched_users_sit_alone_off_the_dump() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..50 {
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(2..=5);
            let data: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..9.0)).collect();
            let w = WeightMatrix::new(n, m, data).unwrap();
            let mut alg = HideAndSeek::new(0.5).unwrap();
            let (alloc, _) = run_online(&mut alg, &w, seed).unwrap();
            for j in 0..m {
                if j != alg.j0 {
                    assert!(alloc.degrees()[j] <= 1, "seed {seed}: degree > 1 off dump");
                }
            }
            assert_eq!(alloc.degrees().iter().sum::<usize>(), n);
        }
    }

    #[test]
    fn hide_and_seek_reassign_moves_evicted_users_to_the_dump() {
        // scalar rates 5, 3, 10 with m = 2: the single non-dump basestation
        // first holds user 0, then user 2 evicts it, moving it to the dump
        let w = WeightMatrix::identical(&[5.0, 3.0, 10.0], 2).unwrap();
        for seed in 0..20 {
            let mut alg = HideAndSeekReassign::new();
            let (alloc, trace) = run_online(&mut alg, &w, seed).unwrap();
            let j0 = alg.j0;
            let other = 1 - j0;
            assert_eq!(alloc.users_of(other), vec![2]);
            assert_eq!(alloc.users_of(j0), vec![0, 1]);
            assert_eq!(
                trace.entries[2].adjustment,
                Some(Adjustment::Move {
                    user: 0,
                    from: other,
                    to: j0
                })
            );
            let expected = 10.0 + (5.0 + 3.0) / 2.0;
            assert_eq!(trace.final_value, expected);
        }
    }

    #[test]
    fn hide_and_seek_reassign_keeps_one_user_per_matched_basestation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..50 {
            let n = rng.gen_range(2..=9);
            let m = rng.gen_range(2..=5);
            let data: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..9.0)).collect();
            let w = WeightMatrix::new(n, m, data).unwrap();
            let mut alg = HideAndSeekReassign::new();
            let (alloc, _) = run_online(&mut alg, &w, seed).unwrap();
            for j in 0..m {
                if j != alg.j0 {
                    assert!(alloc.degrees()[j] <= 1);
                }
            }
        }
    }
}
