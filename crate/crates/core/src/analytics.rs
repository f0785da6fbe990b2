//! Closed-form probabilities and guarantee curves for the threshold rules.
//!
//! Everything here is exact arithmetic on the analytic expressions, so the
//! simulation side of the crate can be checked against it (and vice versa):
//!
//! * [`secretary_success`] — probability the classic rule isolates the best
//!   user on the second basestation.
//! * [`modified_secretary_degree_law`] / [`k_secretary_selected_law`] — full
//!   distribution of how many users the record/threshold rules segregate,
//!   computed by convolving independent per-arrival Bernoulli indicators.
//! * [`k_secretary_selected_exact`] — the same probabilities from the
//!   product-sum identity, one degree at a time, with [`a_d_sum`] as the
//!   inner ordered-reciprocal sum.
//! * [`bound_two_bs`] / [`bound_m_bs`] — lower bounds on the expected share
//!   of the heaviest rate kept by the threshold rules, as a function of the
//!   sampled fraction `alpha`; [`maximize_bound`] grid-searches `alpha`.

use crate::error::{Error, Result};

/// Compensated (Kahan) accumulator. The probability laws and bound series
/// add many same-sign terms spanning several orders of magnitude; this keeps
/// the frozen reference values reproducible to the last bit.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum
    }
}

fn validate_order(what: &str, n: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParam(format!("{what}: n must be >= 1")));
    }
    if r >= n {
        return Err(Error::InvalidParam(format!(
            "{what}: sample length r={r} must be < n={n}"
        )));
    }
    Ok(())
}

/// Probability that the classic secretary rule with sample length `r` parks
/// exactly the best of `n` distinct users on the second basestation, under a
/// uniformly random arrival order:
/// `sum_{i=r+1}^{n} (1/n) * r/(i-1)`, and `1/n` for `r = 0` (the rule then
/// takes the first arrival, which is the best with probability `1/n`).
pub fn secretary_success(n: usize, r: usize) -> Result<f64> {
    validate_order("secretary_success", n, r)?;
    if r == 0 {
        return Ok(1.0 / n as f64);
    }
    let mut acc = Kahan::default();
    for i in r + 1..=n {
        acc.add(r as f64 / (i - 1) as f64);
    }
    Ok(acc.value() / n as f64)
}

/// Law of the sum of independent Bernoulli indicators with the given success
/// probabilities, as `law[d] = Pr(sum = d)`. One convolution step per
/// indicator keeps the whole thing `O(len^2)`.
fn bernoulli_sum_law(probs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut law = vec![1.0];
    for p in probs {
        let mut next = vec![0.0; law.len() + 1];
        for (d, &v) in law.iter().enumerate() {
            next[d] += v * (1.0 - p);
            next[d + 1] += v * p;
        }
        law = next;
    }
    law
}

/// Distribution of the number of users the record-based rule moves to the
/// second basestation: `law[d] = Pr(D = d)` for `d = 0..=n-r`.
///
/// Arrival `i > r` is segregated iff it is a running record of the whole
/// prefix, which under a uniformly random order happens independently with
/// probability `1/i`.
pub fn modified_secretary_degree_law(n: usize, r: usize) -> Result<Vec<f64>> {
    validate_order("modified_secretary_degree_law", n, r)?;
    Ok(bernoulli_sum_law((r + 1..=n).map(|i| 1.0 / i as f64)))
}

/// Distribution of the number of users the `m`-basestation threshold rule
/// segregates: `law[d] = Pr(S = d)` for `d = 0..=n-r`.
///
/// Arrival `i > r` beats the `(m-1)`-th best of the first `i-1` iff it lands
/// in the top `m-1` of the first `i`, independently across `i` with
/// probability `min(1, (m-1)/i)` (the clamp covers short prefixes, where the
/// threshold is still `-inf` and everyone qualifies).
pub fn k_secretary_selected_law(n: usize, r: usize, m: usize) -> Result<Vec<f64>> {
    validate_order("k_secretary_selected_law", n, r)?;
    if m < 2 {
        return Err(Error::InvalidParam(format!(
            "k_secretary_selected_law: need m >= 2 basestations, got {m}"
        )));
    }
    let picks = (m - 1) as f64;
    Ok(bernoulli_sum_law(
        (r + 1..=n).map(|i| (picks / i as f64).min(1.0)),
    ))
}

/// Ordered reciprocal-product sum
/// `A_d(t, n) = sum_{t+1 <= i_1 < ... < i_d <= n} 1/(i_1 * ... * i_d)`,
/// with `A_0 = 1` (empty product) and `0` when fewer than `d` indices fit.
///
/// Computed by the suffix recursion `B_k(i) = B_k(i+1) + B_{k-1}(i+1)/i`
/// (`B_k(i)` restricts the sum to indices `>= i`), so the whole table costs
/// `O(d * n)`.
pub fn a_d_sum(d: usize, t: usize, n: usize) -> f64 {
    if d == 0 {
        return 1.0;
    }
    if t >= n || n - t < d {
        return 0.0;
    }
    // suffix[k] = B_k(i) while scanning i downward from n+1 to t+1
    let mut suffix = vec![0.0; d + 1];
    suffix[0] = 1.0;
    for i in (t + 1..=n).rev() {
        for k in (1..=d).rev() {
            suffix[k] += suffix[k - 1] / i as f64;
        }
    }
    suffix[d]
}

/// `Pr(S = d)` for the `m`-basestation threshold rule from the closed-form
/// identity (valid for `r >= m-1`, where no clamping occurs):
///
/// `Pr(S = d) = [r(r-1)...(r-m+2)] / [n(n-1)...(n-m+2)] * (m-1)^d *
///  A_d(r-m+1, n-m+1)`.
///
/// Agrees with `k_secretary_selected_law(n, r, m)[d]` on its whole domain;
/// the law route also covers `r < m-1`.
pub fn k_secretary_selected_exact(n: usize, r: usize, m: usize, d: usize) -> Result<f64> {
    validate_order("k_secretary_selected_exact", n, r)?;
    if m < 2 {
        return Err(Error::InvalidParam(format!(
            "k_secretary_selected_exact: need m >= 2 basestations, got {m}"
        )));
    }
    if r < m - 1 {
        return Err(Error::InvalidParam(format!(
            "k_secretary_selected_exact: identity needs r >= m-1, got r={r}, m={m}"
        )));
    }
    if d > n - r {
        return Ok(0.0);
    }
    let mut prefactor = 1.0;
    for k in 0..m - 1 {
        prefactor *= (r - k) as f64 / (n - k) as f64;
    }
    let spread = ((m - 1) as f64).powi(d as i32);
    Ok(prefactor * spread * a_d_sum(d, r - (m - 1), n - (m - 1)))
}

fn validate_bound(what: &str, alpha: f64, dmax: usize, m: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParam(format!(
            "{what}: sampled fraction alpha={alpha} must lie in (0, 1)"
        )));
    }
    if dmax == 0 {
        return Err(Error::InvalidParam(format!(
            "{what}: need dmax >= 1 series terms"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidParam(format!(
            "{what}: need m >= 2 basestations, got {m}"
        )));
    }
    Ok(())
}

/// Asymptotic lower bound on the expected fraction of the best rate kept by
/// the two-basestation record rule with sampled fraction `alpha`:
/// `sum_{d=1}^{dmax} (1/d) * alpha * ln(1/alpha)^d / d!`.
///
/// The `d`-th term is the limit probability of segregating exactly `d`
/// users (Poisson-like), weighted by the `1/d` share the best one then gets.
/// `dmax = 10` already gives `0.5173...` at the maximizing `alpha = 0.22`.
pub fn bound_two_bs(alpha: f64, dmax: usize) -> Result<f64> {
    validate_bound("bound_two_bs", alpha, dmax, 2)?;
    let x = (1.0 / alpha).ln();
    let mut term = alpha; // alpha * x^d / d! at d = 0
    let mut acc = Kahan::default();
    for d in 1..=dmax {
        term *= x / d as f64;
        acc.add(term / d as f64);
    }
    Ok(acc.value())
}

/// `m`-basestation generalization of [`bound_two_bs`]:
/// `sum_{d=m-1}^{dmax*(m-1)} (1/ceil(d/(m-1))) * alpha^(m-1) *
///  ((m-1) ln(1/alpha))^d / d!`.
///
/// `d` counts segregated users, spread round-robin over `m-1` basestations,
/// so the best user shares with `ceil(d/(m-1)) - 1` others; `dmax` caps that
/// per-basestation load (not `d` itself), which keeps the series non-empty
/// for every `m`. At `m = 2` this is exactly [`bound_two_bs`].
pub fn bound_m_bs(alpha: f64, dmax: usize, m: usize) -> Result<f64> {
    validate_bound("bound_m_bs", alpha, dmax, m)?;
    let picks = (m - 1) as f64;
    let x = picks * (1.0 / alpha).ln();
    let mut term = alpha.powi((m - 1) as i32); // alpha^(m-1) * x^d / d! at d = 0
    let mut acc = Kahan::default();
    for d in 1..=dmax * (m - 1) {
        term *= x / d as f64;
        if d >= m - 1 {
            let share = (d + m - 2) / (m - 1); // ceil(d / (m-1))
            acc.add(term / share as f64);
        }
    }
    Ok(acc.value())
}

/// Result of a grid search over the sampled fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundMaximum {
    /// Maximizing sampled fraction.
    pub alpha: f64,
    /// Bound value at [`BoundMaximum::alpha`].
    pub value: f64,
}

/// Maximize [`bound_m_bs`] over `alpha = k/(grid_points+1)` for
/// `k = 1..=grid_points` (ties keep the smaller `alpha`). With the default
/// resolution of 99 interior points the two-basestation curve peaks at
/// `alpha = 0.22`.
pub fn maximize_bound(m: usize, dmax: usize, grid_points: usize) -> Result<BoundMaximum> {
    if grid_points == 0 {
        return Err(Error::InvalidParam(
            "maximize_bound: need at least one grid point".into(),
        ));
    }
    let denom = (grid_points + 1) as f64;
    let mut best: Option<BoundMaximum> = None;
    for k in 1..=grid_points {
        let alpha = k as f64 / denom;
        let value = bound_m_bs(alpha, dmax, m)?;
        if best.is_none_or(|b| value > b.value) {
            best = Some(BoundMaximum { alpha, value });
        }
    }
    Ok(best.expect("grid_points >= 1"))
}
