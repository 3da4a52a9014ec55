//! Shared verdict logic for big-O ratio tests and log-log slope fits.
//!
//! An asymptotic statement `v(t) = O(b(t))` is probed on a finite geometric
//! grid. "Pass" means the ratio sequence `q = v/b` shows no growing trend
//! toward the limit and its maximum stays within a factor of the median;
//! thresholds live in [`RatioThresholds`] and every verdict echoes the
//! values it used. None of this decides the asymptotic statement — it
//! reports evidence, and the acceptance suite pins families where the truth
//! is known analytically.

use serde::{Deserialize, Serialize};

use crate::numeric::{log_log_slope, median};

/// Direction of the limit the grid parameter approaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamLimit {
    /// Parameter decreases to 0 (h, 1-ρ): ratios must not grow as t shrinks.
    ToZero,
    /// Parameter grows to infinity (n): ratios must not grow as t grows.
    ToInfinity,
}

/// Three-valued outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Pass, Pass) => Pass,
        }
    }
}

/// Thresholds of the boundedness verdict.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RatioThresholds {
    /// Allowed trend of `ln q` against `ln t` in the unbounded direction.
    pub slope_tol: f64,
    /// Maximum ratio may not exceed this multiple of the median ratio.
    pub max_over_median: f64,
}

impl Default for RatioThresholds {
    fn default() -> Self {
        Self {
            slope_tol: 0.05,
            max_over_median: 2.0,
        }
    }
}

/// Summary statistics of one ratio sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioStats {
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub ratio_slope: Option<f64>,
    pub verdict: Verdict,
}

/// Boundedness verdict for ratios `q_i = v_i / b_i` on grid `t_i`.
///
/// Pass requires: the fitted log-log slope of the ratios does not point
/// upward toward the limit (within `slope_tol`), and the maximum ratio stays
/// below `max_over_median` times the median. Fewer than 4 grid points is
/// inconclusive; an all-zero sequence passes trivially.
pub fn bounded_ratio_verdict(
    params: &[f64],
    ratios: &[f64],
    limit: ParamLimit,
    th: &RatioThresholds,
) -> RatioStats {
    assert_eq!(params.len(), ratios.len());
    if ratios.iter().any(|q| !q.is_finite() || *q < 0.0) {
        return RatioStats {
            max_ratio: f64::INFINITY,
            median_ratio: f64::NAN,
            ratio_slope: None,
            verdict: if ratios.iter().any(|q| q.is_infinite()) {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            },
        };
    }
    let max_ratio = ratios.iter().copied().fold(0.0f64, f64::max);
    if max_ratio == 0.0 {
        return RatioStats {
            max_ratio,
            median_ratio: 0.0,
            ratio_slope: None,
            verdict: Verdict::Pass,
        };
    }
    if params.len() < 4 {
        return RatioStats {
            max_ratio,
            median_ratio: median(ratios),
            ratio_slope: None,
            verdict: Verdict::Inconclusive,
        };
    }
    let pairs: Vec<(f64, f64)> = params
        .iter()
        .zip(ratios.iter())
        .filter(|(_, q)| **q > 0.0)
        .map(|(t, q)| (*t, *q))
        .collect();
    let nonzero: Vec<f64> = pairs.iter().map(|(_, q)| *q).collect();
    let median_ratio = median(&nonzero);
    let ratio_slope = log_log_slope(&pairs);
    let slope_ok = match (ratio_slope, limit) {
        (Some(s), ParamLimit::ToZero) => s >= -th.slope_tol,
        (Some(s), ParamLimit::ToInfinity) => s <= th.slope_tol,
        (None, _) => true,
    };
    let spread_ok = max_ratio <= th.max_over_median * median_ratio;
    let verdict = if slope_ok && spread_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    RatioStats {
        max_ratio,
        median_ratio,
        ratio_slope,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_ratios_pass() {
        let t: Vec<f64> = (1..=10).map(|j| 2f64.powi(-j)).collect();
        let q = vec![1.0; 10];
        let s = bounded_ratio_verdict(&t, &q, ParamLimit::ToZero, &RatioThresholds::default());
        assert_eq!(s.verdict, Verdict::Pass);
    }

    #[test]
    fn log_factor_fails_to_zero() {
        // values = bound · log(1/t): ratios grow as t → 0
        let t: Vec<f64> = (1..=14).map(|j| 2f64.powi(-j)).collect();
        let q: Vec<f64> = t.iter().map(|t| (1.0 / t).ln()).collect();
        let s = bounded_ratio_verdict(&t, &q, ParamLimit::ToZero, &RatioThresholds::default());
        assert_eq!(s.verdict, Verdict::Fail);
    }

    #[test]
    fn power_growth_fails_to_infinity() {
        let t: Vec<f64> = (2..=16).map(|j| 2f64.powi(j)).collect();
        let q: Vec<f64> = t.iter().map(|t| t.powf(0.4)).collect();
        let s = bounded_ratio_verdict(&t, &q, ParamLimit::ToInfinity, &RatioThresholds::default());
        assert_eq!(s.verdict, Verdict::Fail);
    }

    #[test]
    fn zeros_pass_and_short_grids_are_inconclusive() {
        let t = vec![0.5, 0.25, 0.125, 0.0625];
        let s = bounded_ratio_verdict(
            &t,
            &[0.0, 0.0, 0.0, 0.0],
            ParamLimit::ToZero,
            &RatioThresholds::default(),
        );
        assert_eq!(s.verdict, Verdict::Pass);
        let s = bounded_ratio_verdict(
            &t[..3],
            &[1.0, 1.0, 1.0],
            ParamLimit::ToZero,
            &RatioThresholds::default(),
        );
        assert_eq!(s.verdict, Verdict::Inconclusive);
    }
}
