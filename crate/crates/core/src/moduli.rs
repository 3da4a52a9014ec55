//! Modulus functions ω, their admissibility conditions, and empirical
//! S^p H_ω class-membership testing.
//!
//! A modulus must satisfy: 1) continuity on [0,1]; 2) monotone
//! nondecreasing; 3) ω(t) > 0 on (0,1]; 4) ω(t) → 0 as t → 0. On top of
//! that the theorems need the tail condition
//! (𝔅): `Σ_{v>n} ω(1/v)/v = O(ω(1/n))`.
//!
//! The built-in kinds are classified analytically; custom evaluators are
//! probed on a dyadic grid and may come back inconclusive. Big-O verdicts
//! are heuristic by construction — see `fit` for the thresholds.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fit::{bounded_ratio_verdict, ParamLimit, RatioThresholds, Verdict};
use crate::numeric::KahanSum;
use crate::spectrum::{BlockProfile, Spectrum};

/// Default multiplicative window of the (𝔅) checker: the tail sum for probe
/// point `n` runs over `v = n+1 .. n·K`.
pub const DEFAULT_B_TAIL_FACTOR: u32 = 1024;

/// Boundedness thresholds of the (𝔅) ratio sequence.
#[derive(Debug, Clone, Copy)]
pub struct BConditionThresholds {
    /// Late-to-mid growth below which the sequence counts as flattened.
    pub flat_tol: f64,
    /// Late-to-mid growth above which the sequence counts as divergent.
    pub fail_tol: f64,
}

impl Default for BConditionThresholds {
    fn default() -> Self {
        Self {
            flat_tol: 1.05,
            fail_tol: 1.25,
        }
    }
}

#[derive(Clone)]
pub enum ModulusKind {
    /// `ω(t) = t^α`, `α ∈ (0,1]`.
    Power { alpha: f64 },
    /// `ω(t) = t^α (ln(e/t))^β` with parameters admitting conditions 1)–4).
    PowerLog { alpha: f64, beta: f64 },
    /// Arbitrary evaluator on [0,1]; admissibility is probed numerically.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for ModulusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Power { alpha } => write!(f, "Power {{ alpha: {alpha} }}"),
            Self::PowerLog { alpha, beta } => {
                write!(f, "PowerLog {{ alpha: {alpha}, beta: {beta} }}")
            }
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A modulus candidate with a display name.
#[derive(Debug, Clone)]
pub struct Modulus {
    pub kind: ModulusKind,
    pub name: String,
}

impl Modulus {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "power modulus needs alpha in (0,1], got {alpha}"
            )));
        }
        Ok(Self {
            kind: ModulusKind::Power { alpha },
            name: format!("t^{alpha}"),
        })
    }

    /// `t^α ln(e/t)^β`. Admissible when `α > 0` and `β <= α` (monotonicity),
    /// or `α = 0` and `β < 0` (then ω(t) = ln(e/t)^β decreases to 0 with t).
    pub fn power_log(alpha: f64, beta: f64) -> Result<Self> {
        let ok = (alpha > 0.0 && alpha <= 1.0 && beta <= alpha) || (alpha == 0.0 && beta < 0.0);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "power_log modulus with alpha={alpha}, beta={beta} violates conditions 1)-4)"
            )));
        }
        Ok(Self {
            kind: ModulusKind::PowerLog { alpha, beta },
            name: format!("t^{alpha}·ln(e/t)^{beta}"),
        })
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: ModulusKind::Custom(Arc::new(f)),
            name: name.into(),
        }
    }

    /// Evaluates ω(t) for `t ∈ [0,1]`.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            ModulusKind::Power { alpha } => {
                if t <= 0.0 {
                    0.0
                } else {
                    t.powf(*alpha)
                }
            }
            ModulusKind::PowerLog { alpha, beta } => {
                if t <= 0.0 {
                    0.0
                } else {
                    let log = 1.0 - t.ln();
                    let power = if *alpha == 0.0 { 1.0 } else { t.powf(*alpha) };
                    power * log.powf(*beta)
                }
            }
            ModulusKind::Custom(f) => f(t),
        }
    }

    fn is_builtin(&self) -> bool {
        !matches!(self.kind, ModulusKind::Custom(_))
    }
}

/// Outcome of one condition check, with the probe data that produced it.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: String,
    pub grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub worst_ratio: f64,
    pub verdict: Verdict,
    pub detail: String,
}

/// Checks conditions 1)–4) on a dyadic grid of at least `grid_size` points.
///
/// Monotonicity and positivity are checked exactly on the grid; the limit at
/// 0 and continuity are heuristic, and only custom moduli can come back
/// inconclusive (the built-in kinds are admissible by construction).
pub fn check_basic_conditions(omega: &Modulus, grid_size: u32) -> Result<ConditionReport> {
    if grid_size < 16 {
        return Err(Error::InvalidParameter("grid_size must be >= 16".into()));
    }
    let m = grid_size.next_power_of_two();
    let grid: Vec<f64> = (0..=m).map(|i| f64::from(i) / f64::from(m)).collect();
    let values: Vec<f64> = grid.iter().map(|&t| omega.eval(t)).collect();
    for (&t, &v) in grid.iter().zip(values.iter()) {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Evaluation(format!(
                "omega({t}) returned {v}"
            )));
        }
    }
    let scale = values.last().copied().unwrap_or(1.0).max(1e-300);

    let mut detail = String::new();
    let mut verdict = Verdict::Pass;

    // 2) monotone nondecreasing
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 1e-12 * scale);
    if !monotone {
        verdict = Verdict::Fail;
        detail.push_str("condition 2) fails: decreasing on grid; ");
    }
    // 3) positive on (0,1]
    let positive = grid
        .iter()
        .zip(values.iter())
        .all(|(&t, &v)| t == 0.0 || v > 0.0);
    if !positive {
        verdict = Verdict::Fail;
        detail.push_str("condition 3) fails: zero value on (0,1]; ");
    }
    // 4) limit at zero (heuristic for custom kinds)
    if values[0] > 1e-9 * scale {
        verdict = Verdict::Fail;
        detail.push_str("condition 4) fails: omega(0) != 0; ");
    } else if !omega.is_builtin() {
        let at_min = values[1];
        let at_4min = omega.eval(grid[1] * 4.0);
        if at_min > 0.3 * scale && at_min >= 0.999 * at_4min {
            // flat and far from zero near the origin
            verdict = verdict.and(Verdict::Fail);
            detail.push_str("condition 4) fails: no decay near 0; ");
        } else if at_min > 0.3 * scale {
            verdict = verdict.and(Verdict::Inconclusive);
            detail.push_str("condition 4) inconclusive: slow decay near 0; ");
        }
    }
    // 1) continuity heuristic: largest jump against the global range
    let range = values.iter().fold(0.0f64, |a, &v| a.max(v)) - values[0];
    let max_jump = values
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0f64, f64::max);
    if range > 0.0 && max_jump > 0.5 * range && !omega.is_builtin() {
        verdict = verdict.and(Verdict::Inconclusive);
        detail.push_str("condition 1) inconclusive: large jump on grid; ");
    }

    if detail.is_empty() {
        detail.push_str("conditions 1)-4) hold on the probe grid");
    }
    let worst_ratio = max_jump / range.max(1e-300);
    Ok(ConditionReport {
        condition: "conditions 1)-4)".into(),
        grid,
        ratios: values,
        worst_ratio,
        verdict,
        detail,
    })
}

/// Checks condition (𝔅): `Σ_{v>n} ω(1/v)/v = O(ω(1/n))`.
///
/// For each probe `n` the tail is summed exactly over the multiplicative
/// window `v = n+1 .. n·tail_factor`; for the power kind the remainder
/// beyond the window is added analytically (integral comparison), which
/// makes the ratio essentially exact. The verdict looks at the late growth
/// of the ratio sequence: a flattened sequence passes, a strictly growing
/// one fails.
pub fn check_condition_b(
    omega: &Modulus,
    n_grid: &[u32],
    tail_factor: u32,
) -> Result<ConditionReport> {
    if n_grid.is_empty() || n_grid.iter().any(|&n| n < 1) {
        return Err(Error::InvalidParameter("n_grid must contain n >= 1".into()));
    }
    if tail_factor < 2 {
        return Err(Error::InvalidParameter("tail_factor must be >= 2".into()));
    }
    let th = BConditionThresholds::default();
    let mut ratios = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let end = u64::from(n) * u64::from(tail_factor);
        let mut acc = KahanSum::new();
        for v in (u64::from(n) + 1)..=end {
            let v = v as f64;
            acc.add(omega.eval(1.0 / v) / v);
        }
        let mut tail = acc.value();
        if let ModulusKind::Power { alpha } = omega.kind {
            // Σ_{v>V} v^{-1-α} ≈ ∫_{V+1/2}^∞ x^{-1-α} dx = (V+1/2)^{-α}/α
            tail += (end as f64 + 0.5).powf(-alpha) / alpha;
        }
        let denom = omega.eval(1.0 / f64::from(n));
        if denom <= 0.0 {
            return Err(Error::Evaluation(format!(
                "omega(1/{n}) is not positive"
            )));
        }
        ratios.push(tail / denom);
    }
    let worst_ratio = ratios.iter().copied().fold(0.0f64, f64::max);

    let strictly_increasing = ratios.windows(2).all(|w| w[1] > w[0] * (1.0 + 1e-9));
    let mid = ratios[ratios.len() / 2].max(1e-300);
    let late_growth = ratios.last().unwrap() / mid;
    let verdict = if ratios.len() < 3 {
        Verdict::Inconclusive
    } else if late_growth <= th.flat_tol {
        Verdict::Pass
    } else if late_growth > th.fail_tol || strictly_increasing {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let detail = format!(
        "R(n) over window n+1..n*{tail_factor}: max={worst_ratio:.6}, late growth={late_growth:.4}, strictly increasing={strictly_increasing}"
    );
    Ok(ConditionReport {
        condition: "condition (B)".into(),
        grid: n_grid.iter().map(|&n| f64::from(n)).collect(),
        ratios,
        worst_ratio,
        verdict,
        detail,
    })
}

/// Requires ω to pass conditions 1)–4) and (𝔅); used as the experiments'
/// precondition gate.
pub fn require_admissible(omega: &Modulus) -> Result<()> {
    let basic = check_basic_conditions(omega, 1 << 10)?;
    if basic.verdict == Verdict::Fail {
        return Err(Error::Precondition(format!(
            "modulus '{}' fails conditions 1)-4): {}",
            omega.name, basic.detail
        )));
    }
    let b_grid: Vec<u32> = (2..=12).map(|j| 1u32 << j).collect();
    let b = check_condition_b(omega, &b_grid, 256)?;
    if b.verdict == Verdict::Fail {
        return Err(Error::Precondition(format!(
            "modulus '{}' fails condition (B): {}",
            omega.name, b.detail
        )));
    }
    Ok(())
}

/// Membership ratios `Q(h) = ‖f - f_h‖_{S^p}.upper / ω(h)` over `h_grid`.
pub fn estimate_class_membership(
    f: &Spectrum,
    omega: &Modulus,
    p: f64,
    h_grid: &[f64],
    th: &RatioThresholds,
) -> Result<ConditionReport> {
    let shifts = h_grid
        .iter()
        .map(|&h| f.shift_difference_norm(h, p).map(|n| n.upper))
        .collect::<Result<Vec<f64>>>()?;
    membership_report(omega, h_grid, &shifts, th)
}

/// Profile-level membership via the sine form; only valid for Y-supported
/// spectra (the caller asserts that flag).
pub fn estimate_class_membership_profile(
    profile: &BlockProfile,
    omega: &Modulus,
    h_grid: &[f64],
    th: &RatioThresholds,
) -> Result<ConditionReport> {
    let shifts: Vec<f64> = h_grid
        .iter()
        .map(|&h| profile.shift_difference_norm_sine(h).upper)
        .collect();
    membership_report(omega, h_grid, &shifts, th)
}

fn membership_report(
    omega: &Modulus,
    h_grid: &[f64],
    shifts: &[f64],
    th: &RatioThresholds,
) -> Result<ConditionReport> {
    if h_grid.iter().any(|&h| !(0.0 < h && h <= 1.0)) {
        return Err(Error::InvalidParameter(
            "h_grid entries must lie in (0,1]".into(),
        ));
    }
    let mut ratios = Vec::with_capacity(h_grid.len());
    for (&h, &s) in h_grid.iter().zip(shifts.iter()) {
        let w = omega.eval(h);
        if w <= 0.0 {
            return Err(Error::Evaluation(format!("omega({h}) is not positive")));
        }
        ratios.push(s / w);
    }
    let stats = bounded_ratio_verdict(h_grid, &ratios, ParamLimit::ToZero, th);
    Ok(ConditionReport {
        condition: "membership in S^p H_omega".into(),
        grid: h_grid.to_vec(),
        ratios: ratios.clone(),
        worst_ratio: stats.max_ratio,
        verdict: stats.verdict,
        detail: format!(
            "max ratio {:.6}, median {:.6}, ratio slope {:?}",
            stats.max_ratio, stats.median_ratio, stats.ratio_slope
        ),
    })
}

/// The default dyadic probe grids.
pub fn dyadic_h_grid(j_range: std::ops::RangeInclusive<u32>) -> Vec<f64> {
    j_range.map(|j| 2f64.powi(-(j as i32))).collect()
}

pub fn dyadic_n_grid(j_range: std::ops::RangeInclusive<u32>) -> Vec<u32> {
    j_range.map(|j| 1u32 << j).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::TailInfo;

    #[test]
    fn power_modulus_passes_basic_conditions() {
        let omega = Modulus::power(0.5).unwrap();
        let rep = check_basic_conditions(&omega, 256).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn decreasing_function_fails_monotonicity() {
        let omega = Modulus::custom("1-t", |t| 1.0 - t);
        let rep = check_basic_conditions(&omega, 64).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.detail.contains("condition 2)") || rep.detail.contains("condition 4)"));
    }

    #[test]
    fn oscillating_function_does_not_pass() {
        let omega = Modulus::custom("t sin(1/t) + t", |t| {
            if t == 0.0 {
                0.0
            } else {
                (t * (1.0 / t).sin() + t).max(0.0)
            }
        });
        let rep = check_basic_conditions(&omega, 1024).unwrap();
        assert_ne!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn condition_b_power_family_passes_with_expected_ratio() {
        // R(n) ≈ 1/α for the power modulus
        let n_grid = dyadic_n_grid(2..=12);
        for &alpha in &[0.1, 0.3, 0.5, 1.0] {
            let omega = Modulus::power(alpha).unwrap();
            let rep = check_condition_b(&omega, &n_grid, 256).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "alpha={alpha}: {}", rep.detail);
            let expected = 1.0 / alpha;
            for &r in &rep.ratios {
                assert!(
                    (r - expected).abs() / expected < 0.05,
                    "alpha={alpha} ratio={r} expected≈{expected}"
                );
            }
        }
    }

    #[test]
    fn condition_b_log_modulus_fails_with_increasing_ratios() {
        let omega = Modulus::power_log(0.0, -1.0).unwrap();
        let n_grid = dyadic_n_grid(2..=12);
        let rep = check_condition_b(&omega, &n_grid, 256).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail, "{}", rep.detail);
        assert!(rep
            .ratios
            .windows(2)
            .all(|w| w[1] > w[0]), "ratios must increase: {:?}", rep.ratios);
    }

    #[test]
    fn condition_b_ratios_converge_in_tail_factor() {
        // Cauchy check: two window sizes give nearly the same ratios
        let omega = Modulus::power(0.5).unwrap();
        let n_grid = dyadic_n_grid(2..=8);
        let a = check_condition_b(&omega, &n_grid, 256).unwrap();
        let b = check_condition_b(&omega, &n_grid, 1024).unwrap();
        for (x, y) in a.ratios.iter().zip(b.ratios.iter()) {
            assert!((x - y).abs() / y < 1e-3, "{x} vs {y}");
        }
    }

    #[test]
    fn membership_single_block_with_lipschitz_modulus() {
        let mut values = vec![0.0; 4];
        values[3] = 1.0;
        let prof = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        let omega = Modulus::power(1.0).unwrap();
        let h = dyadic_h_grid(1..=14);
        let rep =
            estimate_class_membership_profile(&prof, &omega, &h, &RatioThresholds::default())
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.detail);
    }

    #[test]
    fn membership_constant_function_trivially_passes() {
        use num_complex::Complex64;
        let f = Spectrum::exact(
            1,
            [(crate::spectrum::MultiIndex::new(vec![0]).unwrap(), Complex64::new(2.0, 0.0))],
        )
        .unwrap();
        let omega = Modulus::power(0.5).unwrap();
        let h = dyadic_h_grid(1..=8);
        let rep = estimate_class_membership(&f, &omega, 2.0, &h, &RatioThresholds::default())
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.ratios.iter().all(|&q| q == 0.0));
    }

    #[test]
    fn membership_is_scale_equivariant() {
        use num_complex::Complex64;
        let mk = |c: f64| {
            Spectrum::exact(
                1,
                (1..=40).map(|k| {
                    (
                        crate::spectrum::MultiIndex::new(vec![k]).unwrap(),
                        Complex64::new(c / f64::from(k) / f64::from(k), 0.0),
                    )
                }),
            )
            .unwrap()
        };
        let omega = Modulus::power(0.5).unwrap();
        let h = dyadic_h_grid(1..=10);
        let th = RatioThresholds::default();
        let r1 = estimate_class_membership(&mk(1.0), &omega, 2.0, &h, &th).unwrap();
        let r3 = estimate_class_membership(&mk(3.0), &omega, 2.0, &h, &th).unwrap();
        assert_eq!(r1.verdict, r3.verdict);
        for (a, b) in r1.ratios.iter().zip(r3.ratios.iter()) {
            assert!((b / a - 3.0).abs() < 1e-10);
        }
    }
}
