//! Executable embodiments of the equivalence theorems: both sides of each
//! statement evaluated on parameter grids, big-O ratio tests, and log-log
//! rate fits.
//!
//! Statement names are method-agnostic on purpose: the Abel–Poisson case
//! `s = 1` of the generalized experiment delegates to the Taylor experiment
//! with `r = 1` (the two operators coincide identically), and the reports
//! must come out indistinguishable.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{
    poisson_of_bracket_derivative_norm, poisson_of_radial_derivative_norm, psi_derivative_profile,
    psi_derivative_spectrum, PoissonParams, PsiWeight,
};
use crate::error::{Error, Result};
use crate::fit::{bounded_ratio_verdict, ParamLimit, RatioStats, RatioThresholds, Verdict};
use crate::moduli::{require_admissible, Modulus};
use crate::numeric::{log_log_slope, pow_p, KahanSum};
use crate::spectrum::{BlockProfile, NormInterval, Spectrum};
use crate::summation::{approximation_error, SummationMethod};

/// Spectral data an experiment runs on: the block profile (with whatever
/// tail certificate it carries), the Y-support flag, and optionally the full
/// spectrum for membership tests outside Y.
#[derive(Debug, Clone)]
pub struct ExperimentInput {
    pub label: String,
    pub profile: BlockProfile,
    pub y_supported: bool,
    pub spectrum: Option<Spectrum>,
}

impl ExperimentInput {
    pub fn new(
        label: impl Into<String>,
        profile: BlockProfile,
        y_supported: bool,
        spectrum: Option<Spectrum>,
    ) -> Self {
        Self {
            label: label.into(),
            profile,
            y_supported,
            spectrum,
        }
    }

    /// Generic path straight from a spectrum.
    pub fn from_spectrum(f: &Spectrum, p: f64) -> Result<Self> {
        Ok(Self {
            label: format!("spectrum(d={}, {} coefficients)", f.dimension(), f.len()),
            profile: f.profile(p)?,
            y_supported: f.y_supported(),
            spectrum: Some(f.clone()),
        })
    }

    pub fn p(&self) -> f64 {
        self.profile.p()
    }
}

/// Result of one big-O statement on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub quantity_name: String,
    /// `(parameter, value interval)` in grid order.
    pub grid: Vec<(f64, f64, f64)>,
    /// The ω-based majorant at each grid point.
    pub bound_values: Vec<f64>,
    /// `value.upper / bound`.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `ln value.upper` against `ln parameter`
    /// (defined for grids of at least 4 points).
    pub fitted_slope: Option<f64>,
    pub stats: RatioStats,
    pub verdict: Verdict,
    pub thresholds: RatioThresholds,
    pub limit: ParamLimit,
}

impl RateReport {
    pub fn parameters(&self) -> Vec<f64> {
        self.grid.iter().map(|(t, _, _)| *t).collect()
    }
}

/// Shared verdict logic for every O(·) statement: ratios, slope fit and
/// boundedness verdict per the configured thresholds.
pub fn big_o_ratio_test(
    quantity_name: impl Into<String>,
    values: &[(f64, NormInterval)],
    bound: impl Fn(f64) -> f64,
    limit: ParamLimit,
    th: &RatioThresholds,
) -> Result<RateReport> {
    let mut grid = Vec::with_capacity(values.len());
    let mut bound_values = Vec::with_capacity(values.len());
    let mut ratios = Vec::with_capacity(values.len());
    for &(t, v) in values {
        let b = bound(t);
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Precondition(format!(
                "bound must be positive and finite on the grid, got {b} at {t}"
            )));
        }
        grid.push((t, v.lower, v.upper));
        bound_values.push(b);
        ratios.push(v.upper / b);
    }
    let params: Vec<f64> = grid.iter().map(|(t, _, _)| *t).collect();
    let fitted_slope = if values.len() >= 4 {
        log_log_slope(
            &params
                .iter()
                .zip(grid.iter())
                .map(|(&t, &(_, _, up))| (t, up))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let stats = bounded_ratio_verdict(&params, &ratios, limit, th);
    Ok(RateReport {
        quantity_name: quantity_name.into(),
        grid,
        bound_values,
        ratios,
        fitted_slope,
        verdict: stats.verdict,
        stats,
        thresholds: *th,
        limit,
    })
}

/// One tested implication between theorem statements.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceCheck {
    pub implication: String,
    pub verdict: Verdict,
}

/// Everything an experiment produced: one report per statement plus the
/// implications asserted between them.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremOutcome {
    pub statement_ids: Vec<String>,
    pub reports: BTreeMap<String, RateReport>,
    pub equivalence: Vec<EquivalenceCheck>,
    pub y_supported: bool,
}

impl TheoremOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.values().all(|r| r.verdict.passed())
            && self.equivalence.iter().all(|e| e.verdict.passed())
    }
}

fn equivalence_checks(
    v1: Verdict,
    v2: Verdict,
    v3: Verdict,
    y_supported: bool,
) -> Vec<EquivalenceCheck> {
    use Verdict::*;
    let both = |a: Verdict, b: Verdict| -> Verdict {
        match (a, b) {
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (x, y) if x == y => Pass,
            _ => Fail,
        }
    };
    let mut checks = vec![EquivalenceCheck {
        implication: "s1<=>s2".into(),
        verdict: both(v1, v2),
    }];
    // s1 & s2 ⇒ s3 (always claimed)
    let fwd = match (v1, v2, v3) {
        (Inconclusive, _, _) | (_, Inconclusive, _) | (_, _, Inconclusive) => Inconclusive,
        (Pass, Pass, s3) => {
            if s3 == Pass {
                Pass
            } else {
                Fail
            }
        }
        _ => Pass, // vacuous
    };
    checks.push(EquivalenceCheck {
        implication: "s1s2=>s3".into(),
        verdict: fwd,
    });
    // s3 ⇒ s1 & s2 only for Y-supported functions
    if y_supported {
        let back = match (v1, v2, v3) {
            (Inconclusive, _, _) | (_, Inconclusive, _) | (_, _, Inconclusive) => Inconclusive,
            (s1, s2, Pass) => {
                if s1 == Pass && s2 == Pass {
                    Pass
                } else {
                    Fail
                }
            }
            _ => Pass,
        };
        checks.push(EquivalenceCheck {
            implication: "s3=>s1s2".into(),
            verdict: back,
        });
    }
    checks
}

/// Membership statement as a rate report: shift-difference norms against
/// ω(h) on the given h grid. Uses the sine form for Y-supported input, the
/// per-coefficient form when a spectrum is available, and comes back
/// inconclusive otherwise.
fn membership_report(
    input: &ExperimentInput,
    psi: Option<&PsiWeight>,
    omega: &Modulus,
    h_grid: &[f64],
    th: &RatioThresholds,
) -> Result<RateReport> {
    let values: Option<Vec<(f64, NormInterval)>> = if input.y_supported {
        let profile = match psi {
            Some(w) => psi_derivative_profile(&input.profile, w)?,
            None => input.profile.clone(),
        };
        Some(
            h_grid
                .par_iter()
                .map(|&h| (h, profile.shift_difference_norm_sine(h)))
                .collect(),
        )
    } else if let Some(spec) = &input.spectrum {
        let spec = match psi {
            Some(w) => psi_derivative_spectrum(spec, w)?,
            None => spec.clone(),
        };
        let p = input.p();
        let computed: Result<Vec<(f64, NormInterval)>> = h_grid
            .par_iter()
            .map(|&h| spec.shift_difference_norm(h, p).map(|n| (h, n)))
            .collect();
        Some(computed?)
    } else {
        None
    };
    match values {
        Some(values) => big_o_ratio_test(
            "membership",
            &values,
            |h| omega.eval(h),
            ParamLimit::ToZero,
            th,
        ),
        None => Ok(RateReport {
            quantity_name: "membership".into(),
            grid: vec![],
            bound_values: vec![],
            ratios: vec![],
            fitted_slope: None,
            stats: RatioStats {
                max_ratio: f64::NAN,
                median_ratio: f64::NAN,
                ratio_slope: None,
                verdict: Verdict::Inconclusive,
            },
            verdict: Verdict::Inconclusive,
            thresholds: *th,
            limit: ParamLimit::ToZero,
        }),
    }
}

/// The Fejér/partial-sum equivalence: per `n`, the norm of the partial sum
/// of the first bracket derivative against `n ω(1/n)`, the Fejér error
/// against `ω(1/n)`, and class membership.
pub fn proposition1_experiment(
    input: &ExperimentInput,
    omega: &Modulus,
    n_grid: &[u32],
    th: &RatioThresholds,
) -> Result<TheoremOutcome> {
    require_admissible(omega)?;
    if n_grid.len() < 4 || n_grid.iter().any(|&n| n < 1) {
        return Err(Error::InvalidParameter(
            "n_grid needs at least 4 entries with n >= 1".into(),
        ));
    }
    let deriv = psi_derivative_profile(&input.profile, &PsiWeight::falling_factorial(1))?;

    let partial_values: Vec<(f64, NormInterval)> = n_grid
        .par_iter()
        .map(|&n| (f64::from(n), deriv.partial_sum_norm(n)))
        .collect();
    let partial_report = big_o_ratio_test(
        "partial_sum_growth",
        &partial_values,
        |n| n * omega.eval(1.0 / n),
        ParamLimit::ToInfinity,
        th,
    )?;

    let fejer_values: Result<Vec<(f64, NormInterval)>> = n_grid
        .par_iter()
        .map(|&n| {
            approximation_error(SummationMethod::Fejer { n }, &input.profile)
                .map(|e| (f64::from(n), e))
        })
        .collect();
    let fejer_report = big_o_ratio_test(
        "error_decay",
        &fejer_values?,
        |n| omega.eval(1.0 / n),
        ParamLimit::ToInfinity,
        th,
    )?;

    let h_grid: Vec<f64> = n_grid.iter().map(|&n| 1.0 / f64::from(n)).collect();
    let membership = membership_report(input, None, omega, &h_grid, th)?;

    let equivalence = equivalence_checks(
        partial_report.verdict,
        fejer_report.verdict,
        membership.verdict,
        input.y_supported,
    );
    let mut reports = BTreeMap::new();
    reports.insert("partial_sum_growth".to_string(), partial_report);
    reports.insert("error_decay".to_string(), fejer_report);
    reports.insert("membership".to_string(), membership);
    Ok(TheoremOutcome {
        statement_ids: vec![
            "partial_sum_growth".into(),
            "error_decay".into(),
            "membership".into(),
        ],
        reports,
        equivalence,
        y_supported: input.y_supported,
    })
}

fn validate_rho_grid(rho_grid: &[f64]) -> Result<()> {
    if rho_grid.len() < 4 {
        return Err(Error::InvalidParameter(
            "rho_grid needs at least 4 entries".into(),
        ));
    }
    if rho_grid.iter().any(|&r| !(0.0..1.0).contains(&r)) {
        return Err(Error::InvalidParameter(
            "rho_grid entries must lie in [0,1)".into(),
        ));
    }
    if rho_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "rho_grid must increase toward 1".into(),
        ));
    }
    Ok(())
}

/// Taylor-method equivalence: error of `A^△_{ρ,r}` against
/// `(1-ρ)^{r-1} ω(1-ρ)`, the bracket-derivative Poisson norm against
/// `ω(1-ρ)/(1-ρ)`, and membership of `f_{[r-1]}`.
pub fn theorem1_experiment(
    input: &ExperimentInput,
    r: u32,
    omega: &Modulus,
    rho_grid: &[f64],
    th: &RatioThresholds,
) -> Result<TheoremOutcome> {
    require_admissible(omega)?;
    if r < 1 {
        return Err(Error::InvalidParameter("theorem 1 needs r >= 1".into()));
    }
    validate_rho_grid(rho_grid)?;

    let error_values: Result<Vec<(f64, NormInterval)>> = rho_grid
        .par_iter()
        .map(|&rho| {
            approximation_error(SummationMethod::Taylor { rho, r }, &input.profile)
                .map(|e| (1.0 - rho, e))
        })
        .collect();
    let error_report = big_o_ratio_test(
        "error_decay",
        &error_values?,
        |t| t.powi(r as i32 - 1) * omega.eval(t),
        ParamLimit::ToZero,
        th,
    )?;

    let deriv_values: Result<Vec<(f64, NormInterval)>> = rho_grid
        .par_iter()
        .map(|&rho| {
            PoissonParams::new(rho, r)
                .map(|params| (1.0 - rho, poisson_of_bracket_derivative_norm(&input.profile, params)))
        })
        .collect();
    let deriv_report = big_o_ratio_test(
        "derivative_growth",
        &deriv_values?,
        |t| omega.eval(t) / t,
        ParamLimit::ToZero,
        th,
    )?;

    let h_grid: Vec<f64> = rho_grid.iter().map(|&rho| 1.0 - rho).collect();
    let psi = (r > 1).then(|| PsiWeight::falling_factorial(r - 1));
    let membership = membership_report(input, psi.as_ref(), omega, &h_grid, th)?;

    let equivalence = equivalence_checks(
        error_report.verdict,
        deriv_report.verdict,
        membership.verdict,
        input.y_supported,
    );
    let mut reports = BTreeMap::new();
    reports.insert("error_decay".to_string(), error_report);
    reports.insert("derivative_growth".to_string(), deriv_report);
    reports.insert("membership".to_string(), membership);
    Ok(TheoremOutcome {
        statement_ids: vec![
            "error_decay".into(),
            "derivative_growth".into(),
            "membership".into(),
        ],
        reports,
        equivalence,
        y_supported: input.y_supported,
    })
}

/// Generalized Abel–Poisson equivalence: error of `P^△_{ρ,s}` against
/// `ω(1-ρ)`, the radial-derivative Poisson norm against `ω(1-ρ)/(1-ρ)`, and
/// membership of `f^{(s-1)}`.
///
/// `s = 1` delegates to [`theorem1_experiment`] with `r = 1`: the operators
/// coincide (`P^△_{ρ,1} = A^△_{ρ,1}`, `f^{(1)} = f_{[1]}`), so the same
/// evaluation path runs and the outputs are identical.
pub fn theorem2_experiment(
    input: &ExperimentInput,
    s: f64,
    omega: &Modulus,
    rho_grid: &[f64],
    th: &RatioThresholds,
) -> Result<TheoremOutcome> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::InvalidParameter("theorem 2 needs s >= 1".into()));
    }
    if s == 1.0 {
        return theorem1_experiment(input, 1, omega, rho_grid, th);
    }
    require_admissible(omega)?;
    validate_rho_grid(rho_grid)?;

    let error_values: Result<Vec<(f64, NormInterval)>> = rho_grid
        .par_iter()
        .map(|&rho| {
            approximation_error(SummationMethod::AbelPoisson { rho, s }, &input.profile)
                .map(|e| (1.0 - rho, e))
        })
        .collect();
    let error_report = big_o_ratio_test(
        "error_decay",
        &error_values?,
        |t| omega.eval(t),
        ParamLimit::ToZero,
        th,
    )?;

    let deriv_values: Vec<(f64, NormInterval)> = rho_grid
        .par_iter()
        .map(|&rho| {
            (
                1.0 - rho,
                poisson_of_radial_derivative_norm(&input.profile, rho, s),
            )
        })
        .collect();
    let deriv_report = big_o_ratio_test(
        "derivative_growth",
        &deriv_values,
        |t| omega.eval(t) / t,
        ParamLimit::ToZero,
        th,
    )?;

    let h_grid: Vec<f64> = rho_grid.iter().map(|&rho| 1.0 - rho).collect();
    let psi = PsiWeight::radial_power(s - 1.0)?;
    let psi = (!psi.is_identity()).then_some(psi);
    let membership = membership_report(input, psi.as_ref(), omega, &h_grid, th)?;

    let equivalence = equivalence_checks(
        error_report.verdict,
        deriv_report.verdict,
        membership.verdict,
        input.y_supported,
    );
    let mut reports = BTreeMap::new();
    reports.insert("error_decay".to_string(), error_report);
    reports.insert("derivative_growth".to_string(), deriv_report);
    reports.insert("membership".to_string(), membership);
    Ok(TheoremOutcome {
        statement_ids: vec![
            "error_decay".into(),
            "derivative_growth".into(),
            "membership".into(),
        ],
        reports,
        equivalence,
        y_supported: input.y_supported,
    })
}

/// Band and trend thresholds for the equivalence-(7) ratio.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquivalenceThresholds {
    /// The final ratio must land in `[1-delta, 1+delta]`.
    pub delta: f64,
}

impl Default for EquivalenceThresholds {
    fn default() -> Self {
        Self { delta: 0.1 }
    }
}

/// Relation (7): the ratio of the error functionals
/// `‖f - P^△_{ρ,s}(f)‖^p / ‖f^{(s-1)} - P^△_{ρ,1}(f^{(s-1)})‖^p` on the
/// grid; it must approach 1 as ρ → 1−.
///
/// Requires `‖f^{(s)}‖_{S^p}` to be certified finite (the limit argument
/// normalizes by it).
pub fn equivalence7_experiment(
    input: &ExperimentInput,
    s: f64,
    rho_grid: &[f64],
    delta: f64,
    th: &RatioThresholds,
) -> Result<RateReport> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::InvalidParameter("relation (7) needs s >= 1".into()));
    }
    validate_rho_grid(rho_grid)?;
    let p = input.p();

    let deriv_s = psi_derivative_profile(&input.profile, &PsiWeight::radial_power(s)?)?;
    let norm_s = deriv_s.sp_norm();
    if !norm_s.is_certified() {
        return Err(Error::UncertifiedTail(format!(
            "relation (7) requires a certified finite ‖f^{{({s})}}‖, input '{}' does not provide one",
            input.label
        )));
    }
    let psi_sm1 = PsiWeight::radial_power(s - 1.0)?;
    let deriv_sm1 = psi_derivative_profile(&input.profile, &psi_sm1)?;

    let points: Result<Vec<(f64, NormInterval)>> = rho_grid
        .par_iter()
        .map(|&rho| -> Result<(f64, NormInterval)> {
            let num = approximation_error(SummationMethod::AbelPoisson { rho, s }, &input.profile)?;
            let den = approximation_error(
                SummationMethod::AbelPoisson { rho, s: 1.0 },
                &deriv_sm1,
            )?;
            if den.lower <= 0.0 {
                return Err(Error::Precondition(format!(
                    "denominator error functional vanishes at rho={rho}"
                )));
            }
            // enclosure of the ratio of the p-th-power functionals
            let lower = pow_p(num.lower / den.upper, p);
            let upper = pow_p(num.upper / den.lower, p);
            Ok((1.0 - rho, NormInterval { lower, upper }))
        })
        .collect();
    let points = points?;

    let ratios: Vec<f64> = points
        .iter()
        .map(|(_, iv)| 0.5 * (iv.lower + iv.upper))
        .collect();
    let params: Vec<f64> = points.iter().map(|(t, _)| *t).collect();
    // grid increases in ρ, so the last entry is the closest to the limit
    let last = *ratios.last().unwrap();
    let mid = ratios[ratios.len() / 2];
    let in_band = (last - 1.0).abs() <= delta;
    let trending = (last - 1.0).abs() <= (mid - 1.0).abs() + 1e-9;
    let verdict = if in_band && trending {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let stats = RatioStats {
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        median_ratio: crate::numeric::median(&ratios),
        ratio_slope: log_log_slope(
            &params
                .iter()
                .zip(ratios.iter())
                .map(|(&t, &q)| (t, q))
                .collect::<Vec<_>>(),
        ),
        verdict,
    };
    Ok(RateReport {
        quantity_name: "error_ratio".into(),
        grid: points
            .iter()
            .map(|&(t, iv)| (t, iv.lower, iv.upper))
            .collect(),
        bound_values: vec![1.0; points.len()],
        ratios,
        fitted_slope: None,
        stats,
        verdict,
        thresholds: *th,
        limit: ParamLimit::ToZero,
    })
}

/// Diagnostic for the Abel-transformation bound chain: the Fejér error
/// functional (decomposition (4)) is dominated by
/// `p Σ_{ν=n}^{N} ν^{-p-1} ‖S^△_ν(f_{[1]})‖^p + N^{-p} Σ_{k<=N} (k a_k)^p`.
/// Returns `(lhs, rhs)`; the inequality is asserted by the callers.
pub fn fejer_abel_transform_diagnostic(profile: &BlockProfile, n: u32) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidParameter("diagnostic needs n >= 1".into()));
    }
    let p = profile.p();
    let cap = profile.cutoff();
    if n >= cap {
        return Err(Error::InvalidParameter(
            "diagnostic needs n below the profile cutoff".into(),
        ));
    }
    let lhs = pow_p(
        approximation_error(SummationMethod::Fejer { n }, profile)?.lower,
        p,
    );
    // prefix sums of (k a_k)^p are the partial-sum norms of f_{[1]}
    let mut prefix = Vec::with_capacity(cap as usize + 1);
    let mut acc = KahanSum::new();
    prefix.push(0.0);
    for k in 1..=cap {
        let a = profile.value(k);
        if a != 0.0 {
            acc.add(pow_p(f64::from(k) * a, p));
        }
        prefix.push(acc.value());
    }
    let mut rhs = KahanSum::new();
    for nu in n..=cap {
        rhs.add(f64::from(nu).powf(-p - 1.0) * prefix[nu as usize]);
    }
    let rhs = p * rhs.value() + prefix[cap as usize] / pow_p(f64::from(cap), p);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::TailInfo;

    fn single_block_input(nu0: u32, a: f64, p: f64) -> ExperimentInput {
        let mut values = vec![0.0; nu0 as usize + 1];
        values[nu0 as usize] = a;
        ExperimentInput::new(
            format!("single block nu={nu0}"),
            BlockProfile::new(p, 1, values, TailInfo::exact()).unwrap(),
            true,
            None,
        )
    }

    #[test]
    fn big_o_exact_bound_passes() {
        let th = RatioThresholds::default();
        let values: Vec<(f64, NormInterval)> = (1..=10)
            .map(|j| {
                let t = 2f64.powi(-j);
                (t, NormInterval::exact(3.0 * t.sqrt()))
            })
            .collect();
        let rep = big_o_ratio_test("q", &values, |t| 3.0 * t.sqrt(), ParamLimit::ToZero, &th)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.ratios.iter().all(|&r| (r - 1.0).abs() < 1e-12));
        assert!((rep.fitted_slope.unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn big_o_log_factor_fails() {
        let th = RatioThresholds::default();
        let values: Vec<(f64, NormInterval)> = (1..=14)
            .map(|j| {
                let t = 2f64.powi(-j);
                (t, NormInterval::exact(t * (1.0 / t).ln()))
            })
            .collect();
        let rep = big_o_ratio_test("q", &values, |t| t, ParamLimit::ToZero, &th).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn big_o_zero_values_pass() {
        let th = RatioThresholds::default();
        let values: Vec<(f64, NormInterval)> = (1..=6)
            .map(|j| (2f64.powi(-j), NormInterval::exact(0.0)))
            .collect();
        let rep = big_o_ratio_test("q", &values, |t| t, ParamLimit::ToZero, &th).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn proposition1_single_block_with_lipschitz_modulus() {
        // finite spectra are maximally smooth: both statements hold with ω = t
        let input = single_block_input(3, 1.0, 2.0);
        let omega = Modulus::power(1.0).unwrap();
        let n_grid: Vec<u32> = (2..=10).map(|j| 1 << j).collect();
        let out =
            proposition1_experiment(&input, &omega, &n_grid, &RatioThresholds::default()).unwrap();
        assert!(out.all_pass(), "{:?}", out.equivalence);
        // A(n) is constant ν0·a for n >= ν0
        let partial = &out.reports["partial_sum_growth"];
        assert!((partial.grid[0].2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn theorem1_single_block_r1() {
        // E(ρ) = (1-ρ^{ν0}) a: with ω = t the ratios tend to ν0·a
        let input = single_block_input(4, 1.0, 2.0);
        let omega = Modulus::power(1.0).unwrap();
        let rho_grid: Vec<f64> = (1..=10).map(|j| 1.0 - 2f64.powi(-j)).collect();
        let out =
            theorem1_experiment(&input, 1, &omega, &rho_grid, &RatioThresholds::default()).unwrap();
        assert!(out.reports["error_decay"].verdict.passed());
        let last = out.reports["error_decay"].ratios.last().copied().unwrap();
        assert!((last - 4.0).abs() < 0.05, "ratio → ν0 a, got {last}");
    }

    #[test]
    fn theorem2_s1_delegates_to_theorem1_r1() {
        let input = single_block_input(3, 0.7, 1.5);
        let omega = Modulus::power(1.0).unwrap();
        let rho_grid: Vec<f64> = (1..=9).map(|j| 1.0 - 2f64.powi(-j)).collect();
        let th = RatioThresholds::default();
        let a = theorem1_experiment(&input, 1, &omega, &rho_grid, &th).unwrap();
        let b = theorem2_experiment(&input, 1.0, &omega, &rho_grid, &th).unwrap();
        assert_eq!(a.statement_ids, b.statement_ids);
        for id in &a.statement_ids {
            assert_eq!(a.reports[id].grid, b.reports[id].grid, "statement {id}");
            assert_eq!(a.reports[id].ratios, b.reports[id].ratios);
        }
    }

    #[test]
    fn theorem2_single_block_s2_slope_one() {
        // E(ρ) = (1-ρ^{ν0²}) a has slope 1 against (1-ρ)
        let input = single_block_input(3, 1.0, 2.0);
        let omega = Modulus::power(1.0).unwrap();
        let rho_grid: Vec<f64> = (4..=14).map(|j| 1.0 - 2f64.powi(-j)).collect();
        let out =
            theorem2_experiment(&input, 2.0, &omega, &rho_grid, &RatioThresholds::default())
                .unwrap();
        let slope = out.reports["error_decay"].fitted_slope.unwrap();
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn equivalence7_single_block() {
        // ratio = ((1-ρ^{ν0²})/(ν0 (1-ρ^{ν0})))^p → 1
        let input = single_block_input(3, 1.0, 2.0);
        let rho_grid: Vec<f64> = (1..=14).map(|j| 1.0 - 2f64.powi(-j)).collect();
        let rep = equivalence7_experiment(
            &input,
            2.0,
            &rho_grid,
            0.1,
            &RatioThresholds::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        let last = rep.ratios.last().unwrap();
        assert!((last - 1.0).abs() < 1e-3);
    }

    #[test]
    fn equivalence7_s1_is_identically_one() {
        let input = single_block_input(5, 0.4, 2.0);
        let rho_grid: Vec<f64> = (1..=8).map(|j| 1.0 - 2f64.powi(-j)).collect();
        let rep = equivalence7_experiment(
            &input,
            1.0,
            &rho_grid,
            0.1,
            &RatioThresholds::default(),
        )
        .unwrap();
        for &q in &rep.ratios {
            assert!((q - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fejer_diagnostic_inequality_holds() {
        let values: Vec<f64> = (0..=4096u32)
            .map(|nu| if nu == 0 { 0.0 } else { f64::from(nu).powf(-1.0) })
            .collect();
        let profile = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        for &n in &[4u32, 16, 64, 256] {
            let (lhs, rhs) = fejer_abel_transform_diagnostic(&profile, n).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-12), "n={n}: lhs={lhs} rhs={rhs}");
        }
    }
}
