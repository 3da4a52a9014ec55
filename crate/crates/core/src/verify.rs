//! The identity/property verification suite behind `sptri verify`.
//!
//! Every check is deterministic (seeded randomness) and reports one
//! pass/fail line; the CLI exits nonzero if any check fails.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    poisson_of_bracket_derivative_norm, poisson_radial_derivative_norm, poisson_transform,
    psi_derivative_profile, PoissonParams, PsiWeight,
};
use crate::fit::{RatioThresholds, Verdict};
use crate::moduli::{check_condition_b, dyadic_n_grid, Modulus};
use crate::oracle::{fd_radial_derivative, naive_error};
use crate::spectrum::{
    block_count, enumerate_block, BlockProfile, MultiIndex, Spectrum, TailInfo,
};
use crate::summation::{
    approximation_error, binomial_upper_tail_direct, lambda_coeff, multipliers,
    verify_identity_8, verify_inequality_12, SummationMethod,
};

/// One line of the verification summary.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

fn percent_grid() -> Vec<f64> {
    (1..100).map(|i| f64::from(i) / 100.0).collect()
}

/// Runs the whole suite; `quick` trims the heavy sweeps to stay under a few
/// seconds.
pub fn run_verification(quick: bool) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let grid = percent_grid();
    let nu_cap: u32 = if quick { 60 } else { 200 };

    // identity (8): binomial rows sum to 1
    {
        let mut worst = 0.0f64;
        let mut worst_nu = 0;
        for nu in 0..=nu_cap {
            let rep = verify_identity_8(nu, &grid, 1e-11);
            if rep.max_abs_deviation > worst {
                worst = rep.max_abs_deviation;
                worst_nu = nu;
            }
        }
        checks.push(CheckResult::new(
            "identity_8_binomial_row_sums",
            worst <= 1e-11,
            format!("max |Σ - 1| = {worst:.3e} at nu={worst_nu} (tolerance 1e-11)"),
        ));
    }

    // inequality (12), endpoints included
    {
        let mut grid_with_ends = grid.clone();
        grid_with_ends.insert(0, 0.0);
        grid_with_ends.push(1.0);
        let mut worst = f64::NEG_INFINITY;
        let mut worst_at = (0u32, 0u32);
        for nu in 1..=nu_cap {
            for r in 1..=5u32.min(nu) {
                let rep = verify_inequality_12(nu, r, &grid_with_ends, 1e-12).unwrap();
                if rep.max_violation > worst {
                    worst = rep.max_violation;
                    worst_at = (nu, r);
                }
            }
        }
        checks.push(CheckResult::new(
            "inequality_12_binomial_tail_bound",
            worst <= 1e-12,
            format!(
                "max violation = {worst:.3e} at (nu,r)=({},{}) (tolerance 1e-12)",
                worst_at.0, worst_at.1
            ),
        ));
    }

    // λ + complement = 1
    {
        let mut worst = 0.0f64;
        for &nu in &[1u32, 2, 5, 17, 60, nu_cap] {
            for r in 1..=5u32.min(nu) {
                for &rho in &[0.01, 0.2, 0.5, 0.8, 0.99] {
                    let l = lambda_coeff(nu, r, rho).unwrap();
                    let c = binomial_upper_tail_direct(nu, r, rho);
                    worst = worst.max((l + c - 1.0).abs());
                }
            }
        }
        checks.push(CheckResult::new(
            "lambda_complement_split",
            worst <= 1e-11,
            format!("max |λ + complement - 1| = {worst:.3e}"),
        ));
    }

    // λ endpoint behavior
    {
        let zero_ok = lambda_coeff(7, 3, 0.0).unwrap() == 0.0;
        let near_one = lambda_coeff(7, 3, 1.0 - 1e-9).unwrap();
        checks.push(CheckResult::new(
            "lambda_degenerate_endpoints",
            zero_ok && near_one > 1.0 - 1e-6,
            format!("λ(7,3,0)=0: {zero_ok}, λ(7,3,1-1e-9)={near_one}"),
        ));
    }

    // multiplier ranges per method
    let range_methods: [(&str, SummationMethod); 4] = [
        ("partial", SummationMethod::TriangularPartial { n: 9 }),
        ("fejer", SummationMethod::Fejer { n: 9 }),
        ("abel_poisson", SummationMethod::AbelPoisson { rho: 0.97, s: 1.7 }),
        ("taylor", SummationMethod::Taylor { rho: 0.97, r: 4 }),
    ];
    for (name, method) in range_methods {
        let row = multipliers(method, 400).unwrap();
        let ok = row.values.iter().all(|m| (0.0..=1.0).contains(m));
        checks.push(CheckResult::new(
            format!("multiplier_range_{name}"),
            ok,
            "all m_nu within [0,1]",
        ));
    }

    // operator identity: Taylor(ρ,1) ≡ AbelPoisson(ρ,1)
    {
        let top = if quick { 1_000 } else { 10_000 };
        let mut worst = 0.0f64;
        for &rho in &[0.1, 0.5, 0.9, 1.0 - 2f64.powi(-10)] {
            let t = multipliers(SummationMethod::Taylor { rho, r: 1 }, top).unwrap();
            let a = multipliers(SummationMethod::AbelPoisson { rho, s: 1.0 }, top).unwrap();
            for nu in 0..=top as usize {
                worst = worst.max((t.values[nu] - a.values[nu]).abs());
            }
        }
        checks.push(CheckResult::new(
            "operator_identity_taylor1_abel_poisson1",
            worst <= 1e-15,
            format!("max row difference = {worst:.3e} up to nu={top} (tolerance 1e-15)"),
        ));
    }

    // two-route identity (3) on random profiles
    {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let len = if quick { 200 } else { 1_000 };
        for r in 1..=3u32 {
            let mut worst = 0.0f64;
            for _ in 0..5 {
                let values: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0)).collect();
                let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
                for &rho in &[0.3, 0.9, 0.999] {
                    let params = PoissonParams::new(rho, r).unwrap();
                    let direct = poisson_of_bracket_derivative_norm(&f, params).lower;
                    let composed = poisson_transform(
                        &psi_derivative_profile(&f, &PsiWeight::falling_factorial(r)).unwrap(),
                        rho,
                    )
                    .unwrap()
                    .sp_norm()
                    .lower;
                    worst = worst.max((direct - composed).abs() / composed.max(1e-300));
                }
            }
            checks.push(CheckResult::new(
                format!("poisson_bracket_two_route_r{r}"),
                worst <= 1e-12,
                format!("max relative gap = {worst:.3e} (tolerance 1e-12)"),
            ));
        }
    }

    // finite-difference oracle: agreement and convergence order
    {
        let values: Vec<f64> = (0..25u32).map(|nu| 0.9f64.powi(nu as i32)).collect();
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        for r in 1..=2u32 {
            let analytic =
                poisson_radial_derivative_norm(&f, PoissonParams::new(0.5, r).unwrap()).lower;
            let fd = fd_radial_derivative(&f, r, 0.5, 1e-4).unwrap();
            let agree = (fd - analytic).abs() / analytic;
            let d1 = (fd_radial_derivative(&f, r, 0.5, 2e-3).unwrap() - analytic).abs();
            let d2 = (fd_radial_derivative(&f, r, 0.5, 1e-3).unwrap() - analytic).abs();
            let ratio = d2 / d1;
            checks.push(CheckResult::new(
                format!("fd_radial_derivative_r{r}"),
                agree < 1e-6 && (0.2..=0.3).contains(&ratio),
                format!("relative gap {agree:.3e}, halving ratio {ratio:.3} (expect ~0.25)"),
            ));
        }
    }

    // oracle agreement: closed error functionals vs the naive spectrum route
    {
        let runs = if quick { 20 } else { 100 };
        let mut rng = ChaCha8Rng::seed_from_u64(141);
        let mut worst = [0.0f64; 4];
        for _ in 0..runs {
            let f = random_exact_spectrum(&mut rng);
            let p = *[1.0, 1.5, 2.0, 3.0].iter().nth(rng.gen_range(0..4)).unwrap();
            let profile = f.profile(p).unwrap();
            let methods = random_methods(&mut rng);
            for (slot, method) in methods.into_iter().enumerate() {
                let main = approximation_error(method, &profile).unwrap().lower;
                let naive = naive_error(method, &f, p).unwrap();
                let rel = (main - naive).abs() / naive.max(1e-30);
                worst[slot] = worst[slot].max(rel);
            }
        }
        for (slot, name) in ["partial", "fejer", "abel_poisson", "taylor"]
            .iter()
            .enumerate()
        {
            checks.push(CheckResult::new(
                format!("oracle_error_agreement_{name}"),
                worst[slot] <= 1e-12,
                format!(
                    "max relative gap over {runs} random spectra = {:.3e} (tolerance 1e-12)",
                    worst[slot]
                ),
            ));
        }
    }

    // block enumeration against the closed-form count
    for d in 1..=4u32 {
        let top = if quick { 12 } else { 40 };
        let mut ok = true;
        for nu in 0..=top {
            let n = block_count(d, nu).unwrap();
            if n > 2_000_000 {
                break;
            }
            if n as usize != enumerate_block(d, nu).unwrap().len() {
                ok = false;
            }
        }
        checks.push(CheckResult::new(
            format!("block_count_vs_enumeration_d{d}"),
            ok,
            format!("counts match for nu <= {top}"),
        ));
    }

    // profile route equals the spectrum norm route
    {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_exact_spectrum(&mut rng);
        let p = 1.7;
        let via_profile = f.profile(p).unwrap().sp_norm().lower;
        let direct = crate::oracle::naive_sp_norm(&f, p);
        let rel = (via_profile - direct).abs() / direct;
        checks.push(CheckResult::new(
            "sp_norm_profile_consistency",
            rel <= 1e-13,
            format!("relative gap {rel:.3e}"),
        ));
    }

    // sine form vs general form on a Y spectrum
    {
        let f = Spectrum::exact(
            2,
            [
                (MultiIndex::new(vec![1, 2]).unwrap(), Complex64::new(0.4, 0.1)),
                (MultiIndex::new(vec![3, 0]).unwrap(), Complex64::new(0.2, 0.0)),
                (MultiIndex::new(vec![-1, -1]).unwrap(), Complex64::new(0.0, 0.5)),
            ],
        )
        .unwrap();
        let mut worst = 0.0f64;
        for &h in &[0.05, 0.3, 1.1] {
            let a = f.shift_difference_norm(h, 2.0).unwrap().lower;
            let b = f.shift_difference_norm_general(h, 2.0).unwrap().lower;
            worst = worst.max((a - b).abs() / b.max(1e-300));
        }
        checks.push(CheckResult::new(
            "shift_norm_sine_vs_general",
            worst <= 1e-12,
            format!("max relative gap {worst:.3e}"),
        ));
    }

    // geometric family closed-form norm
    {
        let inst = crate::families::FamilySpec::Geometric { q: 0.5, d: 1 }
            .instantiate(1.0, 64)
            .unwrap();
        let norm = inst.profile.sp_norm();
        let ok = norm.lower <= 3.0 && 3.0 <= norm.upper + 1e-12 && (norm.upper - 3.0).abs() < 1e-9;
        checks.push(CheckResult::new(
            "geometric_norm_closed_form",
            ok,
            format!("interval [{}, {}] must contain 3", norm.lower, norm.upper),
        ));
    }

    // condition (B): power modulus passes, log modulus fails
    {
        let n_grid = dyadic_n_grid(2..=if quick { 10 } else { 12 });
        let pass = check_condition_b(&Modulus::power(0.5).unwrap(), &n_grid, 256).unwrap();
        checks.push(CheckResult::new(
            "condition_b_power_half",
            pass.verdict == Verdict::Pass,
            pass.detail.clone(),
        ));
        let fail = check_condition_b(&Modulus::power_log(0.0, -1.0).unwrap(), &n_grid, 256)
            .unwrap();
        checks.push(CheckResult::new(
            "condition_b_log_modulus_fails",
            fail.verdict == Verdict::Fail,
            fail.detail.clone(),
        ));
    }

    // Poisson derivative norm is nondecreasing in ρ
    {
        let values: Vec<f64> = (0..60u32).map(|nu| 0.85f64.powi(nu as i32)).collect();
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        let mut ok = true;
        for r in 0..=2u32 {
            let mut prev = -1.0;
            for j in 1..=12 {
                let rho = f64::from(j) / 13.0;
                let v = poisson_radial_derivative_norm(&f, PoissonParams::new(rho, r).unwrap());
                if v.lower < prev - 1e-14 {
                    ok = false;
                }
                prev = v.lower;
            }
        }
        checks.push(CheckResult::new(
            "poisson_derivative_monotone_in_rho",
            ok,
            "lower endpoints nondecreasing on a ρ sweep for r <= 2",
        ));
    }

    // f^{(1)} = f_{[1]}
    {
        let values: Vec<f64> = (0..30u32).map(|nu| 1.0 / (1.0 + f64::from(nu))).collect();
        let f = BlockProfile::new(1.5, 1, values, TailInfo::exact()).unwrap();
        let a = psi_derivative_profile(&f, &PsiWeight::radial_power(1.0).unwrap()).unwrap();
        let b = psi_derivative_profile(&f, &PsiWeight::falling_factorial(1)).unwrap();
        checks.push(CheckResult::new(
            "first_derivatives_coincide",
            a.values() == b.values(),
            "radial_power(1) equals falling_factorial(1) on profiles",
        ));
    }

    // relation (7) on a single block: ratio → 1
    {
        let mut values = vec![0.0; 4];
        values[3] = 1.0;
        let input = crate::experiments::ExperimentInput::new(
            "single block",
            BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap(),
            true,
            None,
        );
        let rho_grid: Vec<f64> = (1..=12).map(|j| 1.0 - 2f64.powi(-j)).collect();
        let rep = crate::experiments::equivalence7_experiment(
            &input,
            2.0,
            &rho_grid,
            0.1,
            &RatioThresholds::default(),
        )
        .unwrap();
        let last = rep.ratios.last().copied().unwrap_or(f64::NAN);
        checks.push(CheckResult::new(
            "equivalence_7_single_block",
            rep.verdict == Verdict::Pass && (last - 1.0).abs() < 1e-3,
            format!("final ratio {last}"),
        ));
    }

    // error functional edge cases
    {
        let f = BlockProfile::new(2.0, 1, vec![0.3, 0.2, 0.1], TailInfo::exact()).unwrap();
        let zero = approximation_error(SummationMethod::TriangularPartial { n: 5 }, &f)
            .unwrap()
            .upper
            == 0.0;
        let a = BlockProfile::new(2.0, 1, vec![0.0, 0.1, 0.2], TailInfo::exact()).unwrap();
        let b = BlockProfile::new(2.0, 1, vec![0.0, 0.2, 0.3], TailInfo::exact()).unwrap();
        let mono = approximation_error(SummationMethod::Fejer { n: 2 }, &a).unwrap().lower
            <= approximation_error(SummationMethod::Fejer { n: 2 }, &b).unwrap().lower;
        checks.push(CheckResult::new(
            "error_functional_edge_cases",
            zero && mono,
            "covered support gives zero error; domination is monotone",
        ));
    }

    checks
}

/// Random finitely supported spectrum: d <= 3, orders <= 12, ~10-60 coeffs.
pub fn random_exact_spectrum(rng: &mut ChaCha8Rng) -> Spectrum {
    let d = rng.gen_range(1..=3u32);
    let count = rng.gen_range(10..=60usize);
    let mut coeffs = Vec::with_capacity(count);
    for _ in 0..count {
        let entries: Vec<i32> = (0..d).map(|_| rng.gen_range(-6i32..=6)).collect();
        let order: u32 = entries.iter().map(|k| k.unsigned_abs()).sum();
        if order > 12 {
            continue;
        }
        let modulus = rng.gen_range(0.1..2.0);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        coeffs.push((
            MultiIndex::new(entries).unwrap(),
            Complex64::new(modulus * theta.cos(), modulus * theta.sin()),
        ));
    }
    Spectrum::exact(d, coeffs).unwrap()
}

/// One method of each kind with parameters drawn from the well-conditioned
/// ranges (ρ in [0.1, 0.9], r <= 3, s in [1, 3]).
pub fn random_methods(rng: &mut ChaCha8Rng) -> [SummationMethod; 4] {
    let n = rng.gen_range(1..=20u32);
    let rho = rng.gen_range(0.1..=0.9f64);
    let s = rng.gen_range(1.0..=3.0f64);
    let r = rng.gen_range(1..=3u32);
    [
        SummationMethod::TriangularPartial { n },
        SummationMethod::Fejer { n },
        SummationMethod::AbelPoisson { rho, s },
        SummationMethod::Taylor { rho, r },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_is_all_green() {
        let checks = run_verification(true);
        assert!(checks.len() >= 25, "expected a full suite, got {}", checks.len());
        for c in &checks {
            assert!(c.pass, "check '{}' failed: {}", c.name, c.detail);
        }
    }
}
