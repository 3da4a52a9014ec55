//! The four triangular summation methods and their exact S^p error
//! functionals on block profiles.
//!
//! Every method is a diagonal multiplier `m_ν ∈ [0,1]` on triangular blocks:
//!
//! * partial sum `S^△_n`: `m_ν = 1` for `ν <= n`, else 0;
//! * Fejér `σ^△_n`: `m_ν = 1 - ν/(n+1)` for `ν <= n`, else 0;
//! * generalized Abel–Poisson `P^△_{ρ,s}`: `m_0 = 1`, `m_ν = ρ^{ν^s}`;
//! * Abel–Poisson–Taylor `A^△_{ρ,r}`: `m_ν = 1` for `ν <= r-1` and
//!   `m_ν = λ_{ν,r}(ρ) = Σ_{k=0}^{r-1} C(ν,k)(1-ρ)^k ρ^{ν-k}` for `ν >= r`.
//!
//! `λ` is evaluated from log-domain terms accumulated in increasing
//! magnitude. The complement `1 - λ_{ν,r}` — the quantity the error
//! functionals actually need — is summed directly as
//! `Σ_{k=r}^{ν} C(ν,k)(1-ρ)^k ρ^{ν-k}` so that no cancellation against 1
//! occurs; beyond a term-count threshold it switches to the regularized
//! incomplete beta function (the sum is a binomial upper tail).

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::numeric::{
    ln_binomial, nu_pow, one_minus_rho_pow, pow_p, sorted_kahan_sum, KahanSum,
};
use crate::spectrum::{BlockProfile, NormInterval, PMass, Spectrum, SpectrumTail, TailInfo};

/// Term-count threshold below which binomial tails are summed directly.
const DIRECT_TERM_LIMIT: u32 = 512;

/// One of the four triangular summation methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SummationMethod {
    TriangularPartial { n: u32 },
    Fejer { n: u32 },
    AbelPoisson { rho: f64, s: f64 },
    Taylor { rho: f64, r: u32 },
}

impl SummationMethod {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::TriangularPartial { .. } => Ok(()),
            Self::Fejer { n } => {
                if n >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("Fejér needs n >= 1".into()))
                }
            }
            Self::AbelPoisson { rho, s } => {
                if !(0.0..1.0).contains(&rho) {
                    Err(Error::InvalidParameter("rho must be in [0,1)".into()))
                } else if !(s > 0.0) {
                    Err(Error::InvalidParameter("s must be > 0".into()))
                } else {
                    Ok(())
                }
            }
            Self::Taylor { rho, r } => {
                if !(0.0..1.0).contains(&rho) {
                    Err(Error::InvalidParameter("rho must be in [0,1)".into()))
                } else if r < 1 {
                    Err(Error::InvalidParameter("Taylor needs r >= 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The block multiplier `m_ν`.
    pub fn multiplier(&self, nu: u32) -> f64 {
        match *self {
            Self::TriangularPartial { n } => {
                if nu <= n {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Fejer { n } => {
                if nu <= n {
                    f64::from(n + 1 - nu) / f64::from(n + 1)
                } else {
                    0.0
                }
            }
            Self::AbelPoisson { rho, s } => {
                if nu == 0 {
                    1.0
                } else {
                    crate::numeric::pow_rho(rho, nu_pow(nu, s))
                }
            }
            Self::Taylor { rho, r } => {
                if nu < r {
                    1.0
                } else {
                    lambda_coeff(nu, r, rho).expect("validated Taylor parameters")
                }
            }
        }
    }

    /// `1 - m_ν`, computed without cancellation.
    pub fn error_factor(&self, nu: u32) -> f64 {
        match *self {
            Self::TriangularPartial { n } => {
                if nu <= n {
                    0.0
                } else {
                    1.0
                }
            }
            Self::Fejer { n } => {
                if nu <= n {
                    f64::from(nu) / f64::from(n + 1)
                } else {
                    1.0
                }
            }
            Self::AbelPoisson { rho, s } => {
                if nu == 0 {
                    0.0
                } else {
                    one_minus_rho_pow(rho, nu_pow(nu, s))
                }
            }
            Self::Taylor { rho, r } => {
                if nu < r {
                    0.0
                } else {
                    one_minus_lambda(nu, r, rho)
                }
            }
        }
    }

    /// Methods with finitely supported multiplier rows produce exact results.
    pub fn finite_support(&self) -> Option<u32> {
        match *self {
            Self::TriangularPartial { n } | Self::Fejer { n } => Some(n),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Self::TriangularPartial { n } => format!("S_triangle(n={n})"),
            Self::Fejer { n } => format!("sigma_triangle(n={n})"),
            Self::AbelPoisson { rho, s } => format!("P_triangle(rho={rho},s={s})"),
            Self::Taylor { rho, r } => format!("A_triangle(rho={rho},r={r})"),
        }
    }
}

/// A realized multiplier row `m_0..m_{up_to}`.
#[derive(Debug, Clone)]
pub struct MultiplierRow {
    pub method: SummationMethod,
    pub values: Vec<f64>,
}

/// `λ_{ν,r}(ρ) = Σ_{k=0}^{r-1} C(ν,k)(1-ρ)^k ρ^{ν-k}`, for `ν >= r >= 1`,
/// `0 <= ρ < 1`. Result lies in `[0,1]` (`λ = 0` exactly at `ρ = 0`).
pub fn lambda_coeff(nu: u32, r: u32, rho: f64) -> Result<f64> {
    if r < 1 || nu < r {
        return Err(Error::InvalidParameter(format!(
            "lambda needs nu >= r >= 1, got nu={nu}, r={r}"
        )));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "lambda needs rho in [0,1), got {rho}"
        )));
    }
    if rho == 0.0 {
        // every term carries ρ^{ν-k} with ν-k >= ν-r+1 >= 1
        return Ok(0.0);
    }
    let ln_rho = crate::numeric::ln_rho(rho);
    let ln_one_minus = (-rho).ln_1p();
    let mut terms: Vec<f64> = Vec::with_capacity(r as usize);
    for k in 0..r {
        let ln_term = ln_binomial(nu, k)
            + f64::from(k) * ln_one_minus
            + f64::from(nu - k) * ln_rho;
        terms.push(ln_term.exp());
    }
    Ok(sorted_kahan_sum(&mut terms).min(1.0))
}

/// `1 - λ_{ν,r}(ρ) = Σ_{k=r}^{ν} C(ν,k)(1-ρ)^k ρ^{ν-k}` (identity (8) split),
/// computed without subtracting from 1.
pub fn one_minus_lambda(nu: u32, r: u32, rho: f64) -> f64 {
    debug_assert!(nu >= r && r >= 1);
    if rho == 0.0 {
        return 1.0;
    }
    if r == 1 {
        // the complement of the single k=0 term
        return one_minus_rho_pow(rho, f64::from(nu));
    }
    if nu - r + 1 <= DIRECT_TERM_LIMIT {
        binomial_upper_tail_direct(nu, r, rho)
    } else {
        // P[Bin(ν, 1-ρ) >= r] = I_{1-ρ}(r, ν-r+1)
        beta_reg(f64::from(r), f64::from(nu - r + 1), 1.0 - rho)
    }
}

/// Direct log-domain evaluation of `Σ_{k=r}^{ν} C(ν,k)(1-ρ)^k ρ^{ν-k}`,
/// terms accumulated in increasing magnitude. Handles the endpoint values
/// `ρ ∈ {0, 1}` exactly.
pub fn binomial_upper_tail_direct(nu: u32, r: u32, rho: f64) -> f64 {
    if rho == 0.0 {
        // only the k=ν term survives: C(ν,ν)·1^ν·0^0
        return 1.0;
    }
    if rho == 1.0 {
        // every term k >= r >= 1 carries (1-ρ)^k = 0
        return if r == 0 { 1.0 } else { 0.0 };
    }
    let ln_rho = crate::numeric::ln_rho(rho);
    let ln_one_minus = (-rho).ln_1p();
    let mut terms: Vec<f64> = Vec::with_capacity((nu - r + 1) as usize);
    for k in r..=nu {
        let ln_term = ln_binomial(nu, k)
            + f64::from(k) * ln_one_minus
            + f64::from(nu - k) * ln_rho;
        terms.push(ln_term.exp());
    }
    sorted_kahan_sum(&mut terms).min(1.0)
}

/// The multiplier row of a method up to order `up_to`.
pub fn multipliers(method: SummationMethod, up_to: u32) -> Result<MultiplierRow> {
    method.validate()?;
    let values = (0..=up_to).map(|nu| method.multiplier(nu)).collect();
    Ok(MultiplierRow { method, values })
}

/// Applies a summation method to a spectrum (block `ν` scaled by `m_ν`).
pub fn apply_spectrum(method: SummationMethod, f: &Spectrum) -> Result<Spectrum> {
    method.validate()?;
    let tail = match method.finite_support() {
        // everything beyond n is annihilated
        Some(_) => SpectrumTail::Exact,
        None => match f.tail() {
            SpectrumTail::Exact => SpectrumTail::Exact,
            // multipliers are within [0,1]: the certificate survives
            other => other,
        },
    };
    Ok(f.scale_blocks(|nu| method.multiplier(nu), tail))
}

/// Applies a summation method to a block profile.
pub fn apply_profile(method: SummationMethod, f: &BlockProfile) -> Result<BlockProfile> {
    method.validate()?;
    if let Some(n) = method.finite_support() {
        return f.truncated(n, |nu| method.multiplier(nu));
    }
    let p = f.p();
    let old = f.tail();
    let n1 = f.cutoff() + 1;
    let mass = match old.mass {
        PMass::Zero => PMass::Zero,
        PMass::Bounded(t) => {
            // both infinite methods have multipliers decreasing in ν
            let m = method.multiplier(n1);
            PMass::Bounded(t * pow_p(m, p))
        }
        PMass::Unknown => PMass::Unknown,
    };
    let envelope = old.envelope.map(|env| match method {
        SummationMethod::AbelPoisson { rho, s } => {
            if s >= 1.0 {
                // ρ^{ν^s} <= ρ^ν for s >= 1
                env.scaled(1.0, 0.0, rho)
            } else {
                env
            }
        }
        SummationMethod::Taylor { rho, r } => {
            // λ_{ν,r} <= r q^ν ν^{r-1}, q = max(ρ, 1-ρ)
            let q = rho.max(1.0 - rho);
            env.scaled(f64::from(r), f64::from(r - 1), q)
        }
        _ => env,
    });
    f.scale_blocks(|nu| method.multiplier(nu), TailInfo { mass, envelope })
}

/// `‖f - method(f)‖_{S^p}` as an interval, from the closed error functionals:
///
/// * partial sum: `Σ_{ν>n} a_ν^p`;
/// * Fejér (decomposition (4)): `(n+1)^{-p} Σ_{ν<=n} (ν a_ν)^p + Σ_{ν>n} a_ν^p`;
/// * Abel–Poisson: `Σ_{ν>=1} (1-ρ^{ν^s})^p a_ν^p`;
/// * Taylor: `Σ_{ν>=r} (1-λ_{ν,r})^p a_ν^p`.
///
/// The error multipliers never exceed 1, so the profile tail mass certifies
/// the upper endpoint.
pub fn approximation_error(method: SummationMethod, f: &BlockProfile) -> Result<NormInterval> {
    method.validate()?;
    let p = f.p();
    let head = match method {
        SummationMethod::Fejer { n } => {
            // the two sums of the decomposition, kept separate
            let mut weighted = KahanSum::new();
            for nu in 1..=n.min(f.cutoff()) {
                let a = f.value(nu);
                if a != 0.0 {
                    weighted.add(pow_p(f64::from(nu) * a, p));
                }
            }
            let mut beyond = KahanSum::new();
            for nu in (n + 1)..=f.cutoff() {
                let a = f.value(nu);
                if a != 0.0 {
                    beyond.add(pow_p(a, p));
                }
            }
            weighted.value() / pow_p(f64::from(n + 1), p) + beyond.value()
        }
        _ => {
            let mut acc = KahanSum::new();
            for nu in 1..=f.cutoff() {
                let a = f.value(nu);
                if a == 0.0 {
                    continue;
                }
                let e = method.error_factor(nu);
                if e != 0.0 {
                    acc.add(pow_p(e * a, p));
                }
            }
            acc.value()
        }
    };
    let lower = head.powf(1.0 / p);
    let upper = match f.tail_p_mass() {
        Some(t) => (head + t).powf(1.0 / p),
        None => f64::INFINITY,
    };
    Ok(NormInterval { lower, upper })
}

/// Verification report for identity (8): `Σ_{k=0}^{ν} C(ν,k)(1-ρ)^k ρ^{ν-k} = 1`.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub nu: u32,
    pub max_abs_deviation: f64,
    pub worst_rho: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks identity (8) over a grid of `ρ` values.
pub fn verify_identity_8(nu: u32, rho_grid: &[f64], tolerance: f64) -> IdentityReport {
    let mut max_abs_deviation = 0.0f64;
    let mut worst_rho = f64::NAN;
    for &rho in rho_grid {
        let total = if rho == 0.0 || rho == 1.0 {
            1.0
        } else {
            let ln_rho = crate::numeric::ln_rho(rho);
            let ln_one_minus = (-rho).ln_1p();
            let mut terms: Vec<f64> = (0..=nu)
                .map(|k| {
                    (ln_binomial(nu, k)
                        + f64::from(k) * ln_one_minus
                        + f64::from(nu - k) * ln_rho)
                        .exp()
                })
                .collect();
            sorted_kahan_sum(&mut terms)
        };
        let dev = (total - 1.0).abs();
        if dev > max_abs_deviation {
            max_abs_deviation = dev;
            worst_rho = rho;
        }
    }
    IdentityReport {
        nu,
        max_abs_deviation,
        worst_rho,
        tolerance,
        pass: max_abs_deviation <= tolerance,
    }
}

/// Verification report for inequality (12):
/// `Σ_{k=r}^{ν} C(ν,k)(1-ρ)^k ρ^{ν-k} <= C(ν,r)(1-ρ)^r`.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub nu: u32,
    pub r: u32,
    /// Maximum of `LHS - RHS` over the grid (non-violation is `<= 0`).
    pub max_violation: f64,
    pub worst_rho: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks inequality (12) over a grid of `ρ` values (the endpoints
/// `ρ ∈ {0,1}` are meaningful and handled exactly).
pub fn verify_inequality_12(nu: u32, r: u32, rho_grid: &[f64], tolerance: f64) -> Result<InequalityReport> {
    if r < 1 || nu < r {
        return Err(Error::InvalidParameter(format!(
            "inequality (12) needs nu >= r >= 1, got nu={nu}, r={r}"
        )));
    }
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_rho = f64::NAN;
    for &rho in rho_grid {
        let lhs = binomial_upper_tail_direct(nu, r, rho);
        let rhs = (ln_binomial(nu, r) + f64::from(r) * (-rho).ln_1p()).exp();
        let rhs = if rho == 1.0 { 0.0 } else { rhs };
        let violation = lhs - rhs;
        if violation > max_violation {
            max_violation = violation;
            worst_rho = rho;
        }
    }
    Ok(InequalityReport {
        nu,
        r,
        max_violation,
        worst_rho,
        tolerance,
        pass: max_violation <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::TailInfo;

    fn profile(values: Vec<f64>, p: f64) -> BlockProfile {
        BlockProfile::new(p, 1, values, TailInfo::exact()).unwrap()
    }

    #[test]
    fn lambda_r1_is_rho_pow() {
        let l = lambda_coeff(3, 1, 0.5).unwrap();
        assert!((l - 0.125).abs() < 1e-16);
    }

    #[test]
    fn lambda_nu_equals_r() {
        // λ_{r,r} = 1 - (1-ρ)^r
        for r in 1..=5u32 {
            for &rho in &[0.1, 0.3, 0.7, 0.95] {
                let l = lambda_coeff(r, r, rho).unwrap();
                let expected = 1.0 - (1.0f64 - rho).powi(r as i32);
                assert!((l - expected).abs() < 1e-14, "r={r} rho={rho}");
            }
        }
    }

    #[test]
    fn lambda_nu4_r2_half() {
        // direct summation: (1 + 4)·0.5^4 = 0.3125
        let l = lambda_coeff(4, 2, 0.5).unwrap();
        assert!((l - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn lambda_at_rho_zero_and_near_one() {
        assert_eq!(lambda_coeff(5, 2, 0.0).unwrap(), 0.0);
        let l = lambda_coeff(5, 2, 1.0 - 1e-12).unwrap();
        assert!(l > 1.0 - 1e-10);
    }

    #[test]
    fn lambda_complement_split() {
        // λ + Σ_{k=r}^{ν} C(ν,k)(1-ρ)^k ρ^{ν-k} = 1 (identity (8) split)
        for &nu in &[1u32, 2, 5, 17, 60, 200] {
            for r in 1..=5u32.min(nu) {
                for &rho in &[0.01, 0.2, 0.5, 0.8, 0.99] {
                    let l = lambda_coeff(nu, r, rho).unwrap();
                    let c = binomial_upper_tail_direct(nu, r, rho);
                    assert!((l + c - 1.0).abs() < 1e-11, "nu={nu} r={r} rho={rho}");
                }
            }
        }
    }

    #[test]
    fn one_minus_lambda_consistent_with_beta_reg() {
        // direct sum against the incomplete-beta route, both regimes
        for &(nu, r) in &[(300u32, 2u32), (800, 3), (2000, 5)] {
            for &rho in &[0.3, 0.9, 0.999] {
                let direct = binomial_upper_tail_direct(nu, r, rho);
                let via_beta = beta_reg(f64::from(r), f64::from(nu - r + 1), 1.0 - rho);
                let rel = (direct - via_beta).abs() / direct.max(1e-300);
                assert!(rel < 1e-11, "nu={nu} r={r} rho={rho} rel={rel}");
            }
        }
    }

    #[test]
    fn one_minus_lambda_lower_bound_single_term() {
        // 1 - λ_{ν,r} >= C(ν,r)(1-ρ)^r ρ^{ν-r} (the k=r term)
        for &nu in &[3u32, 10, 50, 150] {
            for r in 1..=3u32 {
                for &rho in &[0.2, 0.6, 0.9] {
                    let c = one_minus_lambda(nu, r, rho);
                    let single = crate::numeric::binomial_f64(nu, r)
                        * (1.0f64 - rho).powi(r as i32)
                        * rho.powi((nu - r) as i32);
                    assert!(c >= single * (1.0 - 1e-12), "nu={nu} r={r} rho={rho}");
                }
            }
        }
    }

    #[test]
    fn multiplier_rows() {
        let row = multipliers(SummationMethod::Fejer { n: 3 }, 6).unwrap();
        assert_eq!(&row.values[..5], &[1.0, 0.75, 0.5, 0.25, 0.0]);
        let row = multipliers(SummationMethod::TriangularPartial { n: 0 }, 3).unwrap();
        assert_eq!(&row.values[..], &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn taylor_row_r1_equals_abel_poisson_s1() {
        for &rho in &[0.1, 0.5, 0.9, 0.999] {
            let t = multipliers(SummationMethod::Taylor { rho, r: 1 }, 200).unwrap();
            let a = multipliers(SummationMethod::AbelPoisson { rho, s: 1.0 }, 200).unwrap();
            for nu in 0..=200usize {
                assert!(
                    (t.values[nu] - a.values[nu]).abs() <= 1e-15,
                    "nu={nu} rho={rho}"
                );
            }
        }
    }

    #[test]
    fn multipliers_stay_in_unit_interval_and_approach_one() {
        let methods = [
            SummationMethod::TriangularPartial { n: 7 },
            SummationMethod::Fejer { n: 7 },
            SummationMethod::AbelPoisson { rho: 0.99, s: 2.0 },
            SummationMethod::Taylor { rho: 0.99, r: 3 },
        ];
        for m in methods {
            let row = multipliers(m, 300).unwrap();
            assert!(row.values.iter().all(|v| (0.0..=1.0).contains(v)), "{m:?}");
        }
        // fixed ν, ρ → 1−: m_ν → 1 for the infinite methods
        for nu in [1u32, 5, 20] {
            let rho = 1.0 - 2f64.powi(-20);
            let ap = SummationMethod::AbelPoisson { rho, s: 2.0 }.multiplier(nu);
            let ty = SummationMethod::Taylor { rho, r: 2 }.multiplier(nu);
            assert!(1.0 - ap < 1e-3, "nu={nu}");
            assert!(1.0 - ty < 1e-3, "nu={nu}");
        }
    }

    #[test]
    fn apply_values() {
        let f = profile(vec![0.5, 0.0, 1.0, 0.25], 2.0);
        // truncation
        let g = apply_profile(SummationMethod::TriangularPartial { n: 2 }, &f).unwrap();
        assert_eq!(g.values(), &[0.5, 0.0, 1.0]);
        assert!(g.tail().is_exact());
        // Fejér single block
        let g = apply_profile(SummationMethod::Fejer { n: 3 }, &f).unwrap();
        assert_eq!(g.value(2), 0.5);
        // Abel-Poisson ρ=0.9, s=2 on block 2: 0.9^4
        let g = apply_profile(SummationMethod::AbelPoisson { rho: 0.9, s: 2.0 }, &f).unwrap();
        assert!((g.value(2) - 0.9f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn taylor_apply_equals_abel_poisson_apply_at_order_one() {
        let f = profile(vec![0.1, 0.9, 0.0, 0.4, 0.2, 0.7], 1.5);
        for &rho in &[0.2, 0.8] {
            let a = apply_profile(SummationMethod::Taylor { rho, r: 1 }, &f).unwrap();
            let b = apply_profile(SummationMethod::AbelPoisson { rho, s: 1.0 }, &f).unwrap();
            assert_eq!(a.values(), b.values());
        }
    }

    #[test]
    fn error_partial_sum_covering_support_is_zero() {
        let f = profile(vec![0.5, 0.25, 0.125], 2.0);
        let e = approximation_error(SummationMethod::TriangularPartial { n: 5 }, &f).unwrap();
        assert_eq!(e, NormInterval::exact(0.0));
    }

    #[test]
    fn error_fejer_single_block() {
        // Fejér n=3, single block ν=2, a=1, p=1: error = 2/4
        let f = profile(vec![0.0, 0.0, 1.0], 1.0);
        let e = approximation_error(SummationMethod::Fejer { n: 3 }, &f).unwrap();
        assert!((e.lower - 0.5).abs() < 1e-15);
    }

    #[test]
    fn error_taylor_single_block_cross_checked() {
        // (1 - λ_{ν,r}) a_ν against the direct complement sum
        for &(nu, r) in &[(4u32, 2u32), (9, 3), (30, 1)] {
            for &rho in &[0.3, 0.7] {
                let mut values = vec![0.0; nu as usize + 1];
                values[nu as usize] = 0.8;
                let f = profile(values, 1.0);
                let e = approximation_error(SummationMethod::Taylor { rho, r }, &f).unwrap();
                let expected = binomial_upper_tail_direct(nu, r, rho) * 0.8;
                let rel = (e.lower - expected).abs() / expected;
                assert!(rel < 1e-13, "nu={nu} r={r} rho={rho}");
            }
        }
    }

    #[test]
    fn error_monotone_under_profile_domination() {
        let a = profile(vec![0.0, 0.1, 0.2, 0.05, 0.3], 2.0);
        let b = profile(vec![0.0, 0.2, 0.2, 0.10, 0.4], 2.0);
        let methods = [
            SummationMethod::TriangularPartial { n: 2 },
            SummationMethod::Fejer { n: 3 },
            SummationMethod::AbelPoisson { rho: 0.6, s: 1.5 },
            SummationMethod::Taylor { rho: 0.6, r: 2 },
        ];
        for m in methods {
            let ea = approximation_error(m, &a).unwrap();
            let eb = approximation_error(m, &b).unwrap();
            assert!(ea.lower <= eb.lower + 1e-15, "{m:?}");
        }
    }

    #[test]
    fn identity_8_small_and_large() {
        let grid: Vec<f64> = (1..100).map(|i| f64::from(i) / 100.0).collect();
        assert!(verify_identity_8(0, &grid, 1e-15).pass);
        let rep = verify_identity_8(4, &[0.3], 1e-13);
        assert!(rep.pass, "deviation {}", rep.max_abs_deviation);
        let rep = verify_identity_8(60, &grid, 1e-11);
        assert!(rep.pass, "deviation {}", rep.max_abs_deviation);
    }

    #[test]
    fn inequality_12_holds_with_endpoints() {
        let mut grid: Vec<f64> = (1..100).map(|i| f64::from(i) / 100.0).collect();
        grid.push(0.0);
        grid.push(1.0);
        for &(nu, r) in &[(1u32, 1u32), (5, 2), (60, 3), (200, 5)] {
            let rep = verify_inequality_12(nu, r, &grid, 1e-12).unwrap();
            assert!(rep.pass, "nu={nu} r={r} violation={}", rep.max_violation);
        }
    }

    #[test]
    fn inequality_12_nu5_r2_values() {
        // direct summation at ρ=0.7: LHS = P[Bin(5,0.3) >= 2], RHS = 10·0.09
        let lhs = binomial_upper_tail_direct(5, 2, 0.7);
        assert!((lhs - 0.47178).abs() < 1e-5);
        assert!(lhs <= 0.9);
    }

    #[test]
    fn faulty_lambda_is_caught_by_the_split_check() {
        // a λ missing its top term violates the identity-(8) split
        let nu = 12u32;
        let r = 3u32;
        let rho = 0.4f64;
        let truncated_lambda = lambda_coeff(nu, r - 1, rho).unwrap(); // r-1 terms only
        let complement = binomial_upper_tail_direct(nu, r, rho);
        assert!((truncated_lambda + complement - 1.0).abs() > 1e-3);
    }
}
