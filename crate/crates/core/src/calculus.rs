//! ψ-derivatives and the Poisson integral in spectral form.
//!
//! Both derivative families act diagonally on triangular blocks: the radial
//! power family `ψ(k) = ν^{-r}` and the falling-factorial family
//! `ψ(k) = (ν-r)!/ν!`. Taking the ψ-derivative divides each coefficient by
//! `ψ(ν)`; blocks where ψ vanishes are zeroed, which picks the canonical
//! representative of the equivalence class (the derivative is only defined
//! up to arbitrary content on the zero set).
//!
//! The Poisson integral multiplies block `ν` by `ρ^ν`. Its radial derivatives
//! satisfy the norm identity
//! `‖∂^r_ρ P(f)(ρ,·)‖^p_{S^p} = Σ_{ν>=r} (ν!/(ν-r)!)^p a_ν^p ρ^{(ν-r)p}`,
//! and `P(f_{[r]})(ρ,·) = ρ^r ∂^r_ρ P(f)(ρ,·)` blockwise.

use crate::error::{Error, Result};
use crate::numeric::{falling_factorial, nu_pow, pow_p, pow_rho, KahanSum};
use crate::spectrum::{BlockProfile, NormInterval, PMass, Spectrum, SpectrumTail, TailInfo};

/// A radial ψ weight together with its zero set.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiWeight {
    /// `ψ(ν) = ν^{-r}`, real `r >= 0`. For `r > 0` the weight is undefined at
    /// `ν = 0`; that block is placed in the zero set, consistent with the
    /// falling-factorial family.
    RadialPower { r: f64 },
    /// `ψ(ν) = (ν-r)!/ν!` for `ν >= r`, zero for `ν < r`, integer `r >= 0`.
    FallingFactorial { r: u32 },
    /// Tabulated weight `ψ(ν) = table[ν]`; `zero_set` lists the orders where
    /// ψ is genuinely zero. A zero table entry outside `zero_set` is a
    /// division error when that block is carried.
    Custom { table: Vec<f64>, zero_set: Vec<u32> },
}

impl PsiWeight {
    pub fn radial_power(r: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter("radial power needs r >= 0".into()));
        }
        Ok(Self::RadialPower { r })
    }

    pub fn falling_factorial(r: u32) -> Self {
        Self::FallingFactorial { r }
    }

    /// `r = 0` in either family is the identity weight (`f^{(0)} = f_{[0]} = f`).
    pub fn is_identity(&self) -> bool {
        match self {
            Self::RadialPower { r } => *r == 0.0,
            Self::FallingFactorial { r } => *r == 0,
            Self::Custom { .. } => false,
        }
    }

    pub fn in_zero_set(&self, nu: u32) -> bool {
        match self {
            Self::RadialPower { r } => *r > 0.0 && nu == 0,
            Self::FallingFactorial { r } => nu < *r,
            Self::Custom { zero_set, .. } => zero_set.contains(&nu),
        }
    }

    /// The inverse weight `1/ψ(ν)` applied to a carried block.
    fn inverse(&self, nu: u32) -> Result<f64> {
        match self {
            Self::RadialPower { r } => {
                if *r == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(f64::from(nu).powf(*r))
                }
            }
            Self::FallingFactorial { r } => Ok(falling_factorial(nu, *r)),
            Self::Custom { table, .. } => {
                let v = table.get(nu as usize).copied().ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "custom psi table has no entry for nu={nu}"
                    ))
                })?;
                if v == 0.0 {
                    Err(Error::PsiZeroDivision { nu })
                } else {
                    Ok(1.0 / v)
                }
            }
        }
    }

    /// Polynomial growth order of `1/ψ`, used for envelope re-certification.
    /// `None` for custom tables (certificates do not survive them).
    fn growth_degree(&self) -> Option<f64> {
        match self {
            Self::RadialPower { r } => Some(*r),
            Self::FallingFactorial { r } => Some(f64::from(*r)),
            Self::Custom { .. } => None,
        }
    }
}

/// Parameters of the Poisson integral and its radial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonParams {
    pub rho: f64,
    pub r: u32,
}

impl PoissonParams {
    pub fn new(rho: f64, r: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "rho must be in [0,1), got {rho}"
            )));
        }
        Ok(Self { rho, r })
    }
}

/// ψ-derivative of a spectrum: coefficient at `|k|_1 = ν` divided by `ψ(ν)`,
/// blocks in the zero set removed.
pub fn psi_derivative_spectrum(f: &Spectrum, psi: &PsiWeight) -> Result<Spectrum> {
    if psi.is_identity() {
        return Ok(f.clone());
    }
    // resolve the multipliers up front so table errors surface before work
    let mut multipliers = vec![0.0f64; f.cutoff() as usize + 1];
    let mut carried = vec![false; f.cutoff() as usize + 1];
    for (k, _) in f.iter() {
        carried[k.order() as usize] = true;
    }
    for (nu, m) in multipliers.iter_mut().enumerate() {
        let nu = nu as u32;
        if !carried[nu as usize] || psi.in_zero_set(nu) {
            *m = 0.0;
        } else {
            *m = psi.inverse(nu)?;
        }
    }
    // growth operators only keep certificates of finitely supported spectra
    let tail = match f.tail() {
        SpectrumTail::Exact => SpectrumTail::Exact,
        _ => SpectrumTail::Uncertified,
    };
    Ok(f.scale_blocks(|nu| multipliers[nu as usize], tail))
}

/// ψ-derivative on the profile level: `a_ν ↦ a_ν / |ψ(ν)|`.
///
/// Tail mass is re-certified through the profile envelope when one is
/// present (the family rule); otherwise the result is tail-uncertified
/// unless the input was finitely supported.
pub fn psi_derivative_profile(f: &BlockProfile, psi: &PsiWeight) -> Result<BlockProfile> {
    if psi.is_identity() {
        return Ok(f.clone());
    }
    let cutoff = f.cutoff();
    let mut multipliers = vec![0.0f64; cutoff as usize + 1];
    for nu in 0..=cutoff {
        if psi.in_zero_set(nu) {
            multipliers[nu as usize] = 0.0;
        } else if f.value(nu) != 0.0 {
            multipliers[nu as usize] = psi.inverse(nu)?.abs();
        } else {
            multipliers[nu as usize] = 0.0;
        }
    }
    let old = f.tail();
    let tail = match (old.mass, psi.growth_degree()) {
        (PMass::Zero, _) => TailInfo::exact(),
        (_, Some(deg)) => match old.envelope {
            Some(env) => {
                let new_env = env.scaled(1.0, deg, 1.0);
                TailInfo {
                    mass: PMass::Unknown,
                    envelope: Some(new_env),
                }
            }
            None => TailInfo::uncertified(),
        },
        (_, None) => TailInfo::uncertified(),
    };
    f.scale_blocks(|nu| multipliers[nu as usize], tail)
}

/// Poisson transform on the profile level: `a_ν ↦ ρ^ν a_ν`.
pub fn poisson_transform(f: &BlockProfile, rho: f64) -> Result<BlockProfile> {
    let params = PoissonParams::new(rho, 0)?;
    let rho = params.rho;
    let p = f.p();
    let old = f.tail();
    let mass = match old.mass {
        PMass::Zero => PMass::Zero,
        // ρ^ν is decreasing: the tail multiplier is at most ρ^{N+1}
        PMass::Bounded(t) => PMass::Bounded(t * pow_rho(rho, f64::from(f.cutoff() + 1) * p)),
        PMass::Unknown => PMass::Unknown,
    };
    let envelope = old.envelope.map(|e| e.scaled(1.0, 0.0, rho));
    f.scale_blocks(
        |nu| pow_rho(rho, f64::from(nu)),
        TailInfo { mass, envelope },
    )
}

/// `‖∂^r_ρ P(f)(ρ,·)‖_{S^p}` as an interval:
/// `(Σ_{ν>=r} (ν!/(ν-r)!)^p a_ν^p ρ^{(ν-r)p})^{1/p}`.
pub fn poisson_radial_derivative_norm(f: &BlockProfile, params: PoissonParams) -> NormInterval {
    let p = f.p();
    let rho = params.rho;
    let r = params.r;
    let mut acc = KahanSum::new();
    for nu in r..=f.cutoff() {
        let a = f.value(nu);
        if a == 0.0 {
            continue;
        }
        let term = falling_factorial(nu, r) * a * pow_rho(rho, f64::from(nu - r));
        acc.add(pow_p(term, p));
    }
    let head = acc.value();
    let lower = head.powf(1.0 / p);
    let upper = match radial_tail_mass(f, rho, r) {
        Some(t) => (head + t).powf(1.0 / p),
        None => f64::INFINITY,
    };
    NormInterval { lower, upper }
}

/// Bound on `Σ_{ν>N} ((ν!/(ν-r)!) ρ^{ν-r} a_ν)^p`.
fn radial_tail_mass(f: &BlockProfile, rho: f64, r: u32) -> Option<f64> {
    let tail = f.tail();
    let n = f.cutoff();
    let p = f.p();
    match tail.mass {
        PMass::Zero => return Some(0.0),
        PMass::Bounded(t) => {
            // the multiplier (ν falling r) ρ^{ν-r} decreases beyond its peak
            // ν* ≈ r/ln(1/ρ); once the cutoff passed it, the plain mass bound
            // can be carried with the ν = N+1 multiplier
            let direct = if rho == 0.0 {
                Some(0.0)
            } else if r == 0 {
                Some(t * pow_rho(rho, f64::from(n + 1) * p))
            } else {
                let peak = f64::from(r) / -crate::numeric::ln_rho(rho);
                if f64::from(n + 1) >= peak {
                    let m = falling_factorial(n + 1, r) * pow_rho(rho, f64::from(n + 1 - r));
                    Some(t * pow_p(m, p))
                } else {
                    None
                }
            };
            let from_env = tail
                .envelope
                .and_then(|e| envelope_radial_mass(e, n, p, rho, r));
            return match (direct, from_env) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) => Some(a),
                (None, b) => b,
            };
        }
        PMass::Unknown => {}
    }
    tail.envelope
        .and_then(|e| envelope_radial_mass(e, n, p, rho, r))
}

fn envelope_radial_mass(
    env: crate::spectrum::Envelope,
    cutoff: u32,
    p: f64,
    rho: f64,
    r: u32,
) -> Option<f64> {
    if rho == 0.0 {
        return Some(0.0);
    }
    // (ν falling r) ρ^{ν-r} <= ν^r ρ^{-r} ρ^ν
    let scaled = env.scaled(pow_rho(rho, f64::from(r)).recip(), f64::from(r), rho);
    scaled.p_mass(cutoff, p)
}

/// `‖P(f_{[r]})(ρ,·)‖_{S^p} = ρ^r ‖∂^r_ρ P(f)(ρ,·)‖_{S^p}`.
///
/// Must agree with the composed route — falling-factorial derivative followed
/// by [`poisson_transform`] and the S^p norm — to working precision; the
/// two-route test in the verification suite holds that to 1e-12 relative.
pub fn poisson_of_bracket_derivative_norm(
    f: &BlockProfile,
    params: PoissonParams,
) -> NormInterval {
    let base = poisson_radial_derivative_norm(f, params);
    let scale = pow_rho(params.rho, f64::from(params.r));
    NormInterval {
        lower: base.lower * scale,
        upper: base.upper * scale,
    }
}

/// Norm of `P(f^{(s)})(ρ,·)` for the radial-power derivative of real order
/// `s >= 0`: `(Σ_{ν>=1} (ν^s a_ν)^p ρ^{νp})^{1/p}`.
pub fn poisson_of_radial_derivative_norm(f: &BlockProfile, rho: f64, s: f64) -> NormInterval {
    let p = f.p();
    let mut acc = KahanSum::new();
    for nu in 0..=f.cutoff() {
        let a = f.value(nu);
        if a == 0.0 {
            continue;
        }
        let factor = if s == 0.0 { 1.0 } else { nu_pow(nu, s) };
        if factor == 0.0 {
            continue;
        }
        acc.add(pow_p(factor * a * pow_rho(rho, f64::from(nu)), p));
    }
    let head = acc.value();
    let lower = head.powf(1.0 / p);
    let tail = f.tail();
    let mass = match tail.mass {
        PMass::Zero => Some(0.0),
        _ => tail.envelope.and_then(|e| {
            e.scaled(1.0, s, rho).p_mass(f.cutoff(), p)
        }),
    };
    let upper = match mass {
        Some(t) => (head + t).powf(1.0 / p),
        None => f64::INFINITY,
    };
    NormInterval { lower, upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::TailInfo;

    fn single_block(nu: u32, a: f64, p: f64) -> BlockProfile {
        let mut values = vec![0.0; nu as usize + 1];
        values[nu as usize] = a;
        BlockProfile::new(p, 1, values, TailInfo::exact()).unwrap()
    }

    #[test]
    fn falling_factorial_derivative_single_block() {
        let f = single_block(5, 1.0, 2.0);
        let g = psi_derivative_profile(&f, &PsiWeight::falling_factorial(2)).unwrap();
        assert_eq!(g.value(5), 20.0);
    }

    #[test]
    fn radial_power_one_equals_falling_factorial_one() {
        let values = vec![0.0, 0.5, 0.25, 0.125, 0.0625];
        let f = BlockProfile::new(1.5, 1, values, TailInfo::exact()).unwrap();
        let a = psi_derivative_profile(&f, &PsiWeight::radial_power(1.0).unwrap()).unwrap();
        let b = psi_derivative_profile(&f, &PsiWeight::falling_factorial(1)).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn identity_weight_is_identity() {
        let f = single_block(3, 0.7, 2.0);
        let g = psi_derivative_profile(&f, &PsiWeight::radial_power(0.0).unwrap()).unwrap();
        assert_eq!(g.values(), f.values());
        let h = psi_derivative_profile(&f, &PsiWeight::falling_factorial(0)).unwrap();
        assert_eq!(h.values(), f.values());
    }

    #[test]
    fn zero_set_blocks_are_zeroed() {
        let values = vec![0.9, 0.5, 0.25];
        let f = BlockProfile::new(1.0, 1, values, TailInfo::exact()).unwrap();
        let g = psi_derivative_profile(&f, &PsiWeight::falling_factorial(2)).unwrap();
        assert_eq!(g.value(0), 0.0);
        assert_eq!(g.value(1), 0.0);
        assert_eq!(g.value(2), 0.5);
        // radial power zeroes ν=0 as well
        let h = psi_derivative_profile(&f, &PsiWeight::radial_power(1.0).unwrap()).unwrap();
        assert_eq!(h.value(0), 0.0);
        assert_eq!(h.value(1), 0.5);
    }

    #[test]
    fn custom_zero_outside_zero_set_is_division_error() {
        let values = vec![0.0, 1.0, 1.0];
        let f = BlockProfile::new(1.0, 1, values, TailInfo::exact()).unwrap();
        let psi = PsiWeight::Custom {
            table: vec![1.0, 0.0, 2.0],
            zero_set: vec![],
        };
        let err = psi_derivative_profile(&f, &psi).unwrap_err();
        assert!(matches!(err, Error::PsiZeroDivision { nu: 1 }));
        // declared zero set instead zeroes the block
        let psi_ok = PsiWeight::Custom {
            table: vec![1.0, 0.0, 2.0],
            zero_set: vec![1],
        };
        let g = psi_derivative_profile(&f, &psi_ok).unwrap();
        assert_eq!(g.value(1), 0.0);
        assert_eq!(g.value(2), 0.5);
    }

    #[test]
    fn psi_preserves_y_support_on_spectra() {
        use crate::spectrum::MultiIndex;
        use num_complex::Complex64;
        let f = Spectrum::exact(
            2,
            [
                (MultiIndex::new(vec![2, 1]).unwrap(), Complex64::new(1.0, 0.0)),
                (MultiIndex::new(vec![-1, -1]).unwrap(), Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        assert!(f.y_supported());
        let g = psi_derivative_spectrum(&f, &PsiWeight::falling_factorial(1)).unwrap();
        assert!(g.y_supported());
        assert_eq!(g.coefficient(&MultiIndex::new(vec![2, 1]).unwrap()).re, 3.0);
    }

    #[test]
    fn poisson_transform_values() {
        // rho = 0 keeps only a_0
        let values = vec![0.5, 1.0, 1.0];
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        let g = poisson_transform(&f, 0.0).unwrap();
        assert_eq!(g.values(), &[0.5, 0.0, 0.0]);

        // single block ν=4, a=1, rho=0.5 → 0.0625
        let f = single_block(4, 1.0, 2.0);
        let g = poisson_transform(&f, 0.5).unwrap();
        assert!((g.value(4) - 0.0625).abs() < 1e-16);
    }

    #[test]
    fn poisson_transform_approaches_identity() {
        let f = BlockProfile::new(2.0, 1, vec![0.0, 0.3, 0.6, 0.9], TailInfo::exact()).unwrap();
        let mut prev_gap = f64::INFINITY;
        for &rho in &[0.9, 0.99, 0.999] {
            let g = poisson_transform(&f, rho).unwrap();
            let gap: f64 = (0..=3u32)
                .map(|nu| (f.value(nu) - g.value(nu)).abs())
                .fold(0.0, f64::max);
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 3e-3);
    }

    #[test]
    fn radial_derivative_single_block_values() {
        // r=1, single block ν: derivative of ρ^ν is ν ρ^{ν-1}
        let f = single_block(3, 1.0, 2.0);
        let d = poisson_radial_derivative_norm(&f, PoissonParams::new(0.5, 1).unwrap());
        assert!((d.lower - 3.0 * 0.25).abs() < 1e-15);
        // r=2, ν=5, ρ=0.5 → 20 · 0.125 = 2.5
        let f = single_block(5, 1.0, 2.0);
        let d = poisson_radial_derivative_norm(&f, PoissonParams::new(0.5, 2).unwrap());
        assert!((d.lower - 2.5).abs() < 1e-14);
    }

    #[test]
    fn radial_derivative_r0_is_poisson_norm() {
        let f = BlockProfile::new(2.0, 1, vec![0.2, 0.4, 0.6], TailInfo::exact()).unwrap();
        let via_r0 = poisson_radial_derivative_norm(&f, PoissonParams::new(0.7, 0).unwrap());
        let via_transform = poisson_transform(&f, 0.7).unwrap().sp_norm();
        assert!((via_r0.lower - via_transform.lower).abs() < 1e-15);
    }

    #[test]
    fn bracket_norm_single_block() {
        // r=1, ν=3, a=1, ρ=0.5 → 3 · 0.5^3 = 0.375
        let f = single_block(3, 1.0, 2.0);
        let v = poisson_of_bracket_derivative_norm(&f, PoissonParams::new(0.5, 1).unwrap());
        assert!((v.lower - 0.375).abs() < 1e-15);
    }

    #[test]
    fn bracket_two_route_agreement() {
        let values: Vec<f64> = (0..200u32)
            .map(|nu| 1.0 / (1.0 + f64::from(nu)).powf(1.3))
            .collect();
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        for r in 0..=3u32 {
            for &rho in &[0.1, 0.5, 0.9, 0.99] {
                let params = PoissonParams::new(rho, r).unwrap();
                let direct = poisson_of_bracket_derivative_norm(&f, params);
                let composed = poisson_transform(
                    &psi_derivative_profile(&f, &PsiWeight::falling_factorial(r)).unwrap(),
                    rho,
                )
                .unwrap()
                .sp_norm();
                let rel = (direct.lower - composed.lower).abs() / composed.lower.max(1e-300);
                assert!(rel < 1e-12, "r={r} rho={rho} rel={rel}");
            }
        }
    }

    #[test]
    fn radial_derivative_nondecreasing_in_rho() {
        let values: Vec<f64> = (0..50u32).map(|nu| 0.8f64.powi(nu as i32)).collect();
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        for r in 0..=2u32 {
            let mut prev = -1.0;
            for j in 1..=10 {
                let rho = f64::from(j) / 11.0;
                let v = poisson_radial_derivative_norm(&f, PoissonParams::new(rho, r).unwrap());
                assert!(v.lower >= prev - 1e-15, "r={r} rho={rho}");
                prev = v.lower;
            }
        }
    }

    #[test]
    fn diagonal_operators_commute() {
        let values: Vec<f64> = (0..40u32).map(|nu| 1.0 / (1.0 + f64::from(nu))).collect();
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        let psi = PsiWeight::falling_factorial(2);
        let a = poisson_transform(&psi_derivative_profile(&f, &psi).unwrap(), 0.6).unwrap();
        let b = psi_derivative_profile(&poisson_transform(&f, 0.6).unwrap(), &psi).unwrap();
        for nu in 0..=f.cutoff() {
            let rel = (a.value(nu) - b.value(nu)).abs() / a.value(nu).max(1e-300);
            assert!(rel < 1e-13);
        }
    }
}
