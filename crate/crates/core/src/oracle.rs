//! Independent brute-force reference implementations.
//!
//! Everything here is deliberately slow and simple — plain summation in
//! stored order, no compensation, no log-domain tricks — so the oracle
//! cannot share bugs with the main evaluation path. Oracle runs are
//! test-time only.

use crate::error::{Error, Result};
use crate::spectrum::{BlockProfile, Spectrum, SpectrumTail};
use crate::summation::{apply_spectrum, SummationMethod};

/// Limits on what the oracle will attempt.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub max_coefficients: usize,
    pub fd_step: f64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_coefficients: 10_000,
            fd_step: 1e-4,
            tolerance: 1e-12,
        }
    }
}

/// Plain `(Σ_k |f̂(k)|^p)^{1/p}` in stored (lexicographic) order.
pub fn naive_sp_norm(f: &Spectrum, p: f64) -> f64 {
    let mut sum = 0.0f64;
    for (_, c) in f.iter() {
        sum += c.norm().powf(p);
    }
    sum.powf(1.0 / p)
}

/// Direct-route approximation error: build `method(f)`, subtract
/// coefficientwise, take the naive S^p norm. Requires a finitely supported
/// spectrum.
pub fn naive_error(method: SummationMethod, f: &Spectrum, p: f64) -> Result<f64> {
    if f.tail() != SpectrumTail::Exact {
        return Err(Error::Precondition(
            "naive_error requires a finitely supported spectrum".into(),
        ));
    }
    if f.len() > OracleConfig::default().max_coefficients {
        return Err(Error::ResourceLimit(format!(
            "spectrum has {} coefficients, oracle cap is {}",
            f.len(),
            OracleConfig::default().max_coefficients
        )));
    }
    let approx = apply_spectrum(method, f)?;
    let diff = f.subtract(&approx)?;
    Ok(naive_sp_norm(&diff, p))
}

/// Central finite-difference weights of order `r` (second-order accurate).
fn central_difference(values: impl Fn(f64) -> f64, at: f64, r: u32, step: f64) -> f64 {
    // r-th central difference: Σ_i (-1)^i C(r,i) f(x + (r/2 - i) h) / h^r
    let mut acc = 0.0f64;
    for i in 0..=r {
        let coeff = crate::numeric::binomial_f64(r, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
        let x = at + (f64::from(r) / 2.0 - f64::from(i)) * step;
        acc += coeff * values(x);
    }
    acc / step.powi(r as i32)
}

/// Finite-difference evaluation of `‖∂^r_ρ P(f)(ρ,·)‖_{S^p}`: the central
/// difference is applied per block to `ρ ↦ ρ^ν`, then the results are
/// recombined into the norm.
pub fn fd_radial_derivative(f: &BlockProfile, r: u32, rho: f64, step: f64) -> Result<f64> {
    let margin = f64::from(r) / 2.0 * step;
    if !(rho - margin >= 0.0 && rho + margin < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rho={rho} with step={step} leaves [0,1) for order {r}"
        )));
    }
    let p = f.p();
    let mut sum = 0.0f64;
    for nu in 0..=f.cutoff() {
        let a = f.value(nu);
        if a == 0.0 {
            continue;
        }
        let fd = central_difference(|x| x.powi(nu as i32), rho, r, step);
        sum += (a * fd.abs()).powf(p);
    }
    Ok(sum.powf(1.0 / p))
}

/// Named reference series with explicit error control, backing the derived
/// expected values used across the test suites.
#[derive(Debug, Clone, Copy)]
pub enum NamedSeries {
    /// `‖f‖_{S^p}` of the geometric family `|f̂(k)| = q^{|k|_1}` on `Z^d`,
    /// via the generating function `Σ_ν N(d,ν) x^ν = ((1+x)/(1-x))^d`.
    GeometricSpNorm { q: f64, d: u32, p: f64 },
    /// `Σ_{ν>n} ν^{-e}` by partial summation with integral tail bracket.
    PowerTail { exponent: f64, beyond: u32 },
    /// Fejér error of the profile `a_ν = ν^{-beta}` at `n`, brute partial sum
    /// to `cutoff`.
    FejerErrorPowerProfile { beta: f64, n: u32, p: f64, cutoff: u32 },
    /// Shift-difference norm of `a_ν = ν^{-beta}` (Y-supported) at step `h`.
    ShiftNormPowerProfile { beta: f64, h: f64, p: f64, cutoff: u32 },
}

/// A reference value with a bound on its absolute error.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Evaluates a registry series.
pub fn series_reference(series: NamedSeries) -> Result<ReferenceValue> {
    match series {
        NamedSeries::GeometricSpNorm { q, d, p } => {
            if !(0.0 < q && q < 1.0) || d == 0 || !(p >= 1.0) {
                return Err(Error::UnknownSeries(format!("bad parameters {series:?}")));
            }
            let x = q.powf(p);
            let total = ((1.0 + x) / (1.0 - x)).powi(d as i32);
            Ok(ReferenceValue {
                value: total.powf(1.0 / p),
                error_bound: 1e-14 * total,
            })
        }
        NamedSeries::PowerTail { exponent, beyond } => {
            if exponent <= 1.0 || beyond == 0 {
                return Err(Error::UnknownSeries(format!("bad parameters {series:?}")));
            }
            // Σ_{ν>n} ν^{-e} ∈ [∫_{n+1}, ∫_n] of x^{-e} dx; sum the first
            // chunk explicitly and bracket the remainder by the integrals.
            let n = beyond;
            let chunk_end = n.saturating_mul(64).max(n + 100_000);
            let mut head = 0.0f64;
            for nu in (n + 1)..=chunk_end {
                head += f64::from(nu).powf(-exponent);
            }
            let lo = f64::from(chunk_end + 1).powf(1.0 - exponent) / (exponent - 1.0);
            let hi = f64::from(chunk_end).powf(1.0 - exponent) / (exponent - 1.0);
            Ok(ReferenceValue {
                value: head + 0.5 * (lo + hi),
                error_bound: 0.5 * (hi - lo) + 1e-14 * head,
            })
        }
        NamedSeries::FejerErrorPowerProfile { beta, n, p, cutoff } => {
            if cutoff <= n {
                return Err(Error::UnknownSeries("cutoff must exceed n".into()));
            }
            let mut sum = 0.0f64;
            for nu in 1..=n {
                let a = f64::from(nu).powf(-beta);
                sum += (f64::from(nu) * a / f64::from(n + 1)).powf(p);
            }
            for nu in (n + 1)..=cutoff {
                sum += f64::from(nu).powf(-beta * p);
            }
            // remaining tail Σ_{ν>cutoff} ν^{-βp}
            let e = beta * p;
            let tail = f64::from(cutoff).powf(1.0 - e) / (e - 1.0);
            Ok(ReferenceValue {
                value: sum.powf(1.0 / p),
                error_bound: tail.powf(1.0 / p),
            })
        }
        NamedSeries::ShiftNormPowerProfile { beta, h, p, cutoff } => {
            let mut sum = 0.0f64;
            for nu in 1..=cutoff {
                let a = f64::from(nu).powf(-beta);
                let factor = 2.0 * (f64::from(nu) * h / 2.0).sin().abs();
                sum += (a * factor).powf(p);
            }
            let e = beta * p;
            let tail = 2.0f64.powf(p) * f64::from(cutoff).powf(1.0 - e) / (e - 1.0);
            Ok(ReferenceValue {
                value: sum.powf(1.0 / p),
                error_bound: tail.powf(1.0 / p),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{MultiIndex, TailInfo};
    use num_complex::Complex64;

    #[test]
    fn geometric_norm_d1_is_three() {
        let v = series_reference(NamedSeries::GeometricSpNorm {
            q: 0.5,
            d: 1,
            p: 1.0,
        })
        .unwrap();
        assert!((v.value - 3.0).abs() < 1e-13);
    }

    #[test]
    fn power_tail_integral_bracket() {
        // Σ_{ν>100} ν^{-1.5}: compare against a long direct sum
        let r = series_reference(NamedSeries::PowerTail {
            exponent: 1.5,
            beyond: 100,
        })
        .unwrap();
        let direct: f64 = (101u32..3_000_000)
            .map(|nu| f64::from(nu).powf(-1.5))
            .sum();
        assert!((r.value - direct).abs() < r.error_bound + 2e-4);
        assert!(r.error_bound / r.value < 1e-3);
    }

    #[test]
    fn naive_error_partial_sum_covering_support() {
        let f = Spectrum::exact(
            2,
            [
                (MultiIndex::new(vec![1, 0]).unwrap(), Complex64::new(0.5, 0.0)),
                (MultiIndex::new(vec![0, -2]).unwrap(), Complex64::new(0.0, 0.3)),
            ],
        )
        .unwrap();
        let e = naive_error(SummationMethod::TriangularPartial { n: 2 }, &f, 2.0).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn naive_error_fejer_single_block() {
        // Fejér single block: (ν/(n+1)) a_ν
        let f = Spectrum::exact(
            1,
            [(MultiIndex::new(vec![2]).unwrap(), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let e = naive_error(SummationMethod::Fejer { n: 3 }, &f, 1.0).unwrap();
        assert!((e - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fd_matches_analytic_radial_derivative() {
        use crate::calculus::{poisson_radial_derivative_norm, PoissonParams};
        // single block ν=5: r=1 → 5·0.5^4 = 0.3125, r=2 → 20·0.5^3 = 2.5
        let mut values = vec![0.0; 6];
        values[5] = 1.0;
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        let fd1 = fd_radial_derivative(&f, 1, 0.5, 1e-4).unwrap();
        assert!((fd1 - 0.3125).abs() < 1e-6);
        let fd2 = fd_radial_derivative(&f, 2, 0.5, 1e-4).unwrap();
        assert!((fd2 - 2.5).abs() < 1e-5);
        let fd0 = fd_radial_derivative(&f, 0, 0.5, 1e-4).unwrap();
        let analytic = poisson_radial_derivative_norm(&f, PoissonParams::new(0.5, 0).unwrap());
        assert!((fd0 - analytic.lower).abs() < 1e-12);
    }

    #[test]
    fn fd_convergence_is_second_order() {
        // halving the step must roughly quarter the discrepancy
        use crate::calculus::{poisson_radial_derivative_norm, PoissonParams};
        let values: Vec<f64> = (0..25u32).map(|nu| 0.9f64.powi(nu as i32)).collect();
        let f = BlockProfile::new(2.0, 1, values, TailInfo::exact()).unwrap();
        for r in 1..=2u32 {
            let analytic =
                poisson_radial_derivative_norm(&f, PoissonParams::new(0.5, r).unwrap()).lower;
            let d1 = (fd_radial_derivative(&f, r, 0.5, 2e-3).unwrap() - analytic).abs();
            let d2 = (fd_radial_derivative(&f, r, 0.5, 1e-3).unwrap() - analytic).abs();
            let ratio = d2 / d1;
            assert!((0.2..=0.3).contains(&ratio), "r={r} ratio={ratio}");
        }
    }
}
