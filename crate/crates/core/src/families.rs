//! Built-in function families: named coefficient rules with closed-form
//! block profiles, per-`p` tail certificates, and materializable spectra.
//!
//! Families are the test instances the experiments run on. Each one defines
//! `|f̂(k)|` (phases default to +1; a seeded random-phase option exists and
//! cannot change any S^p quantity), the exact profile values up to the
//! cutoff, and an entrywise tail envelope that keeps certificates alive
//! through derivative and Poisson operations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::ExperimentInput;
use crate::spectrum::{
    block_count, enumerate_block_with_budget, BlockProfile, Envelope, MultiIndex, PMass, Spectrum,
    TailInfo, DEFAULT_ELEMENT_BUDGET,
};

/// A named family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `|f̂(k)| = q^{|k|_1}` on all of `Z^d`.
    Geometric { q: f64, d: u32 },
    /// `|f̂(k)| = |k|_1^{-beta}` on `Z^d \ {0}`.
    Power { beta: f64, d: u32 },
    /// Unit amplitude on the single index `(ν0, 0, …, 0)`.
    SingleBlock { nu0: u32, d: u32 },
    /// `a_{base^j} = base^{-j}` carried by the index `base^j · e_1`.
    Lacunary { base: u32, d: u32 },
    /// Support in `Z^d_+` normalized so that `a_ν = ν^{-beta}` exactly.
    YPower { beta: f64, d: u32 },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Geometric { .. } => "geometric",
            Self::Power { .. } => "power",
            Self::SingleBlock { .. } => "single_block",
            Self::Lacunary { .. } => "lacunary",
            Self::YPower { .. } => "y_power",
        }
    }

    pub fn dimension(&self) -> u32 {
        match *self {
            Self::Geometric { d, .. }
            | Self::Power { d, .. }
            | Self::SingleBlock { d, .. }
            | Self::Lacunary { d, .. }
            | Self::YPower { d, .. } => d,
        }
    }

    /// Support restricted to `Y = Z^d_+ ∪ Z^d_-`? (For `d = 1`, `Y = Z`.)
    pub fn y_supported(&self) -> bool {
        match self {
            Self::Geometric { d, .. } | Self::Power { d, .. } => *d == 1,
            Self::SingleBlock { .. } | Self::Lacunary { .. } | Self::YPower { .. } => true,
        }
    }

    fn validate(&self, p: f64) -> Result<()> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        match *self {
            Self::Geometric { q, d } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("d must be >= 1".into()));
                }
                if !(0.0 < q && q < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "geometric needs q in (0,1), got {q}"
                    )));
                }
            }
            Self::Power { beta, d } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("d must be >= 1".into()));
                }
                // block counts grow like ν^{d-1}: Σ N(d,ν) ν^{-βp} is finite
                // iff βp > d (for d = 1 this is the usual β > 1/p)
                if !(beta * p > f64::from(d)) {
                    return Err(Error::InvalidParameter(format!(
                        "power family needs beta·p > d for a finite S^p norm (beta={beta}, p={p}, d={d})"
                    )));
                }
            }
            Self::SingleBlock { d, .. } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("d must be >= 1".into()));
                }
            }
            Self::Lacunary { base, d } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("d must be >= 1".into()));
                }
                if base < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "lacunary needs base >= 2, got {base}"
                    )));
                }
            }
            Self::YPower { beta, d } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("d must be >= 1".into()));
                }
                if !(beta * p > 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "y_power family needs beta > 1/p for a finite S^p norm (beta={beta}, p={p})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Realizes the family at exponent `p` with profile cutoff `cutoff`.
    pub fn instantiate(&self, p: f64, cutoff: u32) -> Result<FamilyInstance> {
        self.validate(p)?;
        let cutoff = match *self {
            Self::SingleBlock { nu0, .. } => cutoff.max(nu0),
            _ => cutoff.max(1),
        };
        let profile = self.build_profile(p, cutoff)?;
        Ok(FamilyInstance {
            spec: *self,
            p,
            cutoff,
            y_supported: self.y_supported(),
            profile,
        })
    }

    fn build_profile(&self, p: f64, cutoff: u32) -> Result<BlockProfile> {
        let d = self.dimension();
        match *self {
            Self::Geometric { q, .. } => {
                let mut values = Vec::with_capacity(cutoff as usize + 1);
                for nu in 0..=cutoff {
                    let count = block_count(d, nu)? as f64;
                    values.push(count.powf(1.0 / p) * q.powi(nu as i32));
                }
                // N(d,ν) <= 2^d ν^{d-1} for ν >= 1
                let env = Envelope::new(
                    2f64.powf(f64::from(d) / p),
                    (f64::from(d) - 1.0) / p,
                    q,
                )?;
                let mass = env
                    .p_mass(cutoff, p)
                    .map(PMass::Bounded)
                    .unwrap_or(PMass::Unknown);
                BlockProfile::new(
                    p,
                    d,
                    values,
                    TailInfo {
                        mass,
                        envelope: Some(env),
                    },
                )
            }
            Self::Power { beta, .. } => {
                let mut values = Vec::with_capacity(cutoff as usize + 1);
                values.push(0.0);
                for nu in 1..=cutoff {
                    let count = block_count(d, nu)? as f64;
                    values.push(count.powf(1.0 / p) * f64::from(nu).powf(-beta));
                }
                let env = Envelope::new(
                    2f64.powf(f64::from(d) / p),
                    (f64::from(d) - 1.0) / p - beta,
                    1.0,
                )?;
                let mass = env
                    .p_mass(cutoff, p)
                    .map(PMass::Bounded)
                    .unwrap_or(PMass::Unknown);
                BlockProfile::new(
                    p,
                    d,
                    values,
                    TailInfo {
                        mass,
                        envelope: Some(env),
                    },
                )
            }
            Self::SingleBlock { nu0, .. } => {
                let mut values = vec![0.0; cutoff as usize + 1];
                values[nu0 as usize] = 1.0;
                BlockProfile::new(p, d, values, TailInfo::exact())
            }
            Self::Lacunary { base, .. } => {
                let mut values = vec![0.0; cutoff as usize + 1];
                let mut j = 0u32;
                let mut nu = 1u64;
                while nu <= u64::from(cutoff) {
                    values[nu as usize] = f64::from(base).powi(-(j as i32));
                    j += 1;
                    nu *= u64::from(base);
                }
                // exact geometric tail: Σ_{j >= J} base^{-jp}
                let x = f64::from(base).powf(-p);
                let tail = x.powi(j as i32) / (1.0 - x);
                let env = Envelope::new(1.0, -1.0, 1.0)?;
                BlockProfile::new(
                    p,
                    d,
                    values,
                    TailInfo {
                        mass: PMass::Bounded(tail),
                        envelope: Some(env),
                    },
                )
            }
            Self::YPower { beta, .. } => {
                let mut values = Vec::with_capacity(cutoff as usize + 1);
                values.push(0.0);
                for nu in 1..=cutoff {
                    values.push(f64::from(nu).powf(-beta));
                }
                let env = Envelope::new(1.0, -beta, 1.0)?;
                let mass = env
                    .p_mass(cutoff, p)
                    .map(PMass::Bounded)
                    .unwrap_or(PMass::Unknown);
                BlockProfile::new(
                    p,
                    d,
                    values,
                    TailInfo {
                        mass,
                        envelope: Some(env),
                    },
                )
            }
        }
    }
}

/// A realized family: profile with certified tail, plus the means to
/// materialize the coefficient table when it fits the budget.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub spec: FamilySpec,
    pub p: f64,
    pub cutoff: u32,
    pub y_supported: bool,
    pub profile: BlockProfile,
}

impl FamilyInstance {
    /// Number of stored coefficients a materialized spectrum would have.
    pub fn spectrum_size(&self) -> Result<u128> {
        let d = self.spec.dimension();
        match self.spec {
            FamilySpec::SingleBlock { .. } => Ok(1),
            FamilySpec::Lacunary { base, .. } => {
                let mut count = 0u128;
                let mut nu = 1u64;
                while nu <= u64::from(self.cutoff) {
                    count += 1;
                    nu *= u64::from(base);
                }
                Ok(count)
            }
            FamilySpec::YPower { .. } => {
                let mut total = 0u128;
                for nu in 1..=self.cutoff {
                    total += positive_block_count(d, nu)?;
                }
                Ok(total)
            }
            _ => {
                let mut total = 0u128;
                for nu in 0..=self.cutoff {
                    total = total
                        .checked_add(block_count(d, nu)?)
                        .ok_or_else(|| Error::ResourceLimit("spectrum size overflow".into()))?;
                }
                match self.spec {
                    FamilySpec::Power { .. } => Ok(total - 1), // no constant term
                    _ => Ok(total),
                }
            }
        }
    }

    /// Materializes the coefficient table. Phases are +1 unless a seed is
    /// given, in which case each coefficient gets a reproducible random
    /// phase (profiles are invariant under phases).
    pub fn spectrum(&self, phase_seed: Option<u64>) -> Result<Spectrum> {
        let size = self.spectrum_size()?;
        if size > u128::from(DEFAULT_ELEMENT_BUDGET) {
            return Err(Error::ResourceLimit(format!(
                "family '{}' at cutoff {} would store {size} coefficients",
                self.spec.name(),
                self.cutoff
            )));
        }
        let d = self.spec.dimension();
        let mut rng = phase_seed.map(ChaCha8Rng::seed_from_u64);
        let mut phase = |rng: &mut Option<ChaCha8Rng>| -> Complex64 {
            match rng {
                Some(rng) => {
                    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    Complex64::new(theta.cos(), theta.sin())
                }
                None => Complex64::new(1.0, 0.0),
            }
        };
        let mut coeffs: Vec<(MultiIndex, Complex64)> = Vec::new();
        match self.spec {
            FamilySpec::Geometric { q, .. } => {
                for nu in 0..=self.cutoff {
                    let amp = q.powi(nu as i32);
                    for k in enumerate_block_with_budget(d, nu, DEFAULT_ELEMENT_BUDGET)? {
                        coeffs.push((k, amp * phase(&mut rng)));
                    }
                }
            }
            FamilySpec::Power { beta, .. } => {
                for nu in 1..=self.cutoff {
                    let amp = f64::from(nu).powf(-beta);
                    for k in enumerate_block_with_budget(d, nu, DEFAULT_ELEMENT_BUDGET)? {
                        coeffs.push((k, amp * phase(&mut rng)));
                    }
                }
            }
            FamilySpec::SingleBlock { nu0, .. } => {
                let mut entries = vec![0i32; d as usize];
                entries[0] = nu0 as i32;
                coeffs.push((MultiIndex::new(entries)?, phase(&mut rng)));
            }
            FamilySpec::Lacunary { base, .. } => {
                let mut j = 0u32;
                let mut nu = 1u64;
                while nu <= u64::from(self.cutoff) {
                    let mut entries = vec![0i32; d as usize];
                    entries[0] = nu as i32;
                    coeffs.push((
                        MultiIndex::new(entries)?,
                        f64::from(base).powi(-(j as i32)) * phase(&mut rng),
                    ));
                    j += 1;
                    nu *= u64::from(base);
                }
            }
            FamilySpec::YPower { beta, .. } => {
                for nu in 1..=self.cutoff {
                    let count = positive_block_count(d, nu)? as f64;
                    let amp = f64::from(nu).powf(-beta) / count.powf(1.0 / self.p);
                    for k in enumerate_positive_block(d, nu) {
                        coeffs.push((k, amp * phase(&mut rng)));
                    }
                }
            }
        }
        let mass = self
            .profile
            .tail_p_mass()
            .ok_or_else(|| Error::UncertifiedTail("family profile lost its certificate".into()))?;
        if mass == 0.0 {
            Spectrum::exact(d, coeffs)
        } else {
            Spectrum::with_tail_bound(d, coeffs, self.cutoff, self.p, mass)
        }
    }

    /// Bundles the family for the experiment runners. The spectrum is only
    /// materialized when membership testing needs it (support outside Y) and
    /// it fits the element budget.
    pub fn experiment_input(&self, phase_seed: Option<u64>) -> Result<ExperimentInput> {
        let spectrum = if self.y_supported {
            None
        } else {
            match self.spectrum_size() {
                Ok(size) if size <= u128::from(DEFAULT_ELEMENT_BUDGET) => {
                    Some(self.spectrum(phase_seed)?)
                }
                _ => None,
            }
        };
        Ok(ExperimentInput::new(
            self.label(),
            self.profile.clone(),
            self.y_supported,
            spectrum,
        ))
    }

    pub fn label(&self) -> String {
        match self.spec {
            FamilySpec::Geometric { q, d } => format!("geometric(q={q}, d={d})"),
            FamilySpec::Power { beta, d } => format!("power(beta={beta}, d={d})"),
            FamilySpec::SingleBlock { nu0, d } => format!("single_block(nu0={nu0}, d={d})"),
            FamilySpec::Lacunary { base, d } => format!("lacunary(base={base}, d={d})"),
            FamilySpec::YPower { beta, d } => format!("y_power(beta={beta}, d={d})"),
        }
    }
}

/// `#{k ∈ Z^d_+ : |k|_1 = ν} = C(ν+d-1, d-1)`.
fn positive_block_count(d: u32, nu: u32) -> Result<u128> {
    let n = u64::from(nu) + u64::from(d) - 1;
    let k = u64::from(d) - 1;
    binomial_u128_checked(n, k)
        .ok_or_else(|| Error::ResourceLimit("positive block count overflow".into()))
}

fn binomial_u128_checked(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul((n - k + i) as u128)?;
        acc /= i as u128;
    }
    Some(acc)
}

/// Nonnegative-coordinate lattice points with `|k|_1 = ν`, lexicographic.
fn enumerate_positive_block(d: u32, nu: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; d as usize];
    fn rec(cur: &mut Vec<i32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        let last = cur.len() - 1;
        if pos == last {
            cur[pos] = remaining as i32;
            out.push(MultiIndex::new(cur.clone()).expect("nonempty"));
            return;
        }
        for v in 0..=remaining {
            cur[pos] = v as i32;
            rec(cur, pos + 1, remaining - v, out);
        }
    }
    rec(&mut cur, 0, nu, &mut out);
    out
}

/// One catalog entry for the CLI listing.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyDoc {
    pub name: &'static str,
    pub parameters: &'static str,
    pub constraints: &'static str,
    pub tail_rule: &'static str,
    pub y_supported: &'static str,
}

/// Documentation of the built-in families.
pub fn catalog() -> Vec<FamilyDoc> {
    vec![
        FamilyDoc {
            name: "geometric",
            parameters: "q in (0,1), d >= 1",
            constraints: "none beyond parameter ranges",
            tail_rule: "entry envelope 2^{d/p} ν^{(d-1)/p} q^ν; p-mass by ratio test",
            y_supported: "only for d = 1",
        },
        FamilyDoc {
            name: "power",
            parameters: "beta, d >= 1",
            constraints: "beta·p > d (finite S^p norm)",
            tail_rule: "entry envelope 2^{d/p} ν^{(d-1)/p - beta}; p-mass by integral comparison",
            y_supported: "only for d = 1",
        },
        FamilyDoc {
            name: "single_block",
            parameters: "nu0 >= 0, d >= 1",
            constraints: "none",
            tail_rule: "finitely supported (exact)",
            y_supported: "yes",
        },
        FamilyDoc {
            name: "lacunary",
            parameters: "base >= 2, d >= 1",
            constraints: "none",
            tail_rule: "exact geometric p-mass; entry envelope ν^{-1}",
            y_supported: "yes",
        },
        FamilyDoc {
            name: "y_power",
            parameters: "beta, d >= 1",
            constraints: "beta·p > 1",
            tail_rule: "a_ν = ν^{-beta} exactly; p-mass by integral comparison",
            y_supported: "yes",
        },
    ]
}
