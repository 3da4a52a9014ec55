//! Multi-index spectra, triangular blocks, block profiles and S^p norms.
//!
//! A function is represented purely by its Fourier coefficients
//! `f̂(k), k ∈ Z^d`; no point values are ever formed. The triangular block of
//! order `ν` collects the indices with `|k|_1 = ν`, and the block profile
//! `a_ν = ‖H_ν(f)‖_{S^p}` is the sufficient statistic for every radial
//! summation method handled by this crate.
//!
//! Every norm is an interval `[lower, upper]`: the lower endpoint is the
//! exact partial sum over stored data, the upper endpoint adds the certified
//! tail mass. Spectra or profiles without a usable certificate produce
//! one-sided intervals with `upper = +inf`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{pow_p, pow_rho, KahanSum};

/// Full-spectrum APIs are limited to small dimension; block cardinality grows
/// like `ν^{d-1}` and large-d blocks are huge.
pub const MAX_FULL_DIMENSION: u32 = 4;

/// Default cap on the number of lattice points a single enumeration may emit.
pub const DEFAULT_ELEMENT_BUDGET: u64 = 10_000_000;

// ─────────────────────────────────────────────────────────────────────────
// Multi-indices and block enumeration
// ─────────────────────────────────────────────────────────────────────────

/// An element of `Z^d`. Ordering is lexicographic on the entries, which fixes
/// the deterministic enumeration and serialization order used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(entries: Vec<i32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "multi-index needs dimension >= 1".into(),
            ));
        }
        Ok(Self(entries))
    }

    pub fn dimension(&self) -> u32 {
        self.0.len() as u32
    }

    /// `|k|_1 = Σ_j |k_j|`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|k| k.unsigned_abs()).sum()
    }

    /// Signed sum `Σ_j k_j`; the multiplier of the diagonal shift
    /// `x ↦ x + h·(1,…,1)` on the mode `e^{i(k,x)}`.
    pub fn signed_sum(&self) -> i64 {
        self.0.iter().map(|&k| i64::from(k)).sum()
    }

    /// Membership in `Y = Z^d_+ ∪ Z^d_-`: all coordinates `>= 0` or all `< 0`.
    pub fn in_y(&self) -> bool {
        self.0.iter().all(|&k| k >= 0) || self.0.iter().all(|&k| k < 0)
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
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

/// Number of lattice points on the l1-sphere `{k ∈ Z^d : |k|_1 = ν}` via the
/// closed form `Σ_{j=1..min(d,ν)} 2^j C(d,j) C(ν-1,j-1)` (and 1 for `ν = 0`).
pub fn block_count(d: u32, nu: u32) -> Result<u128> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if nu == 0 {
        return Ok(1);
    }
    let mut total: u128 = 0;
    for j in 1..=d.min(nu) {
        let signs = 1u128
            .checked_shl(j)
            .ok_or_else(|| Error::ResourceLimit("block count overflow".into()))?;
        let positions = binomial_u128(u64::from(d), u64::from(j))
            .ok_or_else(|| Error::ResourceLimit("block count overflow".into()))?;
        let compositions = binomial_u128(u64::from(nu) - 1, u64::from(j) - 1)
            .ok_or_else(|| Error::ResourceLimit("block count overflow".into()))?;
        let term = signs
            .checked_mul(positions)
            .and_then(|t| t.checked_mul(compositions))
            .ok_or_else(|| Error::ResourceLimit("block count overflow".into()))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::ResourceLimit("block count overflow".into()))?;
    }
    Ok(total)
}

/// Enumerates `{k ∈ Z^d : |k|_1 = ν}` in lexicographic order.
pub fn enumerate_block(d: u32, nu: u32) -> Result<Vec<MultiIndex>> {
    enumerate_block_with_budget(d, nu, DEFAULT_ELEMENT_BUDGET)
}

/// Same as [`enumerate_block`] with an explicit element budget.
pub fn enumerate_block_with_budget(d: u32, nu: u32, budget: u64) -> Result<Vec<MultiIndex>> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let count = block_count(d, nu)?;
    if count > u128::from(budget) {
        return Err(Error::ResourceLimit(format!(
            "block (d={d}, nu={nu}) has {count} elements, budget is {budget}"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0i32; d as usize];
    fill_block(&mut cur, 0, nu, &mut out);
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

fn fill_block(cur: &mut Vec<i32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    let last = cur.len() - 1;
    if pos == last {
        if remaining == 0 {
            cur[pos] = 0;
            out.push(MultiIndex(cur.clone()));
        } else {
            cur[pos] = -(remaining as i32);
            out.push(MultiIndex(cur.clone()));
            cur[pos] = remaining as i32;
            out.push(MultiIndex(cur.clone()));
        }
        return;
    }
    for v in -(remaining as i32)..=(remaining as i32) {
        cur[pos] = v;
        fill_block(cur, pos + 1, remaining - v.unsigned_abs(), out);
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Norm intervals and tail certificates
// ─────────────────────────────────────────────────────────────────────────

/// A certified enclosure `[lower, upper]` of a nonnegative norm value.
/// `upper = +inf` marks a one-sided (uncertified) result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormInterval {
    pub lower: f64,
    pub upper: f64,
}

impl NormInterval {
    pub fn exact(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_certified(&self) -> bool {
        self.upper.is_finite()
    }
}

/// Tail certificate of a [`Spectrum`]: either the stored coefficients are the
/// whole function, or the dropped l^p mass is bounded for one specific `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumTail {
    /// Finitely supported; nothing beyond the cutoff.
    Exact,
    /// `Σ_{|k|_1 > N} |f̂(k)|^p <= p_mass` for the given `p`.
    Bounded { p: f64, p_mass: f64 },
    /// No certificate; downstream intervals are one-sided.
    Uncertified,
}

/// Entrywise envelope on profile values beyond the cutoff:
/// `a_ν <= coeff · ν^degree · geo^ν` for all `ν > N`.
///
/// This is the family-supplied re-certification rule: diagonal operators act
/// on it exactly (Poisson multiplies `geo` by `ρ`, a derivative of order `r`
/// raises `degree` by `r`), so certified tails survive operations whose
/// multipliers grow with `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub coeff: f64,
    pub degree: f64,
    pub geo: f64,
}

impl Envelope {
    pub fn new(coeff: f64, degree: f64, geo: f64) -> Result<Self> {
        if !(coeff >= 0.0) || !geo.is_finite() || !(0.0..=1.0).contains(&geo) || !degree.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "invalid envelope ({coeff}, {degree}, {geo})"
            )));
        }
        Ok(Self { coeff, degree, geo })
    }

    /// Envelope after multiplying block `ν` by `m_ν <= extra_coeff · ν^extra_degree · extra_geo^ν`.
    pub fn scaled(&self, extra_coeff: f64, extra_degree: f64, extra_geo: f64) -> Self {
        Self {
            coeff: self.coeff * extra_coeff,
            degree: self.degree + extra_degree,
            geo: self.geo * extra_geo,
        }
    }

    /// Certified bound on `Σ_{ν > cutoff} (coeff · ν^degree · geo^ν)^p`, or
    /// `None` when the envelope mass diverges (or cannot be bounded by the
    /// ratio test at this cutoff).
    pub fn p_mass(&self, cutoff: u32, p: f64) -> Option<f64> {
        if self.coeff == 0.0 || self.geo == 0.0 {
            return Some(0.0);
        }
        let n = f64::from(cutoff);
        let d = self.degree * p;
        let g = pow_p(self.geo, p);
        if g < 1.0 {
            // ratio test: t_{ν+1}/t_ν = (1+1/ν)^D · G
            let q = if d <= 0.0 {
                g
            } else {
                (1.0 + 1.0 / (n + 1.0)).powf(d) * g
            };
            if q >= 1.0 {
                return None;
            }
            let first = pow_p(self.coeff, p) * (n + 1.0).powf(d) * g.powf(n + 1.0);
            Some(first / (1.0 - q))
        } else {
            // geo == 1: integral comparison needs D < -1
            if d < -1.0 {
                Some(pow_p(self.coeff, p) * n.powf(d + 1.0) / (-1.0 - d))
            } else {
                None
            }
        }
    }
}

/// Bound on the l^p mass of a profile beyond its cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PMass {
    /// Finitely supported: zero mass beyond the cutoff.
    Zero,
    /// `Σ_{ν>N} a_ν^p <= value`.
    Bounded(f64),
    Unknown,
}

/// Complete tail information: a mass bound plus an optional entrywise
/// envelope used to re-certify after growth operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailInfo {
    pub mass: PMass,
    pub envelope: Option<Envelope>,
}

impl TailInfo {
    pub fn exact() -> Self {
        Self {
            mass: PMass::Zero,
            envelope: None,
        }
    }

    pub fn bounded(p_mass: f64) -> Self {
        Self {
            mass: PMass::Bounded(p_mass),
            envelope: None,
        }
    }

    pub fn uncertified() -> Self {
        Self {
            mass: PMass::Unknown,
            envelope: None,
        }
    }

    pub fn with_envelope(mut self, env: Envelope) -> Self {
        self.envelope = Some(env);
        self
    }

    /// Best available bound on `Σ_{ν>cutoff} a_ν^p`; `None` if uncertified.
    pub fn effective_p_mass(&self, cutoff: u32, p: f64) -> Option<f64> {
        let from_env = self.envelope.and_then(|e| e.p_mass(cutoff, p));
        match (self.mass, from_env) {
            (PMass::Zero, _) => Some(0.0),
            (PMass::Bounded(m), Some(e)) => Some(m.min(e)),
            (PMass::Bounded(m), None) => Some(m),
            (PMass::Unknown, e) => e,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mass, PMass::Zero)
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Spectrum
// ─────────────────────────────────────────────────────────────────────────

/// Finite coefficient table of a function of `d` periodic variables, together
/// with a tail certificate for everything beyond the cutoff.
#[derive(Debug, Clone)]
pub struct Spectrum {
    dimension: u32,
    coefficients: BTreeMap<MultiIndex, Complex64>,
    cutoff: u32,
    tail: SpectrumTail,
    y_supported: bool,
}

impl Spectrum {
    /// A finitely supported spectrum; the cutoff is the largest stored order.
    pub fn exact<I>(dimension: u32, coefficients: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut map = BTreeMap::new();
        let mut cutoff = 0u32;
        for (k, c) in coefficients {
            if k.dimension() != dimension {
                return Err(Error::InvalidParameter(format!(
                    "index {k} has dimension {} != {dimension}",
                    k.dimension()
                )));
            }
            if c.norm_sqr() == 0.0 {
                continue;
            }
            cutoff = cutoff.max(k.order());
            map.insert(k, c);
        }
        let y_supported = map.keys().all(MultiIndex::in_y);
        Ok(Self {
            dimension,
            coefficients: map,
            cutoff,
            tail: SpectrumTail::Exact,
            y_supported,
        })
    }

    /// A truncated spectrum with a certified tail:
    /// `Σ_{|k|_1 > cutoff} |f̂(k)|^p <= p_mass`.
    pub fn with_tail_bound<I>(
        dimension: u32,
        coefficients: I,
        cutoff: u32,
        p: f64,
        p_mass: f64,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        if !(p_mass >= 0.0) {
            return Err(Error::InvalidParameter("tail bound must be >= 0".into()));
        }
        let mut s = Self::exact(dimension, coefficients)?;
        if s.cutoff > cutoff {
            return Err(Error::InvalidParameter(format!(
                "stored order {} exceeds declared cutoff {cutoff}",
                s.cutoff
            )));
        }
        s.cutoff = cutoff;
        s.tail = if p_mass == 0.0 {
            SpectrumTail::Exact
        } else {
            SpectrumTail::Bounded { p, p_mass }
        };
        Ok(s)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn tail(&self) -> SpectrumTail {
        self.tail
    }

    pub fn y_supported(&self) -> bool {
        self.y_supported
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, k: &MultiIndex) -> Complex64 {
        self.coefficients
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Deterministic (lexicographic) iteration over stored coefficients.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coefficients.iter()
    }

    /// Tail mass usable at exponent `p`; errors if the certificate was issued
    /// for a different exponent (a bound for one `p` does not convert).
    fn tail_mass_for(&self, p: f64) -> Result<PMass> {
        match self.tail {
            SpectrumTail::Exact => Ok(PMass::Zero),
            SpectrumTail::Bounded { p: cert_p, p_mass } => {
                if (cert_p - p).abs() < 1e-12 {
                    Ok(PMass::Bounded(p_mass))
                } else {
                    Err(Error::TailMismatch(format!(
                        "tail certificate issued for p={cert_p}, requested p={p}"
                    )))
                }
            }
            SpectrumTail::Uncertified => Ok(PMass::Unknown),
        }
    }

    /// The block profile `a_ν = ‖H_ν(f)‖_{S^p}`, exact over stored
    /// coefficients.
    pub fn profile(&self, p: f64) -> Result<BlockProfile> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        let mass = self.tail_mass_for(p)?;
        let sums = self.block_p_sums(p);
        let values: Vec<f64> = sums.iter().map(|s| s.powf(1.0 / p)).collect();
        let tail = TailInfo {
            mass,
            envelope: None,
        };
        BlockProfile::new(p, self.dimension, values, tail)
    }

    /// `Σ_{|k|_1=ν} |f̂(k)|^p` for each `ν <= cutoff`, compensated.
    fn block_p_sums(&self, p: f64) -> Vec<f64> {
        let mut sums = vec![KahanSum::new(); self.cutoff as usize + 1];
        for (k, c) in &self.coefficients {
            sums[k.order() as usize].add(pow_p(c.norm(), p));
        }
        sums.iter().map(KahanSum::value).collect()
    }

    /// `‖f‖_{S^p}` as an interval.
    pub fn sp_norm(&self, p: f64) -> Result<NormInterval> {
        Ok(self.profile(p)?.sp_norm())
    }

    /// `‖f - f_h‖_{S^p}` for the diagonal shift `x ↦ x + h(1,…,1)`.
    ///
    /// General form: `(Σ_k |f̂(k)|^p |1 - e^{i h s(k)}|^p)^{1/p}` with
    /// `s(k) = Σ_j k_j`. For Y-supported spectra this reduces exactly to the
    /// sine form `Σ_ν a_ν^p |2 sin(νh/2)|^p`, which is what gets computed.
    /// The upper endpoint adds `2^p` times the tail mass.
    pub fn shift_difference_norm(&self, h: f64, p: f64) -> Result<NormInterval> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        let mass = self.tail_mass_for(p)?;
        let head = if self.y_supported {
            let sums = self.block_p_sums(p);
            let mut acc = KahanSum::new();
            for (nu, s) in sums.iter().enumerate() {
                if *s == 0.0 {
                    continue;
                }
                let factor = 2.0 * (f64::from(nu as u32) * h / 2.0).sin().abs();
                acc.add(s * pow_p(factor, p));
            }
            acc.value()
        } else {
            self.shift_head_general(h, p)
        };
        shift_interval(head, mass, p)
    }

    /// Forces the per-coefficient route regardless of Y support (used by the
    /// consistency tests pairing the two evaluations).
    pub fn shift_difference_norm_general(&self, h: f64, p: f64) -> Result<NormInterval> {
        let mass = self.tail_mass_for(p)?;
        shift_interval(self.shift_head_general(h, p), mass, p)
    }

    fn shift_head_general(&self, h: f64, p: f64) -> f64 {
        let mut acc = KahanSum::new();
        for (k, c) in &self.coefficients {
            let theta = h * k.signed_sum() as f64;
            let factor = 2.0 * (theta / 2.0).sin().abs();
            if factor == 0.0 {
                continue;
            }
            acc.add(pow_p(c.norm() * factor, p));
        }
        acc.value()
    }

    /// Zeroes all coefficients outside `Y`; tail certificate carried over
    /// (conservative).
    pub fn project_y(&self) -> Spectrum {
        let coefficients: BTreeMap<MultiIndex, Complex64> = self
            .coefficients
            .iter()
            .filter(|(k, _)| k.in_y())
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        Spectrum {
            dimension: self.dimension,
            coefficients,
            cutoff: self.cutoff,
            tail: self.tail,
            y_supported: true,
        }
    }

    /// New spectrum with block `ν` scaled by `m(ν)`; the caller supplies the
    /// tail certificate of the result. Zero results are dropped.
    pub(crate) fn scale_blocks(&self, m: impl Fn(u32) -> f64, tail: SpectrumTail) -> Spectrum {
        let coefficients: BTreeMap<MultiIndex, Complex64> = self
            .coefficients
            .iter()
            .filter_map(|(k, c)| {
                let factor = m(k.order());
                if factor == 0.0 {
                    None
                } else {
                    Some((k.clone(), c * factor))
                }
            })
            .collect();
        let y_supported = self.y_supported || coefficients.keys().all(MultiIndex::in_y);
        Spectrum {
            dimension: self.dimension,
            coefficients,
            cutoff: self.cutoff,
            tail,
            y_supported,
        }
    }

    /// Coefficientwise difference `f - g` (exact spectra only; oracle route).
    pub fn subtract(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.dimension != other.dimension {
            return Err(Error::InvalidParameter("dimension mismatch".into()));
        }
        if self.tail != SpectrumTail::Exact || other.tail != SpectrumTail::Exact {
            return Err(Error::Precondition(
                "subtract requires finitely supported spectra".into(),
            ));
        }
        let mut map = self.coefficients.clone();
        for (k, c) in &other.coefficients {
            *map.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) -= c;
        }
        Spectrum::exact(self.dimension, map)
    }
}

fn shift_interval(head: f64, mass: PMass, p: f64) -> Result<NormInterval> {
    let lower = head.powf(1.0 / p);
    let upper = match mass {
        PMass::Zero => lower,
        PMass::Bounded(t) => (head + pow_p(2.0, p) * t).powf(1.0 / p),
        PMass::Unknown => f64::INFINITY,
    };
    Ok(NormInterval { lower, upper })
}

// ─────────────────────────────────────────────────────────────────────────
// Block profiles
// ─────────────────────────────────────────────────────────────────────────

/// The sequence `a_ν = ‖H_ν(f)‖_{S^p}`, `ν = 0..N`, with tail information.
#[derive(Debug, Clone)]
pub struct BlockProfile {
    p: f64,
    values: Vec<f64>,
    tail: TailInfo,
    dimension: u32,
}

impl BlockProfile {
    pub fn new(p: f64, dimension: u32, values: Vec<f64>, tail: TailInfo) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "profile needs at least the ν=0 entry".into(),
            ));
        }
        if values.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidParameter(
                "profile values must be finite and >= 0".into(),
            ));
        }
        if let PMass::Bounded(m) = tail.mass {
            if !(m >= 0.0) {
                return Err(Error::InvalidParameter("tail bound must be >= 0".into()));
            }
        }
        Ok(Self {
            p,
            values,
            tail,
            dimension,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Largest stored order `N`.
    pub fn cutoff(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, nu: u32) -> f64 {
        self.values.get(nu as usize).copied().unwrap_or(0.0)
    }

    pub fn tail(&self) -> TailInfo {
        self.tail
    }

    /// Bound on `Σ_{ν>N} a_ν^p`, if certified.
    pub fn tail_p_mass(&self) -> Option<f64> {
        self.tail.effective_p_mass(self.cutoff(), self.p)
    }

    /// Exact head mass `Σ_{ν<=N} a_ν^p`, compensated.
    pub fn head_p_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for &a in &self.values {
            if a != 0.0 {
                acc.add(pow_p(a, self.p));
            }
        }
        acc.value()
    }

    /// `‖f‖_{S^p}` as an interval.
    pub fn sp_norm(&self) -> NormInterval {
        let head = self.head_p_mass();
        let lower = head.powf(1.0 / self.p);
        let upper = match self.tail_p_mass() {
            Some(t) => (head + t).powf(1.0 / self.p),
            None => f64::INFINITY,
        };
        NormInterval { lower, upper }
    }

    /// Norm of the triangular partial sum `S^△_n`: only blocks `ν <= n`.
    pub fn partial_sum_norm(&self, n: u32) -> NormInterval {
        let mut acc = KahanSum::new();
        for nu in 0..=n.min(self.cutoff()) {
            let a = self.value(nu);
            if a != 0.0 {
                acc.add(pow_p(a, self.p));
            }
        }
        let head = acc.value();
        let lower = head.powf(1.0 / self.p);
        let upper = if n <= self.cutoff() {
            lower
        } else {
            match self.tail_p_mass() {
                Some(t) => (head + t).powf(1.0 / self.p),
                None => f64::INFINITY,
            }
        };
        NormInterval { lower, upper }
    }

    /// Sine-form shift-difference norm `(Σ_ν a_ν^p |2 sin(νh/2)|^p)^{1/p}`.
    ///
    /// Valid as `‖f - f_h‖_{S^p}` exactly when the underlying spectrum is
    /// Y-supported; callers are responsible for that flag.
    pub fn shift_difference_norm_sine(&self, h: f64) -> NormInterval {
        let mut acc = KahanSum::new();
        for (nu, &a) in self.values.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let factor = 2.0 * (f64::from(nu as u32) * h / 2.0).sin().abs();
            if factor != 0.0 {
                acc.add(pow_p(a * factor, self.p));
            }
        }
        let head = acc.value();
        let lower = head.powf(1.0 / self.p);
        let upper = match self.tail_p_mass() {
            Some(t) => (head + pow_p(2.0, self.p) * t).powf(1.0 / self.p),
            None => f64::INFINITY,
        };
        NormInterval { lower, upper }
    }

    /// New profile with `a_ν` scaled by `m(ν) >= 0`; the caller supplies the
    /// resulting tail information.
    pub(crate) fn scale_blocks(&self, m: impl Fn(u32) -> f64, tail: TailInfo) -> Result<Self> {
        let values: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(nu, &a)| a * m(nu as u32))
            .collect();
        Self::new(self.p, self.dimension, values, tail)
    }

    /// Truncation to `min(cutoff, n)` with exact tail (for finite-support
    /// methods).
    pub(crate) fn truncated(&self, n: u32, scale: impl Fn(u32) -> f64) -> Result<Self> {
        let top = n.min(self.cutoff());
        let values: Vec<f64> = (0..=top)
            .map(|nu| self.value(nu) * scale(nu))
            .collect();
        Self::new(self.p, self.dimension, values, TailInfo::exact())
    }
}

/// Free-function form of [`Spectrum::profile`] mirroring the operation map.
pub fn profile_of(f: &Spectrum, p: f64) -> Result<BlockProfile> {
    f.profile(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(entries: &[i32]) -> MultiIndex {
        MultiIndex::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_block_d1_nu0() {
        let b = enumerate_block(1, 0).unwrap();
        assert_eq!(b, vec![idx(&[0])]);
    }

    #[test]
    fn enumerate_block_d2_nu1_lexicographic() {
        let b = enumerate_block(2, 1).unwrap();
        let expected: Vec<MultiIndex> = [[-1, 0], [0, -1], [0, 1], [1, 0]]
            .iter()
            .map(|e| idx(e))
            .collect();
        assert_eq!(b, expected);
    }

    #[test]
    fn enumerate_block_d2_nu2() {
        // frozen by exhaustive scan of [-2,2]^2
        let b = enumerate_block(2, 2).unwrap();
        let expected: Vec<MultiIndex> = [
            [-2, 0],
            [-1, -1],
            [-1, 1],
            [0, -2],
            [0, 2],
            [1, -1],
            [1, 1],
            [2, 0],
        ]
        .iter()
        .map(|e| idx(e))
        .collect();
        assert_eq!(b, expected);
    }

    #[test]
    fn block_count_values() {
        assert_eq!(block_count(1, 5).unwrap(), 2);
        assert_eq!(block_count(2, 2).unwrap(), 8);
        // frozen by exhaustive scan of [-2,2]^3
        assert_eq!(block_count(3, 2).unwrap(), 18);
        assert_eq!(block_count(3, 0).unwrap(), 1);
    }

    #[test]
    fn block_count_matches_enumeration() {
        for d in 1..=4u32 {
            for nu in 0..=12u32 {
                let n = block_count(d, nu).unwrap();
                let e = enumerate_block(d, nu).unwrap();
                assert_eq!(n as usize, e.len(), "d={d} nu={nu}");
            }
        }
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let err = enumerate_block_with_budget(4, 30, 100).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }

    #[test]
    fn profile_single_coefficient() {
        let f = Spectrum::exact(1, [(idx(&[3]), Complex64::new(0.5, 0.0))]).unwrap();
        let prof = f.profile(2.0).unwrap();
        assert_eq!(prof.value(3), 0.5);
        assert_eq!(prof.value(0), 0.0);
        assert_eq!(prof.value(2), 0.0);
        assert!(prof.tail().is_exact());
    }

    #[test]
    fn profile_empty_spectrum() {
        let f = Spectrum::exact(2, []).unwrap();
        let prof = f.profile(1.0).unwrap();
        assert_eq!(prof.values(), &[0.0]);
        assert_eq!(prof.sp_norm(), NormInterval::exact(0.0));
    }

    #[test]
    fn profile_geometric_family_d2_p1() {
        // |f̂(k)| = q^{|k|_1} gives a_ν = block_count(2,ν) q^ν at p=1
        let q: f64 = 0.5;
        let mut coeffs = Vec::new();
        for nu in 0..=6u32 {
            for k in enumerate_block(2, nu).unwrap() {
                coeffs.push((k, Complex64::new(q.powi(nu as i32), 0.0)));
            }
        }
        let f = Spectrum::exact(2, coeffs).unwrap();
        let prof = f.profile(1.0).unwrap();
        for nu in 0..=6u32 {
            let expected = block_count(2, nu).unwrap() as f64 * q.powi(nu as i32);
            assert!((prof.value(nu) - expected).abs() < 1e-14 * expected.max(1.0));
        }
    }

    #[test]
    fn sp_norm_single_block_exact() {
        let prof = BlockProfile::new(
            2.0,
            1,
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 2.0],
            TailInfo::exact(),
        )
        .unwrap();
        assert_eq!(prof.sp_norm(), NormInterval::exact(2.0));
    }

    #[test]
    fn sp_norm_geometric_d1_closed_form() {
        // d=1, |f̂(k)| = 0.5^{|k|}, p=1: norm = 1 + 2 Σ_{ν>=1} 0.5^ν = 3,
        // checked against a high-cutoff partial sum plus exact geometric tail
        let n = 60u32;
        let mut coeffs = Vec::new();
        for k in -(n as i32)..=(n as i32) {
            coeffs.push((idx(&[k]), Complex64::new(0.5f64.powi(k.abs()), 0.0)));
        }
        // exact geometric tail: Σ_{ν>N} 2·0.5^ν = 2·0.5^N
        let tail = 2.0 * 0.5f64.powi(n as i32);
        let f = Spectrum::with_tail_bound(1, coeffs, n, 1.0, tail).unwrap();
        let norm = f.sp_norm(1.0).unwrap();
        assert!(norm.lower <= 3.0 && 3.0 <= norm.upper);
        assert!((norm.upper - 3.0).abs() < 1e-12);
        assert!(norm.width() <= tail + 1e-15);
    }

    #[test]
    fn profile_tail_mismatch_is_an_error() {
        let f = Spectrum::with_tail_bound(
            1,
            [(idx(&[1]), Complex64::new(1.0, 0.0))],
            4,
            2.0,
            1e-6,
        )
        .unwrap();
        assert!(f.profile(2.0).is_ok());
        assert!(matches!(f.profile(1.0), Err(Error::TailMismatch(_))));
    }

    #[test]
    fn shift_norm_zero_shift() {
        let f = Spectrum::exact(1, [(idx(&[4]), Complex64::new(1.0, 0.0))]).unwrap();
        let norm = f.shift_difference_norm(0.0, 2.0).unwrap();
        assert_eq!(norm.lower, 0.0);
        assert_eq!(norm.upper, 0.0);
    }

    #[test]
    fn shift_norm_single_block_sine_value() {
        // Y-spectrum single block ν=3, a_3=1, p=1, h=π/3 → |2 sin(π/2)| = 2
        let f = Spectrum::exact(1, [(idx(&[3]), Complex64::new(1.0, 0.0))]).unwrap();
        let norm = f
            .shift_difference_norm(std::f64::consts::PI / 3.0, 1.0)
            .unwrap();
        assert!((norm.lower - 2.0).abs() < 1e-15);
    }

    #[test]
    fn shift_norm_diagonal_annihilates_mixed_index() {
        // f̂((1,-1)) = 1: s(k) = 0, so any diagonal shift leaves f unchanged
        let f = Spectrum::exact(2, [(idx(&[1, -1]), Complex64::new(1.0, 0.0))]).unwrap();
        let norm = f.shift_difference_norm(0.7, 2.0).unwrap();
        assert_eq!(norm.lower, 0.0);
        assert_eq!(norm.upper, 0.0);
    }

    #[test]
    fn shift_norm_sine_matches_general_on_y_spectrum() {
        let f = Spectrum::exact(
            2,
            [
                (idx(&[1, 0]), Complex64::new(0.3, 0.4)),
                (idx(&[0, 2]), Complex64::new(0.0, 0.9)),
                (idx(&[-1, -2]), Complex64::new(0.25, 0.0)),
                (idx(&[2, 1]), Complex64::new(0.1, 0.1)),
            ],
        )
        .unwrap();
        assert!(f.y_supported());
        for &h in &[0.1, 0.5, 1.3, 2.9] {
            for &p in &[1.0, 1.7, 2.0] {
                let fast = f.shift_difference_norm(h, p).unwrap();
                let gen = f.shift_difference_norm_general(h, p).unwrap();
                let rel = (fast.lower - gen.lower).abs() / gen.lower.max(1e-300);
                assert!(rel < 1e-12, "h={h} p={p} rel={rel}");
            }
        }
    }

    #[test]
    fn project_y_filters_mixed_signs() {
        let f = Spectrum::exact(
            2,
            [
                (idx(&[1, -1]), Complex64::new(1.0, 0.0)),
                (idx(&[1, 1]), Complex64::new(0.5, 0.0)),
                (idx(&[-1, -2]), Complex64::new(0.25, 0.0)),
            ],
        )
        .unwrap();
        assert!(!f.y_supported());
        let g = f.project_y();
        assert!(g.y_supported());
        assert_eq!(g.len(), 2);
        assert_eq!(g.coefficient(&idx(&[1, -1])), Complex64::new(0.0, 0.0));
        assert_eq!(g.coefficient(&idx(&[1, 1])), Complex64::new(0.5, 0.0));

        // d=1: Y = Z, projection is the identity
        let f1 = Spectrum::exact(1, [(idx(&[-3]), Complex64::new(1.0, 0.0))]).unwrap();
        assert!(f1.y_supported());
        assert_eq!(f1.project_y().len(), 1);
    }

    #[test]
    fn envelope_p_mass_geometric() {
        // a_ν = 0.5^ν beyond N: Σ_{ν>N} 0.5^{νp} exactly, envelope must cover
        let env = Envelope::new(1.0, 0.0, 0.5).unwrap();
        let p = 2.0;
        let n = 10u32;
        let exact: f64 = (11..200).map(|nu| 0.25f64.powi(nu)).sum();
        let bound = env.p_mass(n, p).unwrap();
        assert!(bound >= exact);
        assert!(bound <= exact * 1.5);
    }

    #[test]
    fn envelope_p_mass_power_law() {
        // a_ν = ν^{-2}, p = 2: Σ_{ν>N} ν^{-4} <= N^{-3}/3
        let env = Envelope::new(1.0, -2.0, 1.0).unwrap();
        let bound = env.p_mass(100, 2.0).unwrap();
        let exact: f64 = (101..100_000).map(|nu| f64::from(nu as i32).powi(-4)).sum();
        assert!(bound >= exact);
        assert!(bound <= exact * 1.1);
        // diverging envelope mass is refused
        let env2 = Envelope::new(1.0, 0.0, 1.0).unwrap();
        assert!(env2.p_mass(100, 1.0).is_none());
    }

    #[test]
    fn interval_subadditivity() {
        // tail bound ε^p ⇒ upper − lower <= ε
        let eps = 1e-3f64;
        let prof = BlockProfile::new(
            2.0,
            1,
            vec![0.1, 0.9, 0.4],
            TailInfo::bounded(eps * eps),
        )
        .unwrap();
        let norm = prof.sp_norm();
        assert!(norm.width() <= eps + 1e-15);
    }

    #[test]
    fn removing_coefficient_never_increases_lower_norm() {
        let base = vec![
            (idx(&[1, 0]), Complex64::new(0.5, 0.2)),
            (idx(&[0, -2]), Complex64::new(0.3, 0.0)),
            (idx(&[2, 2]), Complex64::new(0.0, 0.7)),
        ];
        let f = Spectrum::exact(2, base.clone()).unwrap();
        let full = f.sp_norm(1.5).unwrap().lower;
        for remove in 0..base.len() {
            let reduced: Vec<_> = base
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != remove)
                .map(|(_, kc)| kc.clone())
                .collect();
            let g = Spectrum::exact(2, reduced).unwrap();
            assert!(g.sp_norm(1.5).unwrap().lower <= full + 1e-15);
        }
    }
}
