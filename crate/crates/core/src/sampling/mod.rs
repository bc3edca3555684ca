//! Seeded Monte Carlo draws of the mode-energy families.
//!
//! The generator is xoshiro256++ seeded through SplitMix64, the reference
//! construction of Blackman and Vigna. Substream `k` is the base state
//! advanced by `k` applications of the 2^128-step jump polynomial, so
//! substreams never overlap in practice. Uniform variates take the top 53
//! bits: `U = (x >> 11) · 2^-53 ∈ [0, 1)`.
//!
//! Reference outputs, seed 42, substream 0:
//! `15021278609987233951, 5881210131331364753, 18149643915985481100, ...`

pub mod gof;

use std::fmt;
use std::io::{self, Write};
use std::num::NonZeroU32;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::decomposition::{dyadic_expansion, split_integer_fraction, DyadicExpansion};
use crate::distributions::{binary_occupation, multiplet_rate, ModeParams, VariableFamily};
use crate::error::{domain, Error, Result};
use crate::numeric::dyadic_scale;

pub use gof::{fit_values, goodness_of_fit, ks_statistic, ExactLaw, FitTest, GoodnessOfFit, KS_CRITICAL_1PCT};

const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

/// Reproducible stream of 64-bit words.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    substream: u64,
    rng: Xoshiro256PlusPlus,
}

impl RandomStream {
    pub fn new(seed: u64, substream: u64) -> Self {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        for _ in 0..substream {
            rng.jump();
        }
        Self {
            seed,
            substream,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream(&self) -> u64 {
        self.substream
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT
    }

    /// Uniform integer in `[0, n)`, unbiased (Lemire's multiply-and-reject).
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below requires n > 0");
        let mut m = self.next_u64() as u128 * n as u128;
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = self.next_u64() as u128 * n as u128;
            }
        }
        (m >> 64) as u64
    }

    /// Exponential with rate `beta`, `-ln(1 - U)/β`.
    pub fn exponential(&mut self, beta: f64) -> f64 {
        -(-self.next_f64()).ln_1p() / beta
    }

    /// Poisson by sequential-search inversion; intended for small means.
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        poisson_inversion(self.next_f64(), lambda, (-lambda).exp())
    }
}

fn poisson_inversion(u: f64, lambda: f64, p0: f64) -> u64 {
    let mut k = 0u64;
    let mut pk = p0;
    let mut cdf = p0;
    while u >= cdf && pk > 0.0 {
        k += 1;
        pk *= lambda / k as f64;
        cdf += pk;
    }
    k
}

/// Variables of the base sum in the amplitude synthesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmplitudeBase {
    /// Uniform on `[-√3, √3]`.
    Uniform,
    /// `±1` with equal probability.
    Rademacher,
}

impl FromStr for AmplitudeBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "rademacher" => Ok(Self::Rademacher),
            other => Err(Error::InvalidParameter(format!("unknown amplitude base `{other}`"))),
        }
    }
}

/// Quadrature amplitudes of one chaotic mode, in units of the rms amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaoticAmplitude {
    pub cosine: f64,
    pub sine: f64,
    /// `arg(a_c + i a_s)` in `[0, 2π)`.
    pub phase: f64,
    pub scale: f64,
}

impl ChaoticAmplitude {
    pub fn new(cosine: f64, sine: f64) -> Self {
        let mut phase = sine.atan2(cosine);
        if phase < 0.0 {
            phase += std::f64::consts::TAU;
        }
        if phase >= std::f64::consts::TAU {
            phase = 0.0;
        }
        Self {
            cosine,
            sine,
            phase,
            scale: 1.0,
        }
    }

    /// Mode energy in units of ε0, `(a_c² + a_s²)/(2β)`; exponential with
    /// rate β when the quadratures are standard normal.
    pub fn energy(&self, p: &ModeParams) -> f64 {
        (self.cosine * self.cosine + self.sine * self.sine) / (2.0 * p.beta())
    }
}

/// Central-limit synthesis of quadrature amplitudes. The cosine and sine
/// quadratures draw from substreams `2k` and `2k + 1` of one seed.
#[derive(Clone, Debug)]
pub struct AmplitudeSynthesizer {
    n_terms: u32,
    base: AmplitudeBase,
    cosine: RandomStream,
    sine: RandomStream,
}

impl AmplitudeSynthesizer {
    pub fn new(n_terms: u32, base: AmplitudeBase, seed: u64, k: u64) -> Result<Self> {
        if n_terms == 0 {
            return Err(domain("amplitude term count", 0.0));
        }
        Ok(Self {
            n_terms,
            base,
            cosine: RandomStream::new(seed, 2 * k),
            sine: RandomStream::new(seed, 2 * k + 1),
        })
    }

    pub fn sample(&mut self) -> ChaoticAmplitude {
        let c = quadrature(self.n_terms, self.base, &mut self.cosine);
        let s = quadrature(self.n_terms, self.base, &mut self.sine);
        ChaoticAmplitude::new(c, s)
    }
}

fn quadrature(n_terms: u32, base: AmplitudeBase, rs: &mut RandomStream) -> f64 {
    let n = n_terms as f64;
    match base {
        AmplitudeBase::Uniform => {
            let sqrt3 = 3f64.sqrt();
            let sum: f64 = (0..n_terms).map(|_| sqrt3 * (2.0 * rs.next_f64() - 1.0)).sum();
            sum / n.sqrt()
        }
        AmplitudeBase::Rademacher => {
            let mut ones = 0u32;
            let mut left = n_terms;
            while left > 0 {
                let take = left.min(64);
                let word = rs.next_u64();
                let word = if take == 64 { word } else { word >> (64 - take) };
                ones += word.count_ones();
                left -= take;
            }
            (2.0 * ones as f64 - n) / n.sqrt()
        }
    }
}

/// `count` amplitudes from substream pair 0/1 of `seed`.
pub fn sample_chaotic_amplitude(
    n_terms: u32,
    base: AmplitudeBase,
    seed: u64,
    count: usize,
) -> Result<Vec<ChaoticAmplitude>> {
    let mut synth = AmplitudeSynthesizer::new(n_terms, base, seed, 0)?;
    Ok((0..count).map(|_| synth.sample()).collect())
}

/// What a batch samples: a single family, or the Planck variable rebuilt
/// from its binary or multiplet components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampledLaw {
    Family(VariableFamily),
    /// `Σ_{s ≤ s_max} 2^s u_s`
    BinarySum { s_max: u32 },
    /// `Σ_{m ≤ m_max} m · Poisson(λ_m)`
    MultipletSum { m_max: u32 },
}

impl fmt::Display for SampledLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Family(family) => write!(f, "{family}"),
            Self::BinarySum { s_max } => write!(f, "binary-sum:{s_max}"),
            Self::MultipletSum { m_max } => write!(f, "multiplet-sum:{m_max}"),
        }
    }
}

/// Smallest `s` with `2^s β > 50`.
pub fn default_s_max(p: &ModeParams) -> u32 {
    (0..1100).find(|&s| dyadic_scale(p.beta(), s) > 50.0).unwrap_or(1100)
}

/// Smallest `m` with `b^m / (m (1 - b)) < 10^-12`.
pub fn default_m_max(p: &ModeParams) -> u32 {
    let one_minus_b = p.one_minus_b();
    (1..u32::MAX)
        .find(|&m| (-(m as f64) * p.beta()).exp() / (m as f64 * one_minus_b) < 1e-12)
        .unwrap_or(u32::MAX)
}

const TAIL_WARNING: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub substream: u64,
}

/// Integer parts and fractions of a coupled draw `η = ξ + ζ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledParts {
    pub integer_parts: Vec<u64>,
    pub fractions: Vec<f64>,
}

impl CoupledParts {
    pub fn bits(&self, i: usize) -> DyadicExpansion {
        dyadic_expansion(self.integer_parts[i])
    }

    pub fn bit_frequency(&self, s: u32) -> f64 {
        let set = self.integer_parts.iter().filter(|&&n| bit(n, s)).count();
        set as f64 / self.integer_parts.len() as f64
    }

    /// Pearson correlation of bits `s1` and `s2`; 0 when either is constant.
    pub fn bit_correlation(&self, s1: u32, s2: u32) -> f64 {
        let n = self.integer_parts.len() as f64;
        let (mut c1, mut c2, mut c12) = (0u64, 0u64, 0u64);
        for &v in &self.integer_parts {
            let (a, b) = (bit(v, s1), bit(v, s2));
            c1 += a as u64;
            c2 += b as u64;
            c12 += (a && b) as u64;
        }
        let (p1, p2, p12) = (c1 as f64 / n, c2 as f64 / n, c12 as f64 / n);
        let denom = (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
        if denom == 0.0 {
            0.0
        } else {
            (p12 - p1 * p2) / denom
        }
    }
}

fn bit(n: u64, s: u32) -> bool {
    s < 64 && (n >> s) & 1 == 1
}

/// An immutable batch of draws with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub law: SampledLaw,
    pub params: ModeParams,
    pub values: Vec<f64>,
    pub seed: SeedRecord,
    pub coupled: Option<CoupledParts>,
    pub warnings: Vec<String>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.mean();
        self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0)
    }
}

/// Draws `count` values of `law`.
pub fn sample(
    law: SampledLaw,
    p: &ModeParams,
    count: usize,
    rs: &mut RandomStream,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::EmptyBatch);
    }
    let beta = p.beta();
    let mut warnings = Vec::new();
    let values: Vec<f64> = match law {
        SampledLaw::Family(VariableFamily::Gauss) => {
            (0..count).map(|_| rs.exponential(beta)).collect()
        }
        SampledLaw::Family(VariableFamily::Dark) => {
            let scale = (-beta).exp_m1();
            let below_one = 1.0 - f64::EPSILON / 2.0;
            (0..count)
                .map(|_| {
                    let z = -(rs.next_f64() * scale).ln_1p() / beta;
                    z.min(below_one)
                })
                .collect()
        }
        SampledLaw::Family(VariableFamily::Planck) => {
            (0..count).map(|_| rs.exponential(beta).floor()).collect()
        }
        SampledLaw::Family(VariableFamily::Binary(s)) => {
            let (_, occupied) = binary_occupation(s, p);
            let weight = dyadic_scale(1.0, s);
            (0..count)
                .map(|_| if rs.next_f64() < occupied { weight } else { 0.0 })
                .collect()
        }
        SampledLaw::Family(VariableFamily::Multiplet(m)) => {
            let lambda = multiplet_rate(m, p);
            let p0 = (-lambda).exp();
            let order = m.get() as f64;
            (0..count)
                .map(|_| order * poisson_inversion(rs.next_f64(), lambda, p0) as f64)
                .collect()
        }
        SampledLaw::BinarySum { s_max } => {
            let tail = binary_tail_mass(p, s_max);
            if tail > TAIL_WARNING {
                warnings.push(format!("binary truncation s_max={s_max} leaves tail mass {tail:e}"));
            }
            let occupied: Vec<f64> = (0..=s_max)
                .map(|s| binary_occupation(s, p).1)
                .take_while(|&q| q > 0.0)
                .collect();
            (0..count)
                .map(|_| {
                    occupied
                        .iter()
                        .enumerate()
                        .map(|(s, &q)| {
                            if rs.next_f64() < q {
                                dyadic_scale(1.0, s as u32)
                            } else {
                                0.0
                            }
                        })
                        .sum()
                })
                .collect()
        }
        SampledLaw::MultipletSum { m_max } => {
            if m_max == 0 {
                return Err(domain("multiplet truncation", 0.0));
            }
            let tail = multiplet_tail_mass(p, m_max);
            if tail > TAIL_WARNING {
                warnings.push(format!("multiplet truncation m_max={m_max} leaves tail mass {tail:e}"));
            }
            let rates: Vec<(f64, f64)> = (1..=m_max)
                .map(|m| {
                    let lambda = multiplet_rate(NonZeroU32::new(m).expect("m >= 1"), p);
                    (lambda, (-lambda).exp())
                })
                .collect();
            (0..count)
                .map(|_| {
                    rates
                        .iter()
                        .enumerate()
                        .map(|(i, &(lambda, p0))| {
                            (i + 1) as f64 * poisson_inversion(rs.next_f64(), lambda, p0) as f64
                        })
                        .sum()
                })
                .collect()
        }
    };
    Ok(SampleBatch {
        law,
        params: *p,
        values,
        seed: SeedRecord {
            seed: rs.seed(),
            substream: rs.substream(),
        },
        coupled: None,
        warnings,
    })
}

/// `Σ_{s > s_max} P(u_s ≠ 0)`, an upper bound on the truncated probability.
pub fn binary_tail_mass(p: &ModeParams, s_max: u32) -> f64 {
    let mut sum = 0.0;
    for s in s_max.saturating_add(1)..s_max.saturating_add(1100) {
        let q = binary_occupation(s, p).1;
        sum += q;
        if crate::numeric::series_converged(q, sum) {
            break;
        }
    }
    sum
}

/// `Σ_{m > m_max} λ_m ≤ b^{m_max+1} / ((m_max+1)(1-b))`.
pub fn multiplet_tail_mass(p: &ModeParams, m_max: u32) -> f64 {
    let next = m_max as f64 + 1.0;
    (-next * p.beta()).exp() / (next * p.one_minus_b())
}

/// Exponential draws stored with their integer and fractional parts.
pub fn sample_coupled(p: &ModeParams, count: usize, rs: &mut RandomStream) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::EmptyBatch);
    }
    let mut values = Vec::with_capacity(count);
    let mut integer_parts = Vec::with_capacity(count);
    let mut fractions = Vec::with_capacity(count);
    for _ in 0..count {
        let eta = rs.exponential(p.beta());
        let (n, z) = split_integer_fraction(eta)?;
        values.push(eta);
        integer_parts.push(n);
        fractions.push(z);
    }
    Ok(SampleBatch {
        law: SampledLaw::Family(VariableFamily::Gauss),
        params: *p,
        values,
        seed: SeedRecord {
            seed: rs.seed(),
            substream: rs.substream(),
        },
        coupled: Some(CoupledParts {
            integer_parts,
            fractions,
        }),
        warnings: Vec::new(),
    })
}

/// One header comment line, one column header, then one value per row with
/// 17 significant digits. Coupled batches add `integer_part,fraction`.
pub fn write_batch_csv<W: Write>(batch: &SampleBatch, mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "# law={} beta={:.16e} seed={} substream={} count={}",
        batch.law,
        batch.params.beta(),
        batch.seed.seed,
        batch.seed.substream,
        batch.values.len()
    )?;
    match &batch.coupled {
        None => {
            writeln!(w, "value")?;
            for v in &batch.values {
                writeln!(w, "{v:.16e}")?;
            }
        }
        Some(parts) => {
            writeln!(w, "value,integer_part,fraction")?;
            for ((v, n), z) in batch.values.iter().zip(&parts.integer_parts).zip(&parts.fractions) {
                writeln!(w, "{v:.16e},{n},{z:.16e}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(beta: f64) -> ModeParams {
        ModeParams::from_beta(beta).unwrap()
    }

    #[test]
    fn xoshiro_reference_vectors() {
        let mut rs = RandomStream::new(42, 0);
        let got: Vec<u64> = (0..4).map(|_| rs.next_u64()).collect();
        assert_eq!(
            got,
            [
                15021278609987233951,
                5881210131331364753,
                18149643915985481100,
                12933668939759105464
            ]
        );
        let mut rs = RandomStream::new(42, 2);
        let got: Vec<u64> = (0..4).map(|_| rs.next_u64()).collect();
        assert_eq!(
            got,
            [
                13626344447376589899,
                6866272446064134760,
                5967244582632191458,
                3471631850228312087
            ]
        );
    }

    #[test]
    fn raw_state_vector() {
        let mut seed = [0u8; 32];
        for (i, word) in [1u64, 2, 3, 4].iter().enumerate() {
            seed[8 * i..8 * i + 8].copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = Xoshiro256PlusPlus::from_seed(seed);
        let got: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(got, [41943041, 58720359, 3588806011781223, 3591011842654386]);
    }

    #[test]
    fn uniform_and_bounded_draws() {
        let mut rs = RandomStream::new(7, 0);
        for _ in 0..10_000 {
            let u = rs.next_f64();
            assert!((0.0..1.0).contains(&u));
            assert!(rs.next_below(3) < 3);
        }
        let mut counts = [0u32; 5];
        for _ in 0..50_000 {
            counts[rs.next_below(5) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (c as f64 - 10_000.0).abs() < 500.0));
    }

    #[test]
    fn poisson_inversion_edges() {
        assert_eq!(poisson_inversion(0.0, 0.5, (-0.5f64).exp()), 0);
        assert_eq!(poisson_inversion(0.7, 0.5, (-0.5f64).exp()), 1);
        assert!(poisson_inversion(1.0 - f64::EPSILON, 0.5, (-0.5f64).exp()) < 30);
    }

    #[test]
    fn rademacher_single_term_is_sign() {
        let amps = sample_chaotic_amplitude(1, AmplitudeBase::Rademacher, 42, 100).unwrap();
        for a in &amps {
            assert!(a.cosine == 1.0 || a.cosine == -1.0);
            assert!(a.sine == 1.0 || a.sine == -1.0);
            assert!((0.0..std::f64::consts::TAU).contains(&a.phase));
        }
        assert!(sample_chaotic_amplitude(0, AmplitudeBase::Uniform, 1, 1).is_err());
    }

    #[test]
    fn amplitude_phase_matches_quadratures() {
        for a in sample_chaotic_amplitude(16, AmplitudeBase::Uniform, 9, 200).unwrap() {
            let r = a.cosine.hypot(a.sine);
            assert!((r * a.phase.cos() - a.cosine).abs() < 1e-12);
            assert!((r * a.phase.sin() - a.sine).abs() < 1e-12);
        }
    }

    #[test]
    fn dark_samples_stay_in_support() {
        for beta in [1e-6, 0.1, 1.0, 30.0] {
            let mut rs = RandomStream::new(5, 0);
            let b = sample(SampledLaw::Family(VariableFamily::Dark), &mode(beta), 20_000, &mut rs)
                .unwrap();
            assert!(b.values.iter().all(|z| (0.0..1.0).contains(z)));
        }
    }

    #[test]
    fn multiplet_values_are_multiples_of_order() {
        let mut rs = RandomStream::new(2, 0);
        let law = SampledLaw::Family(VariableFamily::multiplet(3).unwrap());
        let b = sample(law, &mode(0.2), 20_000, &mut rs).unwrap();
        assert!(b.values.iter().all(|v| v % 3.0 == 0.0));
        assert!(b.values.iter().any(|&v| v > 0.0));
    }

    #[test]
    fn batches_are_reproducible() {
        let law = SampledLaw::BinarySum { s_max: 40 };
        let a = sample(law, &mode(0.7), 1000, &mut RandomStream::new(11, 3)).unwrap();
        let b = sample(law, &mode(0.7), 1000, &mut RandomStream::new(11, 3)).unwrap();
        assert_eq!(a, b);
        let c = sample(law, &mode(0.7), 1000, &mut RandomStream::new(11, 4)).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn truncation_warnings() {
        let mut rs = RandomStream::new(1, 0);
        let b = sample(SampledLaw::BinarySum { s_max: 1 }, &mode(1.0), 10, &mut rs).unwrap();
        assert_eq!(b.warnings.len(), 1);
        let b = sample(SampledLaw::BinarySum { s_max: 40 }, &mode(1.0), 10, &mut rs).unwrap();
        assert!(b.warnings.is_empty());
        let b = sample(SampledLaw::MultipletSum { m_max: 5 }, &mode(1.0), 10, &mut rs).unwrap();
        assert_eq!(b.warnings.len(), 1);
        let m = default_m_max(&mode(1.0));
        let b = sample(SampledLaw::MultipletSum { m_max: m }, &mode(1.0), 10, &mut rs).unwrap();
        assert!(b.warnings.is_empty());
        assert!(sample(SampledLaw::Family(VariableFamily::Gauss), &mode(1.0), 0, &mut rs).is_err());
    }

    #[test]
    fn default_truncations() {
        assert_eq!(default_s_max(&mode(1.0)), 6);
        assert_eq!(default_s_max(&mode(100.0)), 0);
        let m = default_m_max(&mode(1.0));
        let bound = |m: u32| (-(m as f64)).exp() / (m as f64 * mode(1.0).one_minus_b());
        assert!(bound(m) < 1e-12 && bound(m - 1) >= 1e-12);
    }

    #[test]
    fn coupled_parts_recombine_exactly() {
        let mut rs = RandomStream::new(42, 0);
        let b = sample_coupled(&mode(0.3), 50_000, &mut rs).unwrap();
        let parts = b.coupled.as_ref().unwrap();
        for (i, &eta) in b.values.iter().enumerate() {
            assert_eq!(parts.integer_parts[i] as f64 + parts.fractions[i], eta);
            assert!((0.0..1.0).contains(&parts.fractions[i]));
            assert_eq!(parts.bits(i).reconstruct(), parts.integer_parts[i]);
        }
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let mut rs = RandomStream::new(42, 0);
        let b = sample(SampledLaw::Family(VariableFamily::Gauss), &mode(1.0), 3, &mut rs).unwrap();
        let mut out = Vec::new();
        write_batch_csv(&b, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# law=gauss beta=1.0000000000000000e0 seed=42"));
        assert_eq!(lines[1], "value");
        assert_eq!(lines.len(), 5);
        let parsed: f64 = lines[2].parse().unwrap();
        assert_eq!(parsed, b.values[0]);
    }
}
