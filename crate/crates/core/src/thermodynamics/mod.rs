//! Entropies, mean energies and fluctuation identities of the mode
//! decomposition, plus the band-level (Einstein) and sub-volume arguments.
//!
//! Entropy conventions (all divided by k):
//!
//! | family        | entropy                                         |
//! |---------------|-------------------------------------------------|
//! | `Gauss`       | `1 - ln β` (differential entropy of the density)|
//! | `Dark`        | `ln((1-b)/β) + β ζ̄` (same, on `[0, 1)`)          |
//! | `Planck`      | `(1+n̄) ln(1+n̄) - n̄ ln n̄`                       |
//! | `Binary(s)`   | binary entropy of `n̄_s = 1/(e^{2^s β}+1)`       |
//! | `Multiplet(m)`| `(x̄ - x̄ ln x̄)/m` with `x̄ = b^m`                |
//!
//! The multiplet entropy is the thermodynamic one (obtained by integrating
//! `dS/dE = 1/T`), not the Shannon entropy of the Poisson law.

pub mod kinetic;

use serde::{Deserialize, Serialize};

use crate::distributions::{
    binary_occupation, dark_mean, dark_variance, moments, multiplet_rate, ModeParams,
    PhysicalConstants, VariableFamily,
};
use crate::error::{domain, Error, Result};
use crate::numeric::{dyadic_scale, integrate, ln_choose, logistic, softplus};
use crate::spectra;

pub use kinetic::{
    fermi_occupation, kinetic_balance_residual, kinetic_relaxation, KineticSystem,
    RelaxationOutcome,
};

/// Entropy of a family, in units of k.
pub fn entropy_of(family: VariableFamily, p: &ModeParams) -> f64 {
    let beta = p.beta();
    match family {
        VariableFamily::Gauss => 1.0 - beta.ln(),
        VariableFamily::Dark => (p.one_minus_b() / beta).ln() + beta * dark_mean(p),
        VariableFamily::Planck => {
            let n = p.mean_occupation();
            (1.0 + n) * n.ln_1p() - n * n.ln()
        }
        VariableFamily::Binary(s) => {
            let x = dyadic_scale(beta, s);
            let occupied = logistic(-x);
            if occupied == 0.0 {
                return 0.0;
            }
            occupied * softplus(x) + (1.0 - occupied) * softplus(-x)
        }
        VariableFamily::Multiplet(m) => {
            let m = m.get() as f64;
            let mean = (-m * beta).exp();
            mean * (1.0 / m + beta)
        }
    }
}

/// Mean energy of a family in units of ε0.
pub fn mean_energy_of(family: VariableFamily, p: &ModeParams) -> f64 {
    match family {
        VariableFamily::Gauss => 1.0 / p.beta(),
        VariableFamily::Dark => dark_mean(p),
        VariableFamily::Planck => p.mean_occupation(),
        VariableFamily::Binary(s) => {
            let x = dyadic_scale(p.beta(), s);
            let occupied = logistic(-x);
            if occupied == 0.0 {
                0.0
            } else {
                dyadic_scale(occupied, s)
            }
        }
        VariableFamily::Multiplet(m) => (-(m.get() as f64) * p.beta()).exp(),
    }
}

/// Absolute residuals of the three entropy additivity identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyResiduals {
    /// `|S_η - S_ξ - S_ζ|`
    pub gauss_dark_planck: f64,
    /// `|S_ξ - Σ_{s ≤ s_max} S_s|`
    pub binary: f64,
    /// `|S_ξ - Σ_{m ≤ m_max} S_m|`
    pub multiplet: f64,
}

impl EntropyResiduals {
    pub fn max(&self) -> f64 {
        self.gauss_dark_planck.max(self.binary).max(self.multiplet)
    }
}

pub fn entropy_additivity_residuals(p: &ModeParams, s_max: u32, m_max: u32) -> EntropyResiduals {
    let gauss = entropy_of(VariableFamily::Gauss, p);
    let dark = entropy_of(VariableFamily::Dark, p);
    let planck = entropy_of(VariableFamily::Planck, p);
    let binary: f64 = (0..=s_max)
        .map(|s| entropy_of(VariableFamily::Binary(s), p))
        .sum();
    let multiplet: f64 = (1..=m_max.max(1))
        .map(|m| entropy_of(VariableFamily::multiplet(m).expect("m >= 1"), p))
        .sum();
    EntropyResiduals {
        gauss_dark_planck: (gauss - planck - dark).abs(),
        binary: (planck - binary).abs(),
        multiplet: (planck - multiplet).abs(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluctuationKind {
    Binary,
    Multiplet,
}

/// Partial sums of a fluctuation series and their final value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSeries {
    pub partial_sums: Vec<f64>,
    pub total: f64,
}

/// Variance of the Planck variable assembled from its components.
///
/// `Binary` sums `2^s ū_s - ū_s²` over `s = 0..=truncation`; `Multiplet`
/// sums `m² λ_m` over `m = 1..=truncation`. Both converge to `n̄ + n̄²`.
pub fn fluctuation_series(
    kind: FluctuationKind,
    p: &ModeParams,
    truncation: u32,
) -> Result<FluctuationSeries> {
    if truncation < 1 {
        return Err(domain("fluctuation truncation", truncation as f64));
    }
    let terms: Vec<f64> = match kind {
        FluctuationKind::Binary => (0..=truncation)
            .map(|s| {
                let (empty, occupied) = binary_occupation(s, p);
                if occupied == 0.0 {
                    0.0
                } else {
                    let weight = dyadic_scale(1.0, s);
                    weight * weight * occupied * empty
                }
            })
            .collect(),
        FluctuationKind::Multiplet => (1..=truncation)
            .map(|m| m as f64 * (-(m as f64) * p.beta()).exp())
            .collect(),
    };
    let mut running = 0.0;
    let partial_sums: Vec<f64> = terms
        .iter()
        .map(|t| {
            running += t;
            running
        })
        .collect();
    Ok(FluctuationSeries {
        total: running,
        partial_sums,
    })
}

/// A spectral band `(ν, ν + dν)` inside a volume `V`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    volume: Option<f64>,
    nu: Option<f64>,
    bandwidth: Option<f64>,
    mode_density: Option<f64>,
    mode_count: f64,
}

impl BandSpec {
    /// Band of width `bandwidth` (Hz) at `nu` (Hz) in `volume` (cm³);
    /// `m_ν = V · 8πν²/c³ · dν`.
    pub fn physical(
        volume: f64,
        nu: f64,
        bandwidth: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) {
            return Err(domain("volume", volume));
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(domain("bandwidth", bandwidth));
        }
        let z = spectra::mode_density(nu, consts)?;
        Ok(Self {
            volume: Some(volume),
            nu: Some(nu),
            bandwidth: Some(bandwidth),
            mode_density: Some(z),
            mode_count: volume * z * bandwidth,
        })
    }

    /// Dimensionless band described only by its number of modes.
    pub fn from_mode_count(mode_count: f64) -> Result<Self> {
        if !(mode_count.is_finite() && mode_count > 0.0) {
            return Err(domain("mode count", mode_count));
        }
        Ok(Self {
            volume: None,
            nu: None,
            bandwidth: None,
            mode_density: None,
            mode_count,
        })
    }

    pub fn mode_count(&self) -> f64 {
        self.mode_count
    }

    pub fn volume(&self) -> Option<f64> {
        self.volume
    }

    pub fn nu(&self) -> Option<f64> {
        self.nu
    }

    pub fn bandwidth(&self) -> Option<f64> {
        self.bandwidth
    }

    pub fn mode_density(&self) -> Option<f64> {
        self.mode_density
    }
}

/// Particle and wave parts of the band energy variance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EinsteinSplit {
    pub mean_energy: f64,
    pub particle: f64,
    pub wave: f64,
    pub total: f64,
}

/// `ΔE² = hν·Ē + Ē²/m_ν` with `Ē = m_ν hν n̄`.
///
/// Energies are in erg when `p` is physical and in units of ε0 otherwise.
pub fn einstein_split(band: &BandSpec, p: &ModeParams) -> Result<EinsteinSplit> {
    let modes = band.mode_count;
    if modes.is_nan() || modes <= 0.0 {
        return Err(domain("mode count", modes));
    }
    let quantum = p.energy_unit();
    let mean_energy = modes * quantum * p.mean_occupation();
    let particle = quantum * mean_energy;
    let wave = mean_energy * mean_energy / modes;
    Ok(EinsteinSplit {
        mean_energy,
        particle,
        wave,
        total: particle + wave,
    })
}

/// `|T · dS/dE - 1|` from central differences in temperature.
///
/// Both entropy and energy are evaluated in physical units at
/// `T(1 ± δ)`; since `E(T)` is monotone the chain through T is equivalent
/// to differentiating in E directly.
pub fn thermo_consistency(
    family: VariableFamily,
    nu: f64,
    temperature: f64,
    delta: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(1e-7..=1e-2).contains(&delta) {
        return Err(domain("relative step", delta));
    }
    let eval = |t: f64| -> Result<(f64, f64)> {
        let p = ModeParams::from_physical(nu, t, consts)?;
        let entropy = consts.k * entropy_of(family, &p);
        let energy = p.energy_unit() * mean_energy_of(family, &p);
        Ok((entropy, energy))
    };
    let (s_hi, e_hi) = eval(temperature * (1.0 + delta))?;
    let (s_lo, e_lo) = eval(temperature * (1.0 - delta))?;
    let delta_e = e_hi - e_lo;
    if delta_e.is_nan() || delta_e.abs() < 1e-30 {
        return Err(Error::DegenerateStep { delta_e });
    }
    let ds_de = (s_hi - s_lo) / delta_e;
    Ok((temperature * ds_de - 1.0).abs())
}

/// `(1/M) ln C(M, P)`: entropy per mode of `P` indistinguishable excitations
/// spread over `M` modes with at most one per mode.
pub fn combinatorial_entropy(modes: u64, excitations: u64) -> Result<f64> {
    if modes == 0 {
        return Err(domain("mode count", 0.0));
    }
    if excitations > modes {
        return Err(domain("excitation count", excitations as f64));
    }
    Ok(ln_choose(modes, excitations) / modes as f64)
}

/// `-[x ln x + (1-x) ln(1-x)]`, with `0 ln 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.ln() };
    term(x) + term(1.0 - x)
}

/// Probability of finding `n` of `n0` independent point particles inside a
/// sub-volume `v` of `v0`.
pub fn subvolume_count_pmf(n0: u64, v: f64, v0: f64, n: u64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(domain("sub-volume", v));
    }
    if !(v0 >= v && v0.is_finite()) {
        return Err(domain("reference volume", v0));
    }
    if n > n0 {
        return Ok(0.0);
    }
    let w = v / v0;
    if w == 1.0 {
        return Ok(if n == n0 { 1.0 } else { 0.0 });
    }
    let ln_p = ln_choose(n0, n) + n as f64 * w.ln() + (n0 - n) as f64 * (-w).ln_1p();
    Ok(ln_p.exp())
}

/// Total-variation distance between Binomial(n0, λ/n0) and Poisson(λ).
pub fn poisson_limit_distance(n0: u64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) || lambda > n0 as f64 {
        return Err(domain("Poisson mean", lambda));
    }
    let v0 = n0 as f64;
    let v = lambda;
    let cutoff = ((lambda + 40.0 * lambda.sqrt() + 40.0).ceil() as u64).min(n0);
    let mut binomial_mass = 0.0;
    let mut poisson_mass = 0.0;
    let mut distance = 0.0;
    for n in 0..=cutoff {
        let a = subvolume_count_pmf(n0, v, v0, n)?;
        let b = (n as f64 * lambda.ln() - lambda - crate::numeric::ln_factorial(n)).exp();
        binomial_mass += a;
        poisson_mass += b;
        distance += (a - b).abs();
    }
    distance += (1.0 - binomial_mass).max(0.0) + (1.0 - poisson_mass).max(0.0);
    Ok(0.5 * distance)
}

/// The same multiplet gas compared in two volumes `V ≤ V0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeComparison {
    volume: f64,
    reference_volume: f64,
    order: u32,
    band_energy: f64,
}

impl VolumeComparison {
    /// `band_energy` is the total energy `E(m)` (erg) of the order-`order` gas.
    pub fn new(volume: f64, reference_volume: f64, order: u32, band_energy: f64) -> Result<Self> {
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(domain("volume", volume));
        }
        if !(reference_volume >= volume && reference_volume.is_finite()) {
            return Err(domain("reference volume", reference_volume));
        }
        if order == 0 {
            return Err(domain("multiplet order", 0.0));
        }
        if !(band_energy >= 0.0 && band_energy.is_finite()) {
            return Err(domain("band energy", band_energy));
        }
        Ok(Self {
            volume,
            reference_volume,
            order,
            band_energy,
        })
    }

    /// Number of order-`m` quanta `l = E(m) / (m hν)`.
    pub fn quanta(&self, nu: f64, consts: &PhysicalConstants) -> f64 {
        self.band_energy / (self.order as f64 * consts.h * nu)
    }
}

/// `S(V) - S(V0) = k ln((V/V0)^l)` in erg/K.
pub fn volume_entropy_difference(
    vc: &VolumeComparison,
    nu: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(domain("frequency", nu));
    }
    Ok(consts.k * vc.quanta(nu, consts) * (vc.volume / vc.reference_volume).ln())
}

/// Dark-part variance computed three ways, per mode and in units of ε0².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarkFluctuationAudit {
    /// `1/β² - n̄ - n̄²`
    pub closed_form: f64,
    /// `∫ (z - ζ̄)² f_ζ(z) dz` by adaptive quadrature
    pub quadrature: f64,
    /// The printed band formula `(2n̄-1) hν Ē_ζ + Ē_ζ²/m_ν` divided by `m_ν (hν)²`,
    /// i.e. `(2n̄-1) ζ̄ + ζ̄²`.
    pub printed_formula: f64,
}

impl DarkFluctuationAudit {
    pub fn closed_vs_quadrature(&self) -> f64 {
        (self.closed_form - self.quadrature).abs()
    }

    pub fn printed_residual(&self) -> f64 {
        (self.printed_formula - self.closed_form).abs()
    }
}

pub fn dark_fluctuation_audit(p: &ModeParams) -> DarkFluctuationAudit {
    let beta = p.beta();
    let norm = beta / p.one_minus_b();
    let density = move |z: f64| norm * (-beta * z).exp();
    let mean = integrate(|z| z * density(z), 0.0, 1.0, 1e-15);
    let quadrature = integrate(|z| (z - mean) * (z - mean) * density(z), 0.0, 1.0, 1e-15);
    let zeta = dark_mean(p);
    let n = p.mean_occupation();
    DarkFluctuationAudit {
        closed_form: dark_variance(p),
        quadrature,
        printed_formula: (2.0 * n - 1.0) * zeta + zeta * zeta,
    }
}

/// `|Var η - Var ξ - Var ζ| / Var η` from the closed forms.
pub fn variance_additivity_residual(p: &ModeParams) -> f64 {
    let gauss = moments(VariableFamily::Gauss, p).variance;
    let planck = moments(VariableFamily::Planck, p).variance;
    let dark = moments(VariableFamily::Dark, p).variance;
    ((gauss - planck - dark) / gauss).abs()
}

/// Occupation `n̄_s` of the order-`s` binary component (convenience for the
/// multiplet-rate comparison tables).
pub fn binary_mean_occupation(s: u32, p: &ModeParams) -> f64 {
    binary_occupation(s, p).1
}

/// Expected number of order-`m` quanta `λ_m`.
pub fn multiplet_mean_count(m: u32, p: &ModeParams) -> Result<f64> {
    let order = std::num::NonZeroU32::new(m).ok_or(domain("multiplet order", 0.0))?;
    Ok(multiplet_rate(order, p))
}
