//! Densities, mass functions, characteristic functions and moments of the
//! five random-variable families of a thermal field mode.
//!
//! All quantities are dimensionless: energies are measured in units of the
//! quantum `ε0 = hν`, and every family is parameterised by `β = hν/kT`
//! through [`ModeParams`]. The families are
//!
//! * `Gauss`: the full mode energy η, exponential with rate β;
//! * `Dark`: the fractional part ζ = {η}, a truncated exponential on `[0, 1)`;
//! * `Planck`: the integer part ξ = ⌊η⌋, geometric with ratio `b = e^{-β}`;
//! * `Binary(s)`: the `s`-th dyadic digit of ξ, carrying energy `2^s`;
//! * `Multiplet(m)`: the Poisson photo-multiplet component of order `m`.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{dyadic_scale, ln_factorial, logistic};
use crate::thermodynamics;

/// Which set of physical constants a [`PhysicalConstants`] value carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantSet {
    /// Four-digit values as printed in the historical literature.
    Historical,
    /// CODATA 2018 values.
    Modern,
}

/// Universal constants in CGS units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Planck constant, erg·s.
    pub h: f64,
    /// Boltzmann constant, erg/K.
    pub k: f64,
    /// Speed of light, cm/s.
    pub c: f64,
    /// Newtonian gravitational constant, cm³·g⁻¹·s⁻².
    pub g: f64,
    pub set: ConstantSet,
}

impl PhysicalConstants {
    /// `h = 6.626e-27 erg·s`, `k = 1.381e-16 erg/K`; `c` and `G` rounded to four digits.
    ///
    /// Some printings carry `k = 1.831e-16` (a digit transposition); the
    /// physical value 1.381 is used here.
    pub const HISTORICAL: Self = Self {
        h: 6.626e-27,
        k: 1.381e-16,
        c: 2.998e10,
        g: 6.674e-8,
        set: ConstantSet::Historical,
    };

    pub const MODERN: Self = Self {
        h: 6.626_070_15e-27,
        k: 1.380_649e-16,
        c: 2.997_924_58e10,
        g: 6.674_30e-8,
        set: ConstantSet::Modern,
    };

    pub fn new(h: f64, k: f64, c: f64, g: f64, set: ConstantSet) -> Result<Self> {
        for (name, v) in [("h", h), ("k", k), ("c", c), ("G", g)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { h, k, c, g, set })
    }

    pub fn of(set: ConstantSet) -> Self {
        match set {
            ConstantSet::Historical => Self::HISTORICAL,
            ConstantSet::Modern => Self::MODERN,
        }
    }

    /// Reduced Planck constant `h / 2π`.
    pub fn hbar(&self) -> f64 {
        self.h / (2.0 * std::f64::consts::PI)
    }
}

/// Parameters of one spectral mode.
///
/// Always carries the dimensionless `β = hν/kT` and `b = e^{-β}`; the
/// physical frequency, temperature and quantum `ε0 = hν` are present only
/// when the mode was built from physical inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    beta: f64,
    b: f64,
    nu: Option<f64>,
    temperature: Option<f64>,
    energy_quantum: Option<f64>,
}

impl ModeParams {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(domain("beta", beta));
        }
        Ok(Self {
            beta,
            b: (-beta).exp(),
            nu: None,
            temperature: None,
            energy_quantum: None,
        })
    }

    /// Mode of frequency `nu` (Hz) at temperature `temperature` (K).
    pub fn from_physical(nu: f64, temperature: f64, consts: &PhysicalConstants) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(domain("frequency", nu));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(domain("temperature", temperature));
        }
        let energy_quantum = consts.h * nu;
        let beta = energy_quantum / (consts.k * temperature);
        let mut p = Self::from_beta(beta)?;
        p.nu = Some(nu);
        p.temperature = Some(temperature);
        p.energy_quantum = Some(energy_quantum);
        Ok(p)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `b = e^{-β}`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `1 - b`, without cancellation for small β.
    pub fn one_minus_b(&self) -> f64 {
        -(-self.beta).exp_m1()
    }

    /// Mean photon occupation number `n̄ = 1/(e^β - 1)`.
    pub fn mean_occupation(&self) -> f64 {
        1.0 / self.beta.exp_m1()
    }

    pub fn nu(&self) -> Option<f64> {
        self.nu
    }

    pub fn temperature(&self) -> Option<f64> {
        self.temperature
    }

    pub fn energy_quantum(&self) -> Option<f64> {
        self.energy_quantum
    }

    /// `ε0` in erg for physical modes, 1 for dimensionless ones.
    pub fn energy_unit(&self) -> f64 {
        self.energy_quantum.unwrap_or(1.0)
    }
}

/// The five random-variable families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VariableFamily {
    Gauss,
    Dark,
    Planck,
    /// Dyadic digit `s ≥ 0` of the Planck variable.
    Binary(u32),
    /// Photo-multiplet of order `m ≥ 1`.
    Multiplet(NonZeroU32),
}

impl VariableFamily {
    pub fn multiplet(m: u32) -> Result<Self> {
        NonZeroU32::new(m)
            .map(Self::Multiplet)
            .ok_or(Error::Domain { what: "multiplet order", value: 0.0 })
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, Self::Gauss | Self::Dark)
    }
}

impl fmt::Display for VariableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gauss => f.write_str("gauss"),
            Self::Dark => f.write_str("dark"),
            Self::Planck => f.write_str("planck"),
            Self::Binary(s) => write!(f, "binary:{s}"),
            Self::Multiplet(m) => write!(f, "multiplet:{m}"),
        }
    }
}

impl FromStr for VariableFamily {
    type Err = Error;

    /// Parses `gauss`, `dark`, `planck`, `binary:<s>` or `multiplet:<m>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown variable family '{s}'"));
        let (name, index) = match s.split_once(':') {
            Some((n, i)) => (n, Some(i.parse::<u32>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (name.to_ascii_lowercase().as_str(), index) {
            ("gauss", None) => Ok(Self::Gauss),
            ("dark", None) => Ok(Self::Dark),
            ("planck", None) => Ok(Self::Planck),
            ("binary", Some(s)) => Ok(Self::Binary(s)),
            ("multiplet", Some(m)) => Self::multiplet(m),
            _ => Err(bad()),
        }
    }
}

/// Mean, variance (in units of ε0 and ε0²) and entropy over k of one family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub entropy_over_k: f64,
}

// Below this β the dark-part moments switch to their Taylor series.
const SMALL_BETA: f64 = 1e-2;

/// `f(y) = β e^{-βy}` on `[0, ∞)`.
pub fn gauss_density(y: f64, p: &ModeParams) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(domain("gauss variable", y));
    }
    Ok(p.beta * (-p.beta * y).exp())
}

pub fn gauss_cdf(y: f64, p: &ModeParams) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        -(-p.beta * y).exp_m1()
    }
}

/// `f(z) = β e^{-βz} / (1 - e^{-β})` on `[0, 1)`.
pub fn dark_density(z: f64, p: &ModeParams) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("dark variable", z));
    }
    Ok(p.beta * (-p.beta * z).exp() / p.one_minus_b())
}

pub fn dark_cdf(z: f64, p: &ModeParams) -> f64 {
    if z <= 0.0 {
        0.0
    } else if z >= 1.0 {
        1.0
    } else {
        (-p.beta * z).exp_m1() / (-p.beta).exp_m1()
    }
}

/// Planck–Bose mass function `(1 - b) bⁿ`.
pub fn planck_pmf(n: u64, p: &ModeParams) -> f64 {
    p.one_minus_b() * (-(n as f64) * p.beta).exp()
}

/// `P(ξ ≤ n) = 1 - b^{n+1}`.
pub fn planck_cdf(n: u64, p: &ModeParams) -> f64 {
    -(-((n as f64) + 1.0) * p.beta).exp_m1()
}

/// `(P(u_s = 0), P(u_s = 2^s))`.
///
/// The occupied probability is `logistic(-2^s β) = 1/(e^{2^s β} + 1)`; the
/// power `b^{2^s}` is never formed.
pub fn binary_occupation(s: u32, p: &ModeParams) -> (f64, f64) {
    let x = dyadic_scale(p.beta, s);
    (logistic(x), logistic(-x))
}

/// Poisson rate `λ_m = b^m / m` of the order-`m` multiplet.
pub fn multiplet_rate(m: NonZeroU32, p: &ModeParams) -> f64 {
    let m = m.get() as f64;
    (-m * p.beta).exp() / m
}

/// `P(x_m = l·m) = λ_m^l e^{-λ_m} / l!`.
pub fn multiplet_pmf(m: u32, l: u64, p: &ModeParams) -> Result<f64> {
    let m = NonZeroU32::new(m).ok_or(Error::Domain { what: "multiplet order", value: 0.0 })?;
    let lambda = multiplet_rate(m, p);
    if l == 0 {
        return Ok((-lambda).exp());
    }
    Ok((l as f64 * lambda.ln() - lambda - ln_factorial(l)).exp())
}

/// Characteristic function `E[e^{itX}]` of a family.
pub fn characteristic_function(family: VariableFamily, t: f64, p: &ModeParams) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match family {
        VariableFamily::Gauss => gauss_cf(t, p),
        VariableFamily::Dark => gauss_cf(t, p) * (one + p.b * one_minus_cis(t) / p.one_minus_b()),
        VariableFamily::Planck => p.one_minus_b() / (p.one_minus_b() + p.b * one_minus_cis(t)),
        VariableFamily::Binary(s) => {
            let (_, occupied) = binary_occupation(s, p);
            // 2^s·t is exact, so the phase is as accurate as sin/cos allow.
            one - occupied * one_minus_cis(dyadic_scale(t, s))
        }
        VariableFamily::Multiplet(m) => {
            let lambda = multiplet_rate(m, p);
            (lambda * (Complex64::cis(m.get() as f64 * t) - one)).exp()
        }
    }
}

/// `1 - e^{it}`, free of cancellation near t = 0.
fn one_minus_cis(t: f64) -> Complex64 {
    let (sin_half, cos_half) = (0.5 * t).sin_cos();
    Complex64::new(2.0 * sin_half * sin_half, -2.0 * sin_half * cos_half)
}

fn gauss_cf(t: f64, p: &ModeParams) -> Complex64 {
    Complex64::new(1.0, -t / p.beta).inv()
}

/// Mean of the dark part, `1/β - n̄`.
pub(crate) fn dark_mean(p: &ModeParams) -> f64 {
    let beta = p.beta;
    if beta < SMALL_BETA {
        let b2 = beta * beta;
        0.5 - beta / 12.0 + beta * b2 / 720.0 - beta * b2 * b2 / 30240.0
    } else {
        1.0 / beta - p.mean_occupation()
    }
}

/// Variance of the dark part, `1/β² - n̄ - n̄²`.
pub(crate) fn dark_variance(p: &ModeParams) -> f64 {
    let beta = p.beta;
    if beta < SMALL_BETA {
        let b2 = beta * beta;
        1.0 / 12.0 - b2 / 240.0 + b2 * b2 / 6048.0
    } else {
        let n = p.mean_occupation();
        1.0 / (beta * beta) - n - n * n
    }
}

/// Closed-form mean and variance of a family, plus its entropy over k.
pub fn moments(family: VariableFamily, p: &ModeParams) -> MomentSummary {
    let (mean, variance) = match family {
        VariableFamily::Gauss => (1.0 / p.beta, 1.0 / (p.beta * p.beta)),
        VariableFamily::Dark => (dark_mean(p), dark_variance(p)),
        VariableFamily::Planck => {
            let n = p.mean_occupation();
            (n, n + n * n)
        }
        VariableFamily::Binary(s) => {
            let (empty, occupied) = binary_occupation(s, p);
            let weight = dyadic_scale(1.0, s);
            (weight * occupied, weight * weight * occupied * empty)
        }
        VariableFamily::Multiplet(m) => {
            let lambda = multiplet_rate(m, p);
            let m = m.get() as f64;
            (m * lambda, m * m * lambda)
        }
    };
    MomentSummary {
        mean,
        variance,
        entropy_over_k: thermodynamics::entropy_of(family, p),
    }
}
