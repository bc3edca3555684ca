//! Spectral energy densities in CGS units, the Wien peak and Planck's
//! natural units.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{ModeParams, PhysicalConstants};
use crate::error::{domain, Error, Result};
use crate::thermodynamics::{einstein_split, BandSpec, EinsteinSplit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralLaw {
    Planck,
    RayleighJeans,
    Wien,
    Schweikert,
}

impl SpectralLaw {
    pub const ALL: [Self; 4] = [Self::Planck, Self::RayleighJeans, Self::Wien, Self::Schweikert];

    /// Column name in spectrum tables.
    pub fn column(self) -> &'static str {
        match self {
            Self::Planck => "u_planck",
            Self::RayleighJeans => "u_rj",
            Self::Wien => "u_wien",
            Self::Schweikert => "u_schweikert",
        }
    }
}

impl fmt::Display for SpectralLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Planck => "planck",
            Self::RayleighJeans => "rj",
            Self::Wien => "wien",
            Self::Schweikert => "schweikert",
        })
    }
}

impl FromStr for SpectralLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planck" => Ok(Self::Planck),
            "rj" | "rayleigh-jeans" => Ok(Self::RayleighJeans),
            "wien" => Ok(Self::Wien),
            "schweikert" => Ok(Self::Schweikert),
            other => Err(Error::InvalidParameter(format!("unknown spectral law `{other}`"))),
        }
    }
}

/// `Z_ν = 8πν²/c³` in cm⁻³ Hz⁻¹.
pub fn mode_density(nu: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(domain("frequency", nu));
    }
    Ok(8.0 * std::f64::consts::PI * nu * nu / (consts.c * consts.c * consts.c))
}

/// Spectral energy density `u_ν` in erg cm⁻³ Hz⁻¹.
///
/// The Planck form is evaluated as `Z hν e^{-β}/(1 - e^{-β})`, which
/// underflows gracefully to zero instead of overflowing for large β.
pub fn spectral_density(
    law: SpectralLaw,
    nu: f64,
    temperature: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let p = ModeParams::from_physical(nu, temperature, consts)?;
    let z = mode_density(nu, consts)?;
    let quantum = consts.h * nu;
    let thermal = consts.k * temperature;
    let decay = (-p.beta()).exp();
    Ok(match law {
        SpectralLaw::Planck => z * quantum * decay / p.one_minus_b(),
        SpectralLaw::RayleighJeans => z * thermal,
        SpectralLaw::Wien => z * quantum * decay,
        SpectralLaw::Schweikert => z * (thermal + quantum) * decay,
    })
}

/// `x - 3(1 - e^{-x})`.
pub fn wien_residual(x: f64) -> f64 {
    x + 3.0 * (-x).exp_m1()
}

/// Positive root of `x = 3(1 - e^{-x})`, by safeguarded Newton iteration.
pub fn wien_root() -> f64 {
    let (mut lo, mut hi) = (1.0, 5.0);
    let mut x = 3.0;
    for _ in 0..200 {
        let f = wien_residual(x);
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = 1.0 - 3.0 * (-x).exp();
        let mut next = x - f / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 * x {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Frequency of the Planck maximum, `x* kT / h`.
pub fn wien_peak(temperature: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(domain("temperature", temperature));
    }
    Ok(wien_root() * consts.k * temperature / consts.h)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaturalUnits {
    /// cm
    pub length: f64,
    /// s
    pub time: f64,
    /// K
    pub temperature: f64,
    /// g
    pub mass: f64,
}

pub fn natural_units(consts: &PhysicalConstants) -> NaturalUnits {
    let hbar = consts.hbar();
    let c = consts.c;
    let length = (hbar * consts.g / (c * c * c)).sqrt();
    let mass = (hbar * c / consts.g).sqrt();
    NaturalUnits {
        length,
        time: length / c,
        temperature: mass * c * c / consts.k,
        mass,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandStatistics {
    pub mode_count: f64,
    /// erg
    pub mean_energy: f64,
    /// erg²
    pub variance: f64,
    pub split: EinsteinSplit,
    /// Set when `m_ν < 1`, where the mode-count picture breaks down.
    pub narrow_band: bool,
}

/// Mean energy and Einstein variance of a physical band at temperature T.
pub fn band_statistics(
    band: &BandSpec,
    temperature: f64,
    consts: &PhysicalConstants,
) -> Result<BandStatistics> {
    let nu = band
        .nu()
        .ok_or_else(|| Error::InvalidParameter("band statistics need a physical band".into()))?;
    let p = ModeParams::from_physical(nu, temperature, consts)?;
    let split = einstein_split(band, &p)?;
    Ok(BandStatistics {
        mode_count: band.mode_count(),
        mean_energy: split.mean_energy,
        variance: split.total,
        split,
        narrow_band: band.mode_count() < 1.0,
    })
}

/// One row of a spectrum table; absent laws were not requested.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub nu_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_planck: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_rj: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_wien: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_schweikert: Option<f64>,
}

impl SpectrumRow {
    pub fn get(&self, law: SpectralLaw) -> Option<f64> {
        match law {
            SpectralLaw::Planck => self.u_planck,
            SpectralLaw::RayleighJeans => self.u_rj,
            SpectralLaw::Wien => self.u_wien,
            SpectralLaw::Schweikert => self.u_schweikert,
        }
    }
}

/// `points` linearly spaced frequencies from `nu_min` to `nu_max`.
pub fn spectrum_table(
    laws: &[SpectralLaw],
    temperature: f64,
    nu_min: f64,
    nu_max: f64,
    points: usize,
    consts: &PhysicalConstants,
) -> Result<Vec<SpectrumRow>> {
    if points < 2 {
        return Err(domain("point count", points as f64));
    }
    if !(nu_min > 0.0 && nu_max > nu_min && nu_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "frequency range [{nu_min}, {nu_max}] is not increasing and positive"
        )));
    }
    if laws.is_empty() {
        return Err(Error::InvalidParameter("no spectral law selected".into()));
    }
    let step = (nu_max - nu_min) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let nu = if i == points - 1 { nu_max } else { nu_min + i as f64 * step };
            let eval = |law| -> Result<Option<f64>> {
                if laws.contains(&law) {
                    spectral_density(law, nu, temperature, consts).map(Some)
                } else {
                    Ok(None)
                }
            };
            Ok(SpectrumRow {
                nu_hz: nu,
                u_planck: eval(SpectralLaw::Planck)?,
                u_rj: eval(SpectralLaw::RayleighJeans)?,
                u_wien: eval(SpectralLaw::Wien)?,
                u_schweikert: eval(SpectralLaw::Schweikert)?,
            })
        })
        .collect()
}

/// CSV with a `nu_Hz` column followed by one column per selected law.
pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRow], laws: &[SpectralLaw], mut w: W) -> io::Result<()> {
    let selected: Vec<SpectralLaw> = SpectralLaw::ALL.into_iter().filter(|l| laws.contains(l)).collect();
    write!(w, "nu_Hz")?;
    for law in &selected {
        write!(w, ",{}", law.column())?;
    }
    writeln!(w)?;
    for row in rows {
        write!(w, "{:.16e}", row.nu_hz)?;
        for &law in &selected {
            write!(w, ",{:.16e}", row.get(law).unwrap_or(f64::NAN))?;
        }
        writeln!(w)?;
    }
    Ok(())
}
