//! The verification suite and its machine-readable report.
//!
//! Every record carries a residual and, for gating rows, the tolerance it is
//! held to. Informational rows document a value without gating the overall
//! verdict; they always report `pass: true` and explain themselves in `note`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{
    cf_factorization_residual, event_probability, planck_log_pmf_via_binaries, uniform_grid,
    Atom, BinaryEvent, FactorizationKind, TailPolicy,
};
use crate::distributions::{moments, ConstantSet, ModeParams, PhysicalConstants, VariableFamily};
use crate::error::{Error, Result};
use crate::numeric::significant_digits;
use crate::sampling::{
    default_m_max, default_s_max, goodness_of_fit, sample, sample_coupled, ExactLaw,
    RandomStream, SampledLaw,
};
use crate::spectra::{natural_units, spectrum_table, wien_peak, wien_residual, wien_root, SpectralLaw};
use crate::thermodynamics::{
    dark_fluctuation_audit, entropy_additivity_residuals, fluctuation_series,
    kinetic_balance_residual, kinetic_relaxation, thermo_consistency,
    variance_additivity_residual, FluctuationKind, KineticSystem,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Default β grid of the verify command.
pub const DEFAULT_BETAS: [f64; 3] = [0.1, 1.0, 5.0];

/// Printed four-digit natural units: (mantissa, exponent) of l_p, t_p, m_p, T_p.
pub const PRINTED_NATURAL_UNITS: [(&str, i64, i32); 4] = [
    ("length", 1616, -36),
    ("time", 5392, -47),
    ("mass", 2176, -8),
    ("temperature", 1417, 29),
];

/// Frequency used to give dimensionless β a physical temperature.
pub const THERMO_NU_HZ: f64 = 1e13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: f64,
}

impl Record {
    fn gated(identity: impl Into<String>, beta: Option<f64>, residual: f64, tolerance: f64) -> Self {
        Self {
            identity: identity.into(),
            beta,
            nu_hz: None,
            temperature_k: None,
            residual,
            tolerance: Some(tolerance),
            pass: residual < tolerance,
            informational: false,
            note: None,
            elapsed_ms: 0.0,
        }
    }

    fn informational(identity: impl Into<String>, beta: Option<f64>, residual: f64, note: String) -> Self {
        Self {
            identity: identity.into(),
            beta,
            nu_hz: None,
            temperature_k: None,
            residual,
            tolerance: None,
            pass: true,
            informational: true,
            note: Some(note),
            elapsed_ms: 0.0,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedEntry {
    pub identity: String,
    pub seed: u64,
    pub substream: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub overall_pass: bool,
    pub constants: ConstantSet,
    pub betas: Vec<f64>,
    pub records: Vec<Record>,
    pub seeds: Vec<SeedEntry>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Tolerances of the gating checks, addressable by key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub cf: f64,
    pub event: f64,
    pub entropy: f64,
    pub fluctuation: f64,
    pub variance: f64,
    pub thermo: f64,
    pub zero_point: f64,
    pub kinetic_balance: f64,
    /// In standard errors.
    pub kinetic_sigma: f64,
    /// In standard errors.
    pub bit_sigma: f64,
    pub wien: f64,
    pub peak: f64,
    pub audit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cf: 1e-12,
            event: 1e-12,
            entropy: 1e-12,
            fluctuation: 1e-9,
            variance: 1e-12,
            thermo: 1e-6,
            zero_point: 1e-4,
            kinetic_balance: 1e-12,
            kinetic_sigma: 5.0,
            bit_sigma: 5.0,
            wien: 1e-12,
            peak: 0.005 / 1.60,
            audit: 1e-9,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 13] = [
        "cf",
        "event",
        "entropy",
        "fluctuation",
        "variance",
        "thermo",
        "zero-point",
        "kinetic-balance",
        "kinetic-sigma",
        "bit-sigma",
        "wien",
        "peak",
        "audit",
    ];

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {value}")));
        }
        let slot = match key {
            "cf" => &mut self.cf,
            "event" => &mut self.event,
            "entropy" => &mut self.entropy,
            "fluctuation" => &mut self.fluctuation,
            "variance" => &mut self.variance,
            "thermo" => &mut self.thermo,
            "zero-point" => &mut self.zero_point,
            "kinetic-balance" => &mut self.kinetic_balance,
            "kinetic-sigma" => &mut self.kinetic_sigma,
            "bit-sigma" => &mut self.bit_sigma,
            "wien" => &mut self.wien,
            "peak" => &mut self.peak,
            "audit" => &mut self.audit,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown tolerance key `{other}` (expected one of {})",
                    Self::KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Replaces every tolerance with `value`.
    pub fn override_all(&mut self, value: f64) -> Result<()> {
        for key in Self::KEYS {
            self.set(key, value)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub betas: Vec<f64>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub constants: PhysicalConstants,
    /// Monte Carlo sample count per law.
    pub mc_count: usize,
    /// Pair-exchange moves of the kinetic relaxation.
    pub kinetic_moves: u64,
    pub kinetic_slots: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            betas: DEFAULT_BETAS.to_vec(),
            seed: 42,
            tolerances: Tolerances::default(),
            constants: PhysicalConstants::MODERN,
            mc_count: 1_000_000,
            kinetic_moves: 1_000_000,
            kinetic_slots: 10_000,
        }
    }
}

type Check<'a> = Box<dyn Fn() -> Result<Vec<Record>> + Send + Sync + 'a>;

/// Runs every check and assembles the sorted report.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationReport> {
    if config.betas.is_empty() {
        return Err(Error::InvalidParameter("empty beta list".into()));
    }
    let params: Vec<ModeParams> = config
        .betas
        .iter()
        .map(|&b| ModeParams::from_beta(b))
        .collect::<Result<_>>()?;
    if config.mc_count == 0 {
        return Err(Error::EmptyBatch);
    }
    let tol = &config.tolerances;

    let mut seeds = Vec::new();
    let mut substream = 0u64;
    let mut next_stream = |identity: String| {
        let entry = SeedEntry {
            identity,
            seed: config.seed,
            substream,
        };
        substream += 1;
        seeds.push(entry.clone());
        entry.substream
    };

    let mut checks: Vec<Check> = Vec::new();
    for p in &params {
        let p = *p;
        checks.push(Box::new(move || Ok(cf_records(&p, tol))));
        checks.push(Box::new(move || event_records(&p, tol)));
        checks.push(Box::new(move || Ok(entropy_records(&p, tol))));
        checks.push(Box::new(move || fluctuation_records(&p, tol)));
        checks.push(Box::new(move || thermo_records(&p, tol, &config.constants)));
        checks.push(Box::new(move || Ok(audit_records(&p, tol))));
        for law in mc_laws(&p) {
            let stream = next_stream(format!("goodness-of-fit/{law} beta={}", p.beta()));
            checks.push(Box::new(move || {
                gof_record(law, &p, config.mc_count, RandomStream::new(config.seed, stream))
            }));
        }
        let stream = next_stream(format!("coupled-bits beta={}", p.beta()));
        checks.push(Box::new(move || {
            bit_records(&p, config.mc_count, tol, RandomStream::new(config.seed, stream))
        }));
    }
    checks.push(Box::new(move || zero_point_records(tol)));
    let stream = next_stream("kinetic-relaxation".into());
    checks.push(Box::new(move || {
        kinetic_records(tol, config.kinetic_moves, config.kinetic_slots, RandomStream::new(config.seed, stream))
    }));
    checks.push(Box::new(move || spectra_records(tol)));

    let results: Vec<Result<Vec<Record>>> = checks
        .par_iter()
        .map(|check| {
            let start = Instant::now();
            let mut records = check()?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            for r in &mut records {
                r.elapsed_ms = elapsed;
            }
            Ok(records)
        })
        .collect();
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    records.sort_by(|a, b| {
        a.identity
            .cmp(&b.identity)
            .then(a.beta.unwrap_or(f64::NEG_INFINITY).total_cmp(&b.beta.unwrap_or(f64::NEG_INFINITY)))
    });
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        overall_pass: records.iter().all(|r| r.pass),
        constants: config.constants.set,
        betas: config.betas.clone(),
        records,
        seeds,
    })
}

/// Truncation used for each factorization kind.
pub fn factorization_truncation(kind: FactorizationKind) -> u32 {
    match kind {
        FactorizationKind::GaussEqualsDarkTimesPlanck => 0,
        FactorizationKind::PlanckEqualsBinaryProduct => 40,
        FactorizationKind::PlanckEqualsMultipletProduct => 2000,
    }
}

fn cf_records(p: &ModeParams, tol: &Tolerances) -> Vec<Record> {
    let grid = uniform_grid(-20.0, 20.0, 401);
    FactorizationKind::ALL
        .iter()
        .map(|&kind| {
            let r = cf_factorization_residual(kind, &grid, p, factorization_truncation(kind));
            Record::gated(format!("cf-factorization/{}", kind.name()), Some(p.beta()), r, tol.cf)
        })
        .collect()
}

/// Largest relative error of `P(B_n)` against `(1-b)bⁿ` over `n < 1024`,
/// compared through logarithms so subnormal probabilities do not matter.
pub fn planck_level_residual(p: &ModeParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in 0..1024u64 {
        let via = planck_log_pmf_via_binaries(n, p, 40)?;
        let exact = p.one_minus_b().ln() - n as f64 * p.beta();
        worst = worst.max((via - exact).exp_m1().abs());
    }
    Ok(worst)
}

/// The union `(A_0 + A_3) Ā_1 Ā_2 Ā_4 Ā_5 …` as two atoms.
pub fn example_union() -> BinaryEvent {
    let tail = TailPolicy::EmptyBeyond(3);
    BinaryEvent::Union(vec![
        BinaryEvent::Atom(Atom::new(tail).occupied(0).empty(1).empty(2)),
        BinaryEvent::Atom(Atom::new(tail).occupied(3).empty(1).empty(2)),
    ])
}

/// Relative error of the example union against `(1-b)(b + b⁸ + b⁹)`.
pub fn example_union_residual(p: &ModeParams) -> Result<f64> {
    let b = p.b();
    let expected = p.one_minus_b() * (b + b.powi(8) + b.powi(9));
    Ok((event_probability(&example_union(), p)? / expected - 1.0).abs())
}

fn event_records(p: &ModeParams, tol: &Tolerances) -> Result<Vec<Record>> {
    Ok(vec![
        Record::gated("event/planck-levels", Some(p.beta()), planck_level_residual(p)?, tol.event),
        Record::gated("event/union-1-8-9", Some(p.beta()), example_union_residual(p)?, tol.event),
    ])
}

fn entropy_records(p: &ModeParams, tol: &Tolerances) -> Vec<Record> {
    let r = entropy_additivity_residuals(p, 60, 2000);
    vec![
        Record::gated("entropy-additivity/gauss-dark-planck", Some(p.beta()), r.gauss_dark_planck, tol.entropy),
        Record::gated("entropy-additivity/binary", Some(p.beta()), r.binary, tol.entropy),
        Record::gated("entropy-additivity/multiplet", Some(p.beta()), r.multiplet, tol.entropy),
    ]
}

fn fluctuation_records(p: &ModeParams, tol: &Tolerances) -> Result<Vec<Record>> {
    let n = p.mean_occupation();
    let target = n + n * n;
    let binary = fluctuation_series(FluctuationKind::Binary, p, 60)?.total;
    let multiplet = fluctuation_series(FluctuationKind::Multiplet, p, 2000)?.total;
    Ok(vec![
        Record::gated("fluctuation/binary", Some(p.beta()), (binary - target).abs(), tol.fluctuation),
        Record::gated("fluctuation/multiplet", Some(p.beta()), (multiplet - target).abs(), tol.fluctuation),
        Record::gated("fluctuation/variance-additivity", Some(p.beta()), variance_additivity_residual(p), tol.variance),
    ])
}

/// Families exercised by the temperature-consistency check.
pub fn thermo_families() -> Vec<VariableFamily> {
    vec![
        VariableFamily::Gauss,
        VariableFamily::Dark,
        VariableFamily::Planck,
        VariableFamily::Binary(0),
        VariableFamily::Binary(5),
        VariableFamily::multiplet(1).expect("m >= 1"),
        VariableFamily::multiplet(3).expect("m >= 1"),
    ]
}

fn thermo_records(p: &ModeParams, tol: &Tolerances, consts: &PhysicalConstants) -> Result<Vec<Record>> {
    let nu = THERMO_NU_HZ;
    let t = consts.h * nu / (consts.k * p.beta());
    thermo_families()
        .into_iter()
        .map(|f| {
            let mut rec = match thermo_consistency(f, nu, t, 1e-5, consts) {
                Ok(dev) => Record::gated(format!("thermo-consistency/{f}"), Some(p.beta()), dev, tol.thermo),
                Err(Error::DegenerateStep { delta_e }) => Record::informational(
                    format!("thermo-consistency/{f}"),
                    Some(p.beta()),
                    0.0,
                    format!("component frozen out, energy change {delta_e:e} erg"),
                ),
                Err(e) => return Err(e),
            };
            rec.nu_hz = Some(nu);
            rec.temperature_k = Some(t);
            Ok(rec)
        })
        .collect()
}

fn audit_records(p: &ModeParams, tol: &Tolerances) -> Vec<Record> {
    let a = dark_fluctuation_audit(p);
    vec![
        Record::gated("dark-variance/quadrature-vs-closed-form", Some(p.beta()), a.closed_vs_quadrature(), tol.audit),
        Record::informational(
            "dark-variance/printed-formula",
            Some(p.beta()),
            a.printed_residual(),
            format!(
                "printed formula gives {:.10e}, exact variance {:.10e}",
                a.printed_formula, a.closed_form
            ),
        ),
    ]
}

/// Laws sampled by the Monte Carlo checks at one β.
pub fn mc_laws(p: &ModeParams) -> Vec<SampledLaw> {
    vec![
        SampledLaw::Family(VariableFamily::Gauss),
        SampledLaw::Family(VariableFamily::Dark),
        SampledLaw::Family(VariableFamily::Planck),
        SampledLaw::Family(VariableFamily::Binary(0)),
        SampledLaw::Family(VariableFamily::multiplet(1).expect("m >= 1")),
        SampledLaw::BinarySum { s_max: default_s_max(p) },
        SampledLaw::MultipletSum { m_max: default_m_max(p) },
    ]
}

fn gof_record(law: SampledLaw, p: &ModeParams, count: usize, mut rs: RandomStream) -> Result<Vec<Record>> {
    let batch = sample(law, p, count, &mut rs)?;
    let fit = goodness_of_fit(&batch, &ExactLaw::of_sampled(law, p))?;
    let mut rec = Record::gated(format!("goodness-of-fit/{law}"), Some(p.beta()), fit.statistic, fit.threshold);
    rec.pass = fit.pass;
    Ok(vec![rec.with_note(format!("{:?}, seed substream {}", fit.test, rs.substream()))])
}

/// Bit marginals in standard errors, and the largest pairwise correlation
/// scaled by `√N`, over bits with occupation above 10⁻⁴.
pub fn coupled_bit_statistics(p: &ModeParams, count: usize, rs: &mut RandomStream) -> Result<(f64, f64)> {
    let batch = sample_coupled(p, count, rs)?;
    let parts = batch.coupled.as_ref().expect("coupled batch");
    let n = count as f64;
    let bits: Vec<u32> = (0..64)
        .filter(|&s| crate::distributions::binary_occupation(s, p).1 > 1e-4)
        .collect();
    let mut worst_marginal: f64 = 0.0;
    for &s in &bits {
        let q = crate::distributions::binary_occupation(s, p).1;
        let sigma = (q * (1.0 - q) / n).sqrt();
        worst_marginal = worst_marginal.max((parts.bit_frequency(s) - q).abs() / sigma);
    }
    let mut worst_corr: f64 = 0.0;
    for (i, &s1) in bits.iter().enumerate() {
        for &s2 in &bits[i + 1..] {
            worst_corr = worst_corr.max(parts.bit_correlation(s1, s2).abs() * n.sqrt());
        }
    }
    Ok((worst_marginal, worst_corr))
}

fn bit_records(p: &ModeParams, count: usize, tol: &Tolerances, mut rs: RandomStream) -> Result<Vec<Record>> {
    let (marginal, corr) = coupled_bit_statistics(p, count, &mut rs)?;
    Ok(vec![
        Record::gated("coupled-bits/marginals-sigma", Some(p.beta()), marginal, tol.bit_sigma),
        Record::gated("coupled-bits/correlation-sqrt-n", Some(p.beta()), corr, tol.bit_sigma),
    ])
}

fn zero_point_records(tol: &Tolerances) -> Result<Vec<Record>> {
    let p = ModeParams::from_beta(1e-4)?;
    let mean = moments(VariableFamily::Dark, &p).mean;
    let mut rec = Record::gated("zero-point/dark-mean", Some(1e-4), (0.5 - mean).abs(), tol.zero_point);
    rec.pass &= mean < 0.5;
    Ok(vec![rec.with_note(format!("dark mean {mean:.16e}"))])
}

/// The four-level system `{1, 2, 3, 4}` with the reaction `1 + 4 ⇄ 2 + 3`
/// at β = 1, started away from equilibrium by moving `shift` slots per level
/// along the reaction.
pub fn demo_kinetic_system(slots: usize, shift: f64) -> Result<KineticSystem> {
    let ks = KineticSystem::fermi(vec![1.0, 2.0, 3.0, 4.0], 1.0, vec![[0, 3, 1, 2]])?;
    let per = shift / slots as f64;
    let f = ks.fermi_occupations();
    let start = vec![f[0] + per, f[1] - per, f[2] - per, f[3] + per];
    ks.with_occupations(start)
}

/// Largest deviation of the time-averaged occupations from Fermi values in
/// standard errors.
pub fn kinetic_relaxation_sigma(moves: u64, slots: usize, rs: &mut RandomStream) -> Result<f64> {
    let ks = demo_kinetic_system(slots, 0.04 * slots as f64)?;
    let out = kinetic_relaxation(&ks, moves, slots, rs)?;
    let fermi = ks.fermi_occupations();
    Ok(out
        .occupations
        .iter()
        .zip(&fermi)
        .zip(out.standard_errors(&ks))
        .map(|((o, f), s)| (o - f).abs() / s)
        .fold(0.0, f64::max))
}

fn kinetic_records(tol: &Tolerances, moves: u64, slots: usize, mut rs: RandomStream) -> Result<Vec<Record>> {
    let fermi = KineticSystem::fermi(vec![1.0, 2.0, 3.0, 4.0], 1.0, vec![[0, 3, 1, 2]])?;
    let balance = kinetic_balance_residual(&fermi);
    let sigma = kinetic_relaxation_sigma(moves, slots, &mut rs)?;
    Ok(vec![
        Record::gated("kinetic/fermi-balance", Some(1.0), balance, tol.kinetic_balance),
        Record::gated("kinetic/relaxation-sigma", Some(1.0), sigma, tol.kinetic_sigma)
            .with_note(format!("{moves} moves, {slots} slots per level")),
    ])
}

/// Distance in grid cells between the Planck grid argmax and the Wien peak
/// for a 10⁴-point table over `[10⁹, 10¹²]` Hz at 2.728 K.
pub fn peak_grid_offset(consts: &PhysicalConstants) -> Result<f64> {
    let (lo, hi, points) = (1e9, 1e12, 10_000);
    let rows = spectrum_table(&[SpectralLaw::Planck], 2.728, lo, hi, points, consts)?;
    let best = rows
        .iter()
        .max_by(|a, b| a.u_planck.unwrap_or(0.0).total_cmp(&b.u_planck.unwrap_or(0.0)))
        .expect("non-empty table");
    let cell = (hi - lo) / (points - 1) as f64;
    Ok((best.nu_hz - wien_peak(2.728, consts)?).abs() / cell)
}

fn spectra_records(tol: &Tolerances) -> Result<Vec<Record>> {
    let modern = PhysicalConstants::MODERN;
    let peak = wien_peak(2.728, &modern)?;
    let mut records = vec![
        Record::gated("spectra/wien-root", None, wien_residual(wien_root()).abs(), tol.wien),
        Record::gated("spectra/grid-argmax-cells", None, peak_grid_offset(&modern)?, 1.0),
        Record::gated("spectra/cmb-peak", None, (peak / 1.60e11 - 1.0).abs(), tol.peak)
            .with_note(format!("peak {peak:.6e} Hz at 2.728 K")),
    ];
    let units = natural_units(&modern);
    for (name, mantissa, exponent) in PRINTED_NATURAL_UNITS {
        let value = match name {
            "length" => units.length,
            "time" => units.time,
            "mass" => units.mass,
            _ => units.temperature,
        };
        let (m, e) = significant_digits(value, 4);
        let residual = if e == exponent { (m - mantissa).abs() as f64 } else { f64::INFINITY };
        records.push(Record::informational(
            format!("natural-units/{name}"),
            None,
            residual,
            format!(
                "computed {value:.6e}, rounds to {m}e{e}, printed {mantissa}e{exponent}; residual in last-digit units"
            ),
        ));
    }
    Ok(records)
}
