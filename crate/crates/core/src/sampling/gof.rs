//! Goodness-of-fit tests against the exact laws at the 1% level.
//!
//! Lattice laws use Pearson's chi-square. Classes are consecutive lattice
//! points merged left to right until each expected count reaches 5; the last
//! class collects the whole upper tail. Continuous laws use the
//! Kolmogorov-Smirnov distance with the asymptotic critical value
//! `1.6276/√N`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use super::{SampleBatch, SampledLaw};
use crate::distributions::{
    binary_occupation, dark_cdf, gauss_cdf, multiplet_pmf, planck_pmf, ModeParams,
    VariableFamily,
};
use crate::error::{Error, Result};
use crate::numeric::dyadic_scale;

/// Asymptotic 1% critical value of `√N · D_N`.
pub const KS_CRITICAL_1PCT: f64 = 1.627_623_611_518_950_2;
const SIGNIFICANCE: f64 = 0.01;
const MIN_EXPECTED: f64 = 5.0;
const MAX_CLASSES: u64 = 1_000_000;

/// Reference law for a goodness-of-fit test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExactLaw {
    Gauss(ModeParams),
    Dark(ModeParams),
    Planck(ModeParams),
    Binary(u32, ModeParams),
    Multiplet(u32, ModeParams),
    StandardNormal,
}

impl ExactLaw {
    pub fn of_family(family: VariableFamily, p: &ModeParams) -> Self {
        match family {
            VariableFamily::Gauss => Self::Gauss(*p),
            VariableFamily::Dark => Self::Dark(*p),
            VariableFamily::Planck => Self::Planck(*p),
            VariableFamily::Binary(s) => Self::Binary(s, *p),
            VariableFamily::Multiplet(m) => Self::Multiplet(m.get(), *p),
        }
    }

    /// The component sums are tested against the Planck law they rebuild.
    pub fn of_sampled(law: SampledLaw, p: &ModeParams) -> Self {
        match law {
            SampledLaw::Family(f) => Self::of_family(f, p),
            SampledLaw::BinarySum { .. } | SampledLaw::MultipletSum { .. } => Self::Planck(*p),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Planck(_) | Self::Binary(..) | Self::Multiplet(..))
    }

    /// CDF of a continuous law.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Gauss(p) => gauss_cdf(x, p),
            Self::Dark(p) => dark_cdf(x, p),
            Self::StandardNormal => Normal::standard().cdf(x),
            _ => panic!("cdf requested for a lattice law"),
        }
    }

    fn lattice_step(&self) -> f64 {
        match self {
            Self::Binary(s, _) => dyadic_scale(1.0, *s),
            Self::Multiplet(m, _) => *m as f64,
            _ => 1.0,
        }
    }

    fn lattice_pmf(&self, k: u64) -> f64 {
        match self {
            Self::Planck(p) => planck_pmf(k, p),
            Self::Binary(s, p) => {
                let (empty, occupied) = binary_occupation(*s, p);
                match k {
                    0 => empty,
                    1 => occupied,
                    _ => 0.0,
                }
            }
            Self::Multiplet(m, p) => multiplet_pmf(*m, k, p).unwrap_or(0.0),
            _ => 0.0,
        }
    }

    fn lattice_index(&self, value: f64) -> Option<u64> {
        let k = value / self.lattice_step();
        if k.is_nan() || k < 0.0 || k.fract() != 0.0 || k >= u64::MAX as f64 {
            return None;
        }
        let k = k as u64;
        if matches!(self, Self::Binary(..)) && k > 1 {
            return None;
        }
        Some(k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FitTest {
    ChiSquare { classes: usize },
    KolmogorovSmirnov,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub test: FitTest,
}

pub fn goodness_of_fit(batch: &SampleBatch, reference: &ExactLaw) -> Result<GoodnessOfFit> {
    fit_values(&batch.values, reference)
}

pub fn fit_values(values: &[f64], reference: &ExactLaw) -> Result<GoodnessOfFit> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if reference.is_discrete() {
        Ok(chi_square(values, reference))
    } else {
        let statistic = ks_statistic(values, |x| reference.cdf(x))?;
        let threshold = KS_CRITICAL_1PCT / (values.len() as f64).sqrt();
        Ok(GoodnessOfFit {
            statistic,
            threshold,
            pass: statistic < threshold,
            test: FitTest::KolmogorovSmirnov,
        })
    }
}

/// `sup |F_N(x) - F(x)|`.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max))
}

fn chi_square(values: &[f64], law: &ExactLaw) -> GoodnessOfFit {
    let n = values.len() as f64;

    let mut expected = Vec::new();
    let mut cumulative: f64 = 0.0;
    loop {
        let k = expected.len() as u64;
        let tail = (1.0 - cumulative).max(0.0);
        if n * tail < MIN_EXPECTED || k >= MAX_CLASSES {
            break;
        }
        let q = law.lattice_pmf(k);
        expected.push(n * q);
        cumulative += q;
    }
    let tail_start = expected.len();
    expected.push(n * (1.0 - cumulative).max(0.0));

    let mut observed = vec![0u64; expected.len()];
    let mut invalid = false;
    for &v in values {
        match law.lattice_index(v) {
            Some(k) => observed[(k as usize).min(tail_start)] += 1,
            None => invalid = true,
        }
    }

    let mut classes: Vec<(f64, u64)> = Vec::new();
    let (mut acc_e, mut acc_o) = (0.0, 0u64);
    for (e, o) in expected.iter().zip(&observed) {
        acc_e += e;
        acc_o += o;
        if acc_e >= MIN_EXPECTED {
            classes.push((acc_e, acc_o));
            acc_e = 0.0;
            acc_o = 0;
        }
    }
    if acc_e > 0.0 || acc_o > 0 {
        match classes.last_mut() {
            Some(last) => {
                last.0 += acc_e;
                last.1 += acc_o;
            }
            None => classes.push((acc_e, acc_o)),
        }
    }

    let test = FitTest::ChiSquare {
        classes: classes.len(),
    };
    if invalid {
        return GoodnessOfFit {
            statistic: f64::INFINITY,
            threshold: 0.0,
            pass: false,
            test,
        };
    }
    if classes.len() < 2 {
        return GoodnessOfFit {
            statistic: 0.0,
            threshold: 0.0,
            pass: true,
            test,
        };
    }
    let statistic = classes
        .iter()
        .map(|&(e, o)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let dof = (classes.len() - 1) as f64;
    let threshold = ChiSquared::new(dof)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - SIGNIFICANCE);
    GoodnessOfFit {
        statistic,
        threshold,
        pass: statistic < threshold,
        test,
    }
}
