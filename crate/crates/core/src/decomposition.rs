//! Integer/fraction split, dyadic expansion, binary-photon events and the
//! three characteristic-function factorizations.
//!
//! An atom of a [`BinaryEvent`] is a conjunction of literals `A_s`
//! (component `s` occupied) and `Ā_s` (empty) plus a tail policy:
//!
//! * `Free`: unconstrained components are unrestricted;
//! * `EmptyBeyond(k)`: every unconstrained `s > k` is empty and every
//!   unconstrained `s ≤ k` is unrestricted.
//!
//! `B_n`, the event `ξ = n`, is the atom fixing every `s ≤ k` from the bits
//! of `n` with an `EmptyBeyond(k)` tail. A union is a flat list of atoms and
//! is evaluated by inclusion-exclusion.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{characteristic_function, ModeParams, VariableFamily};
use crate::error::{domain, Error, Result};
use crate::numeric::{dyadic_scale, series_converged};

/// `(⌊y⌋, y - ⌊y⌋)`; the fraction is never 1.
pub fn split_integer_fraction(y: f64) -> Result<(u64, f64)> {
    if !(y.is_finite() && y >= 0.0) || y >= u64::MAX as f64 {
        return Err(domain("value to split", y));
    }
    let n = y.floor();
    Ok((n as u64, y - n))
}

/// The set bits of a non-negative integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicExpansion {
    n: u64,
    bits: Vec<u32>,
}

impl DyadicExpansion {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Ascending bit positions.
    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn reconstruct(&self) -> u64 {
        self.bits.iter().map(|&s| 1u64 << s).sum()
    }
}

pub fn dyadic_expansion(n: u64) -> DyadicExpansion {
    let bits = (0..64).filter(|s| (n >> s) & 1 == 1).collect();
    DyadicExpansion { n, bits }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Occupancy {
    Occupied,
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailPolicy {
    Free,
    EmptyBeyond(u32),
}

impl TailPolicy {
    fn bound(self) -> Option<u32> {
        match self {
            Self::Free => None,
            Self::EmptyBeyond(k) => Some(k),
        }
    }

    fn from_bound(bound: Option<u32>) -> Self {
        bound.map_or(Self::Free, Self::EmptyBeyond)
    }
}

/// A conjunction of literals with a tail policy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    constraints: BTreeMap<u32, Occupancy>,
    tail: TailPolicy,
    contradictory: bool,
}

impl Atom {
    pub fn new(tail: TailPolicy) -> Self {
        Self {
            constraints: BTreeMap::new(),
            tail,
            contradictory: false,
        }
    }

    /// Adds a literal. Constraining an index both ways makes the atom
    /// impossible rather than raising an error.
    pub fn with(mut self, s: u32, occupancy: Occupancy) -> Self {
        self.insert(s, occupancy);
        self
    }

    pub fn occupied(self, s: u32) -> Self {
        self.with(s, Occupancy::Occupied)
    }

    pub fn empty(self, s: u32) -> Self {
        self.with(s, Occupancy::Empty)
    }

    fn insert(&mut self, s: u32, occupancy: Occupancy) {
        if let Some(prev) = self.constraints.insert(s, occupancy) {
            if prev != occupancy {
                self.contradictory = true;
            }
        }
    }

    pub fn constraints(&self) -> &BTreeMap<u32, Occupancy> {
        &self.constraints
    }

    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradictory
    }

    /// Conjunction of two atoms.
    pub fn intersect(&self, other: &Atom) -> Atom {
        let mut out = Atom::new(TailPolicy::from_bound(match (self.tail.bound(), other.tail.bound()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }));
        out.contradictory = self.contradictory || other.contradictory;
        for (x, y) in [(self, other), (other, self)] {
            for (&s, &occ) in &y.constraints {
                let forced_empty = x.tail.bound().is_some_and(|k| s > k) && !x.constraints.contains_key(&s);
                if forced_empty && occ == Occupancy::Occupied {
                    out.contradictory = true;
                }
                out.insert(s, occ);
            }
        }
        out
    }
}

/// A single atom or a flat union of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryEvent {
    Atom(Atom),
    Union(Vec<BinaryEvent>),
}

impl BinaryEvent {
    /// `B_n = {ξ = n}` with every component above `s_max` empty.
    pub fn planck_level(n: u64, s_max: u32) -> Result<Self> {
        if s_max < 63 && n >> (s_max + 1) != 0 {
            return Err(domain("occupation number", n as f64));
        }
        let mut atom = Atom::new(TailPolicy::EmptyBeyond(s_max));
        for s in 0..=s_max.min(63) {
            let occ = if (n >> s) & 1 == 1 {
                Occupancy::Occupied
            } else {
                Occupancy::Empty
            };
            atom.insert(s, occ);
        }
        for s in 64..=s_max {
            atom.insert(s, Occupancy::Empty);
        }
        Ok(Self::Atom(atom))
    }
}

const MAX_UNION_ATOMS: usize = 20;
const TAIL_CAP: u32 = 1100;

/// Natural log of an atom's probability; `-∞` for impossible atoms.
///
/// Occupied literals contribute `-2^s β - ln(1 + e^{-2^s β})`; the dyadic
/// weights are accumulated first and multiplied by β once, so the result for
/// `B_n` carries the factor `e^{-nβ}` exactly as `(1-b)bⁿ` does.
pub fn atom_log_probability(atom: &Atom, p: &ModeParams) -> f64 {
    if atom.contradictory {
        return f64::NEG_INFINITY;
    }
    let beta = p.beta();
    let mut occupied_weight = 0.0;
    let mut log_sum = 0.0;
    for (&s, &occ) in &atom.constraints {
        let x = dyadic_scale(beta, s);
        if occ == Occupancy::Occupied {
            occupied_weight += dyadic_scale(1.0, s);
        }
        log_sum -= (-x).exp().ln_1p();
    }
    if let TailPolicy::EmptyBeyond(k) = atom.tail {
        let mut tail = 0.0;
        let mut s = k.saturating_add(1);
        while s < k.saturating_add(TAIL_CAP) {
            if !atom.constraints.contains_key(&s) {
                let term = -(-dyadic_scale(beta, s)).exp().ln_1p();
                tail += term;
                if series_converged(term, tail) {
                    break;
                }
            }
            s += 1;
        }
        log_sum += tail;
    }
    -(occupied_weight * beta) + log_sum
}

/// Probability of an event.
///
/// Contradictory atoms have probability 0. Unions nested inside unions, and
/// unions of more than 20 atoms, are rejected.
pub fn event_probability(event: &BinaryEvent, p: &ModeParams) -> Result<f64> {
    match event {
        BinaryEvent::Atom(atom) => Ok(atom_log_probability(atom, p).exp()),
        BinaryEvent::Union(members) => {
            let atoms = union_atoms(members)?;
            let mut total = 0.0;
            for mask in 1u32..(1 << atoms.len()) {
                let mut chosen = atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1);
                let first = chosen.next().expect("non-empty mask").1;
                let joint = chosen.fold((*first).clone(), |acc, (_, a)| acc.intersect(a));
                let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
                total += sign * atom_log_probability(&joint, p).exp();
            }
            Ok(total)
        }
    }
}

/// Natural log of [`event_probability`].
pub fn event_log_probability(event: &BinaryEvent, p: &ModeParams) -> Result<f64> {
    match event {
        BinaryEvent::Atom(atom) => Ok(atom_log_probability(atom, p)),
        union => Ok(event_probability(union, p)?.ln()),
    }
}

fn union_atoms(members: &[BinaryEvent]) -> Result<Vec<&Atom>> {
    if members.is_empty() {
        return Err(Error::MalformedEvent("empty union".into()));
    }
    if members.len() > MAX_UNION_ATOMS {
        return Err(Error::MalformedEvent(format!(
            "union of {} atoms exceeds the limit of {MAX_UNION_ATOMS}",
            members.len()
        )));
    }
    members
        .iter()
        .map(|m| match m {
            BinaryEvent::Atom(a) => Ok(a),
            BinaryEvent::Union(_) => Err(Error::MalformedEvent("nested union".into())),
        })
        .collect()
}

/// `P(ξ = n)` assembled from independent binary components.
pub fn planck_pmf_via_binaries(n: u64, p: &ModeParams, s_max: u32) -> Result<f64> {
    event_probability(&BinaryEvent::planck_level(n, s_max)?, p)
}

/// `ln P(ξ = n)` assembled from independent binary components.
pub fn planck_log_pmf_via_binaries(n: u64, p: &ModeParams, s_max: u32) -> Result<f64> {
    event_log_probability(&BinaryEvent::planck_level(n, s_max)?, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorizationKind {
    /// `φ_η = φ_ζ · φ_ξ`
    GaussEqualsDarkTimesPlanck,
    /// `φ_ξ = Π_{s ≤ truncation} φ_{u_s}`
    PlanckEqualsBinaryProduct,
    /// `φ_ξ = Π_{m ≤ truncation} φ_{x_m}`
    PlanckEqualsMultipletProduct,
}

impl FactorizationKind {
    pub const ALL: [Self; 3] = [
        Self::GaussEqualsDarkTimesPlanck,
        Self::PlanckEqualsBinaryProduct,
        Self::PlanckEqualsMultipletProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::GaussEqualsDarkTimesPlanck => "gauss-dark-planck",
            Self::PlanckEqualsBinaryProduct => "planck-binary-product",
            Self::PlanckEqualsMultipletProduct => "planck-multiplet-product",
        }
    }
}

fn factorization_gap(kind: FactorizationKind, t: f64, p: &ModeParams, truncation: u32) -> f64 {
    let planck = characteristic_function(VariableFamily::Planck, t, p);
    let (lhs, rhs) = match kind {
        FactorizationKind::GaussEqualsDarkTimesPlanck => (
            characteristic_function(VariableFamily::Gauss, t, p),
            characteristic_function(VariableFamily::Dark, t, p) * planck,
        ),
        FactorizationKind::PlanckEqualsBinaryProduct => (
            planck,
            (0..=truncation)
                .map(|s| characteristic_function(VariableFamily::Binary(s), t, p))
                .product(),
        ),
        FactorizationKind::PlanckEqualsMultipletProduct => (
            planck,
            (1..=truncation.max(1))
                .map(|m| {
                    let f = VariableFamily::multiplet(m).expect("m >= 1");
                    characteristic_function(f, t, p)
                })
                .product(),
        ),
    };
    (lhs - rhs).norm()
}

/// Largest `|LHS - RHS|` over the grid. The dark-planck identity has two
/// factors and ignores `truncation`; the multiplet product starts at `m = 1`.
pub fn cf_factorization_residual(
    kind: FactorizationKind,
    t_grid: &[f64],
    p: &ModeParams,
    truncation: u32,
) -> f64 {
    t_grid
        .par_iter()
        .map(|&t| factorization_gap(kind, t, p, truncation))
        .reduce(|| 0.0, f64::max)
}

/// `Σ_{m=1..M} (b^m/m)(e^{imt} - 1)`.
pub fn poisson_logcf_partial(t: f64, p: &ModeParams, terms: u32) -> Result<Complex64> {
    if terms == 0 {
        return Err(domain("series length", 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..=terms {
        let mf = m as f64;
        let lambda = (-mf * p.beta()).exp() / mf;
        if lambda == 0.0 {
            break;
        }
        let half = 0.5 * mf * t;
        let (sin_half, cos_half) = half.sin_cos();
        // e^{iθ} - 1 = 2i sin(θ/2) e^{iθ/2}, free of cancellation near θ = 0.
        let phase = Complex64::new(-2.0 * sin_half * sin_half, 2.0 * sin_half * cos_half);
        sum += lambda * phase;
    }
    Ok(sum)
}

/// Principal logarithm of the Planck CF, `ln(1-b) - ln(1 - b e^{it})`.
///
/// `Re(1 - b e^{it}) ≥ 1 - b > 0`, so the principal branch is continuous in t.
pub fn planck_log_cf(t: f64, p: &ModeParams) -> Complex64 {
    let denom = Complex64::new(1.0, 0.0) - p.b() * Complex64::cis(t);
    Complex64::new(p.one_minus_b().ln(), 0.0) - denom.ln()
}

/// Uniform grid of `points` values over `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|i| lo + i as f64 * step).collect()
        }
    }
}
