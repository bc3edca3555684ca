//! Pair-exchange kinetics over fermionic levels.
//!
//! A quadruple `(a, b, c, d)` allows the reaction `a + b ⇄ c + d` whenever
//! `ε_a + ε_b = ε_c + ε_d`. With equal forward and backward rates the
//! stationary occupations satisfy `q_a q_b = q_c q_d`, `q = n̄/(1 - n̄)`,
//! whose solution with zero chemical potential is the Fermi occupation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::logistic;
use crate::sampling::RandomStream;

const ENERGY_REL_TOL: f64 = 1e-9;

/// `1 / (e^{βε} + 1)`.
pub fn fermi_occupation(energy: f64, beta: f64) -> f64 {
    logistic(-beta * energy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KineticSystem {
    levels: Vec<f64>,
    beta: f64,
    quadruples: Vec<[usize; 4]>,
    occupations: Vec<f64>,
}

impl KineticSystem {
    pub fn new(
        levels: Vec<f64>,
        beta: f64,
        quadruples: Vec<[usize; 4]>,
        occupations: Vec<f64>,
    ) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        if levels.is_empty() || levels.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::InvalidParameter("levels must be positive and finite".into()));
        }
        if occupations.len() != levels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} occupations for {} levels",
                occupations.len(),
                levels.len()
            )));
        }
        if occupations.iter().any(|n| !(*n > 0.0 && *n < 1.0)) {
            return Err(Error::InvalidParameter("occupations must lie in (0, 1)".into()));
        }
        for q in &quadruples {
            if q.iter().any(|&i| i >= levels.len()) {
                return Err(Error::InvalidParameter(format!("quadruple {q:?} out of range")));
            }
            let before = levels[q[0]] + levels[q[1]];
            let after = levels[q[2]] + levels[q[3]];
            if (before - after).abs() > ENERGY_REL_TOL * before.max(after) {
                return Err(Error::InvalidParameter(format!(
                    "quadruple {q:?} does not conserve energy"
                )));
            }
        }
        Ok(Self {
            levels,
            beta,
            quadruples,
            occupations,
        })
    }

    /// System initialised at the Fermi occupations.
    pub fn fermi(levels: Vec<f64>, beta: f64, quadruples: Vec<[usize; 4]>) -> Result<Self> {
        let occupations = levels.iter().map(|&e| fermi_occupation(e, beta)).collect();
        Self::new(levels, beta, quadruples, occupations)
    }

    pub fn with_occupations(self, occupations: Vec<f64>) -> Result<Self> {
        Self::new(self.levels, self.beta, self.quadruples, occupations)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn quadruples(&self) -> &[[usize; 4]] {
        &self.quadruples
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn fermi_occupations(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|&e| fermi_occupation(e, self.beta))
            .collect()
    }
}

/// `max |q_a q_b - q_c q_d|` over the quadruples, 0 when there are none.
pub fn kinetic_balance_residual(ks: &KineticSystem) -> f64 {
    let q: Vec<f64> = ks.occupations.iter().map(|n| n / (1.0 - n)).collect();
    ks.quadruples
        .iter()
        .map(|&[a, b, c, d]| (q[a] * q[b] - q[c] * q[d]).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxationOutcome {
    /// Occupations averaged over the second half of the run.
    pub occupations: Vec<f64>,
    pub final_occupations: Vec<f64>,
    pub accepted_moves: u64,
    pub slots_per_level: usize,
}

impl RelaxationOutcome {
    /// Binomial standard error of each averaged occupation at the Fermi value.
    pub fn standard_errors(&self, ks: &KineticSystem) -> Vec<f64> {
        ks.fermi_occupations()
            .iter()
            .map(|f| (f * (1.0 - f) / self.slots_per_level as f64).sqrt())
            .collect()
    }
}

/// Stochastic pair exchanges over `slots_per_level` binary slots per level.
///
/// Each move picks a quadruple and a direction with equal probability, then
/// one slot in each of the four levels; the move fires only if both source
/// slots are occupied and both target slots are empty. The initial state
/// fills `round(n̄ · slots)` slots of each level from `ks.occupations`.
pub fn kinetic_relaxation(
    ks: &KineticSystem,
    steps: u64,
    slots_per_level: usize,
    rs: &mut RandomStream,
) -> Result<RelaxationOutcome> {
    if ks.quadruples.is_empty() {
        return Err(Error::Relaxation("no quadruples".into()));
    }
    if slots_per_level < 2 {
        return Err(Error::Relaxation("need at least two slots per level".into()));
    }
    let slots = slots_per_level as u64;
    let mut state: Vec<Vec<bool>> = ks
        .occupations
        .iter()
        .map(|n| {
            let filled = (n * slots_per_level as f64).round() as usize;
            (0..slots_per_level).map(|i| i < filled).collect()
        })
        .collect();
    let mut counts: Vec<u64> = state
        .iter()
        .map(|level| level.iter().filter(|&&x| x).count() as u64)
        .collect();

    let burn_in = steps / 2;
    let mut totals = vec![0u64; counts.len()];
    let mut accepted = 0u64;
    for step in 0..steps {
        let q = ks.quadruples[rs.next_below(ks.quadruples.len() as u64) as usize];
        let [from, to] = if rs.next_u64() >> 63 == 0 {
            [[q[0], q[1]], [q[2], q[3]]]
        } else {
            [[q[2], q[3]], [q[0], q[1]]]
        };
        let picks = [
            (from[0], rs.next_below(slots) as usize),
            (from[1], rs.next_below(slots) as usize),
            (to[0], rs.next_below(slots) as usize),
            (to[1], rs.next_below(slots) as usize),
        ];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| picks[i] != picks[j]));
        if distinct
            && state[picks[0].0][picks[0].1]
            && state[picks[1].0][picks[1].1]
            && !state[picks[2].0][picks[2].1]
            && !state[picks[3].0][picks[3].1]
        {
            for (i, &(level, slot)) in picks.iter().enumerate() {
                let occupy = i >= 2;
                state[level][slot] = occupy;
                if occupy {
                    counts[level] += 1;
                } else {
                    counts[level] -= 1;
                }
            }
            accepted += 1;
        }
        if step >= burn_in {
            for (t, c) in totals.iter_mut().zip(&counts) {
                *t += c;
            }
        }
    }
    let samples = (steps - burn_in).max(1) as f64;
    let per_slot = slots_per_level as f64;
    Ok(RelaxationOutcome {
        occupations: totals
            .iter()
            .map(|&t| t as f64 / (samples * per_slot))
            .collect(),
        final_occupations: counts.iter().map(|&c| c as f64 / per_slot).collect(),
        accepted_moves: accepted,
        slots_per_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_levels() -> KineticSystem {
        KineticSystem::fermi(vec![1.0, 2.0, 3.0, 4.0], 1.0, vec![[0, 3, 1, 2]]).unwrap()
    }

    #[test]
    fn fermi_occupations_balance_exactly() {
        assert!(kinetic_balance_residual(&four_levels()) < 1e-12);
        let ks = KineticSystem::fermi(
            vec![0.3, 1.7, 2.2, 0.8, 1.2],
            2.5,
            vec![[0, 1, 3, 4], [0, 2, 3, 1], [1, 3, 0, 2]],
        )
        .unwrap();
        assert!(kinetic_balance_residual(&ks) < 1e-12);
    }

    #[test]
    fn perturbed_occupations_break_balance() {
        let ks = four_levels();
        let mut occ = ks.occupations().to_vec();
        occ[0] += 0.1;
        let ks = ks.with_occupations(occ).unwrap();
        assert!(kinetic_balance_residual(&ks) > 1e-3);
    }

    #[test]
    fn rejects_invalid_systems() {
        assert!(KineticSystem::fermi(vec![1.0, 2.0, 3.0, 4.0], 1.0, vec![[0, 1, 2, 3]]).is_err());
        assert!(KineticSystem::fermi(vec![1.0, 2.0], 1.0, vec![[0, 1, 2, 3]]).is_err());
        let ks = four_levels();
        assert!(ks.clone().with_occupations(vec![0.5, 0.5, 0.5, 1.0]).is_err());
        let empty = KineticSystem::fermi(vec![1.0, 2.0], 1.0, vec![]).unwrap();
        assert_eq!(kinetic_balance_residual(&empty), 0.0);
        let mut rs = RandomStream::new(1, 0);
        assert!(matches!(
            kinetic_relaxation(&empty, 10, 100, &mut rs),
            Err(Error::Relaxation(_))
        ));
    }

    #[test]
    fn relaxation_conserves_energy_and_is_reproducible() {
        let ks = four_levels();
        let run = |seed| {
            let mut rs = RandomStream::new(seed, 0);
            kinetic_relaxation(&ks, 20_000, 500, &mut rs).unwrap()
        };
        let a = run(3);
        assert_eq!(a, run(3));
        let energy = |occ: &[f64]| -> f64 {
            occ.iter().zip(ks.levels()).map(|(n, e)| n * e).sum()
        };
        let start: Vec<f64> = ks
            .occupations()
            .iter()
            .map(|n| (n * 500.0).round() / 500.0)
            .collect();
        assert!((energy(&a.final_occupations) - energy(&start)).abs() < 1e-9);
        assert!(a.accepted_moves > 0);
    }
}
