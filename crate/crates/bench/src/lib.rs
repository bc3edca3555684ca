//! Shared fixtures for the criterion benchmarks.

use blackbody_decomp::decomposition::uniform_grid;
use blackbody_decomp::distributions::ModeParams;

pub const BENCH_BETAS: [f64; 3] = [0.1, 1.0, 5.0];

/// The 401-point grid on `[-20, 20]` used by the factorization checks.
pub fn cf_grid() -> Vec<f64> {
    uniform_grid(-20.0, 20.0, 401)
}

pub fn mode(beta: f64) -> ModeParams {
    ModeParams::from_beta(beta).expect("positive beta")
}
