//! Exact decomposition of a thermal radiation mode's energy.
//!
//! The exponential mode energy η splits into its integer part ξ (Planck–Bose
//! geometric law) and its fractional part ζ (the dark variable). The integer
//! part splits further, either into independent binary components `u_s`
//! carrying `2^s` quanta or into independent Poisson multiplets `x_m`
//! carrying `m` quanta each. This crate evaluates every law involved, checks
//! the identities connecting them analytically and by seeded Monte Carlo,
//! and provides the physical spectra built on them.
//!
//! ```
//! use blackbody_decomp::{moments, ModeParams, VariableFamily};
//!
//! let p = ModeParams::from_beta(1.0).unwrap();
//! let planck = moments(VariableFamily::Planck, &p);
//! assert!((planck.mean - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-15);
//! ```

pub mod decomposition;
pub mod distributions;
pub mod error;
pub mod numeric;
pub mod report;
pub mod sampling;
pub mod spectra;
pub mod thermodynamics;

#[cfg(test)]
mod testutil;

pub use decomposition::{
    cf_factorization_residual, dyadic_expansion, event_probability, planck_pmf_via_binaries,
    poisson_logcf_partial, split_integer_fraction, Atom, BinaryEvent, DyadicExpansion,
    FactorizationKind, Occupancy, TailPolicy,
};
pub use distributions::{
    characteristic_function, moments, ConstantSet, ModeParams, MomentSummary, PhysicalConstants,
    VariableFamily,
};
pub use error::{Error, Result};
pub use report::{run_verification, Record, Tolerances, VerificationReport, VerifyConfig};
pub use sampling::{
    goodness_of_fit, sample, sample_coupled, ExactLaw, GoodnessOfFit, RandomStream, SampleBatch,
    SampledLaw,
};
pub use spectra::{natural_units, spectral_density, wien_peak, NaturalUnits, SpectralLaw};
pub use thermodynamics::{entropy_of, mean_energy_of, BandSpec, KineticSystem};
