//! Brute-force checks for the closed forms.
//!
//! [`discretized`] replaces the reservoir by finitely many levels and evolves
//! exactly. [`conditional`] builds dwell-time resolved propagators from their
//! Fourier definition and checks the clock-coupling identity on small spaces.

pub mod conditional;
pub mod discretized;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::HermitianMatrix;

pub use conditional::{
    composite_identity_check, conditional_operator, conditional_via_fourier, ClockCoupling, ConditionalOperator,
    ConditionalSpec, ConditionalTable, IdentityReport, Projector,
};
pub use discretized::{build_discretized, dyson_first_order, exact_spectrum, exact_survival, DiscretizedModel, SpectrumTable, Tracked};

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "DECAYCLOCK_SEED";

/// The seed from `DECAYCLOCK_SEED`, or 42 when unset or unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// Random system and clock Hamiltonians drawn from one seeded stream.
pub fn random_pair(system_dim: usize, clock_dim: usize, seed: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let system = HermitianMatrix::random(system_dim, &mut rng);
    let clock = HermitianMatrix::random(clock_dim, &mut rng);
    (system, clock)
}
