//! Numerical laboratory for timing the decay of an excited atom with a
//! macroscopic bosonic clock.
//!
//! Units: ħ = 1, energies and widths share one arbitrary unit, times are in
//! its inverse. The ground state sits at zero energy.

pub mod clock;
pub mod composite;
pub mod error;
pub mod markovian;
pub mod nonmarkovian;
pub mod numerics;
pub mod oracle;

pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64;
