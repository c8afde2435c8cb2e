//! Shared numerical kernels.

pub mod linalg;
pub mod quadrature;
pub mod special;

pub use linalg::{matrix_exp_apply, operator_norm, unitary_propagator, CMatrix, CVector, Eigensystem, HermitianMatrix};
pub use quadrature::{integrate_complex, integrate_real, kronrod_rule, Integral, Method, QuadratureSpec};
pub use special::{erf, erfc, log_binomial};
