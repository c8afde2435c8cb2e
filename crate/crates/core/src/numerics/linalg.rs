//! Small dense Hermitian matrices and their exponentials.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{domain, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest dimension accepted by [`HermitianMatrix::new`].
pub const DEFAULT_DIMENSION_CAP: usize = 64;

/// A validated Hermitian matrix `H = H†`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_cap(m, DEFAULT_DIMENSION_CAP)
    }

    /// Accepts `m` if it is square, at most `cap` wide and Hermitian to
    /// 1e-12 relative; the stored matrix is exactly symmetrised.
    pub fn with_cap(m: CMatrix, cap: usize) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols()));
        }
        if m.nrows() > cap {
            return domain(format!("dimension {} exceeds cap {cap}", m.nrows()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("matrix has non-finite entries");
        }
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let adjoint = m.adjoint();
        let asym = (&m - &adjoint).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > 1e-12 * scale {
            return domain(format!("matrix is not Hermitian (max |H - H†| = {asym:e})"));
        }
        Ok(Self { inner: (&m + adjoint).scale(0.5) })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { inner: CMatrix::zeros(dim, dim) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)));
        Self { inner: CMatrix::from_diagonal(&d) }
    }

    /// Random Hermitian matrix with entries uniform in the unit square.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self { inner: m }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn eigen(&self) -> Eigensystem {
        let eig = self.inner.clone().symmetric_eigen();
        Eigensystem { values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigen().values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `self + scale * other`, both Hermitian.
    pub fn add_scaled(&self, other: &HermitianMatrix, scale: f64) -> Result<HermitianMatrix> {
        if self.dim() != other.dim() {
            return domain("dimension mismatch in add_scaled");
        }
        Ok(Self { inner: &self.inner + other.inner.scale(scale) })
    }

    /// `A ⊗ 1 + B ⊗ C`, the generator of a system coupled to a clock.
    pub fn kron_sum(a: &HermitianMatrix, b: &CMatrix, c: &HermitianMatrix) -> Result<HermitianMatrix> {
        let ident = CMatrix::identity(c.dim(), c.dim());
        let m = a.inner.kronecker(&ident) + b.kronecker(&c.inner);
        HermitianMatrix::with_cap(m, usize::MAX)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigensystem {
    /// `exp(-iHt)` as a dense matrix.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &e) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -e * t);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-iHt) v`.
    pub fn apply(&self, t: f64, v: &CVector) -> CVector {
        let mut coeffs = self.vectors.adjoint() * v;
        for (c, &e) in coeffs.iter_mut().zip(&self.values) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        &self.vectors * coeffs
    }
}

/// `exp(-iHt) v` via full eigendecomposition.
pub fn matrix_exp_apply(h: &HermitianMatrix, t: f64, v: &CVector) -> Result<CVector> {
    if v.len() != h.dim() {
        return Err(Error::Domain(format!("vector length {} does not match dimension {}", v.len(), h.dim())));
    }
    if !t.is_finite() {
        return domain("time must be finite");
    }
    Ok(h.eigen().apply(t, v))
}

/// `exp(-iHt)` via full eigendecomposition.
pub fn unitary_propagator(h: &HermitianMatrix, t: f64) -> CMatrix {
    h.eigen().propagator(t)
}

/// Spectral (largest singular value) norm.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().fold(0.0, |a: f64, &s| a.max(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let v = CVector::from_vec(vec![c(0.3, 0.1), c(-1.0, 2.0), c(0.0, 0.5)]);
        let out = matrix_exp_apply(&HermitianMatrix::zeros(3), 7.3, &v).unwrap();
        assert!((out - v).norm() < 1e-15);
    }

    #[test]
    fn pauli_x_quarter_turn() {
        let sx = HermitianMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let out = matrix_exp_apply(&sx, FRAC_PI_2, &v).unwrap();
        assert!((out[0] - c(0.0, 0.0)).norm() < 1e-14);
        assert!((out[1] - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn random_six_dim_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let h = HermitianMatrix::random(6, &mut rng);
        let v = CVector::from_fn(6, |i, _| c(i as f64 - 2.5, 0.5 * i as f64));
        let out = matrix_exp_apply(&h, 3.7, &v).unwrap();
        assert!((out.norm() - v.norm()).abs() < 1e-10 * v.norm());
    }

    #[test]
    fn dimension_mismatch() {
        let v = CVector::from_vec(vec![c(1.0, 0.0)]);
        assert!(matrix_exp_apply(&HermitianMatrix::zeros(2), 1.0, &v).is_err());
    }

    #[test]
    fn rejects_non_hermitian_and_oversized() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(HermitianMatrix::new(m).is_err());
        assert!(HermitianMatrix::new(CMatrix::zeros(65, 65)).is_err());
        assert!(HermitianMatrix::with_cap(CMatrix::zeros(65, 65), 128).is_ok());
        assert!(HermitianMatrix::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn propagator_matches_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = HermitianMatrix::random(5, &mut rng);
        let eig = h.eigen();
        let u = eig.propagator(0.9);
        let v = CVector::from_fn(5, |i, _| c(1.0 / (i + 1) as f64, 0.0));
        assert!((&u * &v - eig.apply(0.9, &v)).norm() < 1e-13);
        let defect = &u * u.adjoint() - CMatrix::identity(5, 5);
        assert!(operator_norm(&defect) < 1e-12);
    }
}
