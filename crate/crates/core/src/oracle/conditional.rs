//! Dwell-time resolved propagators from a bias on a projector.
//!
//! `U(t|τ) = (2π)⁻¹ ∫dλ e^{iλτ} exp(-i(H + λπ̂)t)` is the amplitude for
//! histories that spend exactly `τ` inside the range of `π̂`. Histories that
//! never leave (or never enter) the subspace give point masses at `τ = t`
//! (`τ = 0`); these, and the jumps of the regular density at both ends, are
//! removed analytically before the discrete Fourier transform so the
//! remainder falls off like `λ⁻²`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::numerics::special::expm1_over;
use crate::numerics::{operator_norm, CMatrix, HermitianMatrix};

/// Largest system or clock dimension for the identity check.
pub const MAX_IDENTITY_DIM: usize = 8;

/// `Λ` must exceed this multiple of the system's spectral radius.
pub const LAMBDA_MARGIN: f64 = 8.0;

/// An orthogonal projector diagonal in the working basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    mask: Vec<bool>,
}

impl Projector {
    pub fn from_mask(mask: &[bool]) -> Self {
        Self { mask: mask.to_vec() }
    }

    /// Accepts a diagonal matrix with entries 0 or 1.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return domain("projector must be square");
        }
        let mut mask = Vec::with_capacity(m.nrows());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                let ok = if i == j { z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) } else { z.norm() == 0.0 };
                if !ok {
                    return domain("projector must be diagonal with entries 0 or 1");
                }
            }
            mask.push(m[(i, i)].re == 1.0);
        }
        Ok(Self { mask })
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn complement(&self) -> Self {
        Self { mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| if i == j && self.mask[i] { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    /// `π̂ M π̂'` for projectors given by `self` and `right`.
    fn sandwich(&self, m: &CMatrix, right: &Projector) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            if self.mask[i] && right.mask[j] {
                m[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// The bias grid `λ_j = -Λ + jΔλ`, `j < L`, and its conjugate dwell-time
/// grid with `Δτ = π/Λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSpec {
    lambda_max: f64,
    points: usize,
}

impl ConditionalSpec {
    pub fn new(lambda_max: f64, points: usize) -> Result<Self> {
        if !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return domain(format!("bias range must be positive, got {lambda_max}"));
        }
        if points < 16 || !points.is_power_of_two() {
            return domain(format!("grid size must be a power of two, at least 16, got {points}"));
        }
        Ok(Self { lambda_max, points })
    }

    /// `Λ = 8 ×` spectral radius (at least 1) and `L = 4096`.
    pub fn for_system(system: &HermitianMatrix) -> Self {
        Self { lambda_max: (LAMBDA_MARGIN * system.spectral_radius()).max(1.0), points: 4096 }
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn delta_lambda(&self) -> f64 {
        2.0 * self.lambda_max / self.points as f64
    }

    pub fn delta_tau(&self) -> f64 {
        PI / self.lambda_max
    }
}

/// `∫₀¹ s e^{ws} ds`
fn first_moment(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.5, 0.0);
        for k in 1..40 {
            term = term * w / k as f64;
            let next = term / (k + 2) as f64;
            sum += next;
            if next.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (w.exp() * (w - 1.0) + 1.0) / (w * w)
    }
}

/// `∫₀ᵗ e^{-icτ} dτ` and `∫₀ᵗ τ e^{-icτ} dτ`
fn moments(c: f64, t: f64) -> (Complex64, Complex64) {
    let w = Complex64::new(0.0, -c * t);
    (t * expm1_over(w), t * t * first_moment(w))
}

/// `P exp(-iPHPt) P`
fn block_propagator(h: &CMatrix, p: &Projector, t: f64) -> Result<(CMatrix, HermitianMatrix)> {
    let block = HermitianMatrix::with_cap(p.sandwich(h, p), usize::MAX)?;
    let u = block.eigen().propagator(t);
    Ok((p.sandwich(&u, p), block))
}

/// `∫₀ᵗ e^{-iB(t-s)} M e^{-iBs} ds` for Hermitian `B`.
fn sandwiched_integral(block: &HermitianMatrix, m: &CMatrix, t: f64) -> CMatrix {
    let eig = block.eigen();
    let v = &eig.vectors;
    let mut inner = v.adjoint() * m * v;
    for a in 0..inner.nrows() {
        for b in 0..inner.ncols() {
            let (ea, eb) = (eig.values[a], eig.values[b]);
            let w = Complex64::new(0.0, (ea - eb) * t);
            inner[(a, b)] *= Complex64::from_polar(t, -ea * t) * expm1_over(w);
        }
    }
    v * inner * v.adjoint()
}

/// `U(t|τ)` for one system, projector and duration, on the conjugate grid.
#[derive(Debug, Clone)]
pub struct ConditionalOperator {
    t: f64,
    tau_start: f64,
    delta_tau: f64,
    /// Fourier-transformed remainder at each `τ_k`.
    regular: Vec<CMatrix>,
    /// Regular density just after `τ = 0` and just before `τ = t`.
    start_value: CMatrix,
    end_value: CMatrix,
    /// Weights of `δ(τ)` and `δ(τ - t)`.
    at_start: CMatrix,
    at_end: CMatrix,
    truncation_estimate: f64,
}

impl ConditionalOperator {
    pub fn duration(&self) -> f64 {
        self.t
    }

    pub fn delta_tau(&self) -> f64 {
        self.delta_tau
    }

    pub fn len(&self) -> usize {
        self.regular.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regular.is_empty()
    }

    /// `τ_k`; the grid is centred on `[0, t]` and extends to negative values.
    pub fn tau(&self, k: usize) -> f64 {
        self.tau_start + k as f64 * self.delta_tau
    }

    pub fn at_start(&self) -> &CMatrix {
        &self.at_start
    }

    pub fn at_end(&self) -> &CMatrix {
        &self.at_end
    }

    /// Pointwise error estimate from truncating the bias integral at `±Λ`.
    pub fn truncation_estimate(&self) -> f64 {
        self.truncation_estimate
    }

    /// The linear interpolant between the end values, zero off `[0, t]`.
    fn endpoint_line(&self, tau: f64) -> CMatrix {
        if !(0.0..=self.t).contains(&tau) {
            return CMatrix::zeros(self.start_value.nrows(), self.start_value.ncols());
        }
        let s = tau / self.t;
        self.start_value.scale(1.0 - s) + self.end_value.scale(s)
    }

    fn endpoint_transform(&self, c: f64) -> CMatrix {
        let (m0, m1) = moments(c, self.t);
        let slope = (&self.end_value - &self.start_value) / Complex64::new(self.t, 0.0);
        self.start_value.map(|z| z * m0) + slope.map(|z| z * m1)
    }

    /// Regular density of `U(t|τ_k)`.
    pub fn density(&self, k: usize) -> CMatrix {
        &self.regular[k] + self.endpoint_line(self.tau(k))
    }

    /// `∫ U(t|τ) e^{-icτ} dτ`, summing the regular part over the whole grid
    /// in index order and adding the analytic parts exactly.
    pub fn transform(&self, c: f64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.at_start.nrows(), self.at_start.ncols());
        for (k, r) in self.regular.iter().enumerate() {
            let phase = Complex64::from_polar(self.delta_tau, -c * self.tau(k));
            acc += r.map(|z| z * phase);
        }
        acc + self.endpoint_transform(c) + &self.at_start + self.at_end.map(|z| z * Complex64::from_polar(1.0, -c * self.t))
    }
}

/// Builds [`ConditionalOperator`] for `system`, `projector` and `t`.
pub fn conditional_operator(
    system: &HermitianMatrix,
    projector: &Projector,
    t: f64,
    spec: &ConditionalSpec,
) -> Result<ConditionalOperator> {
    let d = system.dim();
    if projector.dim() != d {
        return domain(format!("projector dimension {} does not match system dimension {d}", projector.dim()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("duration must be positive, got {t}"));
    }
    let radius = system.spectral_radius();
    if spec.lambda_max < LAMBDA_MARGIN * radius {
        return Err(Error::Resolution(format!(
            "bias range {} is below {LAMBDA_MARGIN} times the spectral radius {radius:.6}",
            spec.lambda_max
        )));
    }
    let (l, dl, dtau) = (spec.points, spec.delta_lambda(), spec.delta_tau());
    let window = l as f64 * dtau;
    if window < 4.0 * t {
        return Err(Error::Resolution(format!("dwell-time window {window:.6} is too short for t = {t}")));
    }
    let h = system.matrix();
    let p = projector;
    let q = projector.complement();
    let i = Complex64::i();

    let (at_end, block_p) = block_propagator(h, p, t)?;
    let (at_start, block_q) = block_propagator(h, &q, t)?;
    let pq = p.sandwich(h, &q);
    let qp = q.sandwich(h, p);
    let start_value = (&at_start * &qp + &pq * &at_start).map(|z| -i * z) - sandwiched_integral(&block_q, &(&qp * &pq), t);
    let end_value = (&at_end * &pq + &qp * &at_end).map(|z| -i * z) - sandwiched_integral(&block_p, &(&pq * &qp), t);

    let mut op = ConditionalOperator {
        t,
        tau_start: 0.5 * t - 0.5 * window,
        delta_tau: dtau,
        regular: Vec::new(),
        start_value,
        end_value,
        at_start,
        at_end,
        truncation_estimate: 0.0,
    };

    let bias = p.matrix();
    let mut channels = vec![vec![Complex64::new(0.0, 0.0); l]; d * d];
    let mut edge: f64 = 0.0;
    for j in 0..l {
        let lambda = -spec.lambda_max + j as f64 * dl;
        let hl = HermitianMatrix::with_cap(h + bias.map(|z| z * lambda), usize::MAX)?;
        let u = hl.eigen().propagator(t);
        let remainder = u
            - &op.at_start
            - op.at_end.map(|z| z * Complex64::from_polar(1.0, -lambda * t))
            - op.endpoint_transform(lambda);
        if j == 0 || j == l - 1 {
            edge = edge.max(remainder.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        let shift = Complex64::from_polar(1.0, j as f64 * dl * op.tau_start);
        for (ch, z) in remainder.iter().enumerate() {
            channels[ch][j] = z * shift;
        }
    }
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(l);
    for buf in channels.iter_mut() {
        fft.process(buf);
    }
    let front = Complex64::from_polar(dl / TAU, -spec.lambda_max * op.tau_start);
    op.regular = (0..l)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            CMatrix::from_iterator(d, d, channels.iter().map(|c| c[k] * front * sign))
        })
        .collect();

    op.truncation_estimate = spec.lambda_max * edge / PI;
    let scale = op.start_value.iter().chain(op.end_value.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    let peak = op.regular.iter().flat_map(|r| r.iter()).map(|z| z.norm()).fold(scale, f64::max);
    if op.truncation_estimate > 1e-9 && op.truncation_estimate > 0.05 * peak {
        return Err(Error::Resolution(format!(
            "spectral leakage: truncation estimate {:.3e} against density scale {peak:.3e}",
            op.truncation_estimate
        )));
    }
    Ok(op)
}

/// One channel of `U(t|τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    pub tau: Vec<f64>,
    /// Regular density `A(j ← i, t|τ)` at each `τ`.
    pub density: Vec<Complex64>,
    /// Weight of `δ(τ)`.
    pub at_start: Complex64,
    /// Weight of `δ(τ - t)`.
    pub at_end: Complex64,
    pub delta_tau: f64,
    /// `∫U(t|τ)dτ` with the end-point parts integrated exactly; equals
    /// `⟨j|e^{-iHt}|i⟩`.
    pub total: Complex64,
    pub truncation_estimate: f64,
}

pub fn conditional_via_fourier(
    system: &HermitianMatrix,
    projector: &Projector,
    initial: usize,
    final_state: usize,
    t: f64,
    spec: &ConditionalSpec,
) -> Result<ConditionalTable> {
    let d = system.dim();
    if initial >= d || final_state >= d {
        return domain(format!("state index out of range for dimension {d}"));
    }
    let op = conditional_operator(system, projector, t, spec)?;
    let (j, i) = (final_state, initial);
    Ok(ConditionalTable {
        tau: (0..op.len()).map(|k| op.tau(k)).collect(),
        density: (0..op.len()).map(|k| op.density(k)[(j, i)]).collect(),
        at_start: op.at_start[(j, i)],
        at_end: op.at_end[(j, i)],
        delta_tau: op.delta_tau,
        total: op.transform(0.0)[(j, i)],
        truncation_estimate: op.truncation_estimate,
    })
}

/// Which part of the system drives the clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClockCoupling {
    /// Clock runs while the system is inside the projector's range.
    Running,
    /// Clock runs while the system is outside it.
    Waiting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// Operator norm of the difference between the dense propagator and
    /// the dwell-time decomposition.
    pub residual: f64,
    pub truncation_estimate: f64,
}

/// Compares `exp(-i(H ⊗ 1 + π̂ ⊗ H_c)t)` with `∫dτ U(t|τ) ⊗ exp(-iH_cτ)`
/// (or, for the waiting clock, `(1 - π̂) ⊗ H_c` with `exp(-iH_c(t - τ))`).
pub fn composite_identity_check(
    system: &HermitianMatrix,
    projector: &Projector,
    clock: &HermitianMatrix,
    t: f64,
    spec: &ConditionalSpec,
    coupling: ClockCoupling,
) -> Result<IdentityReport> {
    if system.dim() > MAX_IDENTITY_DIM || clock.dim() > MAX_IDENTITY_DIM {
        return domain(format!("identity check is limited to dimension {MAX_IDENTITY_DIM} per factor"));
    }
    let op = conditional_operator(system, projector, t, spec)?;
    let clock_eig = clock.eigen();
    if let Some(c) = clock_eig.values.iter().find(|c| c.abs() > 0.5 * spec.lambda_max) {
        return Err(Error::Resolution(format!("clock energy {c} lies outside half the bias range")));
    }
    let driven = match coupling {
        ClockCoupling::Running => projector.matrix(),
        ClockCoupling::Waiting => projector.complement().matrix(),
    };
    let exact = HermitianMatrix::kron_sum(system, &driven, clock)?.eigen().propagator(t);
    let dc = clock.dim();
    let mut approx = CMatrix::zeros(exact.nrows(), exact.ncols());
    for (a, &c) in clock_eig.values.iter().enumerate() {
        let v = clock_eig.vectors.column(a);
        let outer = v * v.adjoint();
        let block = match coupling {
            ClockCoupling::Running => op.transform(c),
            ClockCoupling::Waiting => op.transform(-c).map(|z| z * Complex64::from_polar(1.0, -c * t)),
        };
        approx += block.kronecker(&CMatrix::from_fn(dc, dc, |i, j| outer[(i, j)]));
    }
    Ok(IdentityReport { residual: operator_norm(&(exact - approx)), truncation_estimate: op.truncation_estimate })
}
