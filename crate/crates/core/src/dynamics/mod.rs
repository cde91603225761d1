//! Planar equations of motion in the rotating frame.
//!
//! ```text
//! x'' - 2 n y' = dU1/dx - W1 n1 / r1^2
//! y'' + 2 n x' = dU1/dy - W1 n2 / r1^2
//! U1 = n^2 (x^2 + y^2) / 2 + (1 - mu) q1 / r1 + mu / r2 + mu A2 / (2 r2^3)
//! ```
//!
//! with the drag components
//! `n1 = (x + mu)[(x + mu) x' + y y'] / r1^2 + x' - n y` and
//! `n2 = y[(x + mu) x' + y y'] / r1^2 + y' + n (x + mu)`.

mod integrate;

pub use integrate::{integrate, IntegrateOptions, Method, Trajectory};

use nalgebra::{Complex, Matrix4};
use serde::{Deserialize, Serialize};

use crate::equilibria::{equilibrium_residual, EquilibriumPoint};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Distances below this count as a collision with a primary.
pub const COLLISION_RADIUS: f64 = 1e-12;

/// Position and velocity in the rotating frame at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl PhaseState {
    pub fn new(t: f64, x: f64, y: f64, vx: f64, vy: f64) -> Self {
        Self { t, x, y, vx, vy }
    }

    pub fn at_rest(x: f64, y: f64) -> Self {
        Self::new(0.0, x, y, 0.0, 0.0)
    }

    pub fn vector(&self) -> [f64; 4] {
        [self.x, self.y, self.vx, self.vy]
    }

    pub fn from_vector(t: f64, v: [f64; 4]) -> Self {
        Self::new(t, v[0], v[1], v[2], v[3])
    }

    /// Image under the reversing symmetry `(x, y, x', y') -> (x, -y, -x', y')`
    /// of the drag-free flow; following it forward retraces the original orbit.
    pub fn time_reversed(&self) -> Self {
        Self { t: self.t, x: self.x, y: -self.y, vx: -self.vx, vy: self.vy }
    }

    pub fn is_finite(&self) -> bool {
        self.vector().iter().all(|c| c.is_finite()) && self.t.is_finite()
    }
}

/// `(r1, r2)`: distances to the radiating primary at `(-mu, 0)` and the
/// oblate one at `(1 - mu, 0)`.
pub fn primary_distances(x: f64, y: f64, mu: f64) -> (f64, f64) {
    ((x + mu).hypot(y), (x + mu - 1.0).hypot(y))
}

/// The effective potential `U1`.
pub fn potential(x: f64, y: f64, params: &SystemParams) -> f64 {
    let SystemParams { mu, q1, a2, n, .. } = *params;
    let (r1, r2) = primary_distances(x, y, mu);
    n * n * (x * x + y * y) / 2.0 + (1.0 - mu) * q1 / r1 + mu / r2 + mu * a2 / (2.0 * r2.powi(3))
}

/// Analytic gradient of [`potential`].
pub fn potential_gradient(x: f64, y: f64, params: &SystemParams) -> (f64, f64) {
    let SystemParams { mu, q1, a2, n, .. } = *params;
    let (r1, r2) = primary_distances(x, y, mu);
    let k1 = (1.0 - mu) * q1 / r1.powi(3);
    let k2 = mu / r2.powi(3) + 1.5 * mu * a2 / r2.powi(5);
    let n2 = n * n;
    (n2 * x - k1 * (x + mu) - k2 * (x + mu - 1.0), n2 * y - k1 * y - k2 * y)
}

fn check_distances(x: f64, y: f64, mu: f64) -> Result<(f64, f64)> {
    let (r1, r2) = primary_distances(x, y, mu);
    if r1 < COLLISION_RADIUS || r2 < COLLISION_RADIUS {
        Err(Error::Collision { r1, r2 })
    } else {
        Ok((r1, r2))
    }
}

/// `(x'', y'')` including Coriolis, potential and drag terms.
pub fn acceleration(state: &PhaseState, params: &SystemParams) -> Result<(f64, f64)> {
    let PhaseState { x, y, vx, vy, .. } = *state;
    let (r1, _) = check_distances(x, y, params.mu)?;
    let n = params.n;
    let (gx, gy) = potential_gradient(x, y, params);
    let xm = x + params.mu;
    let radial = (xm * vx + y * vy) / (r1 * r1);
    let n1 = xm * radial + vx - n * y;
    let n2 = y * radial + vy + n * xm;
    let drag = params.w1 / (r1 * r1);
    Ok((2.0 * n * vy + gx - drag * n1, -2.0 * n * vx + gy - drag * n2))
}

/// Right-hand side of the first-order system `(x, y, x', y')' = f(state)`.
pub(crate) fn derivative(state: &PhaseState, params: &SystemParams) -> Result<[f64; 4]> {
    let (ax, ay) = acceleration(state, params)?;
    Ok([state.vx, state.vy, ax, ay])
}

/// Jacobi integral `2 U1 - v^2`; conserved only when `W1 = 0`.
pub fn jacobi_constant(state: &PhaseState, params: &SystemParams) -> f64 {
    2.0 * potential(state.x, state.y, params) - (state.vx * state.vx + state.vy * state.vy)
}

/// Variational matrix at an equilibrium and its eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearization {
    pub matrix: Matrix4<f64>,
    pub eigenvalues: Vec<Complex<f64>>,
}

impl Linearization {
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Positive imaginary parts in decreasing order.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.eigenvalues.iter().filter(|l| l.im > 0.0).map(|l| l.im).collect();
        f.sort_by(|a, b| b.total_cmp(a));
        f
    }
}

/// Largest residual norm accepted by [`linearize`].
pub const LINEARIZE_RESIDUAL_LIMIT: f64 = 1e-6;

/// Central-difference Jacobian of the first-order system at `point` (step 1e-7).
pub fn linearize(point: &EquilibriumPoint, params: &SystemParams) -> Result<Linearization> {
    let (rx, ry) = equilibrium_residual(point, params)?;
    let residual = rx.hypot(ry);
    if residual > LINEARIZE_RESIDUAL_LIMIT {
        return Err(Error::NotEquilibrium { residual, limit: LINEARIZE_RESIDUAL_LIMIT });
    }
    let h = 1e-7;
    let base = PhaseState::at_rest(point.x, point.y).vector();
    let mut matrix = Matrix4::zeros();
    for j in 0..4 {
        let mut plus = base;
        let mut minus = base;
        plus[j] += h;
        minus[j] -= h;
        let fp = derivative(&PhaseState::from_vector(0.0, plus), params)?;
        let fm = derivative(&PhaseState::from_vector(0.0, minus), params)?;
        for i in 0..4 {
            matrix[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let eigenvalues = matrix.complex_eigenvalues().iter().copied().collect();
    Ok(Linearization { matrix, eigenvalues })
}
