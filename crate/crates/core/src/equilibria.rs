//! Triangular equilibrium points L4/L5.
//!
//! Two closed forms are provided: the first-order perturbed point (radiation
//! through `delta`, oblateness and drag as first-order shifts) and the
//! small-`eps` series around the classical point. Neither is exact once
//! `A2` or `W1` is nonzero, so [`refine_equilibrium`] polishes either one
//! with Newton's method on the rest-state residual.

use serde::{Deserialize, Serialize};

use crate::dynamics::{potential_gradient, primary_distances, COLLISION_RADIUS};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Which of the two triangular points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Leading point, `y > 0`.
    L4,
    /// Trailing point, `y < 0`.
    L5,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::L4 => 1.0,
            Branch::L5 => -1.0,
        }
    }
}

/// How a point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Full,
    Series,
    Classical,
    /// Newton-polished root of the rest-state residual.
    Refined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    pub x: f64,
    pub y: f64,
    pub branch: Branch,
    pub formula: Formula,
}

impl EquilibriumPoint {
    pub fn mirrored(&self) -> Self {
        let branch = match self.branch {
            Branch::L4 => Branch::L5,
            Branch::L5 => Branch::L4,
        };
        Self { y: -self.y, branch, ..*self }
    }
}

/// Constant of the second-order residual bound `C (eps + A2 + W1)^2` for the
/// full first-order point at `mu = 0.1`.
///
/// Calibrated against finite-difference residuals on `eps, A2, W1 <= 0.01`
/// (largest observed ratio about 22.8, at pure drag).
pub const RESIDUAL_BOUND_CONSTANT: f64 = 25.0;

/// First-order perturbed triangular point.
///
/// With `A2 = W1 = 0` this is the photogravitational point
/// `(delta^2/2 - mu, +-delta sqrt(1 - delta^2/4))`. The bracket under the
/// square root for `y` is evaluated as is, not expanded.
pub fn triangular_point_full(params: &SystemParams, branch: Branch) -> Result<EquilibriumPoint> {
    let SystemParams { mu, a2, w1, n, delta, .. } = *params;
    let d2 = delta * delta;
    let x0 = d2 / 2.0 - mu;
    let y0 = delta * (1.0 - d2 / 4.0).sqrt();
    if y0 == 0.0 || mu * (1.0 - mu) == 0.0 {
        return Err(Error::DegeneratePoint("y0 or mu(1-mu) vanishes".into()));
    }
    if params.is_classical() {
        return Ok(EquilibriumPoint {
            x: 0.5 - mu,
            y: branch.sign() * 3f64.sqrt() / 2.0,
            branch,
            formula: Formula::Classical,
        });
    }
    let drag_scale = n * w1 / (3.0 * mu * (1.0 - mu));

    // x0 * {1 - drag / (y0 x0) - (d2/2) A2 / x0}, with x0 distributed so x0 = 0 is harmless
    let x_drag = drag_scale * ((1.0 - mu) * (1.0 + 2.5 * a2) + mu * (1.0 - a2 / 2.0) * d2 / 2.0) / y0;
    let x = x0 - x_drag - d2 / 2.0 * a2;

    let y_drag = drag_scale
        * d2
        * (2.0 * mu - 1.0 - mu * (1.0 - 1.5 * a2) * d2 / 2.0 + 7.0 * (1.0 - mu) * a2 / 2.0)
        / y0.powi(3);
    let bracket = 1.0 - y_drag - d2 * (1.0 - d2 / 2.0) * a2 / (y0 * y0);
    if bracket < 0.0 {
        return Err(Error::DegeneratePoint(format!(
            "negative bracket {bracket} under the square root for y"
        )));
    }
    let y = y0 * bracket.sqrt();

    Ok(EquilibriumPoint { x, y: branch.sign() * y, branch, formula: Formula::Full })
}

/// L4 in series form together with the shifted origin `a = x + mu`, `b = y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub y: f64,
    pub a: f64,
    pub b: f64,
    /// Set when `|eps| > 0.1`, where the truncated series is unreliable.
    pub accuracy_warning: bool,
}

impl SeriesPoint {
    pub fn point(&self) -> EquilibriumPoint {
        EquilibriumPoint { x: self.x, y: self.y, branch: Branch::L4, formula: Formula::Series }
    }
}

pub fn series_point_l4(params: &SystemParams) -> SeriesPoint {
    let SystemParams { eps, a2, w1, gamma, .. } = *params;
    let s3 = 3f64.sqrt();
    let x = gamma / 2.0 - eps / 3.0 - a2 / 2.0 + a2 * eps / 3.0
        - (9.0 + gamma) / (6.0 * s3) * w1
        - 4.0 * gamma * eps / (27.0 * s3) * w1;
    let y_bracket = 1.0 - 2.0 * eps / 9.0 - a2 / 3.0 - 2.0 * a2 * eps / 9.0
        + (1.0 + gamma) / (9.0 * s3) * w1
        - 4.0 * gamma * eps / (27.0 * s3) * w1;
    let y = s3 / 2.0 * y_bracket;
    let a = 0.5
        * (1.0 - 2.0 * eps / 3.0 - a2 + 2.0 * a2 * eps / 3.0
            - (9.0 + gamma) / (3.0 * s3) * w1
            - 8.0 * gamma * eps / (27.0 * s3) * w1);
    SeriesPoint { x, y, a, b: y, accuracy_warning: eps.abs() > 0.1 }
}

/// Right-hand sides `(U_x, U_y)` at rest.
///
/// At zero velocity the drag terms reduce to `n1 = -n y`, `n2 = n (x + mu)`.
pub fn equilibrium_residual(point: &EquilibriumPoint, params: &SystemParams) -> Result<(f64, f64)> {
    rest_residual(point.x, point.y, params)
}

pub(crate) fn rest_residual(x: f64, y: f64, params: &SystemParams) -> Result<(f64, f64)> {
    let (r1, r2) = primary_distances(x, y, params.mu);
    if r1 < COLLISION_RADIUS || r2 < COLLISION_RADIUS {
        return Err(Error::Collision { r1, r2 });
    }
    let (gx, gy) = potential_gradient(x, y, params);
    let n = params.n;
    let drag = params.w1 / (r1 * r1);
    Ok((gx + drag * n * y, gy - drag * n * (x + params.mu)))
}

/// Newton iteration on the rest-state residual, seeded by `seed`.
///
/// Stops when the residual norm falls below `tol` (or after 50 steps).
pub fn refine_equilibrium(
    seed: &EquilibriumPoint,
    params: &SystemParams,
    tol: f64,
) -> Result<EquilibriumPoint> {
    let (mut x, mut y) = (seed.x, seed.y);
    let h = 1e-7;
    for _ in 0..50 {
        let (rx, ry) = rest_residual(x, y, params)?;
        if rx.hypot(ry) <= tol {
            return Ok(EquilibriumPoint { x, y, branch: seed.branch, formula: Formula::Refined });
        }
        let (rxp, ryp) = rest_residual(x + h, y, params)?;
        let (rxm, rym) = rest_residual(x - h, y, params)?;
        let (rxq, ryq) = rest_residual(x, y + h, params)?;
        let (rxn, ryn) = rest_residual(x, y - h, params)?;
        let j11 = (rxp - rxm) / (2.0 * h);
        let j21 = (ryp - rym) / (2.0 * h);
        let j12 = (rxq - rxn) / (2.0 * h);
        let j22 = (ryq - ryn) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-14 {
            return Err(Error::DegeneratePoint("singular Jacobian in Newton refinement".into()));
        }
        x -= (j22 * rx - j12 * ry) / det;
        y -= (-j21 * rx + j11 * ry) / det;
    }
    let (rx, ry) = rest_residual(x, y, params)?;
    if rx.hypot(ry) <= tol {
        Ok(EquilibriumPoint { x, y, branch: seed.branch, formula: Formula::Refined })
    } else {
        Err(Error::NotEquilibrium { residual: rx.hypot(ry), limit: tol })
    }
}
