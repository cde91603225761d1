//! Linear stability of the triangular points.
//!
//! The quadratic part of the Hamiltonian about L4 is
//! `H2 = (px^2 + py^2)/2 + n (y px - x py) + E x^2 + F y^2 + G x y`.
//! Frequencies are taken from the closed sum/product relations; the quartic
//! built from `E`, `F`, `G` is kept as an independent check.

use nalgebra::{Complex, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Coefficients of `x^2`, `y^2`, `x y` in `H2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub e: f64,
    pub f: f64,
    /// `G` exactly as printed; vanishes in the classical limit.
    pub g_printed: f64,
    /// `G` with the classical term `-(3 sqrt3 / 4) gamma` restored.
    pub g_corrected: f64,
    pub n: f64,
}

pub fn quadratic_coeffs(params: &SystemParams) -> QuadraticForm {
    let SystemParams { eps, a2, w1, gamma, n, .. } = *params;
    let w = w1 / SQRT3;
    let e = (2.0 - 6.0 * eps - 3.0 * a2 - 31.0 * a2 * eps / 2.0 - 69.0 * w / 6.0
        + gamma * (2.0 * eps + 12.0 * a2 + a2 * eps / 3.0 + 199.0 * w / 6.0))
        / 16.0;
    let f = -(10.0 - 2.0 * eps + 21.0 * a2 - 717.0 * a2 * eps / 18.0 - 67.0 * w / 6.0
        + gamma * (6.0 * eps - 293.0 * a2 * eps / 18.0 + 187.0 * w / 6.0))
        / 16.0;
    let g_printed = SQRT3 / 8.0
        * (2.0 * eps + 6.0 * a2 - 37.0 * a2 * eps / 2.0 - 13.0 * w / 2.0
            - gamma * (6.0 * eps - eps / 3.0 + 13.0 * a2 - 33.0 * a2 * eps / 2.0 + 11.0 * w / 2.0));
    let g_corrected = g_printed - 3.0 * SQRT3 / 4.0 * gamma;
    QuadraticForm { e, f, g_printed, g_corrected, n }
}

/// Which `G` enters the quartic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GVariant {
    Printed,
    Corrected,
}

impl QuadraticForm {
    pub fn g(&self, variant: GVariant) -> f64 {
        match variant {
            GVariant::Printed => self.g_printed,
            GVariant::Corrected => self.g_corrected,
        }
    }
}

/// `(c2, c0)` of `lambda^4 + c2 lambda^2 + c0 = 0`.
pub fn characteristic_quartic(qf: &QuadraticForm, variant: GVariant) -> (f64, f64) {
    let QuadraticForm { e, f, n, .. } = *qf;
    let g = qf.g(variant);
    let n2 = n * n;
    (2.0 * (e + f + n2), 4.0 * e * f - g * g + n2 * n2 - 2.0 * n2 * (e + f))
}

/// Roots of the quartic as eigenvalues of its companion matrix.
pub fn quartic_roots(c2: f64, c0: f64) -> Vec<Complex<f64>> {
    #[rustfmt::skip]
    let companion = Matrix4::new(
        0.0, -c2, 0.0, -c0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
    );
    companion.complex_eigenvalues().iter().copied().collect()
}

/// `c2^2 - 4 c0` with the corrected `G`; positive inside the stability region.
pub fn discriminant(params: &SystemParams) -> f64 {
    let (c2, c0) = characteristic_quartic(&quadratic_coeffs(params), GVariant::Corrected);
    c2 * c2 - 4.0 * c0
}

/// Linearized boundary of linear stability.
pub fn mu_c0(eps: f64, a2: f64, w1: f64) -> f64 {
    0.038521 - 0.221896 * eps + 2.103887 * a2 + 0.493433 * eps * a2 + 0.704139 * w1
        + 0.401154 * eps * w1
}

/// Right side of the frequency-sum relation, `omega1^2 + omega2^2`.
pub fn frequency_sum(params: &SystemParams) -> f64 {
    let SystemParams { eps, a2, w1, gamma, .. } = *params;
    1.0 - gamma * eps / 2.0 + 1.5 * gamma * a2 + 83.0 * eps * a2 / 12.0 - w1 / (24.0 * SQRT3)
}

/// Right side of the frequency-product relation, `omega1^2 omega2^2`.
pub fn frequency_product(params: &SystemParams) -> f64 {
    let SystemParams { eps, a2, w1, gamma, .. } = *params;
    27.0 / 16.0 - 27.0 * gamma * gamma / 16.0 + 9.0 * eps / 8.0 + 9.0 * gamma * eps / 8.0
        + 117.0 * gamma * a2 / 16.0
        - 241.0 * eps * a2 / 32.0
        + 35.0 * w1 / (16.0 * SQRT3)
        - 55.0 * SQRT3 * gamma * w1 / 16.0
}

/// Low-order resonance between the two frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resonance {
    TwoToOne,
    ThreeToOne,
}

/// Closeness of `omega1/omega2` to 2 or 3 that raises the resonance flag.
pub const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPair {
    /// The larger frequency.
    pub omega1: f64,
    /// The smaller frequency.
    pub omega2: f64,
    /// `omega1 * omega2`.
    pub u: f64,
    /// Both frequencies coincide (`S^2 = 4P`).
    pub boundary: bool,
    pub resonance: Option<Resonance>,
}

impl FrequencyPair {
    pub fn new(omega1: f64, omega2: f64) -> Self {
        let ratio = omega1 / omega2;
        let resonance = if (ratio - 2.0).abs() < RESONANCE_TOL {
            Some(Resonance::TwoToOne)
        } else if (ratio - 3.0).abs() < RESONANCE_TOL {
            Some(Resonance::ThreeToOne)
        } else {
            None
        };
        Self { omega1, omega2, u: omega1 * omega2, boundary: omega1 == omega2, resonance }
    }

    /// Pair with `omega1^2 = x1`, `omega2^2 = x2`.
    pub fn from_squares(x1: f64, x2: f64) -> Self {
        Self::new(x1.sqrt(), x2.sqrt())
    }
}

/// `|S^2 - 4P|` at or below this is treated as the double-frequency boundary.
pub const BOUNDARY_TOL: f64 = 1e-14;

/// Solves `X^2 - S X + P = 0` for `X = omega^2`.
pub fn frequencies(params: &SystemParams) -> Result<FrequencyPair> {
    frequencies_from(frequency_sum(params), frequency_product(params))
}

/// Frequencies from a given sum `s` and product `p` of their squares.
pub fn frequencies_from(s: f64, p: f64) -> Result<FrequencyPair> {
    let disc = s * s - 4.0 * p;
    if disc.abs() <= BOUNDARY_TOL {
        let w = (s / 2.0).sqrt();
        let mut pair = FrequencyPair::new(w, w);
        pair.boundary = true;
        return Ok(pair);
    }
    if disc < 0.0 || p <= 0.0 || s <= 0.0 {
        return Err(Error::Unstable { discriminant: disc });
    }
    let x1 = (s + disc.sqrt()) / 2.0;
    let x2 = p / x1;
    Ok(FrequencyPair::from_squares(x1, x2))
}

/// Frequencies read off the quartic's companion-matrix roots.
pub fn quartic_frequencies(params: &SystemParams, variant: GVariant) -> Result<FrequencyPair> {
    let (c2, c0) = characteristic_quartic(&quadratic_coeffs(params), variant);
    let roots = quartic_roots(c2, c0);
    let max_re = roots.iter().map(|r| r.re.abs()).fold(0.0, f64::max);
    if max_re > 1e-9 {
        return Err(Error::Unstable { discriminant: c2 * c2 - 4.0 * c0 });
    }
    let mut im: Vec<f64> = roots.iter().filter(|r| r.im > 0.0).map(|r| r.im).collect();
    im.sort_by(|a, b| b.total_cmp(a));
    match im.as_slice() {
        [w1, w2] => Ok(FrequencyPair::new(*w1, *w2)),
        _ => Err(Error::Unstable { discriminant: c2 * c2 - 4.0 * c0 }),
    }
}

/// `gamma^2` from one frequency through the relation polynomial in `omega_j^2`.
pub fn gamma_sq_from_frequency(omega: f64, params: &SystemParams) -> Result<f64> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::domain(format!("frequency {omega} outside (0, 1)")));
    }
    let SystemParams { eps, a2, w1, gamma, .. } = *params;
    let w = w1 / SQRT3;
    let x = omega * omega;
    let c0 = 1.0 + 4.0 * eps / 9.0 - 107.0 * eps * a2 / 27.0 + 2.0 * gamma * eps / 3.0
        - 25.0 * w / 27.0;
    let c1 = -16.0 / 27.0 + 32.0 * eps / 243.0 + 208.0 * a2 / 81.0 - 8.0 * gamma * a2 / 27.0
        - 4868.0 * eps * a2 / 729.0
        + 296.0 * w / 243.0;
    let c2 = 16.0 / 27.0 - 32.0 * eps / 243.0 - 208.0 * a2 / 81.0 - 1880.0 * eps * a2 / 729.0
        - 2720.0 * w / 2187.0;
    Ok(c0 + c1 * x + c2 * x * x)
}

/// `gamma^2` from `u = omega1 omega2`.
pub fn gamma_sq_from_product(u: f64, params: &SystemParams) -> f64 {
    let SystemParams { eps, a2, w1, gamma, .. } = *params;
    let w = w1 / SQRT3;
    1.0 + 4.0 * eps / 9.0 - 107.0 * eps * a2 / 27.0 - 25.0 * w / 27.0
        + gamma * (2.0 * eps / 3.0 + 1579.0 * eps * a2 / 324.0 - 55.0 * gamma * w / 9.0)
        + (-16.0 / 27.0 + 32.0 * eps / 243.0 + 208.0 * a2 / 81.0 - 1880.0 * eps * a2 / 729.0
            + 320.0 * w / 243.0)
            * u
            * u
}
