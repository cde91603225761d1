use serde::{Deserialize, Serialize};

use super::{derivative, PhaseState};
use crate::error::{Error, Result};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with a fixed step.
    Rk4,
    /// Dormand-Prince 5(4) embedded pair with step-size control.
    Dopri5,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub method: Method,
    /// Fixed step for `Rk4`, initial step for `Dopri5`.
    pub step: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Sampling interval of the returned trajectory; `None` keeps every step.
    pub output_every: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            method: Method::Dopri5,
            step: 1e-2,
            rtol: 1e-10,
            atol: 1e-12,
            output_every: None,
            max_steps: 10_000_000,
        }
    }
}

impl IntegrateOptions {
    pub fn rk4(step: f64) -> Self {
        Self { method: Method::Rk4, step, ..Self::default() }
    }

    pub fn dopri5(rtol: f64, atol: f64) -> Self {
        Self { method: Method::Dopri5, rtol, atol, ..Self::default() }
    }

    pub fn sampled(self, every: f64) -> Self {
        Self { output_every: Some(every), ..self }
    }
}

/// States in time order, starting with the initial one.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<PhaseState>,
}

impl Trajectory {
    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectory always holds the initial state")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Integrates from `state0.t` to `state0.t + t_final`.
pub fn integrate(
    state0: &PhaseState,
    params: &SystemParams,
    t_final: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::domain(format!("t_final = {t_final} must be finite and >= 0")));
    }
    if !(opts.step > 0.0) || !opts.step.is_finite() {
        return Err(Error::domain(format!("step = {} must be finite and > 0", opts.step)));
    }
    if let Some(every) = opts.output_every {
        if !(every > 0.0) {
            return Err(Error::domain(format!("output cadence {every} must be > 0")));
        }
    }
    if opts.method == Method::Dopri5 && !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::domain("tolerances must be positive"));
    }
    if !state0.is_finite() {
        return Err(Error::domain("initial state is not finite"));
    }

    let t0 = state0.t;
    let t_end = t0 + t_final;
    let mut states = vec![*state0];
    if t_final == 0.0 {
        return Ok(Trajectory { states });
    }

    let time_eps = 1e-12 * t_end.abs().max(1.0);
    let mut next_output_index = 1u64;
    let next_output = |k: u64| match opts.output_every {
        Some(every) => (t0 + k as f64 * every).min(t_end),
        None => t_end,
    };

    let mut y = state0.vector();
    let mut t = t0;
    let mut h = opts.step.min(t_final);
    let mut steps = 0usize;

    while t < t_end - time_eps {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepUnderflow { t });
        }
        let target = next_output(next_output_index);
        let clipped = (target - t) <= h;
        let h_try = if clipped { target - t } else { h };

        let (y_new, accepted_h, next_h) = match opts.method {
            Method::Rk4 => (rk4_step(t, &y, h_try, params)?, h_try, opts.step),
            Method::Dopri5 => dopri5_step(t, &y, h_try, params, opts)?,
        };

        let landed = clipped && accepted_h == h_try;
        t = if landed { target } else { t + accepted_h };
        y = y_new;
        if !y.iter().all(|c| c.is_finite()) {
            return Err(Error::domain(format!("state became non-finite at t = {t}")));
        }

        if landed {
            next_output_index += 1;
            states.push(PhaseState::from_vector(t, y));
        } else if opts.output_every.is_none() {
            states.push(PhaseState::from_vector(t, y));
        }
        if opts.method == Method::Dopri5 {
            // do not let a clipped step shrink the controller's proposal
            h = if landed && next_h < h { h.min(next_h.max(accepted_h)) } else { next_h };
        }
    }
    if states.last().map(|s| (s.t - t_end).abs() > time_eps).unwrap_or(true) {
        states.push(PhaseState::from_vector(t_end, y));
    }
    Ok(Trajectory { states })
}

fn eval(t: f64, y: &[f64; 4], params: &SystemParams) -> Result<[f64; 4]> {
    derivative(&PhaseState::from_vector(t, *y), params)
}

fn axpy(y: &[f64; 4], terms: &[(f64, &[f64; 4])]) -> [f64; 4] {
    let mut out = *y;
    for (coef, k) in terms {
        for i in 0..4 {
            out[i] += coef * k[i];
        }
    }
    out
}

fn rk4_step(t: f64, y: &[f64; 4], h: f64, params: &SystemParams) -> Result<[f64; 4]> {
    let k1 = eval(t, y, params)?;
    let k2 = eval(t + h / 2.0, &axpy(y, &[(h / 2.0, &k1)]), params)?;
    let k3 = eval(t + h / 2.0, &axpy(y, &[(h / 2.0, &k2)]), params)?;
    let k4 = eval(t + h, &axpy(y, &[(h, &k3)]), params)?;
    Ok(axpy(y, &[(h / 6.0, &k1), (h / 3.0, &k2), (h / 3.0, &k3), (h / 6.0, &k4)]))
}

// Dormand-Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between the 5th- and 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One accepted DOPRI5 step, retrying with smaller `h` on rejection.
/// Returns the new state, the step actually taken and the proposed next step.
fn dopri5_step(
    t: f64,
    y: &[f64; 4],
    mut h: f64,
    params: &SystemParams,
    opts: &IntegrateOptions,
) -> Result<([f64; 4], f64, f64)> {
    let k1 = eval(t, y, params)?;
    loop {
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        let k2 = eval(t + C2 * h, &axpy(y, &[(h * A21, &k1)]), params)?;
        let k3 = eval(t + C3 * h, &axpy(y, &[(h * A31, &k1), (h * A32, &k2)]), params)?;
        let k4 = eval(
            t + C4 * h,
            &axpy(y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]),
            params,
        )?;
        let k5 = eval(
            t + C5 * h,
            &axpy(y, &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]),
            params,
        )?;
        let k6 = eval(
            t + h,
            &axpy(y, &[(h * A61, &k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)]),
            params,
        )?;
        let y_new = axpy(y, &[(h * B1, &k1), (h * B3, &k3), (h * B4, &k4), (h * B5, &k5), (h * B6, &k6)]);
        let k7 = eval(t + h, &y_new, params)?;

        let mut err_sq = 0.0;
        for i in 0..4 {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / 4.0).sqrt();

        if err <= 1.0 {
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            return Ok((y_new, h, h * factor));
        }
        h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
    }
}
