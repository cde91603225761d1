//! Physical configuration of the problem and its derived quantities.
//!
//! Units are the usual normalized ones: unit separation of the primaries,
//! unit total mass, and the rotating frame's mean motion close to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default value of the light-speed constant `c_d` in normalized units.
pub const DEFAULT_CD: f64 = 299_792_458.0;

/// Raw configuration plus derived perturbation parameters.
///
/// Construct with [`SystemParams::new`] (drag strength follows from `q1`) or
/// [`SystemParams::with_drag`] (drag strength supplied directly).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mass ratio `mu = m2 / (m1 + m2)`.
    pub mu: f64,
    /// Mass-reduction factor of the radiating primary.
    pub q1: f64,
    /// Oblateness coefficient of the secondary.
    pub a2: f64,
    /// Dimensionless light-speed constant.
    pub c_d: f64,
    /// Drag strength supplied independently of `q1`, if any.
    pub w1_override: Option<f64>,
    /// `1 - q1`.
    pub eps: f64,
    /// Poynting-Robertson drag strength `(1 - mu)(1 - q1) / c_d`.
    pub w1: f64,
    /// Perturbed mean motion `sqrt(1 + 3 A2 / 2)`.
    pub n: f64,
    /// `1 - 2 mu`.
    pub gamma: f64,
    /// `q1^(1/3)`.
    pub delta: f64,
}

impl SystemParams {
    /// Validates the raw inputs and derives `eps`, `w1`, `n`, `gamma`, `delta`.
    pub fn new(mu: f64, q1: f64, a2: f64, c_d: f64) -> Result<Self> {
        validate(mu, q1, a2, c_d)?;
        let eps = 1.0 - q1;
        Ok(Self {
            mu,
            q1,
            a2,
            c_d,
            w1_override: None,
            eps,
            w1: drag_strength(mu, q1, c_d),
            n: (1.0 + 1.5 * a2).sqrt(),
            gamma: 1.0 - 2.0 * mu,
            delta: q1.cbrt(),
        })
    }

    /// Classical configuration: no radiation, no oblateness.
    pub fn classical(mu: f64) -> Result<Self> {
        Self::new(mu, 1.0, 0.0, DEFAULT_CD)
    }

    /// Like [`SystemParams::new`] with the default `c_d`.
    pub fn with_default_cd(mu: f64, q1: f64, a2: f64) -> Result<Self> {
        Self::new(mu, q1, a2, DEFAULT_CD)
    }

    /// Treats the drag strength as an independent small parameter.
    ///
    /// Breaks the `w1 = 0 <=> q1 = 1` link; useful to isolate drag effects.
    pub fn with_drag(mu: f64, q1: f64, a2: f64, w1: f64) -> Result<Self> {
        if !w1.is_finite() || w1 < 0.0 {
            return Err(Error::domain(format!("drag strength w1 = {w1} must be finite and >= 0")));
        }
        let mut p = Self::new(mu, q1, a2, DEFAULT_CD)?;
        p.w1_override = Some(w1);
        p.w1 = w1;
        Ok(p)
    }

    /// Same configuration with a different mass ratio.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        match self.w1_override {
            Some(w1) => Self::with_drag(mu, self.q1, self.a2, w1),
            None => Self::new(mu, self.q1, self.a2, self.c_d),
        }
    }

    /// Re-derives from the stored raw fields.
    pub fn rederive(&self) -> Result<Self> {
        self.with_mu(self.mu)
    }

    /// No radiation, oblateness, or drag.
    pub fn is_classical(&self) -> bool {
        self.eps == 0.0 && self.a2 == 0.0 && self.w1 == 0.0
    }
}

/// `W1 = (1 - mu)(1 - q1) / c_d`.
pub fn drag_strength(mu: f64, q1: f64, c_d: f64) -> f64 {
    (1.0 - mu) * (1.0 - q1) / c_d
}

fn validate(mu: f64, q1: f64, a2: f64, c_d: f64) -> Result<()> {
    for (name, v) in [("mu", mu), ("q1", q1), ("a2", a2), ("cd", c_d)] {
        if !v.is_finite() {
            return Err(Error::domain(format!("{name} = {v} is not finite")));
        }
    }
    if !(mu > 0.0 && mu <= 0.5) {
        return Err(Error::domain(format!("mu = {mu} outside (0, 0.5]")));
    }
    if q1 > 1.0 || q1 <= 0.0 {
        return Err(Error::domain(format!("q1 = {q1} outside (0, 1]")));
    }
    if a2 < 0.0 {
        return Err(Error::domain(format!("a2 = {a2} is negative")));
    }
    if c_d <= 0.0 {
        return Err(Error::domain(format!("cd = {c_d} must be positive")));
    }
    Ok(())
}

/// Values read from a `key=value` configuration file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverrides {
    pub mu: Option<f64>,
    pub q1: Option<f64>,
    pub a2: Option<f64>,
    pub cd: Option<f64>,
}

impl ParamOverrides {
    /// Fields of `other` take precedence.
    pub fn merged_with(self, other: ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            mu: other.mu.or(self.mu),
            q1: other.q1.or(self.q1),
            a2: other.a2.or(self.a2),
            cd: other.cd.or(self.cd),
        }
    }

    /// Builds parameters, filling gaps with `q1 = 1`, `a2 = 0`, default `c_d`.
    pub fn resolve(&self) -> Result<SystemParams> {
        let mu = self.mu.ok_or_else(|| Error::domain("mu is required"))?;
        SystemParams::new(
            mu,
            self.q1.unwrap_or(1.0),
            self.a2.unwrap_or(0.0),
            self.cd.unwrap_or(DEFAULT_CD),
        )
    }
}

/// Parses `key=value` lines with keys `mu`, `q1`, `a2`, `cd`.
///
/// Blank lines and `#` comments are skipped; unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<ParamOverrides> {
    let mut out = ParamOverrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::domain(format!("line {}: expected key=value", lineno + 1)))?;
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::domain(format!("line {}: cannot parse value {:?}", lineno + 1, value.trim()))
        })?;
        let slot = match key {
            "mu" => &mut out.mu,
            "q1" => &mut out.q1,
            "a2" => &mut out.a2,
            "cd" => &mut out.cd,
            other => {
                return Err(Error::domain(format!("line {}: unknown key {other:?}", lineno + 1)))
            }
        };
        if slot.replace(value).is_some() {
            return Err(Error::domain(format!("line {}: duplicate key {key:?}", lineno + 1)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classical_limit() {
        let p = SystemParams::new(0.01, 1.0, 0.0, DEFAULT_CD).unwrap();
        assert_eq!(p.eps, 0.0);
        assert_eq!(p.w1, 0.0);
        assert_eq!(p.n, 1.0);
        assert_eq!(p.gamma, 0.98);
        assert_eq!(p.delta, 1.0);
        assert!(p.is_classical());
    }

    #[test]
    fn drag_from_radiation() {
        let p = SystemParams::new(0.01, 0.99, 0.0, DEFAULT_CD).unwrap();
        assert!((p.eps - 0.01).abs() < 1e-15);
        let expected = 0.99 * 0.01 / 299_792_458.0;
        assert!((p.w1 - expected).abs() / expected < 1e-12);
        assert!((p.w1 - 3.3023e-11).abs() < 1e-15);
    }

    #[test]
    fn oblate_mean_motion() {
        let p = SystemParams::new(0.01, 1.0, 0.01, DEFAULT_CD).unwrap();
        assert!((p.n - 1.015f64.sqrt()).abs() < 1e-15);
        assert!((p.n - 1.0074720).abs() < 1e-7);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(SystemParams::new(0.0, 1.0, 0.0, DEFAULT_CD).is_err());
        assert!(SystemParams::new(0.6, 1.0, 0.0, DEFAULT_CD).is_err());
        assert!(SystemParams::new(0.1, 1.01, 0.0, DEFAULT_CD).is_err());
        assert!(SystemParams::new(0.1, 0.0, 0.0, DEFAULT_CD).is_err());
        assert!(SystemParams::new(0.1, 1.0, -0.1, DEFAULT_CD).is_err());
        assert!(SystemParams::new(0.1, 1.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(f64::NAN, 1.0, 0.0, DEFAULT_CD).is_err());
        assert!(SystemParams::with_drag(0.1, 1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn half_mass_ratio_is_allowed() {
        let p = SystemParams::classical(0.5).unwrap();
        assert_eq!(p.gamma, 0.0);
    }

    #[test]
    fn config_round_trip() {
        let cfg = parse_config("# demo\nmu = 0.01\nq1=0.98\n\na2=0.001 # trailing\ncd=1e8\n").unwrap();
        assert_eq!(cfg.mu, Some(0.01));
        assert_eq!(cfg.q1, Some(0.98));
        assert_eq!(cfg.a2, Some(0.001));
        assert_eq!(cfg.cd, Some(1e8));
        let p = cfg.resolve().unwrap();
        assert_eq!(p.c_d, 1e8);
    }

    #[test]
    fn config_rejects_unknown_and_duplicate_keys() {
        assert!(parse_config("mu=0.1\nfoo=2").is_err());
        assert!(parse_config("mu=0.1\nmu=0.2").is_err());
        assert!(parse_config("mu").is_err());
        assert!(parse_config("mu=abc").is_err());
    }

    #[test]
    fn overrides_merge_prefers_later() {
        let file = ParamOverrides { mu: Some(0.1), q1: Some(0.9), ..Default::default() };
        let flags = ParamOverrides { mu: Some(0.2), ..Default::default() };
        let m = file.merged_with(flags);
        assert_eq!(m.mu, Some(0.2));
        assert_eq!(m.q1, Some(0.9));
    }

    proptest! {
        #[test]
        fn rederive_is_bit_identical(mu in 1e-6f64..=0.5, q1 in 0.5f64..=1.0, a2 in 0.0f64..0.5) {
            let p = SystemParams::with_default_cd(mu, q1, a2).unwrap();
            prop_assert_eq!(p.rederive().unwrap(), p);
        }

        #[test]
        fn derived_invariants(mu in 1e-6f64..=0.5, q1 in 0.5f64..=1.0, a2 in 0.0f64..0.5) {
            let p = SystemParams::with_default_cd(mu, q1, a2).unwrap();
            prop_assert!(p.w1 >= 0.0);
            prop_assert_eq!(p.w1 == 0.0, q1 == 1.0);
            prop_assert!(p.n >= 1.0);
            prop_assert_eq!(p.n == 1.0, a2 == 0.0);
            prop_assert!(p.gamma >= 0.0 && p.gamma < 1.0);
        }

        // dyadic steps keep 1 - q1 exact
        #[test]
        fn drag_is_linear_in_radiation(mu in 1e-6f64..=0.5, k in 1u32..(1 << 18)) {
            let s = k as f64 / (1u64 << 20) as f64;
            let w_single = drag_strength(mu, 1.0 - s, DEFAULT_CD);
            let w_double = drag_strength(mu, 1.0 - 2.0 * s, DEFAULT_CD);
            prop_assert!((w_double - 2.0 * w_single).abs() <= 1e-15 * w_double);
        }
    }
}
