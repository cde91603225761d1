//! Nonlinear (KAM) stability: resonance masses, the determinant `D`, and the
//! mass ratio where `D` vanishes.
//!
//! The correction coefficients `D2 ... D7` of
//! `D = D0(u) + (D2 + D3 g) eps + (D4 + D5 g) A2 + (D6 + D7 g) W1`
//! are tabulated rational functions of the frequencies, transcribed here as
//! printed and evaluated over any [`Scalar`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{self, FrequencyPair, Resonance};
use crate::normal_form::{normal_form_abc, Factor, Freqs, Variant};
use crate::params::{SystemParams, DEFAULT_CD};
use crate::scalar::Scalar;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn i<S: Scalar>(n: i64) -> S {
    S::int(n)
}

/// Closed-form classical part `(644 u^4 - 541 u^2 + 36) / (8 (4u^2 - 1)(25u^2 - 4))`
/// as a function of `u^2`.
pub fn d_classical<S: Scalar>(u_sq: S) -> Result<S> {
    let a = i::<S>(4) * u_sq.clone() - i::<S>(1);
    let b = i::<S>(25) * u_sq.clone() - i::<S>(4);
    if a.is_negligible() || b.is_negligible() {
        return Err(Error::ResonancePole { u_sq: u_sq.to_f64() });
    }
    let num = i::<S>(644) * u_sq.clone() * u_sq.clone() - i::<S>(541) * u_sq + i::<S>(36);
    Ok(num / (i::<S>(8) * a * b))
}

/// Smaller root of `644 u^4 - 541 u^2 + 36 = 0`, as a value of `u^2`.
pub fn u0() -> f64 {
    (541.0 - 199_945f64.sqrt()) / 1288.0
}

/// `(1-5w1^2)(-1+2w1^2)(9+4w1^2)(1-5w2^2)(-1+2w2^2)(9+4w2^2)`.
fn big1<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    Ok(f.factor(Factor::Q1)?
        * f.factor(Factor::P1)?
        * f.factor(Factor::G1)?
        * f.factor(Factor::Q2)?
        * f.factor(Factor::P2)?
        * f.factor(Factor::G2)?)
}

/// Same as [`big1`] with the `(1-5w^2)` and `(-1+2w^2)` factors squared.
fn big2<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    Ok(f.factor(Factor::Q1)?.powi(2)
        * f.factor(Factor::P1)?.powi(2)
        * f.factor(Factor::G1)?
        * f.factor(Factor::Q2)?.powi(2)
        * f.factor(Factor::P2)?.powi(2)
        * f.factor(Factor::G2)?)
}

pub fn d2<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let p2 = f.factor(Factor::P2)?;
    let g1 = f.factor(Factor::G1)?;
    let g2 = f.factor(Factor::G2)?;
    let rr = f.factor(Factor::R)?;
    let t2 = f.factor(Factor::T2)?;
    let big = big2(f)?;
    let (x1, u2) = (f.x1(), f.u().powi(2));
    let inner = S::sum(vec![
        i::<S>(1620864) / p1.powi(2),
        i::<S>(2507364) / -p1.clone(),
        i::<S>(706482) / (p1.powi(2) * rr),
        i::<S>(71663616000) / (p1.clone() * g2.clone()),
        i::<S>(8062156800) / (p2 * g2.powi(2)),
        i::<S>(1074954240) / (p1.powi(2) * g2),
        i::<S>(112969617408) / big.clone(),
        // (9 - 14 w2^2 - 8 w2^4) = -T2
        i::<S>(17146183680) / -t2,
    ]);
    Ok(S::sum(vec![
        i::<S>(567) * (i::<S>(-151) + i::<S>(16) * x1) / (i::<S>(16384) * p1.powi(2) * g1.powi(2)),
        u2.clone() * inner / i::<S>(884736),
        i::<S>(1028577) * u2.powi(2) / (i::<S>(16) * big.clone()),
        i::<S>(8026049) * u2.powi(3) / (i::<S>(8) * big.clone()),
        i::<S>(303951) * u2.powi(4) / (i::<S>(4) * big),
    ]))
}

pub fn d3<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let p2 = f.factor(Factor::P2)?;
    let g2 = f.factor(Factor::G2)?;
    let rr = f.factor(Factor::R)?;
    let ss = f.factor(Factor::S)?;
    let t2 = f.factor(Factor::T2)?;
    let sums = f.factor(Factor::Sum1)? * f.factor(Factor::Sum2)? * f.factor(Factor::G2Linear)?.powi(2);
    let big = big1(f)?;
    let (x2, u2) = (f.x2(), f.u().powi(2));
    let first = S::sum(vec![
        i::<S>(819),
        i::<S>(8064) / sums,
        -i::<S>(6883328) / big.clone(),
    ]);
    let inner = S::sum(vec![
        i::<S>(706240) / p1.clone(),
        // printed as a product, not a quotient
        i::<S>(289737) / -p1.clone() * rr,
        -i::<S>(530841600) / (p1.clone() * g2.powi(2)),
        i::<S>(59719680) / (p2.clone() * g2.powi(2)),
        i::<S>(59719680) * x2 / (p1.clone() * g2.powi(2)),
        i::<S>(3317760) / (p2.powi(2) * g2.clone()),
        i::<S>(71516160) / -t2,
        i::<S>(24772608) / (ss * p2 * g2),
        i::<S>(22637076480) / big.clone(),
    ]);
    Ok(S::sum(vec![
        i::<S>(3) * first / (i::<S>(8192) * p1),
        u2.clone() * inner / i::<S>(147456),
        -i::<S>(100200) * u2.powi(2) / big.clone(),
        i::<S>(758804) * u2.powi(3) / big.clone(),
        i::<S>(130401) * u2.powi(4) / (i::<S>(2) * big),
    ]))
}

pub fn d4<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let p2 = f.factor(Factor::P2)?;
    let rr = f.factor(Factor::R)?;
    let ss = f.factor(Factor::S)?;
    let t1 = f.factor(Factor::T1)?;
    let t2 = f.factor(Factor::T2)?;
    let mm = f.factor(Factor::M1)? * f.factor(Factor::M2)?;
    let u2 = f.u().powi(2);
    let a = S::sum(vec![
        i::<S>(58477) / p1.powi(2),
        i::<S>(89216) / -t1,
        i::<S>(7872) / p2.powi(2),
        i::<S>(33456) / -t2.clone(),
    ]);
    let b = S::sum(vec![
        i::<S>(5864788) / -p1.clone(),
        -i::<S>(186165) / (p1.powi(2) * rr),
        i::<S>(1885814784) / (ss * -t2),
        i::<S>(18210816) / mm.clone(),
    ]);
    Ok(S::sum(vec![
        i::<S>(243) * a,
        i::<S>(2) * u2.clone() * b,
        -i::<S>(111689728) * u2.powi(2) / mm,
    ]) / i::<S>(294912))
}

pub fn d5<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let g2 = f.factor(Factor::G2)?;
    let rr = f.factor(Factor::R)?;
    let ss = f.factor(Factor::S)?;
    let t1 = f.factor(Factor::T1)?;
    let t2 = f.factor(Factor::T2)?;
    // (1-5w1^2)^2 (-9+14w1^2+8w1^4) (1-5w2^2)^2 (-9+14w2^2+8w2^4)
    let big = f.factor(Factor::Q1)?.powi(2) * t1.clone() * f.factor(Factor::Q2)?.powi(2) * t2.clone();
    let u2 = f.u().powi(2);
    let a = S::sum(vec![
        -i::<S>(2457) / p1.powi(2),
        i::<S>(6426) / t1,
        // the two (9-14w^2-8w^4) factors are -T1 and -T2; their signs cancel
        -i::<S>(30450688) / big.clone(),
    ]);
    let b = S::sum(vec![
        i::<S>(90048) / p1.powi(2),
        i::<S>(139298) / p1.powi(2),
        i::<S>(39249) / (p1.powi(2) * rr),
        // read with balanced parentheses: (-1+2w1^2)(9+4w2^2)
        i::<S>(447897600) / (p1 * g2),
        i::<S>(952565760) / -t2.clone(),
        i::<S>(6276089856) / big.clone(),
        -i::<S>(594542592) / (ss * t2),
    ]);
    Ok(S::sum(vec![
        i::<S>(9) * a,
        u2.clone() * b,
        i::<S>(3159788544) * u2.powi(2) / big.clone(),
        i::<S>(49312045056) * u2.powi(3) / big.clone(),
        i::<S>(3734949888) * u2.powi(4) / big,
    ]) / i::<S>(49152))
}

pub fn d6<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let ss = f.factor(Factor::S)?;
    let t2 = f.factor(Factor::T2)?;
    let u2 = f.u().powi(2);
    let a = S::sum(vec![i::<S>(52) / p1.powi(2), i::<S>(7) / -t2.clone()]);
    let b = S::sum(vec![
        -i::<S>(738) / p1.powi(2),
        i::<S>(93899) / p1.powi(2),
        i::<S>(91445760) / (ss * -t2),
    ]);
    Ok(S::sum(vec![i::<S>(29889) * a, i::<S>(2) * u2 * b]) / (i::<S>(82944) * S::sqrt3()))
}

pub fn d7<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let p2 = f.factor(Factor::P2)?;
    let g2 = f.factor(Factor::G2)?;
    let rr = f.factor(Factor::R)?;
    let ss = f.factor(Factor::S)?;
    let t2 = f.factor(Factor::T2)?;
    let u2 = f.u().powi(2);
    let a = S::sum(vec![
        i::<S>(5904) / p1.powi(2),
        i::<S>(122157) / (ss.clone() * p1.powi(2)),
        -i::<S>(758086) / (ss.clone() * p1.clone()),
        i::<S>(5904) / -t2.clone(),
    ]);
    let b = S::sum(vec![
        -i::<S>(492) / p1.powi(2),
        i::<S>(370964) / p1.clone(),
        -i::<S>(58653) / (rr * p1.powi(2)),
        i::<S>(13893120) / (g2.powi(2) * -p2.clone()),
        -i::<S>(116702208) / (ss.clone() * p2.powi(2) * g2.powi(2)),
        i::<S>(103680) / (g2.clone() * p2.powi(2)),
        i::<S>(870912) / (ss.clone() * p2.powi(2) * g2.powi(2)),
        i::<S>(62519040) / t2,
        -i::<S>(246177792) / (ss * g2.powi(2)),
    ]);
    Ok(S::sum(vec![i::<S>(27) * a, i::<S>(2) * u2 * b]) / (i::<S>(110592) * S::sqrt3()))
}

/// `[D2, D3, D4, D5, D6, D7]`.
pub fn appendix2_coeffs<S: Scalar>(f: &Freqs<S>) -> Result<[S; 6]> {
    Ok([d2(f)?, d3(f)?, d4(f)?, d5(f)?, d6(f)?, d7(f)?])
}

/// How the total determinant is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminantMode {
    /// Classical closed form plus the tabulated corrections.
    ClosedForm,
    /// `-(A w2^2 + 2 B w1 w2 + C w1^2)` from the normal-form coefficients.
    NormalForm(Variant),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KamDeterminantParts {
    pub u_sq: f64,
    pub d_classical: f64,
    /// `[D2, ..., D7]`.
    pub d: [f64; 6],
    pub total: f64,
    pub mode: DeterminantMode,
}

pub fn kam_determinant(
    params: &SystemParams,
    freqs: &FrequencyPair,
    mode: DeterminantMode,
) -> Result<KamDeterminantParts> {
    let u_sq = freqs.u * freqs.u;
    let d0 = d_classical(u_sq)?;
    let d = appendix2_coeffs(&Freqs::new(freqs.omega1, freqs.omega2))?;
    let g = params.gamma;
    let total = match mode {
        DeterminantMode::ClosedForm => {
            d0 + (d[0] + d[1] * g) * params.eps + (d[2] + d[3] * g) * params.a2 + (d[4] + d[5] * g) * params.w1
        }
        DeterminantMode::NormalForm(variant) => normal_form_abc(params, freqs, variant)?.determinant(freqs),
    };
    Ok(KamDeterminantParts { u_sq, d_classical: d0, d, total, mode })
}

pub fn mu_c1(eps: f64, a2: f64, w1: f64) -> f64 {
    0.024294 - 0.312692 * eps - 0.036851 * a2 + 1.001052 * w1
}

pub fn mu_c2(eps: f64, a2: f64, w1: f64) -> f64 {
    0.013516 - 0.29724 * eps - 0.019383 * a2 + 1.007682 * w1
}

pub fn mu_c3_closed(eps: f64, a2: f64, w1: f64) -> f64 {
    0.010914 - 0.120489 * eps - 0.373118 * a2 + 2.904291 * w1
}

/// Root of `a mu^2 + b mu + c = 0` inside `(0, 1/2)`.
fn root_in_range(a: f64, b: f64, c: f64) -> Result<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NoRealRoot { discriminant: disc });
    }
    // cancellation-free pair of roots
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots
        .into_iter()
        .filter(|m| *m > 0.0 && *m < 0.5)
        .min_by(|x, y| x.total_cmp(y))
        .ok_or_else(|| Error::domain("resonance quadratic has no root in (0, 1/2)"))
}

/// 2:1 resonance mass from the perturbed quadratic in `mu`.
pub fn mu_c1_quadratic(eps: f64, a2: f64, w1: f64) -> Result<f64> {
    let w = w1 / SQRT3;
    let a = -27.0 / 4.0 - 1.5 * eps - 117.0 * a2 / 4.0 - 221.0 * w / 15.0;
    let b = 27.0 / 4.0 - 107.0 * eps / 100.0 + 3021.0 * a2 / 100.0 + 4291.0 * w / 120.0;
    let c = -4.0 / 25.0 + 407.0 * eps / 200.0 - 12.0 * a2 / 25.0 - 23991.0 * w / 200.0;
    root_in_range(a, b, c)
}

/// 3:1 resonance mass from the perturbed quadratic in `mu`.
pub fn mu_c2_quadratic(eps: f64, a2: f64, w1: f64) -> Result<f64> {
    let w = w1 / SQRT3;
    let a = -27.0 / 4.0 - 1.5 * eps - 117.0 * a2 / 4.0 - 99.0 * SQRT3 * w1 / 20.0;
    let b = 27.0 / 4.0 - 93.0 * eps / 100.0 + 2979.0 * a2 / 100.0 + 119.0 * SQRT3 * w1 / 10.0;
    let c = -9.0 / 100.0 + 393.0 * eps / 200.0 - 27.0 * a2 / 100.0 - 4777.0 * w / 400.0;
    root_in_range(a, b, c)
}

/// Classical mass ratio with `omega1 = k omega2`: `27 (1 - g^2) / 16 = k^2 / (1 + k^2)^2`.
pub fn classical_resonance_mu(k: f64) -> f64 {
    let p = k * k / (1.0 + k * k).powi(2);
    (1.0 - (1.0 - 16.0 * p / 27.0).sqrt()) / 2.0
}

/// Intermediate and final values of the perturbative `mu_c3` construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mu3Pipeline {
    pub u0: f64,
    pub gamma0: f64,
    pub mu0: f64,
    /// Classical frequencies with `(omega1 omega2)^2 = u0`.
    pub omega1: f64,
    pub omega2: f64,
    /// `[u1, ..., u6]`.
    pub u: [f64; 6],
    /// `[D2, ..., D7]` at the classical frequencies.
    pub d0: [f64; 6],
    /// `[alpha1, alpha2, alpha3]`.
    pub alphas: [f64; 3],
    pub mu_c3: f64,
}

/// Published values of the three slopes.
pub const PUBLISHED_ALPHAS: [f64; 3] = [-0.120489, -0.373118, 2.904291];

pub fn mu_c3_pipeline(eps: f64, a2: f64, w1: f64) -> Result<Mu3Pipeline> {
    let u0 = u0();
    let gamma0 = (1.0 - 16.0 * u0 / 27.0).sqrt();
    let mu0 = (1.0 - gamma0) / 2.0;
    let classical = linear::frequencies_from(1.0, u0)?;
    let d0 = appendix2_coeffs(&Freqs::new(classical.omega1, classical.omega2))?;
    let g = gamma0;
    let u = [
        27.0 * g * g / 16.0 + 9.0 * g / 8.0 + 9.0 / 8.0,
        27.0 * g / 4.0,
        117.0 * (1.0 - g * g) / 16.0,
        27.0 * g / 4.0,
        (27.0 * g * g + 165.0 * g + 35.0) / (16.0 * SQRT3),
        27.0 * g / (4.0 * SQRT3),
    ];
    let k = 1288.0 * u0 - 541.0;
    let poles = (4.0 * u0 - 1.0) * (25.0 * u0 - 4.0);
    let alpha = |num: f64, den: f64, dn: f64, dn1: f64| -(k * num + 8.0 * (dn + dn1 * g) * poles) / (den * k);
    let alphas = [
        alpha(u[0], u[1], d0[0], d0[1]),
        alpha(u[2], u[3], d0[2], d0[3]),
        alpha(u[4], u[5], d0[4], d0[5]),
    ];
    let mu_c3 = mu0 + alphas[0] * eps + alphas[1] * a2 + alphas[2] * w1;
    Ok(Mu3Pipeline {
        u0,
        gamma0,
        mu0,
        omega1: classical.omega1,
        omega2: classical.omega2,
        u,
        d0,
        alphas,
        mu_c3,
    })
}

/// A critical mass with its applicability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalMass {
    pub value: f64,
    /// Drag strength used in the formula.
    pub w1: f64,
    /// Whether the value lies in `(0, mu_c0)`.
    pub applicable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalMassSet {
    pub eps: f64,
    pub a2: f64,
    pub mu_c0: CriticalMass,
    pub mu_c1: CriticalMass,
    pub mu_c2: CriticalMass,
    pub mu_c3: CriticalMass,
}

/// How the drag strength entering the formulas is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Drag {
    /// A fixed value for every formula.
    Fixed(f64),
    /// `(1 - mu) eps / c_d`, with `mu` the formula's drag-free value.
    FromRadiation { c_d: f64 },
}

impl CriticalMassSet {
    pub fn new(eps: f64, a2: f64, drag: Drag) -> Self {
        let eval = |f: fn(f64, f64, f64) -> f64| {
            let w1 = match drag {
                Drag::Fixed(w) => w,
                Drag::FromRadiation { c_d } => (1.0 - f(eps, a2, 0.0)) * eps / c_d,
            };
            (f(eps, a2, w1), w1)
        };
        let (c0, w0) = eval(linear::mu_c0);
        let mark = |(value, w1): (f64, f64)| CriticalMass { value, w1, applicable: value > 0.0 && value < c0 };
        Self {
            eps,
            a2,
            mu_c0: CriticalMass { value: c0, w1: w0, applicable: c0 > 0.0 && c0 <= 0.5 },
            mu_c1: mark(eval(mu_c1)),
            mu_c2: mark(eval(mu_c2)),
            mu_c3: mark(eval(mu_c3_closed)),
        }
    }

    /// Uses the parameters' drag override if present, else `c_d`.
    pub fn from_params(params: &SystemParams) -> Self {
        let drag = match params.w1_override {
            Some(w) => Drag::Fixed(w),
            None => Drag::FromRadiation { c_d: params.c_d },
        };
        Self::new(params.eps, params.a2, drag)
    }

    /// `q1 = 1 - eps` with the default light-speed constant.
    pub fn for_radiation(q1: f64, a2: f64) -> Self {
        Self::new(1.0 - q1, a2, Drag::FromRadiation { c_d: DEFAULT_CD })
    }
}

/// Default half-width of the excluded bands around `mu_c1`, `mu_c2`, `mu_c3`.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    LinearlyUnstable,
    ResonanceExcluded(Resonance),
    DegenerateD,
    KamStable,
}

impl Verdict {
    /// Numeric code used in sweep output.
    pub fn code(self) -> u8 {
        match self {
            Verdict::KamStable => 0,
            Verdict::ResonanceExcluded(Resonance::TwoToOne) => 1,
            Verdict::ResonanceExcluded(Resonance::ThreeToOne) => 2,
            Verdict::DegenerateD => 3,
            Verdict::LinearlyUnstable => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::KamStable => "kam-stable",
            Verdict::ResonanceExcluded(Resonance::TwoToOne) => "resonance-excluded-2:1",
            Verdict::ResonanceExcluded(Resonance::ThreeToOne) => "resonance-excluded-3:1",
            Verdict::DegenerateD => "degenerate-d",
            Verdict::LinearlyUnstable => "linearly-unstable",
        }
    }
}

/// Verdict for mass ratio `mu` with the other parameters taken from `params`.
pub fn classify(mu: f64, params: &SystemParams, tol: f64) -> Verdict {
    classify_against(mu, &CriticalMassSet::from_params(params), tol)
}

pub fn classify_against(mu: f64, set: &CriticalMassSet, tol: f64) -> Verdict {
    if mu > set.mu_c0.value {
        Verdict::LinearlyUnstable
    } else if (mu - set.mu_c1.value).abs() < tol {
        Verdict::ResonanceExcluded(Resonance::TwoToOne)
    } else if (mu - set.mu_c2.value).abs() < tol {
        Verdict::ResonanceExcluded(Resonance::ThreeToOne)
    } else if (mu - set.mu_c3.value).abs() < tol {
        Verdict::DegenerateD
    } else {
        Verdict::KamStable
    }
}
