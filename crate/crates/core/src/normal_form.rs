//! Fourth-order Birkhoff normal form about L4.
//!
//! The coefficients `A`, `B`, `C` of
//! `H = omega1 I1 - omega2 I2 + (A I1^2 + 2 B I1 I2 + C I2^2) / 2`
//! are assembled from 21 tabulated rational functions of the frequencies.
//! The tables are transcribed term by term, including entries that are
//! almost certainly misprints; those are kept as printed and, where a
//! plausible correction exists, offered as an alternative [`Variant`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::FrequencyPair;
use crate::params::SystemParams;
use crate::scalar::Scalar;

/// Denominator factors of the coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    Omega1,
    Omega2,
    /// `-1 + 2 w1^2`
    P1,
    /// `-1 + 2 w2^2`
    P2,
    /// `-1 + 5 w1^2`
    Q1,
    /// `-1 + 5 w2^2`
    Q2,
    /// `9 + 4 w1^2`
    G1,
    /// `9 + 4 w2^2`
    G2,
    /// `4 w1^2 - w2^2`
    R,
    /// `w1^2 - 4 w2^2`
    S,
    /// `9 - 59 w1^2 + 62 w1^4 + 40 w1^6`
    H1,
    /// `9 - 59 w2^2 + 62 w2^4 + 40 w2^6`
    H2,
    /// `-9 + 14 w1^2 + 8 w1^4`
    T1,
    /// `-9 + 14 w2^2 + 8 w2^4`
    T2,
    /// `-9 - 14 w2^2 + 8 w2^4`
    T2Minus,
    /// `w2^2 - 2 w2^3`
    K2,
    /// `1 - 7 w1^2 + 10 w1^4`
    M1,
    /// `1 - 7 w2^2 + 10 w2^4`
    M2,
    /// `2 w1 + w2`
    Sum1,
    /// `w1 + 2 w2`
    Sum2,
    /// `9 + 4 w2`, printed without the square
    G2Linear,
}

impl Factor {
    pub fn name(self) -> &'static str {
        match self {
            Factor::Omega1 => "omega1",
            Factor::Omega2 => "omega2",
            Factor::P1 => "(-1+2*omega1^2)",
            Factor::P2 => "(-1+2*omega2^2)",
            Factor::Q1 => "(-1+5*omega1^2)",
            Factor::Q2 => "(-1+5*omega2^2)",
            Factor::G1 => "(9+4*omega1^2)",
            Factor::G2 => "(9+4*omega2^2)",
            Factor::R => "(4*omega1^2-omega2^2)",
            Factor::S => "(omega1^2-4*omega2^2)",
            Factor::H1 => "(9-59*omega1^2+62*omega1^4+40*omega1^6)",
            Factor::H2 => "(9-59*omega2^2+62*omega2^4+40*omega2^6)",
            Factor::T1 => "(-9+14*omega1^2+8*omega1^4)",
            Factor::T2 => "(-9+14*omega2^2+8*omega2^4)",
            Factor::T2Minus => "(-9-14*omega2^2+8*omega2^4)",
            Factor::K2 => "(omega2^2-2*omega2^3)",
            Factor::M1 => "(1-7*omega1^2+10*omega1^4)",
            Factor::M2 => "(1-7*omega2^2+10*omega2^4)",
            Factor::Sum1 => "(2*omega1+omega2)",
            Factor::Sum2 => "(omega1+2*omega2)",
            Factor::G2Linear => "(9+4*omega2)",
        }
    }
}

/// Frequencies in the scalar type the tables are evaluated over.
#[derive(Debug, Clone)]
pub struct Freqs<S> {
    pub w1: S,
    pub w2: S,
}

impl<S: Scalar> Freqs<S> {
    pub fn new(w1: S, w2: S) -> Self {
        Self { w1, w2 }
    }

    pub fn x1(&self) -> S {
        self.w1.clone() * self.w1.clone()
    }

    pub fn x2(&self) -> S {
        self.w2.clone() * self.w2.clone()
    }

    /// `omega1 * omega2`.
    pub fn u(&self) -> S {
        self.w1.clone() * self.w2.clone()
    }

    fn raw(&self, f: Factor) -> S {
        let i = |n| S::int(n);
        let (x1, x2) = (self.x1(), self.x2());
        match f {
            Factor::Omega1 => self.w1.clone(),
            Factor::Omega2 => self.w2.clone(),
            Factor::P1 => i(2) * x1 - i(1),
            Factor::P2 => i(2) * x2 - i(1),
            Factor::Q1 => i(5) * x1 - i(1),
            Factor::Q2 => i(5) * x2 - i(1),
            Factor::G1 => i(9) + i(4) * x1,
            Factor::G2 => i(9) + i(4) * x2,
            Factor::R => i(4) * x1 - x2,
            Factor::S => x1 - i(4) * x2,
            Factor::H1 => i(9) - i(59) * x1.clone() + i(62) * x1.powi(2) + i(40) * x1.powi(3),
            Factor::H2 => i(9) - i(59) * x2.clone() + i(62) * x2.powi(2) + i(40) * x2.powi(3),
            Factor::T1 => i(-9) + i(14) * x1.clone() + i(8) * x1.powi(2),
            Factor::T2 => i(-9) + i(14) * x2.clone() + i(8) * x2.powi(2),
            Factor::T2Minus => i(-9) - i(14) * x2.clone() + i(8) * x2.powi(2),
            Factor::K2 => x2 - i(2) * self.w2.powi(3),
            Factor::M1 => i(1) - i(7) * x1.clone() + i(10) * x1.powi(2),
            Factor::M2 => i(1) - i(7) * x2.clone() + i(10) * x2.powi(2),
            Factor::Sum1 => i(2) * self.w1.clone() + self.w2.clone(),
            Factor::Sum2 => self.w1.clone() + i(2) * self.w2.clone(),
            Factor::G2Linear => i(9) + i(4) * self.w2.clone(),
        }
    }

    /// Value of a denominator factor, or the named singular error.
    pub fn factor(&self, f: Factor) -> Result<S> {
        let v = self.raw(f);
        if v.is_negligible() {
            Err(Error::Singular { factor: f.name() })
        } else {
            Ok(v)
        }
    }
}

/// Which reading of the tables to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Every entry as printed.
    #[default]
    Verbatim,
    /// The `omega1^6` coefficient of `A13` replaced by `407/16`, the value
    /// in the mirror-image entry `C13`.
    SymmetricA13,
}

/// The printed `omega1^6` coefficient of `A13`, numerator over 32.
pub const A13_PRINTED_SEXTIC: i64 = 8_141_559;

fn r<S: Scalar>(n: i64, d: i64) -> S {
    S::ratio(n, d)
}

fn i<S: Scalar>(n: i64) -> S {
    S::int(n)
}

/// `sum_k c_k x^k / den`, the shape shared by most `A` and `C` entries.
fn poly_over<S: Scalar>(coeffs: &[(i64, i64)], x: &S, den: &S) -> S {
    let mut xk = i::<S>(1);
    let mut terms = Vec::with_capacity(coeffs.len());
    for &(n, d) in coeffs {
        terms.push(r::<S>(n, d) * xk.clone() / den.clone());
        xk = xk * x.clone();
    }
    S::sum(terms)
}

pub fn a11<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    let den = p1.powi(2) * q1;
    Ok(poly_over(&[(-9, 8), (259, 24), (-205, 18), (31, 18)], &f.x1(), &den))
}

pub fn a12<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    let den = p1.powi(2) * q1;
    Ok(poly_over(&[(1, 36), (-13, 18), (13, 27), (167, 72), (107, 108)], &f.x1(), &den))
}

pub fn a13<S: Scalar>(f: &Freqs<S>, variant: Variant) -> Result<S> {
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    // (1 - 2 w1^2)^3 = -p1^3
    let den = -p1.powi(3) * q1.powi(2);
    let sextic = match variant {
        Variant::Verbatim => (-A13_PRINTED_SEXTIC, 32),
        Variant::SymmetricA13 => (-407, 16),
    };
    Ok(poly_over(&[(1, 2), (-421, 32), (-19, 2), sextic, (29, 1)], &f.x1(), &den))
}

pub fn a14<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    let den = p1.powi(2) * q1;
    Ok(poly_over(&[(1319, 436), (-12639, 436), (14275, 436), (-799, 218)], &f.x1(), &den))
}

pub fn a15<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    let den = -p1.powi(3) * q1.powi(2);
    Ok(poly_over(&[(57, 52), (-525, 52), (-475, 26), (1559, 26), (283, 13)], &f.x1(), &den))
}

pub fn a16<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let g1 = f.factor(Factor::G1)?;
    let (x1, s3) = (f.x1(), S::sqrt3());
    Ok(S::sum(vec![
        -i::<S>(2747) * x1.clone() / (i::<S>(10368) * s3.clone() * p1.clone()),
        i::<S>(41) * g1.clone() / (i::<S>(9216) * s3.clone() * p1.powi(2)),
        -i::<S>(93899) * g1.clone() / (i::<S>(331776) * s3.clone() * p1.clone()),
        i::<S>(12875) * x1 * g1 / (i::<S>(82944) * s3 * p1.powi(2)),
    ]))
}

pub fn a17<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let p1 = f.factor(Factor::P1)?;
    let g1 = f.factor(Factor::G1)?;
    let rr = f.factor(Factor::R)?;
    let (x1, s3) = (f.x1(), S::sqrt3());
    Ok(S::sum(vec![
        -i::<S>(1337) / (i::<S>(6144) * s3.clone() * p1.clone()),
        // printed with a bare omega1, not omega1^2
        i::<S>(779) * f.w1.clone() * g1.clone() / (i::<S>(10368) * s3.clone() * p1.powi(2)),
        i::<S>(41) * g1.clone() / (i::<S>(18432) * s3.clone() * p1.powi(2)),
        -i::<S>(227347) * x1.clone() * g1.clone() / (i::<S>(331776) * s3.clone() * p1.clone()),
        -i::<S>(37259) * g1.clone() / (i::<S>(82944) * s3.clone() * p1.clone()),
        i::<S>(6517) * x1 * g1 / (i::<S>(3072) * s3 * p1.powi(2) * rr),
    ]))
}

/// `(1 - 5 w1^2)(1 - 2 w1^2)(1 - 5 w2^2)(1 - 2 w2^2)`.
fn b_den<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    Ok(f.factor(Factor::Q1)? * f.factor(Factor::P1)? * f.factor(Factor::Q2)? * f.factor(Factor::P2)?)
}

pub fn b11<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    // (1-5w1^2)(-1+2w1^2)(1-5w2^2)(1-2w2^2) has one sign flip fewer than b_den
    let den = -b_den(f)?;
    let u = f.u();
    Ok(S::sum(vec![
        i::<S>(43) * u.clone() / (i::<S>(6) * den.clone()),
        i::<S>(32) * u.powi(3) / (i::<S>(3) * den),
    ]))
}

pub fn b12<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let den = b_den(f)?;
    let (p1, g2) = (f.factor(Factor::P1)?, f.factor(Factor::G2)?);
    let u = f.u();
    Ok(S::sum(vec![
        i::<S>(309) * u.clone() / (i::<S>(8) * den.clone()),
        i::<S>(5904) * u.clone() / (p1 * g2.powi(2)),
        -i::<S>(407) * u.powi(3) / (i::<S>(6) * den),
    ]))
}

pub fn b13<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p1, g2) = (f.factor(Factor::P1)?, f.factor(Factor::G2)?);
    let den = i::<S>(8)
        * f.factor(Factor::Omega1)?
        * f.factor(Factor::Omega2)?
        * f.factor(Factor::H1)?
        * f.factor(Factor::H2)?;
    let u = f.u();
    let u2 = u.powi(2);
    Ok(S::sum(vec![
        i::<S>(1800) * u / (p1 * g2.powi(2)),
        poly_over(&[(10083, 1), (-614070, 1), (400800, 1), (-3035216, 1), (-260802, 1)], &u2, &den),
    ]))
}

pub fn b14<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let den = b_den(f)?;
    let u = f.u();
    Ok(S::sum(vec![
        i::<S>(247) * u.clone() / (i::<S>(4) * den.clone()),
        i::<S>(6817) * u.powi(3) / (i::<S>(36) * den),
    ]))
}

pub fn b15<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p1, g2) = (f.factor(Factor::P1)?, f.factor(Factor::G2)?);
    let den = i::<S>(32)
        * f.factor(Factor::Omega1)?
        * f.factor(Factor::Omega2)?
        * f.factor(Factor::Q1)?.powi(2)
        * f.factor(Factor::Q2)?.powi(2)
        * f.factor(Factor::T1)?
        * f.factor(Factor::T2Minus)?;
    let u = f.u();
    let u2 = u.powi(2);
    Ok(S::sum(vec![
        i::<S>(1800) * u / (p1 * g2.powi(2)),
        i::<S>(-89211) / den.clone(),
        i::<S>(2042998) * u2.clone() / den.clone(),
        // printed with an extra omega1^2
        i::<S>(1028577) * u2.powi(2) * f.x1() / den.clone(),
        i::<S>(16052098) * u2.powi(3) / den.clone(),
        i::<S>(1215804) * u2.powi(4) / den,
    ]))
}

pub fn b16<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let den = i::<S>(512)
        * f.factor(Factor::Omega1)?
        * f.factor(Factor::Omega2)?
        * f.factor(Factor::P1)?
        * f.factor(Factor::G2)?.powi(2);
    Ok(i::<S>(1599) * S::sqrt3() * (i::<S>(9) + i::<S>(192) * f.u() + f.x2()) / den)
}

pub fn b17<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let w1 = f.factor(Factor::Omega1)?;
    let w2 = f.factor(Factor::Omega2)?;
    let den = i::<S>(512)
        * w1.powi(2)
        * w2.powi(4)
        * f.factor(Factor::P1)?
        * f.factor(Factor::T2)?;
    let x2 = f.x2();
    // the printed numerator leaves a parenthesis open; it is closed after the w2^7 term
    let first = i::<S>(2398599) - i::<S>(9031680) * x2.clone() - i::<S>(369) * w1.clone() * w2.powi(3)
        + i::<S>(574) * w1.clone() * w2.powi(5)
        + i::<S>(15744) * w1.powi(2) * w2.powi(6)
        + i::<S>(328) * w2.powi(7);
    let second = i::<S>(192) * (i::<S>(-41601) + i::<S>(41) * f.x1()) * w2.powi(4);
    Ok(S::sum(vec![
        -i::<S>(3) * S::sqrt3() * first / den.clone(),
        -second / den,
    ]))
}

pub fn c11<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p2, q2) = (f.factor(Factor::P2)?, f.factor(Factor::Q2)?);
    // last term printed over the omega1 factors
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    let den2 = p2.powi(2) * q2;
    let x2 = f.x2();
    Ok(S::sum(vec![
        poly_over(&[(9, 8), (205, 24), (-205, 18)], &x2, &den2),
        r::<S>(31, 18) * x2.powi(3) / (p1.powi(2) * q1),
    ]))
}

pub fn c12<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p2, q2) = (f.factor(Factor::P2)?, f.factor(Factor::Q2)?);
    let den = p2.powi(2) * q2;
    Ok(poly_over(&[(1, 36), (-13, 18), (13, 27), (-167, 72), (107, 108)], &f.x2(), &den))
}

pub fn c13<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p2, q2) = (f.factor(Factor::P2)?, f.factor(Factor::Q2)?);
    let (p1, q1) = (f.factor(Factor::P1)?, f.factor(Factor::Q1)?);
    let den2 = -p2.powi(3) * q2.powi(2);
    let x2 = f.x2();
    Ok(S::sum(vec![
        poly_over(&[(1, 2), (-421, 32), (-19, 2), (-407, 16)], &x2, &den2),
        // last term printed over the omega1 factors
        i::<S>(29) * x2.powi(4) / (-p1.powi(3) * q1.powi(2)),
    ]))
}

pub fn c14<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p2, q2) = (f.factor(Factor::P2)?, f.factor(Factor::Q2)?);
    let den = p2.powi(2) * q2;
    Ok(poly_over(&[(1319, 436), (-12639, 436), (14275, 436), (-799, 218)], &f.x2(), &den))
}

pub fn c15<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let (p2, q2) = (f.factor(Factor::P2)?, f.factor(Factor::Q2)?);
    let den = -p2.powi(3) * q2.powi(2);
    Ok(poly_over(&[(57, 52), (525, 52), (-475, 26), (1559, 26), (283, 13)], &f.x2(), &den))
}

pub fn c16<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    let w2 = f.factor(Factor::Omega2)?;
    let den = i::<S>(1024) * w2.powi(2) * f.factor(Factor::T2)?;
    let x2 = f.x2();
    let num = i::<S>(-3) + i::<S>(32) * x2.clone() + i::<S>(48) * x2.powi(2);
    Ok(-i::<S>(287) * S::sqrt3() * num / den)
}

pub fn c17<S: Scalar>(f: &Freqs<S>) -> Result<S> {
    // (-w1^2 + 4 w2^2) = -S
    let den = i::<S>(512) * f.factor(Factor::G2)? * -f.factor(Factor::S)? * f.factor(Factor::K2)?.powi(2);
    let x2 = f.x2();
    let first = i::<S>(82)
        * f.x1()
        * (i::<S>(3) - i::<S>(38) * x2.clone() + i::<S>(16) * x2.powi(2) + i::<S>(96) * x2.powi(3));
    let second = i::<S>(3)
        * x2.clone()
        * (i::<S>(-142911) + i::<S>(195110) * x2.clone() + i::<S>(74728) * x2.powi(2)
            + i::<S>(66784) * x2.powi(3));
    Ok(S::sum(vec![
        -S::sqrt3() * first / den.clone(),
        S::sqrt3() * second / den,
    ]))
}

/// All 21 tabulated functions at one frequency pair; index `k` holds `X_{1,k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Appendix1<S> {
    pub a: [S; 7],
    pub b: [S; 7],
    pub c: [S; 7],
}

pub fn appendix1_coeffs<S: Scalar>(f: &Freqs<S>, variant: Variant) -> Result<Appendix1<S>> {
    Ok(Appendix1 {
        a: [a11(f)?, a12(f)?, a13(f, variant)?, a14(f)?, a15(f)?, a16(f)?, a17(f)?],
        b: [b11(f)?, b12(f)?, b13(f)?, b14(f)?, b15(f)?, b16(f)?, b17(f)?],
        c: [c11(f)?, c12(f)?, c13(f)?, c14(f)?, c15(f)?, c16(f)?, c17(f)?],
    })
}

/// `x1 + (x2 + x3 g) eps + (x4 + x5 g) A2 + (x6 + x7 g) W1`.
fn assemble(t: &[f64; 7], params: &SystemParams) -> f64 {
    let g = params.gamma;
    t[0] + (t[1] + t[2] * g) * params.eps + (t[3] + t[4] * g) * params.a2 + (t[5] + t[6] * g) * params.w1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub variant: Variant,
    pub table: Appendix1<f64>,
}

impl NormalFormCoeffs {
    /// `(f2, g2)`: the action-dependent frequency corrections.
    pub fn corrections(&self, actions: &ActionPair) -> (f64, f64) {
        (
            self.a * actions.i1 + self.b * actions.i2,
            self.b * actions.i1 + self.c * actions.i2,
        )
    }

    /// `-(A w2^2 + 2 B w1 w2 + C w1^2)`.
    pub fn determinant(&self, freqs: &FrequencyPair) -> f64 {
        -(self.a * freqs.omega2.powi(2) + 2.0 * self.b * freqs.u + self.c * freqs.omega1.powi(2))
    }
}

pub fn normal_form_abc(
    params: &SystemParams,
    freqs: &FrequencyPair,
    variant: Variant,
) -> Result<NormalFormCoeffs> {
    let table = appendix1_coeffs(&Freqs::new(freqs.omega1, freqs.omega2), variant)?;
    Ok(NormalFormCoeffs {
        a: assemble(&table.a, params),
        b: assemble(&table.b, params),
        c: assemble(&table.c, params),
        variant,
        table,
    })
}

/// Action-angle coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionPair {
    pub i1: f64,
    pub i2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl ActionPair {
    /// Rejects negative actions; angles are reduced to `[0, 2 pi)`.
    pub fn new(i1: f64, i2: f64, phi1: f64, phi2: f64) -> Result<Self> {
        if !(i1 >= 0.0 && i2 >= 0.0) {
            return Err(Error::domain(format!("actions ({i1}, {i2}) must be non-negative")));
        }
        let tau = std::f64::consts::TAU;
        Ok(Self { i1, i2, phi1: phi1.rem_euclid(tau), phi2: phi2.rem_euclid(tau) })
    }
}

/// Normalized Hamiltonian truncated at fourth order.
pub fn normalized_hamiltonian(actions: &ActionPair, freqs: &FrequencyPair, nf: &NormalFormCoeffs) -> f64 {
    let ActionPair { i1, i2, .. } = *actions;
    freqs.omega1 * i1 - freqs.omega2 * i2
        + 0.5 * (nf.a * i1 * i1 + 2.0 * nf.b * i1 * i2 + nf.c * i2 * i2)
}

/// One divisor `Delta_{p,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divisor {
    pub p: i32,
    pub q: i32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoserReport {
    /// Smallest `|k1 w1 + k2 w2|` over `0 < |k1| + |k2| <= 4`.
    pub min_combination: f64,
    pub argmin: (i32, i32),
    /// Integer pairs (up to overall sign) with `|k1 w1 + k2 w2| <= tol`.
    pub resonant: Vec<(i32, i32)>,
    pub divisors: Vec<Divisor>,
    /// Divisors among `divisors` with `|value| <= tol`.
    pub vanishing_divisors: Vec<(i32, i32)>,
    pub tol: f64,
}

/// Divisors that vanish for every frequency pair.
pub const TRIVIAL_DIVISORS: [(i32, i32); 2] = [(1, 0), (0, 1)];

/// Divisors that must not vanish.
pub const CHECKED_DIVISORS: [(i32, i32); 5] = [(0, 0), (2, 0), (0, 2), (1, 1), (1, -1)];

/// `[w1^2 - (w1 p - w2 q)^2][w2^2 - (w1 p - w2 q)^2]`.
pub fn divisor(freqs: &FrequencyPair, p: i32, q: i32) -> f64 {
    let (w1, w2) = (freqs.omega1, freqs.omega2);
    let s = (w1 * p as f64 - w2 * q as f64).powi(2);
    (w1 * w1 - s) * (w2 * w2 - s)
}

pub fn moser_divisor_check(freqs: &FrequencyPair, tol: f64) -> MoserReport {
    let (w1, w2) = (freqs.omega1, freqs.omega2);
    let mut min_combination = f64::INFINITY;
    let mut argmin = (0, 0);
    let mut resonant = Vec::new();
    for k1 in 0..=4i32 {
        for k2 in -4..=4i32 {
            let order = k1.abs() + k2.abs();
            // one representative per +-(k1, k2)
            if order == 0 || order > 4 || (k1 == 0 && k2 < 0) {
                continue;
            }
            let v = (k1 as f64 * w1 + k2 as f64 * w2).abs();
            if v < min_combination {
                min_combination = v;
                argmin = (k1, k2);
            }
            if v <= tol {
                resonant.push((k1, k2));
            }
        }
    }
    let divisors: Vec<Divisor> = CHECKED_DIVISORS
        .iter()
        .map(|&(p, q)| Divisor { p, q, value: divisor(freqs, p, q) })
        .collect();
    let vanishing_divisors = divisors.iter().filter(|d| d.value.abs() <= tol).map(|d| (d.p, d.q)).collect();
    MoserReport { min_combination, argmin, resonant, divisors, vanishing_divisors, tol }
}
