//! Tabular output: the critical-mass tables, stability-region sweeps and the
//! list of handled source inconsistencies.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::kam::{self, classify_against, CriticalMassSet, Drag};
use crate::linear;
use crate::normal_form::{a13, Freqs, Variant};
use crate::params::DEFAULT_CD;

/// Significant digits of every number written by [`Table`].
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Decimal rendering with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&exp) {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit; re-render in that case
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    let significant = digits.trim_start_matches('0').len();
    if significant > SIGNIFICANT_DIGITS && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`].
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

/// Named numeric columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// One header line, comma separated.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_sig(*v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Array of row objects keyed by column name.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    for (c, v) in self.columns.iter().zip(row) {
                        m.insert(c.clone(), json_number(*v));
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("table serializes")
    }
}

/// JSON number rounded to [`SIGNIFICANT_DIGITS`]; non-finite values become `null`.
pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map(Value::Number).unwrap_or(Value::Null)
}

/// Radiation factors of the first table.
pub const TABLE1_Q1: [f64; 6] = [0.95, 0.96, 0.97, 0.98, 0.99, 1.00];

/// Oblateness values of the second table.
pub const TABLE2_A2: [f64; 8] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];

/// Critical masses against `q1` with `A2 = 0`; drag from the default `c_d`.
pub fn table1() -> Table {
    let mut t = Table::new(&["q1", "mu_c1", "mu_c2", "mu_c3"]);
    for q1 in TABLE1_Q1 {
        let s = CriticalMassSet::for_radiation(q1, 0.0);
        t.push(vec![q1, s.mu_c1.value, s.mu_c2.value, s.mu_c3.value]);
    }
    t
}

/// Critical masses against `A2` with `q1 = 1`.
pub fn table2() -> Table {
    let mut t = Table::new(&["a2", "mu_c1", "mu_c2", "mu_c3"]);
    for a2 in TABLE2_A2 {
        let s = CriticalMassSet::for_radiation(1.0, a2);
        t.push(vec![a2, s.mu_c1.value, s.mu_c2.value, s.mu_c3.value]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Mu,
    Q1,
    A2,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Mu => "mu",
            SweepParam::Q1 => "q1",
            SweepParam::A2 => "a2",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu" => Ok(SweepParam::Mu),
            "q1" => Ok(SweepParam::Q1),
            "a2" => Ok(SweepParam::A2),
            other => Err(Error::Domain(format!("unknown sweep parameter {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, count: usize) -> Self {
        Self { param, min, max, count }
    }

    /// `count` evenly spaced values; the end points are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// One- or two-axis grid over `(mu, q1, a2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    /// Value of `mu` when it is not an axis; without it no verdict is produced.
    pub mu: Option<f64>,
    pub q1: f64,
    pub a2: f64,
    pub c_d: f64,
    pub tol: f64,
}

impl SweepSpec {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes, mu: None, q1: 1.0, a2: 0.0, c_d: DEFAULT_CD, tol: kam::DEFAULT_CLASSIFY_TOL }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Domain("a sweep needs one or two axes".into()));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::Domain("sweep axes must differ".into()));
        }
        for ax in &self.axes {
            if ax.count < 2 {
                return Err(Error::Domain(format!("axis {} needs count >= 2", ax.param.name())));
            }
            if !(ax.min < ax.max) || !ax.min.is_finite() || !ax.max.is_finite() {
                return Err(Error::Domain(format!("axis {} needs finite min < max", ax.param.name())));
            }
            let ok = match ax.param {
                SweepParam::Mu => ax.min > 0.0 && ax.max <= 0.5,
                SweepParam::Q1 => ax.min > 0.0 && ax.max <= 1.0,
                SweepParam::A2 => ax.min >= 0.0,
            };
            if !ok {
                return Err(Error::Domain(format!("axis {} leaves the parameter domain", ax.param.name())));
            }
        }
        if !(self.c_d > 0.0) || !(self.tol >= 0.0) {
            return Err(Error::Domain("c_d must be positive and tol non-negative".into()));
        }
        Ok(())
    }

    fn has_mu(&self) -> bool {
        self.mu.is_some() || self.axes.iter().any(|a| a.param == SweepParam::Mu)
    }
}

/// Critical-mass curves (and the verdict when `mu` is known) on every grid cell.
///
/// Cells are evaluated in parallel; rows come out in grid order, first axis
/// slowest.
pub fn region_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let cells: Vec<Vec<f64>> = match grids.as_slice() {
        [a] => a.iter().map(|v| vec![*v]).collect(),
        [a, b] => a.iter().flat_map(|u| b.iter().map(move |v| vec![*u, *v])).collect(),
        _ => unreachable!("validated"),
    };
    let with_verdict = spec.has_mu();
    let rows: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|cell| {
            let (mut mu, mut q1, mut a2) = (spec.mu, spec.q1, spec.a2);
            for (ax, v) in spec.axes.iter().zip(cell) {
                match ax.param {
                    SweepParam::Mu => mu = Some(*v),
                    SweepParam::Q1 => q1 = *v,
                    SweepParam::A2 => a2 = *v,
                }
            }
            let set = CriticalMassSet::new(1.0 - q1, a2, Drag::FromRadiation { c_d: spec.c_d });
            let mut row = cell.clone();
            row.extend([set.mu_c0.value, set.mu_c1.value, set.mu_c2.value, set.mu_c3.value]);
            if with_verdict {
                let mu = mu.expect("mu known");
                row.push(classify_against(mu, &set, spec.tol).code() as f64);
            }
            row
        })
        .collect();
    let mut columns: Vec<&str> = spec.axes.iter().map(|a| a.param.name()).collect();
    columns.extend(["mu_c0", "mu_c1", "mu_c2", "mu_c3"]);
    if with_verdict {
        columns.push("verdict");
    }
    let mut table = Table::new(&columns);
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

/// One handled inconsistency of the source formulas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Erratum {
    pub id: String,
    /// Verbatim fragment of the source formula or caption concerned.
    pub anchor: String,
    pub issue: String,
    pub resolution: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

fn erratum(id: &str, anchor: &str, issue: &str, resolution: &str, data: Option<Value>) -> Erratum {
    Erratum {
        id: id.into(),
        anchor: anchor.into(),
        issue: issue.into(),
        resolution: resolution.into(),
        data,
    }
}

/// Slopes that differ from the published ones by more than this are listed.
pub const ALPHA_REPORT_TOL: f64 = 1e-3;

pub fn errata_report() -> Vec<Erratum> {
    let mut out = Vec::new();

    let g = 0.98;
    let classical_g = -3.0 * 3f64.sqrt() / 4.0 * g;
    out.push(erratum(
        "printed-g",
        r"G&=&\frac{\sqrt{3}}{8}\Bigl[2\epsilon+6A_2-",
        "The xy coefficient of H2 vanishes when eps = A2 = W1 = 0, so the quartic's constant term loses its gamma dependence and contradicts the frequency product relation.",
        "A corrected G = G_printed - (3 sqrt3 / 4) gamma is used in the quartic and discriminant; both values are exposed.",
        Some(serde_json::json!({ "gamma": g, "g_printed": 0.0, "g_corrected": json_number(classical_g) })),
    ));

    let probe = Freqs::new(0.95f64, 0.3);
    let verbatim = a13(&probe, Variant::Verbatim).ok();
    let symmetric = a13(&probe, Variant::SymmetricA13).ok();
    out.push(erratum(
        "a13-sextic",
        r"-\frac{8141559\omega_1^6}{32(1-2\omega_1^2)^3(-1+5\omega_1^2)^2}",
        "The omega1^6 coefficient of A13 is out of scale with the mirror-image entry C13, which has 407/16.",
        "Verbatim by default; the symmetric-a13 variant substitutes 407/16 and both are reported.",
        Some(serde_json::json!({
            "omega1": 0.95, "omega2": 0.3,
            "verbatim": verbatim.map(json_number),
            "symmetric": symmetric.map(json_number),
        })),
    ));

    let p = kam::mu_c3_pipeline(0.0, 0.0, 0.0).ok();
    out.push(erratum(
        "caption-frequencies",
        r"\omega_1=0.924270,\omega_2=0.381742,D_0= 0",
        "These satisfy omega1^2 + omega2^2 = 1 but give (omega1 omega2)^2 = 0.12449, not the root u0 = 0.072863 where D0 vanishes.",
        "The frequencies derived from u0 are reported instead.",
        p.as_ref().map(|p| {
            serde_json::json!({ "omega1": json_number(p.omega1), "omega2": json_number(p.omega2), "u0": json_number(p.u0) })
        }),
    ));

    out.push(erratum(
        "mu-c0-caption",
        r"\mu_{c0}=.035829",
        "A figure caption quotes a linear-stability boundary different from the closed form 0.038521.",
        "The closed form is used throughout.",
        Some(serde_json::json!({ "closed_form": linear::mu_c0(0.0, 0.0, 0.0), "exact_classical": json_number((1.0 - (23.0f64 / 27.0).sqrt()) / 2.0) })),
    ));

    if let Some(p) = &p {
        let delta: Vec<f64> = p.alphas.iter().zip(kam::PUBLISHED_ALPHAS).map(|(a, b)| a - b).collect();
        if delta.iter().any(|d| d.abs() > ALPHA_REPORT_TOL) {
            out.push(erratum(
                "alpha-slopes",
                r"\alpha_1=-0.120489\dots,\ \alpha_2=-0.373118\dots,",
                "The slopes recomputed from the tabulated D2..D7 at the classical u0 frequencies do not reproduce the published values.",
                "The closed form for mu_c3 stays authoritative; the recomputed slopes are reported only.",
                Some(serde_json::json!({
                    "recomputed": p.alphas.iter().map(|a| json_number(*a)).collect::<Vec<_>>(),
                    "published": kam::PUBLISHED_ALPHAS,
                    "d0": p.d0.iter().map(|a| json_number(*a)).collect::<Vec<_>>(),
                })),
            ));
        }
    }

    out.push(erratum(
        "g-parenthesis",
        r"\frac{(11W_1}{2\sqrt{3}}",
        "Unmatched opening parenthesis in the drag term of G.",
        "Read as 11 W1 / (2 sqrt3).",
        None,
    ));
    out.push(erratum(
        "d5-parenthesis",
        r"\frac{447897600}{(-1+2\omega_1^2(9+4\omega_2^2)}",
        "Unbalanced parentheses in one denominator of D5.",
        "Read as (-1 + 2 omega1^2)(9 + 4 omega2^2).",
        None,
    ));
    out.push(erratum(
        "b17-parenthesis",
        r"\frac{3\sqrt{3}(2398599-9031680\omega_2^2",
        "The numerator of the first B17 term never closes its parenthesis.",
        "Closed after the 328 omega2^7 term.",
        None,
    ));
    out.push(erratum(
        "c-tables-omega1-factors",
        r"\frac{31\omega_2^6}{18(-1+2\omega_1^2)^2(-1+5\omega_1^2)}",
        "The last terms of C11 and C13 use omega1 denominator factors where the rest of each entry uses omega2.",
        "Transcribed as printed.",
        None,
    ));
    out.push(erratum(
        "frequency-relations-vs-linearization",
        r"\frac{9\epsilon}{8}+\frac{9\gamma\epsilon}{8} +\frac{117\gamma A_2}{16}",
        "The first-order radiation and oblateness terms of the frequency product relation disagree with the eigenvalues of the linearized equations of motion.",
        "The relations are implemented as printed; the disagreement is measured by the acceptance suite.",
        None,
    ));
    out.push(erratum(
        "mu-c0-drag-sign",
        r"0.704139 W_1",
        "The drag term enlarges the linear-stability range although drag is described as reducing it.",
        "Implemented as printed.",
        None,
    ));
    out.push(erratum(
        "table2-rounding",
        r"0.0&0.024294 &0.01352 &0.010914",
        "Two mu_c2 entries of the oblateness table carry fewer digits than the closed form reproduces.",
        "The closed form is evaluated unrounded.",
        None,
    ));
    out
}

pub fn errata_json() -> String {
    serde_json::to_string_pretty(&errata_report()).expect("errata serialize")
}
