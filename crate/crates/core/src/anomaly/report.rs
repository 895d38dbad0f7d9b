//! Verification reports: structured outcome, JSON form and a text renderer
//! derived from the JSON.

use std::fmt::Write as _;

use num::BigInt;
use serde_json::{json, Map, Value};

use super::{DivisibilityAudit, DivisibilityStatus, Setting};
use crate::algebra::{Basis, GaussianRational, GradedPolynomial};
use crate::genus::PolySeries;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    PassWithVariant,
    Gap,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::PassWithVariant => "PASS_WITH_VARIANT",
            Status::Gap => "GAP",
            Status::Fail => "FAIL",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        [Status::Pass, Status::PassWithVariant, Status::Gap, Status::Fail].into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Poly(GradedPolynomial),
    Series(PolySeries),
}

fn render_poly(p: &GradedPolynomial, basis: Basis) -> String {
    match basis {
        Basis::Normalized => p.to_string(),
        Basis::Standard => p.to_standard_basis().to_string(),
    }
}

fn render_series(s: &PolySeries, basis: Basis) -> String {
    match basis {
        Basis::Normalized => s.to_string(),
        Basis::Standard => {
            let ring = s.ring().standard();
            s.map(&ring, |c| c.to_standard_basis()).to_string()
        }
    }
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Poly(p) => p.is_zero(),
            Residual::Series(s) => s.is_zero(),
        }
    }

    pub fn render(&self, basis: Basis) -> String {
        match self {
            Residual::Poly(p) => render_poly(p, basis),
            Residual::Series(s) => render_series(s, basis),
        }
    }
}

/// An alternative reading of a check, evaluated alongside the literal one.
#[derive(Clone, Debug, PartialEq)]
pub struct Variant {
    pub description: String,
    pub residual: Residual,
}

/// One identity `lhs - rhs = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub residual: Residual,
    pub variants: Vec<Variant>,
}

impl Check {
    pub fn new(name: &str, description: &str, residual: Residual) -> Self {
        Check { name: name.to_string(), description: description.to_string(), residual, variants: Vec::new() }
    }

    pub fn with_variant(mut self, description: &str, residual: Residual) -> Self {
        self.variants.push(Variant { description: description.to_string(), residual });
        self
    }

    pub fn status(&self) -> Status {
        if self.residual.is_zero() {
            Status::Pass
        } else if self.variants.iter().any(|v| v.residual.is_zero()) {
            Status::PassWithVariant
        } else {
            Status::Fail
        }
    }

    fn to_json(&self, basis: Basis) -> Value {
        json!({
            "name": self.name,
            "description": self.description,
            "status": self.status().name(),
            "zero": self.residual.is_zero(),
            "residual": self.residual.render(basis),
            "variants": self.variants.iter().map(|v| json!({
                "description": v.description,
                "zero": v.residual.is_zero(),
                "residual": v.residual.render(basis),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerificationReport {
    /// `theorem`, `crosscheck`, `structure` or `divisibility`.
    pub case: String,
    pub theorem: Option<String>,
    pub setting: Option<Setting>,
    pub h: Vec<GradedPolynomial>,
    pub solve_coeffs: Vec<Vec<BigInt>>,
    pub integral: bool,
    pub checks: Vec<Check>,
    pub divisibility: Vec<DivisibilityAudit>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(case: &str) -> Self {
        VerificationReport { case: case.to_string(), integral: true, ..Default::default() }
    }

    /// PASS iff every residual vanishes and integrality holds; a documented
    /// variant reading downgrades to PASS_WITH_VARIANT; unmet divisibility
    /// claims give GAP.
    pub fn status(&self) -> Status {
        let mut s = if self.integral { Status::Pass } else { Status::Fail };
        for c in &self.checks {
            s = s.max(c.status());
        }
        for d in &self.divisibility {
            if d.status == DivisibilityStatus::Gap {
                s = s.max(Status::Gap);
            }
        }
        s
    }

    pub fn title(&self) -> String {
        let mut t = self.case.clone();
        if let Some(th) = &self.theorem {
            write!(t, " {th}").unwrap();
        }
        if let Some(s) = &self.setting {
            write!(t, " [{s}]").unwrap();
        }
        for d in &self.divisibility {
            write!(t, " [m={} l={}]", d.m, d.l).unwrap();
        }
        t
    }

    pub fn to_json(&self, basis: Basis) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA_VERSION));
        m.insert("case".into(), json!(self.case));
        m.insert("theorem".into(), json!(self.theorem));
        m.insert("setting".into(), json!(self.setting));
        m.insert("status".into(), json!(self.status().name()));
        m.insert("basis".into(), json!(match basis { Basis::Normalized => "normalized", Basis::Standard => "standard" }));
        m.insert("h".into(), json!(self.h.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
        m.insert(
            "h_standard".into(),
            json!(self.h.iter().map(|p| p.to_standard_basis().to_string()).collect::<Vec<_>>()),
        );
        m.insert(
            "solve_coeffs".into(),
            json!(self
                .solve_coeffs
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        );
        m.insert("solve_coeffs_integral".into(), json!(self.integral));
        m.insert("checks".into(), Value::Array(self.checks.iter().map(|c| c.to_json(basis)).collect()));
        m.insert(
            "divisibility".into(),
            Value::Array(self.divisibility.iter().map(DivisibilityAudit::to_json).collect()),
        );
        m.insert("notes".into(), json!(self.notes));
        Value::Object(m)
    }
}

fn str_field<'a>(v: &'a Value, key: &str) -> &'a str {
    v.get(key).and_then(Value::as_str).unwrap_or("")
}

/// Human-readable rendering of a report's JSON form.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let mut title = str_field(v, "case").to_string();
    if let Some(t) = v.get("theorem").and_then(Value::as_str) {
        write!(title, " {t}").unwrap();
    }
    if let Some(s) = v.get("setting").filter(|s| !s.is_null()) {
        write!(
            title,
            " [{} k={} l={} qorder={}]",
            str_field(s, "kind"),
            s["k"],
            s["l"],
            s["qorder"]
        )
        .unwrap();
    }
    writeln!(out, "{title}: {}", str_field(v, "status")).unwrap();
    let h_key = if str_field(v, "basis") == "standard" { "h_standard" } else { "h" };
    if let Some(h) = v.get(h_key).and_then(Value::as_array) {
        for (r, p) in h.iter().enumerate() {
            writeln!(out, "  h{r} = {}", p.as_str().unwrap_or("")).unwrap();
        }
    }
    if let Some(rows) = v.get("solve_coeffs").and_then(Value::as_array) {
        if !rows.is_empty() {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| {
                    let cells: Vec<&str> = r.as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            writeln!(out, "  solve coefficients {} (integral: {})", rows.join(" "), v["solve_coeffs_integral"]).unwrap();
        }
    }
    let checks = v.get("checks").and_then(Value::as_array).cloned().unwrap_or_default();
    let width = checks.iter().map(|c| str_field(c, "name").len()).max().unwrap_or(0);
    for c in &checks {
        writeln!(out, "  {:width$}  {:17}  {}", str_field(c, "name"), str_field(c, "status"), str_field(c, "description"))
            .unwrap();
        if c["zero"] != Value::Bool(true) {
            writeln!(out, "  {:width$}  residual: {}", "", str_field(c, "residual")).unwrap();
        }
        for var in c.get("variants").and_then(Value::as_array).into_iter().flatten() {
            let mark = if var["zero"] == Value::Bool(true) { "holds" } else { "fails" };
            writeln!(out, "  {:width$}  variant ({mark}): {}", "", str_field(var, "description")).unwrap();
        }
    }
    for d in v.get("divisibility").and_then(Value::as_array).into_iter().flatten() {
        writeln!(
            out,
            "  corollary {} m={} l={}: implied 2^{} vs claimed 2^{} -> {}",
            str_field(d, "corollary"),
            d["m"],
            d["l"],
            d["implied_exponent"],
            d["claimed_exponent"],
            str_field(d, "status")
        )
        .unwrap();
    }
    for n in v.get("notes").and_then(Value::as_array).into_iter().flatten() {
        writeln!(out, "  note: {}", n.as_str().unwrap_or("")).unwrap();
    }
    out
}

/// Imaginary parts of a series' coefficients in the standard basis.
pub(super) fn imaginary_part(s: &PolySeries) -> PolySeries {
    let ring = s.ring().standard();
    s.map(&ring, |c| {
        let std = c.to_standard_basis();
        let mut out = GradedPolynomial::zero(&ring);
        for (m, x) in std.terms() {
            let im = GaussianRational::from_rational(x.im.clone());
            out = &out + &GradedPolynomial::from_monomial(&ring, m.clone(), im);
        }
        out
    })
}
