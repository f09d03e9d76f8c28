//! JSON views of specs, verification rows, and correction runs.
//!
//! Rational functions render through `Display` and parse back through
//! `parse::parse_ratfunc`; exact rationals travel as `"p/q"` strings so no
//! precision is lost. Reports carry `schema_version`; docs/formats.md has
//! the field-by-field layouts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cf::CfSpec;
use crate::mc::{Correction, DecayOrder, McRun};
use crate::parse::{parse_ratfunc, ParseError};
use crate::pattern::PatternRule;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::term::M_VAR;

pub const SCHEMA_VERSION: u32 = 1;

/// A continued fraction with every element as an expression string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfSpecJson {
    pub b0: String,
    /// Explicit (a, b) pairs for k = 1..=lead.len().
    pub lead: Vec<(String, String)>,
    pub period: usize,
    /// (a, b) per residue class of k.
    pub rules: Vec<(String, String)>,
    pub params: Vec<String>,
}

impl CfSpecJson {
    pub fn from_spec(cf: &CfSpec) -> Self {
        let pair = |p: &(RatFunc, RatFunc)| (p.0.to_string(), p.1.to_string());
        CfSpecJson {
            b0: cf.b0.to_string(),
            lead: cf.lead.iter().map(pair).collect(),
            period: cf.period,
            rules: cf.rules.iter().map(pair).collect(),
            params: cf.params.clone(),
        }
    }

    pub fn to_spec(&self) -> Result<CfSpec, ParseError> {
        let mut allowed: Vec<&str> = self.params.iter().map(|s| s.as_str()).collect();
        let b0 = parse_ratfunc(&self.b0, &allowed)?;
        let mut lead = Vec::with_capacity(self.lead.len());
        for (a, b) in &self.lead {
            lead.push((parse_ratfunc(a, &allowed)?, parse_ratfunc(b, &allowed)?));
        }
        allowed.push("k");
        let mut rules = Vec::with_capacity(self.rules.len());
        for (a, b) in &self.rules {
            rules.push((parse_ratfunc(a, &allowed)?, parse_ratfunc(b, &allowed)?));
        }
        Ok(CfSpec { b0, lead, period: self.period, rules, params: self.params.clone() })
    }
}

/// One verification result row; absent fields do not apply to the check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRow {
    pub entry: String,
    pub check: String,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<i64>,
    /// Decimal magnitude of the defect, for numeric checks.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReportJson {
    pub schema_version: u32,
    pub rows: Vec<VerifyRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReportJson {
    pub schema_version: u32,
    pub entry: String,
    pub params: BTreeMap<String, String>,
    pub n: i64,
    pub depth: i64,
    /// Whether the adaptive ladder met its agreement target under the cap.
    pub depth_met: bool,
    pub digits: usize,
    pub value: String,
    /// The bare sum of the first n terms, same rounding.
    pub partial_sum: String,
    pub reference: String,
    /// Correct decimal digits of value and of partial_sum against reference.
    pub value_digits: usize,
    pub partial_digits: usize,
    pub digits_gained: i64,
}

/// "infinite" when a correction solves the equation exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecayJson {
    Finite(i64),
    Infinite(String),
}

impl From<&DecayOrder> for DecayJson {
    fn from(d: &DecayOrder) -> Self {
        match d {
            DecayOrder::Finite(k) => DecayJson::Finite(*k),
            DecayOrder::Infinite => DecayJson::Infinite("infinite".into()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelJson {
    pub lambda: String,
    /// Monic polynomial in m.
    pub phi: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrectionJson {
    /// Polynomial part in m; "0" when absent.
    pub poly: String,
    pub levels: Vec<LevelJson>,
    pub decay_order: DecayJson,
    /// Leading constant C of the defect T = -C/m^order + O(m^{-order-1}).
    pub leading_constant: String,
}

impl CorrectionJson {
    pub fn new(mc: &Correction, decay: &DecayOrder, leading: &crate::rational::Q) -> Self {
        CorrectionJson {
            poly: mc.poly_part.to_string(),
            levels: mc
                .levels
                .iter()
                .map(|l| LevelJson { lambda: l.lambda.to_string(), phi: l.phi.to_string() })
                .collect(),
            decay_order: decay.into(),
            leading_constant: leading.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternJson {
    pub poly: String,
    pub lambda0: String,
    pub phi0: String,
    /// lambda at level j as a function of k, valid j >= 1.
    pub lambda: String,
    /// Monic Phi at level j, in m with k-dependent coefficients.
    pub phi: String,
}

impl From<&PatternRule> for PatternJson {
    fn from(p: &PatternRule) -> Self {
        let mut phi = RatFunc::from_poly(Poly::var(M_VAR).pow(p.phi_deg as u32));
        for (d, c) in p.phi_coeffs.iter().enumerate() {
            let mono = RatFunc::from_poly(Poly::var(M_VAR).pow(d as u32));
            phi = phi.add(&c.mul(&mono));
        }
        PatternJson {
            poly: p.poly_part.to_string(),
            lambda0: p.lambda0.to_string(),
            phi0: p.phi0.to_string(),
            lambda: p.lambda.to_string(),
            phi: phi.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McReportJson {
    pub schema_version: u32,
    pub ratio: String,
    pub rhs: String,
    pub corrections: Vec<CorrectionJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pattern: Option<PatternJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl McReportJson {
    pub fn new(ratio: &RatFunc, rhs: &RatFunc, run: &McRun, pattern: Option<&PatternRule>) -> Self {
        let corrections = run
            .corrections
            .iter()
            .zip(&run.test_errors)
            .map(|(mc, te)| CorrectionJson::new(mc, &te.decay_order, &te.leading_constant))
            .collect();
        McReportJson {
            schema_version: SCHEMA_VERSION,
            ratio: ratio.to_string(),
            rhs: rhs.to_string(),
            corrections,
            pattern: pattern.map(PatternJson::from),
            note: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryJson {
    pub name: String,
    pub params: Vec<String>,
    pub tail: CfSpecJson,
    pub has_defect_certificate: bool,
}
