//! The built-in identity catalog.
//!
//! Each entry packages one telescoped series/continued-fraction identity:
//! a summand t_m, a weight W(n), and a CF tail X(x) such that
//!
//!     total(n) = t_0 + ... + t_{n-1} + W(n) * (offset + CF(n))
//!
//! is independent of n and equals a constant that an unrelated oracle can
//! compute. Verification operations recompute both sides from independent
//! ingredients: residuals against the oracle, the difference equation the
//! tail satisfies, the exact defect certificate behind the tail's
//! derivation, and contractions/alternate forms where the entry has them.

mod entries;

use num_traits::{One, Signed, Zero};

use crate::cf::{self, Bindings, CfError, CfSpec};
use crate::oracles::{self, OracleError};
use crate::poly::var_index;
use crate::ratfunc::RatFunc;
use crate::rational::{qi, Q};
use crate::term::{DifferenceEquation, RamanujanTerm, TermError, M_VAR};
use crate::transforms::{self, Sequence, TransformError};

pub const ENTRY_NAMES: [&str; 7] = [
    "catalan",
    "catalan_companion",
    "arcsine",
    "lerch",
    "landau_companion",
    "exp",
    "mathieu",
];

/// Which independent reference-value procedure backs the entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Catalan,
    Companion,
    Arcsine,
    Lerch,
    Landau,
    Exp,
    Mathieu,
}

/// Exact certificate for the modified-approximant transform step behind an
/// entry: the fraction the transform is applied to, the modifying sequence,
/// the constant defect it must produce, and the telescoped denominators the
/// transformed fraction must have.
#[derive(Debug, Clone)]
pub struct BmCertificate {
    pub form: CfSpec,
    pub r: Sequence,
    pub phi: RatFunc,
    pub out_b0: RatFunc,
    pub out_b_lead: Vec<RatFunc>,
    pub out_b_rules: Vec<RatFunc>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// User-facing parameters (the tail variable x is internal).
    pub params: &'static [&'static str],
    pub term: RamanujanTerm,
    pub weight: RamanujanTerm,
    pub head_offset: Q,
    pub cf_tail: CfSpec,
    pub deq: DifferenceEquation,
    pub bm: Option<BmCertificate>,
    /// Interleaved form whose even part is the tail.
    pub lemma_cf: Option<CfSpec>,
    /// Alternate (interleaved) fraction with the same value as the tail.
    pub alt_cf: Option<CfSpec>,
    pub oracle: OracleKind,
}

#[derive(Debug)]
pub enum CatalogError {
    UnknownEntry(String),
    Domain(String),
    NotAvailable(String),
    Eval(String),
    Cf(CfError),
    Term(TermError),
    Transform(TransformError),
    Oracle(OracleError),
}

impl std::fmt::Display for CatalogError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatalogError::UnknownEntry(n) => write!(f, "unknown entry '{n}'"),
            CatalogError::Domain(msg) => write!(f, "domain error: {msg}"),
            CatalogError::NotAvailable(msg) => write!(f, "not available: {msg}"),
            CatalogError::Eval(msg) => write!(f, "{msg}"),
            CatalogError::Cf(e) => write!(f, "{e}"),
            CatalogError::Term(e) => write!(f, "{e}"),
            CatalogError::Transform(e) => write!(f, "{e}"),
            CatalogError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CatalogError {}

impl From<CfError> for CatalogError {
    fn from(e: CfError) -> Self {
        CatalogError::Cf(e)
    }
}
impl From<TermError> for CatalogError {
    fn from(e: TermError) -> Self {
        CatalogError::Term(e)
    }
}
impl From<TransformError> for CatalogError {
    fn from(e: TransformError) -> Self {
        CatalogError::Transform(e)
    }
}
impl From<OracleError> for CatalogError {
    fn from(e: OracleError) -> Self {
        CatalogError::Oracle(e)
    }
}

pub fn entry_names() -> &'static [&'static str] {
    &ENTRY_NAMES
}

pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "catalan" => Ok(entries::catalan()),
        "catalan_companion" => Ok(entries::catalan_companion()),
        "arcsine" => Ok(entries::arcsine()),
        "lerch" => Ok(entries::lerch()),
        "landau_companion" => Ok(entries::landau_companion()),
        "exp" => Ok(entries::exp()),
        "mathieu" => Ok(entries::mathieu()),
        _ => Err(CatalogError::UnknownEntry(name.to_string())),
    }
}

/// One labelled exact check inside a certificate report.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub label: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|it| it.pass)
    }

    fn push(&mut self, label: impl Into<String>, pass: bool) {
        self.items.push(CheckItem { label: label.into(), pass });
    }
}

impl CatalogEntry {
    fn param_value(&self, bind: &Bindings, name: &str) -> Result<Q, CatalogError> {
        bind.get(var_index(name).expect("catalog parameter names a known variable"))
            .ok_or_else(|| {
                CatalogError::Domain(format!("{} requires parameter {name}", self.name))
            })
    }

    pub fn check_domain(&self, bind: &Bindings) -> Result<(), CatalogError> {
        match self.name {
            "arcsine" => {
                let w = self.param_value(bind, "w")?;
                if w <= Q::zero() || w >= qi(4) {
                    return Err(CatalogError::Domain(format!("w = {w} violates 0 < w < 4")));
                }
            }
            "lerch" => {
                let z = self.param_value(bind, "z")?;
                if z.is_zero() || z == Q::one() || z.abs() > Q::one() {
                    return Err(CatalogError::Domain(format!(
                        "z = {z} violates |z| <= 1, z != 0, z != 1"
                    )));
                }
                let alpha = self.param_value(bind, "alpha")?;
                if alpha <= Q::zero() {
                    return Err(CatalogError::Domain(format!("alpha = {alpha} must be positive")));
                }
            }
            "exp" => {
                if self.param_value(bind, "z")?.is_zero() {
                    return Err(CatalogError::Domain("z must be nonzero".into()));
                }
            }
            "mathieu" => {
                let r = self.param_value(bind, "r")?;
                if r < Q::zero() {
                    return Err(CatalogError::Domain(format!("r = {r} must be >= 0")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// offset + CF(x := n), with the fraction cut at the given depth.
    pub fn tail_value(&self, n: i64, bind: &Bindings, depth: i64) -> Result<Q, CatalogError> {
        self.check_domain(bind)?;
        if n < 0 {
            return Err(CatalogError::Domain(format!("n = {n} must be >= 0")));
        }
        let b = bind.clone().set_named("x", qi(n));
        Ok(&self.head_offset + cf::value_at_depth(&self.cf_tail, depth, &b)?)
    }

    /// Partial sum through t_{n-1} plus the weighted tail at x = n. The
    /// telescoped identity makes this independent of n.
    pub fn reconstructed_total(
        &self,
        n: i64,
        bind: &Bindings,
        depth: i64,
    ) -> Result<Q, CatalogError> {
        let tail = self.tail_value(n, bind, depth)?;
        let w = self.weight.value_at(n, bind)?;
        Ok(self.term.partial_sum(n, bind)? + w * tail)
    }

    pub fn reference_value(&self, bind: &Bindings, digits: usize) -> Result<Q, CatalogError> {
        self.check_domain(bind)?;
        Ok(match self.oracle {
            OracleKind::Catalan => oracles::catalan_constant(digits),
            OracleKind::Companion => oracles::companion_value(digits)?,
            OracleKind::Arcsine => {
                oracles::arcsine_value(&self.param_value(bind, "w")?, digits)?
            }
            OracleKind::Lerch => oracles::lerch_value(
                &self.param_value(bind, "z")?,
                &self.param_value(bind, "alpha")?,
                digits,
            )?,
            OracleKind::Landau => oracles::landau_value(digits),
            OracleKind::Exp => oracles::exp_value(&self.param_value(bind, "z")?, digits),
            OracleKind::Mathieu => {
                oracles::mathieu_value(&self.param_value(bind, "r")?, digits)?
            }
        })
    }

    /// |oracle - reconstructed total|, oracle computed to `digits`.
    pub fn tail_identity_residual(
        &self,
        n: i64,
        bind: &Bindings,
        depth: i64,
        digits: usize,
    ) -> Result<Q, CatalogError> {
        let total = self.reconstructed_total(n, bind, depth)?;
        let oracle = self.reference_value(bind, digits)?;
        Ok((oracle - total).abs())
    }

    /// |X_m - ratio(m) X_{m+1} - rhs(m)| with both tails cut at `depth`.
    pub fn difference_equation_residual(
        &self,
        m: i64,
        bind: &Bindings,
        depth: i64,
    ) -> Result<Q, CatalogError> {
        if m < 0 {
            return Err(CatalogError::Domain(format!("m = {m} must be >= 0")));
        }
        let xm = self.tail_value(m, bind, depth)?;
        let xm1 = self.tail_value(m + 1, bind, depth)?;
        let deq = self.deq.resolve(bind)?;
        let mq = qi(m);
        let at = |rf: &RatFunc| -> Result<Q, CatalogError> {
            rf.eval(&|i| (i == M_VAR).then(|| mq.clone())).ok_or_else(|| {
                CatalogError::Eval(format!("difference equation has a pole at m = {m}"))
            })
        };
        Ok((xm - at(&deq.ratio)? * xm1 - at(&deq.rhs)?).abs())
    }

    /// Run the modified-approximant transform on the certified form and
    /// compare, exactly, the defect against its closed form and the
    /// transformed denominators against their telescoped forms.
    pub fn phi_certificate(&self) -> Result<CheckReport, CatalogError> {
        let cert = self
            .bm
            .as_ref()
            .ok_or_else(|| CatalogError::NotAvailable("numeric-only entry".into()))?;
        let (out, phi) = transforms::bauer_muir(&cert.form, &cert.r)?;
        let mut rep = CheckReport::default();
        for (i, got) in phi.lead.iter().enumerate() {
            rep.push(
                format!("defect at index {} equals the closed form", phi.start + i as i64),
                got == &cert.phi,
            );
        }
        for (c, got) in phi.rules.iter().enumerate() {
            rep.push(
                format!("defect rule (indices {c} mod {}) equals the closed form", phi.period),
                got == &cert.phi,
            );
        }
        rep.push("b0 + r0 telescopes", out.b0 == cert.out_b0);
        if out.lead.len() != cert.out_b_lead.len() || out.rules.len() != cert.out_b_rules.len() {
            rep.push("transformed element layout matches the certificate", false);
            return Ok(rep);
        }
        for (i, want) in cert.out_b_lead.iter().enumerate() {
            rep.push(format!("telescoped b at element {}", i + 1), &out.lead[i].1 == want);
        }
        for (c, want) in cert.out_b_rules.iter().enumerate() {
            rep.push(
                format!("telescoped b rule (indices {c} mod {})", out.period),
                &out.rules[c].1 == want,
            );
        }
        Ok(rep)
    }

    /// Contract the interleaved form to its even part and compare it,
    /// element by element, against the tail.
    pub fn even_part_linkage(&self, k_max: i64) -> Result<CheckReport, CatalogError> {
        let lemma = self
            .lemma_cf
            .as_ref()
            .ok_or_else(|| CatalogError::NotAvailable("no interleaved form on record".into()))?;
        let contracted = transforms::even_part(lemma)?;
        let mut rep = CheckReport::default();
        rep.push("b0", contracted.b0 == self.cf_tail.b0);
        for k in 1..=k_max {
            let (ca, cb) = contracted.element_at(k)?;
            let (ta, tb) = self.cf_tail.element_at(k)?;
            rep.push(format!("element {k}"), ca == ta && cb == tb);
        }
        Ok(rep)
    }

    /// |tail at depth d - alternate form at depth 2d| at the same x; the
    /// alternate fraction spends two elements per element of the tail.
    pub fn alt_form_residual(
        &self,
        x: &Q,
        bind: &Bindings,
        depth: i64,
    ) -> Result<Q, CatalogError> {
        let alt = self
            .alt_cf
            .as_ref()
            .ok_or_else(|| CatalogError::NotAvailable("no interleaved form on record".into()))?;
        self.check_domain(bind)?;
        if x < &Q::zero() {
            return Err(CatalogError::Domain(format!("x = {x} must be >= 0")));
        }
        let b = bind.clone().set_named("x", x.clone());
        let main = cf::value_at_depth(&self.cf_tail, depth, &b)?;
        let ival = cf::value_at_depth(alt, 2 * depth, &b)?;
        Ok((main - ival).abs())
    }
}
