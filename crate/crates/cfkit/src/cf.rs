//! Continued fractions with symbolic element rules.
//!
//! A `CfSpec` is b0 + K_{k>=1}(a_k / b_k). Elements come from an optional
//! explicit lead block (k = 1..=lead.len()) followed by periodic rules in
//! the index variable `k`, selected by the residue of the global index.
//! Parameters (x, z, w, alpha, r) stay symbolic until bound.

use crate::poly::{var_index, NVARS, VAR_NAMES};
use crate::ratfunc::RatFunc;
use crate::rational::{eps, pow10, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const K_VAR: usize = 1; // index of `k` in the variable universe

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfError {
    /// An element rule hit a pole of its coefficient at index k.
    ElementPole { k: i64 },
    /// A partial numerator a_k evaluated to zero.
    ZeroElement { k: i64 },
    /// B_depth = 0, so the approximant at this depth does not exist.
    ZeroDenominator { depth: i64 },
    /// A parameter the spec depends on was not bound.
    Unbound { name: String },
    /// The spec itself is malformed.
    BadSpec(String),
}

impl std::fmt::Display for CfError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CfError::ElementPole { k } => write!(f, "element rule has a pole at k = {k}"),
            CfError::ZeroElement { k } => write!(f, "partial numerator vanishes at k = {k}"),
            CfError::ZeroDenominator { depth } => {
                write!(f, "approximant denominator vanishes at depth {depth}")
            }
            CfError::Unbound { name } => write!(f, "parameter {name} is not bound"),
            CfError::BadSpec(s) => write!(f, "malformed continued fraction: {s}"),
        }
    }
}

impl std::error::Error for CfError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfSpec {
    pub b0: RatFunc,
    /// Explicit elements (a_k, b_k) for k = 1..=lead.len(); parameters only.
    pub lead: Vec<(RatFunc, RatFunc)>,
    pub period: usize,
    /// Rules per residue class of the global index k; functions of k and parameters.
    pub rules: Vec<(RatFunc, RatFunc)>,
    pub params: Vec<String>,
}

impl CfSpec {
    pub fn validate(&self) -> Result<(), CfError> {
        if self.period == 0 || self.rules.len() != self.period {
            return Err(CfError::BadSpec(format!(
                "period {} does not match {} rules",
                self.period,
                self.rules.len()
            )));
        }
        for p in &self.params {
            let idx = var_index(p)
                .ok_or_else(|| CfError::BadSpec(format!("unknown parameter {p}")))?;
            if idx == 0 || idx == K_VAR {
                return Err(CfError::BadSpec(format!("{p} cannot be a parameter")));
            }
        }
        let allowed = {
            let mut a = [false; NVARS];
            for p in &self.params {
                a[var_index(p).unwrap()] = true;
            }
            a
        };
        let check = |rf: &RatFunc, allow_k: bool, what: &str| -> Result<(), CfError> {
            let used = rf.vars_used();
            for i in 0..NVARS {
                if used[i] && !(allowed[i] || (allow_k && i == K_VAR)) {
                    return Err(CfError::BadSpec(format!(
                        "{what} uses undeclared variable {}",
                        VAR_NAMES[i]
                    )));
                }
            }
            Ok(())
        };
        check(&self.b0, false, "b0")?;
        for (i, (a, b)) in self.lead.iter().enumerate() {
            check(a, false, &format!("lead a_{}", i + 1))?;
            check(b, false, &format!("lead b_{}", i + 1))?;
        }
        for (c, (a, b)) in self.rules.iter().enumerate() {
            check(a, true, &format!("rule a (class {c})"))?;
            check(b, true, &format!("rule b (class {c})"))?;
        }
        Ok(())
    }

    /// First index governed by the periodic rules.
    pub fn first_rule_index(&self) -> i64 {
        self.lead.len() as i64 + 1
    }

    /// Element (a_k, b_k) at a concrete index k >= 1, parameters still symbolic.
    pub fn element_at(&self, k: i64) -> Result<(RatFunc, RatFunc), CfError> {
        if k < 1 {
            return Err(CfError::BadSpec(format!("element index {k} out of range")));
        }
        if (k as usize) <= self.lead.len() {
            return Ok(self.lead[k as usize - 1].clone());
        }
        let class = (k as usize) % self.period;
        let kq = Q::from_integer(BigInt::from(k));
        let (a, b) = &self.rules[class];
        let a = a.subst_value(K_VAR, &kq).map_err(|_| CfError::ElementPole { k })?;
        let b = b.subst_value(K_VAR, &kq).map_err(|_| CfError::ElementPole { k })?;
        Ok((a, b))
    }

    /// Rule for the element at index j = mult*k + offset, as a function of k,
    /// for k in a fixed residue class of `modulus`. Only valid where j lands
    /// past the lead block; the caller guarantees that.
    pub fn symbolic_element(
        &self,
        mult: i64,
        offset: i64,
        res: usize,
        modulus: usize,
    ) -> Result<(RatFunc, RatFunc), CfError> {
        if (mult * modulus as i64).rem_euclid(self.period as i64) != 0 {
            return Err(CfError::BadSpec(format!(
                "index map {mult}k{offset:+} is not well defined modulo {modulus}"
            )));
        }
        let class = (mult * res as i64 + offset).rem_euclid(self.period as i64) as usize;
        let (a, b) = &self.rules[class];
        let am = Q::from_integer(BigInt::from(mult));
        let bo = Q::from_integer(BigInt::from(offset));
        let a = a
            .subst_affine(K_VAR, &am, &bo)
            .map_err(|_| CfError::BadSpec("degenerate index map".into()))?;
        let b = b
            .subst_affine(K_VAR, &am, &bo)
            .map_err(|_| CfError::BadSpec("degenerate index map".into()))?;
        Ok((a, b))
    }
}

/// Parameter bindings by variable index.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    vals: [Option<Q>; NVARS],
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_named(mut self, name: &str, v: Q) -> Self {
        let idx = var_index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        self.vals[idx] = Some(v);
        self
    }

    pub fn set(mut self, idx: usize, v: Q) -> Self {
        self.vals[idx] = Some(v);
        self
    }

    pub fn get(&self, idx: usize) -> Option<Q> {
        self.vals[idx].clone()
    }

    pub fn from_pairs(pairs: &[(&str, Q)]) -> Self {
        let mut b = Self::new();
        for (n, v) in pairs {
            b = b.set_named(n, v.clone());
        }
        b
    }
}

/// A spec with parameters substituted: rules univariate in k, lead concrete.
pub struct ResolvedCf {
    pub b0: Q,
    pub lead: Vec<(Q, Q)>,
    pub period: usize,
    pub rules: Vec<(RatFunc, RatFunc)>,
}

impl CfSpec {
    pub fn resolve(&self, bind: &Bindings) -> Result<ResolvedCf, CfError> {
        self.validate()?;
        let subst_all = |rf: &RatFunc, what: &str| -> Result<RatFunc, CfError> {
            let mut out = rf.clone();
            for (i, name) in VAR_NAMES.iter().enumerate() {
                if i == K_VAR {
                    continue;
                }
                if out.vars_used()[i] {
                    let v = bind
                        .get(i)
                        .ok_or_else(|| CfError::Unbound { name: name.to_string() })?;
                    out = out.subst_value(i, &v).map_err(|_| {
                        CfError::BadSpec(format!("{what} is singular at {name} = {v}"))
                    })?;
                }
            }
            Ok(out)
        };
        let to_q = |rf: &RatFunc, what: &str| -> Result<Q, CfError> {
            subst_all(rf, what)?
                .as_constant()
                .ok_or_else(|| CfError::BadSpec(format!("{what} did not resolve to a constant")))
        };
        let b0 = to_q(&self.b0, "b0")?;
        let mut lead = Vec::with_capacity(self.lead.len());
        for (i, (a, b)) in self.lead.iter().enumerate() {
            lead.push((
                to_q(a, &format!("lead a_{}", i + 1))?,
                to_q(b, &format!("lead b_{}", i + 1))?,
            ));
        }
        let mut rules = Vec::with_capacity(self.rules.len());
        for (c, (a, b)) in self.rules.iter().enumerate() {
            rules.push((
                subst_all(a, &format!("rule a (class {c})"))?,
                subst_all(b, &format!("rule b (class {c})"))?,
            ));
        }
        Ok(ResolvedCf { b0, lead, period: self.period, rules })
    }
}

impl ResolvedCf {
    pub fn element(&self, k: i64) -> Result<(Q, Q), CfError> {
        if k < 1 {
            return Err(CfError::BadSpec(format!("element index {k} out of range")));
        }
        if (k as usize) <= self.lead.len() {
            return Ok(self.lead[k as usize - 1].clone());
        }
        let class = (k as usize) % self.period;
        let kq = Q::from_integer(BigInt::from(k));
        let bind = |i: usize| (i == K_VAR).then(|| kq.clone());
        let (a, b) = &self.rules[class];
        let a = a.eval(&bind).ok_or(CfError::ElementPole { k })?;
        let b = b.eval(&bind).ok_or(CfError::ElementPole { k })?;
        Ok((a, b))
    }
}

/// Numerators and denominators of the approximants, exactly:
/// entries (k, A_k, B_k) for k = -1, 0, ..., n.
pub fn approximants(cf: &CfSpec, n: i64, bind: &Bindings) -> Result<Vec<(i64, Q, Q)>, CfError> {
    let r = cf.resolve(bind)?;
    let mut out = Vec::with_capacity((n + 2).max(2) as usize);
    let (mut ap, mut bp) = (Q::one(), Q::zero()); // A_-1, B_-1
    let (mut a, mut b) = (r.b0.clone(), Q::one()); // A_0, B_0
    out.push((-1, ap.clone(), bp.clone()));
    out.push((0, a.clone(), b.clone()));
    for k in 1..=n {
        let (ak, bk) = r.element(k)?;
        if ak.is_zero() {
            return Err(CfError::ZeroElement { k });
        }
        let a2 = &bk * &a + &ak * &ap;
        let b2 = &bk * &b + &ak * &bp;
        ap = a;
        bp = b;
        a = a2;
        b = b2;
        out.push((k, a.clone(), b.clone()));
    }
    Ok(out)
}

/// Exact value of the depth-n approximant A_n/B_n.
pub fn value_at_depth(cf: &CfSpec, depth: i64, bind: &Bindings) -> Result<Q, CfError> {
    let apx = approximants(cf, depth, bind)?;
    let (_, a, b) = apx.last().unwrap();
    if b.is_zero() {
        return Err(CfError::ZeroDenominator { depth });
    }
    Ok(a / b)
}

/// Streaming integer-scaled evaluator. The recurrence runs on integer
/// columns sharing one implicit scale (which cancels in A/B), so no
/// per-step rational reduction is needed; approximant values are read off
/// by one short division per rung.
pub struct Evaluator {
    rc: ResolvedCf,
    k: i64,
    a: BigInt,
    b: BigInt,
    ap: BigInt,
    bp: BigInt,
}

impl Evaluator {
    pub fn new(cf: &CfSpec, bind: &Bindings) -> Result<Self, CfError> {
        let rc = cf.resolve(bind)?;
        let b0 = rc.b0.clone();
        Ok(Evaluator {
            rc,
            k: 0,
            a: b0.numer().clone(),
            b: b0.denom().clone(),
            ap: b0.denom().clone(),
            bp: BigInt::zero(),
        })
        // state: (A_0, B_0) = (b0, 1) and (A_-1, B_-1) = (1, 0), both scaled
        // by denom(b0) so the columns start integral on a shared scale
    }

    pub fn depth(&self) -> i64 {
        self.k
    }

    pub fn advance_to(&mut self, depth: i64) -> Result<(), CfError> {
        while self.k < depth {
            let k = self.k + 1;
            let (aq, bq) = self.rc.element(k)?;
            if aq.is_zero() {
                return Err(CfError::ZeroElement { k });
            }
            let (na, da) = (aq.numer(), aq.denom());
            let (nb, db) = (bq.numer(), bq.denom());
            // A_k = (nb/db) A_{k-1} + (na/da) A_{k-2}; multiply through by da*db
            let new_a = nb * da * &self.a + na * db * &self.ap;
            let new_b = nb * da * &self.b + na * db * &self.bp;
            let rescale = da * db;
            self.ap = &self.a * &rescale;
            self.bp = &self.b * &rescale;
            self.a = new_a;
            self.b = new_b;
            self.k = k;
        }
        Ok(())
    }

    /// A_k/B_k scaled to `scale_digits` decimal places (error <= 1 ulp), or
    /// None when B_k = 0.
    pub fn scaled_value(&self, scale_digits: usize) -> Option<BigInt> {
        if self.b.is_zero() {
            return None;
        }
        Some(&self.a * pow10(scale_digits) / &self.b)
    }

    pub fn value(&self, digits: usize) -> Result<Q, CfError> {
        let s = self
            .scaled_value(digits)
            .ok_or(CfError::ZeroDenominator { depth: self.k })?;
        Ok(Q::new(s, pow10(digits)))
    }
}

pub struct AdaptiveResult {
    pub value: Q,
    pub depth: i64,
    /// Whether two successive rungs agreed to digits+5 significant digits
    /// before the depth cap.
    pub met: bool,
    /// |last rung - previous rung| (zero if only one rung was available).
    pub last_delta: Q,
}

/// Doubling-ladder evaluation: rungs at depths 16, 32, 64, ... up to
/// `max_depth`, one continued recurrence pass with snapshots. Stops as soon
/// as successive rungs agree to digits+5 significant digits; otherwise
/// returns the deepest value with `met = false`.
pub fn eval_adaptive(
    cf: &CfSpec,
    bind: &Bindings,
    digits: usize,
    max_depth: i64,
) -> Result<AdaptiveResult, CfError> {
    if max_depth < 1 {
        return Err(CfError::BadSpec(format!("depth cap {max_depth} too small")));
    }
    let agree_digits = digits + 5;
    let wp = agree_digits + 10;
    let mut ev = Evaluator::new(cf, bind)?;
    let mut prev: Option<(i64, BigInt)> = None;
    let mut rung: i64 = 16.min(max_depth);
    loop {
        ev.advance_to(rung)?;
        if let Some(cur) = ev.scaled_value(wp) {
            if let Some((_, p)) = &prev {
                let delta = (&cur - p).magnitude().clone();
                // relative agreement: |delta| <= |cur| * 10^-agree_digits,
                // with 4 ulps of slack for the two truncated readings
                let lhs = BigInt::from(delta) * pow10(agree_digits);
                let rhs = cur.magnitude().clone();
                if lhs <= BigInt::from(rhs) + pow10(agree_digits) * BigInt::from(4u32) {
                    return Ok(AdaptiveResult {
                        value: Q::new(cur.clone(), pow10(wp)),
                        depth: rung,
                        met: true,
                        last_delta: Q::new(&cur - p, pow10(wp)).abs(),
                    });
                }
            }
            prev = Some((rung, cur));
        }
        if rung >= max_depth {
            break;
        }
        rung = (rung * 2).min(max_depth);
    }
    let (depth, cur) = prev.ok_or(CfError::ZeroDenominator { depth: max_depth })?;
    let value = Q::new(cur.clone(), pow10(wp));
    let last_delta = Q::zero();
    Ok(AdaptiveResult { value, depth, met: false, last_delta })
}

/// Exact A_depth/B_depth rounded to `digits` significant digits (half-even).
pub fn classical_value(
    cf: &CfSpec,
    depth: i64,
    bind: &Bindings,
    digits: usize,
) -> Result<String, CfError> {
    let v = value_at_depth(cf, depth, bind)?;
    Ok(crate::rational::to_decimal_string(&v, digits))
}

/// |A_{m+1}/B_{m+1} - A_m/B_m| = |prod_{k<=m+1} a_k| / |B_{m+1} B_m|,
/// the classical consecutive-approximant gap.
pub fn approximant_gap(cf: &CfSpec, m: i64, bind: &Bindings) -> Result<Q, CfError> {
    let apx = approximants(cf, m + 1, bind)?;
    let r = cf.resolve(bind)?;
    let mut prod = Q::one();
    for k in 1..=(m + 1) {
        let (a, _) = r.element(k)?;
        prod *= a;
    }
    let (_, _, bm) = &apx[(m + 1) as usize]; // index m in the vec (offset by the k=-1 entry)
    let (_, _, bm1) = &apx[(m + 2) as usize];
    if bm.is_zero() || bm1.is_zero() {
        return Err(CfError::ZeroDenominator { depth: m + 1 });
    }
    Ok((prod / (bm * bm1)).abs())
}

/// Depth cap for adaptive evaluation, from CFKIT_MAX_DEPTH (default 8192).
pub fn max_depth_from_env() -> i64 {
    std::env::var("CFKIT_MAX_DEPTH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .filter(|&d| d >= 1)
        .unwrap_or(8192)
}

/// Convenience: |u - v| <= 10^-tol.
pub fn within(u: &Q, v: &Q, tol: usize) -> bool {
    (u - v).abs() <= eps(tol)
}
