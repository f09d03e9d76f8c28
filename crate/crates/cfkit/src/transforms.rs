//! Classical continued fraction transforms, done symbolically on element
//! rules: equivalence scaling, the Bauer-Muir construction against a
//! modifying sequence, and the even part (contraction to even-indexed
//! approximants).

use crate::cf::{CfError, CfSpec, K_VAR};
use crate::poly::NVARS;
use crate::ratfunc::RatFunc;
use crate::rational::Q;
use num_bigint::BigInt;
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// Equivalence scaling requires r_0 = 1.
    NeedsUnitHead,
    /// The defining quantity of the transform vanishes identically.
    DoesNotExist(String),
    /// A division the construction needs is impossible.
    Degenerate(String),
    Cf(CfError),
}

impl std::fmt::Display for TransformError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransformError::NeedsUnitHead => write!(f, "modifying sequence must have r_0 = 1"),
            TransformError::DoesNotExist(s) => write!(f, "{s}"),
            TransformError::Degenerate(s) => write!(f, "{s}"),
            TransformError::Cf(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TransformError {}

impl From<CfError> for TransformError {
    fn from(e: CfError) -> Self {
        TransformError::Cf(e)
    }
}

/// A sequence indexed from `start`, with an explicit lead block followed by
/// periodic rules in k (selected by the residue of the global index, like
/// `CfSpec` elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    pub start: i64,
    pub lead: Vec<RatFunc>,
    pub period: usize,
    pub rules: Vec<RatFunc>,
}

impl Sequence {
    pub fn constant(rf: RatFunc) -> Self {
        Sequence { start: 0, lead: vec![], period: 1, rules: vec![rf] }
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        if self.period == 0 || self.rules.len() != self.period {
            return Err(TransformError::Degenerate(format!(
                "sequence period {} does not match {} rules",
                self.period,
                self.rules.len()
            )));
        }
        Ok(())
    }

    /// First index governed by the periodic rules.
    pub fn first_rule_index(&self) -> i64 {
        self.start + self.lead.len() as i64
    }

    /// Value at a concrete index (parameters still symbolic).
    pub fn at(&self, k: i64) -> Result<RatFunc, TransformError> {
        if k < self.start {
            return Err(TransformError::Degenerate(format!(
                "sequence index {k} precedes start {}",
                self.start
            )));
        }
        let off = (k - self.start) as usize;
        if off < self.lead.len() {
            return Ok(self.lead[off].clone());
        }
        let class = k.rem_euclid(self.period as i64) as usize;
        self.rules[class]
            .subst_value(K_VAR, &Q::from_integer(BigInt::from(k)))
            .map_err(|_| TransformError::Degenerate(format!("sequence rule has a pole at k = {k}")))
    }

    /// Rule for index j = mult*k + offset as a function of k, for k in a
    /// fixed residue class of `modulus`; only valid where j lands past the
    /// lead block.
    pub fn symbolic(
        &self,
        mult: i64,
        offset: i64,
        res: usize,
        modulus: usize,
    ) -> Result<RatFunc, TransformError> {
        if (mult * modulus as i64).rem_euclid(self.period as i64) != 0 {
            return Err(TransformError::Degenerate(format!(
                "index map {mult}k{offset:+} is not well defined modulo {modulus}"
            )));
        }
        let class = (mult * res as i64 + offset).rem_euclid(self.period as i64) as usize;
        self.rules[class]
            .subst_affine(
                K_VAR,
                &Q::from_integer(BigInt::from(mult)),
                &Q::from_integer(BigInt::from(offset)),
            )
            .map_err(|_| TransformError::Degenerate("degenerate index map".into()))
    }
}

fn union_params(cf: &CfSpec, extra: &[&RatFunc]) -> Vec<String> {
    let mut used = [false; NVARS];
    for p in &cf.params {
        used[crate::poly::var_index(p).unwrap()] = true;
    }
    for rf in extra {
        let u = rf.vars_used();
        for i in 0..NVARS {
            if i != K_VAR && i != 0 {
                used[i] |= u[i];
            }
        }
    }
    (0..NVARS)
        .filter(|&i| used[i])
        .map(|i| crate::poly::VAR_NAMES[i].to_string())
        .collect()
}

/// Equivalence scaling by r (r_0 must be 1): element k becomes
/// (r_{k-1} r_k a_k, r_k b_k); every approximant is unchanged.
pub fn equivalence(cf: &CfSpec, r: &Sequence) -> Result<CfSpec, TransformError> {
    cf.validate()?;
    r.validate()?;
    if r.start != 0 {
        return Err(TransformError::Degenerate("modifying sequence must start at index 0".into()));
    }
    if r.at(0)? != RatFunc::one() {
        return Err(TransformError::NeedsUnitHead);
    }
    let p = cf.period.lcm(&r.period);
    // r(k) and r(k-1) must both sit in r's rule region for k > lead_len
    let lead_len = cf.lead.len().max(r.lead.len() + 1);
    let mut lead = Vec::with_capacity(lead_len);
    for k in 1..=(lead_len as i64) {
        let (a, b) = cf.element_at(k)?;
        let rk = r.at(k)?;
        let rkm = r.at(k - 1)?;
        lead.push((rkm.mul(&rk).mul(&a), rk.mul(&b)));
    }
    let mut rules = Vec::with_capacity(p);
    for res in 0..p {
        let (a, b) = cf.symbolic_element(1, 0, res, p)?;
        let rk = r.symbolic(1, 0, res, p)?;
        let rkm = r.symbolic(1, -1, res, p)?;
        rules.push((rkm.mul(&rk).mul(&a), rk.mul(&b)));
    }
    let all_rfs: Vec<&RatFunc> = r.lead.iter().chain(r.rules.iter()).collect();
    Ok(CfSpec {
        b0: cf.b0.clone(),
        lead,
        period: p,
        rules,
        params: union_params(cf, &all_rfs),
    })
}

/// The Bauer-Muir transform of b0 + K(a_k/b_k) with respect to a modifying
/// sequence r_0, r_1, ...: the continued fraction whose approximants are
/// the modified approximants (A_n + r_n A_{n-1})/(B_n + r_n B_{n-1}). It
/// exists iff phi_k = a_k - r_{k-1}(b_k + r_k) never vanishes; returns the
/// transformed fraction together with phi as an indexed sequence (from 1).
pub fn bauer_muir(cf: &CfSpec, r: &Sequence) -> Result<(CfSpec, Sequence), TransformError> {
    cf.validate()?;
    r.validate()?;
    if r.start != 0 {
        return Err(TransformError::Degenerate("modifying sequence must start at index 0".into()));
    }
    let p = cf.period.lcm(&r.period);
    // phi rules are valid once both the element and r(k), r(k-1) come from
    // periodic rules
    let phi_lead_len = cf.lead.len().max(r.lead.len() + 1);
    let mut phi_rules = Vec::with_capacity(p);
    for res in 0..p {
        let (a, b) = cf.symbolic_element(1, 0, res, p)?;
        let rk = r.symbolic(1, 0, res, p)?;
        let rkm = r.symbolic(1, -1, res, p)?;
        phi_rules.push(a.sub(&rkm.mul(&b.add(&rk))));
    }
    let out_lead_len = phi_lead_len + 2;
    let mut phi_lead = Vec::with_capacity(out_lead_len);
    for k in 1..=(out_lead_len as i64) {
        let (a, b) = cf.element_at(k)?;
        phi_lead.push(a.sub(&r.at(k - 1)?.mul(&b.add(&r.at(k)?))));
    }
    let phi = Sequence { start: 1, lead: phi_lead, period: p, rules: phi_rules };

    if phi.lead.iter().all(|f| f.is_zero()) && phi.rules.iter().all(|f| f.is_zero()) {
        return Err(TransformError::DoesNotExist(
            "Bauer-Muir transform does not exist".into(),
        ));
    }
    if phi.lead.iter().any(|f| f.is_zero()) || phi.rules.iter().any(|f| f.is_zero()) {
        return Err(TransformError::Degenerate(
            "phi vanishes identically at some index, so the transformed elements are undefined"
                .into(),
        ));
    }

    let b0 = cf.b0.add(&r.at(0)?);
    let mut lead = Vec::with_capacity(out_lead_len);
    {
        let (_, b1) = cf.element_at(1)?;
        lead.push((phi.at(1)?, b1.add(&r.at(1)?)));
    }
    for k in 2..=(out_lead_len as i64) {
        let (am, _) = cf.element_at(k - 1)?;
        let (_, b) = cf.element_at(k)?;
        let ratio = phi.at(k)?.div(&phi.at(k - 1)?).map_err(|_| {
            TransformError::Degenerate(format!("phi_{} vanishes", k - 1))
        })?;
        lead.push((
            am.mul(&ratio),
            b.add(&r.at(k)?).sub(&r.at(k - 2)?.mul(&ratio)),
        ));
    }
    let mut rules = Vec::with_capacity(p);
    for res in 0..p {
        let (am, _) = cf.symbolic_element(1, -1, res, p)?;
        let (_, b) = cf.symbolic_element(1, 0, res, p)?;
        let rk = r.symbolic(1, 0, res, p)?;
        let rkm2 = r.symbolic(1, -2, res, p)?;
        let ratio = phi
            .symbolic(1, 0, res, p)?
            .div(&phi.symbolic(1, -1, res, p)?)
            .map_err(|_| TransformError::Degenerate("phi rule vanishes".into()))?;
        rules.push((am.mul(&ratio), b.add(&rk).sub(&rkm2.mul(&ratio))));
    }
    let all_rfs: Vec<&RatFunc> = r.lead.iter().chain(r.rules.iter()).collect();
    let out = CfSpec {
        b0,
        lead,
        period: p,
        rules,
        params: union_params(cf, &all_rfs),
    };
    Ok((out, phi))
}

/// Even part: the fraction whose approximants are the even-indexed
/// approximants of the input (C_k = A_{2k}, D_k = B_{2k}). Needs every
/// even-indexed b nonzero.
pub fn even_part(cf: &CfSpec) -> Result<CfSpec, TransformError> {
    cf.validate()?;
    let p_in = cf.period;
    let p = if p_in % 2 == 0 { p_in / 2 } else { p_in };
    let lead_len = cf.lead.len() / 2 + 2;
    let b0 = cf.b0.clone();
    let mut lead = Vec::with_capacity(lead_len);
    {
        let (a1, b1) = cf.element_at(1)?;
        let (a2, b2) = cf.element_at(2)?;
        if b2.is_zero() {
            return Err(TransformError::Degenerate("b_2 vanishes identically".into()));
        }
        lead.push((a1.mul(&b2), a2.add(&b1.mul(&b2))));
    }
    for k in 2..=(lead_len as i64) {
        let (am2, bm2) = cf.element_at(2 * k - 2)?;
        let (am1, bm1) = cf.element_at(2 * k - 1)?;
        let (a, b) = cf.element_at(2 * k)?;
        if bm2.is_zero() {
            return Err(TransformError::Degenerate(format!(
                "b_{} vanishes identically",
                2 * k - 2
            )));
        }
        let quot = am1.mul(&b).div(&bm2).unwrap();
        lead.push((am2.mul(&quot).neg(), a.add(&bm1.mul(&b)).add(&quot)));
    }
    let mut rules = Vec::with_capacity(p);
    for res in 0..p {
        let (am2, bm2) = cf.symbolic_element(2, -2, res, p)?;
        let (am1, bm1) = cf.symbolic_element(2, -1, res, p)?;
        let (a, b) = cf.symbolic_element(2, 0, res, p)?;
        if bm2.is_zero() || b.is_zero() {
            return Err(TransformError::Degenerate(
                "even-indexed b vanishes identically".into(),
            ));
        }
        let quot = am1.mul(&b).div(&bm2).unwrap();
        rules.push((am2.mul(&quot).neg(), a.add(&bm1.mul(&b)).add(&quot)));
    }
    Ok(CfSpec { b0, lead, period: p, rules, params: cf.params.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{approximants, value_at_depth, Bindings};
    use crate::rational::{q, qi};

    fn golden() -> CfSpec {
        CfSpec {
            b0: RatFunc::one(),
            lead: vec![],
            period: 1,
            rules: vec![(RatFunc::one(), RatFunc::one())],
            params: vec![],
        }
    }

    fn exp_f_form() -> CfSpec {
        // b0 = x+1-z, a_k = k z, b_k = x+k+1-z
        let k = RatFunc::var_named("k");
        let x = RatFunc::var_named("x");
        let z = RatFunc::var_named("z");
        CfSpec {
            b0: x.add(&RatFunc::one()).sub(&z),
            lead: vec![],
            period: 1,
            rules: vec![(k.mul(&z), x.add(&k).add(&RatFunc::one()).sub(&z))],
            params: vec!["x".into(), "z".into()],
        }
    }

    #[test]
    fn equivalence_preserves_approximants() {
        let cf = golden();
        let r = Sequence {
            start: 0,
            lead: vec![RatFunc::one()],
            period: 1,
            rules: vec![RatFunc::int(2)],
        };
        let out = equivalence(&cf, &r).unwrap();
        let b = Bindings::new();
        let orig = approximants(&cf, 8, &b).unwrap();
        let scaled = approximants(&out, 8, &b).unwrap();
        for ((_, a1, b1), (_, a2, b2)) in orig.iter().zip(&scaled).skip(1) {
            assert_eq!(a1 * b2, a2 * b1, "approximant changed under equivalence");
        }
    }

    #[test]
    fn equivalence_requires_unit_r0() {
        let cf = golden();
        let r = Sequence::constant(RatFunc::int(2));
        assert_eq!(equivalence(&cf, &r).unwrap_err(), TransformError::NeedsUnitHead);
    }

    #[test]
    fn bauer_muir_exp_constant_phi() {
        let cf = exp_f_form();
        let r = Sequence::constant(RatFunc::var_named("z"));
        let (out, phi) = bauer_muir(&cf, &r).unwrap();
        // phi = -(x+1) z at every index
        let expect = RatFunc::var_named("x")
            .add(&RatFunc::one())
            .mul(&RatFunc::var_named("z"))
            .neg();
        for rule in &phi.rules {
            assert_eq!(rule, &expect);
        }
        for f in &phi.lead {
            assert_eq!(f, &expect);
        }
        // head becomes x+1; element 1 is (-(x+1)z, x+2); past the lead the
        // rule is a_k = (k-1)z over b_k = x+k+1-z unchanged
        let x1 = RatFunc::var_named("x").add(&RatFunc::one());
        assert_eq!(out.b0, x1);
        let (a1, b1) = out.element_at(1).unwrap();
        assert_eq!(a1, expect);
        assert_eq!(b1, x1.add(&RatFunc::one()));
        let (a_rule, b_rule) = out.symbolic_element(1, 0, 0, 1).unwrap();
        let kv = RatFunc::var_named("k");
        assert_eq!(a_rule, kv.sub(&RatFunc::one()).mul(&RatFunc::var_named("z")));
        let expected_b = RatFunc::var_named("x")
            .add(&kv)
            .add(&RatFunc::one())
            .sub(&RatFunc::var_named("z"));
        assert_eq!(b_rule, expected_b);
    }

    #[test]
    fn bauer_muir_preserves_value() {
        let cf = exp_f_form();
        let r = Sequence::constant(RatFunc::var_named("z"));
        let (out, _) = bauer_muir(&cf, &r).unwrap();
        let bind = Bindings::from_pairs(&[("x", qi(1)), ("z", q(1, 3))]);
        let v1 = value_at_depth(&cf, 40, &bind).unwrap();
        let v2 = value_at_depth(&out, 40, &bind).unwrap();
        assert!(crate::cf::within(&v1, &v2, 25), "transformed value drifted");
    }

    #[test]
    fn bauer_muir_detects_nonexistence() {
        // a = 2, b = 1, r = 1: phi = 2 - 1*(1+1) = 0 identically
        let cf = CfSpec {
            b0: RatFunc::zero(),
            lead: vec![],
            period: 1,
            rules: vec![(RatFunc::int(2), RatFunc::one())],
            params: vec![],
        };
        let r = Sequence::constant(RatFunc::one());
        match bauer_muir(&cf, &r) {
            Err(TransformError::DoesNotExist(msg)) => {
                assert_eq!(msg, "Bauer-Muir transform does not exist")
            }
            other => panic!("expected nonexistence, got {other:?}"),
        }
    }

    #[test]
    fn even_part_matches_even_approximants() {
        let cf = exp_f_form();
        let out = even_part(&cf).unwrap();
        let bind = Bindings::from_pairs(&[("x", q(1, 2)), ("z", qi(2))]);
        let orig = approximants(&cf, 12, &bind).unwrap();
        let contracted = approximants(&out, 6, &bind).unwrap();
        for k in 0..=6usize {
            let (_, ca, cb) = &contracted[k + 1];
            let (_, oa, ob) = &orig[2 * k + 1];
            assert_eq!(ca * ob, oa * cb, "C_{k} != A_{}", 2 * k);
        }
    }

    #[test]
    fn even_part_of_interleaved_alternating_cf() {
        // lead (1/2, x); even j: a = (j-1)^3/(2(2j-3)(2j-1)), b = 1;
        // odd j: a = -(j-1)^3/(2(2j-3)(2j-1)), b = x
        let k = RatFunc::var_named("k");
        let x = RatFunc::var_named("x");
        let cube = k.sub(&RatFunc::one()).pow(3);
        let den = k
            .scale(&qi(2))
            .sub(&RatFunc::int(3))
            .mul(&k.scale(&qi(2)).sub(&RatFunc::one()))
            .scale(&qi(2));
        let a_even = cube.div(&den).unwrap();
        let a_odd = a_even.neg();
        let cf = CfSpec {
            b0: RatFunc::zero(),
            lead: vec![(RatFunc::constant(q(1, 2)), x.clone())],
            period: 2,
            rules: vec![(a_even, RatFunc::one()), (a_odd, x.clone())],
            params: vec!["x".into()],
        };
        let out = even_part(&cf).unwrap();
        // first contracted elements: (1/2, x + 1/6), (2/45, x + 5/42)
        let (c1, d1) = out.element_at(1).unwrap();
        assert_eq!(c1, RatFunc::constant(q(1, 2)));
        assert_eq!(d1, x.add(&RatFunc::constant(q(1, 6))));
        let (c2, d2) = out.element_at(2).unwrap();
        assert_eq!(c2, RatFunc::constant(q(2, 45)));
        assert_eq!(d2, x.add(&RatFunc::constant(q(5, 42))));
        // and the contraction is exact on approximants
        let bind = Bindings::from_pairs(&[("x", qi(3))]);
        let orig = approximants(&cf, 16, &bind).unwrap();
        let ctr = approximants(&out, 8, &bind).unwrap();
        for kk in 0..=8usize {
            let (_, ca, cb) = &ctr[kk + 1];
            let (_, oa, ob) = &orig[2 * kk + 1];
            assert_eq!(ca * ob, oa * cb);
        }
    }

    #[test]
    fn even_part_rejects_zero_even_b() {
        // period 2 with b = 0 on the even class
        let cf = CfSpec {
            b0: RatFunc::one(),
            lead: vec![],
            period: 2,
            rules: vec![
                (RatFunc::one(), RatFunc::zero()),
                (RatFunc::one(), RatFunc::one()),
            ],
            params: vec![],
        };
        assert!(matches!(even_part(&cf), Err(TransformError::Degenerate(_))));
    }

    #[test]
    fn sequence_lead_and_rules() {
        let k = RatFunc::var_named("k");
        let s = Sequence {
            start: 0,
            lead: vec![RatFunc::int(7)],
            period: 2,
            rules: vec![k.clone(), k.neg()],
        };
        assert_eq!(s.at(0).unwrap(), RatFunc::int(7));
        assert_eq!(s.at(3).unwrap(), RatFunc::int(-3)); // class 1
        assert_eq!(s.at(4).unwrap(), RatFunc::int(4)); // class 0
        let shifted = s.symbolic(1, -1, 0, 2).unwrap(); // index k-1, k even
        assert_eq!(shifted, RatFunc::one().sub(&k)); // class 1 rule -j at j = k-1
    }
}
