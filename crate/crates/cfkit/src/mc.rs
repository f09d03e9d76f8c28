//! Correction-function engine for first-order linear difference equations
//! X_m - ratio(m) X_{m+1} = rhs(m).
//!
//! A correction is a polynomial plus a finite continued fraction
//! poly(m) + l0/(phi0(m) + l1/(phi1(m) + ...)) with monic phi_j. The engine
//! finds the initial correction by a monomial probe over a degree window,
//! then deepens it one level at a time, each time solving one unknown
//! coefficient so that one more order of the defect
//! mc(m) - ratio(m) mc(m+1) - rhs(m) cancels. Everything is exact rational
//! arithmetic; every cancelled order is re-verified on the full defect, so
//! a wrong linearity assumption can only cause a search failure, never a
//! wrong answer.

use crate::cf::Bindings;
use crate::poly::{Degree, Poly, NVARS};
use crate::ratfunc::RatFunc;
use crate::rational::{qi, Q};
use crate::term::{DifferenceEquation, RamanujanTerm, TermError, M_VAR};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McError {
    /// No rational-shaped correction improves the defect (e.g. the harmonic
    /// equation X_m - X_{m+1} = 1/(m+1), whose correction is logarithmic).
    Unsupported(String),
    ExtensionFailed(String),
    NotUnivariate(String),
    Eval(String),
    Term(TermError),
}

impl std::fmt::Display for McError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            McError::Unsupported(s) => write!(f, "unsupported equation: {s}"),
            McError::ExtensionFailed(s) => write!(f, "extension failed: {s}"),
            McError::NotUnivariate(s) => {
                write!(f, "equation must be univariate in m (bind parameters first): {s}")
            }
            McError::Eval(s) => write!(f, "{s}"),
            McError::Term(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for McError {}

impl From<TermError> for McError {
    fn from(e: TermError) -> Self {
        McError::Term(e)
    }
}

/// One continued fraction level lambda/(phi + ...); phi is monic in m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub lambda: Q,
    pub phi: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub poly_part: Poly,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecayOrder {
    Finite(i64),
    /// The correction solves the equation exactly (T identically zero).
    Infinite,
}

impl std::fmt::Display for DecayOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecayOrder::Finite(k) => write!(f, "{k}"),
            DecayOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// The defect T = mc(m) - ratio(m) mc(m+1) - rhs(m) together with its decay
/// order K0 (T = -C/m^K0 + O(m^{-K0-1})) and that leading constant C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestError {
    pub t: RatFunc,
    pub decay_order: DecayOrder,
    pub leading_constant: Q,
}

/// Search window for the monomial probe and the polynomial part cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McBounds {
    pub kappa_lo: i64,
    pub kappa_hi: i64,
    pub poly_cap: i64,
}

impl Default for McBounds {
    fn default() -> Self {
        McBounds { kappa_lo: -5, kappa_hi: 10, poly_cap: 6 }
    }
}

fn mono_m(deg: i64, c: Q) -> Poly {
    let mut e = [0u32; NVARS];
    e[M_VAR] = deg as u32;
    Poly::monomial(e, c)
}

impl Correction {
    pub fn zero() -> Self {
        Correction { poly_part: Poly::zero(), levels: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.poly_part.is_zero() && self.levels.is_empty()
    }

    /// The correction as a single rational function of m.
    pub fn as_ratfunc(&self) -> RatFunc {
        let mut tail = RatFunc::zero();
        for lev in self.levels.iter().rev() {
            let den = RatFunc::from_poly(lev.phi.clone()).add(&tail);
            tail = RatFunc::constant(lev.lambda.clone())
                .div(&den)
                .expect("level denominator vanishes identically");
        }
        RatFunc::from_poly(self.poly_part.clone()).add(&tail)
    }

    /// T = mc(m) - ratio(m) mc(m+1) - rhs(m), exactly.
    pub fn defect(&self, deq: &DifferenceEquation) -> RatFunc {
        let mc = self.as_ratfunc();
        let shifted = mc
            .subst_affine(M_VAR, &qi(1), &qi(1))
            .expect("shift m -> m+1 cannot create a zero denominator");
        mc.sub(&deq.ratio.mul(&shifted)).sub(&deq.rhs)
    }

    /// Numeric value at m = v (None at a pole).
    pub fn eval_at(&self, v: &Q) -> Option<Q> {
        self.as_ratfunc()
            .subst_value(M_VAR, v)
            .ok()
            .and_then(|rf| rf.as_constant())
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    PolyCoeff(i64),
    Lambda(usize),
    PhiCoeff(usize, i64),
}

fn set_slot(mc: &mut Correction, slot: Slot, v: Q) {
    match slot {
        Slot::PolyCoeff(d) => {
            let old = mc.poly_part.coeff_of(M_VAR, d as u32).as_constant().unwrap_or_else(Q::zero);
            mc.poly_part = mc.poly_part.sub(&mono_m(d, old)).add(&mono_m(d, v));
        }
        Slot::Lambda(j) => mc.levels[j].lambda = v,
        Slot::PhiCoeff(j, d) => {
            let old = mc.levels[j].phi.coeff_of(M_VAR, d as u32).as_constant().unwrap_or_else(Q::zero);
            mc.levels[j].phi = mc.levels[j].phi.sub(&mono_m(d, old)).add(&mono_m(d, v));
        }
    }
}

enum Probe {
    /// Defect already identically zero with the slot at 0.
    Exact,
    /// Slot value found; the defect degree dropped strictly below `from`.
    Solved { value: Q, achieved: Degree },
    Failed,
}

/// Try to fix one unknown coefficient so the current leading defect order
/// cancels. Evaluates the defect with the slot at 0 and at 1, solves the
/// affine equation for the leading coefficient, then re-verifies the drop
/// on the actual defect, so a nonlinear slot can only fail, never corrupt.
fn probe_slot(deq: &DifferenceEquation, mc: &Correction, slot: Slot) -> Probe {
    let mut at0 = mc.clone();
    set_slot(&mut at0, slot, Q::zero());
    let d0 = at0.defect(deq);
    if d0.is_zero() {
        return Probe::Exact;
    }
    let e = match d0.degree_in(M_VAR) {
        Degree::Int(e) => e,
        Degree::NegInf => unreachable!(),
    };
    let mut at1 = mc.clone();
    set_slot(&mut at1, slot, qi(1));
    let d1 = at1.defect(deq);
    if d1.degree_in(M_VAR) > Degree::Int(e) {
        return Probe::Failed; // slot disturbs orders above the target
    }
    let c0 = d0.asymptotic_coeff(M_VAR, e);
    let c1 = d1.asymptotic_coeff(M_VAR, e);
    if c0 == c1 {
        return Probe::Failed; // slot has no effect at the target order
    }
    let value = c0.clone() / (c0 - c1);
    let mut solved = mc.clone();
    set_slot(&mut solved, slot, value.clone());
    let achieved = solved.defect(deq).degree_in(M_VAR);
    if achieved < Degree::Int(e) {
        Probe::Solved { value, achieved }
    } else {
        Probe::Failed
    }
}

/// Solve a slot that must strictly improve the defect (a lambda or a
/// leading polynomial coefficient). Returns false on failure.
fn solve_hard(deq: &DifferenceEquation, mc: &mut Correction, slot: Slot) -> bool {
    match probe_slot(deq, mc, slot) {
        Probe::Exact => {
            set_slot(mc, slot, Q::zero());
            // a lambda of zero would make the level vacuous
            !matches!(slot, Slot::Lambda(_))
        }
        Probe::Solved { value, .. } => {
            set_slot(mc, slot, value);
            true
        }
        Probe::Failed => false,
    }
}

/// Solve a slot where zero is an acceptable answer (interior polynomial or
/// phi coefficients): if no strict improvement is possible, park it at 0.
fn solve_soft(deq: &DifferenceEquation, mc: &mut Correction, slot: Slot) {
    match probe_slot(deq, mc, slot) {
        Probe::Solved { value, .. } => set_slot(mc, slot, value),
        Probe::Exact | Probe::Failed => set_slot(mc, slot, Q::zero()),
    }
}

fn require_univariate(deq: &DifferenceEquation) -> Result<(), McError> {
    for (rf, what) in [(&deq.ratio, "ratio"), (&deq.rhs, "rhs")] {
        let used = rf.vars_used();
        for (i, name) in crate::poly::VAR_NAMES.iter().enumerate() {
            if i != M_VAR && used[i] {
                return Err(McError::NotUnivariate(format!("{what} uses {name}")));
            }
        }
    }
    Ok(())
}

fn defect_degree(mc: &Correction, deq: &DifferenceEquation) -> Degree {
    mc.defect(deq).degree_in(M_VAR)
}

/// Append one level with the given phi degree and solve its coefficients
/// (lambda first, then phi from the subleading coefficient downward).
/// Returns true if the defect degree ended strictly below `floor`.
fn try_add_level(
    deq: &DifferenceEquation,
    mc: &mut Correction,
    kappa: i64,
    floor: Degree,
) -> bool {
    let j = mc.levels.len();
    mc.levels.push(Level { lambda: Q::zero(), phi: mono_m(kappa, qi(1)) });
    if !solve_hard(deq, mc, Slot::Lambda(j)) {
        mc.levels.pop();
        return false;
    }
    for d in (0..kappa).rev() {
        solve_soft(deq, mc, Slot::PhiCoeff(j, d));
    }
    if defect_degree(mc, deq) < floor {
        true
    } else {
        mc.levels.pop();
        false
    }
}

/// Minimal-defect-degree monomial probe: the best kappa for a first
/// correction of shape lambda * m^{-kappa}, ties to the smaller kappa.
fn monomial_scan(deq: &DifferenceEquation, bounds: &McBounds) -> Vec<(Degree, i64)> {
    let mut found: Vec<(Degree, i64)> = Vec::new();
    for kappa in bounds.kappa_lo..=bounds.kappa_hi {
        if kappa <= 0 && -kappa > bounds.poly_cap {
            continue;
        }
        let (trial, slot) = if kappa <= 0 {
            (Correction::zero(), Slot::PolyCoeff(-kappa))
        } else {
            (
                Correction {
                    poly_part: Poly::zero(),
                    levels: vec![Level { lambda: Q::zero(), phi: mono_m(kappa, qi(1)) }],
                },
                Slot::Lambda(0),
            )
        };
        match probe_slot(deq, &trial, slot) {
            Probe::Solved { achieved, .. } => found.push((achieved, kappa)),
            Probe::Exact | Probe::Failed => {}
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    found
}

/// Build the initial correction MC_0: a monomial probe over the kappa
/// window picks the structure (pure fraction level for kappa > 0, else a
/// polynomial of degree -kappa with a trailing fraction), then the free
/// coefficients are fixed one order at a time.
pub fn initial_correction(
    deq: &DifferenceEquation,
    bounds: &McBounds,
) -> Result<Correction, McError> {
    require_univariate(deq)?;
    if deq.rhs.is_zero() {
        return Ok(Correction::zero());
    }
    let candidates = monomial_scan(deq, bounds);
    if candidates.is_empty() {
        return Err(McError::Unsupported(
            "no rational-type initial correction: no monomial lambda/m^kappa improves the \
             defect (the harmonic-style equations need logarithmic corrections)"
                .into(),
        ));
    }
    for &(_, kappa) in &candidates {
        if let Some(mc) = build_initial(deq, bounds, kappa) {
            return Ok(mc);
        }
    }
    Err(McError::Unsupported(
        "monomial probe improved the defect but no full correction could be assembled".into(),
    ))
}

fn build_initial(deq: &DifferenceEquation, bounds: &McBounds, kappa: i64) -> Option<Correction> {
    let mut mc = Correction::zero();
    if kappa > 0 {
        mc.levels.push(Level { lambda: Q::zero(), phi: mono_m(kappa, qi(1)) });
        if !solve_hard(deq, &mut mc, Slot::Lambda(0)) {
            return None;
        }
        for d in (0..kappa).rev() {
            solve_soft(deq, &mut mc, Slot::PhiCoeff(0, d));
        }
        return Some(mc);
    }
    // polynomial of degree -kappa, leading coefficient mandatory
    if !solve_hard(deq, &mut mc, Slot::PolyCoeff(-kappa)) {
        return None;
    }
    for d in (0..-kappa).rev() {
        solve_soft(deq, &mut mc, Slot::PolyCoeff(d));
    }
    if mc.defect(deq).is_zero() {
        return Some(mc);
    }
    // trailing fraction
    let floor = defect_degree(&mc, deq);
    for kp in 1..=bounds.kappa_hi.max(1) {
        if try_add_level(deq, &mut mc, kp, floor) {
            break;
        }
    }
    Some(mc)
}

/// Deepen a correction by one level, strictly improving the defect decay.
/// If the equation is already solved exactly, hands back the input.
pub fn extend_correction(
    deq: &DifferenceEquation,
    prev: &Correction,
) -> Result<Correction, McError> {
    extend_correction_bounded(deq, prev, &McBounds::default())
}

pub fn extend_correction_bounded(
    deq: &DifferenceEquation,
    prev: &Correction,
    bounds: &McBounds,
) -> Result<Correction, McError> {
    require_univariate(deq)?;
    let t_prev = prev.defect(deq);
    if t_prev.is_zero() {
        return Ok(prev.clone());
    }
    let floor = t_prev.degree_in(M_VAR);
    let mut mc = prev.clone();
    for kappa in 1..=bounds.kappa_hi.max(1) {
        if try_add_level(deq, &mut mc, kappa, floor) {
            return Ok(mc);
        }
    }
    Err(McError::ExtensionFailed(format!(
        "no level of degree 1..={} cancels the order-{:?} defect",
        bounds.kappa_hi, floor
    )))
}

/// The defect of a correction with its decay order and leading constant:
/// T + C/m^K0 = O(m^{-K0-1}).
pub fn test_error(deq: &DifferenceEquation, mc: &Correction) -> Result<TestError, McError> {
    require_univariate(deq)?;
    let t = mc.defect(deq);
    if t.is_zero() {
        return Ok(TestError { t, decay_order: DecayOrder::Infinite, leading_constant: Q::zero() });
    }
    let deg = match t.degree_in(M_VAR) {
        Degree::Int(d) => d,
        Degree::NegInf => unreachable!(),
    };
    let c = -t.asymptotic_coeff(M_VAR, deg);
    Ok(TestError { t, decay_order: DecayOrder::Finite(-deg), leading_constant: c })
}

/// E_k(n) = limit - sum_{m<n} t_m - W(n) * mc(n), exact.
pub fn correction_error(
    term: &RamanujanTerm,
    weight: &RamanujanTerm,
    mc: &Correction,
    n: i64,
    limit: &Q,
    bind: &Bindings,
) -> Result<Q, McError> {
    let partial = term.partial_sum(n, bind)?;
    let w = weight.value_at(n, bind)?;
    let v = mc
        .eval_at(&qi(n))
        .ok_or_else(|| McError::Eval(format!("correction has a pole at m = {n}")))?;
    Ok(limit - partial - w * v)
}

#[derive(Debug, Clone)]
pub struct McRun {
    pub corrections: Vec<Correction>,
    pub test_errors: Vec<TestError>,
}

/// MC_0 .. MC_kmax with their test errors; stops early if some level solves
/// the equation exactly.
pub fn run_corrections(
    deq: &DifferenceEquation,
    k_max: usize,
    bounds: &McBounds,
) -> Result<McRun, McError> {
    let mut corrections = vec![initial_correction(deq, bounds)?];
    let mut test_errors = vec![test_error(deq, corrections.last().unwrap())?];
    for _ in 0..k_max {
        if matches!(test_errors.last().unwrap().decay_order, DecayOrder::Infinite) {
            break;
        }
        let next = extend_correction_bounded(deq, corrections.last().unwrap(), bounds)?;
        test_errors.push(test_error(deq, &next)?);
        corrections.push(next);
    }
    Ok(McRun { corrections, test_errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::term::resolve_rf;

    fn exp_deq(z: Q) -> DifferenceEquation {
        let m = RatFunc::var(M_VAR);
        let sym = DifferenceEquation {
            ratio: RatFunc::var_named("z").div(&m.add(&RatFunc::one())).unwrap(),
            rhs: RatFunc::one(),
        };
        let bind = Bindings::from_pairs(&[("z", z)]);
        DifferenceEquation {
            ratio: resolve_rf(&sym.ratio, &bind).unwrap(),
            rhs: sym.rhs.clone(),
        }
    }

    #[test]
    fn exp_initial_correction_matches_closed_form() {
        // MC0 = 1 + z/(m+1-z) at z = 2
        let deq = exp_deq(qi(2));
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        assert_eq!(mc.poly_part, Poly::one());
        assert_eq!(mc.levels.len(), 1);
        assert_eq!(mc.levels[0].lambda, qi(2));
        assert_eq!(mc.levels[0].phi, mono_m(1, qi(1)).add(&Poly::int(-1))); // m - 1
        let te = test_error(&deq, &mc).unwrap();
        assert_eq!(te.decay_order, DecayOrder::Finite(3));
    }

    #[test]
    fn exp_extensions_follow_the_ladder() {
        // levels j >= 1 are jz/(m+j+1-z); decay orders 3,5,7,9
        let deq = exp_deq(qi(2));
        let run = run_corrections(&deq, 3, &McBounds::default()).unwrap();
        assert_eq!(run.corrections.len(), 4);
        let orders: Vec<_> = run.test_errors.iter().map(|t| t.decay_order.clone()).collect();
        assert_eq!(
            orders,
            vec![
                DecayOrder::Finite(3),
                DecayOrder::Finite(5),
                DecayOrder::Finite(7),
                DecayOrder::Finite(9)
            ]
        );
        let mc3 = &run.corrections[3];
        for j in 1..=3usize {
            assert_eq!(mc3.levels[j].lambda, qi(2 * j as i64), "lambda_{j}");
            // phi_j = m + j + 1 - z = m + j - 1 at z = 2
            let want = mono_m(1, qi(1)).add(&Poly::int(j as i64 - 1));
            assert_eq!(mc3.levels[j].phi, want, "phi_{j}");
        }
    }

    #[test]
    fn lerch_initial_correction() {
        // ratio z, rhs 1/(m+alpha) at z=1/2, alpha=1: MC0 = 2/(m+2)
        let m = RatFunc::var(M_VAR);
        let deq = DifferenceEquation {
            ratio: RatFunc::constant(q(1, 2)),
            rhs: m.add(&RatFunc::one()).recip().unwrap(),
        };
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        assert!(mc.poly_part.is_zero());
        assert_eq!(mc.levels.len(), 1);
        assert_eq!(mc.levels[0].lambda, qi(2));
        assert_eq!(mc.levels[0].phi, mono_m(1, qi(1)).add(&Poly::int(2)));
    }

    #[test]
    fn harmonic_equation_is_unsupported() {
        let m = RatFunc::var(M_VAR);
        let deq = DifferenceEquation {
            ratio: RatFunc::one(),
            rhs: m.add(&RatFunc::one()).recip().unwrap(),
        };
        match initial_correction(&deq, &McBounds::default()) {
            Err(McError::Unsupported(msg)) => assert!(msg.contains("no rational-type")),
            other => panic!("expected Unsupported, got {other:?}"),
        }
    }

    #[test]
    fn exact_solution_hits_the_infinite_sentinel() {
        // X_m - 0 = 1/(m(m+1)) has the exact solution 1/(m^2+m)
        let m = RatFunc::var(M_VAR);
        let deq = DifferenceEquation {
            ratio: RatFunc::zero(),
            rhs: m.mul(&m.add(&RatFunc::one())).recip().unwrap(),
        };
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        assert_eq!(mc.levels.len(), 1);
        assert_eq!(mc.levels[0].lambda, qi(1));
        assert_eq!(mc.levels[0].phi, mono_m(2, qi(1)).add(&mono_m(1, qi(1)))); // m^2 + m
        let te = test_error(&deq, &mc).unwrap();
        assert_eq!(te.decay_order, DecayOrder::Infinite);
        // extension is a fixed point
        let again = extend_correction(&deq, &mc).unwrap();
        assert_eq!(again, mc);
    }

    #[test]
    fn zero_rhs_gives_zero_correction() {
        let deq = DifferenceEquation { ratio: RatFunc::one(), rhs: RatFunc::zero() };
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        assert!(mc.is_zero());
        let te = test_error(&deq, &mc).unwrap();
        assert_eq!(te.decay_order, DecayOrder::Infinite);
    }

    #[test]
    fn catalan_heads_from_the_engine() {
        // ratio 2(m+1)/(2m+1), rhs 1/(2m+1)^2: MC0 = (1/2)/(m + 1/6)
        let m = RatFunc::var(M_VAR);
        let two_m1 = m.scale(&qi(2)).add(&RatFunc::one());
        let deq = DifferenceEquation {
            ratio: m.add(&RatFunc::one()).scale(&qi(2)).div(&two_m1).unwrap(),
            rhs: two_m1.mul(&two_m1).recip().unwrap(),
        };
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        assert!(mc.poly_part.is_zero());
        assert_eq!(mc.levels[0].lambda, q(1, 2));
        let want_phi = mono_m(1, qi(1)).add(&Poly::constant(q(1, 6)));
        assert_eq!(mc.levels[0].phi, want_phi);
    }

    #[test]
    fn landau_head_has_polynomial_part() {
        // ratio -(2m+1)^2/(4(m+1)^2), rhs 1: MC0 = 1/2 + (1/4)/(m + 1/4)
        let m = RatFunc::var(M_VAR);
        let two_m1 = m.scale(&qi(2)).add(&RatFunc::one());
        let m1 = m.add(&RatFunc::one());
        let deq = DifferenceEquation {
            ratio: two_m1.mul(&two_m1).div(&m1.mul(&m1).scale(&qi(4))).unwrap().neg(),
            rhs: RatFunc::one(),
        };
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        assert_eq!(mc.poly_part, Poly::constant(q(1, 2)));
        assert_eq!(mc.levels.len(), 1);
        assert_eq!(mc.levels[0].lambda, q(1, 4));
        assert_eq!(mc.levels[0].phi, mono_m(1, qi(1)).add(&Poly::constant(q(1, 4))));
    }

    #[test]
    fn correction_errors_shrink_with_depth() {
        // exp at z = 1 against e
        let deq = exp_deq(qi(1));
        let run = run_corrections(&deq, 3, &McBounds::default()).unwrap();
        let term = RamanujanTerm {
            r: RatFunc::one(),
            num_factorials: vec![],
            den_factorials: vec![(1, 0)],
            q: RatFunc::var_named("z").recip().unwrap(),
        };
        let weight = term.with_unit_r();
        let e = crate::oracles::exp_value(&qi(1), 40);
        let bind = Bindings::from_pairs(&[("z", qi(1))]);
        let errs: Vec<Q> = (1..=3)
            .map(|k| {
                correction_error(&term, &weight, &run.corrections[k], 5, &e, &bind)
                    .unwrap()
            })
            .collect();
        let abs = |v: &Q| if v < &Q::zero() { -v.clone() } else { v.clone() };
        assert!(abs(&errs[2]) < abs(&errs[1]));
        assert!(abs(&errs[1]) < abs(&errs[0]));
    }

    #[test]
    fn telescoping_consistency_is_exact() {
        // W(n) MC(n) - W(n+1) MC(n+1) - t_n = W(n) T(n) for each n
        let z = q(1, 3);
        let deq = exp_deq(z.clone());
        let run = run_corrections(&deq, 2, &McBounds::default()).unwrap();
        let mc = &run.corrections[2];
        let t = mc.defect(&deq);
        let term = RamanujanTerm {
            r: RatFunc::one(),
            num_factorials: vec![],
            den_factorials: vec![(1, 0)],
            q: RatFunc::var_named("z").recip().unwrap(),
        };
        let bind = Bindings::from_pairs(&[("z", z)]);
        for n in 0..6i64 {
            let wn = term.with_unit_r().value_at(n, &bind).unwrap();
            let wn1 = term.with_unit_r().value_at(n + 1, &bind).unwrap();
            let lhs = wn.clone() * mc.eval_at(&qi(n)).unwrap()
                - wn1 * mc.eval_at(&qi(n + 1)).unwrap()
                - term.value_at(n, &bind).unwrap();
            let tn = t.subst_value(M_VAR, &qi(n)).unwrap().as_constant().unwrap();
            assert_eq!(lhs, wn * tn, "telescoping at n = {n}");
        }
    }

    #[test]
    fn test_error_sign_convention() {
        // T + C/m^K0 = O(m^{-K0-1}): check against a hand-built correction
        let deq = exp_deq(qi(2));
        let mc = initial_correction(&deq, &McBounds::default()).unwrap();
        let te = test_error(&deq, &mc).unwrap();
        let DecayOrder::Finite(k0) = te.decay_order else { panic!() };
        let probe = te
            .t
            .add(&RatFunc::new(Poly::constant(te.leading_constant.clone()), mono_m(k0, qi(1))).unwrap());
        assert!(probe.degree_in(M_VAR) < Degree::Int(-k0 - 1) || probe.is_zero() || probe.degree_in(M_VAR) == Degree::Int(-k0 - 1));
        assert!(probe.degree_in(M_VAR) < Degree::Int(-k0));
    }
}
