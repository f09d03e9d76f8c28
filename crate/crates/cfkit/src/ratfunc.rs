//! Rational functions: quotients of `Poly` with a canonical representative.
//!
//! Canonical form: the denominator is never zero; a zero numerator forces
//! denominator 1. When numerator and denominator involve at most one
//! variable, the pair is fully reduced (unit gcd) and the denominator is
//! monic. Multivariate pairs are normalized only up to scaling (the
//! denominator's graded-lex leading coefficient is 1); mathematical equality
//! is still decided exactly, by cross-multiplication, so `==` is reliable in
//! every case.

use crate::poly::{Degree, Poly, NVARS};
use crate::rational::Q;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RfError {
    DivisionByZero,
    IdenticallySingular,
}

impl fmt::Display for RfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RfError::DivisionByZero => write!(f, "division by zero"),
            RfError::IdenticallySingular => write!(f, "substitution makes the denominator vanish identically"),
        }
    }
}

impl std::error::Error for RfError {}

// dense univariate helpers; coefficient index = power

fn to_dense(p: &Poly, var: usize) -> Vec<Q> {
    let d = match p.degree(var) {
        Degree::NegInf => return vec![],
        Degree::Int(d) => d as usize,
    };
    let mut out = vec![Q::zero(); d + 1];
    for (e, c) in p.terms() {
        out[e[var] as usize] += c.clone();
    }
    out
}

fn from_dense(c: &[Q], var: usize) -> Poly {
    let mut out = Poly::zero();
    for (i, v) in c.iter().enumerate() {
        if !v.is_zero() {
            let mut e = [0u32; NVARS];
            e[var] = i as u32;
            out = out.add(&Poly::monomial(e, v.clone()));
        }
    }
    out
}

fn dense_trim(v: &mut Vec<Q>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn dense_rem(mut a: Vec<Q>, b: &[Q]) -> Vec<Q> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db {
        let da = a.len() - 1;
        let f = &a[da] / lb;
        for i in 0..=db {
            let t = &b[i] * &f;
            a[da - db + i] -= t;
        }
        dense_trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

fn dense_div_exact(mut a: Vec<Q>, b: &[Q]) -> Vec<Q> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![Q::zero(); a.len().saturating_sub(db)];
    while a.len() > db {
        let da = a.len() - 1;
        let f = &a[da] / lb;
        q[da - db] = f.clone();
        for i in 0..=db {
            let t = &b[i] * &f;
            a[da - db + i] -= t;
        }
        dense_trim(&mut a);
    }
    debug_assert!(a.is_empty(), "inexact polynomial division");
    q
}

fn dense_gcd(mut a: Vec<Q>, mut b: Vec<Q>) -> Vec<Q> {
    dense_trim(&mut a);
    dense_trim(&mut b);
    while !b.is_empty() {
        let r = dense_rem(a, &b);
        a = b;
        b = r;
    }
    // monic
    if let Some(l) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &l;
        }
    }
    a
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RfError> {
        if den.is_zero() {
            return Err(RfError::DivisionByZero);
        }
        let mut rf = RatFunc { num, den };
        rf.normalize();
        Ok(rf)
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        RatFunc::from_poly(Poly::int(n))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn var(idx: usize) -> Self {
        RatFunc::from_poly(Poly::var(idx))
    }

    pub fn var_named(name: &str) -> Self {
        RatFunc::from_poly(Poly::var_named(name))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_constant() && self.num.is_constant() {
            let d = self.den.as_constant().unwrap();
            return Some(self.num.as_constant().unwrap() / d);
        }
        None
    }

    pub fn vars_used(&self) -> [bool; NVARS] {
        let a = self.num.vars_used();
        let b = self.den.vars_used();
        let mut u = [false; NVARS];
        for i in 0..NVARS {
            u[i] = a[i] || b[i];
        }
        u
    }

    /// The single variable used, if at most one occurs.
    fn single_var(&self) -> Option<Option<usize>> {
        let u = self.vars_used();
        let mut found = None;
        for (i, &used) in u.iter().enumerate() {
            if used {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        Some(found)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        match self.single_var() {
            Some(None) => {
                // constant / constant
                let v = self.num.as_constant().unwrap() / self.den.as_constant().unwrap();
                self.num = Poly::constant(v);
                self.den = Poly::one();
            }
            Some(Some(var)) => {
                let mut a = to_dense(&self.num, var);
                let mut b = to_dense(&self.den, var);
                let g = dense_gcd(a.clone(), b.clone());
                if g.len() > 1 {
                    a = dense_div_exact(a, &g);
                    b = dense_div_exact(b, &g);
                }
                let lead = b.last().unwrap().clone();
                for c in &mut a {
                    *c = &*c / &lead;
                }
                for c in &mut b {
                    *c = &*c / &lead;
                }
                self.num = from_dense(&a, var);
                self.den = from_dense(&b, var);
            }
            None => {
                // multivariate: scale so the graded-lex leading coefficient of den is 1
                let lead = self
                    .den
                    .terms()
                    .max_by(|x, y| {
                        let tx: i64 = x.0.iter().map(|&v| v as i64).sum();
                        let ty: i64 = y.0.iter().map(|&v| v as i64).sum();
                        tx.cmp(&ty).then_with(|| x.0.cmp(y.0))
                    })
                    .map(|(_, c)| c.clone())
                    .unwrap();
                if !lead.is_one() {
                    let inv = lead.recip();
                    self.num = self.num.scale(&inv);
                    self.den = self.den.scale(&inv);
                }
            }
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).unwrap()
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    pub fn recip(&self) -> Result<RatFunc, RfError> {
        if self.num.is_zero() {
            return Err(RfError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, RfError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, n: u32) -> RatFunc {
        RatFunc::new(self.num.pow(n), self.den.pow(n)).unwrap()
    }

    /// Exact evaluation; `None` at a pole of the representative.
    pub fn eval(&self, binding: &dyn Fn(usize) -> Option<Q>) -> Option<Q> {
        let d = self.den.eval(binding);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(binding) / d)
    }

    /// Substitute a rational for one variable, keeping the rest symbolic.
    pub fn subst_value(&self, var: usize, val: &Q) -> Result<RatFunc, RfError> {
        let den = self.den.subst_value(var, val);
        if den.is_zero() {
            return Err(RfError::IdenticallySingular);
        }
        Ok(RatFunc::new(self.num.subst_value(var, val), den).unwrap())
    }

    /// Substitute `var := a*var + b`.
    pub fn subst_affine(&self, var: usize, a: &Q, b: &Q) -> Result<RatFunc, RfError> {
        if a.is_zero() {
            return self.subst_value(var, b);
        }
        let den = self.den.subst_affine(var, a, b);
        debug_assert!(!den.is_zero());
        Ok(RatFunc::new(self.num.subst_affine(var, a, b), den).unwrap())
    }

    pub fn derivative(&self, var: usize) -> RatFunc {
        let n = self
            .num
            .derivative(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(var)));
        RatFunc::new(n, self.den.pow(2)).unwrap()
    }

    /// Degree in one variable: deg(num) - deg(den); NegInf for zero.
    pub fn degree_in(&self, var: usize) -> Degree {
        match (self.num.degree(var), self.den.degree(var)) {
            (Degree::NegInf, _) => Degree::NegInf,
            (Degree::Int(n), Degree::Int(d)) => Degree::Int(n - d),
            (Degree::Int(_), Degree::NegInf) => unreachable!("zero denominator"),
        }
    }

    /// Ratio of leading coefficients in `var`, a rational function of the rest.
    pub fn leading_coeff_in(&self, var: usize) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.leading_coeff(var), self.den.leading_coeff(var)).unwrap()
    }

    /// Asymptotic expansion of a univariate function at infinity, from the
    /// leading order down to order `lo` inclusive: returns (order, coefficient)
    /// pairs with nonzero coefficients, highest order first.
    pub fn asymptotic_prefix(&self, var: usize, lo: i64) -> Vec<(i64, Q)> {
        let mut f = self.clone();
        let mut out = Vec::new();
        loop {
            let d = match f.degree_in(var) {
                Degree::NegInf => break,
                Degree::Int(d) => d,
            };
            if d < lo {
                break;
            }
            let c = f
                .leading_coeff_in(var)
                .as_constant()
                .expect("asymptotic_prefix needs a univariate function");
            let term = if d >= 0 {
                RatFunc::from_poly(Poly::var(var).pow(d as u32)).scale(&c)
            } else {
                RatFunc::new(Poly::constant(c.clone()), Poly::var(var).pow((-d) as u32)).unwrap()
            };
            f = f.sub(&term);
            debug_assert!(f.degree_in(var) < Degree::Int(d));
            out.push((d, c));
        }
        out
    }

    /// Coefficient of `var^e` in the expansion at infinity (univariate).
    pub fn asymptotic_coeff(&self, var: usize, e: i64) -> Q {
        for (d, c) in self.asymptotic_prefix(var, e) {
            if d == e {
                return c;
            }
        }
        Q::zero()
    }
}

impl PartialEq for RatFunc {
    /// Mathematical equality of fractions, by cross-multiplication.
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.as_constant().unwrap().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn m() -> RatFunc {
        RatFunc::var_named("m")
    }

    fn mp(k: i64) -> RatFunc {
        m().add(&RatFunc::int(k))
    }

    #[test]
    fn reduces_univariate() {
        // (m^2 - 1)/(m - 1) -> m + 1
        let f = RatFunc::new(
            m().num().pow(2).sub(&Poly::one()),
            m().num().sub(&Poly::one()),
        )
        .unwrap();
        assert_eq!(f, mp(1));
        assert_eq!(f.num(), mp(1).num());
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn monic_denominator() {
        // 4(m+1)^2 / ((2m+1)(2m+2)) -> (2m+2)/(2m+1) with monic den m + 1/2
        let num = mp(1).num().pow(2).scale(&qi(4));
        let den = m()
            .num()
            .scale(&qi(2))
            .add(&Poly::one())
            .mul(&m().num().scale(&qi(2)).add(&Poly::int(2)));
        let f = RatFunc::new(num, den).unwrap();
        let expect = mp(1).scale(&qi(2)).div(&m().scale(&qi(2)).add(&RatFunc::one())).unwrap();
        assert_eq!(f, expect);
        assert_eq!(f.den().leading_coeff(0).as_constant().unwrap(), qi(1));
        assert_eq!(f.eval(&|i| (i == 0).then(|| qi(1))).unwrap(), q(4, 3));
    }

    #[test]
    fn pole_detection() {
        let f = RatFunc::new(Poly::one(), m().num().sub(&Poly::int(3))).unwrap();
        assert_eq!(f.eval(&|i| (i == 0).then(|| qi(3))), None);
        assert!(f.eval(&|i| (i == 0).then(|| qi(4))).is_some());
    }

    #[test]
    fn cross_multiplied_equality_multivariate() {
        let k = RatFunc::var_named("k");
        let x = RatFunc::var_named("x");
        // (k+x)^2/(k+x) == (k+x), without multivariate gcd
        let a = k.add(&x).pow(2).div(&k.add(&x)).unwrap();
        let b = k.add(&x);
        assert_eq!(a, b);
    }

    #[test]
    fn degree_and_asymptotics() {
        // f = (m^2 + 1)/m : orders 1, -1
        let f = RatFunc::new(m().num().pow(2).add(&Poly::one()), m().num().clone()).unwrap();
        assert_eq!(f.degree_in(0), Degree::Int(1));
        let pre = f.asymptotic_prefix(0, -5);
        assert_eq!(pre, vec![(1, qi(1)), (-1, qi(1))]);
        assert_eq!(f.asymptotic_coeff(0, 0), qi(0));
        assert_eq!(f.asymptotic_coeff(0, -1), qi(1));
    }

    #[test]
    fn asymptotics_of_proper_fraction() {
        // z^2/((m+1)(m+2)) -> z^2/m^2 - 3 z^2/m^3 + ...  at fixed z this is
        // checked with z = 1
        let f = RatFunc::one().div(&mp(1).mul(&mp(2))).unwrap();
        assert_eq!(f.degree_in(0), Degree::Int(-2));
        assert_eq!(f.asymptotic_coeff(0, -2), qi(1));
        assert_eq!(f.asymptotic_coeff(0, -3), qi(-3));
    }

    #[test]
    fn shift_then_reduce() {
        // f(m) = 1/(m(m+1)); f(m) - f(m+1) telescopes to 2/(m(m+1)(m+2))
        let f = RatFunc::one().div(&m().mul(&mp(1))).unwrap();
        let g = f.subst_affine(0, &qi(1), &qi(1)).unwrap();
        let d = f.sub(&g);
        let expect = RatFunc::int(2).div(&m().mul(&mp(1)).mul(&mp(2))).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
        assert!(RatFunc::zero().recip().is_err());
        // substituting m := 3 into 1/(m-3) is identically singular
        let f = RatFunc::new(Poly::one(), m().num().sub(&Poly::int(3))).unwrap();
        assert_eq!(f.subst_value(0, &qi(3)), Err(RfError::IdenticallySingular));
    }
}
