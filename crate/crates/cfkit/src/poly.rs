//! Sparse multivariate polynomials over the rationals.
//!
//! The variable universe is fixed: `m`, `k`, `x`, `z`, `w`, `alpha`, `r`.
//! Exponent vectors are `[u32; NVARS]` keyed in a BTreeMap, so polynomial
//! identity is structural equality of the map.

use crate::rational::Q;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 7;
pub const VAR_NAMES: [&str; NVARS] = ["m", "k", "x", "z", "w", "alpha", "r"];

pub type Exps = [u32; NVARS];

pub fn var_index(name: &str) -> Option<usize> {
    VAR_NAMES.iter().position(|&v| v == name)
}

/// Degree of a polynomial in one variable; the zero polynomial has degree -inf.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Degree {
    NegInf,
    Int(i64),
}

impl Degree {
    pub fn as_int(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Int(d) => Some(d),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Degree::*;
        match (self, other) {
            (NegInf, NegInf) => std::cmp::Ordering::Equal,
            (NegInf, Int(_)) => std::cmp::Ordering::Less,
            (Int(_), NegInf) => std::cmp::Ordering::Greater,
            (Int(a), Int(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add<i64> for Degree {
    type Output = Degree;
    fn add(self, rhs: i64) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Int(d) => Degree::Int(d + rhs),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exps, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert([0; NVARS], c);
        }
        Poly { terms: t }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(idx: usize) -> Self {
        assert!(idx < NVARS);
        let mut e = [0; NVARS];
        e[idx] = 1;
        let mut t = BTreeMap::new();
        t.insert(e, Q::one());
        Poly { terms: t }
    }

    pub fn var_named(name: &str) -> Self {
        Poly::var(var_index(name).unwrap_or_else(|| panic!("unknown variable {name}")))
    }

    pub fn monomial(exps: Exps, c: Q) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(exps, c);
        }
        Poly { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&[0; NVARS]))
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.terms.is_empty() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return self.terms.get(&[0; NVARS]).cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Which variables actually occur.
    pub fn vars_used(&self) -> [bool; NVARS] {
        let mut used = [false; NVARS];
        for e in self.terms.keys() {
            for i in 0..NVARS {
                used[i] |= e[i] > 0;
            }
        }
        used
    }

    fn insert_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.terms.insert(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for i in 0..NVARS {
                    e[i] += eb[i];
                }
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (e, v) in &self.terms {
            out.terms.insert(*e, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn degree(&self, var: usize) -> Degree {
        self.terms
            .keys()
            .map(|e| e[var] as i64)
            .max()
            .map_or(Degree::NegInf, Degree::Int)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .map_or(Degree::NegInf, Degree::Int)
    }

    /// Coefficient of `var^power`, a polynomial in the remaining variables.
    pub fn coeff_of(&self, var: usize, power: u32) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut e2 = *e;
                e2[var] = 0;
                out.insert_term(e2, c.clone());
            }
        }
        out
    }

    /// Coefficient of the highest power of `var` (zero polynomial for zero input).
    pub fn leading_coeff(&self, var: usize) -> Poly {
        match self.degree(var) {
            Degree::NegInf => Poly::zero(),
            Degree::Int(d) => self.coeff_of(var, d as u32),
        }
    }

    /// Substitute an exact rational for one variable.
    pub fn subst_value(&self, var: usize, val: &Q) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let p = e2[var];
            e2[var] = 0;
            out.insert_term(e2, c * crate::rational::qpow(val, p as i64));
        }
        out
    }

    /// Substitute `var := a*var + b` via binomial expansion.
    pub fn subst_affine(&self, var: usize, a: &Q, b: &Q) -> Poly {
        let lin = Poly::var(var).scale(a).add(&Poly::constant(b.clone()));
        self.subst_poly(var, &lin)
    }

    /// Substitute an arbitrary polynomial for one variable.
    pub fn subst_poly(&self, var: usize, rep: &Poly) -> Poly {
        // cache powers of rep up to the degree in var
        let maxd = match self.degree(var) {
            Degree::NegInf => return Poly::zero(),
            Degree::Int(d) => d as u32,
        };
        let mut pows: Vec<Poly> = Vec::with_capacity(maxd as usize + 1);
        pows.push(Poly::one());
        for i in 1..=maxd {
            pows.push(pows[(i - 1) as usize].mul(rep));
        }
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let p = e[var];
            let mut e2 = *e;
            e2[var] = 0;
            let base = Poly::monomial(e2, c.clone());
            out = out.add(&base.mul(&pows[p as usize]));
        }
        out
    }

    /// Evaluate with every used variable bound; unbound used variable panics.
    pub fn eval(&self, binding: &dyn Fn(usize) -> Option<Q>) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if e[i] > 0 {
                    let v = binding(i).unwrap_or_else(|| {
                        panic!("variable {} unbound in evaluation", VAR_NAMES[i])
                    });
                    t *= crate::rational::qpow(&v, e[i] as i64);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = *e;
                e2[var] -= 1;
                out.insert_term(e2, c * Q::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Largest absolute value among coefficients (zero for the zero polynomial).
    pub fn max_coeff_abs(&self) -> Q {
        let mut best = Q::zero();
        for c in self.terms.values() {
            let a = c.abs();
            if a > best {
                best = a;
            }
        }
        best
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, e: &Exps, c: &Q, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let is_const = e.iter().all(|&p| p == 0);
    let mut wrote = false;
    if !mag.is_one() || is_const {
        if mag.is_integer() {
            write!(f, "{}", mag.numer())?;
        } else {
            write!(f, "{}/{}", mag.numer(), mag.denom())?;
        }
        wrote = true;
    }
    for i in 0..NVARS {
        if e[i] > 0 {
            if wrote {
                write!(f, "*")?;
            }
            write!(f, "{}", VAR_NAMES[i])?;
            if e[i] > 1 {
                write!(f, "^{}", e[i])?;
            }
            wrote = true;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // display highest total degree first for readability
        let mut items: Vec<(&Exps, &Q)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let ta: i64 = a.0.iter().map(|&x| x as i64).sum();
            let tb: i64 = b.0.iter().map(|&x| x as i64).sum();
            tb.cmp(&ta).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in items.iter().enumerate() {
            fmt_monomial(f, e, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
