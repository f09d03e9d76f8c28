//! Ramanujan-type series terms
//! t_m = R(m) * prod (a_i m + c_i)! / prod (b_j m + d_j)! * q^{-m}
//! and the first-order difference equations they induce.

use crate::cf::Bindings;
use crate::oracles::fact_q;
use crate::ratfunc::RatFunc;
use crate::rational::{qi, qpow, Q};
use num_traits::{Signed, Zero};

pub const M_VAR: usize = 0; // index of `m` in the variable universe

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    /// A factorial block evaluates at a negative argument.
    NegativeFactorial { arg: i64, m: i64 },
    /// R(m) or q has a pole / zero where a value is needed.
    Pole { m: i64 },
    /// Structural problem: nonpositive block multiplier or q identically zero.
    Invalid(String),
    Unbound(String),
}

impl std::fmt::Display for TermError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TermError::NegativeFactorial { arg, m } => {
                write!(f, "factorial of negative argument {arg} at m = {m}")
            }
            TermError::Pole { m } => write!(f, "pole at m = {m}"),
            TermError::Invalid(s) => write!(f, "{s}"),
            TermError::Unbound(s) => write!(f, "parameter {s} is unbound"),
        }
    }
}

impl std::error::Error for TermError {}

/// A term of a Ramanujan-type series. `r` and `q` may involve parameters;
/// `q` must not involve m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanujanTerm {
    pub r: RatFunc,
    pub num_factorials: Vec<(i64, i64)>,
    pub den_factorials: Vec<(i64, i64)>,
    pub q: RatFunc,
}

/// X_m - ratio(m) X_{m+1} = rhs(m). A zero ratio is legal (the equation
/// then determines X outright).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceEquation {
    pub ratio: RatFunc,
    pub rhs: RatFunc,
}

impl DifferenceEquation {
    /// Substitute parameter bindings, leaving a rational function of m only.
    pub fn resolve(&self, bind: &Bindings) -> Result<DifferenceEquation, TermError> {
        Ok(DifferenceEquation {
            ratio: resolve_rf(&self.ratio, bind)?,
            rhs: resolve_rf(&self.rhs, bind)?,
        })
    }
}

pub(crate) fn resolve_rf(rf: &RatFunc, bind: &Bindings) -> Result<RatFunc, TermError> {
    let used = rf.vars_used();
    let mut out = rf.clone();
    for (i, &is_used) in used.iter().enumerate() {
        if i == M_VAR || !is_used {
            continue;
        }
        let name = crate::poly::VAR_NAMES[i];
        let v = bind
            .get(i)
            .ok_or_else(|| TermError::Unbound(name.to_string()))?;
        out = out
            .subst_value(i, &v)
            .map_err(|_| TermError::Invalid(format!("binding {name} hits a pole")))?;
    }
    Ok(out)
}

impl RamanujanTerm {
    pub fn validate(&self) -> Result<(), TermError> {
        for &(a, _) in self.num_factorials.iter().chain(&self.den_factorials) {
            if a <= 0 {
                return Err(TermError::Invalid(format!(
                    "factorial block multiplier {a} must be positive"
                )));
            }
        }
        if self.q.is_zero() {
            return Err(TermError::Invalid("q must be nonzero".into()));
        }
        if self.q.vars_used()[M_VAR] {
            return Err(TermError::Invalid("q must not depend on m".into()));
        }
        Ok(())
    }

    /// The bare prefactor W: same factorial blocks and q, R replaced by 1.
    pub fn with_unit_r(&self) -> RamanujanTerm {
        RamanujanTerm { r: RatFunc::one(), ..self.clone() }
    }

    /// Exact value of t_m at a concrete index under parameter bindings.
    pub fn value_at(&self, m: i64, bind: &Bindings) -> Result<Q, TermError> {
        self.validate()?;
        if m < 0 {
            return Err(TermError::Invalid(format!("negative index m = {m}")));
        }
        let r = resolve_rf(&self.r, bind)?;
        let r_m = r
            .subst_value(M_VAR, &qi(m))
            .map_err(|_| TermError::Pole { m })?
            .as_constant()
            .ok_or(TermError::Pole { m })?;
        let q = resolve_rf(&self.q, bind)?
            .as_constant()
            .ok_or_else(|| TermError::Invalid("q does not reduce to a constant".into()))?;
        if q.is_zero() {
            return Err(TermError::Invalid("q must be nonzero".into()));
        }
        let mut v = r_m;
        for &(a, c) in &self.num_factorials {
            let arg = a * m + c;
            if arg < 0 {
                return Err(TermError::NegativeFactorial { arg, m });
            }
            v *= fact_q(arg as u64);
        }
        for &(b, d) in &self.den_factorials {
            let arg = b * m + d;
            if arg < 0 {
                return Err(TermError::NegativeFactorial { arg, m });
            }
            v /= fact_q(arg as u64);
        }
        Ok(v * qpow(&q, -m))
    }

    /// Partial sum of t_0 .. t_{n-1}, exactly.
    pub fn partial_sum(&self, n: i64, bind: &Bindings) -> Result<Q, TermError> {
        let mut s = Q::zero();
        for m in 0..n {
            s += self.value_at(m, bind)?;
        }
        Ok(s)
    }

    /// The symbolic ratio W(m+1)/W(m) of the factorial/power prefactor,
    /// packaged with rhs = R as the difference equation the series' tails
    /// satisfy.
    pub fn term_ratio(&self) -> Result<DifferenceEquation, TermError> {
        self.validate()?;
        let m = RatFunc::var(M_VAR);
        let mut ratio = self
            .q
            .recip()
            .map_err(|_| TermError::Invalid("q must be nonzero".into()))?;
        for &(a, c) in &self.num_factorials {
            // (a(m+1)+c)! / (am+c)! = prod_{s=1..a} (am+c+s)
            for s in 1..=a {
                ratio = ratio.mul(&m.scale(&qi(a)).add(&RatFunc::int(c + s)));
            }
        }
        for &(b, d) in &self.den_factorials {
            for s in 1..=b {
                ratio = ratio
                    .div(&m.scale(&qi(b)).add(&RatFunc::int(d + s)))
                    .map_err(|_| TermError::Invalid("degenerate factorial block".into()))?;
            }
        }
        Ok(DifferenceEquation { ratio, rhs: self.r.clone() })
    }
}

/// Signed magnitude helper: |t_m| as Q.
pub fn abs_q(v: &Q) -> Q {
    if v.is_negative() {
        -v.clone()
    } else {
        v.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn exp_term() -> RamanujanTerm {
        // z^m / m!  ==  R=1, den (1,0), q = 1/z
        RamanujanTerm {
            r: RatFunc::one(),
            num_factorials: vec![],
            den_factorials: vec![(1, 0)],
            q: RatFunc::var_named("z").recip().unwrap(),
        }
    }

    fn catalan_unit_term() -> RamanujanTerm {
        // 4^m (m!)^2 / ((2m)! (2m+1)^2)
        let two_m_plus_1 = RatFunc::var(M_VAR).scale(&qi(2)).add(&RatFunc::one());
        RamanujanTerm {
            r: two_m_plus_1.mul(&two_m_plus_1).recip().unwrap(),
            num_factorials: vec![(1, 0), (1, 0)],
            den_factorials: vec![(2, 0)],
            q: RatFunc::constant(q(1, 4)),
        }
    }

    #[test]
    fn exp_ratio_and_values() {
        let t = exp_term();
        let deq = t.term_ratio().unwrap();
        let m = RatFunc::var(M_VAR);
        let z = RatFunc::var_named("z");
        assert_eq!(deq.ratio, z.div(&m.add(&RatFunc::one())).unwrap());
        assert_eq!(deq.rhs, RatFunc::one());
        let bind = Bindings::from_pairs(&[("z", q(1, 2))]);
        assert_eq!(t.value_at(3, &bind).unwrap(), q(1, 48)); // (1/2)^3/6
        assert_eq!(t.partial_sum(3, &bind).unwrap(), qi(1) + q(1, 2) + q(1, 8));
    }

    #[test]
    fn catalan_ratio_matches_closed_form() {
        let t = catalan_unit_term();
        let deq = t.term_ratio().unwrap();
        let m = RatFunc::var(M_VAR);
        let want = m
            .add(&RatFunc::one())
            .scale(&qi(2))
            .div(&m.scale(&qi(2)).add(&RatFunc::one()))
            .unwrap();
        assert_eq!(deq.ratio, want);
        // t_2 = 16*4/(24*25) = 8/75
        assert_eq!(t.value_at(2, &Bindings::new()).unwrap(), q(8, 75));
    }

    #[test]
    fn landau_ratio_is_negative() {
        // (2m)!^2 / ((-16)^m (m!)^4)
        let t = RamanujanTerm {
            r: RatFunc::one(),
            num_factorials: vec![(2, 0), (2, 0)],
            den_factorials: vec![(1, 0), (1, 0), (1, 0), (1, 0)],
            q: RatFunc::int(-16),
        };
        let deq = t.term_ratio().unwrap();
        let m = RatFunc::var(M_VAR);
        let two_m_plus_1 = m.scale(&qi(2)).add(&RatFunc::one());
        let want = two_m_plus_1
            .mul(&two_m_plus_1)
            .div(&m.add(&RatFunc::one()).mul(&m.add(&RatFunc::one())).scale(&qi(4)))
            .unwrap()
            .neg();
        assert_eq!(deq.ratio, want);
        assert_eq!(t.value_at(1, &Bindings::new()).unwrap(), q(-4, 16)); // 2!^2/(-16) = -1/4
    }

    #[test]
    fn negative_factorial_argument_rejected() {
        let t = RamanujanTerm {
            r: RatFunc::one(),
            num_factorials: vec![(1, -3)],
            den_factorials: vec![],
            q: RatFunc::one(),
        };
        match t.value_at(1, &Bindings::new()) {
            Err(TermError::NegativeFactorial { arg: -2, m: 1 }) => {}
            other => panic!("expected negative-factorial error, got {other:?}"),
        }
        assert_eq!(t.value_at(3, &Bindings::new()).unwrap(), qi(1)); // 0! = 1
    }

    #[test]
    fn unit_r_strips_rational_part() {
        let t = catalan_unit_term();
        let w = t.with_unit_r();
        assert_eq!(w.r, RatFunc::one());
        // W(2) = 4^2 (2!)^2/(4)! = 16*4/24 = 8/3
        assert_eq!(w.value_at(2, &Bindings::new()).unwrap(), q(8, 3));
    }

    #[test]
    fn mathieu_style_pure_rational_term() {
        // 2m/(m^2+r^2)^2 with r bound to 1; t_0 = 0
        let m = RatFunc::var(M_VAR);
        let rr = RatFunc::var_named("r");
        let den = m.mul(&m).add(&rr.mul(&rr));
        let t = RamanujanTerm {
            r: m.scale(&qi(2)).div(&den.mul(&den)).unwrap(),
            num_factorials: vec![],
            den_factorials: vec![],
            q: RatFunc::one(),
        };
        let bind = Bindings::from_pairs(&[("r", qi(1))]);
        assert_eq!(t.value_at(0, &bind).unwrap(), qi(0));
        assert_eq!(t.value_at(1, &bind).unwrap(), q(2, 4));
        assert_eq!(t.value_at(2, &bind).unwrap(), q(4, 25));
    }

    #[test]
    fn zero_q_rejected() {
        let t = RamanujanTerm {
            r: RatFunc::one(),
            num_factorials: vec![],
            den_factorials: vec![],
            q: RatFunc::zero(),
        };
        assert!(matches!(t.validate(), Err(TermError::Invalid(_))));
    }
}
