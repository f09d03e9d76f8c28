//! Rule guessing over a run of corrections.
//!
//! Given MC_0..MC_K with frozen earlier levels, fit lambda_j and every
//! coefficient of Phi_j as rational functions of the level index j, by exact
//! interpolation on all but the deepest level and verification on all of
//! them. The result is a conjecture, never a proof; `None` just means no
//! small closed form showed up.

use num_bigint::BigInt;
use num_traits::One;

use crate::cf::{CfSpec, K_VAR};
use crate::linalg::solve_linear;
use crate::mc::{Correction, Level};
use crate::poly::{var_index, Degree, Poly};
use crate::ratfunc::RatFunc;
use crate::rational::Q;
use crate::term::M_VAR;

/// Cap on numerator and denominator degree of a fitted rule.
pub const FIT_DEGREE_CAP: usize = 6;

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A per-level rule `lambda(j) / (m^d + sum_i c_i(j) m^i)` for levels j >= 1,
/// with level 0 and the polynomial part carried verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRule {
    pub poly_part: Poly,
    pub lambda0: Q,
    pub phi0: Poly,
    /// lambda as a function of the level index (variable `k`), valid j >= 1.
    pub lambda: RatFunc,
    /// Common degree of the monic Phi_j.
    pub phi_deg: usize,
    /// Coefficient of m^i in Phi_j as a function of `k`, i = 0..phi_deg.
    pub phi_coeffs: Vec<RatFunc>,
}

impl PatternRule {
    /// Reconstruct level j from the rule; `None` past a pole.
    pub fn level_at(&self, j: usize) -> Option<Level> {
        if j == 0 {
            return Some(Level { lambda: self.lambda0.clone(), phi: self.phi0.clone() });
        }
        let at = |rf: &RatFunc| -> Option<Q> {
            rf.eval(&|v| if v == K_VAR { Some(qi(j as i64)) } else { None })
        };
        let lambda = at(&self.lambda)?;
        let mut phi = Poly::monomial(m_exps(self.phi_deg as u32), Q::one());
        for (d, c) in self.phi_coeffs.iter().enumerate() {
            phi = phi.add(&Poly::monomial(m_exps(d as u32), at(c)?));
        }
        Some(Level { lambda, phi })
    }

    /// The conjectured limit as a continued fraction in the tail variable x:
    /// b0 is the polynomial part, element 1 is level 0, element k >= 2 is the
    /// rule at j = k - 1.
    pub fn to_cf_spec(&self) -> CfSpec {
        let xv = var_index("x").expect("variable universe has x");
        let x = Poly::var(xv);
        let to_x = |p: &Poly| p.subst_poly(M_VAR, &x);
        let shift = |rf: &RatFunc| rf.subst_affine(K_VAR, &qi(1), &qi(-1)).expect("affine shift");

        let mut phi_rule = RatFunc::from_poly(x.pow(self.phi_deg as u32));
        for (d, c) in self.phi_coeffs.iter().enumerate() {
            phi_rule = phi_rule.add(&c.mul(&RatFunc::from_poly(x.pow(d as u32))));
        }
        CfSpec {
            b0: RatFunc::from_poly(to_x(&self.poly_part)),
            lead: vec![(
                RatFunc::constant(self.lambda0.clone()),
                RatFunc::from_poly(to_x(&self.phi0)),
            )],
            period: 1,
            rules: vec![(shift(&self.lambda), shift(&phi_rule))],
            params: vec!["x".to_string()],
        }
    }
}

fn m_exps(d: u32) -> [u32; crate::poly::NVARS] {
    let mut e = [0; crate::poly::NVARS];
    e[M_VAR] = d;
    e
}

/// Fit `points` (index, value) by a rational function of `k` with numerator
/// and denominator degree <= FIT_DEGREE_CAP. The last point is held out of
/// the solve; a candidate survives only if it matches every point exactly.
/// Candidates are tried in order of total degree, so the simplest wins.
fn fit_rf(points: &[(Q, Q)]) -> Option<RatFunc> {
    let fit = &points[..points.len() - 1];
    for total in 0..=(2 * FIT_DEGREE_CAP) {
        for dn in 0..=total.min(FIT_DEGREE_CAP) {
            let dd = total - dn;
            if dd > FIT_DEGREE_CAP {
                continue;
            }
            let unknowns = dn + 1 + dd;
            if unknowns > fit.len() {
                continue;
            }
            let mut rows = Vec::with_capacity(fit.len());
            let mut rhs = Vec::with_capacity(fit.len());
            for (x, v) in fit {
                let mut row = Vec::with_capacity(unknowns);
                let mut xp = Q::one();
                for _ in 0..=dn {
                    row.push(xp.clone());
                    xp *= x;
                }
                let mut xp = Q::one();
                for _ in 0..dd {
                    row.push(-(v * &xp));
                    xp *= x;
                }
                rows.push(row);
                rhs.push(v * &xp);
            }
            let Ok(c) = solve_linear(&rows, &rhs) else { continue };
            let mut num = Poly::zero();
            for (i, ci) in c[..=dn].iter().enumerate() {
                num = num.add(&Poly::monomial(k_exps(i as u32), ci.clone()));
            }
            let mut den = Poly::monomial(k_exps(dd as u32), Q::one());
            for (i, ci) in c[dn + 1..].iter().enumerate() {
                den = den.add(&Poly::monomial(k_exps(i as u32), ci.clone()));
            }
            let Ok(rf) = RatFunc::new(num, den) else { continue };
            let ok = points.iter().all(|(x, v)| {
                rf.eval(&|var| if var == K_VAR { Some(x.clone()) } else { None })
                    .map(|got| got == *v)
                    .unwrap_or(false)
            });
            if ok {
                return Some(rf);
            }
        }
    }
    None
}

fn k_exps(d: u32) -> [u32; crate::poly::NVARS] {
    let mut e = [0; crate::poly::NVARS];
    e[K_VAR] = d;
    e
}

/// Look for a closed-form per-level rule across a run of corrections.
///
/// Needs at least four corrections whose level lists agree where they
/// overlap (each a strict prefix of the next) and whose polynomial parts
/// coincide, with at least three levels beyond level 0 to fit against.
/// Returns `None` when no rule within the degree cap reproduces every level.
pub fn guess_pattern(corrections: &[Correction]) -> Option<PatternRule> {
    if corrections.len() < 4 {
        return None;
    }
    let last = corrections.last().unwrap();
    for w in corrections.windows(2) {
        if w[0].poly_part != w[1].poly_part {
            return None;
        }
        if w[0].levels.len() >= w[1].levels.len() {
            return None;
        }
        if w[1].levels[..w[0].levels.len()] != w[0].levels[..] {
            return None;
        }
    }
    if last.levels.len() < 4 {
        return None;
    }

    let kappa = match last.levels[1].phi.degree(M_VAR) {
        Degree::Int(d) if d >= 1 => d as usize,
        _ => return None,
    };
    let mut lam_pts = Vec::new();
    let mut coeff_pts: Vec<Vec<(Q, Q)>> = vec![Vec::new(); kappa];
    for (j, lev) in last.levels.iter().enumerate().skip(1) {
        let phi = &lev.phi;
        if phi.degree(M_VAR) != Degree::Int(kappa as i64) {
            return None;
        }
        if phi.coeff_of(M_VAR, kappa as u32).as_constant() != Some(Q::one()) {
            return None;
        }
        let x = qi(j as i64);
        lam_pts.push((x.clone(), lev.lambda.clone()));
        for (d, pts) in coeff_pts.iter_mut().enumerate() {
            pts.push((x.clone(), phi.coeff_of(M_VAR, d as u32).as_constant()?));
        }
    }

    let lambda = fit_rf(&lam_pts)?;
    let mut phi_coeffs = Vec::with_capacity(kappa);
    for pts in &coeff_pts {
        phi_coeffs.push(fit_rf(pts)?);
    }
    Some(PatternRule {
        poly_part: last.poly_part.clone(),
        lambda0: last.levels[0].lambda.clone(),
        phi0: last.levels[0].phi.clone(),
        lambda,
        phi_deg: kappa,
        phi_coeffs,
    })
}
