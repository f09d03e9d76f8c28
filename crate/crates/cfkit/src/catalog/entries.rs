//! Data tables for the built-in entries.
//!
//! Conventions: tails are pure fractions (b0 = 0) in the variable x whose
//! element k >= 1 is read off `lead`/`rules`; certificate forms carry their
//! own b0. Rule expressions are functions of the global index k on its
//! residue class.

use num_traits::{One, Zero};

use crate::cf::CfSpec;
use crate::parse::parse_ratfunc;
use crate::ratfunc::RatFunc;
use crate::rational::{q, Q};
use crate::term::{DifferenceEquation, RamanujanTerm};
use crate::transforms::Sequence;

use super::{BmCertificate, CatalogEntry, OracleKind};

fn rf(src: &str) -> RatFunc {
    parse_ratfunc(src, &["m", "k", "x", "z", "w", "alpha", "r"])
        .unwrap_or_else(|e| panic!("bad table expression {src:?}: {e}"))
}

fn ps(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub(super) fn catalan() -> CatalogEntry {
    let num = vec![(1, 0), (1, 0)];
    let den = vec![(2, 0)];
    let term = RamanujanTerm {
        r: rf("1/(2*(2*m+1)^2)"),
        num_factorials: num.clone(),
        den_factorials: den.clone(),
        q: rf("1/4"),
    };
    let weight = RamanujanTerm {
        r: rf("1/2"),
        num_factorials: num,
        den_factorials: den,
        q: rf("1/4"),
    };
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/2"), rf("x+1/6"))],
        period: 1,
        rules: vec![(
            rf("(2*k-2)^3*(2*k-3)^3/(4*(4*k-7)*(4*k-5)^2*(4*k-3))"),
            rf("x+(4*k^2-6*k+1)/(2*(4*k-5)*(4*k-1))"),
        )],
        params: ps(&["x"]),
    };
    let form = CfSpec {
        b0: rf("x"),
        lead: vec![],
        period: 2,
        rules: vec![
            (rf("-k^3/2"), rf("(2*k+1)*x")), // even k
            (rf("k^3/2"), rf("2*k+1")),      // odd k
        ],
        params: ps(&["x"]),
    };
    let r = Sequence {
        start: 0,
        lead: vec![],
        period: 2,
        rules: vec![
            rf("k^2/2-(2*x-1)*k/2+2*x^2+x+1/2"), // even k
            rf("2*x-k"),                         // odd k
        ],
    };
    let bm = BmCertificate {
        form,
        r,
        phi: rf("-(2*x+1)^3/2"),
        out_b0: rf("(2*x+1)^2/2"),
        out_b_lead: vec![rf("2*(x+1)"), rf("3*(x+1)"), rf("5")],
        out_b_rules: vec![rf("(2*k-1)*(x+1)"), rf("2*k-1")],
    };
    let lemma_cf = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/2"), rf("x"))],
        period: 2,
        rules: vec![
            (rf("(k-1)^3/(2*(2*k-3)*(2*k-1))"), rf("1")),  // even k
            (rf("-(k-1)^3/(2*(2*k-3)*(2*k-1))"), rf("x")), // odd k
        ],
        params: ps(&["x"]),
    };
    CatalogEntry {
        name: "catalan",
        params: &[],
        term,
        weight,
        head_offset: Q::zero(),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("2*(m+1)/(2*m+1)"), rhs: rf("1/(2*m+1)^2") },
        bm: Some(bm),
        lemma_cf: Some(lemma_cf),
        alt_cf: None,
        oracle: OracleKind::Catalan,
    }
}

pub(super) fn catalan_companion() -> CatalogEntry {
    let num = vec![(1, 0), (1, 0)];
    let den = vec![(2, 0)];
    let term = RamanujanTerm {
        r: rf("1/(4*m+1)^2"),
        num_factorials: num.clone(),
        den_factorials: den.clone(),
        q: rf("1/4"),
    };
    let weight = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: num,
        den_factorials: den,
        q: rf("1/4"),
    };
    let tail_rules = vec![
        (rf("(2*k-3)^4/(16*(4*k-7)*(4*k-3))"), rf("x-1/2")), // even k
        (rf("(2*k-2)^4/(16*(4*k-7)*(4*k-3))"), rf("x")),     // odd k
    ];
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/8"), rf("x"))],
        period: 2,
        rules: tail_rules.clone(),
        params: ps(&["x"]),
    };
    let form = CfSpec {
        b0: rf("x"),
        lead: vec![],
        period: 2,
        rules: vec![
            (rf("k^4"), rf("(4*k+1)*x")),              // even k
            (rf("(2*k-1)^4/16"), rf("(4*k+1)*(x-1/2)")), // odd k
        ],
        params: ps(&["x"]),
    };
    let r = Sequence {
        start: 0,
        lead: vec![],
        period: 2,
        rules: vec![
            rf("k^2-(4*x-1)*k/2+2*x^2+1/8"),             // even k
            rf("(k+1)^2-(4*x+1)*(k+1)/2+2*x^2+x+1/8"),   // odd k
        ],
    };
    let bm = BmCertificate {
        form,
        r,
        phi: rf("-(4*x+1)^4/64"),
        out_b0: rf("(4*x+1)^2/8"),
        out_b_lead: vec![rf("(16*x^2+16*x+5)/8"), rf("5*(x+1)"), rf("9*(x+1/2)")],
        out_b_rules: vec![rf("(4*k-3)*(x+1)"), rf("(4*k-3)*(x+1/2)")],
    };
    // the recorded interleaved fraction coincides with the tail itself;
    // even_part_linkage reports the mismatch honestly
    let lemma_cf = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/8"), rf("x"))],
        period: 2,
        rules: tail_rules,
        params: ps(&["x"]),
    };
    CatalogEntry {
        name: "catalan_companion",
        params: &[],
        term,
        weight,
        head_offset: Q::zero(),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("2*(m+1)/(2*m+1)"), rhs: rf("1/(4*m+1)^2") },
        bm: Some(bm),
        lemma_cf: Some(lemma_cf),
        alt_cf: None,
        oracle: OracleKind::Companion,
    }
}

pub(super) fn arcsine() -> CatalogEntry {
    let num = vec![(1, 0), (1, 0)];
    let den = vec![(2, 0)];
    let term = RamanujanTerm {
        r: rf("1/(2*m+1)"),
        num_factorials: num.clone(),
        den_factorials: den.clone(),
        q: rf("1/w"),
    };
    let weight = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: num,
        den_factorials: den,
        q: rf("1/w"),
    };
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("2/(4-w)"), rf("x+2/(4-w)"))],
        period: 1,
        rules: vec![(
            rf("-2*w*(k-1)*(2*k-3)/(4-w)^2"),
            rf("x+(2+(4+w)*(k-1))/(4-w)"),
        )],
        params: ps(&["x", "w"]),
    };
    let form = CfSpec {
        b0: rf("x+2/(4-w)"),
        lead: vec![],
        period: 1,
        rules: vec![(rf("-2*w*k*(2*k-1)/(4-w)^2"), rf("x+(2+(4+w)*k)/(4-w)"))],
        params: ps(&["x", "w"]),
    };
    let r = Sequence { start: 0, lead: vec![], period: 1, rules: vec![rf("w*(x-k)/(4-w)")] };
    let bm = BmCertificate {
        form,
        r,
        phi: rf("-2*w*(x+1)*(2*x+1)/(4-w)^2"),
        out_b0: rf("2*(2*x+1)/(4-w)"),
        out_b_lead: vec![
            rf("2*(2*x+3)/(4-w)"),
            rf("x+10/(4-w)"),
            rf("x+(14+w)/(4-w)"),
        ],
        out_b_rules: vec![rf("x+((4+w)*k+2-2*w)/(4-w)")],
    };
    let alt_cf = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("2/(4-w)"), rf("x"))],
        period: 2,
        rules: vec![
            (rf("2*(k-1)/(4-w)"), rf("1")),       // even k
            (rf("w*(k-1)/(2*(4-w))"), rf("x")),   // odd k
        ],
        params: ps(&["x", "w"]),
    };
    CatalogEntry {
        name: "arcsine",
        params: &["w"],
        term,
        weight,
        head_offset: Q::zero(),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("w*(m+1)/(2*(2*m+1))"), rhs: rf("1/(2*m+1)") },
        bm: Some(bm),
        lemma_cf: None,
        alt_cf: Some(alt_cf),
        oracle: OracleKind::Arcsine,
    }
}

pub(super) fn lerch() -> CatalogEntry {
    let term = RamanujanTerm {
        r: rf("1/(m+alpha)"),
        num_factorials: vec![],
        den_factorials: vec![],
        q: rf("1/z"),
    };
    let weight = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: vec![],
        den_factorials: vec![],
        q: rf("1/z"),
    };
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/(1-z)"), rf("x+alpha+z/(1-z)"))],
        period: 1,
        rules: vec![(
            rf("-z*(k-1)^2/(1-z)^2"),
            rf("x+alpha+((1+z)*(k-1)+z)/(1-z)"),
        )],
        params: ps(&["x", "z", "alpha"]),
    };
    let form = CfSpec {
        b0: rf("x+alpha+z/(1-z)"),
        lead: vec![],
        period: 1,
        rules: vec![(rf("-z*k^2/(1-z)^2"), rf("x+alpha+((1+z)*k+z)/(1-z)"))],
        params: ps(&["x", "z", "alpha"]),
    };
    let r = Sequence {
        start: 0,
        lead: vec![],
        period: 1,
        rules: vec![rf("-(k+x+alpha)/(1-z)")],
    };
    let bm = BmCertificate {
        form,
        r,
        phi: rf("-z*(x+alpha-1)^2/(1-z)^2"),
        out_b0: rf("z*(1-x-alpha)/(1-z)"),
        out_b_lead: vec![
            rf("z*(2-x-alpha)/(1-z)"),
            rf("x+alpha+3*z/(1-z)"),
            rf("x+alpha+(4*z+1)/(1-z)"),
        ],
        out_b_rules: vec![rf("x+alpha+((1+z)*k+z-2)/(1-z)")],
    };
    let alt_cf = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/(1-z)"), rf("x+alpha"))],
        period: 2,
        rules: vec![
            (rf("k*z/(2*(1-z))"), rf("1")),        // even k
            (rf("(k-1)/(2*(1-z))"), rf("x+alpha")), // odd k
        ],
        params: ps(&["x", "z", "alpha"]),
    };
    CatalogEntry {
        name: "lerch",
        params: &["z", "alpha"],
        term,
        weight,
        head_offset: Q::zero(),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("z"), rhs: rf("1/(m+alpha)") },
        bm: Some(bm),
        lemma_cf: None,
        alt_cf: Some(alt_cf),
        oracle: OracleKind::Lerch,
    }
}

pub(super) fn landau_companion() -> CatalogEntry {
    let num = vec![(2, 0), (2, 0)];
    let den = vec![(1, 0), (1, 0), (1, 0), (1, 0)];
    let term = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: num.clone(),
        den_factorials: den.clone(),
        q: rf("-16"),
    };
    let weight = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: num,
        den_factorials: den,
        q: rf("-16"),
    };
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1/4"), rf("x+1/4"))],
        period: 2,
        rules: vec![
            (rf("(2*k-1)^2/16"), rf("x+1/4")), // even k
            (rf("k*(k-1)/4"), rf("x+1/4")),    // odd k
        ],
        params: ps(&["x"]),
    };
    let form = CfSpec {
        b0: rf("x+1/4"),
        lead: vec![],
        period: 2,
        rules: vec![
            (rf("k*(k+1)/4"), rf("x+1/4")),    // even k
            (rf("(2*k+1)^2/16"), rf("x+1/4")), // odd k
        ],
        params: ps(&["x"]),
    };
    let r = Sequence {
        start: 0,
        lead: vec![],
        period: 2,
        rules: vec![
            rf("k/2+(5-8*x^2)/(4*(4*x+3))"),           // even k
            rf("(k+1)/2-(2*x+1)^2/(2*(4*x+3))"),       // odd k
        ],
    };
    let bm = BmCertificate {
        form,
        r,
        phi: rf("(2*x+1)^2*(x+1)^2/(4*x+3)^2"),
        out_b0: rf("2*(x+1)^2/(4*x+3)"),
        out_b_lead: vec![rf("(8*x^2+24*x+13)/(4*(4*x+3))"), rf("x+5/4"), rf("x+5/4")],
        out_b_rules: vec![rf("x+5/4"), rf("x+5/4")],
    };
    CatalogEntry {
        name: "landau_companion",
        params: &[],
        term,
        weight,
        head_offset: q(1, 2),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("-(2*m+1)^2/(4*(m+1)^2)"), rhs: rf("1") },
        bm: Some(bm),
        lemma_cf: None,
        alt_cf: None,
        oracle: OracleKind::Landau,
    }
}

pub(super) fn exp() -> CatalogEntry {
    let term = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: vec![],
        den_factorials: vec![(1, 0)],
        q: rf("1/z"),
    };
    let weight = term.clone();
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("z"), rf("x+1-z"))],
        period: 1,
        rules: vec![(rf("(k-1)*z"), rf("x+k-z"))],
        params: ps(&["x", "z"]),
    };
    let form = CfSpec {
        b0: rf("x+1-z"),
        lead: vec![],
        period: 1,
        rules: vec![(rf("k*z"), rf("x+k+1-z"))],
        params: ps(&["x", "z"]),
    };
    let bm = BmCertificate {
        form,
        r: Sequence::constant(rf("z")),
        phi: rf("-(x+1)*z"),
        out_b0: rf("x+1"),
        out_b_lead: vec![rf("x+2"), rf("x+3-z"), rf("x+4-z")],
        out_b_rules: vec![rf("x+k+1-z")],
    };
    CatalogEntry {
        name: "exp",
        params: &["z"],
        term,
        weight,
        head_offset: Q::one(),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("z/(m+1)"), rhs: rf("1") },
        bm: Some(bm),
        lemma_cf: None,
        alt_cf: None,
        oracle: OracleKind::Exp,
    }
}

pub(super) fn mathieu() -> CatalogEntry {
    let term = RamanujanTerm {
        r: rf("2*m/(m^2+r^2)^2"),
        num_factorials: vec![],
        den_factorials: vec![],
        q: RatFunc::one(),
    };
    let weight = RamanujanTerm {
        r: RatFunc::one(),
        num_factorials: vec![],
        den_factorials: vec![],
        q: RatFunc::one(),
    };
    let cf_tail = CfSpec {
        b0: RatFunc::zero(),
        lead: vec![(rf("1"), rf("(x-1/2)^2+(1+4*r^2)/4"))],
        period: 1,
        rules: vec![(
            rf("-(k-1)^4*((k-1)^2+4*r^2)/(4*(2*k-3)*(2*k-1))"),
            rf("(x-1/2)^2+(2*(k-1)^2+2*(k-1)+1+4*r^2)/4"),
        )],
        params: ps(&["x", "r"]),
    };
    CatalogEntry {
        name: "mathieu",
        params: &["r"],
        term,
        weight,
        head_offset: Q::zero(),
        cf_tail,
        deq: DifferenceEquation { ratio: rf("1"), rhs: rf("2*m/(m^2+r^2)^2") },
        bm: None,
        lemma_cf: None,
        alt_cf: None,
        oracle: OracleKind::Mathieu,
    }
}
