//! Property suites over randomly drawn continued fractions: invariance
//! under equivalence scaling, the determinant identity, even-part
//! contraction, and domination of the true tail error by the
//! consecutive-approximant gap.

use cfkit::catalog;
use cfkit::cf::{approximant_gap, approximants, value_at_depth, Bindings, CfSpec};
use cfkit::ratfunc::RatFunc;
use cfkit::rational::{q, qi, Q};
use cfkit::transforms::{equivalence, even_part, Sequence, TransformError};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const DRAWS: usize = 250;
const DEPTH: i64 = 12;

fn kvar() -> RatFunc {
    RatFunc::var_named("k")
}

/// Polynomial in k with positive leading coefficient and nonnegative lower
/// coefficients, so it is >= 1 for every k >= 1.
fn positive_poly(rng: &mut StdRng, max_deg: u32) -> RatFunc {
    let deg = rng.gen_range(0..=max_deg);
    let mut out = kvar().pow(deg).scale(&qi(rng.gen_range(1..=4)));
    for d in 0..deg {
        out = out.add(&kvar().pow(d).scale(&qi(rng.gen_range(0..=4))));
    }
    out
}

/// A well-defined fraction: strictly positive elements for all k >= 1, a
/// short explicit lead block, and period 1 or 2.
fn random_cf(rng: &mut StdRng) -> CfSpec {
    let b0 = RatFunc::constant(q(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
    let lead = (0..rng.gen_range(0..=2))
        .map(|_| {
            (
                RatFunc::int(rng.gen_range(1..=5)),
                RatFunc::int(rng.gen_range(1..=5)),
            )
        })
        .collect();
    let period = rng.gen_range(1..=2usize);
    let rules = (0..period)
        .map(|_| (positive_poly(rng, 2), positive_poly(rng, 1)))
        .collect();
    CfSpec { b0, lead, period, rules, params: vec![] }
}

/// r_0 = 1 and r_k strictly positive afterwards.
fn random_modifier(rng: &mut StdRng) -> Sequence {
    let rule = if rng.gen_bool(0.5) {
        RatFunc::constant(q(rng.gen_range(1..=6), rng.gen_range(1..=4)))
    } else {
        kvar().add(&RatFunc::int(rng.gen_range(1..=4)))
    };
    Sequence { start: 0, lead: vec![RatFunc::one()], period: 1, rules: vec![rule] }
}

#[test]
fn equivalence_scaling_preserves_every_approximant() {
    let mut rng = StdRng::seed_from_u64(2026);
    let bind = Bindings::new();
    for draw in 0..DRAWS {
        let cf = random_cf(&mut rng);
        let r = random_modifier(&mut rng);
        let scaled = equivalence(&cf, &r).expect("positive modifier never degenerates");
        for depth in [0, 1, 2, 3, 5, 8, DEPTH] {
            let orig = value_at_depth(&cf, depth, &bind).unwrap();
            let new = value_at_depth(&scaled, depth, &bind).unwrap();
            assert_eq!(orig, new, "draw {draw} depth {depth}");
        }
    }
}

#[test]
fn determinant_identity_holds_exactly() {
    let mut rng = StdRng::seed_from_u64(2027);
    let bind = Bindings::new();
    for draw in 0..DRAWS {
        let cf = random_cf(&mut rng);
        let apx = approximants(&cf, DEPTH, &bind).unwrap();
        let resolved = cf.resolve(&bind).unwrap();
        let mut prod = Q::one();
        let mut sign = Q::one();
        for n in 1..=DEPTH {
            let (an, _) = resolved.element(n).unwrap();
            prod *= an;
            sign = -sign;
            // vec index n+1 holds (n, A_n, B_n); the vec starts at k = -1
            let (_, a_n, b_n) = &apx[(n + 1) as usize];
            let (_, a_p, b_p) = &apx[n as usize];
            let det = a_n * b_p - a_p * b_n;
            assert_eq!(det, -(&sign * &prod), "draw {draw} n {n}");
        }
    }
}

#[test]
fn even_part_matches_every_second_approximant() {
    let mut rng = StdRng::seed_from_u64(2028);
    let bind = Bindings::new();
    let mut checked = 0usize;
    let mut draw = 0usize;
    while checked < DRAWS {
        draw += 1;
        assert!(draw < 4 * DRAWS, "too many degenerate draws");
        let cf = random_cf(&mut rng);
        let even = match even_part(&cf) {
            Ok(e) => e,
            // contraction needs b_{2k} != 0 symbolically; a rare draw can
            // miss the structural requirements
            Err(TransformError::Degenerate(_)) => continue,
            Err(e) => panic!("unexpected {e}"),
        };
        for k in 1..=(DEPTH / 2) {
            let c_k = value_at_depth(&even, k, &bind).unwrap();
            let a_2k = value_at_depth(&cf, 2 * k, &bind).unwrap();
            assert_eq!(c_k, a_2k, "draw {draw} k {k}");
        }
        checked += 1;
    }
}

#[test]
fn approximant_gap_dominates_the_true_tail_error() {
    let entry = catalog::entry("exp").unwrap();
    let bind = Bindings::new().set_named("z", Q::one()).set_named("x", Q::one());
    // factorial convergence: depth 120 is far beyond exact at 60 digits
    let limit = value_at_depth(&entry.cf_tail, 120, &bind).unwrap();
    for m in 1..=20 {
        let x_m = value_at_depth(&entry.cf_tail, m, &bind).unwrap();
        let err = (&limit - &x_m).abs();
        let gap = approximant_gap(&entry.cf_tail, m, &bind).unwrap();
        assert!(!err.is_zero(), "tail error vanished at depth {m}");
        assert!(err <= gap, "m = {m}: error {err} exceeds gap {gap}");
    }
}
