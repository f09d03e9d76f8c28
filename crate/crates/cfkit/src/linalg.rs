//! Exact linear solving over the rationals.

use crate::rational::Q;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The system is inconsistent.
    NoSolution,
    /// The system is consistent but underdetermined.
    NonUnique,
    /// Shape mismatch between matrix and right-hand side.
    BadShape,
}

impl std::fmt::Display for SolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveError::NoSolution => write!(f, "inconsistent linear system"),
            SolveError::NonUnique => write!(f, "underdetermined linear system"),
            SolveError::BadShape => write!(f, "matrix and right-hand side shapes disagree"),
        }
    }
}

impl std::error::Error for SolveError {}

/// Solve A x = b exactly by Gaussian elimination with partial pivoting
/// (largest numerator magnitude). A may have more rows than columns; extra
/// rows must be consistent. Requires a unique solution.
pub fn solve_linear(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>, SolveError> {
    let rows = a.len();
    if rows != b.len() || rows == 0 {
        return Err(SolveError::BadShape);
    }
    let cols = a[0].len();
    if a.iter().any(|r| r.len() != cols) {
        return Err(SolveError::BadShape);
    }
    if cols == 0 {
        return if b.iter().all(|v| v.is_zero()) {
            Ok(vec![])
        } else {
            Err(SolveError::NoSolution)
        };
    }

    let mut m: Vec<Vec<Q>> = a.iter().map(|r| r.to_vec()).collect();
    let mut rhs: Vec<Q> = b.to_vec();
    let mut pivot_row = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)

    for col in 0..cols {
        // pick the row with the largest numerator magnitude in this column
        let mut best: Option<(usize, Q)> = None;
        for (r, row) in m.iter().enumerate().skip(pivot_row) {
            if row[col].is_zero() {
                continue;
            }
            let mag = Q::new(row[col].numer().abs(), row[col].denom().clone());
            if best.as_ref().map_or(true, |(_, bm)| mag > *bm) {
                best = Some((r, mag));
            }
        }
        let Some((r, _)) = best else { continue };
        m.swap(pivot_row, r);
        rhs.swap(pivot_row, r);
        let inv = m[pivot_row][col].clone().recip();
        for v in &mut m[pivot_row][col..] {
            *v = &*v * &inv;
        }
        rhs[pivot_row] = &rhs[pivot_row] * &inv;
        let piv = m[pivot_row].clone();
        let piv_rhs = rhs[pivot_row].clone();
        for (r2, row) in m.iter_mut().enumerate() {
            if r2 == pivot_row || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row[col..].iter_mut().zip(&piv[col..]) {
                *v -= pv * &f;
            }
            rhs[r2] -= &piv_rhs * &f;
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }

    // inconsistent zero rows?
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return Err(SolveError::NoSolution);
    }
    if pivots.len() < cols {
        return Err(SolveError::NonUnique);
    }

    let mut x = vec![Q::zero(); cols];
    for (r, c) in pivots {
        x[c] = rhs[r].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn solves_2x2() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(-1)]];
        let b = vec![qi(4), q(1, 2)];
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, vec![q(3, 2), qi(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let b = vec![qi(1), qi(3)];
        assert_eq!(solve_linear(&a, &b), Err(SolveError::NoSolution));
    }

    #[test]
    fn detects_underdetermined() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let b = vec![qi(1), qi(2)];
        assert_eq!(solve_linear(&a, &b), Err(SolveError::NonUnique));
    }

    #[test]
    fn overdetermined_consistent() {
        let a = vec![vec![qi(1)], vec![qi(2)], vec![qi(3)]];
        let b = vec![q(1, 3), q(2, 3), qi(1)];
        assert_eq!(solve_linear(&a, &b).unwrap(), vec![q(1, 3)]);
    }

    #[test]
    fn overdetermined_inconsistent() {
        let a = vec![vec![qi(1)], vec![qi(2)]];
        let b = vec![qi(1), qi(1)];
        assert_eq!(solve_linear(&a, &b), Err(SolveError::NoSolution));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(solve_linear(&[], &[]), Err(SolveError::BadShape));
        let a = vec![vec![qi(1), qi(2)]];
        assert_eq!(solve_linear(&a, &[qi(1), qi(2)]), Err(SolveError::BadShape));
    }

    #[test]
    fn round_trip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let x: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect();
            let a: Vec<Vec<Q>> = (0..n)
                .map(|_| (0..n).map(|_| qi(rng.gen_range(-5..=5))).collect())
                .collect();
            let b: Vec<Q> = a
                .iter()
                .map(|row| row.iter().zip(&x).map(|(c, v)| c * v).sum())
                .collect();
            match solve_linear(&a, &b) {
                Ok(got) => assert_eq!(got, x),
                Err(SolveError::NonUnique) => {} // singular draw; fine
                Err(e) => panic!("unexpected {e:?}"),
            }
        }
    }
}
