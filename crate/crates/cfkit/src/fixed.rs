//! Integer fixed-point helpers for the handful of irrational reference
//! values: square roots, the arithmetic-geometric mean, and arctangent /
//! artanh series at reciprocal integers. Values are `BigInt`s scaled by
//! 10^wp; every routine states its absolute error in ulps of that scale.

use crate::rational::{pow10, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Floor of the integer square root.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    if n.is_zero() {
        return BigInt::zero();
    }
    let mut x: BigInt = BigInt::from(1) << (n.bits() / 2 + 1);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// sqrt(a) at scale 10^wp for a rational a >= 0; error <= 1 ulp.
pub fn fx_sqrt_q(a: &Q, wp: usize) -> BigInt {
    assert!(!a.is_negative());
    let scale = pow10(wp);
    // floor(sqrt(a * 10^(2wp))) = floor(sqrt(num * 10^(2wp) / den))
    let v = a.numer() * &scale * &scale / a.denom();
    isqrt(&v)
}

/// AGM(a, b) at scale 10^wp for rationals a >= b > 0; error <= 4 ulps.
pub fn fx_agm_q(a: &Q, b: &Q, wp: usize) -> BigInt {
    let scale = pow10(wp);
    let to_fx = |x: &Q| x.numer() * &scale / x.denom();
    let mut hi = to_fx(a);
    let mut lo = to_fx(b);
    if hi < lo {
        std::mem::swap(&mut hi, &mut lo);
    }
    assert!(lo.is_positive(), "AGM needs positive arguments");
    // quadratic convergence; b_k <= AGM <= a_k throughout, so iterate until
    // the bracket collapses to a couple of ulps
    while &hi - &lo > BigInt::from(2) {
        let m = (&hi + &lo) >> 1;
        let g = isqrt(&(&hi * &lo));
        hi = m;
        lo = g;
        if hi < lo {
            std::mem::swap(&mut hi, &mut lo);
        }
    }
    (&hi + &lo) >> 1
}

/// atan(1/k) at scale 10^wp, k >= 2; error <= (#terms + 1) ulps.
pub fn fx_atan_inv(k: u64, wp: usize) -> BigInt {
    let kk = BigInt::from(k) * BigInt::from(k);
    let mut t = pow10(wp) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !t.is_zero() {
        let term = &t / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        t = &t / &kk;
        j += 1;
    }
    sum
}

/// artanh(1/k) at scale 10^wp, k >= 2; error <= (#terms + 1) ulps.
pub fn fx_atanh_inv(k: u64, wp: usize) -> BigInt {
    let kk = BigInt::from(k) * BigInt::from(k);
    let mut t = pow10(wp) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !t.is_zero() {
        sum += &t / BigInt::from(2 * j + 1);
        t = &t / &kk;
        j += 1;
    }
    sum
}

pub fn fx_to_q(v: &BigInt, wp: usize) -> Q {
    Q::new(v.clone(), pow10(wp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{eps, q, qi};

    #[test]
    fn isqrt_exact_and_floor() {
        assert_eq!(isqrt(&BigInt::from(144)), BigInt::from(12));
        assert_eq!(isqrt(&BigInt::from(145)), BigInt::from(12));
        assert_eq!(isqrt(&BigInt::from(0)), BigInt::from(0));
        let big = BigInt::from(10).pow(40) + 1;
        let r = isqrt(&big);
        assert!(&r * &r <= big && (&r + 1) * (&r + 1) > big);
    }

    #[test]
    fn sqrt2_digits() {
        let s = fx_sqrt_q(&qi(2), 30);
        let v = fx_to_q(&s, 30);
        // 1.41421356237309504880168872420969808
        let expect = crate::rational::parse_rational("1.414213562373095048801688724209").unwrap();
        assert!((v - expect).abs() < eps(28));
    }

    #[test]
    fn agm_known_value() {
        // AGM(1, sqrt 2) = 1.19814023473559220743992249228...
        let wp = 35;
        let s2 = fx_to_q(&fx_sqrt_q(&qi(2), wp), wp);
        let a = fx_agm_q(&s2, &qi(1), wp);
        let v = fx_to_q(&a, wp);
        let expect = crate::rational::parse_rational("1.1981402347355922074399224922803238").unwrap();
        assert!((v - expect).abs() < eps(30));
    }

    #[test]
    fn atan_series_machin() {
        // pi = 16 atan(1/5) - 4 atan(1/239), checked to 25 digits
        let wp = 32;
        let p = fx_atan_inv(5, wp) * BigInt::from(16) - fx_atan_inv(239, wp) * BigInt::from(4);
        let v = fx_to_q(&p, wp);
        let expect = crate::rational::parse_rational("3.14159265358979323846264338327950288").unwrap();
        assert!((v - expect).abs() < eps(25));
    }

    #[test]
    fn atanh_series_ln2() {
        // ln 2 = 2 artanh(1/3)
        let wp = 32;
        let v = fx_to_q(&(fx_atanh_inv(3, wp) * BigInt::from(2)), wp);
        let expect = crate::rational::parse_rational("0.693147180559945309417232121458176568").unwrap();
        assert!((v - expect).abs() < eps(25));
    }

    #[test]
    fn rational_scaling_round_trip() {
        let v = fx_to_q(&(pow10(10) * BigInt::from(3) / BigInt::from(4)), 10);
        assert_eq!(v, q(3, 4));
    }
}
