//! Helpers on top of `num_rational::BigRational`: parsing, powers, and
//! correctly rounded decimal output.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn pow10(e: usize) -> BigInt {
    BigInt::from(10u32).pow(e as u32)
}

/// 10^-e as a rational, for tolerance comparisons.
pub fn eps(e: usize) -> Q {
    Q::new(BigInt::one(), pow10(e))
}

pub fn qpow(base: &Q, exp: i64) -> Q {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        base.pow((-exp) as i32).recip()
    }
}

/// Parse "p/q", an integer, or a finite decimal ("-0.125") into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" { "0" } else { int_part };
        let i = BigInt::from_str(int_part).map_err(|e| format!("bad number {s:?}: {e}"))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let f = BigInt::from_str(frac_part).unwrap();
        let scale = pow10(frac_part.len());
        let mag = i.magnitude() * scale.magnitude() + f.magnitude();
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        return Ok(Q::new(BigInt::from_biguint(sign, mag), scale));
    }
    let n = BigInt::from_str(s).map_err(|e| format!("bad number {s:?}: {e}"))?;
    Ok(Q::from_integer(n))
}

/// Largest e with 10^e <= |v|, i.e. floor(log10 |v|); None for v = 0.
///
/// Bit-length estimate refined by exact comparison, so huge exact residuals
/// (with 10^5-digit components) cost two bigint multiplies, not a reduction
/// per decade.
pub fn decimal_exponent(v: &Q) -> Option<i64> {
    if v.is_zero() {
        return None;
    }
    let num = v.numer().abs();
    let den = v.denom().abs();
    let bits = num.bits() as i64 - den.bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64 - 1;
    let ge = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * pow10(e as usize)
        } else {
            &num * pow10((-e) as usize) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    Some(e)
}

/// Round `v` to `digits` significant decimal digits, half-even, and format.
///
/// The input is exact, so no guard digits are needed: the rounding decision
/// is made on the exact scaled value.
pub fn to_decimal_string(v: &Q, digits: usize) -> String {
    assert!(digits >= 1, "need at least one digit");
    if v.is_zero() {
        return "0".into();
    }
    let neg = v.is_negative();
    let a = v.abs();
    // decimal exponent: largest e with 10^e <= a
    let mut e: i64 = 0;
    let ten = qi(10);
    let one = Q::one();
    let mut t = a.clone();
    if t >= one {
        while t >= ten {
            t /= &ten;
            e += 1;
        }
    } else {
        while t < one {
            t *= &ten;
            e -= 1;
        }
    }
    // scaled = a * 10^(digits-1-e), then round to integer half-even
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        a.clone() * Q::from_integer(pow10(shift as usize))
    } else {
        a.clone() / Q::from_integer(pow10((-shift) as usize))
    };
    let mut mant = round_half_even(&scaled);
    // rounding may carry into an extra digit (9.99 -> 10.0)
    let cap = pow10(digits);
    if mant >= cap {
        mant /= BigInt::from(10u32);
        e += 1;
    }
    let ds = mant.to_string();
    debug_assert_eq!(ds.len(), digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= 0 && (e as usize) < digits {
        let point = e as usize + 1;
        out.push_str(&ds[..point]);
        if point < digits {
            out.push('.');
            out.push_str(&ds[point..]);
        }
    } else if e < 0 && (-e as usize) <= 4 {
        out.push_str("0.");
        for _ in 0..((-e as usize) - 1) {
            out.push('0');
        }
        out.push_str(&ds);
    } else {
        out.push_str(&ds[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&ds[1..]);
        }
        out.push('e');
        out.push_str(&e.to_string());
    }
    out
}

fn round_half_even(v: &Q) -> BigInt {
    let fl = v.floor().to_integer();
    let frac = v - Q::from_integer(fl.clone());
    let half = q(1, 2);
    if frac < half {
        fl
    } else if frac > half {
        fl + 1
    } else if (&fl % BigInt::from(2)).is_zero() {
        fl
    } else {
        fl + 1
    }
}
