//! Exact rational arithmetic: parsing, formatting and helpers shared by the
//! whole crate. All times and prices are `Rat` values; floats appear only at
//! reporting boundaries.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::error::Error;

/// Exact rational number. Always kept in canonical reduced form with a
/// strictly positive denominator (`BigRational` maintains this invariant).
pub type Rat = BigRational;

/// `n/d` as a `Rat`. Panics on `d = 0`; intended for literals in code/tests.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a `Rat`.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `2^e` for any integer exponent, exact.
pub fn pow2(e: i64) -> Rat {
    let one = BigInt::one();
    if e >= 0 {
        Rat::from_integer(one << (e as usize))
    } else {
        Rat::new(one.clone(), one << ((-e) as usize))
    }
}

/// `r^e` for integer exponents, exact. `r` must be nonzero when `e < 0`.
pub fn rat_pow(r: &Rat, e: i32) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let mut base = if e < 0 { r.recip() } else { r.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = Rat::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

/// Parses `"p"` or `"p/q"` with optional sign, rejecting zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = |m: &str| Error::ParseRat {
        input: s.to_string(),
        reason: m.to_string(),
    };
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad("invalid numerator"))?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| bad("invalid denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Renders a rational as `"p"` (denominator one) or `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Float rendering of an exact value. Reporting only; never feeds a check.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rational enclosure `[lo, hi]` of Euler's number from `terms` series terms.
/// `lo = Σ_{k≤terms} 1/k!` and the remainder is below `1/(terms!·terms)`.
pub fn e_bounds(terms: usize) -> (Rat, Rat) {
    assert!(terms >= 2);
    let mut fact = BigInt::one();
    let mut sum = Rat::zero();
    for k in 0..=terms {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        sum += Rat::new(BigInt::one(), fact.clone());
    }
    let rem = Rat::new(BigInt::one(), fact * BigInt::from(terms));
    let hi = &sum + &rem;
    (sum, hi)
}

/// Rational enclosure of `e^n`.
pub fn e_pow_bounds(n: u32, terms: usize) -> (Rat, Rat) {
    let (lo, hi) = e_bounds(terms);
    (rat_pow(&lo, n as i32), rat_pow(&hi, n as i32))
}

/// Compares a rational against the irrational `e^n` exactly, tightening the
/// series enclosure until it separates the two. For `n = 0` the comparison is
/// against 1. `x = e^n` is impossible for `n ≥ 1`, so this terminates.
pub fn cmp_with_e_pow(x: &Rat, n: u32) -> Ordering {
    if n == 0 {
        return x.cmp(&Rat::one());
    }
    if !x.is_positive() {
        return Ordering::Less;
    }
    let mut terms = 12usize;
    loop {
        let (lo, hi) = e_pow_bounds(n, terms);
        if *x < lo {
            return Ordering::Less;
        }
        if *x > hi {
            return Ordering::Greater;
        }
        terms += 8;
        assert!(terms <= 400, "e^n enclosure failed to separate a rational");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-3", "1/2", "-7/3", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat("6/-4").unwrap()), "-3/2");
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(matches!(parse_rat("3/0"), Err(Error::ParseRat { .. })));
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1/").is_err());
    }

    #[test]
    fn pow2_handles_negative_exponents() {
        assert_eq!(pow2(3), int(8));
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow2(0), int(1));
    }

    #[test]
    fn rat_pow_matches_repeated_multiplication() {
        let r = rat(3, 2);
        assert_eq!(rat_pow(&r, 4), rat(81, 16));
        assert_eq!(rat_pow(&r, -2), rat(4, 9));
        assert_eq!(rat_pow(&r, 0), int(1));
    }

    #[test]
    fn e_enclosure_brackets_known_digits() {
        let (lo, hi) = e_bounds(20);
        // 2.718281828459045 < e < 2.718281828459046
        assert!(lo < rat(2718281828459046, 1000000000000000));
        assert!(hi > rat(2718281828459045, 1000000000000000));
        assert!(lo < hi);
    }

    #[test]
    fn e_pow_comparison_is_exact() {
        assert_eq!(cmp_with_e_pow(&int(2), 1), Ordering::Less);
        assert_eq!(cmp_with_e_pow(&int(3), 1), Ordering::Greater);
        assert_eq!(cmp_with_e_pow(&int(7), 2), Ordering::Less);
        assert_eq!(cmp_with_e_pow(&int(8), 2), Ordering::Greater);
        assert_eq!(cmp_with_e_pow(&int(20), 3), Ordering::Less);
        assert_eq!(cmp_with_e_pow(&int(21), 3), Ordering::Greater);
        // e^6 = 403.4287...
        assert_eq!(cmp_with_e_pow(&int(403), 6), Ordering::Less);
        assert_eq!(cmp_with_e_pow(&int(404), 6), Ordering::Greater);
        assert_eq!(cmp_with_e_pow(&rat(1, 2), 0), Ordering::Less);
    }
}
