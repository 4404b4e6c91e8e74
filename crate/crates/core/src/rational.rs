//! Exact rational helpers shared across modules.
//!
//! `Rational` is `num_rational::BigRational`: always stored in lowest
//! terms with positive denominator, so the datum invariants hold by
//! construction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let mk = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = mk(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(mk(n)?, den))
        }
        None => Ok(Rational::from(mk(s)?)),
    }
}

/// Fractional part {x} in [0, 1).
pub fn frac_part(x: &Rational) -> Rational {
    x - Rational::from(x.floor().to_integer())
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Least common multiple of the denominators of an iterator of rationals.
pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigUint {
    let mut m = BigUint::one();
    for x in xs {
        m = m.lcm(x.denom().magnitude());
    }
    m
}

pub fn checked_pow_u64(p: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` for gcd(a, m) = 1, by extended Euclid.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inv_mod of non-unit");
    (s0.rem_euclid(m as i128)) as u64
}

/// p-adic valuation and unit part of a nonzero big integer, the unit
/// reduced modulo `modulus` (a power of p).
pub fn bigint_val_unit(n: &BigInt, p: u64, modulus: u64) -> (i64, u64) {
    debug_assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut mag = n.magnitude().clone();
    let mut val = 0i64;
    loop {
        let (q, r) = mag.div_rem(&pb);
        if r.is_zero() {
            mag = q;
            val += 1;
        } else {
            break;
        }
    }
    let mut u = (&mag % BigUint::from(modulus)).to_u64().unwrap();
    if n.is_negative() {
        u = (modulus - u) % modulus;
    }
    (val, u)
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(x: &Rational, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let count = |n: &BigUint| -> i64 {
        let pb = BigUint::from(p);
        let mut m = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if r.is_zero() {
                m = q;
                v += 1;
            } else {
                return v;
            }
        }
    };
    count(x.numer().magnitude()) - count(x.denom().magnitude())
}

/// Writes a nonzero rational as unit * p^val with the unit residue taken
/// modulo `modulus` (a power of p).
pub fn rational_val_unit(x: &Rational, p: u64, modulus: u64) -> (i64, u64) {
    let (vn, un) = bigint_val_unit(x.numer(), p, modulus);
    let (vd, ud) = bigint_val_unit(x.denom(), p, modulus);
    (vn - vd, mul_mod(un, inv_mod(ud, modulus), modulus))
}

/// Residue of a p-integral rational modulo p.
pub fn residue_mod_p(x: &Rational, p: u64) -> Result<u64> {
    if x.is_zero() {
        return Ok(0);
    }
    let (vd, _) = bigint_val_unit(x.denom(), p, p);
    if vd > 0 {
        return Err(Error::InvalidPrime { p, value: x.clone() });
    }
    let (vn, un) = bigint_val_unit(x.numer(), p, p);
    if vn > 0 {
        return Ok(0);
    }
    let (_, ud) = bigint_val_unit(x.denom(), p, p);
    Ok(mul_mod(un, inv_mod(ud, p), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_fract() {
        assert_eq!(parse_rational(" -7/6 ").unwrap(), rat(-7, 6));
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(frac_part(&rat(-7, 6)), rat(5, 6));
        assert_eq!(frac_part(&rat(7, 6)), rat(1, 6));
        assert_eq!(frac_part(&rat(2, 1)), rat(0, 1));
    }

    #[test]
    fn modular_helpers() {
        let m = checked_pow_u64(7, 5).unwrap();
        for a in [1u64, 6, 13, 100, m - 1] {
            if a % 7 != 0 {
                assert_eq!(mul_mod(a, inv_mod(a, m), m), 1);
            }
        }
        assert_eq!(pow_mod(3, 6 * 2401, 16807), 1); // phi(7^5), Euler
    }

    #[test]
    fn val_unit() {
        // -98/3 = -2*7^2/3
        let x = rat(-98, 3);
        let (v, u) = rational_val_unit(&x, 7, 343);
        assert_eq!(v, 2);
        // unit = -2/3 mod 343: -2 * inv(3)
        let expect = mul_mod(343 - 2, inv_mod(3, 343), 343);
        assert_eq!(u, expect);
        assert_eq!(rational_valuation(&x, 7), 2);
        assert_eq!(rational_valuation(&rat(3, 49), 7), -2);
        assert_eq!(residue_mod_p(&rat(1, 2), 7).unwrap(), 4);
        assert!(residue_mod_p(&rat(1, 7), 7).is_err());
    }
}
