//! Exact p-adic arithmetic: Z/p^N with valuation tracking, digit and dash
//! operations, Teichmueller lifts, and the Morita p-adic Gamma function.
//!
//! Every [`PadicNumber`] carries the minimum guaranteed absolute precision
//! of its value; congruence verdicts fail loudly rather than silently
//! truncate.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{
    checked_pow_u64, inv_mod, mul_mod, pow_mod, rational_val_unit, rational_valuation,
    residue_mod_p, Rational,
};

mod gamma;
pub use gamma::{gamma_p, gamma_p_direct, gamma_table, GammaTable};

/// An element of Q_p known to absolute precision N: u * p^v + O(p^N) with
/// u a unit residue, or O(p^N) when indistinguishable from zero.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    /// valuation; meaningless when `zero`
    val: i64,
    /// unit residue mod p^(abs_prec - val), coprime to p; 0 when `zero`
    unit: u64,
    /// value is known modulo p^abs_prec
    abs_prec: i64,
    zero: bool,
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "O({}^{})", self.p, self.abs_prec)
        } else {
            write!(
                f,
                "{}*{}^{} + O({}^{})",
                self.unit, self.p, self.val, self.p, self.abs_prec
            )
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn pow_or_panic(p: u64, k: i64) -> u64 {
    assert!(k >= 0);
    checked_pow_u64(p, k as u32)
        .unwrap_or_else(|| panic!("p^k = {p}^{k} exceeds the u64 unit representation"))
}

impl PadicNumber {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNumber { p, val: 0, unit: 0, abs_prec, zero: true }
    }

    /// Builds u * p^v from a unit residue (reduced mod p^rel_prec).
    pub fn from_unit(p: u64, unit: u64, val: i64, rel_prec: i64) -> Self {
        assert!(rel_prec >= 1);
        let m = pow_or_panic(p, rel_prec);
        let unit = unit % m;
        assert!(unit % p != 0, "from_unit got a non-unit residue");
        PadicNumber { p, val, unit, abs_prec: val + rel_prec, zero: false }
    }

    /// Exact embedding of a rational with p-free denominator check left to
    /// the caller's context: any nonzero rational embeds (valuation may be
    /// negative when p divides the denominator).
    pub fn from_rational(x: &Rational, p: u64, abs_prec: i64) -> Self {
        if x.is_zero() {
            return PadicNumber::zero(p, abs_prec);
        }
        let val = rational_valuation(x, p);
        let rel = abs_prec - val;
        if rel <= 0 {
            return PadicNumber::zero(p, abs_prec);
        }
        let m = pow_or_panic(p, rel);
        let (v, u) = rational_val_unit(x, p, m);
        debug_assert_eq!(v, val);
        PadicNumber { p, val, unit: u, abs_prec, zero: false }
    }

    pub fn from_i64(x: i64, p: u64, abs_prec: i64) -> Self {
        PadicNumber::from_rational(&Rational::from(BigInt::from(x)), p, abs_prec)
    }

    pub fn one(p: u64, abs_prec: i64) -> Self {
        PadicNumber::from_i64(1, p, abs_prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// None when the value is indistinguishable from zero at its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.zero {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.zero
    }

    pub fn unit_residue(&self) -> u64 {
        self.unit
    }

    fn rel_prec(&self) -> i64 {
        self.abs_prec - self.val
    }

    /// Normalizes a residue known mod p^(abs-v) at base valuation v.
    fn from_residue(p: u64, residue: u64, v: i64, abs_prec: i64) -> Self {
        if residue == 0 {
            return PadicNumber::zero(p, abs_prec);
        }
        let mut r = residue;
        let mut val = v;
        while r % p == 0 {
            r /= p;
            val += 1;
        }
        PadicNumber { p, val, unit: r, abs_prec, zero: false }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        let abs = self.abs_prec.min(other.abs_prec);
        if self.zero && other.zero {
            return PadicNumber::zero(p, abs);
        }
        if self.zero {
            return other.truncate(abs);
        }
        if other.zero {
            return self.truncate(abs);
        }
        let v = self.val.min(other.val);
        let rel = abs - v;
        if rel <= 0 {
            return PadicNumber::zero(p, abs);
        }
        let m = pow_or_panic(p, rel);
        let a = mul_mod(self.unit % m, pow_mod(p, (self.val - v) as u64, m), m);
        let b = mul_mod(other.unit % m, pow_mod(p, (other.val - v) as u64, m), m);
        PadicNumber::from_residue(p, (a + b) % m, v, abs)
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            return self.clone();
        }
        let m = pow_or_panic(self.p, self.rel_prec());
        PadicNumber { unit: (m - self.unit) % m, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        if self.zero || other.zero {
            // u*p^v * O(p^a) = O(p^(a+v))
            let abs = if self.zero && other.zero {
                self.abs_prec + other.abs_prec
            } else if self.zero {
                self.abs_prec + other.val
            } else {
                other.abs_prec + self.val
            };
            return PadicNumber::zero(p, abs);
        }
        let abs = (self.abs_prec + other.val).min(other.abs_prec + self.val);
        let val = self.val + other.val;
        let rel = abs - val;
        let m = pow_or_panic(p, rel);
        PadicNumber {
            p,
            val,
            unit: mul_mod(self.unit % m, other.unit % m, m),
            abs_prec: abs,
            zero: false,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.p, other.p);
        if other.zero {
            return Err(Error::Invalid(
                "division by a p-adic value indistinguishable from zero".into(),
            ));
        }
        let p = self.p;
        if self.zero {
            return Ok(PadicNumber::zero(p, self.abs_prec - other.val));
        }
        let val = self.val - other.val;
        let rel = self.rel_prec().min(other.rel_prec());
        let m = pow_or_panic(p, rel);
        Ok(PadicNumber {
            p,
            val,
            unit: mul_mod(self.unit % m, inv_mod(other.unit % m, m), m),
            abs_prec: val + rel,
            zero: false,
        })
    }

    /// Integer power; negative exponents invert (unit denominators only
    /// when the base is a unit, otherwise the valuation scales).
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(PadicNumber::one(self.p, self.rel_prec().max(1)));
        }
        if self.zero {
            if e < 0 {
                return Err(Error::Invalid("negative power of p-adic zero".into()));
            }
            return Ok(PadicNumber::zero(self.p, self.abs_prec * e.max(1)));
        }
        let inv_needed = e < 0;
        let e_abs = e.unsigned_abs();
        let rel = self.rel_prec();
        let m = pow_or_panic(self.p, rel);
        let unit = pow_mod(self.unit, e_abs, m);
        let val = self.val * e;
        let base = PadicNumber { p: self.p, val: self.val * e_abs as i64, unit, abs_prec: self.val * e_abs as i64 + rel, zero: false };
        if inv_needed {
            PadicNumber::one(self.p, rel).div(&base)
        } else {
            debug_assert_eq!(base.val, val);
            Ok(base)
        }
    }

    /// Lowers the guaranteed precision (no-op if already lower).
    pub fn truncate(&self, abs_prec: i64) -> Self {
        if abs_prec >= self.abs_prec {
            return self.clone();
        }
        if self.zero || abs_prec <= self.val {
            return PadicNumber::zero(self.p, abs_prec);
        }
        let m = pow_or_panic(self.p, abs_prec - self.val);
        PadicNumber { unit: self.unit % m, abs_prec, ..self.clone() }
    }

    /// Congruence mod p^c; errors (never guesses) when either side's
    /// guaranteed precision is below c.
    pub fn congruent_mod(&self, other: &Self, c: i64) -> Result<bool> {
        let guaranteed = self.abs_prec.min(other.abs_prec);
        if guaranteed < c {
            return Err(Error::Precision { needed: c, guaranteed });
        }
        let diff = self.sub(other);
        Ok(match diff.valuation() {
            None => true, // zero to at least p^c by the guard above
            Some(v) => v >= c,
        })
    }

    /// The representative of a p-integral value in [0, p^c).
    pub fn residue_mod(&self, c: i64) -> Result<u64> {
        if self.abs_prec < c {
            return Err(Error::Precision { needed: c, guaranteed: self.abs_prec });
        }
        if self.zero {
            return Ok(0);
        }
        if self.val < 0 {
            return Err(Error::NotPadicInteger { p: self.p, what: format!("{self}") });
        }
        if self.val >= c {
            return Ok(0);
        }
        let m = pow_or_panic(self.p, c);
        let mu = pow_or_panic(self.p, c - self.val);
        Ok(mul_mod(self.unit % mu, pow_or_panic(self.p, self.val), m))
    }

    /// The signed representative in (-p^c/2, p^c/2] of a p-integral value.
    pub fn signed_residue_mod(&self, c: i64) -> Result<BigInt> {
        let r = self.residue_mod(c)?;
        let m = pow_or_panic(self.p, c);
        Ok(if r > m / 2 {
            BigInt::from(r) - BigInt::from(m)
        } else {
            BigInt::from(r)
        })
    }
}

/// The first p-adic digit [r]_0: the unique integer in [0, p-1] congruent
/// to the p-adic unit (or integer) r modulo p.
pub fn first_digit(r: &Rational, p: u64) -> Result<u64> {
    residue_mod_p(r, p)
}

/// Dwork's dash operation r' = (r + [-r]_0) / p.
pub fn dash(r: &Rational, p: u64) -> Result<Rational> {
    let digit = first_digit(&-r, p)?;
    Ok((r + Rational::from(BigInt::from(digit))) / Rational::from(BigInt::from(p)))
}

/// a_0(x): the unique integer in [1, p] congruent to x mod p.
pub fn a0(x: &Rational, p: u64) -> Result<u64> {
    let r = residue_mod_p(x, p)?;
    Ok(if r == 0 { p } else { r })
}

/// Teichmueller lift: the (p-1)-th root of unity congruent to x mod p,
/// computed by iterating y -> y^p to its fixed point mod p^N.
pub fn teichmuller(x: u64, p: u64, n: i64) -> Result<PadicNumber> {
    if x % p == 0 {
        return Err(Error::Invalid(format!("teichmuller({x}) needs a unit mod {p}")));
    }
    assert!(n >= 1);
    let m = pow_or_panic(p, n);
    let mut y = x % m;
    loop {
        let next = pow_mod(y, p, m);
        if next == y {
            break;
        }
        y = next;
    }
    Ok(PadicNumber::from_unit(p, y, 0, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_integer::Integer;

    #[test]
    fn first_digit_examples() {
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(first_digit(&rat(-1, 2), p).unwrap(), (p - 1) / 2);
        }
        assert_eq!(first_digit(&rat(-7, 6), 7).unwrap(), 0); // 7 = 1 mod 3: (p-7)/6
        assert_eq!(first_digit(&rat(-7, 6), 13).unwrap(), 1);
        assert_eq!(first_digit(&rat(-7, 6), 11).unwrap(), (5 * 11 - 7) / 6);
        assert!(first_digit(&rat(1, 7), 7).is_err());
    }

    #[test]
    fn dash_examples() {
        assert_eq!(dash(&rat(7, 6), 13).unwrap(), rat(1, 6)); // 13 = 1 mod 3
        assert_eq!(dash(&rat(7, 6), 11).unwrap(), rat(5, 6)); // 11 = 2 mod 3
        for p in [3u64, 5, 7, 11] {
            assert_eq!(dash(&rat(1, 2), p).unwrap(), rat(1, 2));
        }
        // identity r'p - r = [-r]_0
        for (n, d) in [(1i64, 3i64), (2, 5), (7, 6), (-1, 4), (11, 15)] {
            for p in [7u64, 11, 13, 17] {
                if d % p as i64 != 0 {
                    let r = rat(n, d);
                    let lhs = dash(&r, p).unwrap() * rat(p as i64, 1) - &r;
                    assert_eq!(lhs, rat(first_digit(&-&r, p).unwrap() as i64, 1));
                }
            }
        }
    }

    #[test]
    fn a0_examples() {
        assert_eq!(a0(&rat(1, 1), 7).unwrap(), 1);
        assert_eq!(a0(&rat(0, 1), 7).unwrap(), 7);
        for (n, d) in [(1i64, 2i64), (5, 6), (3, 4)] {
            let x = rat(n, d);
            assert_eq!(a0(&x, 11).unwrap(), first_digit(&x, 11).unwrap());
        }
    }

    #[test]
    fn teichmuller_basics() {
        assert_eq!(teichmuller(1, 7, 4).unwrap(), PadicNumber::one(7, 4));
        // omega(p-1) = -1
        let w = teichmuller(6, 7, 4).unwrap();
        let minus_one = PadicNumber::from_i64(-1, 7, 4);
        assert!(w.congruent_mod(&minus_one, 4).unwrap());
        for p in [3u64, 5, 7, 11, 13, 31] {
            for x in 1..p.min(12) {
                for n in 1..=6 {
                    let w = teichmuller(x, p, n).unwrap();
                    let one = PadicNumber::one(p, n);
                    assert!(w.pow((p - 1) as i64).unwrap().congruent_mod(&one, n).unwrap());
                    assert_eq!(w.residue_mod(1).unwrap(), x % p);
                }
            }
        }
    }

    #[test]
    fn arithmetic_precision_tracking() {
        let p = 5;
        let a = PadicNumber::from_rational(&rat(7, 3), p, 6);
        let b = PadicNumber::from_rational(&rat(-7, 3), p, 6);
        let s = a.add(&b);
        assert!(s.is_zero_at_precision());
        assert_eq!(s.abs_prec(), 6);
        // division by p lowers valuation, keeps relative precision
        let c = PadicNumber::from_rational(&rat(1, 5), p, 6);
        let d = a.mul(&c);
        assert_eq!(d.valuation(), Some(-1));
        assert_eq!(d.abs_prec(), 5);
        // exact rational identity survives the p-adic route
        let x = rat(22, 7) * rat(-3, 11);
        let xa = PadicNumber::from_rational(&rat(22, 7), p, 8);
        let xb = PadicNumber::from_rational(&rat(-3, 11), p, 8);
        let prod = xa.mul(&xb);
        let direct = PadicNumber::from_rational(&x, p, prod.abs_prec());
        assert!(prod.congruent_mod(&direct, prod.abs_prec()).unwrap());
        // comparisons beyond guaranteed precision fail loudly
        assert!(matches!(
            prod.congruent_mod(&direct, 20),
            Err(Error::Precision { .. })
        ));
    }

    #[test]
    fn dash_orbit_properties() {
        // dash orbits of r in (0,1) with denominator prime to p stay in (0,1)
        // and are finite; exhaustive for d <= 60, p < 100
        let primes: Vec<u64> = (2..100).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
        for d in 2..=60i64 {
            for num in 1..d {
                if num.gcd(&d) != 1 {
                    continue;
                }
                let r0 = rat(num, d);
                for &p in &primes {
                    if d % p as i64 == 0 {
                        continue;
                    }
                    let mut seen = std::collections::HashSet::new();
                    let mut r = r0.clone();
                    while seen.insert(r.clone()) {
                        r = dash(&r, p).unwrap();
                        assert!(r > rat(0, 1) && r < rat(1, 1), "orbit left (0,1)");
                    }
                }
            }
        }
    }
}
