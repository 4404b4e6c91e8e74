//! Truncated hypergeometric sums over exact rationals and p-adics.
//!
//! The central object is
//!
//! ```text
//!   F(alpha, beta; lambda)_m = sum_{k=0}^{m} lambda^k
//!       prod_i (a_i)_k / prod_i (b_i)_k
//! ```
//!
//! with `(x)_k` the rising factorial. The `beta` multiset carries its
//! trailing 1 explicitly, so no implicit `k!` is inserted. A vanishing
//! numerator factor terminates the sum; a vanishing denominator factor
//! that is not preceded by one is a genuine pole and is reported as an
//! error.
//!
//! The p-adic variant tracks every term exactly as `unit * p^val` with
//! the unit carried modulo `p^M`; the returned [`PadicNumber`] therefore
//! knows its guaranteed absolute precision, and the working modulus is
//! enlarged automatically until the requested precision is met.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::datum::HypergeometricDatum;
use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::rational::{checked_pow_u64, rational_val_unit, Rational};

/// Rising factorial (a)_k = a (a+1) ... (a+k-1).
pub fn pochhammer(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc *= &x;
        x += Rational::one();
    }
    acc
}

/// Exact truncation sum_{k<=m} lambda^k prod (a_i)_k / prod (b_i)_k.
pub fn sum_ratio(
    upper: &[Rational],
    lower: &[Rational],
    lambda: &Rational,
    m: u64,
) -> Result<Rational> {
    let mut sum = Rational::one();
    let mut term = Rational::one();
    for k in 1..=m {
        let step = Rational::from(BigInt::from(k as i64 - 1));
        let mut num = lambda.clone();
        for a in upper {
            num *= a + &step;
        }
        let mut den = Rational::one();
        for b in lower {
            let f = b + &step;
            if f.is_zero() {
                if num.is_zero() {
                    return Ok(sum); // terminated before the pole
                }
                return Err(Error::SeriesPole { b: b.clone(), k });
            }
            den *= f;
        }
        if num.is_zero() {
            return Ok(sum); // terminating series
        }
        term *= num / den;
        sum += &term;
    }
    Ok(sum)
}

/// F(alpha, beta; lambda)_m over the exact rationals.
pub fn truncated_f(datum: &HypergeometricDatum, m: u64) -> Result<Rational> {
    sum_ratio(
        datum.alpha().as_slice(),
        datum.beta().as_slice(),
        datum.lambda(),
        m,
    )
}

/// p-adic truncation with guaranteed precision at least p^prec.
///
/// Individual terms may have negative valuation (a lower parameter can
/// vanish mod p before the truncation point), so meeting an absolute
/// target requires working headroom; it is grown geometrically until the
/// result's tracked precision reaches `prec`.
pub fn sum_ratio_padic(
    upper: &[Rational],
    lower: &[Rational],
    lambda: &Rational,
    m: u64,
    p: u64,
    prec: i64,
) -> Result<PadicNumber> {
    let mut slack = 4i64;
    loop {
        let rel = prec + slack;
        if checked_pow_u64(p, rel as u32).is_none() {
            return Err(Error::Precision { needed: prec, guaranteed: prec + slack / 2 });
        }
        match sum_ratio_padic_fixed(upper, lower, lambda, m, p, rel)? {
            r if r.abs_prec() >= prec => return Ok(r),
            _ => slack *= 2,
        }
    }
}

fn sum_ratio_padic_fixed(
    upper: &[Rational],
    lower: &[Rational],
    lambda: &Rational,
    m: u64,
    p: u64,
    rel: i64,
) -> Result<PadicNumber> {
    let modulus = checked_pow_u64(p, rel as u32).unwrap();
    let (lv, lu) = if lambda.is_zero() {
        (0, 0)
    } else {
        rational_val_unit(lambda, p, modulus)
    };
    let mut sum = PadicNumber::one(p, rel);
    // running term as exact (valuation, unit mod p^rel)
    let mut tval = 0i64;
    let mut tunit = 1u64;
    for k in 1..=m {
        let step = Rational::from(BigInt::from(k as i64 - 1));
        let mut terminated = false;
        let mut fval = lv;
        let mut funit = lu;
        for a in upper {
            let f = a + &step;
            if f.is_zero() {
                terminated = true;
                break;
            }
            let (v, u) = rational_val_unit(&f, p, modulus);
            fval += v;
            funit = crate::rational::mul_mod(funit, u, modulus);
        }
        if terminated || lambda.is_zero() {
            break;
        }
        for b in lower {
            let f = b + &step;
            if f.is_zero() {
                return Err(Error::SeriesPole { b: b.clone(), k });
            }
            let (v, u) = rational_val_unit(&f, p, modulus);
            fval -= v;
            funit = crate::rational::mul_mod(funit, crate::rational::inv_mod(u, modulus), modulus);
        }
        tval += fval;
        tunit = crate::rational::mul_mod(tunit, funit, modulus);
        sum = sum.add(&PadicNumber::from_unit(p, tunit, tval, rel));
    }
    Ok(sum)
}

/// F(alpha, beta; lambda)_m as a p-adic value known mod at least p^prec.
pub fn truncated_f_padic(
    datum: &HypergeometricDatum,
    m: u64,
    p: u64,
    prec: i64,
) -> Result<PadicNumber> {
    sum_ratio_padic(
        datum.alpha().as_slice(),
        datum.beta().as_slice(),
        datum.lambda(),
        m,
        p,
        prec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(1, 1), 5), rat(120, 1));
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8)); // 1/2 * 3/2 * 5/2
        assert_eq!(pochhammer(&rat(-3, 1), 4), rat(0, 1));
        assert_eq!(pochhammer(&rat(-3, 1), 3), rat(-6, 1));
    }

    #[test]
    fn binomial_theorem() {
        // sum_k C(n,k) x^k = (1+x)^n via 1F0(-n; 1; -x) with the implicit
        // k! written as the lower parameter 1
        for n in 0..8i64 {
            for x in [rat(1, 1), rat(2, 3), rat(-1, 5)] {
                let f = sum_ratio(&[rat(-n, 1)], &[rat(1, 1)], &(-&x), 40).unwrap();
                let mut expect = Rational::one();
                for _ in 0..n {
                    expect *= rat(1, 1) + &x;
                }
                assert_eq!(f, expect, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn chu_vandermonde() {
        // 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
        for n in 0..7u64 {
            for (b, c) in [(rat(1, 2), rat(1, 3)), (rat(2, 5), rat(7, 4)), (rat(-1, 2), rat(5, 6))] {
                let f = sum_ratio(
                    &[rat(-(n as i64), 1), b.clone()],
                    &[c.clone(), rat(1, 1)],
                    &rat(1, 1),
                    50,
                )
                .unwrap();
                let expect = pochhammer(&(&c - &b), n) / pochhammer(&c, n);
                assert_eq!(f, expect, "n={n} b={b} c={c}");
            }
        }
    }

    #[test]
    fn pole_detection() {
        // lower parameter -2 hits zero at k = 3 with no earlier numerator zero
        let r = sum_ratio(&[rat(1, 2)], &[rat(-2, 1)], &rat(1, 1), 10);
        assert!(matches!(r, Err(Error::SeriesPole { .. })));
        // numerator terminates first: -1 kills the series at k = 2
        let r = sum_ratio(&[rat(-1, 1)], &[rat(-2, 1)], &rat(1, 1), 10).unwrap();
        assert_eq!(r, rat(1, 1) + rat(-1, 1) / rat(-2, 1));
    }

    #[test]
    fn padic_matches_exact() {
        let datum: HypergeometricDatum =
            "alpha=1/2,1/2,1/2; beta=1,1,1; lambda=1".parse().unwrap();
        for p in [5u64, 7, 11, 13] {
            for m in [p - 1, p * p - 1, 3 * p] {
                let exact = truncated_f(&datum, m).unwrap();
                let padic = truncated_f_padic(&datum, m, p, 6).unwrap();
                let direct = PadicNumber::from_rational(&exact, p, 6);
                assert!(
                    padic.truncate(6).congruent_mod(&direct, 6).unwrap(),
                    "p={p} m={m}"
                );
            }
        }
    }

    #[test]
    fn padic_handles_negative_valuation_terms() {
        // beta entry 1/6 makes (1/6)_k divisible by p for some k < p,
        // so single terms drop below Z_p while the routine still must
        // certify the requested precision
        let datum: HypergeometricDatum =
            "alpha=1/2,1/3,2/3; beta=1,1/6,5/6; lambda=1".parse().unwrap();
        for p in [7u64, 11, 13] {
            let exact = truncated_f(&datum, p - 1).unwrap();
            let padic = truncated_f_padic(&datum, p - 1, p, 4).unwrap();
            let direct = PadicNumber::from_rational(&exact, p, padic.abs_prec().min(4));
            assert!(padic.congruent_mod(&direct, 4).unwrap(), "p={p}");
        }
    }
}
