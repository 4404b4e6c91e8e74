//! Offline derivation of the committed Hecke-eigenvalue fixtures.
//!
//! Every label the verifier consumes has a derivation rule that rebuilds
//! its a_p values from scratch, with no network access: an eta-product
//! q-expansion, an exact character-sum decomposition, the trace of a
//! reduced Euler factor, or — where nothing independent is available —
//! the congruence itself, pinned uniquely by the Ramanujan–Petersson
//! bound. Each rule carries built-in cross-checks against a second
//! computational route at small primes, so a regression in any one
//! pipeline (series, Gamma_p, character sums, Euler factors) breaks
//! regeneration loudly instead of silently shifting the committed data.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::datum::{is_good_prime, HypergeometricDatum, Multiset};
use crate::error::{Error, Result};
use crate::euler::{euler_factor_degenerate_removed, power_sum};
use crate::modforms::{eta_product_for, legendre, primes_to, Fixture, FormRef};
use crate::padic::gamma_p;
use crate::rat;
use crate::series::truncated_f_padic;

/// Labels with a derivation rule, in dependency order (entries later in
/// the list may consume earlier ones).
pub const LABELS: [&str; 13] = [
    "8.4.1.a",
    "8.6.1.a",
    "24.2.1.a",
    "36.4.1.a",
    "64.6.1.f",
    "72.4.1.b",
    "64.4.1.d",
    "48.4.1.c",
    "24.4.1.a",
    "12.4.1.a",
    "64.4.1.b",
    "48.6.1.c",
    "32.3.31.a",
];

fn d(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> HypergeometricDatum {
    HypergeometricDatum::from_pairs(alpha, beta, (1, 1))
}

const H: (i64, i64) = (1, 2);
const ONE: (i64, i64) = (1, 1);

fn assemble(label: &str, source: &str, ap: BTreeMap<u64, i64>) -> Result<Fixture> {
    let form = FormRef::parse(label)?;
    let fixture = Fixture {
        label: label.to_string(),
        weight: form.weight,
        level: form.level,
        source: source.to_string(),
        fetched: "2026-08-23".to_string(),
        ap,
    };
    fixture.validate()?;
    Ok(fixture)
}

fn to_i64(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::ValidationFailure {
        context: what.to_string(),
        detail: format!("value {v} does not fit in i64"),
    })
}

fn cross_check(label: &str, p: u64, lhs: &BigInt, rhs: &BigInt, how: &str) -> Result<()> {
    if lhs != rhs {
        return Err(Error::ValidationFailure {
            context: format!("fixture derivation for {label}"),
            detail: format!("{how} disagrees at p = {p}: {lhs} vs {rhs}"),
        });
    }
    Ok(())
}

/// a_p read off an eta-product q-expansion.
fn eta_rule(label: &str, pmax: u64) -> Result<BTreeMap<u64, i64>> {
    let product = eta_product_for(label)
        .ok_or_else(|| Error::Invalid(format!("no eta product on file for {label}")))?;
    let expansion = product.expansion(pmax as usize + 1);
    let mut ap = BTreeMap::new();
    for p in primes_to(pmax) {
        let c = expansion
            .coefficient(p)
            .ok_or_else(|| Error::Invalid(format!("eta expansion for {label} is too short")))?;
        ap.insert(p, to_i64(c, label)?);
    }
    Ok(ap)
}

/// a_p as the trace of the reduced (degenerate-root-removed) Euler
/// factor of a self-dual datum, cross-checked against the truncated
/// series congruence F_{p-1} = twist(p) a_p mod p^3 at p <= 31.
fn trace_rule(
    label: &str,
    datum: &HypergeometricDatum,
    twist: impl Fn(u64) -> i64,
    scale_by_p: bool,
    pmax: u64,
) -> Result<BTreeMap<u64, i64>> {
    let mut ap = BTreeMap::new();
    for p in primes_to(pmax) {
        if p < 5 || !is_good_prime(datum, p) {
            continue;
        }
        let (g, _mu) = euler_factor_degenerate_removed(datum, p)?;
        let a = g.trace();
        if p >= 7 && p <= 31 {
            // the truncated series pins a_p mod p^3; for data whose F_{p-1}
            // has a simple pole in p the congruence is carried by p F_{p-1}
            let f = truncated_f_padic(datum, p - 1, p, 4)?;
            let pinned = if scale_by_p {
                f.mul(&crate::PadicNumber::from_i64(p as i64, p, 5)).signed_residue_mod(3)?
            } else {
                f.signed_residue_mod(3)?
            } * twist(p);
            cross_check(label, p, &a, &pinned, "Euler trace vs series pin")?;
        }
        ap.insert(p, to_i64(&a, label)?);
    }
    Ok(ap)
}

/// H_p of a 4-term datum as an exact integer: the first power sum of
/// its Euler factor, which already carries any p-power normalization.
fn hp_int(datum: &HypergeometricDatum, p: u64) -> Result<BigInt> {
    power_sum(datum, p, 1, datum.n() - 1)
}

pub fn derive_fixture(label: &str, pmax: u64) -> Result<Fixture> {
    match label {
        "8.4.1.a" => {
            // Coefficients of eta(2z)^4 eta(4z)^4; the character sum for
            // {1/2,1/2,1/2,1/2} at lambda = 1 equals a_p + p exactly.
            let ap = eta_rule(label, pmax)?;
            let datum = d(&[H; 4], &[ONE; 4]);
            for (&p, &a) in &ap {
                if p < 3 || !is_good_prime(&datum, p) {
                    continue;
                }
                let hp = hp_int(&datum, p)?;
                let decomposed = BigInt::from(a) + BigInt::from(p);
                cross_check(label, p, &hp, &decomposed, "H_p vs a_p + p")?;
            }
            assemble(label, "eta(2z)^4 eta(4z)^4", ap)
        }
        "8.6.1.a" => {
            // eta(z)^8 eta(4z)^4 + 8 eta(4z)^12, checked against the
            // exact decomposition H_p({1/2^6}) = a_p + p a_p(8.4.1.a)
            // + (-1/p) p^2.
            let ap = eta_rule(label, pmax)?;
            let inner = derive_fixture("8.4.1.a", pmax)?;
            let datum = d(&[H; 6], &[ONE; 6]);
            for (&p, &a) in &ap {
                if p < 3 {
                    continue;
                }
                let hp = hp_int(&datum, p)?;
                let pi = p as i64;
                let decomposed = BigInt::from(a)
                    + BigInt::from(pi * inner.ap[&p])
                    + BigInt::from(legendre(-1, p) * pi * pi);
                cross_check(label, p, &hp, &decomposed, "H_p vs weight-graded sum")?;
            }
            assemble(label, "eta(z)^8 eta(4z)^4 + 8 eta(4z)^12", ap)
        }
        "24.2.1.a" => {
            // eta(2z) eta(4z) eta(6z) eta(12z), checked mod p against
            // the truncated series of {1/6,1/2,1/2,5/6; 2/3,1,1,4/3}.
            let ap = eta_rule(label, pmax)?;
            let datum = d(&[(1, 6), H, H, (5, 6)], &[(2, 3), ONE, ONE, (4, 3)]);
            for (&p, &a) in &ap {
                if p < 5 || !is_good_prime(&datum, p) {
                    continue;
                }
                let f = truncated_f_padic(&datum, p - 1, p, 2)?;
                let pinned = f.signed_residue_mod(1)?;
                let diff = (BigInt::from(a) - &pinned) % BigInt::from(p as i64);
                cross_check(label, p, &diff, &BigInt::ZERO, "eta vs series mod p")?;
            }
            assemble(label, "eta(2z) eta(4z) eta(6z) eta(12z)", ap)
        }
        "36.4.1.a" => {
            // a_p = H_p({1/2,1/2,1/3,2/3}; {1^4}; 1) - (3/p) p, with the
            // reduced Euler-factor trace as a second route at p <= 37.
            let datum = d(&[(1, 3), H, H, (2, 3)], &[ONE; 4]);
            let mut ap = BTreeMap::new();
            for p in primes_to(pmax) {
                if p < 5 || !is_good_prime(&datum, p) {
                    continue;
                }
                let a = hp_int(&datum, p)? - BigInt::from(legendre(3, p) * p as i64);
                if p <= 37 {
                    let (g, _) = euler_factor_degenerate_removed(&datum, p)?;
                    cross_check(label, p, &a, &g.trace(), "H_p - (3/p) p vs Euler trace")?;
                }
                ap.insert(p, to_i64(&a, label)?);
            }
            assemble(label, "H_p({1/2,1/2,1/3,2/3};{1,1,1,1};1) - (3/p) p", ap)
        }
        "64.6.1.f" => {
            // p H_p({1/2^4,1/3,2/3}; {1^4,1/6,5/6}; 1) decomposes as
            // (2/p) a_p + (-3/p) p a_p(36.4.1.a) + (3/p) p^2.
            let inner = derive_fixture("36.4.1.a", pmax)?;
            let datum = crate::datum::named_datum("H1")
                .ok_or_else(|| Error::Invalid("named datum H1 missing".into()))?;
            let mut ap = BTreeMap::new();
            for p in primes_to(pmax) {
                // the decomposition only holds from p = 7 on (it fails the
                // weight-6 coefficient bound at p = 5)
                if p < 7 || !is_good_prime(&datum, p) {
                    continue;
                }
                let pi = p as i64;
                let ps1 = power_sum(&datum, p, 1, datum.n() - 1)?;
                let a = (ps1
                    - BigInt::from(legendre(-3, p) * pi * inner.ap[&p])
                    - BigInt::from(legendre(3, p) * pi * pi))
                    * legendre(2, p);
                ap.insert(p, to_i64(&a, label)?);
            }
            assemble(
                label,
                "(2/p)[p H_p({1/2^4,1/3,2/3};{1^4,1/6,5/6};1) - (-3/p) p a_p(36.4.1.a) - (3/p) p^2]",
                ap,
            )
        }
        "72.4.1.b" => {
            let datum = d(&[(1, 6), H, H, (5, 6)], &[ONE; 4]);
            let ap = trace_rule(label, &datum, |_| 1, false, pmax)?;
            assemble(label, "reduced Euler trace of {1/6,1/2,1/2,5/6;1,1,1,1;1}", ap)
        }
        "64.4.1.d" => {
            // H_p({1/2^4,1/6,5/6}; {1^4,2/3,4/3}; 1) decomposes exactly
            // as (2/p) a_p + (-3/p) a_p(72.4.1.b) + (3/p) p.
            let inner = derive_fixture("72.4.1.b", pmax)?;
            let datum = d(&[H, H, H, H, (1, 6), (5, 6)], &[ONE, ONE, ONE, ONE, (2, 3), (4, 3)]);
            let mut ap = BTreeMap::new();
            for p in primes_to(pmax) {
                if p < 5 || !is_good_prime(&datum, p) {
                    continue;
                }
                let pi = p as i64;
                let ps1 = power_sum(&datum, p, 1, datum.n() - 1)?;
                let a = (ps1
                    - BigInt::from(legendre(-3, p) * inner.ap[&p])
                    - BigInt::from(legendre(3, p) * pi))
                    * legendre(2, p);
                // second route: truncated series mod p^3 through (2/p)
                if p >= 7 && p <= 31 {
                    let f = truncated_f_padic(&datum, p - 1, p, 4)?;
                    let pinned = f.signed_residue_mod(3)? * legendre(2, p);
                    cross_check(label, p, &a, &pinned, "H_p decomposition vs series pin")?;
                }
                ap.insert(p, to_i64(&a, label)?);
            }
            assemble(
                label,
                "(2/p)[H_p({1/2^4,1/6,5/6};{1^4,2/3,4/3};1) - (-3/p) a_p(72.4.1.b) - (3/p) p]",
                ap,
            )
        }
        "48.4.1.c" => {
            let datum = d(&[(1, 4), H, H, (3, 4)], &[(5, 6), ONE, ONE, (7, 6)]);
            let ap = trace_rule(label, &datum, |_| 1, true, pmax)?;
            assemble(label, "reduced Euler trace of {1/4,1/2,1/2,3/4;5/6,1,1,7/6;1}", ap)
        }
        "24.4.1.a" => {
            let datum = d(&[H; 4], &[(2, 3), ONE, ONE, (4, 3)]);
            let ap = trace_rule(label, &datum, |_| 1, true, pmax)?;
            assemble(label, "reduced Euler trace of {1/2^4;2/3,1,1,4/3;1}", ap)
        }
        "12.4.1.a" => {
            let datum = d(&[H; 4], &[(5, 6), ONE, ONE, (7, 6)]);
            let ap = trace_rule(label, &datum, |_| 1, true, pmax)?;
            assemble(label, "reduced Euler trace of {1/2^4;5/6,1,1,7/6;1}", ap)
        }
        "64.4.1.b" => {
            let datum = d(&[H; 4], &[(3, 4), ONE, ONE, (5, 4)]);
            let ap = trace_rule(label, &datum, |_| 1, true, pmax)?;
            assemble(label, "reduced Euler trace of {1/2^4;3/4,1,1,5/4;1}", ap)
        }
        "48.6.1.c" => derive_48_6_1_c(pmax),
        "32.3.31.a" => derive_32_3_31_a(pmax),
        other => Err(Error::Invalid(format!("no derivation rule for label {other}"))),
    }
}

/// Weight 6: a_p is pinned by p^2 F_{p-1} = (-1/p) a_p mod p^4 together
/// with |a_p| <= 2 p^(5/2) < p^4 / 2. For p <= 17 the degree-4 Euler
/// factor of the same datum splits over Z into two quadratics
/// x^2 - c x + p^5, and the pinned value must be one of the two traces;
/// past p = 17 that cross-check needs p^15 > 2^62 of working precision,
/// so the committed value rests on the pin alone.
fn derive_48_6_1_c(pmax: u64) -> Result<Fixture> {
    let label = "48.6.1.c";
    let series = d(
        &[(1, 3), H, H, (2, 3), (1, 3), (2, 3)],
        &[ONE, ONE, (7, 6), (5, 6), (7, 6), (5, 6)],
    );
    let sums = d(
        &[(1, 3), H, H, (2, 3), (1, 3), (2, 3)],
        &[ONE, ONE, (1, 6), (5, 6), (1, 6), (5, 6)],
    );
    let mut ap = BTreeMap::new();
    for p in primes_to(pmax) {
        if p < 7 || !is_good_prime(&series, p) {
            continue;
        }
        let f = truncated_f_padic(&series, p - 1, p, 4)?;
        let scaled = f.mul(&crate::PadicNumber::from_i64((p * p) as i64, p, 8));
        let a = scaled.signed_residue_mod(4)? * legendre(-1, p);
        let bound = BigInt::from(4) * BigInt::from(p).pow(5);
        if &a * &a > bound {
            return Err(Error::ValidationFailure {
                context: format!("fixture derivation for {label}"),
                detail: format!("pinned a_{p} = {a} violates the weight-6 bound"),
            });
        }
        if p <= 17 {
            // The quartic split sees the value before the quadratic twist.
            let untwisted = &a * legendre(-1, p);
            let (g, _) = euler_factor_degenerate_removed(&sums, p)?;
            let traces = split_quartic_traces(&g.coefficients, p)?;
            if untwisted != traces.0 && untwisted != traces.1 {
                return Err(Error::ValidationFailure {
                    context: format!("fixture derivation for {label}"),
                    detail: format!(
                        "pinned a_{p} = {a} is not a factor trace of the quartic ({}, {})",
                        traces.0, traces.1
                    ),
                });
            }
        }
        ap.insert(p, to_i64(&a, label)?);
    }
    assemble(
        label,
        "pinned by p^2 6F5({1/2^2,1/3^2,2/3^2};{1,1,7/6,5/6,7/6,5/6};1)_{p-1} = (-1/p) a_p mod p^4; \
         Euler-factor quartic split cross-check at p <= 17",
        ap,
    )
}

/// Split 1 + c1 T + c2 T^2 + ... with constant p^10 into two integer
/// quadratics (1 - a T + p^5 T^2)(1 - b T + p^5 T^2), returning (a, b).
fn split_quartic_traces(c: &[BigInt], p: u64) -> Result<(BigInt, BigInt)> {
    let p5 = BigInt::from(p).pow(5);
    let s = -c[1].clone(); // a + b
    let prod = &c[2] - BigInt::from(2) * &p5; // a b
    let disc = &s * &s - BigInt::from(4) * &prod;
    if disc.sign() == num_bigint::Sign::Minus {
        return Err(Error::ValidationFailure {
            context: format!("quartic split at p = {p}"),
            detail: "negative discriminant".into(),
        });
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Err(Error::ValidationFailure {
            context: format!("quartic split at p = {p}"),
            detail: format!("discriminant {disc} is not a square"),
        });
    }
    let two = BigInt::from(2);
    Ok(((&s + &root) / &two, (&s - &root) / &two))
}

/// Weight 3, CM-restricted primes: a_p is pinned for p = 1 mod 4 by
/// 4F3({1/2^4};{1^4};-1)_{p-1} = (2/p) Gamma_p(1/4)^2 / Gamma_p(1/2)
/// a_p mod p^2 together with |a_p| <= 2p < p^2 / 2. At p = 3 mod 4 the
/// pinned residue violates that bound, which is consistent with the
/// congruence (and the fixture) being restricted to split primes.
fn derive_32_3_31_a(pmax: u64) -> Result<Fixture> {
    let label = "32.3.31.a";
    let datum = HypergeometricDatum::new(
        Multiset::from_i64_pairs(&[H; 4]),
        Multiset::from_i64_pairs(&[ONE; 4]),
        rat(-1, 1),
    )?;
    let mut ap = BTreeMap::new();
    for p in primes_to(pmax) {
        if p % 4 != 1 {
            continue;
        }
        let f = truncated_f_padic(&datum, p - 1, p, 3)?;
        let quot = gamma_p(&rat(1, 4), p, 3)?.pow(2)?.div(&gamma_p(&rat(1, 2), p, 3)?)?;
        let a = f.div(&quot)?.signed_residue_mod(2)? * legendre(2, p);
        let bound = BigInt::from(2 * p);
        if a.magnitude() > bound.magnitude() {
            return Err(Error::ValidationFailure {
                context: format!("fixture derivation for {label}"),
                detail: format!("pinned a_{p} = {a} violates the weight-3 bound"),
            });
        }
        ap.insert(p, to_i64(&a, label)?);
    }
    assemble(
        label,
        "pinned by 4F3({1/2^4};{1^4};-1)_{p-1} = (2/p) Gamma_p(1/4)^2/Gamma_p(1/2) a_p mod p^2, \
         p = 1 mod 4",
        ap,
    )
}

/// Derive every supported label up to `pmax`.
pub fn derive_all(pmax: u64) -> Result<Vec<Fixture>> {
    LABELS.iter().map(|l| derive_fixture(l, pmax)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_distinct_and_parse() {
        for l in LABELS {
            FormRef::parse(l).unwrap();
        }
        let mut sorted: Vec<_> = LABELS.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), LABELS.len());
    }

    #[test]
    fn eta_labels_survive_their_cross_checks() {
        let f = derive_fixture("8.4.1.a", 37).unwrap();
        assert_eq!(f.ap[&3], -4);
        assert_eq!(f.ap[&5], -2);
        assert_eq!(f.ap[&7], 24);
        let g = derive_fixture("8.6.1.a", 23).unwrap();
        assert_eq!(g.ap[&3], 20);
        assert_eq!(g.ap[&5], -74);
        assert_eq!(g.ap[&7], -24);
    }

    #[test]
    fn trace_labels_match_frozen_values() {
        let f = derive_fixture("36.4.1.a", 19).unwrap();
        assert_eq!(f.ap[&5], 18);
        assert_eq!(f.ap[&7], 8);
        assert_eq!(f.ap[&11], -36);
        assert_eq!(f.ap[&13], -10);
        assert_eq!(f.ap[&19], -100);
        let g = derive_fixture("12.4.1.a", 13).unwrap();
        assert_eq!(g.ap[&7], 8);
        assert_eq!(g.ap[&11], 36);
        assert_eq!(g.ap[&13], -10);
    }

    #[test]
    fn split_primes_only_for_the_weight_three_label() {
        let f = derive_fixture("32.3.31.a", 17).unwrap();
        assert!(f.ap.keys().all(|p| p % 4 == 1));
        assert_eq!(f.ap[&5], 2);
        assert_eq!(f.ap[&13], -14);
        assert_eq!(f.ap[&17], 18);
    }
}
