//! Hypergeometric data: rational multisets, the datum {alpha, beta; lambda},
//! and its structural predicates.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic;
use crate::rational::{frac_part, is_integer, lcm_denoms, parse_rational, rat, Rational};

/// A multiset of rationals, canonicalized as a sorted list of reduced
/// fractions so that equality and hashing are deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multiset(Vec<Rational>);

impl Multiset {
    pub fn new(mut entries: Vec<Rational>) -> Self {
        entries.sort();
        Multiset(entries)
    }

    pub fn from_i64_pairs(pairs: &[(i64, i64)]) -> Self {
        Multiset::new(pairs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Elementwise map, re-canonicalized.
    pub fn map(&self, f: impl FnMut(&Rational) -> Rational) -> Multiset {
        Multiset::new(self.0.iter().map(f).collect())
    }

    /// Multiset of fractional parts.
    pub fn frac_parts(&self) -> Multiset {
        self.map(frac_part)
    }

    pub fn lcm_denominator(&self) -> BigUint {
        lcm_denoms(self.0.iter())
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The least common denominator M(alpha, beta; lambda).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level(pub BigUint);

/// A hypergeometric datum {alpha, beta; lambda} with |alpha| = |beta| = n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HypergeometricDatum {
    alpha: Multiset,
    beta: Multiset,
    lambda: Rational,
}

impl HypergeometricDatum {
    pub fn new(alpha: Multiset, beta: Multiset, lambda: Rational) -> Result<Self> {
        if alpha.len() != beta.len() || alpha.is_empty() {
            return Err(Error::Invalid(format!(
                "|alpha| = {} and |beta| = {} must be equal and >= 1",
                alpha.len(),
                beta.len()
            )));
        }
        Ok(HypergeometricDatum { alpha, beta, lambda })
    }

    /// Like [`Self::new`] but reduces every alpha entry to its fractional
    /// part. Beta entries are kept as given (breve-shifted parameters such
    /// as 7/6 must survive).
    pub fn new_normalized(alpha: Multiset, beta: Multiset, lambda: Rational) -> Result<Self> {
        Self::new(alpha.frac_parts(), beta, lambda)
    }

    pub fn from_pairs(alpha: &[(i64, i64)], beta: &[(i64, i64)], lambda: (i64, i64)) -> Self {
        HypergeometricDatum::new(
            Multiset::from_i64_pairs(alpha),
            Multiset::from_i64_pairs(beta),
            rat(lambda.0, lambda.1),
        )
        .expect("static datum")
    }

    pub fn alpha(&self) -> &Multiset {
        &self.alpha
    }

    pub fn beta(&self) -> &Multiset {
        &self.beta
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Same alpha and lambda, different beta.
    pub fn with_beta(&self, beta: Multiset) -> Result<Self> {
        HypergeometricDatum::new(self.alpha.clone(), beta, self.lambda.clone())
    }

    pub fn with_lambda(&self, lambda: Rational) -> Self {
        HypergeometricDatum {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            lambda,
        }
    }
}

impl fmt::Debug for HypergeometricDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{:?},{:?};{}}}",
            self.alpha, self.beta, self.lambda
        )
    }
}

impl fmt::Display for HypergeometricDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={}; beta={}; lambda={}",
            self.alpha, self.beta, self.lambda
        )
    }
}

impl std::str::FromStr for HypergeometricDatum {
    type Err = Error;

    /// Parses the CLI/fixture text format, e.g.
    /// `alpha=1/2,1/2,1/3,2/3; beta=1,1,7/6,5/6; lambda=1`
    /// (whitespace-insensitive; `lambda` defaults to 1 when omitted).
    fn from_str(s: &str) -> Result<Self> {
        let mut alpha = None;
        let mut beta = None;
        let mut lambda = Rational::one();
        for field in s.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in `{field}`")))?;
            let values: Result<Vec<Rational>> =
                value.split(',').map(parse_rational).collect();
            match key.trim() {
                "alpha" => alpha = Some(Multiset::new(values?)),
                "beta" => beta = Some(Multiset::new(values?)),
                "lambda" => {
                    let v = values?;
                    if v.len() != 1 {
                        return Err(Error::Parse("lambda must be a single rational".into()));
                    }
                    lambda = v.into_iter().next().unwrap();
                }
                other => return Err(Error::Parse(format!("unknown field `{other}`"))),
            }
        }
        let alpha = alpha.ok_or_else(|| Error::Parse("missing alpha".into()))?;
        let beta = beta.ok_or_else(|| Error::Parse("missing beta".into()))?;
        HypergeometricDatum::new(alpha, beta, lambda)
    }
}

/// lcm of all denominators occurring in the datum.
pub fn lcm_denominator(d: &HypergeometricDatum) -> Level {
    let m = lcm_denoms(
        d.alpha
            .iter()
            .chain(d.beta.iter())
            .chain(std::iter::once(d.lambda())),
    );
    Level(m)
}

/// True iff p does not divide M(alpha, beta; lambda).
pub fn is_good_prime(d: &HypergeometricDatum, p: u64) -> bool {
    !(&lcm_denominator(d).0 % BigUint::from(p)).is_zero()
}

/// Galois stability of the fractional parts: the multiset {a_i} is fixed by
/// a -> {t a} for every t coprime to the common denominator. Equivalent to
/// prod (X - e^{2 pi i a_i}) having integer coefficients.
pub fn is_defined_over_q(s: &Multiset) -> bool {
    let fracs = s.frac_parts();
    let d = fracs.lcm_denominator();
    let d: u64 = match d.to_u64_digits().as_slice() {
        [] => 1,
        [d] => *d,
        _ => return false, // astronomically large denominator, not our domain
    };
    for t in 2..d {
        if BigUint::from(t).gcd(&BigUint::from(d)).is_one() {
            let image = fracs.map(|a| frac_part(&(a * rat(t as i64, 1))));
            if image != fracs {
                return false;
            }
        }
    }
    true
}

/// Condition (diamond): 0 <= a_i < 1, 0 < b_j <= 1, both multisets defined
/// over Q, and a_i - b_j never an integer.
pub fn satisfies_diamond(d: &HypergeometricDatum) -> bool {
    let zero = Rational::zero();
    let one = Rational::one();
    if !d.alpha.iter().all(|a| *a >= zero && *a < one) {
        return false;
    }
    if !d.beta.iter().all(|b| *b > zero && *b <= one) {
        return false;
    }
    if !is_defined_over_q(&d.alpha) || !is_defined_over_q(&d.beta) {
        return false;
    }
    for a in d.alpha.iter() {
        for b in d.beta.iter() {
            if is_integer(&(a - b)) {
                return false;
            }
        }
    }
    true
}

/// Elementwise image of a multiset under the Dwork dash operation.
pub fn dash_image(s: &Multiset, p: u64) -> Result<Multiset> {
    let mut out = Vec::with_capacity(s.len());
    for a in s.iter() {
        out.push(padic::dash(a, p)?);
    }
    Ok(Multiset::new(out))
}

/// The paper's named Magma data H1, H2, H5, H6, H7, H8.
pub fn named_datum(name: &str) -> Option<HypergeometricDatum> {
    let d = match name {
        "H1" => HypergeometricDatum::from_pairs(
            &[(1, 2), (1, 2), (1, 2), (1, 2), (1, 3), (2, 3)],
            &[(1, 1), (1, 1), (1, 1), (1, 1), (1, 6), (5, 6)],
            (1, 1),
        ),
        "H2" => HypergeometricDatum::from_pairs(
            &[(1, 2), (1, 2), (1, 3), (2, 3)],
            &[(1, 1), (1, 1), (1, 1), (1, 1)],
            (1, 1),
        ),
        "H5" => HypergeometricDatum::from_pairs(
            &[(1, 2), (1, 2), (1, 2), (1, 2), (1, 2)],
            &[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1)],
            (-1, 1),
        ),
        "H6" => HypergeometricDatum::from_pairs(
            &[(1, 2), (1, 2), (1, 2)],
            &[(1, 1), (1, 1), (1, 1)],
            (1, 1),
        ),
        "H7" => HypergeometricDatum::from_pairs(
            &[(1, 2), (1, 2), (1, 2), (1, 3), (2, 3)],
            &[(1, 1), (1, 1), (1, 1), (1, 6), (5, 6)],
            (-1, 1),
        ),
        "H8" => HypergeometricDatum::from_pairs(
            &[(1, 2), (1, 3), (2, 3)],
            &[(1, 1), (1, 1), (1, 1)],
            (1, 1),
        ),
        _ => return None,
    };
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(pairs: &[(i64, i64)]) -> Multiset {
        Multiset::from_i64_pairs(pairs)
    }

    #[test]
    fn lcm_denominator_examples() {
        let d = named_datum("H1").unwrap();
        assert_eq!(lcm_denominator(&d).0, BigUint::from(6u32));
        let d = HypergeometricDatum::from_pairs(&[(1, 2)], &[(1, 1)], (1, 1));
        assert_eq!(lcm_denominator(&d).0, BigUint::from(2u32));
        let d = HypergeometricDatum::from_pairs(
            &[(1, 5), (2, 5), (3, 5), (4, 5)],
            &[(1, 1), (1, 1), (1, 1), (1, 1)],
            (1, 1),
        );
        assert_eq!(lcm_denominator(&d).0, BigUint::from(5u32));
    }

    #[test]
    fn defined_over_q_examples() {
        assert!(is_defined_over_q(&ms(&[(1, 5), (2, 5), (3, 5), (4, 5)])));
        assert!(is_defined_over_q(&ms(&[(1, 2)])));
        assert!(!is_defined_over_q(&ms(&[(1, 2), (1, 2), (3, 4)])));
        assert!(is_defined_over_q(&ms(&[(1, 1), (1, 1)])));
        assert!(!is_defined_over_q(&ms(&[(1, 5), (2, 5)])));
        // breve beta with an entry 7/6: fractional parts {1/6, 5/6, 0, 0}
        assert!(is_defined_over_q(&ms(&[(7, 6), (5, 6), (1, 1), (1, 1)])));
    }

    #[test]
    fn diamond_examples() {
        assert!(satisfies_diamond(&named_datum("H1").unwrap()));
        let bad = HypergeometricDatum::from_pairs(&[(1, 2)], &[(1, 2)], (1, 1));
        assert!(!satisfies_diamond(&bad));
        let bad = HypergeometricDatum::from_pairs(&[(3, 2)], &[(1, 1)], (1, 1));
        assert!(!satisfies_diamond(&bad));
    }

    #[test]
    fn dash_image_examples() {
        let s = ms(&[(1, 2), (1, 2)]);
        assert_eq!(dash_image(&s, 7).unwrap(), s);
        let s = ms(&[(1, 6), (5, 6)]);
        assert_eq!(dash_image(&s, 7).unwrap(), s); // 7 = 1 mod 3
        assert_eq!(dash_image(&s, 11).unwrap(), s); // defined over Q: closed anyway
        assert!(dash_image(&s, 3).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        let d: HypergeometricDatum = "alpha = 1/2, 1/2 ; beta = 1, 7/6 ; lambda = -1"
            .parse()
            .unwrap();
        assert_eq!(d.alpha(), &ms(&[(1, 2), (1, 2)]));
        assert_eq!(d.beta(), &ms(&[(1, 1), (7, 6)]));
        assert_eq!(d.lambda(), &rat(-1, 1));
        let roundtrip: HypergeometricDatum = d.to_string().parse().unwrap();
        assert_eq!(roundtrip, d);
        assert!("beta=1".parse::<HypergeometricDatum>().is_err());
    }

    /// Small-case oracle: is_defined_over_q must agree with exact expansion
    /// of prod (X - zeta^{d a_i}) in Z[zeta_d] represented mod the
    /// cyclotomic polynomial Phi_d.
    #[test]
    fn cyclotomic_oracle_agreement() {
        // integer polynomial arithmetic, dense, little-endian
        fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
            let mut out = vec![0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        // exact division, panics on nonzero remainder
        fn poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
            let mut rem = num.to_vec();
            let dl = den.len();
            let lead = *den.last().unwrap();
            let mut q = vec![0i64; rem.len() - dl + 1];
            for i in (0..q.len()).rev() {
                let c = rem[i + dl - 1] / lead;
                assert_eq!(c * lead, rem[i + dl - 1]);
                q[i] = c;
                for (j, dj) in den.iter().enumerate() {
                    rem[i + j] -= c * dj;
                }
            }
            assert!(rem.iter().all(|&c| c == 0));
            q
        }
        fn cyclotomic(d: u64, memo: &mut std::collections::HashMap<u64, Vec<i64>>) -> Vec<i64> {
            if let Some(p) = memo.get(&d) {
                return p.clone();
            }
            // x^d - 1
            let mut num = vec![0i64; d as usize + 1];
            num[0] = -1;
            num[d as usize] = 1;
            let mut den = vec![1i64];
            for e in 1..d {
                if d % e == 0 {
                    den = poly_mul(&den, &cyclotomic(e, memo));
                }
            }
            let phi = poly_div(&num, &den);
            memo.insert(d, phi.clone());
            phi
        }
        // element of Z[zeta_d]: coefficients mod Phi_d
        fn reduce(mut v: Vec<i64>, phi: &[i64]) -> Vec<i64> {
            let deg = phi.len() - 1;
            while v.len() > deg {
                let c = v.pop().unwrap();
                if c != 0 {
                    let k = v.len() - deg;
                    for (j, pj) in phi.iter().take(deg).enumerate() {
                        v[k + j] -= c * pj;
                    }
                }
            }
            v
        }

        let mut memo = std::collections::HashMap::new();
        let cases: Vec<Vec<(i64, i64)>> = vec![
            vec![(1, 5), (2, 5), (3, 5), (4, 5)],
            vec![(1, 2), (1, 2), (3, 4)],
            vec![(1, 2)],
            vec![(1, 3), (2, 3)],
            vec![(1, 3), (1, 3)],
            vec![(1, 6), (5, 6), (1, 2)],
            vec![(1, 12), (5, 12), (7, 12), (11, 12)],
            vec![(1, 12), (5, 12)],
            vec![(1, 4), (3, 4), (1, 6), (5, 6)],
            vec![(1, 8), (3, 8)],
            vec![(1, 1), (1, 2), (1, 2)],
            vec![(2, 9), (1, 3)],
        ];
        for pairs in cases {
            let s = ms(&pairs);
            let fracs = s.frac_parts();
            let d_big = fracs.lcm_denominator();
            let d = d_big.to_u64_digits().first().copied().unwrap_or(1).max(1);
            let phi = cyclotomic(d, &mut memo);
            let deg = phi.len() - 1;
            // product of (X - zeta^{d*a_i}); coefficients are elements of Z[zeta]
            let mut coeffs: Vec<Vec<i64>> = vec![vec![0; deg]];
            coeffs[0][0] = 1; // constant polynomial 1 in X
            for a in fracs.iter() {
                let k = (a * rat(d as i64, 1)).to_integer();
                let k: u64 = (k.magnitude() % BigUint::from(d))
                    .to_u64_digits()
                    .first()
                    .copied()
                    .unwrap_or(0);
                let mut zeta_k = vec![0i64; k as usize + 1];
                zeta_k[k as usize] = 1;
                let zeta_k = reduce(zeta_k, &phi);
                // multiply polynomial in X by (X - zeta^k)
                let mut next = vec![vec![0i64; deg]; coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    for (j, v) in c.iter().enumerate() {
                        next[i + 1][j] += v;
                    }
                    let prod = reduce(poly_mul(c, &zeta_k), &phi);
                    for (j, v) in prod.iter().enumerate() {
                        next[i][j] -= v;
                    }
                }
                coeffs = next;
            }
            let integral = coeffs
                .iter()
                .all(|c| c.iter().skip(1).all(|&v| v == 0));
            assert_eq!(
                is_defined_over_q(&s),
                integral,
                "cyclotomic oracle disagrees on {s:?}"
            );
        }
    }
}
