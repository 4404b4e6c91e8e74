//! Modular-form coefficients: eta-product q-expansions, Legendre
//! symbols, and an offline-first fixture cache of Hecke eigenvalues.
//!
//! Coefficient lookup never computes anything silently: a value comes
//! either from a committed JSON fixture, from an explicit eta-product
//! expansion, or from a network source the caller passed in. Every
//! ingested eigenvalue is checked against the Ramanujan–Petersson bound
//! |a_p| <= 2 p^((k-1)/2) before it is trusted.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::pow_mod;

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i64 {
    debug_assert!(p % 2 == 1 && p > 1);
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// A q-expansion a_1 q + a_2 q^2 + ... truncated after `a.len()` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    /// a[i] is the coefficient of q^(i+1)
    pub a: Vec<BigInt>,
}

impl QExpansion {
    pub fn coefficient(&self, n: u64) -> Option<&BigInt> {
        if n == 0 {
            return None;
        }
        self.a.get((n - 1) as usize)
    }
}

/// An integer combination of eta products: sum of
/// `coeff * prod_j eta(m_j z)^(r_j)`.
///
/// Each summand must satisfy sum(m_j r_j) = 0 mod 24 so that its
/// expansion lives in integer powers of q = e^(2 pi i z).
#[derive(Clone, Debug)]
pub struct EtaProduct {
    pub summands: Vec<(BigInt, Vec<(u64, u32)>)>,
}

/// Coefficients of prod_{n>=1} (1 - x^n) up to x^bound, by the
/// pentagonal number theorem.
fn euler_function(bound: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(); bound + 1];
    f[0] = BigInt::one();
    let mut k: i64 = 1;
    loop {
        let mut hit = false;
        for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            let g = g as usize;
            if g <= bound {
                hit = true;
                if k % 2 == 1 {
                    f[g] -= 1;
                } else {
                    f[g] += 1;
                }
            }
        }
        if !hit {
            return f;
        }
        k += 1;
    }
}

fn poly_mul_trunc(a: &[BigInt], b: &[BigInt], bound: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); bound + 1];
    for (i, ai) in a.iter().enumerate().take(bound + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(bound + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

impl EtaProduct {
    pub fn new(summands: Vec<(BigInt, Vec<(u64, u32)>)>) -> Result<EtaProduct> {
        for (_, factors) in &summands {
            let wsum: i64 = factors.iter().map(|&(m, r)| (m * r as u64) as i64).sum();
            if wsum % 24 != 0 {
                return Err(Error::EtaWeight(wsum));
            }
        }
        Ok(EtaProduct { summands })
    }

    /// Parses a compact description like `"eta(z)^8 eta(4z)^4 + 8 eta(4z)^12"`.
    pub fn parse(s: &str) -> Result<EtaProduct> {
        let mut summands = Vec::new();
        for (i, term) in s.split('+').enumerate() {
            let term = term.trim();
            let mut coeff = BigInt::one();
            let mut factors = Vec::new();
            for piece in term.split_whitespace() {
                if let Some(rest) = piece.strip_prefix("eta(") {
                    let (inner, exp) = match rest.split_once(")^") {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|e| Error::Parse(e.to_string()))?),
                        None => (rest.trim_end_matches(')'), 1),
                    };
                    let m = if inner == "z" {
                        1
                    } else {
                        inner
                            .strip_suffix('z')
                            .ok_or_else(|| Error::Parse(format!("bad eta argument {inner}")))?
                            .parse::<u64>()
                            .map_err(|e| Error::Parse(e.to_string()))?
                    };
                    factors.push((m, exp));
                } else {
                    coeff = piece
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {piece} in term {i}")))?;
                }
            }
            summands.push((coeff, factors));
        }
        EtaProduct::new(summands)
    }

    /// Expands to a_1 q + ... + a_n q^n.
    pub fn expansion(&self, n: usize) -> QExpansion {
        let bound = n; // exponents of q up to n
        let euler = euler_function(bound);
        let mut total = vec![BigInt::zero(); bound + 1];
        for (coeff, factors) in &self.summands {
            let qpow: u64 = factors.iter().map(|&(m, r)| m * r as u64).sum::<u64>() / 24;
            let mut acc = vec![BigInt::zero(); bound + 1];
            acc[0] = BigInt::one();
            for &(m, r) in factors {
                // prod (1 - q^(m n)) as a series in q
                let mut em = vec![BigInt::zero(); bound + 1];
                for (e, c) in euler.iter().enumerate() {
                    if (e as u64) * m <= bound as u64 {
                        em[e * m as usize] = c.clone();
                    }
                }
                for _ in 0..r {
                    acc = poly_mul_trunc(&acc, &em, bound);
                }
            }
            for (e, c) in acc.iter().enumerate() {
                let shifted = e as u64 + qpow;
                if shifted <= bound as u64 && !c.is_zero() {
                    total[shifted as usize] += coeff * c;
                }
            }
        }
        QExpansion { a: total[1..].to_vec() }
    }
}

/// A parsed LMFDB-style newform label `level.weight.char.orbit`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormRef {
    pub label: String,
    pub level: u64,
    pub weight: u32,
}

impl FormRef {
    pub fn parse(label: &str) -> Result<FormRef> {
        let parts: Vec<&str> = label.split('.').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("malformed newform label {label}")));
        }
        let level = parts[0]
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad level in {label}")))?;
        let weight = parts[1]
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad weight in {label}")))?;
        Ok(FormRef { label: label.to_string(), level, weight })
    }
}

/// On-disk fixture: one modular form, its a_p values at the primes we
/// need, and a provenance note saying where the numbers came from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub source: String,
    pub fetched: String,
    pub ap: BTreeMap<u64, i64>,
}

impl Fixture {
    /// Ramanujan–Petersson: a_p^2 <= 4 p^(k-1) at every stored prime
    /// not dividing the level.
    pub fn validate(&self) -> Result<()> {
        for (&p, &a) in &self.ap {
            if self.level % p == 0 {
                continue;
            }
            let bound = BigInt::from(4) * BigInt::from(p).pow(self.weight - 1);
            if BigInt::from(a) * BigInt::from(a) > bound {
                return Err(Error::ValidationFailure {
                    context: format!("fixture {}", self.label),
                    detail: format!("a_{p} = {a} violates |a_p| <= 2 p^((k-1)/2)"),
                });
            }
        }
        Ok(())
    }
}

/// Anything that can produce a fixture for a label on demand. The
/// network client implements this; tests use a recorded stand-in.
pub trait ApSource {
    fn fetch(&self, label: &str) -> Result<Fixture>;
}

/// Directory-backed cache of fixtures, loaded lazily and kept in memory.
pub struct CoefficientCache {
    dir: PathBuf,
    loaded: Mutex<BTreeMap<String, Fixture>>,
}

impl CoefficientCache {
    pub fn open(dir: impl Into<PathBuf>) -> CoefficientCache {
        CoefficientCache { dir: dir.into(), loaded: Mutex::new(BTreeMap::new()) }
    }

    /// The committed fixture directory: `$HGC_FIXTURES` if set, else the
    /// `fixtures/` directory at the workspace root.
    pub fn default_dir() -> PathBuf {
        if let Ok(d) = std::env::var("HGC_FIXTURES") {
            return PathBuf::from(d);
        }
        let ws = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        if ws.is_dir() {
            return ws;
        }
        PathBuf::from("fixtures")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, label: &str) -> PathBuf {
        self.dir.join(format!("{label}.json"))
    }

    /// Loads (and validates) the fixture for `label` from disk if present.
    pub fn get(&self, label: &str) -> Result<Fixture> {
        if let Some(f) = self.loaded.lock().unwrap().get(label) {
            return Ok(f.clone());
        }
        let path = self.path_for(label);
        if !path.is_file() {
            return Err(Error::MissingFixture { label: label.to_string() });
        }
        let text = std::fs::read_to_string(&path)?;
        let fixture: Fixture =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if fixture.label != label {
            return Err(Error::ValidationFailure {
                context: format!("fixture file {}", path.display()),
                detail: format!("contains label {}", fixture.label),
            });
        }
        fixture.validate()?;
        self.loaded.lock().unwrap().insert(label.to_string(), fixture.clone());
        Ok(fixture)
    }

    /// Validates and writes a fixture to disk, then caches it.
    pub fn store(&self, fixture: &Fixture) -> Result<()> {
        fixture.validate()?;
        std::fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string_pretty(fixture).expect("fixture serializes");
        std::fs::write(self.path_for(&fixture.label), text + "\n")?;
        self.loaded.lock().unwrap().insert(fixture.label.clone(), fixture.clone());
        Ok(())
    }
}

/// Cache-first coefficient lookup. On a cache miss the optional
/// `source` is consulted and its (validated) answer is written back to
/// the cache; without a source the miss is an error, never a silent
/// zero.
pub fn fetch_ap(
    cache: &CoefficientCache,
    label: &str,
    p: u64,
    source: Option<&dyn ApSource>,
) -> Result<i64> {
    match cache.get(label) {
        Ok(f) => {
            if let Some(&a) = f.ap.get(&p) {
                return Ok(a);
            }
        }
        Err(Error::MissingFixture { .. }) => {}
        Err(e) => return Err(e),
    }
    let Some(source) = source else {
        return Err(Error::MissingFixture { label: label.to_string() });
    };
    let fixture = source.fetch(label)?;
    if fixture.label != label {
        return Err(Error::ValidationFailure {
            context: "fetched fixture".into(),
            detail: format!("asked for {label}, got {}", fixture.label),
        });
    }
    cache.store(&fixture)?;
    fixture
        .ap
        .get(&p)
        .copied()
        .ok_or_else(|| Error::MissingFixture { label: format!("{label} at p = {p}") })
}

#[cfg(feature = "network")]
pub mod lmfdb {
    //! Thin LMFDB API client. All parsing of the remote answer lives
    //! here so the rest of the crate only sees [`Fixture`]s.

    use super::{ApSource, Fixture};
    use crate::error::{Error, Result};
    use std::collections::BTreeMap;

    pub struct LmfdbClient {
        pub base: String,
    }

    impl Default for LmfdbClient {
        fn default() -> Self {
            LmfdbClient { base: "https://www.lmfdb.org".into() }
        }
    }

    impl LmfdbClient {
        /// Builds a fixture from the `traces` field of the newform API
        /// record; valid for rational (dimension 1) newforms, where the
        /// trace form is the form itself.
        pub fn fixture_from_record(label: &str, record: &serde_json::Value) -> Result<Fixture> {
            let weight = record["weight"]
                .as_u64()
                .ok_or_else(|| Error::Transport(format!("{label}: no weight in record")))? as u32;
            let level = record["level"]
                .as_u64()
                .ok_or_else(|| Error::Transport(format!("{label}: no level in record")))?;
            let traces = record["traces"]
                .as_array()
                .ok_or_else(|| Error::Transport(format!("{label}: no traces in record")))?;
            let mut ap = BTreeMap::new();
            for p in crate::modforms::primes_to(101) {
                if let Some(v) = traces.get((p - 1) as usize).and_then(|v| v.as_i64()) {
                    ap.insert(p, v);
                }
            }
            let fixture = Fixture {
                label: label.to_string(),
                weight,
                level,
                source: format!("lmfdb:mf_newforms/{label}"),
                fetched: "runtime".into(),
                ap,
            };
            fixture.validate()?;
            Ok(fixture)
        }
    }

    impl ApSource for LmfdbClient {
        fn fetch(&self, label: &str) -> Result<Fixture> {
            let url = format!(
                "{}/api/mf_newforms/?label={label}&_fields=weight,level,traces&_format=json",
                self.base
            );
            let body: serde_json::Value = ureq::get(&url)
                .call()
                .map_err(|e| Error::Transport(e.to_string()))?
                .body_mut()
                .read_json()
                .map_err(|e| Error::Transport(e.to_string()))?;
            let record = body["data"]
                .as_array()
                .and_then(|a| a.first())
                .ok_or_else(|| Error::Transport(format!("{label}: empty LMFDB answer")))?;
            LmfdbClient::fixture_from_record(label, record)
        }
    }
}

/// Odd primes up to and including `bound`, smallest first.
pub fn primes_to(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    'cand: for n in 3..=bound {
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                continue 'cand;
            }
            d += 1;
        }
        out.push(n);
    }
    out
}

/// Eta-product expressions for the forms that have classical ones.
pub fn eta_product_for(label: &str) -> Option<EtaProduct> {
    let expr = match label {
        "8.4.1.a" => "eta(2z)^4 eta(4z)^4",
        "8.6.1.a" => "eta(z)^8 eta(4z)^4 + 8 eta(4z)^12",
        "24.2.1.a" => "eta(2z) eta(4z) eta(6z) eta(12z)",
        _ => return None,
    };
    Some(EtaProduct::parse(expr).expect("built-in eta expressions are well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn discriminant_form_tau_values() {
        let delta = EtaProduct::parse("eta(z)^24").unwrap();
        let q = delta.expansion(12);
        let tau: Vec<i64> = q.a.iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(
            tau,
            vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]
        );
    }

    #[test]
    fn eta_summand_weight_must_be_multiple_of_24() {
        assert!(matches!(
            EtaProduct::parse("eta(z)^8 eta(4z)^5"),
            Err(Error::EtaWeight(28))
        ));
    }

    #[test]
    fn level8_weight6_form_is_normalized_and_multiplicative() {
        let f = eta_product_for("8.6.1.a").unwrap().expansion(36);
        assert_eq!(f.coefficient(1).unwrap(), &BigInt::from(1));
        // a_2 a_3 = a_6 and a_4 = a_2^2 (level 8: a_2 = 0)
        assert_eq!(f.coefficient(2).unwrap(), &BigInt::zero());
        assert_eq!(
            f.coefficient(6).unwrap(),
            &(f.coefficient(2).unwrap() * f.coefficient(3).unwrap())
        );
        assert_eq!(
            f.coefficient(15).unwrap(),
            &(f.coefficient(3).unwrap() * f.coefficient(5).unwrap())
        );
        // Hecke recursion at a good prime: a_9 = a_3^2 - 3^5
        let a3 = f.coefficient(3).unwrap();
        assert_eq!(f.coefficient(9).unwrap(), &(a3 * a3 - BigInt::from(243)));
    }

    #[test]
    fn legendre_symbol_matches_square_enumeration() {
        for p in primes_to(97) {
            let mut squares = vec![false; p as usize];
            for x in 1..p {
                squares[((x * x) % p) as usize] = true;
            }
            for a in -5i64..40 {
                let r = a.rem_euclid(p as i64) as usize;
                let expect = if r == 0 {
                    0
                } else if squares[r] {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a, p), expect, "({a}/{p})");
            }
        }
        assert_eq!(legendre(1, 97), 1);
        // (-1/p) = 1 iff p = 1 mod 4
        for p in primes_to(97) {
            assert_eq!(legendre(-1, p) == 1, p % 4 == 1, "p = {p}");
        }
    }

    #[test]
    fn cache_round_trip_and_missing_fixture() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CoefficientCache::open(dir.path());
        match fetch_ap(&cache, "8.6.1.a", 7, None) {
            Err(Error::MissingFixture { label }) => assert_eq!(label, "8.6.1.a"),
            other => panic!("expected MissingFixture, got {other:?}"),
        }
        let fixture = Fixture {
            label: "8.6.1.a".into(),
            weight: 6,
            level: 8,
            source: "test".into(),
            fetched: "2026-08-23".into(),
            ap: [(3, -8), (5, -10), (7, -16)].into_iter().collect(),
        };
        cache.store(&fixture).unwrap();
        assert_eq!(fetch_ap(&cache, "8.6.1.a", 5, None).unwrap(), -10);
        // a fresh cache re-reads it from disk
        let cache2 = CoefficientCache::open(dir.path());
        assert_eq!(fetch_ap(&cache2, "8.6.1.a", 7, None).unwrap(), -16);
    }

    #[test]
    fn deligne_bound_rejects_corrupt_fixture() {
        let fixture = Fixture {
            label: "8.6.1.a".into(),
            weight: 6,
            level: 8,
            source: "test".into(),
            fetched: "2026-08-23".into(),
            ap: [(3, 1000)].into_iter().collect(),
        };
        assert!(matches!(fixture.validate(), Err(Error::ValidationFailure { .. })));
    }

    struct Recorded(Fixture);
    impl ApSource for Recorded {
        fn fetch(&self, label: &str) -> Result<Fixture> {
            if label == self.0.label {
                Ok(self.0.clone())
            } else {
                Err(Error::Transport(format!("no recording for {label}")))
            }
        }
    }

    #[test]
    fn source_fills_cache_on_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CoefficientCache::open(dir.path());
        let recorded = Recorded(Fixture {
            label: "36.4.1.a".into(),
            weight: 4,
            level: 36,
            source: "recorded".into(),
            fetched: "2026-08-23".into(),
            ap: [(5, 0), (7, 20)].into_iter().collect(),
        });
        assert_eq!(fetch_ap(&cache, "36.4.1.a", 7, Some(&recorded)).unwrap(), 20);
        // now present on disk; a sourceless lookup succeeds
        let cache2 = CoefficientCache::open(dir.path());
        assert_eq!(fetch_ap(&cache2, "36.4.1.a", 5, None).unwrap(), 0);
    }

    #[test]
    fn form_ref_parses_label() {
        let f = FormRef::parse("64.6.1.f").unwrap();
        assert_eq!((f.level, f.weight), (64, 6));
        assert!(FormRef::parse("64.6.f").is_err());
    }
}
