//! Local Euler factors P_p(T) of hypergeometric data.
//!
//! P_p is the integer polynomial with constant term 1 whose power sums
//! (up to an orientation sign fixed by the parity of n) are the finite
//! hypergeometric values H_{p^s}. Coefficients are recovered by Newton's
//! identities over exact integers; every division must be exact and the
//! p-adic inputs must carry enough precision to pin each coefficient by
//! its archimedean size bound, so a wrong answer upstream surfaces as an
//! error here rather than a silently wrong polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::charsum::hq_general;
use crate::datum::HypergeometricDatum;
use crate::error::{Error, Result};

/// P_p(T) = 1 + c_1 T + ... + c_d T^d with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    pub p: u64,
    /// ascending: coefficients[j] is the coefficient of T^j; [0] = 1
    pub coefficients: Vec<BigInt>,
}

impl EulerFactor {
    pub fn from_coefficients(p: u64, coefficients: Vec<BigInt>) -> Result<EulerFactor> {
        if coefficients.first() != Some(&BigInt::one()) {
            return Err(Error::Invalid("Euler factor must have constant term 1".into()));
        }
        Ok(EulerFactor { p, coefficients })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Trace of Frobenius: the negation of the linear coefficient.
    pub fn trace(&self) -> BigInt {
        if self.coefficients.len() < 2 {
            BigInt::zero()
        } else {
            -&self.coefficients[1]
        }
    }

    /// Coefficients of f(cT).
    pub fn scale_variable(&self, c: i64) -> Vec<BigInt> {
        let mut pw = BigInt::one();
        self.coefficients
            .iter()
            .map(|cf| {
                let out = cf * &pw;
                pw *= c;
                out
            })
            .collect()
    }

    /// Power sums of the inverse roots, recovered from the coefficients
    /// by running Newton's identities forward.
    pub fn power_sums(&self, count: usize) -> Vec<BigInt> {
        let d = self.degree();
        let mut ps: Vec<BigInt> = Vec::with_capacity(count);
        for s in 1..=count {
            let mut acc = if s <= d {
                -(BigInt::from(s as i64) * &self.coefficients[s])
            } else {
                BigInt::zero()
            };
            for j in 1..s.min(d + 1) {
                acc -= &self.coefficients[j] * &ps[s - j - 1];
            }
            ps.push(acc);
        }
        ps
    }

    /// |inverse roots| by Durand-Kerner iteration in f64 complex
    /// arithmetic; adequate for the weight checks on desk-scale factors.
    pub fn root_magnitudes(&self) -> Vec<f64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        // inverse roots mu_i of P are the roots of the reciprocal
        // polynomial sum_j c_{d-j} z^j, whose descending coefficient
        // list is exactly the ascending list of P
        let coeffs: Vec<f64> = self
            .coefficients
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::MAX))
            .collect();
        let eval = |z: (f64, f64)| -> (f64, f64) {
            let mut v = (0.0f64, 0.0f64);
            for c in &coeffs {
                v = (v.0 * z.0 - v.1 * z.1 + c, v.0 * z.1 + v.1 * z.0);
            }
            v
        };
        // start on a circle of the mean root magnitude
        let r0 = coeffs.last().unwrap().abs().powf(1.0 / d as f64).max(1.0);
        let mut roots: Vec<(f64, f64)> = (0..d)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / d as f64;
                (r0 * th.cos(), r0 * th.sin())
            })
            .collect();
        for _ in 0..200 {
            let mut delta = 0.0f64;
            for i in 0..d {
                let zi = roots[i];
                let num = eval(zi);
                let mut den = (1.0f64, 0.0f64);
                for (j, &zj) in roots.iter().enumerate() {
                    if j != i {
                        let diff = (zi.0 - zj.0, zi.1 - zj.1);
                        den = (den.0 * diff.0 - den.1 * diff.1, den.0 * diff.1 + den.1 * diff.0);
                    }
                }
                let n2 = den.0 * den.0 + den.1 * den.1;
                if n2 == 0.0 {
                    continue;
                }
                let q = (
                    (num.0 * den.0 + num.1 * den.1) / n2,
                    (num.1 * den.0 - num.0 * den.1) / n2,
                );
                roots[i] = (zi.0 - q.0, zi.1 - q.1);
                delta += q.0.hypot(q.1);
            }
            if delta < 1e-9 * r0 {
                break;
            }
        }
        let mut mags: Vec<f64> = roots.iter().map(|z| z.0.hypot(z.1)).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        mags
    }
}

impl std::fmt::Display for EulerFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (j, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{c}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {c}")?;
            }
            match j {
                0 => {}
                1 => write!(f, "*T")?,
                _ => write!(f, "*T^{j}")?,
            }
        }
        Ok(())
    }
}

/// The s-th power sum sum_i mu_i^s as an exact integer, recovered from a
/// p-adic evaluation of H_{p^s} carried to precision exceeding twice the
/// Weil bound degree * p^(s(n-1)/2).
pub fn power_sum(d: &HypergeometricDatum, p: u64, s: u32, degree: usize) -> Result<BigInt> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    // the exact integers are precision-independent, so cache across the
    // repeated evaluations different Euler-factor constructions share
    static CACHE: OnceLock<Mutex<HashMap<(String, u64, u32, usize), BigInt>>> = OnceLock::new();
    let key = (d.to_string(), p, s, degree);
    if let Some(v) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let ps = power_sum_uncached(d, p, s, degree)?;
    CACHE.get().unwrap().lock().unwrap().insert(key, ps.clone());
    Ok(ps)
}

fn power_sum_uncached(d: &HypergeometricDatum, p: u64, s: u32, degree: usize) -> Result<BigInt> {
    let n = d.n();
    let weil = num_integer::Integer::div_ceil(&(s as i64 * (n as i64 - 1)), &2);
    let slack = 1 + (2 * degree as u64).ilog(p) as i64;
    let prec = weil + slack;
    let h = hq_general(d, p, s, prec)?;
    let v = h.padic.ok_or_else(|| Error::Invalid("missing p-adic value".into()))?;
    if v.abs_prec() < prec {
        return Err(Error::Precision { needed: prec, guaranteed: v.abs_prec() });
    }
    // orientation and normalization, frozen by matching all four printed
    // golden factors (H6/5, H5/5, H2/7, H1/5): for P = prod (1 - mu_i T),
    // sum_i mu_i^s = p^(s*max(0,-s0)) H_{p^s} with no parity-dependent
    // sign, where s0 is the profile minimum of the datum (H_{p^s} itself
    // is only p-adically integral after that rescaling)
    let s0 = crate::profile::profile(d)?.s;
    let shift = s as i64 * (-s0).max(0);
    let v = if shift > 0 {
        v.mul(&crate::padic::PadicNumber::from_i64(p as i64, p, prec + 1).pow(shift)?)
    } else {
        v
    };
    let ps = v.signed_residue_mod(prec)?;
    // the signed residue is only the true integer if it clears the bound
    let bound = BigInt::from(degree as i64) * BigInt::from(p).pow(weil as u32);
    if ps.magnitude() > bound.magnitude() {
        return Err(Error::ValidationFailure {
            context: format!("power_sum({d}, p={p}, s={s})"),
            detail: format!("|{ps}| exceeds the Weil bound {bound}"),
        });
    }
    Ok(ps)
}

/// Newton's identities: c_s = -(ps_s + sum_{j<s} c_j ps_{s-j}) / s, with
/// every division required to be exact.
fn newton(ps: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for s in 1..=ps.len() {
        let mut acc = ps[s - 1].clone();
        for j in 1..s {
            acc += &c[j] * &ps[s - j - 1];
        }
        let (q, r) = (-acc).div_rem(&BigInt::from(s as i64));
        if !r.is_zero() {
            return Err(Error::NonIntegerCoefficient {
                degree: s,
                residual: format!("{q} rem {r}"),
            });
        }
        c.push(q);
    }
    Ok(c)
}

/// P_p(T) to the given degree by Newton's identities on H_{p^s}.
pub fn euler_factor(d: &HypergeometricDatum, p: u64, degree: usize) -> Result<EulerFactor> {
    let ps: Vec<BigInt> = (1..=degree as u32)
        .map(|s| power_sum(d, p, s, degree))
        .collect::<Result<_>>()?;
    let coefficients = newton(&ps)?;
    EulerFactor::from_coefficients(p, coefficients)
}

/// Strips the degenerate linear factor (1 - mu T), mu = +-p^((n-2)/2),
/// from a lambda = 1, even-n Euler factor; returns the quotient and the
/// removed inverse root, trying both signs by exact division.
pub fn remove_degenerate_factor(f: &EulerFactor, n: usize) -> Result<(EulerFactor, BigInt)> {
    if n % 2 != 0 {
        return Err(Error::NotDegenerate);
    }
    let m = BigInt::from(f.p).pow(((n - 2) / 2) as u32);
    for mu in [m.clone(), -&m] {
        // P = (1 - mu T) Q  =>  q_j = c_j + mu q_{j-1}, exact iff q_d = 0
        let mut q: Vec<BigInt> = Vec::with_capacity(f.coefficients.len());
        let mut prev = BigInt::zero();
        for c in &f.coefficients {
            let next = c + &mu * &prev;
            q.push(next.clone());
            prev = next;
        }
        if q.last().map(|x| x.is_zero()) == Some(true) {
            q.pop();
            return Ok((EulerFactor::from_coefficients(f.p, q)?, mu));
        }
    }
    Err(Error::NotDegenerate)
}

/// Euler factor of an even-n, lambda = 1 datum with the degenerate
/// linear factor already removed, computed from H_{p^s} for s up to
/// (n-2)/2 + 1 only. The quotient polynomial g of degree n-2 is self-dual
/// of weight n-1 (inverse roots pair up as mu, p^(n-1)/mu), so its upper
/// coefficients are determined by the lower ones up to a sign eps; eps
/// and the sign of the removed root are fixed by consistency of the last
/// available power sum, which must single out exactly one combination.
pub fn euler_factor_degenerate_removed(
    d: &HypergeometricDatum,
    p: u64,
) -> Result<(EulerFactor, BigInt)> {
    let n = d.n();
    if n % 2 != 0 || !d.lambda().is_one() {
        return Err(Error::NotDegenerate);
    }
    let m = n - 2; // degree of the reduced factor
    let half = m / 2;
    let w = (n - 1) as u32; // motivic weight of the reduced factor
    let full_degree = n - 1;
    let ps: Vec<BigInt> = (1..=(half + 1) as u32)
        .map(|s| power_sum(d, p, s, full_degree))
        .collect::<Result<_>>()?;

    let pw = |k: u32| BigInt::from(p).pow(k);
    let mut found: Option<(Vec<BigInt>, BigInt)> = None;
    for sigma in [pw(((n - 2) / 2) as u32), -pw(((n - 2) / 2) as u32)] {
        'eps: for eps in [1i64, -1i64] {
            // lower coefficients of g from Newton on the full product
            // (1 - sigma T) g(T), one power sum at a time
            let mut g: Vec<BigInt> = vec![BigInt::one()];
            let mut full: Vec<BigInt> = vec![BigInt::one()];
            for s in 1..=half {
                let mut acc = ps[s - 1].clone();
                for j in 1..s {
                    acc += &full[j] * &ps[s - j - 1];
                }
                let (q, r) = (-acc).div_rem(&BigInt::from(s as i64));
                if !r.is_zero() {
                    continue 'eps;
                }
                full.push(q.clone());
                g.push(q + &sigma * &g[s - 1]);
            }
            // self-duality fills in the top half: g_{m-j} = eps p^{w(m-2j)/2} g_j
            for j in (0..half).rev() {
                let exp = (w as usize * (m - 2 * j) / 2) as u32;
                g.push(&g[j] * pw(exp) * eps);
            }
            if eps == -1 && !g[half].is_zero() {
                // middle coefficient must be its own dual
                continue;
            }
            // consistency of the next power sum pins the sign choice
            for j in half + 1..=(half + 1).min(m) {
                full.push(&g[j] - &sigma * &g[j - 1]);
            }
            let s = half + 1;
            let mut acc = BigInt::from(s as i64) * &full[s];
            for j in 1..s {
                acc += &full[j] * &ps[s - j - 1];
            }
            if -acc == ps[s - 1] {
                if let Some((prev_g, _)) = &found {
                    if *prev_g != g {
                        return Err(Error::ValidationFailure {
                            context: format!("euler_factor_degenerate_removed({d}, p={p})"),
                            detail: "sign choice is ambiguous at this depth".into(),
                        });
                    }
                } else {
                    found = Some((g, sigma.clone()));
                }
            }
        }
    }
    match found {
        Some((g, sigma)) => Ok((EulerFactor::from_coefficients(p, g)?, sigma)),
        None => Err(Error::ValidationFailure {
            context: format!("euler_factor_degenerate_removed({d}, p={p})"),
            detail: "no sign choice reproduces the power sums".into(),
        }),
    }
}
