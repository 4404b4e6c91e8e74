//! The step-function combinatorics of a datum: the exponent e(k), its
//! minimum s, bottom interval I, weight w, the parity sum t, and the
//! shifted parameter multisets (hat-alpha, breve-beta).
//!
//! For 0 <= k <= p-2 the exponent
//!
//! ```text
//!   e(k) = sum_i ( -floor(a_i - k/(p-1)) - floor(k/(p-1) + {b_i}) )
//! ```
//!
//! depends on k only through x = k/(p-1) in [0,1), jumping only at the
//! normalized breakpoints a_i and 1 - {b_j}. [`profile`] works in this
//! p-free normalized form; [`e_function`] gives the exact k-indexed
//! value used by the character-sum evaluator.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::datum::{satisfies_diamond, HypergeometricDatum, Multiset};
use crate::error::{Error, Result};
use crate::padic::a0;
use crate::rational::{frac_part, is_integer, rat, Rational};

/// nu(a, x): 0 when a <= x, 1 when x < a < p. Equals
/// -floor((x - a)/(p-1)) on the strip |x - a| < p-1; the case form is
/// authoritative at the boundary x - a = p-1.
pub fn nu(a: u64, x: &Rational, p: u64) -> i64 {
    debug_assert!(a < p);
    let av = Rational::from(BigInt::from(a));
    if av <= *x {
        0
    } else {
        debug_assert_eq!(
            1,
            (-((x - &av) / Rational::from(BigInt::from(p - 1))).floor().to_integer())
                .to_i64()
                .unwrap()
        );
        1
    }
}

/// e at the normalized position x = k/(p-1) in [0, 1).
pub fn e_at(d: &HypergeometricDatum, x: &Rational) -> i64 {
    let mut e = 0i64;
    for a in d.alpha().iter() {
        e -= (a - x).floor().to_integer().to_i64().expect("floor overflow");
    }
    for b in d.beta().iter() {
        e -= (x + frac_part(b)).floor().to_integer().to_i64().expect("floor overflow");
    }
    e
}

/// e(k) for an integer 0 <= k <= p-2.
pub fn e_function(d: &HypergeometricDatum, p: u64, k: u64) -> i64 {
    debug_assert!(k <= p - 2);
    e_at(d, &rat(k as i64, p as i64 - 1))
}

/// t = sum a0(b_i); even t makes the (-1)^t prefactor trivial.
pub fn t_sum(beta: &Multiset, p: u64) -> Result<u64> {
    let mut t = 0;
    for b in beta.iter() {
        t += a0(b, p)?;
    }
    Ok(t)
}

/// Parity of t when it does not depend on p: non-integer entries must
/// pair up as {b, 1-b} (each pair contributes an even amount) and the
/// integer entries must all equal 1.
pub fn t_parity_symbolic(beta: &Multiset) -> Option<bool> {
    let ints: Vec<_> = beta.iter().filter(|b| is_integer(b)).collect();
    if !ints.iter().all(|b| b.is_one()) {
        return None;
    }
    let fracs = Multiset::new(
        beta.iter().filter(|b| !is_integer(b)).cloned().collect(),
    );
    let mirrored = fracs.map(|b| frac_part(&(Rational::one() - b)));
    if fracs == mirrored {
        Some(ints.len() % 2 == 1)
    } else {
        None
    }
}

/// One maximal sub-interval of the bottom set, reported as its closure.
pub type ClosedInterval = (Rational, Rational);

/// The normalized (p-free) profile of a datum.
#[derive(Debug, Clone)]
pub struct Profile {
    /// jump locations in (0, 1), sorted, deduplicated
    pub breakpoints: Vec<Rational>,
    /// e on the open intervals cut by the breakpoints (len = breakpoints+1)
    pub e_values: Vec<i64>,
    /// e exactly at each breakpoint (can match either neighbor)
    pub e_at_breakpoints: Vec<i64>,
    /// s = min e
    pub s: i64,
    /// w = max e - min e
    pub w: i64,
    /// closure of {x : e(x) = s}, as maximal closed intervals
    pub intervals: Vec<ClosedInterval>,
    pub connected: bool,
    /// Some(odd?) when the parity of t is p-independent
    pub t_odd: Option<bool>,
    /// shifted multisets, present when I is connected
    pub hat_alpha: Option<Multiset>,
    pub breve_beta: Option<Multiset>,
}

/// The shifted multisets evaluated at a fixed normalized position x:
/// hat a_i = a_i - floor(a_i - x), breve b_i = b_i + floor(x + {1 - b_i}).
pub fn hat_breve_at(d: &HypergeometricDatum, x: &Rational) -> (Multiset, Multiset) {
    let hat = d.alpha().map(|a| a - Rational::from((a - x).floor().to_integer()));
    let breve = d
        .beta()
        .map(|b| b + Rational::from((x + frac_part(&(Rational::one() - b))).floor().to_integer()));
    (hat, breve)
}

pub fn profile(d: &HypergeometricDatum) -> Result<Profile> {
    let mut bps: Vec<Rational> = Vec::new();
    for a in d.alpha().iter() {
        let f = frac_part(a);
        if !f.is_zero() {
            bps.push(f);
        }
    }
    for b in d.beta().iter() {
        let f = Rational::one() - frac_part(b);
        if !f.is_zero() && !f.is_one() {
            bps.push(f);
        }
    }
    bps.sort();
    bps.dedup();

    // sample on every breakpoint and every open interval's midpoint
    let mut edges = vec![Rational::zero()];
    edges.extend(bps.iter().cloned());
    edges.push(Rational::one());
    let mids: Vec<Rational> = edges
        .windows(2)
        .map(|w| (&w[0] + &w[1]) / rat(2, 1))
        .collect();
    // e(0) is the genuine left edge value (x = 0 is in the domain)
    let mut e_values: Vec<i64> = mids.iter().map(|x| e_at(d, x)).collect();
    e_values[0] = e_at(d, &Rational::zero());
    debug_assert_eq!(e_values[0], e_at(d, &mids[0]), "jump inside (0, b_1)");
    let e_at_breakpoints: Vec<i64> = bps.iter().map(|x| e_at(d, x)).collect();

    let s = *e_values.iter().chain(&e_at_breakpoints).min().unwrap();
    let max = *e_values.iter().chain(&e_at_breakpoints).max().unwrap();
    let w = max - s;

    // walk the alternating sample sequence 0-interval, bp, interval, bp, ...
    // collecting maximal runs where e = s; report each run's closure
    let mut samples: Vec<(Rational, Rational, i64)> = Vec::new(); // (inf, sup, e)
    samples.push((Rational::zero(), edges[1].clone(), e_values[0]));
    for (i, bp) in bps.iter().enumerate() {
        samples.push((bp.clone(), bp.clone(), e_at_breakpoints[i]));
        samples.push((bp.clone(), edges[i + 2].clone(), e_values[i + 1]));
    }
    let mut intervals: Vec<ClosedInterval> = Vec::new();
    let mut run: Option<ClosedInterval> = None;
    for (lo, hi, e) in samples {
        if e == s {
            run = Some(match run {
                None => (lo, hi),
                Some((start, _)) => (start, hi),
            });
        } else if let Some(r) = run.take() {
            intervals.push(r);
        }
    }
    if let Some(r) = run {
        intervals.push(r);
    }
    let connected = intervals.len() == 1;

    let (hat_alpha, breve_beta) = if connected {
        let (lo, hi) = &intervals[0];
        // evaluate at every attaining sample; Theorem-style independence
        // of the choice of k in I is asserted, not assumed
        let mut candidates = vec![(lo + hi) / rat(2, 1)];
        if e_at(d, lo) == s {
            candidates.push(lo.clone());
        }
        if hi < &Rational::one() && e_at(d, hi) == s {
            candidates.push(hi.clone());
        }
        let first = hat_breve_at(d, &candidates[0]);
        for x in &candidates[1..] {
            let other = hat_breve_at(d, x);
            if other != first {
                return Err(Error::ValidationFailure {
                    context: format!("profile({d})"),
                    detail: format!(
                        "shifted multisets depend on the sample point in I ({} vs {})",
                        candidates[0], x
                    ),
                });
            }
        }
        (Some(first.0), Some(first.1))
    } else {
        (None, None)
    };

    Ok(Profile {
        breakpoints: bps,
        e_values,
        e_at_breakpoints,
        s,
        w,
        intervals,
        connected,
        t_odd: if satisfies_diamond(d) { t_parity_symbolic(d.beta()) } else { None },
        hat_alpha,
        breve_beta,
    })
}

/// (hat alpha, breve beta) for a datum with connected bottom interval.
pub fn hat_breve(d: &HypergeometricDatum) -> Result<(Multiset, Multiset)> {
    let pr = profile(d)?;
    if !pr.connected {
        let show = |iv: &ClosedInterval| format!("[{}, {}]", iv.0, iv.1);
        return Err(Error::DisconnectedInterval(
            show(&pr.intervals[0]),
            show(pr.intervals.last().unwrap()),
        ));
    }
    Ok((pr.hat_alpha.unwrap(), pr.breve_beta.unwrap()))
}

impl Profile {
    /// CSV rows `x_start,x_end,e` over the open intervals, with
    /// consecutive equal-valued pieces merged.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_start,x_end,e\n");
        let mut edges = vec![Rational::zero()];
        edges.extend(self.breakpoints.iter().cloned());
        edges.push(Rational::one());
        let mut i = 0;
        while i < self.e_values.len() {
            let mut j = i;
            while j + 1 < self.e_values.len() && self.e_values[j + 1] == self.e_values[i] {
                j += 1;
            }
            let _ = writeln!(out, "{},{},{}", edges[i], edges[j + 1], self.e_values[i]);
            i = j + 1;
        }
        out
    }

    /// Minimal step plot: one polyline over x in [0, 1], no external assets.
    pub fn to_svg(&self) -> String {
        let (width, height, pad) = (600.0f64, 240.0f64, 30.0f64);
        let lo = self.s as f64;
        let hi = (self.s + self.w) as f64;
        let span = (hi - lo).max(1.0);
        let xm = |x: &Rational| pad + (width - 2.0 * pad) * x.to_f64().unwrap_or(0.0);
        let ym = |e: i64| height - pad - (height - 2.0 * pad) * ((e as f64 - lo) / span);
        let mut edges = vec![Rational::zero()];
        edges.extend(self.breakpoints.iter().cloned());
        edges.push(Rational::one());
        let mut pts = String::new();
        for (i, e) in self.e_values.iter().enumerate() {
            let _ = write!(pts, "{:.2},{:.2} {:.2},{:.2} ", xm(&edges[i]), ym(*e), xm(&edges[i + 1]), ym(*e));
        }
        format!(
            concat!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
                "viewBox=\"0 0 {w} {h}\">\n",
                "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
                "<polyline points=\"{pts}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                "</svg>\n"
            ),
            w = width,
            h = height,
            pts = pts.trim_end()
        )
    }

    pub fn write_file(&self, format: &str, path: &std::path::Path) -> Result<()> {
        let body = match format {
            "csv" => self.to_csv(),
            "svg" => self.to_svg(),
            other => return Err(Error::Parse(format!("unknown plot format `{other}`"))),
        };
        std::fs::write(path, body)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::named_datum;
    use crate::padic::{dash, first_digit, gamma_p, PadicNumber};
    use crate::series::pochhammer;

    fn example1() -> HypergeometricDatum {
        "alpha=1/2,1/2,1/2,1/2,1/3,2/3; beta=1,1,1,1,1/6,5/6; lambda=1"
            .parse()
            .unwrap()
    }

    fn example2() -> HypergeometricDatum {
        "alpha=1/2,1/2,1/6,5/6; beta=1,1,1/3,2/3; lambda=1".parse().unwrap()
    }

    #[test]
    fn nu_basics() {
        for p in [7u64, 13, 31] {
            for a in 0..p {
                assert_eq!(nu(a, &rat(a as i64, 1), p), 0); // a <= x
                if a > 0 {
                    assert_eq!(nu(a, &rat(a as i64 - 1, 1), p), 1); // x < a < p
                }
            }
        }
        assert_eq!(nu(6, &rat(3, 1), 7), 1);
        assert_eq!(nu(0, &rat(5, 2), 7), 0);
    }

    #[test]
    fn nu_dash_identity() {
        // nu(k, (p-1)a') = nu(k, [-a - nu(k, (p-1)a)]_0) for a in (0,1),
        // a a p-adic unit, 0 <= k < p
        let primes = [5u64, 7, 11, 13, 17, 19, 23, 29, 31];
        for d in 2..=12i64 {
            for n in 1..d {
                let a = rat(n, d);
                if a != a.reduced() {
                    continue;
                }
                for &p in &primes {
                    // a must be a p-adic unit: p in neither numerator
                    // nor denominator
                    if d % p as i64 == 0 || n % p as i64 == 0 {
                        continue;
                    }
                    let ad = dash(&a, p).unwrap();
                    for k in 0..p {
                        let lhs = nu(k, &(&ad * rat(p as i64 - 1, 1)), p);
                        let inner = first_digit(
                            &(-&a - rat(nu(k, &(&a * rat(p as i64 - 1, 1)), p), 1)),
                            p,
                        )
                        .unwrap();
                        let rhs = nu(k, &rat(inner as i64, 1), p);
                        assert_eq!(lhs, rhs, "a={a} p={p} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_shift_congruence() {
        // (-p)^nu * Gamma_p({a - k/(p-1)}) / Gamma_p(a) =
        //   (-1)^k (ap)^nu / (a'p)^nu' * (a + nu)_k  mod p^(1+nu)
        for d in [2i64, 3, 4, 6, 12] {
            for n in 1..d {
                let a = rat(n, d);
                if a != a.reduced() {
                    continue;
                }
                for p in [5u64, 7, 11, 13, 17, 19] {
                    if d % p as i64 == 0 {
                        continue;
                    }
                    let prec = 3i64;
                    let ad = dash(&a, p).unwrap();
                    for k in 0..p - 1 {
                        let nv = nu(k, &(&a * rat(p as i64 - 1, 1)), p);
                        let nvd = nu(k, &(&ad * rat(p as i64 - 1, 1)), p);
                        let arg = frac_part(&(&a - rat(k as i64, p as i64 - 1)));
                        let lhs = gamma_p(&arg, p, prec)
                            .unwrap()
                            .mul(&PadicNumber::from_i64(-(p as i64), p, prec).pow(nv).unwrap());
                        let lhs = lhs.div(&gamma_p(&a, p, prec).unwrap()).unwrap();
                        // nu values are 0 or 1, so the power factors are
                        // plain conditional multiplications
                        let mut rhs = pochhammer(&(&a + rat(nv, 1)), k);
                        if nv == 1 {
                            rhs *= &a * rat(p as i64, 1);
                        }
                        if nvd == 1 {
                            rhs /= &ad * rat(p as i64, 1);
                        }
                        if k % 2 == 1 {
                            rhs = -rhs;
                        }
                        let rhs = PadicNumber::from_rational(&rhs, p, prec);
                        assert!(
                            lhs.congruent_mod(&rhs, 1 + nv).unwrap(),
                            "a={a} p={p} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn example1_profile() {
        let pr = profile(&example1()).unwrap();
        assert_eq!(pr.s, -1);
        assert_eq!(pr.w, 6);
        assert!(pr.connected);
        assert_eq!(pr.intervals, vec![(rat(1, 6), rat(1, 3))]);
        assert_eq!(pr.t_odd, Some(false)); // t even for every odd p
        let d = example1();
        assert_eq!(pr.hat_alpha.as_ref().unwrap(), d.alpha());
        let breve = Multiset::from_i64_pairs(&[(1, 1), (1, 1), (1, 1), (1, 1), (7, 6), (5, 6)]);
        assert_eq!(pr.breve_beta.as_ref().unwrap(), &breve);
    }

    #[test]
    fn example2_profile() {
        let pr = profile(&example2()).unwrap();
        assert_eq!(pr.s, 0);
        assert_eq!(pr.w, 2);
        assert!(!pr.connected);
        assert_eq!(
            pr.intervals,
            vec![
                (rat(0, 1), rat(1, 6)),
                (rat(1, 3), rat(1, 2)),
            ]
        );
        assert!(matches!(hat_breve(&example2()), Err(Error::DisconnectedInterval(..))));
    }

    #[test]
    fn six_dim_half_sixth_profiles() {
        // {1/2,1/2,1/2,1/2,1/6,5/6} over {1,1,1,1,1/3,2/3}: w=4, s=0,
        // disconnected
        let d: HypergeometricDatum =
            "alpha=1/2,1/2,1/2,1/2,1/6,5/6; beta=1,1,1,1,1/3,2/3; lambda=1"
                .parse()
                .unwrap();
        let pr = profile(&d).unwrap();
        assert_eq!(pr.s, 0);
        assert_eq!(pr.w, 4);
        assert!(!pr.connected);
        // {1/2,1/2,1/3,2/3,1/3,2/3} over {1,1,1/6,5/6,1/6,5/6}: w=6,
        // connected with the doubled breve entries; max e = 4 so the
        // minimum is -2 (the two beta jumps at 1/6 land together)
        let d: HypergeometricDatum =
            "alpha=1/2,1/2,1/3,2/3,1/3,2/3; beta=1,1,1/6,5/6,1/6,5/6; lambda=1"
                .parse()
                .unwrap();
        let pr = profile(&d).unwrap();
        assert_eq!(pr.s, -2);
        assert_eq!(pr.w, 6);
        assert!(pr.connected);
        let breve = Multiset::from_i64_pairs(&[(1, 1), (1, 1), (7, 6), (5, 6), (7, 6), (5, 6)]);
        assert_eq!(pr.breve_beta.as_ref().unwrap(), &breve);
    }

    #[test]
    fn e_function_matches_normalized_and_jump_locations() {
        for name in ["H1", "H2", "H5", "H6", "H7", "H8"] {
            let d = named_datum(name).unwrap();
            let pr = profile(&d).unwrap();
            for p in [7u64, 11, 13, 17, 19, 23, 29, 31] {
                if !crate::datum::is_good_prime(&d, p) {
                    continue;
                }
                let mut prev = e_function(&d, p, 0);
                for k in 1..=p - 2 {
                    let e = e_function(&d, p, k);
                    assert_eq!(e, e_at(&d, &rat(k as i64, p as i64 - 1)));
                    if e != prev {
                        // a jump inside (k-1, k] requires a breakpoint there
                        let lo = rat(k as i64 - 1, p as i64 - 1);
                        let hi = rat(k as i64, p as i64 - 1);
                        // alpha-type jumps act after their breakpoint,
                        // beta-type jumps at it, so a change between
                        // k-1 and k needs a breakpoint in [lo, hi]
                        assert!(
                            pr.breakpoints.iter().any(|b| *b >= lo && *b <= hi),
                            "{name} p={p} k={k}: jump without breakpoint"
                        );
                    }
                    prev = e;
                }
            }
        }
    }

    #[test]
    fn t_sum_examples() {
        let d = example1();
        for p in [5u64, 7, 11, 13, 31] {
            assert_eq!(t_sum(d.beta(), p).unwrap() % 2, 0);
        }
        let all_ones = Multiset::from_i64_pairs(&[(1, 1); 5]);
        assert_eq!(t_sum(&all_ones, 7).unwrap(), 5);
        assert_eq!(t_parity_symbolic(&all_ones), Some(true));
        // {1, b, 1-b} with b not integral: odd
        let b3 = Multiset::from_i64_pairs(&[(1, 1), (1, 3), (2, 3)]);
        assert_eq!(t_parity_symbolic(&b3), Some(true));
        for p in [5u64, 7, 11, 13] {
            assert_eq!(t_sum(&b3, p).unwrap() % 2, 1);
        }
    }

    #[test]
    fn csv_and_svg_shapes() {
        let pr = profile(&example1()).unwrap();
        let csv = pr.to_csv();
        assert!(csv.starts_with("x_start,x_end,e\n"));
        assert_eq!(csv.lines().count(), pr.e_values.len() + 1);
        assert!(csv.contains("1/6,1/3,-1"));
        let svg = pr.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
        // constant e: single data row
        let d: HypergeometricDatum = "alpha=1/2; beta=1/2; lambda=1".parse().unwrap();
        let pr = profile(&d).unwrap();
        assert_eq!(pr.to_csv().lines().count(), 2);
    }
}
