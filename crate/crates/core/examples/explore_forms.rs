//! Scratch exploration of coefficient extraction rules (not shipped).

use hgc_core::euler::{euler_factor, power_sum, remove_degenerate_factor};
use hgc_core::modforms::{eta_product_for, legendre, primes_to};
use hgc_core::HypergeometricDatum;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

fn d(alpha: &[(i64, i64)], beta: &[(i64, i64)], lambda: (i64, i64)) -> HypergeometricDatum {
    HypergeometricDatum::from_pairs(alpha, beta, lambda)
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    let h = |n: i64, m: i64| (n, m);
    let d84 = d(&[h(1, 2); 4], &[h(1, 1); 4], (1, 1));
    let d86 = d(&[h(1, 2); 6], &[h(1, 1); 6], (1, 1));

    match which.as_str() {
        "genstore" => {
            let cache = hgc_core::modforms::CoefficientCache::open("fixtures");
            for label in hgc_core::fixtures::LABELS {
                let t = std::time::Instant::now();
                let f = hgc_core::fixtures::derive_fixture(label, 101).unwrap();
                cache.store(&f).unwrap();
                println!("{label}: {} primes stored in {:?}", f.ap.len(), t.elapsed());
            }
        }
        "gen" => {
            let only: Vec<String> = std::env::args().skip(2).collect();
            for label in hgc_core::fixtures::LABELS {
                if !only.is_empty() && !only.iter().any(|l| l == label) {
                    continue;
                }
                let t = std::time::Instant::now();
                match hgc_core::fixtures::derive_fixture(label, 101) {
                    Ok(f) => println!(
                        "{label}: {} primes in {:?} (first {:?})",
                        f.ap.len(),
                        t.elapsed(),
                        f.ap.iter().take(3).collect::<Vec<_>>()
                    ),
                    Err(e) => println!("{label}: FAILED {e}"),
                }
            }
        }
        "eta84" => {
            let eta = eta_product_for("8.4.1.a").unwrap().expansion(40);
            for p in primes_to(37) {
                let ps = power_sum(&d84, p, 1, 3).unwrap();
                let cand = &ps - BigInt::from(p);
                println!(
                    "p={p}: H_p={ps} H_p-p={cand} eta={}",
                    eta.coefficient(p).unwrap()
                );
            }
        }
        "eta86" => {
            let eta84 = eta_product_for("8.4.1.a").unwrap().expansion(40);
            let eta86 = eta_product_for("8.6.1.a").unwrap().expansion(40);
            for p in primes_to(37) {
                let ps = power_sum(&d86, p, 1, 5).unwrap();
                let a84 = eta84.coefficient(p).unwrap();
                let cand = &ps - BigInt::from(p as i64) * a84
                    - BigInt::from(legendre(-1, p)) * BigInt::from((p * p) as i64);
                println!(
                    "p={p}: H_p={ps} cand={cand} eta={}",
                    eta86.coefficient(p).unwrap()
                );
            }
        }
        "d36" => {
            let d36 = d(&[h(1, 2), h(1, 2), h(1, 3), h(2, 3)], &[h(1, 1); 4], (1, 1));
            for p in primes_to(37) {
                if p == 3 {
                    continue;
                }
                let ps = power_sum(&d36, p, 1, 3).unwrap();
                let cand = &ps - BigInt::from(legendre(3, p) * p as i64);
                // also the reduced quadratic trace
                let full = euler_factor(&d36, p, 3).unwrap();
                let (g, mu) = remove_degenerate_factor(&full, 4).unwrap();
                println!("p={p}: H_p={ps} a36cand={cand} trace(g)={} mu={mu}", g.trace());
            }
        }
        "f64" => {
            let d36 = d(&[h(1, 2), h(1, 2), h(1, 3), h(2, 3)], &[h(1, 1); 4], (1, 1));
            let h1 = hgc_core::datum::named_datum("H1").unwrap();
            let printed = [-88i64, 540, -418, 594, 836, -4104, -594, 4256]; // (2/p) a_p, p=7..31
            for (i, p) in primes_to(31).into_iter().filter(|&p| p > 5).enumerate() {
                let ps1 = power_sum(&h1, p, 1, 5).unwrap();
                let a36 = power_sum(&d36, p, 1, 3).unwrap() - BigInt::from(legendre(3, p) * p as i64);
                let base = &ps1 - BigInt::from(legendre(-3, p) * p as i64) * &a36;
                let p2 = BigInt::from((p * p) as i64);
                let with_m3 = (&base - BigInt::from(legendre(-3, p)) * &p2) * legendre(2, p);
                let with_3 = (&base - BigInt::from(legendre(3, p)) * &p2) * legendre(2, p);
                let expect = printed[i] * legendre(2, p);
                println!(
                    "p={p}: cand(-3/p)={with_m3} cand(3/p)={with_3} printed_a_p={expect}"
                );
            }
        }
        "w4" => {
            // the five 4F3 data with nontrivial beta, plus eta where known
            let cases: [(&str, HypergeometricDatum); 5] = [
                ("48.4.1.c/A", d(&[h(1, 2), h(1, 2), h(1, 3), h(2, 3)], &[h(1, 1), h(1, 1), h(5, 4), h(3, 4)], (1, 1))),
                ("48.4.1.c/C", d(&[h(1, 2), h(1, 2), h(1, 4), h(3, 4)], &[h(1, 1), h(1, 1), h(7, 6), h(5, 6)], (1, 1))),
                ("24.4.1.a", d(&[h(1, 2); 4], &[h(1, 1), h(1, 1), h(4, 3), h(2, 3)], (1, 1))),
                ("12.4.1.a", d(&[h(1, 2); 4], &[h(1, 1), h(1, 1), h(7, 6), h(5, 6)], (1, 1))),
                ("64.4.1.b", d(&[h(1, 2); 4], &[h(1, 1), h(1, 1), h(5, 4), h(3, 4)], (1, 1))),
            ];
            let eta12 = eta_product_for("12.4.1.a").unwrap().expansion(40);
            for (name, dm) in &cases {
                println!("--- {name} ({dm})");
                for p in primes_to(31) {
                    if !hgc_core::datum::is_good_prime(dm, p) {
                        continue;
                    }
                    match euler_factor(dm, p, 3) {
                        Ok(full) => {
                            let rem = remove_degenerate_factor(&full, 4);
                            let eta = if name == &"12.4.1.a" {
                                format!(" eta={}", eta12.coefficient(p).unwrap())
                            } else {
                                String::new()
                            };
                            match rem {
                                Ok((g, mu)) => println!(
                                    "p={p}: full={:?} trace(g)={} mu={mu}{eta}",
                                    full.coefficients.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>(),
                                    g.trace()
                                ),
                                Err(e) => println!(
                                    "p={p}: full={:?} no-degenerate: {e}{eta}",
                                    full.coefficients.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>()
                                ),
                            }
                        }
                        Err(e) => println!("p={p}: euler failed: {e}"),
                    }
                }
            }
        }
        "w2" => {
            let cases = [
                ("24.2.1.a/A", d(&[h(1, 2), h(1, 2), h(1, 6), h(5, 6)], &[h(1, 1), h(1, 1), h(4, 3), h(2, 3)], (1, 1))),
                ("24.2.1.a/B", d(&[h(1, 2), h(1, 2), h(1, 4), h(3, 4)], &[h(1, 1), h(1, 1), h(4, 3), h(2, 3)], (1, 1))),
            ];
            let eta24 = eta_product_for("24.2.1.a").unwrap().expansion(40);
            for (name, dm) in &cases {
                println!("--- {name} ({dm}) profile={:?}", hgc_core::profile::profile(dm).map(|pr| (pr.w, pr.s)));
                for p in primes_to(31) {
                    if !hgc_core::datum::is_good_prime(dm, p) {
                        continue;
                    }
                    match euler_factor(dm, p, 3) {
                        Ok(full) => println!(
                            "p={p}: full={:?} mags={:?} eta={}",
                            full.coefficients.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>(),
                            full.root_magnitudes(),
                            eta24.coefficient(p).unwrap()
                        ),
                        Err(e) => println!("p={p}: euler failed: {e}"),
                    }
                }
            }
        }
        "m32" => {
            let dm = d(&[h(1, 2); 4], &[h(1, 1); 4], (-1, 1));
            println!("profile={:?}", hgc_core::profile::profile(&dm).map(|pr| (pr.w, pr.s)));
            for p in primes_to(31) {
                match euler_factor(&dm, p, 4) {
                    Ok(full) => println!(
                        "p={p} (p%4={}): full={:?} mags={:?}",
                        p % 4,
                        full.coefficients.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>(),
                        full.root_magnitudes()
                    ),
                    Err(e) => println!("p={p}: euler failed: {e}"),
                }
            }
        }
        "pin4" => {
            // six 4F3 mod p^3 congruences: p*F = twist * a_p; compare the
            // series-pinned a_p with the reduced Euler-quadratic trace
            let cases: [(&str, HypergeometricDatum, fn(u64) -> i64); 6] = [
                ("48.4.1.c/A", d(&[h(1, 2), h(1, 2), h(1, 3), h(2, 3)], &[h(1, 1), h(1, 1), h(5, 4), h(3, 4)], (1, 1)), |p| legendre(3, p)),
                ("48.4.1.c/B", d(&[h(1, 2), h(1, 2), h(1, 3), h(2, 3)], &[h(1, 1), h(1, 1), h(7, 6), h(5, 6)], (1, 1)), |p| legendre(-1, p)),
                ("48.4.1.c/C", d(&[h(1, 2), h(1, 2), h(1, 4), h(3, 4)], &[h(1, 1), h(1, 1), h(7, 6), h(5, 6)], (1, 1)), |_| 1),
                ("24.4.1.a", d(&[h(1, 2); 4], &[h(1, 1), h(1, 1), h(4, 3), h(2, 3)], (1, 1)), |_| 1),
                ("12.4.1.a", d(&[h(1, 2); 4], &[h(1, 1), h(1, 1), h(7, 6), h(5, 6)], (1, 1)), |_| 1),
                ("64.4.1.b", d(&[h(1, 2); 4], &[h(1, 1), h(1, 1), h(5, 4), h(3, 4)], (1, 1)), |_| 1),
            ];
            let eta12 = eta_product_for("12.4.1.a").unwrap().expansion(40);
            for (name, dm, twist) in &cases {
                println!("--- {name} ({dm})");
                for p in primes_to(37) {
                    if !hgc_core::datum::is_good_prime(dm, p) || p == 5 {
                        continue;
                    }
                    let f = hgc_core::series::truncated_f_padic(dm, p - 1, p, 4).unwrap();
                    let lhs = f
                        .mul(&hgc_core::PadicNumber::from_i64(p as i64, p, 5))
                        .signed_residue_mod(3)
                        .unwrap();
                    let a_pin = &lhs * twist(p);
                    match hgc_core::euler::euler_factor_degenerate_removed(dm, p) {
                        Ok((g, mu)) => {
                            let eta = if name == &"12.4.1.a" {
                                format!(" eta={}", eta12.coefficient(p).unwrap())
                            } else {
                                String::new()
                            };
                            println!("p={p}: a_pin={a_pin} trace(g)={} mu={mu}{eta}", g.trace());
                        }
                        Err(e) => println!("p={p}: a_pin={a_pin} euler failed: {e}"),
                    }
                }
            }
        }
        "pin2" => {
            let cases: [(&str, HypergeometricDatum, fn(u64) -> i64); 2] = [
                ("24.2.1.a/A", d(&[h(1, 2), h(1, 2), h(1, 6), h(5, 6)], &[h(1, 1), h(1, 1), h(4, 3), h(2, 3)], (1, 1)), |_| 1),
                ("24.2.1.a/B", d(&[h(1, 2), h(1, 2), h(1, 4), h(3, 4)], &[h(1, 1), h(1, 1), h(4, 3), h(2, 3)], (1, 1)), |p| legendre(-1, p)),
            ];
            let eta24 = eta_product_for("24.2.1.a").unwrap().expansion(110);
            for (name, dm, twist) in &cases {
                println!("--- {name} ({dm})");
                for p in primes_to(101) {
                    if !hgc_core::datum::is_good_prime(dm, p) {
                        continue;
                    }
                    let f = hgc_core::series::truncated_f_padic(dm, p - 1, p, 2).unwrap();
                    let lhs = f.signed_residue_mod(1).unwrap();
                    let a_pin = &lhs * twist(p);
                    let tr = hgc_core::euler::euler_factor_degenerate_removed(dm, p)
                        .map(|(g, mu)| format!("trace(g)={} mu={mu}", g.trace()))
                        .unwrap_or_else(|e| format!("euler failed: {e}"));
                    println!(
                        "p={p}: F= {lhs} a_pin(mod p)={a_pin} eta={} {tr}",
                        eta24.coefficient(p).unwrap()
                    );
                }
            }
        }
        "pin6465" => {
            let d6f5 = d(
                &[h(1, 2), h(1, 2), h(1, 2), h(1, 2), h(1, 6), h(5, 6)],
                &[h(1, 1), h(1, 1), h(1, 1), h(1, 1), h(4, 3), h(2, 3)],
                (1, 1),
            );
            let d72 = d(&[h(1, 2), h(1, 2), h(1, 6), h(5, 6)], &[h(1, 1); 4], (1, 1));
            for p in primes_to(41) {
                if !hgc_core::datum::is_good_prime(&d6f5, p) {
                    continue;
                }
                let f = hgc_core::series::truncated_f_padic(&d6f5, p - 1, p, 4).unwrap();
                let a64d = f.signed_residue_mod(3).unwrap() * legendre(2, p);
                let hp = power_sum(&d6f5, p, 1, 5).unwrap();
                let (g, mu) = hgc_core::euler::euler_factor_degenerate_removed(&d72, p).unwrap();
                let resid = &hp - BigInt::from(legendre(2, p)) * &a64d
                    - BigInt::from(legendre(3, p) * p as i64);
                let a72_cand = &resid * legendre(-3, p);
                println!(
                    "p={p}: a64d_pin={a64d} H_p={hp} resid={resid} a72cand={a72_cand} trace72(g)={} mu={mu}",
                    g.trace()
                );
            }
        }
        "pin48w6" => {
            let dm = d(
                &[h(1, 2), h(1, 2), h(1, 3), h(2, 3), h(1, 3), h(2, 3)],
                &[h(1, 1), h(1, 1), h(7, 6), h(5, 6), h(7, 6), h(5, 6)],
                (1, 1),
            );
            println!("profile={:?}", hgc_core::profile::profile(&dm).map(|pr| (pr.w, pr.s)));
            for p in primes_to(23) {
                if !hgc_core::datum::is_good_prime(&dm, p) || p == 5 {
                    continue;
                }
                let f = hgc_core::series::truncated_f_padic(&dm, p - 1, p, 7).unwrap();
                let a_pin = f
                    .mul(&hgc_core::PadicNumber::from_i64((p * p) as i64, p, 8))
                    .signed_residue_mod(4)
                    .unwrap()
                    * legendre(-1, p);
                match hgc_core::euler::euler_factor_degenerate_removed(&dm, p) {
                    Ok((g, mu)) => println!(
                        "p={p}: a_pin={a_pin} g={:?} trace={} mu={mu} mags={:?}",
                        g.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        g.trace(),
                        g.root_magnitudes()
                    ),
                    Err(e) => println!("p={p}: a_pin={a_pin} euler failed: {e}"),
                }
            }
        }
        "pinm32" => {
            let dm = d(&[h(1, 2); 4], &[h(1, 1); 4], (-1, 1));
            for p in primes_to(41) {
                let f = hgc_core::series::truncated_f_padic(&dm, p - 1, p, 3).unwrap();
                let g14 = hgc_core::padic::gamma_p(&hgc_core::rat(1, 4), p, 3).unwrap();
                let g12 = hgc_core::padic::gamma_p(&hgc_core::rat(1, 2), p, 3).unwrap();
                let quot = g14.mul(&g14).div(&g12).unwrap();
                let a_pin = f.div(&quot).unwrap().signed_residue_mod(2).unwrap() * legendre(2, p);
                // CM shape: p = a^2 + b^2, a odd
                let cm = if p % 4 == 1 {
                    let mut s = String::new();
                    for a in 1..p {
                        let b2 = p - a * a;
                        let b = (b2 as f64).sqrt() as u64;
                        if a * a <= p && b * b == b2 && a % 2 == 1 {
                            s = format!(" p={a}^2+{b}^2, 2a={}", 2 * a);
                            break;
                        }
                    }
                    s
                } else {
                    String::new()
                };
                let quartic = if p <= 17 {
                    euler_factor(&dm, p, 4)
                        .map(|f| format!("{:?} mags={:?}", f.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(), f.root_magnitudes()))
                        .unwrap_or_else(|e| format!("euler failed: {e}"))
                } else {
                    "skipped".into()
                };
                println!("p={p} (p%4={}): a_pin(mod p^2)={a_pin}{cm} quartic={quartic}", p % 4);
            }
        }
        "thm6" => {
            let cases = [
                ("eg1", hgc_core::datum::named_datum("H1").unwrap()),
                ("311", d(
                    &[h(1, 2), h(1, 2), h(1, 3), h(2, 3), h(1, 3), h(2, 3)],
                    &[h(1, 1), h(1, 1), h(1, 6), h(5, 6), h(1, 6), h(5, 6)],
                    (1, 1),
                )),
                ("h5", hgc_core::datum::named_datum("H5").unwrap()),
                ("h7", hgc_core::datum::named_datum("H7").unwrap()),
            ];
            for (name, dm) in &cases {
                let pr = hgc_core::profile::profile(dm).unwrap();
                println!("--- {name}: s={} w={}", pr.s, pr.w);
                let (ahat, bbreve) = hgc_core::profile::hat_breve(dm).unwrap();
                let shifted = HypergeometricDatum::new(ahat, bbreve, dm.lambda().clone()).unwrap();
                println!("    hat/breve datum: {shifted}");
                for p in primes_to(31) {
                    if !hgc_core::datum::is_good_prime(dm, p) {
                        continue;
                    }
                    let t = hgc_core::profile::t_sum(dm.beta(), p).unwrap();
                    let s = pr.s;
                    let bnorm = hgc_core::datum::Multiset::new(
                        dm.beta()
                            .iter()
                            .map(|b| {
                                let f = b - b.floor();
                                if f == hgc_core::rat(0, 1) { hgc_core::rat(1, 1) } else { f }
                            })
                            .collect(),
                    );
                    let dmn = HypergeometricDatum::new(dm.alpha().frac_parts(), bnorm, dm.lambda().clone()).unwrap();
                    let hp = hgc_core::charsum::hp_padic(&dmn, p, 3).unwrap().padic.unwrap();
                    let pm_s = hgc_core::PadicNumber::from_i64(p as i64, p, 4).pow(-s).unwrap();
                    let lhs = hp.mul(&pm_s);
                    let fv = hgc_core::series::truncated_f_padic(&shifted, p - 1, p, 3).unwrap();
                    let rhs = fv.mul(&pm_s);
                    let l = lhs.signed_residue_mod(1).unwrap();
                    let r = rhs.signed_residue_mod(1).unwrap();
                    println!(
                        "p={p}: t={t} (-1)^t*lhs={} rhs={r} (match_plain={} match_signed={})",
                        if t % 2 == 1 { -l.clone() } else { l.clone() },
                        l == r,
                        (if t % 2 == 1 { -l.clone() } else { l.clone() }) == r
                    );
                }
            }
        }
        other => eprintln!("unknown section {other}"),
    }
}
