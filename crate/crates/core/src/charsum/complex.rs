//! Self-contained fixed-point complex arithmetic for the Gauss-sum
//! oracle.
//!
//! Values are pairs of `BigInt` mantissas at a global binary scale
//! 2^-bits, with a per-value upper bound on the accumulated absolute
//! error carried alongside (propagated through every operation, plus one
//! half-ulp of rounding per multiplication). The error bookkeeping is
//! deliberately coarse — it only needs to certify residuals around
//! 1e-6 while the arithmetic itself carries hundreds of bits.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// A complex number `(re + i*im) / 2^bits` with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Cpx {
    pub re: BigInt,
    pub im: BigInt,
    pub bits: u32,
    /// upper bound on |true value - represented value|
    pub err: f64,
}

fn shr_round(x: &BigInt, bits: u32) -> BigInt {
    // round-to-nearest keeps the half-ulp bound tight
    let half = BigInt::from(1) << (bits - 1);
    (x + half) >> bits
}

impl Cpx {
    pub fn zero(bits: u32) -> Cpx {
        Cpx { re: BigInt::zero(), im: BigInt::zero(), bits, err: 0.0 }
    }

    pub fn from_integer(n: i64, bits: u32) -> Cpx {
        Cpx { re: BigInt::from(n) << bits, im: BigInt::zero(), bits, err: 0.0 }
    }

    fn ulp(bits: u32) -> f64 {
        (2.0f64).powi(-(bits as i32))
    }

    pub fn add(&self, o: &Cpx) -> Cpx {
        debug_assert_eq!(self.bits, o.bits);
        Cpx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            bits: self.bits,
            err: self.err + o.err,
        }
    }

    pub fn sub(&self, o: &Cpx) -> Cpx {
        debug_assert_eq!(self.bits, o.bits);
        Cpx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            bits: self.bits,
            err: self.err + o.err,
        }
    }

    pub fn conj(&self) -> Cpx {
        Cpx { re: self.re.clone(), im: -&self.im, bits: self.bits, err: self.err }
    }

    /// |value| as a lowly f64, sufficient for error propagation.
    pub fn abs_f64(&self) -> f64 {
        let s = Cpx::ulp(self.bits);
        let re = self.re.to_f64().unwrap_or(f64::MAX) * s;
        let im = self.im.to_f64().unwrap_or(f64::MAX) * s;
        re.hypot(im)
    }

    pub fn mul(&self, o: &Cpx) -> Cpx {
        debug_assert_eq!(self.bits, o.bits);
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let err = self.err * o.abs_f64()
            + o.err * self.abs_f64()
            + self.err * o.err
            + 2.0 * Cpx::ulp(self.bits);
        Cpx {
            re: shr_round(&re, self.bits),
            im: shr_round(&im, self.bits),
            bits: self.bits,
            err,
        }
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, n: i64) -> Cpx {
        let nb = BigInt::from(n);
        Cpx {
            re: &self.re / &nb,
            im: &self.im / &nb,
            bits: self.bits,
            err: self.err / (n.abs() as f64) + 2.0 * Cpx::ulp(self.bits),
        }
    }

    /// Full complex division with error propagation.
    pub fn div(&self, o: &Cpx) -> Cpx {
        let denom = o.abs_f64();
        let num = self.mul(&o.conj());
        // |o|^2 at scale: (o.re^2 + o.im^2) / 2^bits
        let n2 = (&o.re * &o.re + &o.im * &o.im) >> o.bits;
        let shifted_num_re = &num.re << o.bits;
        let shifted_num_im = &num.im << o.bits;
        let re = &shifted_num_re / &n2;
        let im = &shifted_num_im / &n2;
        // relative error of |o|^2 feeds through; coarse but safe bound
        let err = (num.err + self.abs_f64() * 2.0 * o.err / denom.max(1e-300))
            / (denom * denom).max(1e-300)
            + 4.0 * Cpx::ulp(self.bits);
        Cpx { re, im, bits: self.bits, err }
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::MAX) * Cpx::ulp(self.bits)
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64().unwrap_or(f64::MAX) * Cpx::ulp(self.bits)
    }
}

/// pi at scale 2^-bits via Machin's formula, with a few guard bits.
pub fn pi_fixed(bits: u32) -> BigInt {
    let guard = 16u32;
    let b = bits + guard;
    let atan_inv = |x: i64| -> BigInt {
        // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
        let x2 = BigInt::from(x) * BigInt::from(x);
        let mut term = (BigInt::from(1) << b) / BigInt::from(x);
        let mut sum = term.clone();
        let mut k = 1u64;
        while !term.is_zero() {
            term = &term / &x2;
            let contrib = &term / BigInt::from(2 * k + 1);
            if contrib.is_zero() {
                break;
            }
            if k % 2 == 1 {
                sum -= &contrib;
            } else {
                sum += &contrib;
            }
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
    shr_round(&pi, guard)
}

/// e^(i*theta) for theta = 2*pi*num/den by sin/cos Taylor series.
/// Requires |theta| <= pi (callers pass num/den in [0, 1/2]).
fn exp_i_two_pi(num: u64, den: u64, bits: u32) -> Cpx {
    debug_assert!(2 * num <= den);
    let guard = 32u32;
    let b = bits + guard;
    let theta_num = pi_fixed(b) * BigInt::from(2 * num);
    let theta = theta_num / BigInt::from(den); // scale 2^-b, |theta| <= pi
    // cos: sum (-1)^k theta^(2k) / (2k)!; sin analogous
    let mut cos = BigInt::from(1) << b;
    let mut sin = theta.clone();
    let mut term = theta.clone(); // theta^m / m!, currently m=1
    let mut m = 1u64;
    loop {
        // advance m -> m+1
        m += 1;
        term = shr_round(&(&term * &theta), b) / BigInt::from(m);
        if term.is_zero() {
            break;
        }
        let target = if m % 2 == 0 { &mut cos } else { &mut sin };
        match (m / 2) % 2 {
            1 => *target -= &term,
            _ => *target += &term,
        }
        if m > 4 * b as u64 {
            break; // unreachable safety stop
        }
    }
    Cpx {
        re: shr_round(&cos, guard),
        im: shr_round(&sin, guard),
        bits,
        // truncation of pi/theta/series fits comfortably in the guard
        err: 8.0 * Cpx::ulp(bits),
    }
}

/// All den-th roots of unity zeta^m, m in [0, den), by taking powers of
/// the primitive root (linear error growth, bounded explicitly).
pub fn roots_of_unity(den: u64, bits: u32) -> Vec<Cpx> {
    debug_assert!(den >= 1);
    if den == 1 {
        return vec![Cpx::from_integer(1, bits)];
    }
    if den == 2 {
        return vec![Cpx::from_integer(1, bits), Cpx::from_integer(-1, bits)];
    }
    let zeta = exp_i_two_pi(1, den, bits);
    let mut out = Vec::with_capacity(den as usize);
    out.push(Cpx::from_integer(1, bits));
    for m in 1..den {
        let prev = &out[(m - 1) as usize];
        out.push(prev.mul(&zeta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_f64() {
        let pi = pi_fixed(128);
        let approx = pi.to_f64().unwrap() * (2.0f64).powi(-128);
        assert!((approx - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn roots_sum_to_zero() {
        for den in [3u64, 5, 7, 24, 60] {
            let roots = roots_of_unity(den, 192);
            let mut sum = Cpx::zero(192);
            for r in &roots {
                // each root has modulus 1 within its error bound
                assert!((r.abs_f64() - 1.0).abs() < 1e-20 + r.err, "den={den}");
                sum = sum.add(r);
            }
            assert!(sum.abs_f64() < 1e-20 + sum.err);
            assert!(sum.err < 1e-9, "error bound blew up: {}", sum.err);
        }
    }

    #[test]
    fn root_powers_consistent() {
        let roots = roots_of_unity(12, 192);
        // zeta^3 = i
        assert!((roots[3].re_f64()).abs() < 1e-12);
        assert!((roots[3].im_f64() - 1.0).abs() < 1e-12);
        // zeta^6 = -1
        assert!((roots[6].re_f64() + 1.0).abs() < 1e-12);
        // closure under multiplication
        let prod = roots[5].mul(&roots[11]);
        assert!((prod.re_f64() - roots[4].re_f64()).abs() < 1e-12);
        assert!((prod.im_f64() - roots[4].im_f64()).abs() < 1e-12);
    }

    #[test]
    fn division_roundtrip() {
        let a = roots_of_unity(7, 192)[3].clone();
        let b = roots_of_unity(7, 192)[2].clone();
        let q = a.div(&b).mul(&b);
        assert!((q.re_f64() - a.re_f64()).abs() < 1e-12);
        assert!((q.im_f64() - a.im_f64()).abs() < 1e-12);
        assert!(q.err < 1e-9);
    }
}
