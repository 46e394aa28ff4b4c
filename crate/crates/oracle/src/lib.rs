//! Extended-precision reference values for the test suites.
//!
//! Everything here is evaluated in fixed-point big-integer arithmetic
//! (384 fractional bits, roughly 115 decimal digits), so the ascending
//! series for J₀, Y₀, I₀, K₀ can be summed straight through their huge
//! intermediate terms without any cancellation loss. The evaluators are
//! deliberately naive — one series each, no regime switching — so they
//! stay independent of the production code paths they are used to check.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Fractional bits of the fixed-point representation (~482 decimal
/// digits). The ascending Bessel series cancel through terms of size
/// e^t, so supporting the oracle grid up to t = 10³ needs the absolute
/// resolution to sit ~450 digits below the result.
const FRAC_BITS: u64 = 1600;

/// Fixed-point number: value = mantissa / 2^FRAC_BITS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx(BigInt);

impl Fx {
    pub fn zero() -> Self {
        Fx(BigInt::zero())
    }

    pub fn one() -> Self {
        Fx(BigInt::from(1) << FRAC_BITS)
    }

    pub fn from_int(v: i64) -> Self {
        Fx(BigInt::from(v) << FRAC_BITS)
    }

    /// Exact conversion: every finite f64 is dyadic.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "oracle input must be finite");
        if x == 0.0 {
            return Fx::zero();
        }
        let (mant, exp, sign) = integer_decode(x);
        let mut b = BigInt::from(mant) * BigInt::from(sign);
        let shift = exp + FRAC_BITS as i32;
        if shift >= 0 {
            b <<= shift as u32;
        } else {
            b >>= (-shift) as u32;
        }
        Fx(b)
    }

    /// Parse a decimal literal such as "0.57721566490153286060651209008240243104".
    pub fn from_decimal(s: &str) -> Self {
        let (sign, s) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s),
        };
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        let int: BigInt = int_part.parse().expect("bad integer part");
        let mut out = int << FRAC_BITS;
        if !frac_part.is_empty() {
            let digits: BigInt = frac_part.parse().expect("bad fraction part");
            let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
            out += (digits << FRAC_BITS) / denom;
        }
        Fx(out * sign)
    }

    pub fn neg(&self) -> Self {
        Fx(-&self.0)
    }

    pub fn add(&self, rhs: &Fx) -> Self {
        Fx(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &Fx) -> Self {
        Fx(&self.0 - &rhs.0)
    }

    pub fn mul(&self, rhs: &Fx) -> Self {
        Fx((&self.0 * &rhs.0) >> FRAC_BITS)
    }

    pub fn div(&self, rhs: &Fx) -> Self {
        assert!(!rhs.0.is_zero(), "division by zero");
        Fx((&self.0 << FRAC_BITS) / &rhs.0)
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        Fx(&self.0 * BigInt::from(k))
    }

    pub fn div_u64(&self, k: u64) -> Self {
        Fx(&self.0 / BigInt::from(k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Fx(self.0.abs())
    }

    pub fn cmp_abs(&self, rhs: &Fx) -> Ordering {
        self.0.abs().cmp(&rhs.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let neg = self.0.is_negative();
        let mag = self.0.abs();
        let bits = mag.bits();
        // Convert the top 128 bits (correctly rounded by the u128 cast)
        // and restore the scale with an exact power of two.
        let val = if bits <= 128 {
            mag.to_u128().unwrap() as f64 * 2f64.powi(-(FRAC_BITS as i32))
        } else {
            let shift = bits - 128;
            let m = (mag >> shift).to_u128().unwrap();
            m as f64 * 2f64.powi(shift as i32 - FRAC_BITS as i32)
        };
        if neg {
            -val
        } else {
            val
        }
    }
}

fn integer_decode(x: f64) -> (u64, i32, i64) {
    let bits = x.to_bits();
    let sign: i64 = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = if exponent == 0 {
        (bits & 0x000f_ffff_ffff_ffff) << 1
    } else {
        (bits & 0x000f_ffff_ffff_ffff) | 0x0010_0000_0000_0000
    };
    exponent -= 1075;
    (mantissa, exponent, sign)
}

/// atan(1/k) by the Gregory series, k ≥ 2.
fn atan_inv(k: u64) -> Fx {
    let k2 = k * k;
    let mut term = Fx::one().div_u64(k);
    let mut sum = Fx::zero();
    let mut j: u64 = 0;
    loop {
        let contrib = term.div_u64(2 * j + 1);
        if contrib.is_zero() {
            break;
        }
        if j.is_multiple_of(2) {
            sum = sum.add(&contrib);
        } else {
            sum = sum.sub(&contrib);
        }
        term = term.div_u64(k2);
        j += 1;
    }
    sum
}

/// π via the Machin formula 16·atan(1/5) − 4·atan(1/239).
pub fn pi() -> &'static Fx {
    static PI: OnceLock<Fx> = OnceLock::new();
    PI.get_or_init(|| atan_inv(5).mul_u64(16).sub(&atan_inv(239).mul_u64(4)))
}

/// ln 2 = 2·atanh(1/3).
fn ln2() -> &'static Fx {
    static LN2: OnceLock<Fx> = OnceLock::new();
    LN2.get_or_init(|| {
        let mut term = Fx::one().div_u64(3);
        let mut sum = Fx::zero();
        let mut j: u64 = 0;
        loop {
            let contrib = term.div_u64(2 * j + 1);
            if contrib.is_zero() {
                break;
            }
            sum = sum.add(&contrib);
            term = term.div_u64(9);
            j += 1;
        }
        sum.mul_u64(2)
    })
}

/// Natural logarithm of a positive fixed-point number.
pub fn ln(x: &Fx) -> Fx {
    assert!(!x.is_negative() && !x.is_zero(), "ln needs x > 0");
    // Normalize to m in [1, 2): x = m * 2^e.
    let bits = x.0.bits() as i64;
    let e = bits - 1 - FRAC_BITS as i64;
    let m = if e >= 0 {
        Fx(&x.0 >> e as u32)
    } else {
        Fx(&x.0 << (-e) as u32)
    };
    // atanh series for ln m, r = (m-1)/(m+1) in [0, 1/3).
    let r = m.sub(&Fx::one()).div(&m.add(&Fx::one()));
    let r2 = r.mul(&r);
    let mut term = r.clone();
    let mut sum = Fx::zero();
    let mut j: u64 = 0;
    loop {
        let contrib = term.div_u64(2 * j + 1);
        if contrib.is_zero() {
            break;
        }
        sum = sum.add(&contrib);
        term = term.mul(&r2);
        j += 1;
    }
    let ln_m = sum.mul_u64(2);
    if e >= 0 {
        ln_m.add(&ln2().mul_u64(e as u64))
    } else {
        ln_m.sub(&ln2().mul_u64((-e) as u64))
    }
}

/// Euler–Mascheroni constant by the Brent–McMillan identity
/// γ = S(n)/I(n) − ln n + O(e^{−4n}) with S, I the H_k-weighted and
/// plain I₀-type sums at argument 2n; n = 170 leaves the remainder far
/// below the working precision.
pub fn euler_gamma() -> &'static Fx {
    static GAMMA: OnceLock<Fx> = OnceLock::new();
    GAMMA.get_or_init(|| {
        const N: u64 = 170;
        let t = Fx::from_int((2 * N) as i64);
        let (plain, weighted) = bessel_series(&t, false);
        weighted.div(&plain).sub(&ln(&Fx::from_int(N as i64)))
    })
}

/// The harmonic-limit route to γ (H_N − ln N with Euler–Maclaurin
/// corrections, remainder ~0.44·N^{−16}); used to cross-verify
/// [`euler_gamma`] by an independent derivation.
pub fn euler_gamma_harmonic_limit() -> Fx {
    const N: u64 = 100_000;
    let mut h = Fx::zero();
    for k in 1..=N {
        h = h.add(&Fx::one().div_u64(k));
    }
    let n_fx = Fx::from_int(N as i64);
    let mut g = h.sub(&ln(&n_fx));
    let n2 = N * N;
    let inv = |num: i64, den: u64, pow2k: u32| -> Fx {
        let mut t = Fx::from_int(num);
        for _ in 0..pow2k {
            t = t.div_u64(n2);
        }
        t.div_u64(den)
    };
    g = g.sub(&Fx::one().div_u64(2 * N));
    g = g.add(&inv(1, 12, 1));
    g = g.sub(&inv(1, 120, 2));
    g = g.add(&inv(1, 252, 3));
    g = g.sub(&inv(1, 240, 4));
    g = g.add(&inv(1, 132, 5));
    g = g.sub(&inv(691, 32760, 6));
    g = g.add(&inv(1, 12, 7));
    g
}

/// Shared series driver. Returns (Σ σ^k u_k, Σ σ^k H_k u_k) with
/// u_k = (t²/4)^k / (k!)², H_k the harmonic numbers, σ the sign per term
/// (alternating for J₀/Y₀, constant for I₀/K₀).
fn bessel_series(t: &Fx, alternating: bool) -> (Fx, Fx) {
    let q = t.mul(t).div_u64(4);
    let mut u = Fx::one();
    let mut h = Fx::zero();
    let mut plain = Fx::one();
    let mut weighted = Fx::zero();
    let mut k: u64 = 1;
    loop {
        u = u.mul(&q).div_u64(k).div_u64(k);
        if u.is_zero() {
            break;
        }
        h = h.add(&Fx::one().div_u64(k));
        let hu = h.mul(&u);
        if alternating && !k.is_multiple_of(2) {
            plain = plain.sub(&u);
            weighted = weighted.sub(&hu);
        } else {
            plain = plain.add(&u);
            weighted = weighted.add(&hu);
        }
        k += 1;
    }
    (plain, weighted)
}

/// J₀(t) by the ascending series, any t ≥ 0 (practical up to ~2·10³).
pub fn j0(t: f64) -> Fx {
    let t_fx = Fx::from_f64(t.abs());
    bessel_series(&t_fx, true).0
}

/// Y₀(t) = (2/π)[(ln(t/2) + γ)J₀(t) − Σ_{k≥1}(−1)^k H_k u_k], t > 0.
pub fn y0(t: f64) -> Fx {
    assert!(t > 0.0);
    let t_fx = Fx::from_f64(t);
    let (j, w) = bessel_series(&t_fx, true);
    let lg = ln(&t_fx.div_u64(2)).add(euler_gamma());
    // For the alternating series the H_k-weighted sum enters with
    // opposite sign: Σ(−1)^{k+1} H_k u_k = −w.
    lg.mul(&j).sub(&w).mul_u64(2).div(pi())
}

/// I₀(t) by the ascending series.
pub fn i0(t: f64) -> Fx {
    let t_fx = Fx::from_f64(t.abs());
    bessel_series(&t_fx, false).0
}

/// K₀(t) = −(ln(t/2) + γ)I₀(t) + Σ_{k≥1} H_k u_k, t > 0.
pub fn k0(t: f64) -> Fx {
    assert!(t > 0.0);
    let t_fx = Fx::from_f64(t);
    let (i, w) = bessel_series(&t_fx, false);
    w.sub(&ln(&t_fx.div_u64(2)).add(euler_gamma()).mul(&i))
}

pub fn j0_f64(t: f64) -> f64 {
    j0(t).to_f64()
}

pub fn y0_f64(t: f64) -> f64 {
    y0(t).to_f64()
}

pub fn k0_f64(t: f64) -> f64 {
    k0(t).to_f64()
}

pub fn i0_f64(t: f64) -> f64 {
    i0(t).to_f64()
}

pub fn euler_gamma_f64() -> f64 {
    euler_gamma().to_f64()
}

/// Splits a constant into a double-double pair (hi, lo) with hi = nearest
/// f64 and lo the leading part of the remainder.
pub fn to_f64_pair(x: &Fx) -> (f64, f64) {
    let hi = x.to_f64();
    let lo = x.sub(&Fx::from_f64(hi)).to_f64();
    (hi, lo)
}
