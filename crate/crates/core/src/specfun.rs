//! Complex special functions in the exact flavour the solver needs: the
//! fixed square-root branch with Im √z ≥ 0, the Hankel function H₀⁽¹⁾ on
//! the closed upper half-plane, real J₀, the digamma value ψ(1), and the
//! free-space 2D/3D resolvent kernels built from them.
//!
//! Evaluation regions for H₀⁽¹⁾:
//! - |w| ≤ 14: ascending series for J₀ and Y₀ (A&S 9.1.10/9.1.13),
//!   accumulated in double-double because the partial sums grow like
//!   e^{|w|} while the result does not;
//! - |w| > 14: the Hankel asymptotic expansion (A&S 9.2.3), truncated at
//!   its smallest term;
//! - purely imaginary w = it: the connection H₀⁽¹⁾(it) = −(2i/π)K₀(t),
//!   with K₀ from its own series / cosh-integral / asymptotic regions;
//! - near-imaginary w (Im w > 6, |w| < 14): K₀ of complex argument via
//!   the cosh integral, avoiding the log-term cancellation the series
//!   suffers next to the imaginary axis.
//!
//! Region boundaries are validated against each other by the overlap
//! tests below and against extended-precision series oracles.

use num_complex::Complex64;

use crate::dd::{Cdd, Dd};
use crate::error::{Error, Result};
use crate::model::Dimension;

/// Euler–Mascheroni constant as a double-double pair.
const GAMMA_DD: Dd = Dd::new(0.5772156649015329, -4.942915152430645e-18);
/// 2/π as a double-double pair.
const TWO_OVER_PI_DD: Dd = Dd::new(std::f64::consts::FRAC_2_PI, -3.935735335036497e-17);
/// π/4 split for accurate phase reduction in the asymptotic branch.
const PI_QUARTER_HI: f64 = std::f64::consts::FRAC_PI_4;
const PI_QUARTER_LO: f64 = 3.061616997868383e-17;

/// Radius of the series/asymptotic switch for H₀⁽¹⁾ and J₀.
const SERIES_CUTOFF: f64 = 14.0;
/// Above this imaginary part the ascending series' log term poisons the
/// relative accuracy; route through K₀ of complex argument instead.
const IMAG_BAND: f64 = 6.0;
/// K₀ regions: series below, cosh-integral in between, asymptotic above.
const K0_SERIES_CUTOFF: f64 = 2.0;
const K0_ASYMPTOTIC_CUTOFF: f64 = 30.0;

/// √z with the branch fixed by √1 = 1 and the cut along [0, ∞): the
/// result always satisfies Im √z ≥ 0, with boundary values on the
/// positive axis taken from the upper half-plane (positive real root)
/// and √(−t) = i√t on the negative axis.
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            return Complex64::new(z.re.sqrt(), 0.0);
        }
        return Complex64::new(0.0, (-z.re).sqrt());
    }
    let w = z.sqrt();
    if w.im < 0.0 {
        -w
    } else {
        w
    }
}

/// ψ(1) = −γ.
pub fn digamma_one() -> f64 {
    -GAMMA_DD.hi
}

/// Hankel function H₀⁽¹⁾(w) for w in the closed upper half-plane, w ≠ 0.
pub fn hankel0_first(w: Complex64) -> Result<Complex64> {
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::ZeroArgument);
    }
    debug_assert!(w.im >= 0.0, "hankel0_first wants Im w >= 0, got {w}");
    if w.re < 0.0 {
        // H₀⁽¹⁾(−conj w) = −conj H₀⁽¹⁾(w); keeps conjugation symmetry
        // of the assembled Weyl matrices exact.
        let h = hankel0_first(Complex64::new(-w.re, w.im))?;
        return Ok(Complex64::new(-h.re, h.im));
    }
    if w.re == 0.0 {
        let k0 = k0_real(w.im);
        return Ok(Complex64::new(0.0, -TWO_OVER_PI_DD.hi * k0));
    }
    let a = w.norm();
    if a >= SERIES_CUTOFF {
        Ok(hankel0_asymptotic(w))
    } else if w.im > IMAG_BAND {
        Ok(hankel0_via_k0(w))
    } else {
        Ok(hankel0_series(w))
    }
}

/// Bessel function J₀(t) for real t ≥ 0.
pub fn bessel_j0(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    let t = t.abs();
    if t <= SERIES_CUTOFF {
        j0_series_real(t)
    } else {
        j0_asymptotic_real(t)
    }
}

/// Regularized free-space kernel G̃_{√z}: the resolvent kernel of −Δ at
/// separation r, with the diagonal convention G̃(0) = 0.
pub fn free_green(dim: Dimension, z: Complex64, r: f64) -> Result<Complex64> {
    debug_assert!(r >= 0.0);
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let w = branch_sqrt(z);
    match dim {
        Dimension::Three => {
            let f = 4.0 * std::f64::consts::PI * r;
            Ok((Complex64::i() * w * r).exp() / f)
        }
        Dimension::Two => {
            let h = hankel0_first(w * r)?;
            Ok(Complex64::new(0.0, 0.25) * h)
        }
    }
}

/// Ascending-series evaluation of H₀⁽¹⁾ = J₀ + iY₀ (double-double sums).
fn hankel0_series(w: Complex64) -> Complex64 {
    let (j, weighted) = ascending_sums(Cdd::from_f64(w.re, w.im));
    // Y₀ = (2/π)[(ln(w/2) + γ)·J₀ − Σ_{k≥1} H_k (−1)^k u_k].
    let lw = (w / 2.0).ln();
    let log_term = Cdd::new(Dd::from_f64(lw.re).add(GAMMA_DD), Dd::from_f64(lw.im));
    let y = log_term.mul(j).sub(weighted).mul_dd(TWO_OVER_PI_DD);
    Complex64::new(
        j.re.to_f64() - y.im.to_f64(),
        j.im.to_f64() + y.re.to_f64(),
    )
}

/// Shared series driver: returns (Σ t_k, Σ H_k t_k) with
/// t_k = (−w²/4)^k/(k!)², so the first sum is J₀(w).
fn ascending_sums(w: Cdd) -> (Cdd, Cdd) {
    let q = w.mul(w).div_f64(-4.0);
    let mut term = Cdd::from_f64(1.0, 0.0);
    let mut harmonic = Dd::from_f64(0.0);
    let mut plain = term;
    let mut weighted = Cdd::default();
    let mut peak = 1.0f64;
    for k in 1..=220u32 {
        let kk = (k as f64) * (k as f64);
        term = term.mul(q).div_f64(kk);
        harmonic = harmonic.add(Dd::from_f64(1.0).div_f64(k as f64));
        plain = plain.add(term);
        weighted = weighted.add(term.mul_dd(harmonic));
        let mag = term.norm_sqr_f64();
        peak = peak.max(mag);
        if mag < peak * 1e-76 && mag < 1e-76 {
            break;
        }
    }
    (plain, weighted)
}

/// Hankel asymptotic expansion, |w| ≳ 14, first quadrant.
fn hankel0_asymptotic(w: Complex64) -> Complex64 {
    // H₀⁽¹⁾(w) ~ √(2/(πw)) e^{i(w−π/4)} Σ (−i)^k c_k / w^k,
    // c_k = ((2k−1)!!)² / (k! 8^k), truncated at the smallest term.
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev_mag = 1.0f64;
    for k in 0..40u32 {
        let kf = k as f64;
        let ratio = Complex64::new(0.0, -1.0) * ((2.0 * kf + 1.0) * (2.0 * kf + 1.0))
            / (8.0 * (kf + 1.0) * w);
        term *= ratio;
        let mag = term.norm();
        if mag >= prev_mag || mag < 1e-18 {
            if mag < prev_mag {
                sum += term;
            }
            break;
        }
        sum += term;
        prev_mag = mag;
    }
    let pref = (TWO_OVER_PI_DD.hi / w).sqrt();
    let phase = (Complex64::i() * w).exp()
        * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2);
    pref * phase * sum
}

/// Near-imaginary-axis route: H₀⁽¹⁾(w) = −(2i/π) K₀(−iw).
fn hankel0_via_k0(w: Complex64) -> Complex64 {
    let zeta = Complex64::new(w.im, -w.re);
    let k0 = k0_complex_quadrature(zeta);
    Complex64::new(0.0, -TWO_OVER_PI_DD.hi) * k0
}

/// Real modified Bessel K₀(t), t > 0.
fn k0_real(t: f64) -> f64 {
    if t <= K0_SERIES_CUTOFF {
        k0_series(t)
    } else if t < K0_ASYMPTOTIC_CUTOFF {
        k0_quadrature(t)
    } else {
        k0_asymptotic(t)
    }
}

/// K₀ ascending series (A&S 9.6.13), t ≤ 2.
fn k0_series(t: f64) -> f64 {
    let q = t * t / 4.0;
    let mut u = 1.0f64;
    let mut harmonic = 0.0f64;
    let mut i0 = 1.0f64;
    let mut weighted = 0.0f64;
    for k in 1..60u32 {
        let kf = k as f64;
        u *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += u;
        weighted += harmonic * u;
        if u < 1e-18 {
            break;
        }
    }
    weighted - ((t / 2.0).ln() + GAMMA_DD.hi) * i0
}

/// K₀(t) = ∫₀^∞ e^{−t cosh u} du by the trapezoid rule; the integrand is
/// even and analytic with double-exponential decay, so a modest step
/// already reaches full double accuracy for t ≳ 2.
fn k0_quadrature(t: f64) -> f64 {
    let h = 0.02f64;
    let mut sum = 0.5f64;
    let mut k = 1u32;
    loop {
        let u = h * k as f64;
        let g = 2.0 * (0.5 * u).sinh().powi(2); // cosh u − 1
        let e = t * g;
        if e > 46.0 {
            break;
        }
        sum += (-e).exp();
        k += 1;
    }
    (-t).exp() * h * sum
}

/// K₀ asymptotic expansion (A&S 9.7.2), t ≥ 30.
fn k0_asymptotic(t: f64) -> f64 {
    let mut c = 1.0f64;
    let mut sum = 1.0f64;
    let mut sign = -1.0f64;
    for k in 0..30u32 {
        let kf = k as f64;
        c *= (2.0 * kf + 1.0) * (2.0 * kf + 1.0) / (8.0 * (kf + 1.0));
        let term = c / t.powi(k as i32 + 1);
        sum += sign * term;
        sign = -sign;
        if term < 1e-18 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * t)).sqrt() * (-t).exp() * sum
}

/// K₀ of complex argument by the cosh integral, Re ζ > 0. Used for the
/// band next to the imaginary axis, Re ζ ∈ (6, 14), |Im ζ| < 13.
fn k0_complex_quadrature(zeta: Complex64) -> Complex64 {
    debug_assert!(zeta.re > 0.0);
    let h = 0.02f64;
    let mut sum = Complex64::new(0.5, 0.0);
    let mut k = 1u32;
    loop {
        let u = h * k as f64;
        let g = 2.0 * (0.5 * u).sinh().powi(2);
        if zeta.re * g > 46.0 {
            break;
        }
        sum += (-zeta * g).exp();
        k += 1;
    }
    (-zeta).exp() * h * sum
}

/// Real-axis J₀ series in double-double, t ≤ 14.
fn j0_series_real(t: f64) -> f64 {
    let q = Dd::from_f64(t).mul(Dd::from_f64(t)).div_f64(-4.0);
    let mut term = Dd::from_f64(1.0);
    let mut sum = term;
    for k in 1..=80u32 {
        let kk = (k as f64) * (k as f64);
        term = term.mul(q).div_f64(kk);
        sum = sum.add(term);
        if term.hi.abs() < 1e-40 {
            break;
        }
    }
    sum.to_f64()
}

/// Real-axis asymptotic J₀, t > 14 (A&S 9.2.5 with the phase t − π/4
/// reduced in double-double).
fn j0_asymptotic_real(t: f64) -> f64 {
    // P = Σ (−1)^j c_{2j}/t^{2j},  Q = Σ (−1)^{j+1} c_{2j+1}/t^{2j+1}.
    let mut c = 1.0f64;
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut prev = 1.0f64;
    for k in 0..40u32 {
        let kf = k as f64;
        c *= (2.0 * kf + 1.0) * (2.0 * kf + 1.0) / (8.0 * (kf + 1.0));
        let term = c / t.powi(k as i32 + 1);
        if term >= prev {
            break;
        }
        prev = term;
        match k % 4 {
            0 => q -= term,
            1 => p -= term,
            2 => q += term,
            3 => p += term,
            _ => unreachable!(),
        }
        if term < 1e-18 {
            break;
        }
    }
    // Accurate phase t − π/4.
    let s = t - PI_QUARTER_HI;
    let lo = (t - s - PI_QUARTER_HI) - PI_QUARTER_LO;
    let (sin_s, cos_s) = s.sin_cos();
    let cos_phi = cos_s - lo * sin_s;
    let sin_phi = sin_s + lo * cos_s;
    (TWO_OVER_PI_DD.hi / t).sqrt() * (cos_phi * p - sin_phi * q)
}

/// Internal evaluation paths, exposed so the crossover-overlap checks in
/// the acceptance suite can compare them directly.
#[doc(hidden)]
pub mod internals {
    use super::*;

    pub fn hankel0_ascending(w: Complex64) -> Complex64 {
        hankel0_series(w)
    }

    pub fn hankel0_large(w: Complex64) -> Complex64 {
        hankel0_asymptotic(w)
    }

    pub fn hankel0_imag_band(w: Complex64) -> Complex64 {
        hankel0_via_k0(w)
    }

    pub fn k0_small(t: f64) -> f64 {
        k0_series(t)
    }

    pub fn k0_mid(t: f64) -> f64 {
        k0_quadrature(t)
    }

    pub fn k0_large(t: f64) -> f64 {
        k0_asymptotic(t)
    }

    pub fn k0(t: f64) -> f64 {
        k0_real(t)
    }

    pub fn j0_small(t: f64) -> f64 {
        j0_series_real(t)
    }

    pub fn j0_large(t: f64) -> f64 {
        j0_asymptotic_real(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PI: f64 = std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_sqrt_examples() {
        assert_eq!(branch_sqrt(c(-1.0, 0.0)), c(0.0, 1.0));
        assert_eq!(branch_sqrt(c(4.0, 0.0)), c(2.0, 0.0));
        let w = branch_sqrt(c(0.0, 2.0));
        assert!((w - c(1.0, 1.0)).norm() < 1e-15);
        assert_eq!(branch_sqrt(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn branch_sqrt_invariants_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xB1A2);
        for _ in 0..10_000 {
            let z = c(
                rng.gen_range(-1e6..1e6),
                rng.gen_range(-1e6..1e6),
            );
            let w = branch_sqrt(z);
            assert!(w.im >= 0.0, "Im sqrt < 0 for {z}");
            let err = (w * w - z).norm();
            assert!(err <= 1e-14 * z.norm().max(1.0), "w^2 != z for {z}: {err:e}");
        }
    }

    #[test]
    fn branch_sqrt_conjugation_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-50.0..50.0), rng.gen_range(0.01..50.0));
            let w = branch_sqrt(z);
            let wc = branch_sqrt(z.conj());
            assert_eq!(wc, -w.conj());
        }
    }

    #[test]
    fn digamma_one_value() {
        assert_eq!(digamma_one(), -0.5772156649015329);
        assert_eq!(digamma_one() + 0.5772156649015329, 0.0);
        assert!((digamma_one().exp() - 0.5614594836).abs() < 1e-9);
        let g = deltaspec_oracle::euler_gamma_f64();
        assert!((digamma_one() + g).abs() < 1e-16);
    }

    #[test]
    fn hankel_at_one_matches_oracle() {
        let h = hankel0_first(c(1.0, 0.0)).unwrap();
        assert!((h.re - 0.7651976866).abs() < 1e-9);
        assert!((h.im - 0.0882569642).abs() < 1e-9);
        assert!((h.re - deltaspec_oracle::j0_f64(1.0)).abs() < 1e-15);
        assert!((h.im - deltaspec_oracle::y0_f64(1.0)).abs() < 1e-15);
    }

    #[test]
    fn hankel_rejects_zero() {
        assert!(matches!(
            hankel0_first(c(0.0, 0.0)),
            Err(Error::ZeroArgument)
        ));
    }

    #[test]
    fn hankel_small_argument_expansion() {
        // H₀⁽¹⁾(w) = 1 + (2i/π)(ln(w/2) − ψ(1)) + o(w) for w → 0.
        for &w in &[1e-3, 1e-5, 1e-7] {
            let h = hankel0_first(c(w, 0.0)).unwrap();
            let lead = c(1.0, 0.0)
                + c(0.0, 2.0 / PI) * ((c(w, 0.0) / 2.0).ln() - digamma_one());
            let err = (h - lead).norm();
            assert!(
                err < 20.0 * w * w * (1.0 + w.ln().abs()),
                "w={w}: err={err:e}"
            );
        }
    }

    #[test]
    fn hankel_imaginary_axis_is_k0() {
        for &t in &[0.05, 0.5, 1.0, 2.0, 3.7, 8.0, 19.0, 41.0, 120.0] {
            let h = hankel0_first(c(0.0, t)).unwrap();
            let expected = -(2.0 / PI) * deltaspec_oracle::k0_f64(t);
            assert_eq!(h.re, 0.0);
            assert!(
                (h.im - expected).abs() <= 1e-12 * expected.abs(),
                "t={t}: got {} want {}",
                h.im,
                expected
            );
        }
    }

    #[test]
    fn hankel_real_axis_vs_oracle_grid() {
        // log grid across both evaluation regions
        let mut t = 1e-6f64;
        while t <= 1.0e3 {
            let h = hankel0_first(c(t, 0.0)).unwrap();
            let j = deltaspec_oracle::j0_f64(t);
            let y = deltaspec_oracle::y0_f64(t);
            let scale = (j * j + y * y).sqrt();
            let err = (h - c(j, y)).norm();
            assert!(err <= 1e-11 * scale, "t={t}: rel err {:e}", err / scale);
            t *= 3.9;
        }
    }

    #[test]
    fn hankel_negative_real_axis_reflection() {
        let h = hankel0_first(c(-3.0, 0.0)).unwrap();
        let hp = hankel0_first(c(3.0, 0.0)).unwrap();
        assert_eq!(h, c(-hp.re, hp.im));
    }

    #[test]
    fn hankel_ode_residual_ratio() {
        // w'' + w'/t + w = 0; central differences, residual O(h²).
        for &t in &[0.5, 3.0, 17.0, 50.0] {
            let f = |x: f64| hankel0_first(c(x, 0.0)).unwrap();
            let resid = |h: f64| {
                let (fm, f0, fp) = (f(t - h), f(t), f(t + h));
                let d2 = (fp - 2.0 * f0 + fm) / (h * h);
                let d1 = (fp - fm) / (2.0 * h);
                (d2 + d1 / t + f0).norm()
            };
            let (r1, r2) = (resid(1e-3), resid(5e-4));
            let ratio = r1 / r2;
            assert!(
                (2.8..5.2).contains(&ratio),
                "t={t}: residuals {r1:e}/{r2:e} ratio {ratio}"
            );
        }
    }

    #[test]
    fn j0_examples() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!((bessel_j0(1.0) - 0.7651976865579666).abs() < 1e-14);
        let z = 2.404825557695773;
        assert!(bessel_j0(z - 1e-9) > 0.0);
        assert!(bessel_j0(z + 1e-9) < 0.0);
    }

    #[test]
    fn j0_vs_oracle_grid() {
        let mut t = 1e-6f64;
        while t <= 1.0e3 {
            let err = (bessel_j0(t) - deltaspec_oracle::j0_f64(t)).abs();
            assert!(err <= 1e-12, "t={t}: abs err {err:e}");
            t *= 2.7;
        }
        // up to the contract limit
        for &t in &[2e3, 1e4] {
            let err = (bessel_j0(t) - deltaspec_oracle::j0_f64(t)).abs();
            assert!(err <= 1e-12, "t={t}: abs err {err:e}");
        }
    }

    #[test]
    fn j0_is_real_part_of_hankel() {
        let mut t = 0.3f64;
        while t < 60.0 {
            let h = hankel0_first(c(t, 0.0)).unwrap();
            assert!((bessel_j0(t) - h.re).abs() < 1e-10);
            t *= 1.7;
        }
    }

    #[test]
    fn free_green_examples() {
        let g3 = free_green(Dimension::Three, c(-1.0, 0.0), 1.0).unwrap();
        let want = (-1.0f64).exp() / (4.0 * PI);
        assert!((g3 - c(want, 0.0)).norm() < 1e-16);
        assert!((want - 0.02927491).abs() < 1e-8);

        assert_eq!(
            free_green(Dimension::Three, c(2.5, 1.0), 0.0).unwrap(),
            c(0.0, 0.0)
        );

        let g2 = free_green(Dimension::Two, c(-1.0, 0.0), 1.0).unwrap();
        let want2 = deltaspec_oracle::k0_f64(1.0) / (2.0 * PI);
        assert_eq!(g2.im, 0.0);
        assert!((g2.re - want2).abs() < 1e-15);
    }

    #[test]
    fn free_green_radial_helmholtz_residual() {
        // (d²/dr²)(r G) + z (r G) = 0 for the 3D kernel, checked by
        // second differences with the O(h²) ratio test.
        let z = c(-2.0, 0.0);
        for &r in &[0.5, 1.5, 4.0] {
            let rg = |x: f64| free_green(Dimension::Three, z, x).unwrap() * x;
            let resid = |h: f64| {
                ((rg(r + h) - 2.0 * rg(r) + rg(r - h)) / (h * h) + z * rg(r)).norm()
            };
            let ratio = resid(1e-3) / resid(5e-4);
            assert!((2.8..5.2).contains(&ratio), "r={r}: ratio {ratio}");
        }
    }

    #[test]
    fn free_green_2d_radial_residual() {
        // 2D radial Helmholtz: g'' + g'/r + z·g = 0 for the kernel at
        // z = −s²; probes the K₀ series, quadrature, and asymptotic
        // regions through their derivatives.
        for &(s, r) in &[(1.0f64, 1.0f64), (4.0, 1.5), (10.0, 2.4), (0.5, 2.0)] {
            let z = c(-s * s, 0.0);
            let g = |x: f64| free_green(Dimension::Two, z, x).unwrap();
            let resid = |h: f64| {
                let (gm, g0, gp) = (g(r - h), g(r), g(r + h));
                let d2 = (gp - 2.0 * g0 + gm) / (h * h);
                let d1 = (gp - gm) / (2.0 * h);
                (d2 + d1 / r + z * g0).norm()
            };
            let ratio = resid(2e-2) / resid(1e-2);
            assert!((3.0..5.2).contains(&ratio), "s={s} r={r}: ratio {ratio}");
        }
    }

    #[test]
    fn bessel_wronskian_identity() {
        // J₀ Y₀' − J₀' Y₀ = 2/(πt), with centered differences
        for &t in &[0.7f64, 3.3, 9.0, 21.0] {
            let h = 1e-5;
            let y = |x: f64| hankel0_first(c(x, 0.0)).unwrap().im;
            let jp = (bessel_j0(t + h) - bessel_j0(t - h)) / (2.0 * h);
            let yp = (y(t + h) - y(t - h)) / (2.0 * h);
            let w = bessel_j0(t) * yp - jp * y(t);
            let want = 2.0 / (PI * t);
            assert!((w - want).abs() < 1e-8 * want.abs().max(1e-3), "t={t}");
        }
    }

    #[test]
    fn crossover_overlap_series_vs_asymptotic() {
        // Both H₀ paths must agree through the switch radius.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let a = rng.gen_range(13.0..15.0);
            let phi = rng.gen_range(0.0..0.42f64); // keep Im w ≤ 6
            let w = c(a * phi.cos(), a * phi.sin());
            let hs = internals::hankel0_ascending(w);
            let ha = internals::hankel0_large(w);
            let scale = hs.norm();
            assert!(
                (hs - ha).norm() <= 1e-10 * scale,
                "w={w}: mismatch {:e}",
                (hs - ha).norm() / scale
            );
        }
    }

    #[test]
    fn crossover_overlap_series_vs_imag_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let im = rng.gen_range(5.0..7.0);
            let re = rng.gen_range(0.3..10.0);
            let w = c(re, im);
            if w.norm() >= SERIES_CUTOFF {
                continue;
            }
            let hs = internals::hankel0_ascending(w);
            let hb = internals::hankel0_imag_band(w);
            let scale = hs.norm();
            assert!(
                (hs - hb).norm() <= 1e-10 * scale,
                "w={w}: mismatch {:e}",
                (hs - hb).norm() / scale
            );
        }
    }

    #[test]
    fn crossover_overlap_imag_band_vs_asymptotic() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let a = rng.gen_range(13.0..15.0);
            let phi = rng.gen_range(0.6..1.45f64);
            let w = c(a * phi.cos(), a * phi.sin());
            if w.im <= IMAG_BAND {
                continue;
            }
            let hb = internals::hankel0_imag_band(w);
            let ha = internals::hankel0_large(w);
            let scale = hb.norm();
            assert!(
                (hb - ha).norm() <= 1e-10 * scale,
                "w={w}: mismatch {:e}",
                (hb - ha).norm() / scale
            );
        }
    }

    #[test]
    fn k0_region_overlaps_against_oracle() {
        for &t in &[1.6, 1.9, 2.0, 2.1, 2.6] {
            let a = internals::k0_small(t);
            let b = internals::k0_mid(t);
            let want = deltaspec_oracle::k0_f64(t);
            assert!((a - want).abs() < 1e-12 * want, "series t={t}");
            assert!((b - want).abs() < 1e-12 * want, "quad t={t}");
        }
        for &t in &[26.0, 29.0, 30.0, 31.0, 35.0] {
            let b = internals::k0_mid(t);
            let c_ = internals::k0_large(t);
            let want = deltaspec_oracle::k0_f64(t);
            assert!((b - want).abs() < 1e-12 * want, "quad t={t}");
            assert!((c_ - want).abs() < 1e-12 * want, "asym t={t}");
        }
    }

    #[test]
    fn j0_crossover_overlap() {
        for &t in &[13.0, 13.7, 14.0, 14.3, 15.0] {
            let a = internals::j0_small(t);
            let b = internals::j0_large(t);
            assert!((a - b).abs() < 1e-12, "t={t}: {:e}", (a - b).abs());
        }
    }

    #[test]
    fn hankel_random_upper_half_plane_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let w = c(rng.gen_range(-40.0..40.0), rng.gen_range(0.0..40.0));
            if w.norm() < 1e-12 {
                continue;
            }
            let h = hankel0_first(w).unwrap();
            assert!(h.re.is_finite() && h.im.is_finite(), "w={w}");
        }
    }
}
