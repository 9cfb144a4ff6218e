use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Phase convention for spherical harmonics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// Standard Condon–Shortley harmonics: `Y_l^{-m} = (-1)^m conj(Y_l^m)`.
    #[default]
    CondonShortley,
    /// Condon–Shortley harmonics multiplied by `i^l`. These satisfy
    /// `(-1)^(l-m) Y_l^{-m} = conj(Y_l^m)`, the form used when pairing
    /// opposite-helicity transitions.
    Racah,
}

fn check_lm(l: i32, m: i32) -> Result<()> {
    if l < 0 || m.abs() > l {
        return Err(Error::InvalidQuantumNumbers(format!(
            "need 0 <= |m| <= l, got l = {l}, m = {m}"
        )));
    }
    Ok(())
}

/// Associated Legendre function `P_l^m(x)` including the Condon–Shortley
/// phase `(-1)^m`. Negative `m` uses `P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m`.
pub fn assoc_legendre(l: i32, m: i32, x: f64) -> Result<f64> {
    check_lm(l, m)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("assoc_legendre: |x| > 1 (x = {x})")));
    }
    let ma = m.abs();
    let p = legendre_nonneg(l, ma, x);
    if m >= 0 {
        return Ok(p);
    }
    // (l-|m|)!/(l+|m|)!
    let mut ratio = 1.0;
    for k in (l - ma + 1)..=(l + ma) {
        ratio /= k as f64;
    }
    let s = if ma % 2 == 0 { 1.0 } else { -1.0 };
    Ok(s * ratio * p)
}

// Upward recurrence in l from the sectoral seed P_m^m.
fn legendre_nonneg(l: i32, m: i32, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// Orthonormal spherical harmonic `Y_l^m(theta, phi)` in the Condon–Shortley
/// convention.
pub fn spherical_harmonic(l: i32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    spherical_harmonic_in(PhaseConvention::CondonShortley, l, m, theta, phi)
}

pub fn spherical_harmonic_in(
    convention: PhaseConvention,
    l: i32,
    m: i32,
    theta: f64,
    phi: f64,
) -> Result<Complex64> {
    check_lm(l, m)?;
    if !theta.is_finite() || !phi.is_finite() {
        return Err(domain("spherical_harmonic: non-finite angle"));
    }
    let ma = m.abs();
    // sqrt((2l+1)/4π (l-|m|)!/(l+|m|)!)
    let mut ratio = 1.0;
    for k in (l - ma + 1)..=(l + ma) {
        ratio /= k as f64;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let p = legendre_nonneg(l, ma, theta.cos());
    let mut y = Complex64::from_polar(norm * p, ma as f64 * phi);
    if m < 0 {
        y = y.conj();
        if ma % 2 == 1 {
            y = -y;
        }
    }
    if convention == PhaseConvention::Racah {
        y *= Complex64::i().powi(l);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_order_closed_forms() {
        assert_eq!(assoc_legendre(0, 0, 0.3).unwrap(), 1.0);
        for &x in &[-0.9, -0.2, 0.0, 0.4, 1.0] {
            assert!((assoc_legendre(1, 0, x).unwrap() - x).abs() < 1e-15);
        }
        let x: f64 = 0.5;
        let want = -3.0 * x * (1.0 - x * x).sqrt();
        assert!((assoc_legendre(2, 1, x).unwrap() - want).abs() < 1e-15);
        // P_3^2 = 15 x (1 - x^2)
        let want = 15.0 * x * (1.0 - x * x);
        assert!((assoc_legendre(3, 2, x).unwrap() - want).abs() < 1e-14);
        // P_2^{-1} = -1/6 P_2^1
        let want = 0.5 * x * (1.0 - x * x).sqrt();
        assert!((assoc_legendre(2, -1, x).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn domain_and_index_errors() {
        assert!(assoc_legendre(2, 1, 1.5).is_err());
        assert!(assoc_legendre(1, 2, 0.1).is_err());
        assert!(spherical_harmonic(2, 3, 0.1, 0.2).is_err());
    }

    #[test]
    fn stable_at_high_degree() {
        // P_l(1) = 1 for all l; P_l^m(1) = 0 for m > 0.
        assert!((assoc_legendre(50, 0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(assoc_legendre(50, 3, 1.0).unwrap(), 0.0);
        let y = spherical_harmonic(50, 50, 1.1, 0.3).unwrap();
        assert!(y.norm().is_finite() && y.norm() < 2.0);
    }

    #[test]
    fn constant_mode() {
        let y = spherical_harmonic(0, 0, 0.7, 2.1).unwrap();
        assert!((y.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16);
        assert_eq!(y.im, 0.0);
    }

    #[test]
    fn condon_shortley_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let l: i32 = rng.gen_range(0..8);
            let m = rng.gen_range(-l..=l);
            let th = rng.gen_range(0.0..PI);
            let ph = rng.gen_range(0.0..2.0 * PI);
            let lhs = spherical_harmonic(l, -m, th, ph).unwrap() * if m % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = spherical_harmonic(l, m, th, ph).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn racah_phase_conjugation_identity() {
        // (-1)^(l-m) Y_l^{-m} = conj(Y_l^m)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let l: i32 = rng.gen_range(0..8);
            let m = rng.gen_range(-l..=l);
            let th = rng.gen_range(0.0..PI);
            let ph = rng.gen_range(0.0..2.0 * PI);
            let s = if (l - m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let lhs = s * spherical_harmonic_in(PhaseConvention::Racah, l, -m, th, ph).unwrap();
            let rhs = spherical_harmonic_in(PhaseConvention::Racah, l, m, th, ph)
                .unwrap()
                .conj();
            assert!((lhs - rhs).norm() < 1e-12, "l={l} m={m}");
            let cs = spherical_harmonic(l, m, th, ph).unwrap();
            assert!((cs.norm() - rhs.norm()).abs() < 1e-14);
        }
    }
}
