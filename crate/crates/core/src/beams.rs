//! Bessel vortex modes for light and for electrons.
//!
//! Both kinds share the scalar profile `J_l(k⊥ρ) e^{i k_z z} e^{i l φ} e^{-iωt}`.
//! The optical mode multiplies it by `E₀ ε̂` and derives the transverse vector
//! potential `A = (-i/ω) E`; the electron mode multiplies it by a
//! normalisation constant fixed on a finite cylinder, since Bessel beams are
//! not square-integrable.

use crate::error::{domain, Error, Result};
use crate::quadrature::Tolerance;
use crate::specfun::bessel_j;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Speed of light in atomic units.
pub const SPEED_OF_LIGHT: f64 = 137.035999084;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamKind {
    Optical,
    Electron,
}

impl BeamKind {
    pub fn name(self) -> &'static str {
        match self {
            BeamKind::Optical => "optical",
            BeamKind::Electron => "electron",
        }
    }
}

/// An immutable Bessel vortex mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexBeam {
    kind: BeamKind,
    l: i32,
    k_perp: f64,
    k_z: f64,
    omega: f64,
    amplitude: f64,
    polarization: [f64; 3],
}

impl VortexBeam {
    /// Optical vortex with `ω = c k`, linearly polarised along x̂.
    pub fn optical(l: i32, k_perp: f64, k_z: f64, e0: f64) -> Result<Self> {
        check_wavevector(k_perp, k_z)?;
        let k = (k_perp * k_perp + k_z * k_z).sqrt();
        Ok(Self {
            kind: BeamKind::Optical,
            l,
            k_perp,
            k_z,
            omega: SPEED_OF_LIGHT * k,
            amplitude: e0,
            polarization: [1.0, 0.0, 0.0],
        })
    }

    /// Electron vortex with the nonrelativistic dispersion `ω = k²/2`.
    pub fn electron(l: i32, k_perp: f64, k_z: f64, norm: f64) -> Result<Self> {
        check_wavevector(k_perp, k_z)?;
        Ok(Self {
            kind: BeamKind::Electron,
            l,
            k_perp,
            k_z,
            omega: 0.5 * (k_perp * k_perp + k_z * k_z),
            amplitude: norm,
            polarization: [0.0; 3],
        })
    }

    /// Replaces the (linear) polarisation vector; it is normalised here.
    pub fn with_polarization(mut self, eps: [f64; 3]) -> Result<Self> {
        if self.kind != BeamKind::Optical {
            return Err(Error::KindMismatch {
                expected: "optical",
                found: self.kind.name(),
            });
        }
        let n = (eps[0] * eps[0] + eps[1] * eps[1] + eps[2] * eps[2]).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(domain("polarisation vector must be finite and non-zero"));
        }
        self.polarization = [eps[0] / n, eps[1] / n, eps[2] / n];
        Ok(self)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn kind(&self) -> BeamKind {
        self.kind
    }
    pub fn l(&self) -> i32 {
        self.l
    }
    pub fn k_perp(&self) -> f64 {
        self.k_perp
    }
    pub fn k_z(&self) -> f64 {
        self.k_z
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn polarization(&self) -> [f64; 3] {
        self.polarization
    }
    pub fn wavenumber_sq(&self) -> f64 {
        self.k_perp * self.k_perp + self.k_z * self.k_z
    }

    /// `J_l(k⊥ρ) e^{i k_z z} e^{i l φ} e^{-iωt}` without amplitude.
    pub fn profile(&self, p: &CylindricalPoint, t: f64) -> Complex64 {
        // argument is finite for finite points
        let j = bessel_j(self.l, self.k_perp * p.rho).unwrap_or(0.0);
        let phase = self.k_z * p.z + self.l as f64 * p.phi - self.omega * t;
        Complex64::from_polar(j, phase)
    }

    fn expect(&self, kind: BeamKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                found: self.kind.name(),
            });
        }
        Ok(())
    }
}

fn check_wavevector(k_perp: f64, k_z: f64) -> Result<()> {
    if !(k_perp > 0.0 && k_perp.is_finite()) {
        return Err(domain(format!("k_perp must be positive and finite, got {k_perp}")));
    }
    if !k_z.is_finite() {
        return Err(domain(format!("k_z must be finite, got {k_z}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
}

impl CylindricalPoint {
    pub fn new(rho: f64, phi: f64, z: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() || !phi.is_finite() || !z.is_finite() {
            return Err(domain(format!("invalid cylindrical point ({rho}, {phi}, {z})")));
        }
        Ok(Self { rho, phi, z })
    }

    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
        Self {
            rho: x.hypot(y),
            phi: y.atan2(x),
            z,
        }
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        [self.rho * self.phi.cos(), self.rho * self.phi.sin(), self.z]
    }
}

/// Optical vortex electric field `E₀ J_l(k⊥ρ) e^{ik_z z} e^{ilφ} e^{-iωt} ε̂`.
pub fn ov_field(beam: &VortexBeam, point: &CylindricalPoint, t: f64) -> Result<[Complex64; 3]> {
    beam.expect(BeamKind::Optical)?;
    let s = beam.profile(point, t) * beam.amplitude;
    let e = beam.polarization;
    Ok([s * e[0], s * e[1], s * e[2]])
}

/// Transverse vector potential `A = (-i/ω) E`.
pub fn ov_vector_potential(beam: &VortexBeam, point: &CylindricalPoint, t: f64) -> Result<[Complex64; 3]> {
    let e = ov_field(beam, point, t)?;
    let f = Complex64::new(0.0, -1.0 / beam.omega);
    Ok([e[0] * f, e[1] * f, e[2] * f])
}

/// Electron vortex wavefunction `N J_l(k⊥ρ) e^{ik_z z} e^{ilφ} e^{-iωt}`.
pub fn ev_wavefunction(beam: &VortexBeam, point: &CylindricalPoint, t: f64) -> Result<Complex64> {
    beam.expect(BeamKind::Electron)?;
    Ok(beam.profile(point, t) * beam.amplitude)
}

/// A finite cylinder of radius `r_max` and length `l_z` on which Bessel
/// modes are normalised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationVolume {
    pub r_max: f64,
    pub l_z: f64,
}

impl NormalizationVolume {
    pub fn new(r_max: f64, l_z: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite() && l_z > 0.0 && l_z.is_finite()) {
            return Err(domain(format!("degenerate normalisation volume r_max = {r_max}, l_z = {l_z}")));
        }
        Ok(Self { r_max, l_z })
    }

    /// `R_max = 20/k⊥`, `L_z = 2π/|k_z|` (or `2π/k⊥` for `k_z = 0`).
    pub fn default_for(beam: &VortexBeam) -> Self {
        let kz = beam.k_z.abs();
        let l_z = if kz > 0.0 { 2.0 * PI / kz } else { 2.0 * PI / beam.k_perp };
        Self {
            r_max: 20.0 / beam.k_perp,
            l_z,
        }
    }
}

/// `N = [2π L_z ∫_0^{R_max} J_l(k⊥ρ)² ρ dρ]^{-1/2}`, making `|ψ|²` integrate
/// to one over the cylinder.
pub fn ev_normalization(l: i32, k_perp: f64, r_max: f64, l_z: f64, tol: &Tolerance) -> Result<f64> {
    check_wavevector(k_perp, 0.0)?;
    NormalizationVolume::new(r_max, l_z)?;
    let radial = radial_bessel_norm(l, k_perp, r_max, tol)?;
    if !(radial > 0.0) {
        return Err(domain("vanishing radial norm"));
    }
    Ok(1.0 / (2.0 * PI * l_z * radial).sqrt())
}

fn radial_bessel_norm(l: i32, k_perp: f64, r_max: f64, tol: &Tolerance) -> Result<f64> {
    // break at the zeros' spacing ~π/k⊥ so each piece sees a few oscillations
    let pieces = ((k_perp * r_max / PI).ceil() as usize).clamp(1, 4096);
    let mut pts = Vec::with_capacity(pieces + 1);
    for i in 0..=pieces {
        pts.push(r_max * i as f64 / pieces as f64);
    }
    let r = crate::quadrature::integrate_1d_pieces(
        |rho| {
            let j = bessel_j(l, k_perp * rho).unwrap_or(0.0);
            Complex64::new(j * j * rho, 0.0)
        },
        &pts,
        tol,
    )?;
    Ok(r.value.re)
}

/// Central-difference estimate of `|(∇² + k²)ψ| / |k²ψ|` for the scalar mode
/// profile, using the 7-point Cartesian stencil with step `h`.
pub fn helmholtz_residual(beam: &VortexBeam, point: &CylindricalPoint, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("step must be positive, got {h}")));
    }
    if beam.l != 0 && point.rho < 10.0 * h {
        return Err(domain(format!(
            "residual indeterminate within 10h of the vortex core (rho = {}, h = {h})",
            point.rho
        )));
    }
    let [x, y, z] = point.to_cartesian();
    let psi = |x: f64, y: f64, z: f64| beam.profile(&CylindricalPoint::from_cartesian(x, y, z), 0.0);
    let c = psi(x, y, z);
    let lap = (psi(x + h, y, z) + psi(x - h, y, z) - c * 2.0) / (h * h)
        + (psi(x, y + h, z) + psi(x, y - h, z) - c * 2.0) / (h * h)
        + (psi(x, y, z + h) + psi(x, y, z - h) - c * 2.0) / (h * h);
    let k2 = beam.wavenumber_sq();
    let denom = (c * k2).norm();
    if denom == 0.0 {
        return Err(domain("mode vanishes at the sample point"));
    }
    Ok((lap + c * k2).norm() / denom)
}

/// Numerical `-i ∂_φ ψ / ψ` by a central difference in `φ` with step `h`;
/// equals `l` for a vortex mode.
pub fn azimuthal_oam(beam: &VortexBeam, point: &CylindricalPoint, h: f64) -> Result<Complex64> {
    let c = beam.profile(point, 0.0);
    if c.norm() == 0.0 {
        return Err(domain("mode vanishes at the sample point"));
    }
    let at = |phi: f64| beam.profile(&CylindricalPoint { phi, ..*point }, 0.0);
    let d = (at(point.phi + h) - at(point.phi - h)) / (2.0 * h);
    Ok(-Complex64::i() * d / c)
}
