//! Optical-vortex coupling in the dipole approximation.
//!
//! The matrix element factorises into an internal dipole element and a
//! centre-of-mass/photon factor. Only the second carries the vortex winding
//! `l`: the azimuthal integral over the centre-of-mass angle gives the
//! Kronecker delta in `L' - L ∓ l`, the photon number changes by one, and the
//! Dirac delta in the axial momentum becomes a finite window
//! `L_z sinc(ΔK_z L_z / 2)`.

use crate::beams::{BeamKind, NormalizationVolume, VortexBeam};
use crate::error::{Error, Result};
use crate::matter::{ComState, HydrogenicState, PhotonOccupation, RadialProfile};
use crate::quadrature::{integrate_1d, integrate_1d_pieces, Tolerance};
use crate::specfun::{bessel_j, gaunt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Spherical components of `⟨f|q|i⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleMatrixElement {
    /// `⟨(q_x + i q_y)/2⟩`, nonzero only for `m' = m + 1`.
    pub plus: Complex64,
    /// `⟨(q_x - i q_y)/2⟩`, nonzero only for `m' = m - 1`.
    pub minus: Complex64,
    /// `⟨q_z⟩`, nonzero only for `m' = m`.
    pub z: Complex64,
}

impl DipoleMatrixElement {
    pub const ZERO: Self = Self {
        plus: Complex64::new(0.0, 0.0),
        minus: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    /// Cartesian components `(⟨q_x⟩, ⟨q_y⟩, ⟨q_z⟩)`.
    pub fn cartesian(&self) -> [Complex64; 3] {
        let i = Complex64::i();
        [self.plus + self.minus, -i * (self.plus - self.minus), self.z]
    }

    /// `ε̂ · ⟨q⟩` for a real polarisation vector.
    pub fn project(&self, eps: [f64; 3]) -> Complex64 {
        let c = self.cartesian();
        c[0] * eps[0] + c[1] * eps[1] + c[2] * eps[2]
    }
}

/// `∫ R_f R_i q³ dq` over the relative coordinate.
pub fn radial_dipole_integral(initial: &HydrogenicState, final_: &HydrogenicState) -> f64 {
    let tol = Tolerance {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_depth: 50,
    };
    let f = |q: f64| {
        let v = initial.radial(q).unwrap_or(0.0) * final_.radial(q).unwrap_or(0.0) * q * q * q;
        Complex64::new(v, 0.0)
    };
    // limits are valid, so the integrator cannot fail
    integrate_1d(f, 0.0, f64::INFINITY, &tol).map(|r| r.value.re).unwrap_or(0.0)
}

/// Dipole element between hydrogenic states: a radial quadrature times the
/// analytic angular integral `∫ Y*_{l'm'} Y_{1μ} Y_{lm} dΩ`. Forbidden
/// combinations return exact zeros.
pub fn dipole_matrix_element(initial: &HydrogenicState, final_: &HydrogenicState) -> DipoleMatrixElement {
    let (l, m) = (initial.l() as i32, initial.m());
    let (lp, mp) = (final_.l() as i32, final_.m());
    if (l - lp).abs() != 1 || (mp - m).abs() > 1 {
        return DipoleMatrixElement::ZERO;
    }
    let radial = radial_dipole_integral(initial, final_);
    let sign = if mp % 2 == 0 { 1.0 } else { -1.0 };
    let angular = |mu: i32| sign * gaunt(lp, -mp, 1, mu, l, m);
    let mut out = DipoleMatrixElement::ZERO;
    // q_z = q sqrt(4π/3) Y_10, (q_x ± i q_y)/2 = ∓ q sqrt(2π/3) Y_1,±1
    match mp - m {
        0 => out.z = Complex64::new(radial * (4.0 * PI / 3.0).sqrt() * angular(0), 0.0),
        1 => out.plus = Complex64::new(-radial * (2.0 * PI / 3.0).sqrt() * angular(1), 0.0),
        _ => out.minus = Complex64::new(radial * (2.0 * PI / 3.0).sqrt() * angular(-1), 0.0),
    }
    out
}

/// `∫_0^{2π} e^{i k φ} dφ`, evaluated analytically.
pub fn azimuthal_delta(winding_sum: i32) -> f64 {
    if winding_sum == 0 {
        2.0 * PI
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Absorption,
    Emission,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Absorption => "absorption",
            Channel::Emission => "emission",
        }
    }
}

/// How the centre-of-mass azimuthal integral is done.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AzimuthalIntegration {
    #[default]
    Analytic,
    /// Adaptive quadrature of `e^{ikφ}`; for cross-checking only.
    Quadrature,
}

/// Numerical settings of the optical-vortex factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvSettings {
    /// Radius at which Bessel-profile overlaps are truncated.
    pub r_max: f64,
    /// Length of the axial window replacing `δ(ΔK_z)`.
    pub l_z: f64,
    pub tol: Tolerance,
    pub azimuthal: AzimuthalIntegration,
}

impl OvSettings {
    pub fn for_beam(beam: &VortexBeam) -> Self {
        let v = NormalizationVolume::default_for(beam);
        Self {
            r_max: v.r_max,
            l_z: v.l_z,
            tol: Tolerance {
                abs_tol: 1e-12,
                rel_tol: 1e-10,
                max_depth: 40,
            },
            azimuthal: AzimuthalIntegration::Analytic,
        }
    }
}

/// Centre-of-mass and photon factor of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvTransitionAmplitude {
    pub amplitude: Complex64,
    pub channel: Channel,
    pub delta_l_satisfied: bool,
    pub delta_n_satisfied: bool,
    /// `K'_z - K_z ∓ k_z`.
    pub kz_mismatch: f64,
    /// `∫ ℛ_f* J_l(k⊥ρ) ℛ_i ρ dρ`; zero when a Kronecker delta fails.
    pub radial_overlap: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `∫ ℛ_f*(ρ) J_l(k⊥ρ) ℛ_i(ρ) ρ dρ`, split at the ring centres and edges.
pub fn radial_overlap(
    beam: &VortexBeam,
    com_i: &ComState,
    com_f: &ComState,
    settings: &OvSettings,
) -> Result<crate::quadrature::IntegrationResult> {
    let both_bessel =
        matches!(com_i.profile(), RadialProfile::Bessel) && matches!(com_f.profile(), RadialProfile::Bessel);
    let upper = if both_bessel { settings.r_max } else { f64::INFINITY };
    let mut points = vec![0.0];
    points.extend(com_i.radial_breaks());
    points.extend(com_f.radial_breaks());
    points.retain(|&p| p < upper);
    points.push(upper);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let (l, kp) = (beam.l(), beam.k_perp());
    let f = |rho: f64| {
        let j = bessel_j(l, kp * rho).unwrap_or(0.0);
        com_f.radial(rho).conj() * com_i.radial(rho) * (j * rho)
    };
    integrate_1d_pieces(f, &points, &settings.tol)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Centre-of-mass/photon factor
/// `a · (√n or √(n+1)) · ∫e^{i(L+±l-L')φ}dφ · overlap · L_z sinc(ΔK_z L_z/2)`
/// with field amplitude `a = -iE₀/ω` for absorption and its conjugate for
/// emission.
pub fn ov_com_photon_factor(
    beam: &VortexBeam,
    com_i: &ComState,
    com_f: &ComState,
    n_i: PhotonOccupation,
    n_f: PhotonOccupation,
    channel: Channel,
    settings: &OvSettings,
) -> Result<OvTransitionAmplitude> {
    if beam.kind() != BeamKind::Optical {
        return Err(Error::KindMismatch {
            expected: "optical",
            found: beam.kind().name(),
        });
    }
    let (ni, nf) = (n_i.0 as i64, n_f.0 as i64);
    let (sign, winding, delta_n, photon) = match channel {
        Channel::Absorption => (1, com_i.l() + beam.l() - com_f.l(), nf == ni - 1, (ni as f64).sqrt()),
        Channel::Emission => (-1, com_i.l() - beam.l() - com_f.l(), nf == ni + 1, ((ni + 1) as f64).sqrt()),
    };
    let kz_mismatch = com_f.k_z() - com_i.k_z() - sign as f64 * beam.k_z();
    let mut out = OvTransitionAmplitude {
        amplitude: Complex64::new(0.0, 0.0),
        channel,
        delta_l_satisfied: winding == 0,
        delta_n_satisfied: delta_n,
        kz_mismatch,
        radial_overlap: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    if !delta_n {
        return Ok(out);
    }
    let azimuthal = match settings.azimuthal {
        AzimuthalIntegration::Analytic => {
            if winding != 0 {
                return Ok(out);
            }
            Complex64::new(azimuthal_delta(0), 0.0)
        }
        AzimuthalIntegration::Quadrature => {
            let k = winding as f64;
            integrate_1d(|p| Complex64::from_polar(1.0, k * p), 0.0, 2.0 * PI, &settings.tol)?.value
        }
    };
    let r = radial_overlap(beam, com_i, com_f, settings)?;
    let a_field = Complex64::new(0.0, -(sign as f64) * beam.amplitude() / beam.omega());
    let axial = settings.l_z * sinc(kz_mismatch * settings.l_z / 2.0);
    out.radial_overlap = r.value;
    out.amplitude = a_field * photon * azimuthal * r.value * axial;
    out.error_estimate = (a_field.norm() * photon * azimuthal.norm() * axial.abs()) * r.error_estimate;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    Ok(out)
}

/// Full optical-vortex matrix element with its factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvMatrixElement {
    pub value: Complex64,
    /// `i μ (W_f - W_i)`.
    pub prefactor: Complex64,
    pub dipole: DipoleMatrixElement,
    /// `ε̂ · ⟨d⟩_fi`.
    pub projected_dipole: Complex64,
    pub absorption: OvTransitionAmplitude,
    pub emission: OvTransitionAmplitude,
}

impl OvMatrixElement {
    pub fn converged(&self) -> bool {
        self.absorption.converged && self.emission.converged
    }
}

/// `iμ(W_f - W_i) ⟨ε̂·d⟩_fi [absorption + emission]`. At most one of the two
/// channels survives its photon-number delta.
#[allow(clippy::too_many_arguments)]
pub fn ov_matrix_element(
    beam: &VortexBeam,
    internal_i: &HydrogenicState,
    internal_f: &HydrogenicState,
    com_i: &ComState,
    com_f: &ComState,
    n_i: PhotonOccupation,
    n_f: PhotonOccupation,
    settings: &OvSettings,
) -> Result<OvMatrixElement> {
    let dipole = dipole_matrix_element(internal_i, internal_f);
    let projected = dipole.project(beam.polarization());
    let prefactor = Complex64::new(0.0, internal_i.reduced_mass() * (internal_f.energy() - internal_i.energy()));
    let absorption = ov_com_photon_factor(beam, com_i, com_f, n_i, n_f, Channel::Absorption, settings)?;
    let emission = ov_com_photon_factor(beam, com_i, com_f, n_i, n_f, Channel::Emission, settings)?;
    let value = if projected == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        prefactor * projected * (absorption.amplitude + emission.amplitude)
    };
    Ok(OvMatrixElement {
        value,
        prefactor,
        dipole,
        projected_dipole: projected,
        absorption,
        emission,
    })
}
