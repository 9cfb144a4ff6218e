//! States of the two-particle atom: the internal hydrogenic motion, the
//! centre-of-mass motion in cylindrical coordinates, and the jj-labelled
//! core/valence states used by the L-edge model.

use crate::beams::CylindricalPoint;
use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j, hydrogenic_radial, spherical_harmonic, AngularMomentum, SphericalPoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Proton mass in units of the electron mass.
pub const PROTON_MASS: f64 = 1836.152_673_43;

/// Electron and nucleus masses together with the derived total and reduced
/// masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicSystem {
    m_e: f64,
    m_p: f64,
    total: f64,
    mu: f64,
}

impl AtomicSystem {
    pub fn new(m_e: f64, m_p: f64) -> Result<Self> {
        if !(m_e > 0.0 && m_e.is_finite() && m_p > 0.0 && m_p.is_finite()) {
            return Err(domain(format!("masses must be positive and finite, got {m_e}, {m_p}")));
        }
        let total = m_e + m_p;
        Ok(Self {
            m_e,
            m_p,
            total,
            mu: m_e * m_p / total,
        })
    }

    pub fn hydrogen() -> Self {
        Self::new(1.0, PROTON_MASS).expect("valid masses")
    }

    /// Infinitely heavy nucleus: `μ = m_e = 1`.
    pub fn fixed_nucleus() -> Self {
        Self {
            m_e: 1.0,
            m_p: f64::INFINITY,
            total: f64::INFINITY,
            mu: 1.0,
        }
    }

    pub fn m_e(&self) -> f64 {
        self.m_e
    }
    pub fn m_p(&self) -> f64 {
        self.m_p
    }
    pub fn total_mass(&self) -> f64 {
        self.total
    }
    pub fn reduced_mass(&self) -> f64 {
        self.mu
    }

    pub fn state(&self, n: u32, l: u32, m: i32) -> Result<HydrogenicState> {
        HydrogenicState::new(n, l, m, self.mu)
    }
}

/// Internal state `|n l m⟩` with energy `W = -μ / (2 n²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenicState {
    n: u32,
    l: u32,
    m: i32,
    mu: f64,
}

impl HydrogenicState {
    pub fn new(n: u32, l: u32, m: i32, mu: f64) -> Result<Self> {
        if n == 0 || l >= n || m.unsigned_abs() > l {
            return Err(Error::InvalidQuantumNumbers(format!(
                "need n >= 1, 0 <= l < n, |m| <= l; got ({n}, {l}, {m})"
            )));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain(format!("reduced mass must be positive, got {mu}")));
        }
        Ok(Self { n, l, m, mu })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn m(&self) -> i32 {
        self.m
    }
    pub fn reduced_mass(&self) -> f64 {
        self.mu
    }
    pub fn energy(&self) -> f64 {
        -self.mu / (2.0 * (self.n as f64).powi(2))
    }

    /// Radial function in the relative coordinate, `μ^{3/2} R_nl(μ q)`.
    pub fn radial(&self, q: f64) -> Result<f64> {
        Ok(self.mu.powf(1.5) * hydrogenic_radial(self.n, self.l, self.mu * q)?)
    }
}

/// `μ^{3/2} R_nl(μq) Y_l^m(θ, φ)`, normalised over all space.
pub fn hydrogenic_wavefunction(state: &HydrogenicState, point: &SphericalPoint) -> Result<Complex64> {
    let y = spherical_harmonic(state.l as i32, state.m, point.theta, point.phi)?;
    Ok(y * state.radial(point.r)?)
}

/// Transverse profile `ℛ(ρ)` of a centre-of-mass state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialProfile {
    /// `exp(-(ρ-ρ₀)²/4σ²)`, normalised so that `|ℛ|²` integrates to one
    /// over the transverse plane. Multiplied by `e^{iK_R ρ}`.
    RingGaussian { rho0: f64, sigma: f64 },
    /// `J_L(K_R ρ)`, unnormalised and without an extra radial phase.
    Bessel,
}

/// Centre-of-mass state `ℛ(ρ) e^{iK_R ρ} e^{iK_z z} e^{iLφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComState {
    k_r: f64,
    k_z: f64,
    l: i32,
    profile: RadialProfile,
    norm: f64,
}

impl ComState {
    pub fn new(k_r: f64, k_z: f64, l: i32, profile: RadialProfile) -> Result<Self> {
        if !(k_r >= 0.0 && k_r.is_finite() && k_z.is_finite()) {
            return Err(domain(format!("invalid COM wavenumbers K_R = {k_r}, K_z = {k_z}")));
        }
        let norm = match profile {
            RadialProfile::RingGaussian { rho0, sigma } => {
                if !(rho0 >= 0.0 && rho0.is_finite() && sigma > 0.0 && sigma.is_finite()) {
                    return Err(domain(format!("invalid ring profile rho0 = {rho0}, sigma = {sigma}")));
                }
                // ∫_0^∞ exp(-(ρ-ρ₀)²/2σ²) ρ dρ
                let s2 = sigma * sigma;
                let m = s2 * (-rho0 * rho0 / (2.0 * s2)).exp()
                    + rho0 * sigma * (PI / 2.0).sqrt() * (1.0 + libm::erf(rho0 / (sigma * 2f64.sqrt())));
                1.0 / (2.0 * PI * m).sqrt()
            }
            RadialProfile::Bessel => 1.0,
        };
        Ok(Self {
            k_r,
            k_z,
            l,
            profile,
            norm,
        })
    }

    pub fn k_r(&self) -> f64 {
        self.k_r
    }
    pub fn k_z(&self) -> f64 {
        self.k_z
    }
    pub fn l(&self) -> i32 {
        self.l
    }
    pub fn profile(&self) -> RadialProfile {
        self.profile
    }
    /// `K² = K_z² + K_R²`.
    pub fn momentum_sq(&self) -> f64 {
        self.k_r * self.k_r + self.k_z * self.k_z
    }

    /// Radial part including any radial phase: `ℛ(ρ) e^{iK_R ρ}` for the ring
    /// profile, `J_L(K_R ρ)` for the Bessel profile.
    pub fn radial(&self, rho: f64) -> Complex64 {
        match self.profile {
            RadialProfile::RingGaussian { rho0, sigma } => {
                let d = rho - rho0;
                let a = self.norm * (-d * d / (4.0 * sigma * sigma)).exp();
                Complex64::from_polar(a, self.k_r * rho)
            }
            RadialProfile::Bessel => Complex64::new(bessel_j(self.l, self.k_r * rho).unwrap_or(0.0), 0.0),
        }
    }

    /// Interior break points for radial quadrature. Empty for the Bessel
    /// profile, whose support is cut at the normalisation radius instead.
    pub(crate) fn radial_breaks(&self) -> Vec<f64> {
        match self.profile {
            RadialProfile::RingGaussian { rho0, sigma } => {
                let lo = rho0 - 6.0 * sigma;
                let mut v = vec![];
                if lo > 0.0 {
                    v.push(lo);
                }
                if rho0 > 0.0 {
                    v.push(rho0);
                }
                v.push(rho0 + 6.0 * sigma);
                v
            }
            RadialProfile::Bessel => vec![],
        }
    }
}

pub fn com_wavefunction(state: &ComState, point: &CylindricalPoint) -> Complex64 {
    state.radial(point.rho) * Complex64::from_polar(1.0, state.k_z * point.z + state.l as f64 * point.phi)
}

/// Core and valence shells of the L-edge model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoreShell {
    #[serde(rename = "2p1/2")]
    P1Half,
    #[serde(rename = "2p3/2")]
    P3Half,
    #[serde(rename = "3d3/2")]
    D3Half,
    #[serde(rename = "3d5/2")]
    D5Half,
}

impl CoreShell {
    pub const ALL: [CoreShell; 4] = [CoreShell::P1Half, CoreShell::P3Half, CoreShell::D3Half, CoreShell::D5Half];

    pub fn two_j(self) -> u32 {
        match self {
            CoreShell::P1Half => 1,
            CoreShell::P3Half | CoreShell::D3Half => 3,
            CoreShell::D5Half => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CoreShell::P1Half => "2p1/2",
            CoreShell::P3Half => "2p3/2",
            CoreShell::D3Half => "3d3/2",
            CoreShell::D5Half => "3d5/2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| domain(format!("unknown shell {s:?}")))
    }
}

/// A shell together with its projection `m_j`, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoreState {
    shell: CoreShell,
    two_mj: i32,
}

impl CoreState {
    pub fn new(shell: CoreShell, two_mj: i32) -> Result<Self> {
        AngularMomentum::new(shell.two_j(), two_mj)?;
        Ok(Self { shell, two_mj })
    }
    pub fn shell(&self) -> CoreShell {
        self.shell
    }
    pub fn two_mj(&self) -> i32 {
        self.two_mj
    }
    pub fn angular_momentum(&self) -> AngularMomentum {
        AngularMomentum::new(self.shell.two_j(), self.two_mj).expect("validated on construction")
    }
}

/// All `m_j = -j, ..., j` of a shell in ascending order.
pub fn enumerate_core_states(shell: CoreShell) -> Vec<CoreState> {
    let tj = shell.two_j() as i32;
    (-tj..=tj)
        .step_by(2)
        .map(|two_mj| CoreState { shell, two_mj })
        .collect()
}

/// Photon number state `|n⟩` of the vortex mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PhotonOccupation(pub u32);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_1d, integrate_nd, Tolerance};

    fn unit(n: u32, l: u32, m: i32) -> HydrogenicState {
        AtomicSystem::fixed_nucleus().state(n, l, m).unwrap()
    }

    #[test]
    fn masses() {
        let h = AtomicSystem::hydrogen();
        assert!((h.total_mass() - (1.0 + PROTON_MASS)).abs() < 1e-12);
        assert!((h.reduced_mass() - PROTON_MASS / (1.0 + PROTON_MASS)).abs() < 1e-15);
        assert!(AtomicSystem::new(0.0, 1.0).is_err());
    }

    #[test]
    fn energies_ordered_and_degenerate() {
        let sys = AtomicSystem::hydrogen();
        let mut last = f64::NEG_INFINITY;
        for n in 1..6 {
            let w = sys.state(n, 0, 0).unwrap().energy();
            assert!(w > last);
            last = w;
            for l in 0..n {
                assert_eq!(sys.state(n, l, l as i32).unwrap().energy(), w);
            }
        }
        assert_eq!(unit(1, 0, 0).energy(), -0.5);
    }

    #[test]
    fn invalid_states() {
        assert!(HydrogenicState::new(2, 2, 0, 1.0).is_err());
        assert!(HydrogenicState::new(2, 1, 2, 1.0).is_err());
        assert!(HydrogenicState::new(0, 0, 0, 1.0).is_err());
    }

    #[test]
    fn s_state_isotropic() {
        let s = unit(1, 0, 0);
        let a = hydrogenic_wavefunction(&s, &SphericalPoint::new(0.7, 0.3, 0.1).unwrap()).unwrap();
        let b = hydrogenic_wavefunction(&s, &SphericalPoint::new(0.7, 2.5, 4.0).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn azimuthal_phase() {
        let s = unit(3, 2, -2);
        let d = 0.9;
        let a = hydrogenic_wavefunction(&s, &SphericalPoint::new(1.3, 1.0, 0.4).unwrap()).unwrap();
        let b = hydrogenic_wavefunction(&s, &SphericalPoint::new(1.3, 1.0, 0.4 + d).unwrap()).unwrap();
        assert!((b - a * Complex64::from_polar(1.0, -2.0 * d)).norm() < 1e-14);
    }

    // ⟨a|b⟩ by a 3-D cubature in (r, θ, φ).
    fn overlap(a: &HydrogenicState, b: &HydrogenicState) -> Complex64 {
        let tol = Tolerance::new(1e-10, 1e-9, 40).unwrap();
        integrate_nd(
            |x: &[f64]| {
                let p = SphericalPoint { r: x[0], theta: x[1], phi: x[2] };
                let fa = hydrogenic_wavefunction(a, &p).unwrap();
                let fb = hydrogenic_wavefunction(b, &p).unwrap();
                fa.conj() * fb * (x[0] * x[0] * x[1].sin())
            },
            &[(0.0, f64::INFINITY), (0.0, PI), (0.0, 2.0 * PI)],
            &tol,
        )
        .unwrap()
        .value
    }

    #[test]
    fn orthonormal_up_to_n3() {
        let mut states = vec![];
        for n in 1..=3 {
            for l in 0..n {
                for m in -(l as i32)..=(l as i32) {
                    states.push(unit(n, l, m));
                }
            }
        }
        // the full 14 x 14 matrix is slow in debug builds; a representative
        // set covers every selection of differing quantum number
        let picks = [(0, 0), (0, 1), (1, 1), (1, 3), (2, 3), (3, 3), (2, 7), (8, 8), (5, 12), (13, 13), (9, 10)];
        for &(i, j) in &picks {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = overlap(&states[i], &states[j]);
            assert!((got - want).norm() < 1e-7, "{:?} {:?}: {got}", states[i], states[j]);
        }
    }

    #[test]
    fn reduced_mass_scaling_keeps_norm() {
        let s = HydrogenicState::new(2, 1, 0, 0.5).unwrap();
        let tol = Tolerance::new(1e-12, 1e-10, 40).unwrap();
        let r = integrate_1d(|q| Complex64::new(s.radial(q).unwrap().powi(2) * q * q, 0.0), 0.0, f64::INFINITY, &tol)
            .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn com_modulus_independent_of_phi_and_z() {
        let c = ComState::new(0.4, 1.1, 3, RadialProfile::RingGaussian { rho0: 2.0, sigma: 0.5 }).unwrap();
        let a = com_wavefunction(&c, &CylindricalPoint::new(1.7, 0.0, 0.0).unwrap());
        let b = com_wavefunction(&c, &CylindricalPoint::new(1.7, 2.2, -5.0).unwrap());
        assert!((a.norm() - b.norm()).abs() < 1e-15);
        let c0 = ComState::new(0.0, 0.3, 0, RadialProfile::RingGaussian { rho0: 1.0, sigma: 0.2 }).unwrap();
        let a = com_wavefunction(&c0, &CylindricalPoint::new(0.8, 0.1, 0.5).unwrap());
        let b = com_wavefunction(&c0, &CylindricalPoint::new(0.8, 5.0, 0.5).unwrap());
        assert!((a - b).norm() < 1e-15);
        assert!((c.momentum_sq() - (0.16 + 1.21)).abs() < 1e-15);
    }

    #[test]
    fn ring_profile_peak_and_norm() {
        let c = ComState::new(0.0, 0.0, 0, RadialProfile::RingGaussian { rho0: 1.5, sigma: 0.3 }).unwrap();
        let peak = c.radial(1.5).norm();
        for &d in &[-0.2, -0.01, 0.01, 0.2] {
            assert!(c.radial(1.5 + d).norm() < peak);
        }
        let tol = Tolerance::new(1e-13, 1e-12, 40).unwrap();
        let n = integrate_1d(|r| Complex64::new(c.radial(r).norm_sqr() * r, 0.0), 0.0, f64::INFINITY, &tol)
            .unwrap()
            .value
            .re;
        assert!((2.0 * PI * n - 1.0).abs() < 1e-10);
        // ring overlapping the axis
        let c = ComState::new(0.0, 0.0, 0, RadialProfile::RingGaussian { rho0: 0.2, sigma: 0.5 }).unwrap();
        let n = integrate_1d(|r| Complex64::new(c.radial(r).norm_sqr() * r, 0.0), 0.0, f64::INFINITY, &tol)
            .unwrap()
            .value
            .re;
        assert!((2.0 * PI * n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bessel_profile() {
        let c = ComState::new(1.2, 0.0, 2, RadialProfile::Bessel).unwrap();
        assert_eq!(c.radial(0.7).re, bessel_j(2, 0.84).unwrap());
        assert!(ComState::new(-1.0, 0.0, 0, RadialProfile::Bessel).is_err());
    }

    #[test]
    fn core_state_enumeration() {
        let v: Vec<i32> = enumerate_core_states(CoreShell::P1Half).iter().map(|s| s.two_mj()).collect();
        assert_eq!(v, vec![-1, 1]);
        let v: Vec<i32> = enumerate_core_states(CoreShell::P3Half).iter().map(|s| s.two_mj()).collect();
        assert_eq!(v, vec![-3, -1, 1, 3]);
        for shell in CoreShell::ALL {
            assert_eq!(enumerate_core_states(shell).len() as u32, shell.two_j() + 1);
            assert_eq!(CoreShell::parse(shell.label()).unwrap(), shell);
        }
        assert_eq!(enumerate_core_states(CoreShell::D5Half).len(), 6);
        assert!(CoreState::new(CoreShell::P1Half, 3).is_err());
        assert!(CoreState::new(CoreShell::P1Half, 0).is_err());
    }
}
