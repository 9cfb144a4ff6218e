//! TOML run configuration. Every block is optional; missing blocks fall back
//! to the built-in examples listed in the README.

use super::record::Format;
use crate::beams::{NormalizationVolume, VortexBeam};
use crate::error::{Error, Result};
use crate::ev_coupling::{FixedKernel, GeometryMode, IntegratedGeometry};
use crate::ledge::{DensityOfStates, HelicityKernel};
use crate::matter::{AtomicSystem, ComState, CoreShell, CoreState, HydrogenicState, PhotonOccupation, RadialProfile};
use crate::ov_coupling::{AzimuthalIntegration, OvSettings};
use crate::quadrature::Tolerance;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Overrides every quadrature tolerance.
    pub quadrature: Option<Tolerance>,
    pub atom: Option<AtomConfig>,
    pub ov: Option<OvConfig>,
    pub ev: Option<EvConfig>,
    pub ledge: Option<LedgeConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub m_e: f64,
    pub m_p: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InternalConfig {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComConfig {
    pub k_r: f64,
    pub k_z: f64,
    pub l: i32,
    pub profile: RadialProfile,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalBeamConfig {
    pub l: i32,
    pub k_perp: f64,
    pub k_z: f64,
    #[serde(default = "one")]
    pub e0: f64,
    pub polarization: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectronBeamConfig {
    pub l: i32,
    pub k_perp: f64,
    pub k_z: f64,
    #[serde(default = "one")]
    pub norm: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvConfig {
    pub beam: OpticalBeamConfig,
    pub initial: InternalConfig,
    #[serde(rename = "final")]
    pub final_: InternalConfig,
    pub com_initial: ComConfig,
    pub com_final: ComConfig,
    pub photons_initial: u32,
    pub photons_final: u32,
    pub r_max: Option<f64>,
    pub l_z: Option<f64>,
    #[serde(default)]
    pub azimuthal: AzimuthalIntegration,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    Fixed {
        f: f64,
        g: f64,
        kappa: f64,
        lambda: f64,
        eta: f64,
    },
    Integrated {
        r_max: f64,
        l_z: f64,
        exclusion: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvConfig {
    pub beam_initial: ElectronBeamConfig,
    pub beam_final: ElectronBeamConfig,
    pub initial: InternalConfig,
    #[serde(rename = "final")]
    pub final_: InternalConfig,
    pub com_initial: ComConfig,
    pub com_final: ComConfig,
    pub geometry: GeometryConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelConfig {
    SelectionRule,
    Fixed {
        f: f64,
        g: f64,
        kappa: f64,
        lambda: f64,
        eta: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DosEntry {
    pub shell: CoreShell,
    pub mj: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgeConfig {
    #[serde(default = "one")]
    pub radial: f64,
    pub kernel: Option<KernelConfig>,
    #[serde(default)]
    pub dos: Vec<DosEntry>,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks every block can be turned into library values.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = &self.quadrature {
            t.validate().map_err(config_err)?;
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        self.atom().map_err(config_err)?;
        if self.ov.is_some() {
            self.ov_problem().map_err(config_err)?;
        }
        if self.ev.is_some() {
            self.ev_problem().map_err(config_err)?;
        }
        if let Some(l) = &self.ledge {
            self.helicity_kernel().map_err(config_err)?;
            if !l.dos.is_empty() {
                self.dos().map_err(config_err)?;
            }
            if !(l.radial.is_finite()) {
                return Err(Error::Config("ledge.radial must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn atom(&self) -> Result<AtomicSystem> {
        match self.atom {
            Some(a) => AtomicSystem::new(a.m_e, a.m_p),
            None => Ok(AtomicSystem::hydrogen()),
        }
    }

    pub fn tolerance_or(&self, default: Tolerance) -> Tolerance {
        self.quadrature.unwrap_or(default)
    }

    pub fn ov_config(&self) -> OvConfig {
        self.ov.unwrap_or(DEFAULT_OV)
    }

    pub fn ev_config(&self) -> EvConfig {
        self.ev.unwrap_or(DEFAULT_EV)
    }

    pub fn ov_problem(&self) -> Result<OvProblem> {
        let c = self.ov_config();
        let atom = self.atom()?;
        let mut beam = VortexBeam::optical(c.beam.l, c.beam.k_perp, c.beam.k_z, c.beam.e0)?;
        if let Some(p) = c.beam.polarization {
            beam = beam.with_polarization(p)?;
        }
        let mut settings = OvSettings::for_beam(&beam);
        if let Some(r) = c.r_max {
            settings.r_max = r;
        }
        if let Some(l) = c.l_z {
            settings.l_z = l;
        }
        NormalizationVolume::new(settings.r_max, settings.l_z)?;
        settings.tol = self.tolerance_or(settings.tol);
        settings.azimuthal = c.azimuthal;
        Ok(OvProblem {
            beam,
            internal_i: internal(&atom, c.initial)?,
            internal_f: internal(&atom, c.final_)?,
            com_i: com(c.com_initial)?,
            com_f: com(c.com_final)?,
            n_i: PhotonOccupation(c.photons_initial),
            n_f: PhotonOccupation(c.photons_final),
            settings,
        })
    }

    pub fn ev_problem(&self) -> Result<EvProblem> {
        let c = self.ev_config();
        let atom = self.atom()?;
        let beam = |b: ElectronBeamConfig| VortexBeam::electron(b.l, b.k_perp, b.k_z, b.norm);
        let beam_i = beam(c.beam_initial)?;
        let beam_f = beam(c.beam_final)?;
        let com_i = com(c.com_initial)?;
        let com_f = com(c.com_final)?;
        let mode = match c.geometry {
            GeometryConfig::Fixed {
                f,
                g,
                kappa,
                lambda,
                eta,
            } => GeometryMode::Fixed(FixedKernel::new(f, g, kappa, lambda, eta)?),
            GeometryConfig::Integrated { r_max, l_z, exclusion } => {
                if !(exclusion > 0.0 && exclusion.is_finite()) {
                    return Err(Error::Config(format!("exclusion must be positive, got {exclusion}")));
                }
                GeometryMode::Integrated(IntegratedGeometry {
                    beam_i,
                    beam_f,
                    com_i,
                    com_f,
                    volume: NormalizationVolume::new(r_max, l_z)?,
                    exclusion,
                })
            }
        };
        let default_tol = match mode {
            GeometryMode::Fixed(_) => crate::ev_coupling::Y_TOLERANCE,
            GeometryMode::Integrated(_) => INTEGRATED_TOLERANCE,
        };
        Ok(EvProblem {
            beam_i,
            beam_f,
            internal_i: internal(&atom, c.initial)?,
            internal_f: internal(&atom, c.final_)?,
            com_i,
            com_f,
            mode,
            tol: self.tolerance_or(default_tol),
        })
    }

    pub fn ledge_radial(&self) -> f64 {
        self.ledge.as_ref().map_or(1.0, |l| l.radial)
    }

    pub fn kernel_config(&self) -> KernelConfig {
        self.ledge.as_ref().and_then(|l| l.kernel).unwrap_or(DEFAULT_KERNEL)
    }

    pub fn helicity_kernel(&self) -> Result<HelicityKernel> {
        match self.kernel_config() {
            KernelConfig::SelectionRule => Ok(HelicityKernel::selection_rule()),
            KernelConfig::Fixed {
                f,
                g,
                kappa,
                lambda,
                eta,
            } => HelicityKernel::from_fixed(
                &FixedKernel::new(f, g, kappa, lambda, eta)?,
                &self.tolerance_or(crate::ev_coupling::Y_TOLERANCE),
            ),
        }
    }

    /// The configured density of states; an empty or absent list is a
    /// configuration error.
    pub fn dos(&self) -> Result<DensityOfStates> {
        let entries = self.ledge.as_ref().map(|l| l.dos.as_slice()).unwrap_or(&[]);
        if entries.is_empty() {
            return Err(Error::Config("dichroism needs [[ledge.dos]] entries".into()));
        }
        let mut d = DensityOfStates::new();
        for e in entries {
            let two = 2.0 * e.mj;
            if two.fract() != 0.0 || two.abs() > 64.0 {
                return Err(Error::Config(format!("m_j must be a half-integer, got {}", e.mj)));
            }
            d.set(CoreState::new(e.shell, two as i32)?, e.weight)?;
        }
        Ok(d)
    }
}

pub const INTEGRATED_TOLERANCE: Tolerance = Tolerance {
    abs_tol: 1e-9,
    rel_tol: 1e-4,
    max_depth: 30,
};

fn internal(atom: &AtomicSystem, c: InternalConfig) -> Result<HydrogenicState> {
    atom.state(c.n, c.l, c.m)
}

fn com(c: ComConfig) -> Result<ComState> {
    ComState::new(c.k_r, c.k_z, c.l, c.profile)
}

pub struct OvProblem {
    pub beam: VortexBeam,
    pub internal_i: HydrogenicState,
    pub internal_f: HydrogenicState,
    pub com_i: ComState,
    pub com_f: ComState,
    pub n_i: PhotonOccupation,
    pub n_f: PhotonOccupation,
    pub settings: OvSettings,
}

pub struct EvProblem {
    pub beam_i: VortexBeam,
    pub beam_f: VortexBeam,
    pub internal_i: HydrogenicState,
    pub internal_f: HydrogenicState,
    pub com_i: ComState,
    pub com_f: ComState,
    pub mode: GeometryMode,
    pub tol: Tolerance,
}

const RING: RadialProfile = RadialProfile::RingGaussian { rho0: 5.0, sigma: 1.0 };

/// 1s → 2p(m = +1) under an `l = 1`, x̂-polarised optical vortex; the ring
/// centre of mass picks up `L = 0 → 1` and the axial momentum of the photon.
pub const DEFAULT_OV: OvConfig = OvConfig {
    beam: OpticalBeamConfig {
        l: 1,
        k_perp: 0.5,
        k_z: 1.0,
        e0: 1.0,
        polarization: None,
    },
    initial: InternalConfig { n: 1, l: 0, m: 0 },
    final_: InternalConfig { n: 2, l: 1, m: 1 },
    com_initial: ComConfig {
        k_r: 0.0,
        k_z: 0.0,
        l: 0,
        profile: RING,
    },
    com_final: ComConfig {
        k_r: 0.0,
        k_z: 1.0,
        l: 1,
        profile: RING,
    },
    photons_initial: 1,
    photons_final: 0,
    r_max: None,
    l_z: None,
    azimuthal: AzimuthalIntegration::Analytic,
};

/// 1s → 2p(m = +1) driven by an `l = 1 → 0` electron vortex at a fixed
/// kernel geometry; only the `Q` channel is active.
pub const DEFAULT_EV: EvConfig = EvConfig {
    beam_initial: ElectronBeamConfig {
        l: 1,
        k_perp: 1.5,
        k_z: 1.0,
        norm: 1.0,
    },
    beam_final: ElectronBeamConfig {
        l: 0,
        k_perp: 1.5,
        k_z: 1.0,
        norm: 1.0,
    },
    initial: InternalConfig { n: 1, l: 0, m: 0 },
    final_: InternalConfig { n: 2, l: 1, m: 1 },
    com_initial: ComConfig {
        k_r: 0.5,
        k_z: 0.0,
        l: 0,
        profile: RadialProfile::Bessel,
    },
    com_final: ComConfig {
        k_r: 0.5,
        k_z: 0.0,
        l: 0,
        profile: RadialProfile::Bessel,
    },
    geometry: GeometryConfig::Fixed {
        f: 2.0,
        g: 1.0,
        kappa: 1.3,
        lambda: 0.7,
        eta: 0.4,
    },
};

pub const DEFAULT_KERNEL: KernelConfig = KernelConfig::Fixed {
    f: 2.0,
    g: 1.0,
    kappa: 1.0,
    lambda: 1.0,
    eta: 0.0,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_valid() {
        let c = RunConfig::parse("").unwrap();
        assert!(c.ov_problem().is_ok());
        assert!(c.ev_problem().is_ok());
        assert!(matches!(c.dos(), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(RunConfig::parse("colour = 1"), Err(Error::Config(_))));
        assert!(matches!(
            RunConfig::parse("[quadrature]\nabs_tol = 1e-9\nrel_tol = 1e-6\nmax_depth = 30\nextra = 2"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn bad_values_are_config_errors() {
        assert!(matches!(
            RunConfig::parse("[quadrature]\nabs_tol = -1.0\nrel_tol = 1e-6\nmax_depth = 30"),
            Err(Error::Config(_))
        ));
        let bad_dos = "[ledge]\n[[ledge.dos]]\nshell = \"3d3/2\"\nmj = 0.25\nweight = 1.0\n";
        assert!(matches!(RunConfig::parse(bad_dos), Err(Error::Config(_))));
        let neg = "[ledge]\n[[ledge.dos]]\nshell = \"3d3/2\"\nmj = 0.5\nweight = -1.0\n";
        assert!(matches!(RunConfig::parse(neg), Err(Error::Config(_))));
    }

    #[test]
    fn full_ledge_block() {
        let text = r#"
format = "csv"
[ledge]
radial = 2.0
kernel = { mode = "selection_rule" }
[[ledge.dos]]
shell = "3d5/2"
mj = -2.5
weight = 0.25
"#;
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.ledge_radial(), 2.0);
        let d = c.dos().unwrap();
        assert_eq!(d.get(&CoreState::new(CoreShell::D5Half, -5).unwrap()).unwrap(), 0.25);
    }

    #[test]
    fn integrated_geometry_block() {
        let text = r#"
[ev]
beam_initial = { l = 1, k_perp = 1.5, k_z = 1.0 }
beam_final = { l = 0, k_perp = 1.5, k_z = 1.0 }
initial = { n = 1, l = 0, m = 0 }
final = { n = 2, l = 1, m = 1 }
com_initial = { k_r = 0.0, k_z = 0.0, l = 0, profile = { kind = "ring_gaussian", rho0 = 1.0, sigma = 0.2 } }
com_final = { k_r = 0.0, k_z = 0.0, l = 0, profile = { kind = "ring_gaussian", rho0 = 1.0, sigma = 0.2 } }
geometry = { mode = "integrated", r_max = 3.0, l_z = 4.0, exclusion = 0.2 }
"#;
        let c = RunConfig::parse(text).unwrap();
        let p = c.ev_problem().unwrap();
        assert!(matches!(p.mode, GeometryMode::Integrated(_)));
        assert_eq!(p.tol, INTEGRATED_TOLERANCE);
    }
}
