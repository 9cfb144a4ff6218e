//! Optical-vortex absorption: which centre-of-mass windings and internal
//! projections receive amplitude for a twisted photon with l = 2.

use vortex_oam::beams::VortexBeam;
use vortex_oam::matter::{AtomicSystem, ComState, PhotonOccupation, RadialProfile};
use vortex_oam::ov_coupling::{ov_matrix_element, OvSettings};

fn main() -> vortex_oam::Result<()> {
    let beam = VortexBeam::optical(2, 0.6, 0.8, 1.0)?.with_polarization([1.0, 0.5, 0.7])?;
    let mut settings = OvSettings::for_beam(&beam);
    settings.l_z = 1.0;
    let atom = AtomicSystem::hydrogen();
    let init = atom.state(2, 1, 0)?;
    let ring = |l| ComState::new(0.2, 0.0, l, RadialProfile::RingGaussian { rho0: 3.0, sigma: 0.8 });
    for big_l_f in -3..=3 {
        for m_f in -2..=2 {
            let fin = atom.state(3, 2, m_f)?;
            let amp = ov_matrix_element(
                &beam,
                &init,
                &fin,
                &ring(0)?,
                &ring(big_l_f)?,
                PhotonOccupation(1),
                PhotonOccupation(0),
                &settings,
            )?;
            if amp.value.norm() > 0.0 {
                println!("L' = {big_l_f:+}, m' = {m_f:+}: |M| = {:.6e}", amp.value.norm());
            }
        }
    }
    println!("only L' - L = l survives; m' - m stays within the dipole range");
    Ok(())
}
