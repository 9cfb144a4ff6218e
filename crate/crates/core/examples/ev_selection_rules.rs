//! Electron-vortex transfer: the active channel for each winding change and
//! the resulting amplitude for a 1s -> 2p excitation.

use vortex_oam::beams::VortexBeam;
use vortex_oam::ev_coupling::{ev_channel, ev_matrix_element, FixedKernel, GeometryMode, Y_TOLERANCE};
use vortex_oam::matter::{AtomicSystem, ComState, RadialProfile};

fn main() -> vortex_oam::Result<()> {
    let atom = AtomicSystem::hydrogen();
    let s = atom.state(1, 0, 0)?;
    let mode = GeometryMode::Fixed(FixedKernel::new(2.0, 1.0, 1.3, 0.7, 0.4)?);
    let com = |l| ComState::new(0.5, 0.0, l, RadialProfile::Bessel);
    for (l_i, l_f) in [(1, 0), (0, 1), (2, 2), (2, 0)] {
        let bi = VortexBeam::electron(l_i, 1.5, 1.0, 1.0)?;
        let bf = VortexBeam::electron(l_f, 1.5, 1.0, 1.0)?;
        for m in -1..=1 {
            let p = atom.state(2, 1, m)?;
            let ch = ev_channel(l_i, l_f, 0, 0, 0, m);
            let amp = ev_matrix_element(&bi, &bf, &s, &p, &com(0)?, &com(0)?, &mode, &Y_TOLERANCE)?;
            println!("l {l_i} -> {l_f}, m' = {m:+}: channel {:<5} |M| = {:.6e}", ch.name(), amp.value().norm());
        }
    }
    Ok(())
}
