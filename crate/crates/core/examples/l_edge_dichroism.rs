//! L2/L3 edge lines for both helicities and the dichroic signal of a
//! spin-polarised 3d density of states.

use vortex_oam::ev_coupling::{FixedKernel, Y_TOLERANCE};
use vortex_oam::ledge::{dichroism, enumerate_edge_transitions, DensityOfStates, Helicity, HelicityKernel};
use vortex_oam::matter::CoreShell;

fn main() -> vortex_oam::Result<()> {
    for h in [Helicity::Plus, Helicity::Minus] {
        for t in enumerate_edge_transitions(h) {
            println!(
                "l = {:+}  {}  {}({:+}/2) -> {}({:+}/2)  strength {:.6}",
                h.value(),
                t.edge.name(),
                t.initial.shell().label(),
                t.initial.two_mj(),
                t.final_.shell().label(),
                t.final_.two_mj(),
                t.strength
            );
        }
    }
    let kernel = HelicityKernel::from_fixed(&FixedKernel::new(2.0, 1.0, 1.0, 1.0, 0.0)?, &Y_TOLERANCE)?;
    let unpolarised = DensityOfStates::uniform(1.0)?;
    let polarised = DensityOfStates::from_fn(|shell, mj| {
        let base = if shell == CoreShell::D5Half { 0.6 } else { 0.4 };
        base * (1.0 - 0.2 * mj)
    })?;
    for (name, dos) in [("unpolarised", &unpolarised), ("polarised", &polarised)] {
        let r = dichroism(dos, &kernel, 1.0)?;
        println!(
            "{name:<12} gamma+ = {:.6e}  gamma- = {:.6e}  difference = {:+.6e}",
            r.gamma_plus, r.gamma_minus, r.dichroism
        );
    }
    Ok(())
}
