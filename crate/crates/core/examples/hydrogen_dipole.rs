//! Dipole matrix elements between hydrogenic states, split into the
//! raising, lowering and axial components.

use vortex_oam::matter::AtomicSystem;
use vortex_oam::ov_coupling::{dipole_matrix_element, radial_dipole_integral};

fn main() -> vortex_oam::Result<()> {
    let atom = AtomicSystem::fixed_nucleus();
    let s = atom.state(1, 0, 0)?;
    for (n, l) in [(2, 1), (3, 1), (3, 2)] {
        for m in -(l as i32)..=(l as i32) {
            let f = atom.state(n, l, m)?;
            let d = dipole_matrix_element(&s, &f);
            println!(
                "1s -> ({n},{l},{m:+}): radial {:>10.6}  plus {:>10.6}  minus {:>10.6}  z {:>10.6}",
                radial_dipole_integral(&s, &f),
                d.plus.re,
                d.minus.re,
                d.z.re
            );
        }
    }
    println!("exact <2p0|z|1s> = {:.6}", 128.0 * 2f64.sqrt() / 243.0);
    Ok(())
}
