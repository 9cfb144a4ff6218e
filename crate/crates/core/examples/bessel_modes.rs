//! Bessel vortex profiles: radial shape, Helmholtz residual and OAM
//! eigenvalue for a few winding numbers.

use vortex_oam::beams::{azimuthal_oam, helmholtz_residual, CylindricalPoint, VortexBeam};
use vortex_oam::specfun::bessel_j;

fn main() -> vortex_oam::Result<()> {
    let k_perp = 1.0;
    println!("{:>4} {:>8} {:>14} {:>12} {:>14}", "l", "rho", "J_l(k rho)", "residual", "L_z");
    for l in [0, 1, 3] {
        let beam = VortexBeam::electron(l, k_perp, 0.5, 1.0)?;
        for rho in [0.5, 2.0, 5.0] {
            let p = CylindricalPoint::new(rho, 0.7, 0.0)?;
            let j = bessel_j(l, k_perp * rho)?;
            let res = helmholtz_residual(&beam, &p, 1e-3)?;
            let oam = azimuthal_oam(&beam, &p, 1e-5)?;
            println!("{l:>4} {rho:>8.2} {j:>14.6e} {res:>12.2e} {:>14.10}", oam.re);
        }
    }
    Ok(())
}
