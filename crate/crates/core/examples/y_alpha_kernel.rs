//! The azimuthal kernel integral Y(n; F, G) and the helicity kernel
//! factors C, D, I built from it.

use vortex_oam::ev_coupling::{kernel_coefficients, y_alpha, FixedKernel, GeometryMode, Y_TOLERANCE};

fn main() -> vortex_oam::Result<()> {
    for (f, g) in [(2.0, 0.0), (2.0, 1.0), (1.05, 1.0)] {
        print!("F = {f:<5} G = {g:<4}");
        for n in 0..=3 {
            let y = y_alpha(n, f, g, &Y_TOLERANCE)?;
            print!("  Y({n}) = {:.10e}", y.value);
        }
        println!();
    }
    let mode = GeometryMode::Fixed(FixedKernel::new(2.0, 1.0, 1.3, 0.7, 0.4)?);
    for dl in -2..=2 {
        let k = kernel_coefficients(dl, 0, &mode, &Y_TOLERANCE)?;
        println!("l - l' = {dl:+}: C = {:+.8e}  D = {:+.8e}  I = {:+.8e}", k.c.re, k.d.re, k.i.re);
    }
    Ok(())
}
