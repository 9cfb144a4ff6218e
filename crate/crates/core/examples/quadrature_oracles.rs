//! The adaptive integrator against closed forms and the midpoint oracle.

use num_complex::Complex64;
use std::f64::consts::PI;
use vortex_oam::quadrature::{integrate_1d, integrate_nd, riemann_oracle, Tolerance};

fn main() -> vortex_oam::Result<()> {
    let tol = Tolerance::new(1e-12, 1e-10, 40)?;
    let g = integrate_1d(|x| Complex64::new((-x * x).exp(), 0.0), 0.0, f64::INFINITY, &tol)?;
    println!(
        "gaussian half-line: {:.15} (exact {:.15}, estimate {:.1e}, {} evaluations)",
        g.value.re,
        PI.sqrt() / 2.0,
        g.error_estimate,
        g.evaluations
    );
    let f = |t: f64| Complex64::new((2.0 - t.cos()).powf(-1.5), 0.0);
    let a = integrate_1d(f, 0.0, 2.0 * PI, &tol)?;
    for n in [8, 32, 128] {
        let r = riemann_oracle(f, 0.0, 2.0 * PI, n);
        println!("periodic kernel, {n:>4} panels: |midpoint - adaptive| = {:.2e}", (r - a.value).norm());
    }
    let ball = integrate_nd(
        |p| Complex64::new(p[0] * p[0] * p[1].sin(), 0.0),
        &[(0.0, 1.0), (0.0, PI), (0.0, 2.0 * PI)],
        &tol,
    )?;
    println!("unit ball volume: {:.12} (exact {:.12})", ball.value.re, 4.0 * PI / 3.0);
    Ok(())
}
