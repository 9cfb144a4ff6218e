use crate::error::{domain, Error, Result};

/// Hydrogenic radial function `R_nl(q)` for unit nuclear charge, with `q` in
/// units of the (reduced-mass) Bohr radius. Normalised so that
/// `∫_0^∞ R_nl(q)^2 q^2 dq = 1`.
pub fn hydrogenic_radial(n: u32, l: u32, q: f64) -> Result<f64> {
    if n == 0 || l >= n {
        return Err(Error::InvalidQuantumNumbers(format!(
            "need 0 <= l < n, got n = {n}, l = {l}"
        )));
    }
    if !(q >= 0.0) || !q.is_finite() {
        return Err(domain(format!("hydrogenic_radial: radius {q} must be finite and >= 0")));
    }
    let nf = n as f64;
    let k = n - l - 1;
    let alpha = (2 * l + 1) as f64;
    let rho = 2.0 * q / nf;

    // (n-l-1)! / (n+l)!
    let mut ratio = 1.0;
    for i in (k + 1)..=(n + l) {
        ratio /= i as f64;
    }
    let norm = ((2.0 / nf).powi(3) * ratio / (2.0 * nf)).sqrt();
    Ok(norm * (-rho / 2.0).exp() * rho.powi(l as i32) * laguerre(k, alpha, rho))
}

/// Generalised Laguerre polynomial `L_k^alpha(x)`.
fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for i in 1..k {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + alpha - x) * cur - (fi + alpha) * prev) / (fi + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
