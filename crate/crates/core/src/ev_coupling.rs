//! Electron-vortex coupling through the dipole-order Coulomb kernel
//! `q·(r_v - R)/|r_v - R|³`.
//!
//! With `|r_v - R|² = F - G cos(φ_v - φ_R)` the azimuthal integrals reduce to
//!
//! ```text
//! Y(n; F, G) = ∫_0^{2π} e^{iny} / (F - G cos y)^{3/2} dy,
//! ```
//!
//! and the kernel's matrix element splits into the helicity components
//! `C (x̂+iŷ)/2 + D (x̂-iŷ)/2 + I ẑ` with
//! `C = κY(l-l'-1) - λY(l-l')`, `D = κY(l-l'+1) - λY(l-l')`, `I = ηY(l-l')`.
//! A common factor `2π` from the centre-of-mass azimuth is left out of all
//! three.

use crate::beams::{BeamKind, NormalizationVolume, VortexBeam};
use crate::error::{Error, Result};
use crate::matter::{ComState, HydrogenicState, RadialProfile};
use crate::ov_coupling::{dipole_matrix_element, DipoleMatrixElement};
use crate::quadrature::{integrate_1d, integrate_1d_pieces_vec, integrate_nd_vec, Tolerance};
use crate::specfun::bessel_j;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Kernels with `F < (1 + SINGULAR_MARGIN) G` are rejected.
pub const SINGULAR_MARGIN: f64 = 1e-3;

/// Default tolerance for `Y(n; F, G)`.
pub const Y_TOLERANCE: Tolerance = Tolerance {
    abs_tol: 1e-15,
    rel_tol: 1e-13,
    max_depth: 50,
};

fn check_kernel(f: f64, g: f64) -> Result<()> {
    if !(f.is_finite() && g.is_finite() && g >= 0.0) {
        return Err(crate::error::domain(format!("kernel needs finite F and G >= 0, got F = {f}, G = {g}")));
    }
    if !(f > 0.0 && f >= (1.0 + SINGULAR_MARGIN) * g) {
        return Err(Error::SingularKernel { f, g });
    }
    Ok(())
}

/// `F = ρ_v² + ρ_R² + (z_v - z_R)²`, `G = 2ρ_vρ_R`, so that
/// `|r_v - R|² = F - G cos(φ_v - φ_R)`.
pub fn kernel_fg(rho_v: f64, z_v: f64, rho_r: f64, z_r: f64) -> Result<(f64, f64)> {
    if !(rho_v >= 0.0 && rho_r >= 0.0) || ![rho_v, z_v, rho_r, z_r].iter().all(|x| x.is_finite()) {
        return Err(crate::error::domain("kernel_fg needs finite coordinates with rho >= 0"));
    }
    let dz = z_v - z_r;
    let f = rho_v * rho_v + rho_r * rho_r + dz * dz;
    let g = 2.0 * rho_v * rho_r;
    check_kernel(f, g)?;
    Ok((f, g))
}

/// Value of `Y(n; F, G)` with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YAlpha {
    pub value: f64,
    /// Imaginary part returned by the quadrature; zero analytically.
    pub imag: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `∫_0^{2π} e^{iny} (F - G cos y)^{-3/2} dy`. For `G = 0` the closed form
/// `2π δ_{n0} F^{-3/2}` is returned.
pub fn y_alpha(n: i32, f: f64, g: f64, tol: &Tolerance) -> Result<YAlpha> {
    check_kernel(f, g)?;
    if g == 0.0 {
        return Ok(YAlpha {
            value: if n == 0 { 2.0 * PI * f.powf(-1.5) } else { 0.0 },
            imag: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let k = n as f64;
    let r = integrate_1d(
        |y| Complex64::from_polar((f - g * y.cos()).powf(-1.5), k * y),
        0.0,
        2.0 * PI,
        tol,
    )?;
    Ok(YAlpha {
        value: r.value.re,
        imag: r.value.im,
        error_estimate: r.error_estimate,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

// Y(n-1), Y(n), Y(n+1) by the trapezoid rule, which converges geometrically
// with ratio exp(-arccosh(F/G)) for this periodic analytic integrand. The
// integrand is even in y, so only [0, π] is sampled.
fn y_triple(n: i32, f: f64, g: f64) -> [f64; 3] {
    if g == 0.0 {
        let c = 2.0 * PI * f.powf(-1.5);
        return [-1, 0, 1].map(|a| if n + a == 0 { c } else { 0.0 });
    }
    let a = (f / g).acosh().max(1e-6);
    let kmax = (n.abs() + 1) as f64;
    let half = ((20.0 / a + kmax).ceil() as usize).clamp(8, 200_000);
    let m = 2 * half;
    let h = 2.0 * PI / m as f64;
    let mut out = [0.0; 3];
    for j in 0..=half {
        let y = j as f64 * h;
        let x = f - g * y.cos();
        let w = if j == 0 || j == half { 1.0 } else { 2.0 } / (x * x.sqrt());
        let step = Complex64::from_polar(1.0, y);
        let mut e = Complex64::from_polar(1.0, (n - 1) as f64 * y);
        for o in out.iter_mut() {
            *o += w * e.re;
            e *= step;
        }
    }
    out.map(|v| v * h)
}

/// Kernel at one fixed geometry, with explicit `κ, λ, η` weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedKernel {
    pub f: f64,
    pub g: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub eta: f64,
}

impl FixedKernel {
    pub fn new(f: f64, g: f64, kappa: f64, lambda: f64, eta: f64) -> Result<Self> {
        check_kernel(f, g)?;
        if ![kappa, lambda, eta].iter().all(|x| x.is_finite()) {
            return Err(crate::error::domain("kernel weights must be finite"));
        }
        Ok(Self {
            f,
            g,
            kappa,
            lambda,
            eta,
        })
    }

    /// Point geometry: `κ = ρ_v`, `λ = ρ_R`, `η = z_v - z_R`.
    pub fn from_geometry(rho_v: f64, z_v: f64, rho_r: f64, z_r: f64) -> Result<Self> {
        let (f, g) = kernel_fg(rho_v, z_v, rho_r, z_r)?;
        Self::new(f, g, rho_v, rho_r, z_v - z_r)
    }
}

/// Beam and centre-of-mass states over a finite cylinder, with a tube of
/// radius `exclusion` around `r_v = R` (in the `(ρ, z)` half-plane) cut out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedGeometry {
    pub beam_i: VortexBeam,
    pub beam_f: VortexBeam,
    pub com_i: ComState,
    pub com_f: ComState,
    pub volume: NormalizationVolume,
    pub exclusion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryMode {
    Fixed(FixedKernel),
    Integrated(IntegratedGeometry),
}

/// `C`, `D`, `I` together with the weights they were built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCoefficients {
    pub c: Complex64,
    pub d: Complex64,
    pub i: Complex64,
    pub kappa: Complex64,
    pub lambda: Complex64,
    pub eta: Complex64,
    /// `Y(l-l'-1), Y(l-l'), Y(l-l'+1)` in fixed mode.
    pub y: Option<[f64; 3]>,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Builds `C, D, I` for the winding difference `l - l'`.
///
/// In fixed mode `κ, λ, η` are the given weights and the stated identities
/// hold exactly. In integrated mode the `Y` factors vary over the volume and
/// are integrated together with the state factors; `κ, λ, η` are then the
/// corresponding moments without `Y`, reported for reference.
pub fn kernel_coefficients(l: i32, l_prime: i32, mode: &GeometryMode, tol: &Tolerance) -> Result<KernelCoefficients> {
    match mode {
        GeometryMode::Fixed(k) => fixed_coefficients(l - l_prime, k, tol),
        GeometryMode::Integrated(g) => integrated_coefficients(l, l_prime, g, tol),
    }
}

fn fixed_coefficients(n: i32, k: &FixedKernel, tol: &Tolerance) -> Result<KernelCoefficients> {
    let ym = y_alpha(n - 1, k.f, k.g, tol)?;
    let y0 = y_alpha(n, k.f, k.g, tol)?;
    let yp = y_alpha(n + 1, k.f, k.g, tol)?;
    let c = k.kappa * ym.value - k.lambda * y0.value;
    let d = k.kappa * yp.value - k.lambda * y0.value;
    let i = k.eta * y0.value;
    let err = (k.kappa.abs() + k.lambda.abs() + k.eta.abs()) * (ym.error_estimate + y0.error_estimate + yp.error_estimate);
    Ok(KernelCoefficients {
        c: Complex64::new(c, 0.0),
        d: Complex64::new(d, 0.0),
        i: Complex64::new(i, 0.0),
        kappa: Complex64::new(k.kappa, 0.0),
        lambda: Complex64::new(k.lambda, 0.0),
        eta: Complex64::new(k.eta, 0.0),
        y: Some([ym.value, y0.value, yp.value]),
        error_estimate: err,
        evaluations: ym.evaluations + y0.evaluations + yp.evaluations,
        converged: ym.converged && y0.converged && yp.converged,
    })
}

fn com_extent(c: &ComState, r_max: f64) -> (f64, f64) {
    match c.profile() {
        RadialProfile::RingGaussian { rho0, sigma } => ((rho0 - 8.0 * sigma).max(0.0), rho0 + 8.0 * sigma),
        RadialProfile::Bessel => (0.0, r_max),
    }
}

fn integrated_coefficients(l: i32, lp: i32, geo: &IntegratedGeometry, tol: &Tolerance) -> Result<KernelCoefficients> {
    for b in [&geo.beam_i, &geo.beam_f] {
        if b.kind() != BeamKind::Electron {
            return Err(Error::KindMismatch {
                expected: "electron",
                found: b.kind().name(),
            });
        }
    }
    let eps = geo.exclusion;
    let half = 0.5 * geo.volume.l_z;
    if !(eps > 0.0 && eps < half && eps < geo.volume.r_max) {
        return Err(Error::Config(format!(
            "exclusion radius {eps} must lie in (0, min(r_max, l_z/2))"
        )));
    }
    let n = l - lp;
    let (bi, bf) = (&geo.beam_i, &geo.beam_f);
    let (ci, cf) = (&geo.com_i, &geo.com_f);
    let norm = bi.amplitude() * bf.amplitude();
    // z_v = Z + s/2, z_R = Z - s/2; the Z integral is the axial window
    let dk_v = bi.k_z() - bf.k_z();
    let dk_r = ci.k_z() - cf.k_z();
    let x = 0.5 * (dk_v + dk_r) * geo.volume.l_z;
    let window = geo.volume.l_z * if x.abs() < 1e-8 { 1.0 } else { x.sin() / x };
    let ks = 0.5 * (dk_v - dk_r);

    let (lo_i, hi_i) = com_extent(ci, geo.volume.r_max);
    let (lo_f, hi_f) = com_extent(cf, geo.volume.r_max);
    let r_bounds = (lo_i.max(lo_f), hi_i.min(hi_f));
    if !(r_bounds.0 < r_bounds.1) {
        // disjoint supports
        return Ok(KernelCoefficients {
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(0.0, 0.0),
            i: Complex64::new(0.0, 0.0),
            kappa: Complex64::new(0.0, 0.0),
            lambda: Complex64::new(0.0, 0.0),
            eta: Complex64::new(0.0, 0.0),
            y: None,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }

    let inner_tol = *tol;
    let inner_evals = std::cell::Cell::new(0usize);
    let inner_ok = std::cell::Cell::new(true);
    let integrand = |p: &[f64]| -> ([Complex64; 6], f64) {
        let (rv, rr) = (p[0], p[1]);
        let beam = bessel_j(l, bi.k_perp() * rv).unwrap_or(0.0) * bessel_j(lp, bf.k_perp() * rv).unwrap_or(0.0);
        let com = cf.radial(rr).conj() * ci.radial(rr);
        let w0 = com * (norm * window * beam * rv * rr);
        if w0 == Complex64::new(0.0, 0.0) {
            return ([Complex64::new(0.0, 0.0); 6], 0.0);
        }
        let du = rv - rr;
        let s_in = (eps * eps - du * du).max(0.0).sqrt();
        let mut pts = vec![-half];
        if s_in > 0.0 {
            pts.extend([-s_in, s_in]);
        }
        pts.push(half);
        let inner = |s: f64| -> [Complex64; 6] {
            if s.abs() < s_in {
                return [Complex64::new(0.0, 0.0); 6];
            }
            let f = rv * rv + rr * rr + s * s;
            let g = 2.0 * rv * rr;
            let [ym, y0, yp] = y_triple(n, f, g);
            let ph = Complex64::from_polar(1.0, ks * s);
            [
                ph * rv,
                ph * rr,
                ph * s,
                ph * (rv * ym - rr * y0),
                ph * (rv * yp - rr * y0),
                ph * (s * y0),
            ]
        };
        match integrate_1d_pieces_vec(inner, &pts, &inner_tol) {
            Ok(r) => {
                inner_evals.set(inner_evals.get() + r.evaluations);
                inner_ok.set(inner_ok.get() && r.converged);
                (r.value.map(|v| v * w0), r.error_estimate * w0.norm())
            }
            Err(_) => ([Complex64::new(f64::NAN, 0.0); 6], f64::INFINITY),
        }
    };
    let r = integrate_nd_vec(integrand, &[(0.0, geo.volume.r_max), r_bounds], tol)?;
    if r.value.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Domain("integrated kernel produced a non-finite value".into()));
    }
    let [kappa, lambda, eta, c, d, i] = r.value;
    Ok(KernelCoefficients {
        c,
        d,
        i,
        kappa,
        lambda,
        eta,
        y: None,
        error_estimate: r.error_estimate,
        evaluations: inner_evals.get(),
        converged: r.converged && inner_ok.get(),
    })
}

/// Cartesian channel of the kernel vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    /// Pairs with `(x̂ + iŷ)/2`: numerator `V_x - iV_y`.
    Plus,
    /// Pairs with `(x̂ - iŷ)/2`: numerator `V_x + iV_y`.
    Minus,
    Z,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Plus, Component::Minus, Component::Z];

    pub fn name(self) -> &'static str {
        match self {
            Component::Plus => "plus",
            Component::Minus => "minus",
            Component::Z => "z",
        }
    }

    /// Required `(L + l) - (L' + l')` for the channel to survive.
    pub fn winding_offset(self) -> i32 {
        match self {
            Component::Plus => 1,
            Component::Minus => -1,
            Component::Z => 0,
        }
    }
}

/// Brute-force midpoint sum over `(φ_v, φ_R) ∈ [0, 2π)²` of one kernel
/// component times `e^{i(l-l')φ_v} e^{i(L-L')φ_R}`, with the weights of
/// `kernel` in the numerator. No analytic delta is used; where the channel's
/// delta holds the result is `2π` times `C`, `D` or `I`.
pub fn angular_oracle(
    l: i32,
    l_prime: i32,
    big_l: i32,
    big_l_prime: i32,
    component: Component,
    kernel: &FixedKernel,
    n_panels: usize,
) -> Complex64 {
    let n = n_panels.max(1);
    let h = 2.0 * PI / n as f64;
    // the grid difference φ_v - φ_R is always a multiple of h
    let inv_den: Vec<f64> = (0..n)
        .map(|d| (kernel.f - kernel.g * (d as f64 * h).cos()).powf(-1.5))
        .collect();
    let phase = |k: i32, idx: usize| Complex64::from_polar(1.0, k as f64 * (idx as f64 + 0.5) * h);
    let (wv, wr) = (l - l_prime, big_l - big_l_prime);
    let (sv, sr) = match component {
        Component::Plus => (-1, -1),
        Component::Minus => (1, 1),
        Component::Z => (0, 0),
    };
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let ev = phase(wv, i);
        let nv = phase(sv, i) * kernel.kappa;
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let num = match component {
                Component::Z => Complex64::new(kernel.eta, 0.0),
                _ => nv - phase(sr, j) * kernel.lambda,
            };
            row += num * phase(wr, j) * inv_den[(i + n - j) % n];
        }
        total += ev * row;
    }
    total * (h * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActiveChannel {
    Plus,
    Minus,
    Zero,
    None,
}

impl ActiveChannel {
    pub fn name(self) -> &'static str {
        match self {
            ActiveChannel::Plus => "plus",
            ActiveChannel::Minus => "minus",
            ActiveChannel::Zero => "zero",
            ActiveChannel::None => "none",
        }
    }
}

/// `M = Q δ δ + S δ δ + U δ δ`. Each factor is zeroed unless both of its
/// Kronecker deltas hold, so at most one is nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvTransitionAmplitude {
    pub q: Complex64,
    pub s: Complex64,
    pub u: Complex64,
    pub active_channel: ActiveChannel,
    pub dipole: DipoleMatrixElement,
    /// Absent when no channel's deltas hold.
    pub kernel: Option<KernelCoefficients>,
}

impl EvTransitionAmplitude {
    pub fn value(&self) -> Complex64 {
        self.q + self.s + self.u
    }
}

/// Which channel's deltas hold for the given quantum numbers.
pub fn ev_channel(l: i32, l_prime: i32, big_l: i32, big_l_prime: i32, m: i32, m_prime: i32) -> ActiveChannel {
    let w = (big_l + l) - (big_l_prime + l_prime);
    match (w, m_prime - m) {
        (1, 1) => ActiveChannel::Plus,
        (-1, -1) => ActiveChannel::Minus,
        (0, 0) => ActiveChannel::Zero,
        _ => ActiveChannel::None,
    }
}

/// Electron-vortex matrix element in atomic units (`e²/4πε₀ = 1`):
/// `Q = C⟨(q_x+iq_y)/2⟩`, `S = D⟨(q_x-iq_y)/2⟩`, `U = I⟨q_z⟩`.
#[allow(clippy::too_many_arguments)]
pub fn ev_matrix_element(
    beam_i: &VortexBeam,
    beam_f: &VortexBeam,
    internal_i: &HydrogenicState,
    internal_f: &HydrogenicState,
    com_i: &ComState,
    com_f: &ComState,
    mode: &GeometryMode,
    tol: &Tolerance,
) -> Result<EvTransitionAmplitude> {
    for b in [beam_i, beam_f] {
        if b.kind() != BeamKind::Electron {
            return Err(Error::KindMismatch {
                expected: "electron",
                found: b.kind().name(),
            });
        }
    }
    let (l, lp) = (beam_i.l(), beam_f.l());
    let channel = ev_channel(l, lp, com_i.l(), com_f.l(), internal_i.m(), internal_f.m());
    let dipole = dipole_matrix_element(internal_i, internal_f);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = EvTransitionAmplitude {
        q: zero,
        s: zero,
        u: zero,
        active_channel: channel,
        dipole,
        kernel: None,
    };
    if channel == ActiveChannel::None {
        return Ok(out);
    }
    let k = kernel_coefficients(l, lp, mode, tol)?;
    match channel {
        ActiveChannel::Plus => out.q = k.c * dipole.plus,
        ActiveChannel::Minus => out.s = k.d * dipole.minus,
        ActiveChannel::Zero => out.u = k.i * dipole.z,
        ActiveChannel::None => unreachable!(),
    }
    out.kernel = Some(k);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matter::AtomicSystem;
    use crate::quadrature::riemann_oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Y_TOLERANCE
    }

    fn y_oracle(n: i32, f: f64, g: f64) -> Complex64 {
        riemann_oracle(
            |y| Complex64::from_polar((f - g * y.cos()).powf(-1.5), n as f64 * y),
            0.0,
            2.0 * PI,
            1_000_000,
        )
    }

    #[test]
    fn fg_examples() {
        assert_eq!(kernel_fg(1.0, 0.0, 0.0, 0.0).unwrap(), (1.0, 0.0));
        assert!(matches!(kernel_fg(1.0, 0.0, 1.0, 0.0), Err(Error::SingularKernel { .. })));
        assert!(kernel_fg(-1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn fg_reproduces_cartesian_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (rv, rr) = (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
            let (zv, zr) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (pv, pr) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
            let Ok((f, g)) = kernel_fg(rv, zv, rr, zr) else { continue };
            let d2 = (rv * pv.cos() - rr * pr.cos()).powi(2) + (rv * pv.sin() - rr * pr.sin()).powi(2) + (zv - zr).powi(2);
            let k = f - g * (pv - pr).cos();
            assert!((k - d2).abs() <= 1e-12 * d2.max(1.0), "{k} {d2}");
        }
    }

    #[test]
    fn y_closed_form_on_axis() {
        let y = y_alpha(0, 2.0, 0.0, &tol()).unwrap();
        assert!((y.value - 2.0 * PI * 2f64.powf(-1.5)).abs() < 1e-15);
        assert_eq!(y_alpha(3, 2.0, 0.0, &tol()).unwrap().value, 0.0);
    }

    #[test]
    fn y_matches_riemann() {
        let y = y_alpha(1, 2.0, 1.0, &tol()).unwrap();
        let o = y_oracle(1, 2.0, 1.0);
        assert!((y.value - o.re).abs() < 1e-8);
        assert!(y.imag.abs() <= 1e-10);
        assert!(y.converged);
    }

    #[test]
    fn y_parity_exact() {
        for &(f, g) in &[(2.0, 1.0), (5.0, 3.0), (1.05, 1.0)] {
            for n in 0..5 {
                assert_eq!(y_alpha(n, f, g, &tol()).unwrap().value, y_alpha(-n, f, g, &tol()).unwrap().value);
            }
        }
    }

    #[test]
    fn y_monotone_in_f() {
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let f = 1.1 + 0.3 * k as f64;
            let y = y_alpha(0, f, 1.0, &tol()).unwrap().value;
            assert!(y < last);
            last = y;
        }
    }

    #[test]
    fn y_rejects_singular() {
        assert!(matches!(y_alpha(0, 1.0, 1.0, &tol()), Err(Error::SingularKernel { .. })));
        assert!(y_alpha(0, 0.5, 1.0, &tol()).is_err());
    }

    #[test]
    fn trapezoid_triple_agrees_with_adaptive() {
        for &(f, g) in &[(2.0, 1.0), (5.0, 4.9), (1.002, 1.0)] {
            let t = y_triple(2, f, g);
            for (k, v) in t.iter().enumerate() {
                let a = y_alpha(1 + k as i32, f, g, &tol()).unwrap().value;
                assert!((v - a).abs() <= 1e-10 * a.abs().max(1.0), "{f} {g} {k}: {v} {a}");
            }
        }
    }

    #[test]
    fn fixed_mode_identities() {
        let k = FixedKernel::new(2.0, 1.0, 1.3, 0.7, 0.4).unwrap();
        let c = kernel_coefficients(1, 0, &GeometryMode::Fixed(k), &tol()).unwrap();
        let y = |n| y_oracle(n, 2.0, 1.0).re;
        assert!((c.c.re - (1.3 * y(0) - 0.7 * y(1))).abs() < 1e-8);
        assert!((c.d.re - (1.3 * y(2) - 0.7 * y(1))).abs() < 1e-8);
        assert!((c.i.re - 0.4 * y(1)).abs() < 1e-8);
        let [ym, y0, yp] = c.y.unwrap();
        assert_eq!(c.c.re, 1.3 * ym - 0.7 * y0);
        assert_eq!(c.d.re, 1.3 * yp - 0.7 * y0);
        assert_eq!(c.i.re, 0.4 * y0);
    }

    #[test]
    fn axial_com_kills_transverse_channels() {
        let k = FixedKernel::from_geometry(1.5, 0.5, 0.0, 0.0).unwrap();
        let c = kernel_coefficients(0, 0, &GeometryMode::Fixed(k), &tol()).unwrap();
        assert_eq!(c.c, Complex64::new(0.0, 0.0));
        assert_eq!(c.d, Complex64::new(0.0, 0.0));
        assert!((c.i.re - 0.5 * 2.0 * PI * k.f.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn helicity_pair_equal() {
        let k = FixedKernel::new(3.0, 2.0, 0.9, 1.7, 0.0).unwrap();
        let p = kernel_coefficients(1, 0, &GeometryMode::Fixed(k), &tol()).unwrap();
        let m = kernel_coefficients(-1, 0, &GeometryMode::Fixed(k), &tol()).unwrap();
        assert_eq!(p.c, m.d);
    }

    #[test]
    fn oracle_matches_coefficients() {
        let k = FixedKernel::new(2.0, 1.0, 1.3, 0.7, 0.4).unwrap();
        for (l, lp) in [(0, 0), (1, 0), (2, -1)] {
            let c = kernel_coefficients(l, lp, &GeometryMode::Fixed(k), &tol()).unwrap();
            for comp in Component::ALL {
                let big_lp = 0;
                let big_l = big_lp + lp - l + comp.winding_offset();
                let o = angular_oracle(l, lp, big_l, big_lp, comp, &k, 128);
                let want = 2.0
                    * PI
                    * match comp {
                        Component::Plus => c.c,
                        Component::Minus => c.d,
                        Component::Z => c.i,
                    };
                assert!((o - want).norm() < 1e-9 * want.norm().max(1.0), "{l} {lp} {comp:?}: {o} {want}");
                let bad = angular_oracle(l, lp, big_l + 1, big_lp, comp, &k, 128);
                assert!(bad.norm() < 1e-12);
            }
        }
    }

    fn st(n: u32, l: u32, m: i32) -> HydrogenicState {
        AtomicSystem::fixed_nucleus().state(n, l, m).unwrap()
    }

    fn com(l: i32) -> ComState {
        ComState::new(0.0, 0.0, l, RadialProfile::RingGaussian { rho0: 1.0, sigma: 0.2 }).unwrap()
    }

    #[test]
    fn matrix_element_channels() {
        let b1 = VortexBeam::electron(1, 1.0, 2.0, 1.0).unwrap();
        let b0 = VortexBeam::electron(0, 1.0, 2.0, 1.0).unwrap();
        let mode = GeometryMode::Fixed(FixedKernel::new(2.0, 1.0, 1.3, 0.7, 0.4).unwrap());
        let a = ev_matrix_element(&b1, &b0, &st(1, 0, 0), &st(2, 1, 1), &com(0), &com(0), &mode, &tol()).unwrap();
        assert_eq!(a.active_channel, ActiveChannel::Plus);
        assert!(a.q.norm() > 0.0);
        assert_eq!((a.s, a.u), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
        let a = ev_matrix_element(&b1, &b0, &st(2, 1, -1), &st(3, 2, 1), &com(0), &com(0), &mode, &tol()).unwrap();
        assert_eq!(a.active_channel, ActiveChannel::None);
        assert_eq!(a.value(), Complex64::new(0.0, 0.0));
        let a = ev_matrix_element(&b0, &b0, &st(1, 0, 0), &st(2, 1, 0), &com(0), &com(0), &mode, &tol()).unwrap();
        assert_eq!(a.active_channel, ActiveChannel::Zero);
        assert!(a.u.norm() > 0.0 && a.q.norm() == 0.0 && a.s.norm() == 0.0);
    }

    #[test]
    fn mirrored_helicity_magnitudes() {
        let bp = VortexBeam::electron(1, 1.0, 2.0, 1.0).unwrap();
        let bm = VortexBeam::electron(-1, 1.0, 2.0, 1.0).unwrap();
        let b0 = VortexBeam::electron(0, 1.0, 2.0, 1.0).unwrap();
        let mode = GeometryMode::Fixed(FixedKernel::new(2.5, 1.5, 1.1, 0.6, 0.3).unwrap());
        for (i, f) in [((2, 1, 0), (3, 2, 1)), ((2, 1, -1), (3, 2, 0)), ((1, 0, 0), (2, 1, 1))] {
            let p = ev_matrix_element(&bp, &b0, &st(i.0, i.1, i.2), &st(f.0, f.1, f.2), &com(0), &com(0), &mode, &tol()).unwrap();
            let m = ev_matrix_element(&bm, &b0, &st(i.0, i.1, -i.2), &st(f.0, f.1, -f.2), &com(0), &com(0), &mode, &tol()).unwrap();
            assert_eq!(p.active_channel, ActiveChannel::Plus);
            assert_eq!(m.active_channel, ActiveChannel::Minus);
            assert!((p.q.norm() - m.s.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_optical_beams() {
        let bo = VortexBeam::optical(1, 1.0, 2.0, 1.0).unwrap();
        let mode = GeometryMode::Fixed(FixedKernel::new(2.0, 1.0, 1.0, 1.0, 1.0).unwrap());
        assert!(ev_matrix_element(&bo, &bo, &st(1, 0, 0), &st(2, 1, 1), &com(0), &com(0), &mode, &tol()).is_err());
    }

    fn integrated(l: i32, amp: f64) -> IntegratedGeometry {
        IntegratedGeometry {
            beam_i: VortexBeam::electron(l, 1.5, 1.0, amp).unwrap(),
            beam_f: VortexBeam::electron(0, 1.5, 1.0, 1.0).unwrap(),
            com_i: com(0),
            com_f: com(0),
            volume: NormalizationVolume::new(3.0, 4.0).unwrap(),
            exclusion: 0.2,
        }
    }

    #[test]
    fn integrated_mode_helicity_and_linearity() {
        let t = Tolerance::new(1e-9, 1e-4, 30).unwrap();
        let p = kernel_coefficients(1, 0, &GeometryMode::Integrated(integrated(1, 1.0)), &t).unwrap();
        let m = kernel_coefficients(-1, 0, &GeometryMode::Integrated(integrated(-1, 1.0)), &t).unwrap();
        assert!(p.c.norm() > 0.0 && p.c.re.is_finite());
        // J_{-1} = -J_1
        assert!((p.c + m.d).norm() <= 1e-4 * p.c.norm(), "{} {}", p.c, m.d);
        let p2 = kernel_coefficients(1, 0, &GeometryMode::Integrated(integrated(1, 2.0)), &t).unwrap();
        assert!((p2.c - p.c * 2.0).norm() <= 1e-12 * p2.c.norm());
    }

    #[test]
    fn integrated_mode_validates_exclusion() {
        let mut g = integrated(1, 1.0);
        g.exclusion = 0.0;
        assert!(matches!(
            kernel_coefficients(1, 0, &GeometryMode::Integrated(g), &Tolerance::default()),
            Err(Error::Config(_))
        ));
    }
}
