//! Adaptive Gauss–Kronrod integration, iterated cubature and a midpoint-rule
//! oracle.
//!
//! The 1-D integrator is a global adaptive scheme on the 21-point Kronrod
//! rule with the QUADPACK error heuristic. The interval with the largest
//! error estimate is bisected until the summed estimate drops below
//! `max(abs_tol, rel_tol * |value|)`. A semi-infinite upper limit is mapped
//! onto `[0, 1)` with `x = a + t / (1 - t)`.
//!
//! Multi-dimensional integrals are iterated applications of the 1-D rule;
//! the error estimates of inner integrals are integrated by the outer rule
//! and added to the outer estimate.

use crate::error::{domain, Result};
use num_complex::Complex64;
use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

// Hard cap on the number of live subintervals of one 1-D integral.
const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let t = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(domain(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(domain(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.max_depth == 0 {
            return Err(domain("max_depth must be positive"));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: DEFAULT_REL_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when the depth or interval budget ran out before the tolerance
    /// was met.
    pub converged: bool,
}

impl IntegrationResult {
    fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

// Kronrod abscissae (descending) and weights; odd indices are the 10-point
// Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Values the engine can integrate. `mag` and `dist` drive error control;
/// any payload carried alongside is integrated but does not steer
/// refinement.
trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn mag(&self) -> f64;
    fn dist(&self, o: &Self) -> f64;
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn mag(&self) -> f64 {
        self.norm()
    }
    fn dist(&self, o: &Self) -> f64 {
        (self - o).norm()
    }
}

impl<const N: usize> QuadValue for [Complex64; N] {
    fn zero() -> Self {
        [Complex64::new(0.0, 0.0); N]
    }
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.iter_mut().zip(o) {
            *a += b;
        }
        self
    }
    fn scale(mut self, s: f64) -> Self {
        for a in self.iter_mut() {
            *a *= s;
        }
        self
    }
    fn mag(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
    fn dist(&self, o: &Self) -> f64 {
        self.iter().zip(o).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A value together with an integrated error payload.
#[derive(Clone, Copy)]
struct Carried<V> {
    value: V,
    err: f64,
}

impl<V: QuadValue> QuadValue for Carried<V> {
    fn zero() -> Self {
        Self {
            value: V::zero(),
            err: 0.0,
        }
    }
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value.add(o.value),
            err: self.err + o.err,
        }
    }
    fn scale(self, s: f64) -> Self {
        Self {
            value: self.value.scale(s),
            err: self.err * s.abs(),
        }
    }
    fn mag(&self) -> f64 {
        self.value.mag()
    }
    fn dist(&self, o: &Self) -> f64 {
        self.value.dist(&o.value)
    }
}

struct Segment<V> {
    a: f64,
    b: f64,
    depth: u32,
    value: V,
    err: f64,
    floor: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

// Returns the Kronrod value, its error estimate and the round-off floor
// `50 ε ∫|f|` below which the estimate cannot fall.
fn gk21<V: QuadValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> (V, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc.scale(WGK[10]);
    let mut resg = V::zero();
    let mut resabs = WGK[10] * fc.mag();
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let s = f1.add(f2);
        resk = resk.add(s.scale(WGK[j]));
        if j % 2 == 1 {
            resg = resg.add(s.scale(WG[j / 2]));
        }
        resabs += WGK[j] * (f1.mag() + f2.mag());
    }
    let mean = resk.scale(0.5);
    let mut resasc = WGK[10] * fc.dist(&mean);
    for j in 0..10 {
        resasc += WGK[j] * (fv1[j].dist(&mean) + fv2[j].dist(&mean));
    }
    let hl = half.abs();
    let resabs = resabs * hl;
    let resasc = resasc * hl;
    let mut err = resk.dist(&resg) * half.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (resk.scale(half), err, floor)
}

struct AdaptiveOutcome<V> {
    value: V,
    err: f64,
    evaluations: usize,
    converged: bool,
}

fn adaptive<V: QuadValue>(f: impl Fn(f64) -> V, a: f64, b: f64, tol: &Tolerance) -> AdaptiveOutcome<V> {
    let (v0, e0, r0) = gk21(&f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        depth: 0,
        value: v0,
        err: e0,
        floor: r0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut total_floor = r0;
    let mut converged = true;
    loop {
        // the second bound stops refinement once the estimate is dominated
        // by round-off, which bisection cannot reduce
        if total_err <= tol.abs_tol.max(tol.rel_tol * total.mag()) || total_err <= 2.0 * total_floor {
            break;
        }
        if heap.len() >= MAX_INTERVALS {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("heap never empty");
        if worst.depth >= tol.max_depth {
            heap.push(worst);
            converged = false;
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (vl, el, rl) = gk21(&f, worst.a, mid);
        let (vr, er, rr) = gk21(&f, mid, worst.b);
        evaluations += 42;
        total = total.add(worst.value.scale(-1.0)).add(vl).add(vr);
        total_err = total_err - worst.err + el + er;
        total_floor = total_floor - worst.floor + rl + rr;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            depth: worst.depth + 1,
            value: vl,
            err: el,
            floor: rl,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            depth: worst.depth + 1,
            value: vr,
            err: er,
            floor: rr,
        });
    }
    // Fixed summation order: left to right.
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = V::zero();
    let mut err = 0.0;
    for s in &segs {
        value = value.add(s.value);
        err += s.err;
    }
    AdaptiveOutcome {
        value,
        err,
        evaluations,
        converged,
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || b.is_nan() || b == f64::NEG_INFINITY {
        return Err(domain(format!("unsupported integration limits [{a}, {b}]")));
    }
    if !(a < b) {
        return Err(domain(format!("integration limits must satisfy a < b, got [{a}, {b}]")));
    }
    Ok(())
}

fn adaptive_mapped<V: QuadValue>(
    f: impl Fn(f64) -> V,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<AdaptiveOutcome<V>> {
    check_interval(a, b)?;
    tol.validate()?;
    if b.is_finite() {
        return Ok(adaptive(f, a, b, tol));
    }
    let g = |t: f64| {
        let s = 1.0 - t;
        f(a + t / s).scale(1.0 / (s * s))
    };
    Ok(adaptive(g, 0.0, 1.0, tol))
}

/// Integrates `f` over `[a, b]`; `b` may be `+∞`.
pub fn integrate_1d(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: &Tolerance) -> Result<IntegrationResult> {
    let out = adaptive_mapped(f, a, b, tol)?;
    Ok(IntegrationResult {
        value: out.value,
        error_estimate: out.err,
        evaluations: out.evaluations,
        converged: out.converged,
    })
}

/// Integrates over consecutive pieces `[p0, p1], [p1, p2], ...`, for
/// integrands with known features at interior points. The last point may be
/// `+∞`.
pub fn integrate_1d_pieces(
    f: impl Fn(f64) -> Complex64,
    points: &[f64],
    tol: &Tolerance,
) -> Result<IntegrationResult> {
    if points.len() < 2 {
        return Err(domain("need at least two break points"));
    }
    let mut acc: Option<IntegrationResult> = None;
    for w in points.windows(2) {
        let r = integrate_1d(&f, w[0], w[1], tol)?;
        acc = Some(match acc {
            None => r,
            Some(prev) => prev.combine(r),
        });
    }
    Ok(acc.expect("at least one piece"))
}

/// Iterated cubature over a box of up to four dimensions. The first interval
/// is the outermost integration variable; upper limits may be `+∞`.
pub fn integrate_nd(
    f: impl Fn(&[f64]) -> Complex64,
    bounds: &[(f64, f64)],
    tol: &Tolerance,
) -> Result<IntegrationResult> {
    let g = |x: &[f64]| Carried { value: f(x), err: 0.0 };
    let out = nd_driver(&g, bounds, tol)?;
    Ok(IntegrationResult {
        value: out.value.value,
        error_estimate: out.value.err,
        evaluations: out.evaluations,
        converged: out.converged,
    })
}

/// Result of a vector-valued integral. The error estimate bounds the
/// Euclidean norm of the error vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecIntegrationResult<const N: usize> {
    pub value: [Complex64; N],
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Vector-valued [`integrate_1d_pieces`]. Refinement is steered by the
/// Euclidean norm, so components far smaller than the largest one are only
/// resolved to an absolute accuracy set by the largest.
pub fn integrate_1d_pieces_vec<const N: usize>(
    f: impl Fn(f64) -> [Complex64; N],
    points: &[f64],
    tol: &Tolerance,
) -> Result<VecIntegrationResult<N>> {
    if points.len() < 2 {
        return Err(domain("need at least two break points"));
    }
    let mut out = VecIntegrationResult {
        value: <[Complex64; N]>::zero(),
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    for w in points.windows(2) {
        let r = adaptive_mapped(&f, w[0], w[1], tol)?;
        out.value = out.value.add(r.value);
        out.error_estimate += r.err;
        out.evaluations += r.evaluations;
        out.converged &= r.converged;
    }
    Ok(out)
}

/// Vector-valued [`integrate_nd`]. The integrand returns its value and a
/// local error estimate (zero for exact evaluations), which is integrated
/// and added to the reported estimate; this lets an integrand that is itself
/// a quadrature pass its error outward.
pub fn integrate_nd_vec<const N: usize>(
    f: impl Fn(&[f64]) -> ([Complex64; N], f64),
    bounds: &[(f64, f64)],
    tol: &Tolerance,
) -> Result<VecIntegrationResult<N>> {
    let g = |x: &[f64]| {
        let (value, err) = f(x);
        Carried { value, err }
    };
    let out = nd_driver(&g, bounds, tol)?;
    Ok(VecIntegrationResult {
        value: out.value.value,
        error_estimate: out.value.err,
        evaluations: out.evaluations,
        converged: out.converged,
    })
}

struct NdOutcome<V> {
    value: Carried<V>,
    evaluations: usize,
    converged: bool,
}

fn nd_driver<V: QuadValue>(
    f: &dyn Fn(&[f64]) -> Carried<V>,
    bounds: &[(f64, f64)],
    tol: &Tolerance,
) -> Result<NdOutcome<V>> {
    if bounds.is_empty() || bounds.len() > 4 {
        return Err(domain(format!("integrate_nd supports 1..=4 dimensions, got {}", bounds.len())));
    }
    for &(a, b) in bounds {
        check_interval(a, b)?;
    }
    tol.validate()?;
    let evals = Cell::new(0usize);
    let converged = Cell::new(true);
    let value = nd_level(f, bounds, [0.0; 4], 0, tol, &evals, &converged)?;
    Ok(NdOutcome {
        value,
        evaluations: evals.get(),
        converged: converged.get(),
    })
}

fn nd_level<V: QuadValue>(
    f: &dyn Fn(&[f64]) -> Carried<V>,
    bounds: &[(f64, f64)],
    prefix: [f64; 4],
    level: usize,
    tol: &Tolerance,
    evals: &Cell<usize>,
    converged: &Cell<bool>,
) -> Result<Carried<V>> {
    let (a, b) = bounds[level];
    let last = level + 1 == bounds.len();
    let out = if last {
        adaptive_mapped(
            |x| {
                let mut p = prefix;
                p[level] = x;
                f(&p[..=level])
            },
            a,
            b,
            tol,
        )?
    } else {
        adaptive_mapped(
            |x| {
                let mut p = prefix;
                p[level] = x;
                // limits were validated up front, so inner levels cannot fail
                nd_level(f, bounds, p, level + 1, tol, evals, converged).unwrap_or_else(|_| Carried::zero())
            },
            a,
            b,
            tol,
        )?
    };
    if last {
        evals.set(evals.get() + out.evaluations);
    }
    if !out.converged {
        converged.set(false);
    }
    Ok(Carried {
        value: out.value.value,
        err: out.err + out.value.err,
    })
}

/// Midpoint-rule sum with `n` panels. Deliberately simple; used as ground
/// truth in tests. Converges as `O(1/n^2)` on smooth integrands and
/// spectrally on smooth periodic ones.
pub fn riemann_oracle(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    // Neumaier-compensated sum, per component
    let (mut sr, mut cr, mut si, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        let v = f(a + (i as f64 + 0.5) * h);
        neumaier(&mut sr, &mut cr, v.re);
        neumaier(&mut si, &mut ci, v.im);
    }
    Complex64::new(sr + cr, si + ci) * h
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}
