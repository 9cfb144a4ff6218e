//! L₂/L₃-edge transitions driven by `l = ±1` electron vortices, their
//! golden-rule rates and the resulting dichroism.
//!
//! States are labelled by shell and `m_j` only. A beam with `l = ±1` drives
//! `Δm_j = ±1`; the angular strength of each line is the squared 3-j symbol
//! `(j' 1 j; -m_j' q m_j)²` times a common radial factor.
//!
//! The rates use a density of final states `ρ̂(shell, m_j)`. Opposite
//! helicities give equal rates whenever `ρ̂(m_j) = ρ̂(-m_j)`, so any
//! dichroism comes from an `m_j`-asymmetric `ρ̂` (a magnetised sample).

use crate::error::{Error, Result};
use crate::ev_coupling::{kernel_coefficients, FixedKernel, GeometryMode};
use crate::matter::{enumerate_core_states, CoreShell, CoreState};
use crate::quadrature::Tolerance;
use crate::specfun::wigner_3j_doubled;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Edge {
    L2,
    L3,
}

impl Edge {
    pub const ALL: [Edge; 2] = [Edge::L2, Edge::L3];

    pub fn initial_shell(self) -> CoreShell {
        match self {
            Edge::L2 => CoreShell::P1Half,
            Edge::L3 => CoreShell::P3Half,
        }
    }

    pub fn final_shell(self) -> CoreShell {
        match self {
            Edge::L2 => CoreShell::D3Half,
            Edge::L3 => CoreShell::D5Half,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Edge::L2 => "L2",
            Edge::L3 => "L3",
        }
    }
}

/// Winding number of the electron vortex, restricted to `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn value(self) -> i32 {
        match self {
            Helicity::Plus => 1,
            Helicity::Minus => -1,
        }
    }

    pub fn from_l(l: i32) -> Result<Self> {
        match l {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            _ => Err(crate::error::domain(format!("beam winding must be +1 or -1, got {l}"))),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTransition {
    pub edge: Edge,
    pub initial: CoreState,
    pub final_: CoreState,
    pub beam_l: Helicity,
    /// Angular strength with unit radial factor.
    pub strength: f64,
}

/// `radial² (j' 1 j; -m_j' q m_j)²` with `q = beam_l`. Zero unless
/// `m_j' - m_j = q` and the triangle rule holds.
pub fn transition_strength(initial: &CoreState, final_: &CoreState, beam_l: Helicity, radial: f64) -> f64 {
    let a = initial.angular_momentum();
    let b = final_.angular_momentum();
    let w = wigner_3j_doubled(
        b.two_j() as i64,
        2,
        a.two_j() as i64,
        -b.two_m() as i64,
        2 * beam_l.value() as i64,
        a.two_m() as i64,
    );
    radial * radial * w * w
}

/// The six lines one helicity excites: two at L₂ and four at L₃, ordered by
/// edge and then by initial `m_j`.
pub fn enumerate_edge_transitions(beam_l: Helicity) -> Vec<EdgeTransition> {
    let mut out = Vec::with_capacity(6);
    for edge in Edge::ALL {
        let tj_f = edge.final_shell().two_j() as i32;
        for initial in enumerate_core_states(edge.initial_shell()) {
            let two_mf = initial.two_mj() + 2 * beam_l.value();
            if two_mf.abs() > tj_f {
                continue;
            }
            let final_ = CoreState::new(edge.final_shell(), two_mf).expect("projection checked above");
            out.push(EdgeTransition {
                edge,
                initial,
                final_,
                beam_l,
                strength: transition_strength(&initial, &final_, beam_l, 1.0),
            });
        }
    }
    out
}

/// Density of final states `ρ̂(shell, m_j)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DensityOfStates {
    weights: BTreeMap<(CoreShell, i32), f64>,
}

impl DensityOfStates {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `ρ̂` for one state; weights must be finite and non-negative.
    pub fn set(&mut self, state: CoreState, weight: f64) -> Result<()> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(crate::error::domain(format!("density of states must be >= 0, got {weight}")));
        }
        self.weights.insert((state.shell(), state.two_mj()), weight);
        Ok(())
    }

    pub fn with(mut self, state: CoreState, weight: f64) -> Result<Self> {
        self.set(state, weight)?;
        Ok(self)
    }

    /// Fills every final-shell state from `f(shell, m_j)`.
    pub fn from_fn(f: impl Fn(CoreShell, f64) -> f64) -> Result<Self> {
        let mut d = Self::new();
        for shell in [CoreShell::D3Half, CoreShell::D5Half] {
            for s in enumerate_core_states(shell) {
                d.set(s, f(shell, s.two_mj() as f64 / 2.0))?;
            }
        }
        Ok(d)
    }

    pub fn uniform(weight: f64) -> Result<Self> {
        Self::from_fn(|_, _| weight)
    }

    pub fn get(&self, state: &CoreState) -> Result<f64> {
        self.weights
            .get(&(state.shell(), state.two_mj()))
            .copied()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "density of states has no entry for {} m_j = {}/2",
                    state.shell().label(),
                    state.two_mj()
                ))
            })
    }

    /// `ρ̂(m_j) → ρ̂(-m_j)`.
    pub fn reflected(&self) -> Self {
        Self {
            weights: self.weights.iter().map(|(&(s, m), &w)| ((s, -m), w)).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut d = Self::new();
        for (&(s, m), &w) in &self.weights {
            d.set(CoreState::new(s, m)?, w * c)?;
        }
        Ok(d)
    }

    pub fn entries(&self) -> impl Iterator<Item = (CoreShell, i32, f64)> + '_ {
        self.weights.iter().map(|(&(s, m), &w)| (s, m, w))
    }
}

/// `C` and `D` for `l = ±1 → l' = 0`, which weight the two helicities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityKernel {
    pub c: Complex64,
    pub d: Complex64,
}

impl HelicityKernel {
    /// `|C| = |D| = 1`: rates reduce to the selection-rule sums.
    pub fn selection_rule() -> Self {
        Self {
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// `C` from `l - l' = +1`, `D` from `l - l' = -1` at one fixed geometry.
    pub fn from_fixed(kernel: &FixedKernel, tol: &Tolerance) -> Result<Self> {
        let mode = GeometryMode::Fixed(*kernel);
        Ok(Self {
            c: kernel_coefficients(1, 0, &mode, tol)?.c,
            d: kernel_coefficients(-1, 0, &mode, tol)?.d,
        })
    }

    fn weight(&self, beam_l: Helicity) -> f64 {
        match beam_l {
            Helicity::Plus => self.c.norm_sqr(),
            Helicity::Minus => self.d.norm_sqr(),
        }
    }
}

/// `Γ = 2π |C|² Σ strength ρ̂(final)` for `l = +1`, with `|D|²` for `l = -1`
/// (fixed atoms, `L = L' = 0`).
pub fn edge_rate(edge: Edge, beam_l: Helicity, dos: &DensityOfStates, kernel: &HelicityKernel, radial: f64) -> Result<f64> {
    let mut sum = 0.0;
    for t in enumerate_edge_transitions(beam_l).into_iter().filter(|t| t.edge == edge) {
        sum += radial * radial * t.strength * dos.get(&t.final_)?;
    }
    Ok(2.0 * PI * kernel.weight(beam_l) * sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRates {
    pub edge: Edge,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichroismResult {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    /// `Γ₊ - Γ₋`.
    pub dichroism: f64,
    pub per_edge: Vec<EdgeRates>,
}

/// Rates for both helicities summed over L₂ and L₃, and their difference.
pub fn dichroism(dos: &DensityOfStates, kernel: &HelicityKernel, radial: f64) -> Result<DichroismResult> {
    let mut per_edge = Vec::with_capacity(2);
    let (mut gp, mut gm) = (0.0, 0.0);
    for edge in Edge::ALL {
        let p = edge_rate(edge, Helicity::Plus, dos, kernel, radial)?;
        let m = edge_rate(edge, Helicity::Minus, dos, kernel, radial)?;
        gp += p;
        gm += m;
        per_edge.push(EdgeRates {
            edge,
            gamma_plus: p,
            gamma_minus: m,
        });
    }
    Ok(DichroismResult {
        gamma_plus: gp,
        gamma_minus: gm,
        dichroism: gp - gm,
        per_edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(shell: CoreShell, two_mj: i32) -> CoreState {
        CoreState::new(shell, two_mj).unwrap()
    }

    // ⟨j m; 1 q | j+1 m+q⟩² from the closed-form table for coupling with a
    // vector, divided by 2j'+1 to give the squared 3-j symbol.
    fn cg_stretched_sq(two_j: i32, two_m: i32, q: i32) -> f64 {
        let j = two_j as f64 / 2.0;
        let m = two_m as f64 / 2.0;
        let cg2 = match q {
            1 => (j + m + 1.0) * (j + m + 2.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0)),
            -1 => (j - m + 1.0) * (j - m + 2.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0)),
            _ => unreachable!(),
        };
        cg2 / (2.0 * (j + 1.0) + 1.0)
    }

    #[test]
    fn twelve_lines() {
        let p = enumerate_edge_transitions(Helicity::Plus);
        let m = enumerate_edge_transitions(Helicity::Minus);
        assert_eq!(p.len(), 6);
        assert_eq!(m.len(), 6);
        for v in [&p, &m] {
            assert_eq!(v.iter().filter(|t| t.edge == Edge::L2).count(), 2);
            assert_eq!(v.iter().filter(|t| t.edge == Edge::L3).count(), 4);
        }
        assert!(p
            .iter()
            .any(|t| t.initial == cs(CoreShell::P1Half, -1) && t.final_ == cs(CoreShell::D3Half, 1)));
        assert!(m
            .iter()
            .any(|t| t.initial == cs(CoreShell::P3Half, -3) && t.final_ == cs(CoreShell::D5Half, -5)));
        for t in p.iter().chain(&m) {
            assert_eq!(t.final_.two_mj() - t.initial.two_mj(), 2 * t.beam_l.value());
            assert!(t.strength > 0.0);
        }
    }

    #[test]
    fn mirror_sets_and_strengths() {
        let p = enumerate_edge_transitions(Helicity::Plus);
        let m = enumerate_edge_transitions(Helicity::Minus);
        for t in &p {
            let mirror = m
                .iter()
                .find(|u| {
                    u.edge == t.edge
                        && u.initial.two_mj() == -t.initial.two_mj()
                        && u.final_.two_mj() == -t.final_.two_mj()
                })
                .expect("every line has a mirror");
            assert!((mirror.strength - t.strength).abs() <= 1e-12 * t.strength);
        }
    }

    #[test]
    fn strengths_match_clebsch_gordan_table() {
        for t in enumerate_edge_transitions(Helicity::Plus)
            .into_iter()
            .chain(enumerate_edge_transitions(Helicity::Minus))
        {
            let want = cg_stretched_sq(t.initial.shell().two_j() as i32, t.initial.two_mj(), t.beam_l.value());
            assert!((t.strength - want).abs() < 1e-14, "{t:?} {want}");
        }
    }

    #[test]
    fn wrong_projection_has_zero_strength() {
        let s = transition_strength(&cs(CoreShell::P1Half, -1), &cs(CoreShell::D3Half, 3), Helicity::Plus, 1.0);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn symmetric_dos_gives_equal_rates() {
        let dos = DensityOfStates::from_fn(|shell, m| 1.0 + 0.3 * m * m + if shell == CoreShell::D5Half { 0.5 } else { 0.0 })
            .unwrap();
        let k = HelicityKernel::selection_rule();
        for edge in Edge::ALL {
            let a = edge_rate(edge, Helicity::Plus, &dos, &k, 1.0).unwrap();
            let b = edge_rate(edge, Helicity::Minus, &dos, &k, 1.0).unwrap();
            assert!((a - b).abs() <= 1e-10 * a);
        }
        let r = dichroism(&dos, &k, 1.0).unwrap();
        assert!(r.dichroism.abs() <= 1e-10 * (r.gamma_plus + r.gamma_minus));
    }

    #[test]
    fn zero_dos_zero_rate() {
        let dos = DensityOfStates::uniform(0.0).unwrap();
        let r = dichroism(&dos, &HelicityKernel::selection_rule(), 1.0).unwrap();
        assert_eq!((r.gamma_plus, r.gamma_minus), (0.0, 0.0));
    }

    #[test]
    fn single_weight_dos() {
        let mut dos = DensityOfStates::uniform(0.0).unwrap();
        let target = cs(CoreShell::D3Half, 3);
        dos.set(target, 1.0).unwrap();
        let k = HelicityKernel::selection_rule();
        let contributing: Vec<_> = enumerate_edge_transitions(Helicity::Plus)
            .into_iter()
            .filter(|t| t.final_ == target)
            .collect();
        assert_eq!(contributing.len(), 1);
        let want = 2.0 * PI * contributing[0].strength;
        let r = dichroism(&dos, &k, 1.0).unwrap();
        assert!((r.gamma_plus - want).abs() < 1e-15);
        assert_eq!(r.gamma_minus, 0.0);
        assert!(r.dichroism > 0.0);
    }

    #[test]
    fn positive_mj_weighting_is_dichroic() {
        let dos = DensityOfStates::from_fn(|_, m| m.max(0.0)).unwrap();
        let r = dichroism(&dos, &HelicityKernel::selection_rule(), 1.0).unwrap();
        assert!(r.dichroism > 0.0);
    }

    #[test]
    fn missing_entry_is_an_error() {
        let dos = DensityOfStates::new().with(cs(CoreShell::D3Half, 1), 1.0).unwrap();
        assert!(edge_rate(Edge::L2, Helicity::Plus, &dos, &HelicityKernel::selection_rule(), 1.0).is_err());
        assert!(DensityOfStates::new().with(cs(CoreShell::D3Half, 1), -1.0).is_err());
    }

    #[test]
    fn fixed_kernel_helicities_have_equal_modulus() {
        let k = HelicityKernel::from_fixed(&FixedKernel::new(2.0, 1.0, 1.3, 0.7, 0.0).unwrap(), &Tolerance::default())
            .unwrap();
        assert_eq!(k.c.norm(), k.d.norm());
    }

    #[test]
    fn radial_factor_scales_quadratically() {
        let dos = DensityOfStates::from_fn(|_, m| 3.0 + m).unwrap();
        let k = HelicityKernel::selection_rule();
        let a = dichroism(&dos, &k, 1.0).unwrap();
        let b = dichroism(&dos, &k, 3.0).unwrap();
        assert!((b.gamma_plus - 9.0 * a.gamma_plus).abs() < 1e-12 * b.gamma_plus);
    }

    proptest! {
        #[test]
        fn dichroism_is_linear_and_odd(w in proptest::collection::vec(0.0f64..5.0, 10), c in 0.0f64..10.0) {
            let mut it = w.into_iter();
            let mut dos = DensityOfStates::new();
            for shell in [CoreShell::D3Half, CoreShell::D5Half] {
                for s in enumerate_core_states(shell) {
                    dos.set(s, it.next().unwrap()).unwrap();
                }
            }
            let k = HelicityKernel { c: Complex64::new(0.8, 0.1), d: Complex64::new(0.1, 0.8) };
            let r = dichroism(&dos, &k, 1.0).unwrap();
            let s = dichroism(&dos.scaled(c).unwrap(), &k, 1.0).unwrap();
            let f = dichroism(&dos.reflected(), &k, 1.0).unwrap();
            let scale = r.gamma_plus + r.gamma_minus + 1e-300;
            prop_assert!((s.dichroism - c * r.dichroism).abs() <= 1e-12 * c.max(1.0) * scale);
            prop_assert!((f.dichroism + r.dichroism).abs() <= 1e-12 * scale);
            prop_assert!(r.gamma_plus >= 0.0 && r.gamma_minus >= 0.0);
        }
    }
}
