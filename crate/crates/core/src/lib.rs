//! Orbital angular momentum exchange between Bessel vortex beams and a
//! two-particle atom.
//!
//! The crate evaluates dipole-order transition matrix elements for optical
//! vortices (coupling through the transverse vector potential) and electron
//! vortices (coupling through the Coulomb interaction), exposes the
//! selection rules they imply, and applies them to L₂/L₃-edge energy loss
//! dichroism with `l = ±1` electron vortex beams.
//!
//! Modules, bottom-up:
//!
//! - [`specfun`]: Bessel, Legendre, spherical harmonics, hydrogenic radial
//!   functions, Wigner 3-j symbols.
//! - [`quadrature`]: adaptive 1-D and iterated n-D integration plus a
//!   midpoint-rule oracle.
//! - [`beams`]: optical and electron Bessel vortex modes.
//! - [`matter`]: internal hydrogenic states, centre-of-mass states, core
//!   states for the L-edge model.
//! - [`ov_coupling`]: optical vortex matrix element.
//! - [`ev_coupling`]: electron vortex kernel decomposition and matrix element.
//! - [`ledge`]: L-edge transition table, rates and dichroism.
//! - [`cli`]: configuration, record output and the `vortex-oam` front end.
//!
//! Atomic units are used throughout (ħ = mₑ = e = 4πε₀ = 1).

pub mod beams;
pub mod cli;
pub mod error;
pub mod ev_coupling;
pub mod ledge;
pub mod matter;
pub mod ov_coupling;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
