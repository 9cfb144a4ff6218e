//! Special functions: cylindrical Bessel functions of the first kind,
//! associated Legendre functions, spherical harmonics, hydrogenic radial
//! functions and Wigner 3-j symbols.
//!
//! All routines are pure and work in atomic units. Angular momenta that may
//! be half-integral are carried as doubled integers (see [`AngularMomentum`]).

mod bessel;
mod legendre;
mod radial;
mod wigner;

pub use bessel::bessel_j;
pub use legendre::{assoc_legendre, spherical_harmonic, spherical_harmonic_in, PhaseConvention};
pub use radial::hydrogenic_radial;
pub use wigner::{gaunt, wigner_3j, wigner_3j_doubled};

use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

/// An angular momentum `j` together with a projection `m`, both stored doubled
/// so that `j = 3/2` is `two_j = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngularMomentum {
    two_j: u32,
    two_m: i32,
}

impl AngularMomentum {
    pub fn new(two_j: u32, two_m: i32) -> Result<Self> {
        if two_m.unsigned_abs() > two_j {
            return Err(Error::InvalidQuantumNumbers(format!(
                "|m| > j (2j = {two_j}, 2m = {two_m})"
            )));
        }
        if (two_j as i64 - two_m as i64) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "j and m differ in parity (2j = {two_j}, 2m = {two_m})"
            )));
        }
        Ok(Self { two_j, two_m })
    }

    /// Integral `(j, m)`.
    pub fn integer(j: u32, m: i32) -> Result<Self> {
        Self::new(2 * j, 2 * m)
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn two_m(&self) -> i32 {
        self.two_m
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.two_m as f64 / 2.0
    }

    /// The same `j` with the projection reversed.
    pub fn reflected(&self) -> Self {
        Self {
            two_j: self.two_j,
            two_m: -self.two_m,
        }
    }
}

/// A point in spherical polar coordinates `(r, theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    /// `phi` is reduced to `[0, 2π)`.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && theta.is_finite() && phi.is_finite()) {
            return Err(domain("spherical point has non-finite coordinates"));
        }
        if r < 0.0 {
            return Err(domain(format!("negative radius {r}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(domain(format!("polar angle {theta} outside [0, π]")));
        }
        Ok(Self {
            r,
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
        let r = (x * x + y * y + z * z).sqrt();
        let theta = if r == 0.0 { 0.0 } else { (z / r).clamp(-1.0, 1.0).acos() };
        Self {
            r,
            theta,
            phi: y.atan2(x).rem_euclid(2.0 * PI),
        }
    }
}
