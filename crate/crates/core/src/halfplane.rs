//! The biharmonic Schwartz integral for the upper half-plane and the
//! (1-3)-problem on `Π⁺ = {x·e1 + y·e2 : y > 0}`.
//!
//! The 𝔹-valued integral is assembled from two complex integrals,
//!
//! ```text
//! S_Π⁺[u](ζ) = S[u](z)·e1 − (y/2π)·ρ·∫ u(t)/(t − z)² dt,    z = x + iy,
//! ```
//!
//! and the general solution of the (1-3)-problem is
//! `S_Π⁺[u1]·e1 + S_Π⁺[u3]·e2 + a1·i·e1 + a2·i·e2` for real `a1, a2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bialgebra::{BNumber, BPoint};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::kernel::{
    hp_second_kernel, line_pv_boundary, line_pv_infinity, schwartz_halfplane, LineData,
};
use crate::quadrature::QuadratureSettings;

/// Below this height the field is taken from its boundary limit at `ξ = x`.
pub const NEAR_BOUNDARY_Y: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `S_Π⁺[u](ζ)` for `y > 0`.
pub fn biharmonic_schwartz_halfplane(
    u: &LineData,
    zeta: BPoint,
    q: &QuadratureSettings,
) -> Result<BNumber> {
    if !(zeta.y > 0.0) {
        return Err(Error::Domain(format!(
            "y = {} is not in the open upper half-plane",
            zeta.y
        )));
    }
    if zeta.y < NEAR_BOUNDARY_Y {
        // y·∫u/(t − z)² → 0 but the integral itself is O(1/y)-conditioned
        return Ok(boundary_value_halfplane(u, zeta.x, q));
    }
    let z = zeta.complex();
    let s = schwartz_halfplane(u, z, q)?;
    let k2 = hp_second_kernel(u, z, q)?;
    Ok(BNumber::scalar(s) - BNumber::rho().scale(k2 * (zeta.y / (2.0 * PI))))
}

/// Boundary limit `(u(ξ) + PV-term)·e1` at a finite point of the real axis.
pub fn boundary_value_halfplane(u: &LineData, xi: f64, q: &QuadratureSettings) -> BNumber {
    BNumber::scalar(u.eval(xi) + line_pv_boundary(u, xi, q))
}

/// Limit of `S_Π⁺[u](ζ)` as `‖ζ‖ → ∞`.
pub fn limit_at_infinity(u: &LineData, q: &QuadratureSettings) -> BNumber {
    BNumber::scalar(u.at_infinity() - line_pv_infinity(u, q))
}

/// General solution of the (1-3)-problem for `Π⁺`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfplaneSolution {
    pub u1: LineData,
    pub u3: LineData,
    pub a1: f64,
    pub a2: f64,
    pub quadrature: QuadratureSettings,
}

/// The problem is solvable for any admissible data; this only packages it.
pub fn solve_13_halfplane(
    u1: LineData,
    u3: LineData,
    a1: f64,
    a2: f64,
    quadrature: QuadratureSettings,
) -> HalfplaneSolution {
    HalfplaneSolution {
        u1,
        u3,
        a1,
        a2,
        quadrature,
    }
}

impl HalfplaneSolution {
    fn homogeneous(&self) -> BNumber {
        BNumber::new(I * self.a1, I * self.a2)
    }

    /// `Φ(ζ)` on the closed half-plane; `y = 0` gives the boundary limit.
    pub fn value(&self, zeta: BPoint) -> Result<BNumber> {
        if zeta.y < 0.0 || !zeta.y.is_finite() || !zeta.x.is_finite() {
            return Err(Error::Domain(format!(
                "({}, {}) is outside the closed half-plane",
                zeta.x, zeta.y
            )));
        }
        if zeta.y == 0.0 {
            return Ok(self.boundary_value(zeta.x));
        }
        let q = &self.quadrature;
        let f1 = biharmonic_schwartz_halfplane(&self.u1, zeta, q)?;
        let f3 = biharmonic_schwartz_halfplane(&self.u3, zeta, q)?;
        Ok(f1 + f3 * BNumber::e2() + self.homogeneous())
    }

    pub fn boundary_value(&self, xi: f64) -> BNumber {
        let q = &self.quadrature;
        boundary_value_halfplane(&self.u1, xi, q)
            + boundary_value_halfplane(&self.u3, xi, q) * BNumber::e2()
            + self.homogeneous()
    }

    pub fn value_at_infinity(&self) -> BNumber {
        let q = &self.quadrature;
        limit_at_infinity(&self.u1, q)
            + limit_at_infinity(&self.u3, q) * BNumber::e2()
            + self.homogeneous()
    }
}

impl Field for HalfplaneSolution {
    fn value(&self, at: BPoint) -> Result<BNumber> {
        HalfplaneSolution::value(self, at)
    }
}
