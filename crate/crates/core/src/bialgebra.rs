//! Arithmetic in the biharmonic algebra 𝔹.
//!
//! 𝔹 is the two-dimensional commutative associative algebra over ℂ with
//! basis `{e1, e2}` and multiplication table
//!
//! ```text
//! e1 = 1,   e1·e2 = e2,   e2² = e1 + 2i·e2
//! ```
//!
//! The element `ρ = 2e1 + 2i·e2` is nilpotent (`ρ² = 0`), so `{1, ρ}` is a
//! second basis in which products and inverses take the dual-number form
//! `(α + βρ)(γ + δρ) = αγ + (αδ + βγ)ρ`. Elements with `α = 0` are exactly
//! the zero divisors.
//!
//! Coordinates are stored with respect to `{e1, e2}`; the `{1, ρ}` form is
//! used for inversion only.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative threshold under which `|α|` is treated as zero.
pub const ZERO_DIVISOR_EPS: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// An element `z1·e1 + z2·e2` of 𝔹.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BNumber {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// A point `ζ = x·e1 + y·e2` of the biharmonic plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BPoint {
    pub x: f64,
    pub y: f64,
}

impl BPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Polar construction `r·(cos θ·e1 + sin θ·e2)`.
    pub fn polar(r: f64, theta: f64) -> Self {
        Self::new(r * theta.cos(), r * theta.sin())
    }

    pub fn embed(self) -> BNumber {
        BNumber::new(Complex64::new(self.x, 0.0), Complex64::new(self.y, 0.0))
    }

    /// The complex number `z = x + iy` associated with `ζ`.
    pub fn complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl From<BPoint> for BNumber {
    fn from(p: BPoint) -> Self {
        p.embed()
    }
}

impl BNumber {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub const fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// The unit `e1`.
    pub const fn e1() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub const fn e2() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// The radical `ρ = 2e1 + 2i·e2`.
    pub const fn rho() -> Self {
        Self::new(Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0))
    }

    /// `c·e1`.
    pub fn scalar(c: Complex64) -> Self {
        Self::new(c, Complex64::new(0.0, 0.0))
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(self.z1 * c, self.z2 * c)
    }

    /// Coordinates `(α, β)` with `self = α + β·ρ`.
    pub fn to_canonical(self) -> (Complex64, Complex64) {
        (self.z1 + I * self.z2, -I * self.z2 * 0.5)
    }

    /// Inverse of [`BNumber::to_canonical`].
    pub fn from_canonical(alpha: Complex64, beta: Complex64) -> Self {
        Self::new(alpha + 2.0 * beta, 2.0 * I * beta)
    }

    pub fn norm(self) -> f64 {
        (self.z1.norm_sqr() + self.z2.norm_sqr()).sqrt()
    }

    /// `true` iff the element is a nonzero multiple of `ρ`.
    ///
    /// Zero itself is reported as `false`; it is still not invertible.
    pub fn is_zero_divisor(self) -> bool {
        let n = self.norm();
        if n == 0.0 {
            return false;
        }
        let (alpha, _) = self.to_canonical();
        alpha.norm() <= ZERO_DIVISOR_EPS * n
    }

    /// Multiplicative inverse, `(α + βρ)⁻¹ = α⁻¹ − β·α⁻²·ρ`.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm();
        let (alpha, beta) = self.to_canonical();
        if n == 0.0 || alpha.norm() <= ZERO_DIVISOR_EPS * n {
            return Err(Error::ZeroDivisor);
        }
        let ra = alpha.inv();
        Ok(Self::from_canonical(ra, -beta * ra * ra))
    }

    /// Real components `(U1, U2, U3, U4)` of `U1·e1 + U2·i·e1 + U3·e2 + U4·i·e2`.
    pub fn components(self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn from_components(u: [f64; 4]) -> Self {
        Self::new(Complex64::new(u[0], u[1]), Complex64::new(u[2], u[3]))
    }

    pub fn is_finite(self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }
}

impl Add for BNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.z1 + rhs.z1, self.z2 + rhs.z2)
    }
}

impl AddAssign for BNumber {
    fn add_assign(&mut self, rhs: Self) {
        self.z1 += rhs.z1;
        self.z2 += rhs.z2;
    }
}

impl Sub for BNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.z1 - rhs.z1, self.z2 - rhs.z2)
    }
}

impl SubAssign for BNumber {
    fn sub_assign(&mut self, rhs: Self) {
        self.z1 -= rhs.z1;
        self.z2 -= rhs.z2;
    }
}

impl Neg for BNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.z1, -self.z2)
    }
}

impl Mul for BNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let cross = self.z2 * rhs.z2;
        Self::new(
            self.z1 * rhs.z1 + cross,
            self.z1 * rhs.z2 + self.z2 * rhs.z1 + 2.0 * I * cross,
        )
    }
}

impl Mul<Complex64> for BNumber {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<BNumber> for Complex64 {
    type Output = BNumber;
    fn mul(self, rhs: BNumber) -> BNumber {
        rhs.scale(self)
    }
}

impl Mul<f64> for BNumber {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.z1 * rhs, self.z2 * rhs)
    }
}

impl Mul<BNumber> for f64 {
    type Output = BNumber;
    fn mul(self, rhs: BNumber) -> BNumber {
        rhs * self
    }
}

impl Sum for BNumber {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::zero(), Add::add)
    }
}

impl fmt::Display for BNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})e1 + ({})e2", self.z1, self.z2)
    }
}
