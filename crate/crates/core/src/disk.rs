//! The biharmonic Schwartz-type integral for the unit disk, its singular
//! boundary values, and the (1-3)-problem on `D_ζ = {ζ : ‖ζ‖ ≤ 1}`.
//!
//! The (1-3)-problem for the disk is solvable iff `∮ u1 dx + u3 dy = 0`; the
//! general solution is then
//!
//! ```text
//! Φ(ζ) = S_D[u1](ζ)·e1 + S_D[u3](ζ)·e2 + b·ζ + b1·e1 + b2·e2 + i·(a·ζ + a1·e1 + a2·e2)
//! ```
//!
//! with `b, b1, b2` fixed by the first two harmonics of the data and
//! `a, a1, a2` free.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bialgebra::{BNumber, BPoint};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::kernel::CircleData;
use crate::quadrature::{trapezoid_periodic, GaussLegendre, QuadratureSettings};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Points with `1 − ‖ζ‖` below this are evaluated through the boundary formula.
pub const BOUNDARY_TOL: f64 = 1e-12;

fn require_interior(zeta: BPoint) -> Result<()> {
    if !(zeta.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "‖ζ‖ = {} is not inside the unit disk",
            zeta.norm()
        )));
    }
    Ok(())
}

/// `S_D[u](ζ) = (1/2πi)∮ u(τ)(τ + ζ)(τ − ζ)⁻¹τ⁻¹ dτ` by the trapezoid rule on
/// `τ = cos θ·e1 + sin θ·e2`.
///
/// The node count grows with `‖ζ‖` so that the aliasing error stays below
/// roundoff; see [`QuadratureSettings::circle_nodes_for`].
pub fn biharmonic_schwartz_disk(
    u: &CircleData,
    zeta: BPoint,
    q: &QuadratureSettings,
) -> Result<BNumber> {
    require_interior(zeta)?;
    let n = q.circle_nodes_for(zeta.norm(), u.degree());
    let z = zeta.embed();
    let failed = Cell::new(false);
    let sum = trapezoid_periodic(n, 0.0, 2.0 * PI, |theta| {
        let (s, c) = theta.sin_cos();
        let tau = BPoint::new(c, s).embed();
        let dtau = BPoint::new(-s, c).embed();
        match ((tau - z).inv(), tau.inv()) {
            (Ok(a), Ok(b)) => (tau + z) * a * b * dtau * u.eval(theta),
            _ => {
                failed.set(true);
                BNumber::zero()
            }
        }
    });
    if failed.get() {
        return Err(Error::Domain(
            "kernel hit a zero divisor on the circle".into(),
        ));
    }
    Ok(sum.scale(1.0 / (2.0 * PI * I)))
}

/// Closed form of the same integral for trigonometric data.
///
/// In the `{1, ρ}` basis `S_D[u](ζ) = F(z) + (−(iy/2)·F′(z) + ½·P[w](z))·ρ`,
/// where `F` is the Schwartz function of `û`, `w(θ) = sin θ·û′(θ)·e^{−iθ}`,
/// and `P[w](z) = ŵ₀ + 2·Σ_{m≥1} ŵ_m zᵐ` is built from the exponential
/// Fourier coefficients of `w`.
pub fn biharmonic_schwartz_disk_spectral(u: &CircleData, zeta: BPoint) -> Result<BNumber> {
    if zeta.norm() > 1.0 + BOUNDARY_TOL {
        return Err(Error::Domain(format!(
            "‖ζ‖ = {} is outside the unit disk",
            zeta.norm()
        )));
    }
    Ok(spectral_unchecked(u, zeta))
}

fn spectral_unchecked(u: &CircleData, zeta: BPoint) -> BNumber {
    let z = zeta.complex();
    let f = u.schwartz(z);
    let fp = u.schwartz_derivative(z);
    let deg = u.degree() as i64;
    // Fourier coefficients of û′ are i·m·ĉ_m; multiplying by sin θ·e^{−iθ} = (1 − e^{−2iθ})/(2i)
    let dcoef = |m: i64| I * m as f64 * u.fourier(m);
    let w = |m: i64| (dcoef(m) - dcoef(m + 2)) / (2.0 * I);
    let mut p = Complex64::new(0.0, 0.0);
    for m in (1..=deg).rev() {
        p = (p + 2.0 * w(m)) * z;
    }
    p += w(0);
    let beta = -I * zeta.y * 0.5 * fp + 0.5 * p;
    BNumber::from_canonical(f, beta)
}

/// Singular integral `S_∂D[u](ζ)` at `ζ = cos θ·e1 + sin θ·e2`, assembled from
/// the conjugate function and the moments `∮û/t²`, `∮û/t³`.
pub fn singular_boundary_disk(u: &CircleData, theta: f64) -> BNumber {
    let (y, x) = theta.sin_cos();
    let m2 = u.moment(2);
    let m3 = u.moment(3);
    let e1_plus_ie2 = BNumber::new(Complex64::new(1.0, 0.0), I);
    let e2_minus_ie1 = BNumber::new(-I, Complex64::new(1.0, 0.0));
    BNumber::scalar(I * u.conjugate(theta)) - e1_plus_ie2.scale(m2 * (y / (2.0 * PI)))
        + e2_minus_ie1.scale(m2 * (x / (2.0 * PI)) + m3 / (2.0 * PI))
}

/// Boundary limit `u(ζ)·e1 + S_∂D[u](ζ)` of `S_D[u]` at angle `θ`.
pub fn boundary_value_disk(u: &CircleData, theta: f64) -> BNumber {
    BNumber::e1() * u.eval(theta) + singular_boundary_disk(u, theta)
}

/// `∮_{∂D} u1 dx + u3 dy = π·(a₁[u3] − b₁[u1])`.
pub fn solvability_integral(u1: &CircleData, u3: &CircleData) -> f64 {
    PI * (u3.cos_coef(1) - u1.sin_coef(1))
}

/// Tolerance applied to [`solvability_integral`].
pub fn solvability_tolerance(u1: &CircleData, u3: &CircleData) -> f64 {
    1e-10 * (1.0 + u1.coef_norm() + u3.coef_norm())
}

/// Normalized moments of the two boundary data and the derived coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MomentSet {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub d1: f64,
    pub a3: f64,
    pub b3: f64,
    pub c3: f64,
    pub d3: f64,
    /// Coefficient of `ζ`.
    pub b: f64,
    /// Coefficient of `e1`.
    pub b_e1: f64,
    /// Coefficient of `e2`.
    pub b_e2: f64,
}

pub fn moment_coefficients(u1: &CircleData, u3: &CircleData) -> MomentSet {
    let scale = 1.0 / (2.0 * PI);
    let (m12, m13) = (u1.moment(2) * scale, u1.moment(3) * scale);
    let (m32, m33) = (u3.moment(2) * scale, u3.moment(3) * scale);
    let mut m = MomentSet {
        a1: m12.re,
        b1: m12.im,
        c1: m13.re,
        d1: m13.im,
        a3: m32.re,
        b3: m32.im,
        c3: m33.re,
        d3: m33.im,
        ..MomentSet::default()
    };
    m.b = -m.a3 - m.b1;
    m.b_e1 = -m.c3 - m.d1;
    m.b_e2 = m.d3 - m.c1;
    m
}

/// The free real constants `a, a1, a2` of the homogeneous family.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FreeConstants {
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
}

impl FreeConstants {
    pub fn new(a: f64, a1: f64, a2: f64) -> Self {
        Self { a, a1, a2 }
    }

    /// `i·(a·ζ + a1·e1 + a2·e2)`.
    pub fn term(&self, zeta: BPoint) -> BNumber {
        BNumber::new(
            I * (self.a * zeta.x + self.a1),
            I * (self.a * zeta.y + self.a2),
        )
    }
}

/// How interior values of `S_D[u]` are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiskMethod {
    /// Trapezoid quadrature of the defining integral.
    #[default]
    Quadrature,
    /// Closed form from the Fourier coefficients.
    Spectral,
}

/// General solution of the (1-3)-problem for the unit disk.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskSolution {
    pub u1: CircleData,
    pub u3: CircleData,
    pub constants: FreeConstants,
    pub moments: MomentSet,
    /// `∮ u1 dx + u3 dy` as computed at solve time.
    pub solvability: f64,
    pub quadrature: QuadratureSettings,
    pub method: DiskMethod,
}

pub fn solve_13_disk(
    u1: CircleData,
    u3: CircleData,
    constants: FreeConstants,
    quadrature: QuadratureSettings,
) -> Result<DiskSolution> {
    let integral = solvability_integral(&u1, &u3);
    if integral.abs() > solvability_tolerance(&u1, &u3) {
        return Err(Error::Unsolvable { integral });
    }
    let moments = moment_coefficients(&u1, &u3);
    Ok(DiskSolution {
        u1,
        u3,
        constants,
        moments,
        solvability: integral,
        quadrature,
        method: DiskMethod::default(),
    })
}

impl DiskSolution {
    pub fn with_method(mut self, method: DiskMethod) -> Self {
        self.method = method;
        self
    }

    fn affine(&self, zeta: BPoint) -> BNumber {
        let m = &self.moments;
        zeta.embed() * m.b
            + BNumber::new(Complex64::new(m.b_e1, 0.0), Complex64::new(m.b_e2, 0.0))
            + self.constants.term(zeta)
    }

    /// `Φ(ζ)` on the closed disk.
    pub fn value(&self, zeta: BPoint) -> Result<BNumber> {
        let r = zeta.norm();
        if !(r <= 1.0 + BOUNDARY_TOL) {
            return Err(Error::Domain(format!(
                "‖ζ‖ = {r} is outside the closed unit disk"
            )));
        }
        let (s1, s3) = if r >= 1.0 - BOUNDARY_TOL {
            let theta = zeta.y.atan2(zeta.x);
            (
                boundary_value_disk(&self.u1, theta),
                boundary_value_disk(&self.u3, theta),
            )
        } else {
            match self.method {
                DiskMethod::Quadrature => (
                    biharmonic_schwartz_disk(&self.u1, zeta, &self.quadrature)?,
                    biharmonic_schwartz_disk(&self.u3, zeta, &self.quadrature)?,
                ),
                DiskMethod::Spectral => (
                    spectral_unchecked(&self.u1, zeta),
                    spectral_unchecked(&self.u3, zeta),
                ),
            }
        };
        Ok(s1 + s3 * BNumber::e2() + self.affine(zeta))
    }

    /// Boundary value at angle `θ`.
    pub fn boundary_value(&self, theta: f64) -> BNumber {
        let zeta = BPoint::polar(1.0, theta);
        boundary_value_disk(&self.u1, theta)
            + boundary_value_disk(&self.u3, theta) * BNumber::e2()
            + self.affine(zeta)
    }
}

impl Field for DiskSolution {
    fn value(&self, at: BPoint) -> Result<BNumber> {
        DiskSolution::value(self, at)
    }
}

/// Integration path from the origin used for the monogenic primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimitivePath {
    /// The segment `[0, ζ]`.
    Radial,
    /// `0 → x·e1 → x·e1 + y·e2`.
    Staircase,
}

/// Solution `V` of the main biharmonic problem `∇V = (u1, u3)` on `∂D`.
///
/// `V = U1[Ψ]` where `Ψ` is the primitive of the (1-3)-solution `Φ` with
/// `Ψ(0) = 0`; `∂V/∂x = U1[Φ]` and `∂V/∂y = U3[Φ]`.
#[derive(Clone, Debug)]
pub struct MainBiharmonicSolution {
    pub derivative: DiskSolution,
    rule: GaussLegendre,
}

pub fn solve_main_biharmonic(
    u1: CircleData,
    u3: CircleData,
    quadrature: QuadratureSettings,
) -> Result<MainBiharmonicSolution> {
    let derivative = solve_13_disk(u1, u3, FreeConstants::default(), quadrature)?;
    let rule = GaussLegendre::new(quadrature.radial_nodes.max(1));
    Ok(MainBiharmonicSolution { derivative, rule })
}

impl MainBiharmonicSolution {
    /// `Ψ(ζ) = ∫₀^ζ Φ(ω) dω` along `path`.
    pub fn primitive(&self, zeta: BPoint, path: PrimitivePath) -> Result<BNumber> {
        if !(zeta.norm() <= 1.0 + BOUNDARY_TOL) {
            return Err(Error::Domain(format!(
                "‖ζ‖ = {} is outside the closed unit disk",
                zeta.norm()
            )));
        }
        match path {
            PrimitivePath::Radial => self.segment(BPoint::new(0.0, 0.0), zeta),
            PrimitivePath::Staircase => {
                let corner = BPoint::new(zeta.x, 0.0);
                Ok(self.segment(BPoint::new(0.0, 0.0), corner)? + self.segment(corner, zeta)?)
            }
        }
    }

    fn segment(&self, from: BPoint, to: BPoint) -> Result<BNumber> {
        let step = BPoint::new(to.x - from.x, to.y - from.y);
        let mut acc = BNumber::zero();
        for (&s, &w) in self.rule.nodes().iter().zip(self.rule.weights()) {
            let t = 0.5 * (s + 1.0);
            let p = BPoint::new(from.x + t * step.x, from.y + t * step.y);
            acc += self.derivative.value(p)? * (0.5 * w);
        }
        Ok(acc * step.embed())
    }

    /// `V(x, y)`, normalized by `V(0, 0) = 0`.
    pub fn potential(&self, at: BPoint) -> Result<f64> {
        Ok(self.primitive(at, PrimitivePath::Radial)?.components()[0])
    }

    /// `(∂V/∂x, ∂V/∂y) = (U1[Φ], U3[Φ])`.
    pub fn gradient(&self, at: BPoint) -> Result<(f64, f64)> {
        let u = self.derivative.value(at)?.components();
        Ok((u[0], u[2]))
    }
}
