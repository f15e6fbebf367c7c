//! Complex-plane building blocks for the biharmonic integrals.
//!
//! Boundary data are trigonometric polynomials. On the unit circle that is
//! [`CircleData`]; on the real line, [`LineData`] composes a circle
//! polynomial with the pullback angle `θ(t) = 2·atan(t)`, so data on ℝ are
//! smooth and have a finite limit at infinity.
//!
//! Disk quantities (the Schwartz function, conjugate function and circle
//! moments) are read off the Fourier coefficients exactly. Line integrals
//! are computed in the variable `φ = atan(t)`, in which every integrand below
//! becomes π-periodic and smooth up to one near-pole at `φ₀ = atan(z)`;
//! composite Gauss–Legendre panels are graded toward that pole when it comes
//! close to the real axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_focused, integrate_panels, uniform_panels, QuadratureSettings};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real trigonometric polynomial `a0 + Σ aₙ cos nθ + bₙ sin nθ` on the unit circle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleData {
    pub a0: f64,
    /// Cosine coefficients `a₁, a₂, …`.
    #[serde(rename = "cos", default)]
    pub a: Vec<f64>,
    /// Sine coefficients `b₁, b₂, …`.
    #[serde(rename = "sin", default)]
    pub b: Vec<f64>,
}

impl CircleData {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Self {
        Self { a0, a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::new(c, vec![], vec![])
    }

    /// `cos nθ`.
    pub fn cos(n: usize) -> Self {
        Self::harmonic(n, 1.0, 0.0)
    }

    /// `sin nθ`.
    pub fn sin(n: usize) -> Self {
        Self::harmonic(n, 0.0, 1.0)
    }

    /// `ca·cos nθ + cb·sin nθ`.
    pub fn harmonic(n: usize, ca: f64, cb: f64) -> Self {
        if n == 0 {
            return Self::constant(ca);
        }
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[n - 1] = ca;
        b[n - 1] = cb;
        Self::new(0.0, a, b)
    }

    pub fn degree(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    /// Cosine coefficient `aₙ` (`a0` for `n = 0`), zero past the degree.
    pub fn cos_coef(&self, n: usize) -> f64 {
        if n == 0 {
            self.a0
        } else {
            self.a.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn sin_coef(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.b.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    /// Taylor coefficient `aₙ − i·bₙ` of the Schwartz function (`a0` for `n = 0`).
    pub fn taylor(&self, n: usize) -> Complex64 {
        Complex64::new(self.cos_coef(n), -self.sin_coef(n))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = !self.a0.is_finite() || self.a.iter().chain(&self.b).any(|v| !v.is_finite());
        if bad {
            return Err(Error::Schema("coefficients must be finite".into()));
        }
        Ok(())
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coef_norm(&self) -> f64 {
        let s: f64 = self.a.iter().chain(&self.b).map(|v| v * v).sum();
        (self.a0 * self.a0 + s).sqrt()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.a0;
        for n in 1..=self.degree() {
            let (s, c) = (n as f64 * theta).sin_cos();
            acc += self.cos_coef(n) * c + self.sin_coef(n) * s;
        }
        acc
    }

    /// `dû/dθ`.
    pub fn derivative(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for n in 1..=self.degree() {
            let nf = n as f64;
            let (s, c) = (nf * theta).sin_cos();
            acc += nf * (self.sin_coef(n) * c - self.cos_coef(n) * s);
        }
        acc
    }

    /// Conjugate function `ũ(θ) = Σ aₙ sin nθ − bₙ cos nθ`.
    pub fn conjugate(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for n in 1..=self.degree() {
            let (s, c) = (n as f64 * theta).sin_cos();
            acc += self.cos_coef(n) * s - self.sin_coef(n) * c;
        }
        acc
    }

    /// Schwartz function `F(z) = a0 + Σ (aₙ − i·bₙ) zⁿ` (no domain check).
    pub fn schwartz(&self, z: Complex64) -> Complex64 {
        horner((0..=self.degree()).map(|n| self.taylor(n)), z)
    }

    /// `F′(z)`.
    pub fn schwartz_derivative(&self, z: Complex64) -> Complex64 {
        horner((1..=self.degree()).map(|n| self.taylor(n) * n as f64), z)
    }

    /// `∮_{∂D} û(t)/tᵏ dt`, exact from the coefficients.
    pub fn moment(&self, k: i32) -> Complex64 {
        // ∮ û t^{-k} dt = i·2π·ĉ_{k−1}
        I * 2.0 * PI * self.fourier(i64::from(k) - 1)
    }

    /// Exponential Fourier coefficient `ĉ_m = (1/2π)∫ û e^{−imθ} dθ`.
    pub fn fourier(&self, m: i64) -> Complex64 {
        match m {
            0 => Complex64::new(self.a0, 0.0),
            m if m > 0 => self.taylor(m as usize) * 0.5,
            m => self.taylor((-m) as usize).conj() * 0.5,
        }
    }

    /// Trigonometric interpolant of degree `degree`; exact when `f` is itself
    /// a trigonometric polynomial of at most that degree.
    pub fn interpolate(degree: usize, f: impl Fn(f64) -> f64) -> Self {
        let m = 4 * degree + 4;
        let samples: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / m as f64;
                (theta, f(theta))
            })
            .collect();
        let mf = m as f64;
        let a0 = samples.iter().map(|s| s.1).sum::<f64>() / mf;
        let mut a = Vec::with_capacity(degree);
        let mut b = Vec::with_capacity(degree);
        for n in 1..=degree {
            let nf = n as f64;
            a.push(
                2.0 / mf
                    * samples
                        .iter()
                        .map(|&(t, v)| v * (nf * t).cos())
                        .sum::<f64>(),
            );
            b.push(
                2.0 / mf
                    * samples
                        .iter()
                        .map(|&(t, v)| v * (nf * t).sin())
                        .sum::<f64>(),
            );
        }
        Self::new(a0, a, b)
    }

    /// Drops coefficients with magnitude below `tol`, trimming the tail.
    pub fn chop(mut self, tol: f64) -> Self {
        for v in self.a.iter_mut().chain(self.b.iter_mut()) {
            if v.abs() < tol {
                *v = 0.0;
            }
        }
        if self.a0.abs() < tol {
            self.a0 = 0.0;
        }
        while self.a.last() == Some(&0.0) {
            self.a.pop();
        }
        while self.b.last() == Some(&0.0) {
            self.b.pop();
        }
        self
    }
}

fn horner(coefs: impl DoubleEndedIterator<Item = Complex64>, z: Complex64) -> Complex64 {
    coefs
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Boundary datum on ℝ ∪ {∞}: `u(t) = pullback(2·atan t)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineData {
    pub pullback: CircleData,
}

impl LineData {
    pub fn new(pullback: CircleData) -> Self {
        Self { pullback }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::new(CircleData::constant(c))
    }

    /// `1/(1 + t²) = (1 + cos θ)/2`.
    pub fn lorentzian() -> Self {
        Self::new(CircleData::new(0.5, vec![0.5], vec![]))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.pullback.eval(2.0 * t.atan())
    }

    /// `u(∞) = pullback(π)`.
    pub fn at_infinity(&self) -> f64 {
        self.pullback.eval(PI)
    }

    /// `u(tan φ)`, valid for every real `φ` by periodicity.
    pub fn eval_angle(&self, phi: f64) -> f64 {
        self.pullback.eval(2.0 * phi)
    }
}

pub fn eval_circle(u: &CircleData, theta: f64) -> f64 {
    u.eval(theta)
}

/// Holomorphic `F` in the unit disk with `Re F = û` on `∂D` and `Im F(0) = 0`.
pub fn schwartz_disk(u: &CircleData, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "|z| = {} is not inside the unit disk",
            z.norm()
        )));
    }
    Ok(u.schwartz(z))
}

/// Conjugate function `ũ(θ)`; the principal-value integral `S₀[û](e^{iθ})`
/// equals `i·ũ(θ)`.
pub fn conjugate_boundary(u: &CircleData, theta: f64) -> f64 {
    u.conjugate(theta)
}

/// `∮_{∂D} û(t)/tᵏ dt = i·π·(a_{k−1} − i·b_{k−1})` for `k ≥ 2`.
pub fn circle_moment(u: &CircleData, k: i32) -> Complex64 {
    u.moment(k)
}

fn require_upper(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("Im z = {} is not positive", z.im)));
    }
    Ok(())
}

/// Location of the near-pole `φ₀ = atan(z)` as (real part, distance to the real axis).
fn pole_angle(z: Complex64) -> (f64, f64) {
    let (x, y) = (z.re, z.im);
    let centre = 0.5 * (2.0 * x).atan2(1.0 - x * x - y * y);
    let width = 0.25 * ((x * x + (y + 1.0) * (y + 1.0)) / (x * x + (y - 1.0) * (y - 1.0))).ln();
    (centre, width)
}

/// Integral over one π-period in `φ` of an integrand with a pole at `atan(z)`.
fn line_integral(q: &QuadratureSettings, z: Complex64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let panels = q.line_panels();
    let cap = PI / panels as f64;
    let (centre, width) = pole_angle(z);
    if width.is_finite() && width < cap {
        integrate_focused(centre, PI, width, cap, f)
    } else {
        // fixed panel layout keeps the quadrature error smooth in z
        integrate_panels(&uniform_panels(-0.5 * PI, 0.5 * PI, panels), f)
    }
}

/// Complex Schwartz integral for the upper half-plane,
/// `S[u](z) = (1/πi)∫ u(t)(1 + tz)/((t² + 1)(t − z)) dt`.
pub fn schwartz_halfplane(u: &LineData, z: Complex64, q: &QuadratureSettings) -> Result<Complex64> {
    require_upper(z)?;
    // with t = tan φ: (1 + tz)/(t − z) dt/(1 + t²) = (cos φ + z sin φ)/(sin φ − z cos φ) dφ.
    // Near the axis, u at the pole's real part is subtracted; the kernel alone integrates to πi.
    let (centre, width) = pole_angle(z);
    let near = width.is_finite() && width < PI / q.line_panels() as f64;
    let u_c = if near { u.eval_angle(centre) } else { 0.0 };
    let integral = line_integral(q, z, |phi| {
        let (s, c) = phi.sin_cos();
        (c + z * s) / (s - z * c) * (u.eval_angle(phi) - u_c)
    });
    Ok(integral / (PI * I) + u_c)
}

/// `∫ u(t)/(t − z)² dt` for `Im z > 0`.
pub fn hp_second_kernel(u: &LineData, z: Complex64, q: &QuadratureSettings) -> Result<Complex64> {
    require_upper(z)?;
    Ok(line_integral(q, z, |phi| {
        let (s, c) = phi.sin_cos();
        let d = s - z * c;
        u.eval_angle(phi) / (d * d)
    }))
}

/// Principal-value term `(1/πi)·PV∫ u(t)/(t² + 1)·(1 + tξ)/(t − ξ) dt`.
///
/// Uses `(1 + tξ)/((t² + 1)(t − ξ)) = 1/(t − ξ) − t/(t² + 1)`, whose symmetric
/// principal value vanishes, to subtract `u(ξ)`; in `φ = atan t` the kernel
/// becomes `cot(φ − φ_ξ)` and the regularized integrand is smooth.
pub fn line_pv_boundary(u: &LineData, xi: f64, q: &QuadratureSettings) -> Complex64 {
    let phi_xi = xi.atan();
    let u_xi = u.eval(xi);
    let cap = PI / q.line_panels() as f64;
    let integral: f64 = integrate_focused(phi_xi, PI, cap, cap, |phi| {
        let d = phi - phi_xi;
        (u.eval_angle(phi) - u_xi) * d.cos() / d.sin()
    });
    Complex64::new(integral, 0.0) / (PI * I)
}

/// Principal-value term `(1/πi)·PV∫ u(t)·t/(t² + 1) dt` of the limit at infinity,
/// regularized by subtracting `u(∞)`.
pub fn line_pv_infinity(u: &LineData, q: &QuadratureSettings) -> Complex64 {
    let u_inf = u.at_infinity();
    let cap = PI / q.line_panels() as f64;
    // t/(t² + 1) dt = tan φ dφ; the window is centred on φ = π/2 (t = ∞)
    let integral: f64 = integrate_focused(0.5 * PI, PI, cap, cap, |phi| {
        let (s, c) = phi.sin_cos();
        (u.eval_angle(phi) - u_inf) * s / c
    });
    Complex64::new(integral, 0.0) / (PI * I)
}
