//! Independent checkers and generators: Cauchy–Riemann and biharmonic
//! residuals by finite differences, monogenic fields built from holomorphic
//! pairs, boundary traces, and fitting of the homogeneous family.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bialgebra::{BNumber, BPoint};
use crate::disk::{solvability_integral, solve_13_disk, FreeConstants};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::halfplane::solve_13_halfplane;
use crate::kernel::{CircleData, LineData};
use crate::quadrature::{graded_panels, integrate_panels, QuadratureSettings};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Base step of the Cauchy–Riemann check; scaled by `1 + ‖ζ‖`.
pub const CR_STEP: f64 = 1e-4;
/// Step of the 13-point biharmonic stencil.
pub const STENCIL_STEP: f64 = 1e-2;

/// Where a field may be probed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    HalfPlane,
    /// Closed disk of radius `rmax` about the origin.
    Disk {
        rmax: f64,
    },
}

impl Region {
    /// Fails unless the closed ball of radius `reach` about `p` lies inside.
    pub fn require(&self, p: BPoint, reach: f64) -> Result<()> {
        let ok = match *self {
            Region::HalfPlane => p.y - reach > 0.0,
            Region::Disk { rmax } => p.norm() + reach <= rmax,
        };
        if ok && p.x.is_finite() && p.y.is_finite() {
            Ok(())
        } else {
            Err(Error::Region(format!(
                "({}, {}) with reach {reach} leaves {self:?}",
                p.x, p.y
            )))
        }
    }
}

/// The two model domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Disk,
    HalfPlane,
}

impl Domain {
    /// Deterministic interior probe set (16 points).
    pub fn probe_points(self) -> Vec<BPoint> {
        let golden = PI * (3.0 - 5f64.sqrt());
        (0..16)
            .map(|k| {
                let k = k as f64;
                match self {
                    Domain::Disk => BPoint::polar(0.15 + 0.6 * (k / 15.0), golden * k),
                    Domain::HalfPlane => BPoint::new(
                        -2.0 + 4.0 * ((golden * k) / (2.0 * PI)).fract(),
                        0.3 + 0.1 * k,
                    ),
                }
            })
            .collect()
    }
}

/// A field together with the step and region used to probe it.
pub struct FieldProbe<'a> {
    pub field: &'a dyn Field,
    pub h: f64,
    pub region: Region,
}

impl<'a> FieldProbe<'a> {
    pub fn new(field: &'a dyn Field, region: Region) -> Self {
        Self {
            field,
            h: CR_STEP,
            region,
        }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }
}

/// `‖∂Φ/∂y − (∂Φ/∂x)·e2‖` by centered differences with step `h·(1 + ‖ζ‖)`.
pub fn cr_residual(p: &FieldProbe<'_>, zeta: BPoint) -> Result<f64> {
    if !(p.h > 0.0) {
        return Err(Error::Region(format!("step {} must be positive", p.h)));
    }
    let h = p.h * (1.0 + zeta.norm());
    p.region.require(zeta, 2.0 * h)?;
    let at = |dx: f64, dy: f64| p.field.value(BPoint::new(zeta.x + dx, zeta.y + dy));
    let dx = (at(h, 0.0)? - at(-h, 0.0)?).scale(Complex64::new(0.5 / h, 0.0));
    let dy = (at(0.0, h)? - at(0.0, -h)?).scale(Complex64::new(0.5 / h, 0.0));
    Ok((dy - dx * BNumber::e2()).norm())
}

const STENCIL: [(i32, i32, f64); 13] = [
    (0, 0, 20.0),
    (1, 0, -8.0),
    (-1, 0, -8.0),
    (0, 1, -8.0),
    (0, -1, -8.0),
    (1, 1, 2.0),
    (1, -1, 2.0),
    (-1, 1, 2.0),
    (-1, -1, 2.0),
    (2, 0, 1.0),
    (-2, 0, 1.0),
    (0, 2, 1.0),
    (0, -2, 1.0),
];

/// 13-point approximation of `Δ²U` at `(x, y)`.
pub fn biharmonic_residual(
    u: impl Fn(f64, f64) -> Result<f64>,
    x: f64,
    y: f64,
    h: f64,
    region: Region,
) -> Result<f64> {
    Ok(stencil_apply(u, x, y, h, region)?.0)
}

fn stencil_apply(
    u: impl Fn(f64, f64) -> Result<f64>,
    x: f64,
    y: f64,
    h: f64,
    region: Region,
) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::Region(format!("step {h} must be positive")));
    }
    region.require(BPoint::new(x, y), 2.0 * h)?;
    let mut acc = 0.0;
    let mut scale = 1.0f64;
    for &(i, j, w) in &STENCIL {
        let v = u(x + f64::from(i) * h, y + f64::from(j) * h)?;
        scale = scale.max(v.abs());
        acc += w * v;
    }
    Ok((acc / h.powi(4), scale))
}

/// Stencil value of `Δ²` for one component with its magnitude scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilResidual {
    pub value: f64,
    pub scale: f64,
}

/// `Δ²` of all four real components of a 𝔹-valued field, extrapolated as
/// `(4·R(h) − R(2h))/3` so that the `O(h²)` truncation term cancels.
///
/// The outer stencil reaches `4h` from `at`.
pub fn component_residuals(
    field: &dyn Field,
    at: BPoint,
    h: f64,
    region: Region,
) -> Result<[StencilResidual; 4]> {
    if !(h > 0.0) {
        return Err(Error::Region(format!("step {h} must be positive")));
    }
    region.require(at, 4.0 * h)?;
    let fine = stencil_components(field, at, h)?;
    let coarse = stencil_components(field, at, 2.0 * h)?;
    let mut out = [StencilResidual {
        value: 0.0,
        scale: 1.0,
    }; 4];
    for (k, r) in out.iter_mut().enumerate() {
        r.value = (4.0 * fine[k].0 - coarse[k].0) / 3.0;
        r.scale = fine[k].1.max(coarse[k].1);
    }
    Ok(out)
}

fn stencil_components(field: &dyn Field, at: BPoint, h: f64) -> Result<[(f64, f64); 4]> {
    let mut out = [(0.0, 1.0f64); 4];
    for &(i, j, w) in &STENCIL {
        let v = field
            .value(BPoint::new(
                at.x + f64::from(i) * h,
                at.y + f64::from(j) * h,
            ))?
            .components();
        for (slot, c) in out.iter_mut().zip(v) {
            slot.0 += w * c;
            slot.1 = slot.1.max(c.abs());
        }
    }
    let h4 = h.powi(4);
    Ok(out.map(|(v, s)| (v / h4, s)))
}

/// Independent variable of the polynomials in a [`HolomorphicPair`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variable {
    /// `P(z)`.
    #[default]
    Identity,
    /// `P(w(z))` with `w(z) = (1 + iz)/(1 − iz)`, bounded on the upper half-plane.
    Cayley,
}

/// Two holomorphic functions, given as polynomial coefficients (lowest first).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HolomorphicPair {
    pub f: Vec<Complex64>,
    pub f0: Vec<Complex64>,
    pub variable: Variable,
}

fn poly(c: &[Complex64], w: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a)
}

fn poly_derivative(c: &[Complex64], w: Complex64) -> Complex64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| {
            acc * w + a * k as f64
        })
}

fn cayley(z: Complex64) -> Complex64 {
    (1.0 + I * z) / (1.0 - I * z)
}

impl HolomorphicPair {
    pub fn new(f: Vec<Complex64>, f0: Vec<Complex64>) -> Self {
        Self {
            f,
            f0,
            variable: Variable::Identity,
        }
    }

    pub fn cayley(f: Vec<Complex64>, f0: Vec<Complex64>) -> Self {
        Self {
            f,
            f0,
            variable: Variable::Cayley,
        }
    }

    pub fn degree(&self) -> usize {
        self.f.len().max(self.f0.len()).saturating_sub(1)
    }

    fn variable(&self, z: Complex64) -> (Complex64, Complex64) {
        match self.variable {
            Variable::Identity => (z, Complex64::new(1.0, 0.0)),
            Variable::Cayley => {
                let d = 1.0 - I * z;
                (cayley(z), 2.0 * I / (d * d))
            }
        }
    }

    /// `(F(z), F′(z), F0(z))`.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let (w, dw) = self.variable(z);
        (
            poly(&self.f, w),
            poly_derivative(&self.f, w) * dw,
            poly(&self.f0, w),
        )
    }
}

/// `Φ(ζ) = F(z)·e1 − ((iy/2)·F′(z) − F0(z))·ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonogenicField {
    pub pair: HolomorphicPair,
}

impl MonogenicField {
    pub fn at(&self, zeta: BPoint) -> BNumber {
        let (f, fp, f0) = self.pair.eval(zeta.complex());
        BNumber::from_canonical(f, f0 - I * zeta.y * 0.5 * fp)
    }
}

impl Field for MonogenicField {
    fn value(&self, at: BPoint) -> Result<BNumber> {
        Ok(self.at(at))
    }
}

pub fn monogenic_from_holomorphic(pair: HolomorphicPair) -> MonogenicField {
    MonogenicField { pair }
}

/// Boundary data `(U1, U3)` of the field on the unit circle.
pub fn disk_traces(pair: &HolomorphicPair) -> Result<(CircleData, CircleData)> {
    if pair.variable != Variable::Identity {
        return Err(Error::Domain(
            "disk traces need a polynomial pair in z".into(),
        ));
    }
    let field = monogenic_from_holomorphic(pair.clone());
    // y·F′ raises the trigonometric degree by one
    let degree = pair.degree() + 1;
    let trace = |k: usize| {
        CircleData::interpolate(degree, |t| field.at(BPoint::polar(1.0, t)).components()[k])
            .chop(1e-14)
    };
    Ok((trace(0), trace(2)))
}

/// Boundary data `(U1, U3)` on the real axis as Cayley pullbacks.
///
/// At `y = 0` the field is `P(w)·e1 + P0(w)·ρ` with `w = e^{iθ}`, `t = tan(θ/2)`.
pub fn halfplane_traces(pair: &HolomorphicPair) -> Result<(LineData, LineData)> {
    if pair.variable != Variable::Cayley && pair.degree() > 0 {
        return Err(Error::Domain(
            "half-plane traces need a Cayley pullback pair".into(),
        ));
    }
    let degree = pair.degree();
    let at = |t: f64| {
        let w = Complex64::from_polar(1.0, t);
        (poly(&pair.f, w), poly(&pair.f0, w))
    };
    let u1 = CircleData::interpolate(degree, |t| {
        let (f, f0) = at(t);
        (f + 2.0 * f0).re
    });
    let u3 = CircleData::interpolate(degree, |t| -2.0 * at(t).1.im);
    Ok((LineData::new(u1.chop(1e-14)), LineData::new(u3.chop(1e-14))))
}

/// Result of fitting `Φb − Φa` to `i·(a·ζ + a1·e1 + a2·e2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HomogeneousFit {
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    /// Sup-norm of the residual over the probe set.
    pub residual: f64,
}

/// Least-squares fit over [`Domain::probe_points`]; `a = 0` on the half-plane.
pub fn match_up_to_homogeneous(
    fa: &dyn Field,
    fb: &dyn Field,
    domain: Domain,
) -> Result<HomogeneousFit> {
    let points = domain.probe_points();
    let diffs = points
        .iter()
        .map(|&p| Ok((p, fb.value(p)? - fa.value(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let n = diffs.len() as f64;
    let (s1, s2) = diffs
        .iter()
        .fold((0.0, 0.0), |(s1, s2), (_, d)| (s1 + d.z1.im, s2 + d.z2.im));
    let (a, a1, a2) = match domain {
        Domain::HalfPlane => (0.0, s1 / n, s2 / n),
        Domain::Disk => {
            // normal equations for Im z1 = a·x + a1, Im z2 = a·y + a2
            let (mut sxx, mut sx, mut sy, mut rhs) = (0.0, 0.0, 0.0, 0.0);
            for (p, d) in &diffs {
                sxx += p.x * p.x + p.y * p.y;
                sx += p.x;
                sy += p.y;
                rhs += p.x * d.z1.im + p.y * d.z2.im;
            }
            // eliminate a1 = (s1 − a·sx)/n and a2 = (s2 − a·sy)/n
            let denom = sxx - (sx * sx + sy * sy) / n;
            let a = (rhs - (sx * s1 + sy * s2) / n) / denom;
            (a, (s1 - a * sx) / n, (s2 - a * sy) / n)
        }
    };
    let fitted = FreeConstants::new(a, a1, a2);
    let residual = diffs
        .iter()
        .map(|(p, d)| (*d - fitted.term(*p)).norm())
        .fold(0.0, f64::max);
    Ok(HomogeneousFit {
        a,
        a1,
        a2,
        residual,
    })
}

/// Outcome of [`roundtrip_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct RoundtripReport {
    pub fit: HomogeneousFit,
    /// Contour integral of the traces (disk only; zero on the half-plane).
    pub solvability: f64,
}

/// Builds `Φ` from `pair`, extracts its boundary data, solves the
/// (1-3)-problem and matches the result against `Φ`.
pub fn roundtrip_check(
    pair: &HolomorphicPair,
    domain: Domain,
    q: QuadratureSettings,
) -> Result<RoundtripReport> {
    let truth = monogenic_from_holomorphic(pair.clone());
    match domain {
        Domain::Disk => {
            let (u1, u3) = disk_traces(pair)?;
            let solvability = solvability_integral(&u1, &u3);
            let sol = solve_13_disk(u1, u3, FreeConstants::default(), q)?;
            let fit = match_up_to_homogeneous(&truth, &sol, domain)?;
            Ok(RoundtripReport { fit, solvability })
        }
        Domain::HalfPlane => {
            let (u1, u3) = halfplane_traces(pair)?;
            let sol = solve_13_halfplane(u1, u3, 0.0, 0.0, q);
            let fit = match_up_to_homogeneous(&truth, &sol, domain)?;
            Ok(RoundtripReport {
                fit,
                solvability: 0.0,
            })
        }
    }
}

/// `S_∂D[u]` at angle `θ` by direct quadrature of the 𝔹-valued kernel with
/// the arc `‖τ − ζ‖ < ε` removed, extrapolated to `ε → 0` from
/// `ε = 10⁻², 10⁻³`.
pub fn singular_boundary_pv(u: &CircleData, theta: f64) -> BNumber {
    let zeta = BPoint::polar(1.0, theta).embed();
    let kernel = |t: f64| {
        let (s, c) = t.sin_cos();
        let tau = BPoint::new(c, s).embed();
        let dtau = BPoint::new(-s, c).embed();
        match ((tau - zeta).inv(), tau.inv()) {
            (Ok(a), Ok(b)) => (tau + zeta) * a * b * dtau * u.eval(t),
            _ => BNumber::zero(),
        }
    };
    let at = |eps: f64| {
        let delta = 2.0 * (eps / 2.0).asin();
        let right = graded_panels(theta + delta, theta + PI, delta, 0.05);
        let left = graded_panels(theta - delta, theta - PI, delta, 0.05);
        (integrate_panels(&right, kernel) - integrate_panels(&left, kernel))
            .scale(1.0 / (2.0 * PI * I))
    };
    let (e1, e2) = (1e-2, 1e-3);
    let (v1, v2) = (at(e1), at(e2));
    v2 + (v2 - v1) * (e2 / (e1 - e2))
}

/// Two-point extrapolation `2·f(s) − f(2s)` of a boundary approach.
fn extrapolate(near: BNumber, far: BNumber) -> BNumber {
    near * 2.0 - far
}

/// Largest deviation of the extrapolated interior values from `(u1, u3)` at
/// `count` equispaced angles, approaching from `r = 1 − 10⁻³, 1 − 2·10⁻³`.
pub fn disk_boundary_recovery(
    field: &dyn Field,
    u1: &CircleData,
    u3: &CircleData,
    count: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..count {
        let t = 2.0 * PI * k as f64 / count as f64;
        let v = extrapolate(
            field.value(BPoint::polar(1.0 - 1e-3, t))?,
            field.value(BPoint::polar(1.0 - 2e-3, t))?,
        )
        .components();
        worst = worst
            .max((v[0] - u1.eval(t)).abs())
            .max((v[2] - u3.eval(t)).abs());
    }
    Ok(worst)
}

/// Half-plane analogue of [`disk_boundary_recovery`] at the given abscissae,
/// approaching from `y = 10⁻³, 2·10⁻³`.
pub fn halfplane_boundary_recovery(
    field: &dyn Field,
    u1: &LineData,
    u3: &LineData,
    xs: &[f64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in xs {
        let v = extrapolate(
            field.value(BPoint::new(x, 1e-3))?,
            field.value(BPoint::new(x, 2e-3))?,
        )
        .components();
        worst = worst
            .max((v[0] - u1.eval(x)).abs())
            .max((v[2] - u3.eval(x)).abs());
    }
    Ok(worst)
}
