//! Quadrature rules shared by the kernels and solvers.
//!
//! Two workhorses: the periodic trapezoid rule (spectrally accurate for the
//! analytic periodic integrands produced by trigonometric boundary data) and
//! composite 16-point Gauss–Legendre on panels, optionally graded
//! geometrically toward a near-singular point.

use std::env;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::bialgebra::BNumber;

/// Nodes per composite Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 16;

/// Environment variable overriding the default circle node count.
pub const NODES_ENV: &str = "BIHARM_NODES";

/// Values that can be summed with real weights.
pub trait Accumulate: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Accumulate for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Accumulate for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

impl Accumulate for BNumber {
    fn zero() -> Self {
        BNumber::zero()
    }
}

/// Node counts used across the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSettings {
    /// Base trapezoid node count on the unit circle.
    pub circle_nodes: usize,
    /// Base Gauss–Legendre node count for integrals over the real line.
    pub line_nodes: usize,
    /// Gauss–Legendre nodes for the radial primitive.
    pub radial_nodes: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            circle_nodes: 1024,
            line_nodes: 512,
            radial_nodes: 64,
        }
    }
}

impl QuadratureSettings {
    /// Settings with `nodes` on the circle and `nodes / 2` on the line.
    pub fn with_nodes(nodes: usize) -> Self {
        let nodes = nodes.max(1);
        Self {
            circle_nodes: nodes,
            line_nodes: (nodes / 2).max(PANEL_ORDER),
            ..Self::default()
        }
    }

    /// Defaults, overridden by `BIHARM_NODES` when it parses as a positive integer.
    pub fn from_env() -> Self {
        match env::var(NODES_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            Some(n) if n > 0 => Self::with_nodes(n),
            _ => Self::default(),
        }
    }

    /// Number of composite panels used for line integrals.
    pub fn line_panels(&self) -> usize {
        (self.line_nodes / PANEL_ORDER).max(1)
    }

    /// Trapezoid node count for a kernel whose nearest singularity sits at
    /// radius `r` (< 1) on the circle, for data of the given degree.
    ///
    /// The aliasing error of the rule decays like `M·r^M`, so the count grows
    /// like `1/(1 − r)` near the boundary.
    pub fn circle_nodes_for(&self, r: f64, degree: usize) -> usize {
        const CAP: usize = 1 << 22;
        let base = self.circle_nodes.max(1);
        if r <= 0.0 {
            return base;
        }
        let decay = -r.ln();
        if !(decay > 0.0) {
            return CAP;
        }
        let needed = (44.0 / decay).ceil() as usize + 2 * degree + 8;
        base.max(needed.min(CAP))
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<T: Accumulate>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The cached 16-point rule used on every composite panel.
pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
}

/// `count` equal panels covering `[lo, hi]`.
pub fn uniform_panels(lo: f64, hi: f64, count: usize) -> Vec<(f64, f64)> {
    let count = count.max(1);
    let step = (hi - lo) / count as f64;
    (0..count)
        .map(|k| {
            let a = lo + step * k as f64;
            let b = if k + 1 == count {
                hi
            } else {
                lo + step * (k + 1) as f64
            };
            (a, b)
        })
        .collect()
}

/// Panels running from `start` to `end` (either orientation) whose lengths
/// double from `first` until they reach `cap`.
///
/// Each panel is at least as far from `start` as it is long, which keeps a
/// singularity sitting within `first` of `start` well separated from every
/// panel in the scaled sense.
pub fn graded_panels(start: f64, end: f64, first: f64, cap: f64) -> Vec<(f64, f64)> {
    let total = (end - start).abs();
    let dir = (end - start).signum();
    let cap = cap.max(first);
    let mut panels = Vec::new();
    let mut pos = 0.0;
    let mut len = first.min(total);
    while pos < total {
        let next = if total - pos <= len * 1.5 {
            total
        } else {
            pos + len
        };
        panels.push((start + dir * pos, start + dir * next));
        pos = next;
        len = (len * 2.0).min(cap);
    }
    panels
}

/// Composite 16-point Gauss–Legendre over a list of panels.
pub fn integrate_panels<T: Accumulate>(panels: &[(f64, f64)], f: impl Fn(f64) -> T) -> T {
    let rule = panel_rule();
    panels
        .iter()
        .fold(T::zero(), |acc, &(a, b)| acc + rule.integrate(a, b, &f))
}

/// Integral over one period `[c − period/2, c + period/2]` with panels graded
/// symmetrically toward the centre `c`, starting from width `first`.
///
/// `cap` bounds the panel length away from the centre.
pub fn integrate_focused<T: Accumulate>(
    centre: f64,
    period: f64,
    first: f64,
    cap: f64,
    f: impl Fn(f64) -> T,
) -> T {
    let half = 0.5 * period;
    let right = graded_panels(centre, centre + half, first, cap);
    let left = graded_panels(centre, centre - half, first, cap);
    integrate_panels(&right, &f) + integrate_panels(&left, &f) * -1.0
}

/// Trapezoid rule with `n` nodes over one period starting at `start`.
pub fn trapezoid_periodic<T: Accumulate>(
    n: usize,
    start: f64,
    period: f64,
    f: impl Fn(f64) -> T,
) -> T {
    let n = n.max(1);
    let h = period / n as f64;
    let mut acc = T::zero();
    for k in 0..n {
        acc = acc + f(start + h * k as f64);
    }
    acc * h
}
