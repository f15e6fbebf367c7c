//! Command-line driver: `solve`, `verify` and `selftest`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::bialgebra::{BNumber, BPoint};
use crate::disk::{
    biharmonic_schwartz_disk, singular_boundary_disk, solvability_tolerance, solve_13_disk,
    solve_main_biharmonic, DiskSolution, FreeConstants, MainBiharmonicSolution,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::halfplane::{solve_13_halfplane, HalfplaneSolution};
use crate::kernel::{CircleData, LineData};
use crate::quadrature::{QuadratureSettings, NODES_ENV};
use crate::verification::{
    component_residuals, cr_residual, disk_boundary_recovery, halfplane_boundary_recovery,
    singular_boundary_pv, FieldProbe, Region, STENCIL_STEP,
};

/// Tolerance of every selftest identity.
pub const SELFTEST_TOL: f64 = 1e-9;
const CR_TOL: f64 = 1e-6;
const STENCIL_TOL: f64 = 1e-4;
const RECOVERY_TOL: f64 = 1e-3;
const PV_TOL: f64 = 1e-4;
const GRADIENT_TOL: f64 = 1e-6;
const VERIFY_POINTS: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "biharm",
    version,
    about = "Boundary value problems for monogenic functions in the biharmonic plane"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and write the field on a grid.
    Solve(JobArgs),
    /// Run residual and consistency checks on a solved problem.
    Verify(JobArgs),
    /// Check closed-form identities of the algebra and the disk integral.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Halfplane,
    Disk,
    MainBiharmonic,
}

impl DomainKind {
    fn name(self) -> &'static str {
        match self {
            DomainKind::Halfplane => "halfplane",
            DomainKind::Disk => "disk",
            DomainKind::MainBiharmonic => "main-biharmonic",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Deliberate corruptions used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Exchange the `e1` and `e2` parts of the solved field.
    SwapComponents,
    /// Multiply with `e2² = −e1` in the selftest.
    WrongTable,
}

/// Grid resolution `NxM`: `N` abscissae by `M` ordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NxM, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        Ok(Grid {
            nx: parse(a)?,
            ny: parse(b)?,
        })
    }
}

#[derive(Clone, Debug, Args)]
pub struct JobArgs {
    #[arg(long, value_enum, default_value = "disk")]
    pub domain: DomainKind,
    /// Boundary data for U1 (JSON); absent means zero.
    #[arg(long)]
    pub u1: Option<PathBuf>,
    /// Boundary data for U3 (JSON); absent means zero.
    #[arg(long)]
    pub u3: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a2: f64,
    #[arg(long, default_value = "16x16")]
    pub grid: Grid,
    /// Disk grids cover the square inscribed in the circle of this radius.
    #[arg(long, default_value_t = 0.9)]
    pub rmax: f64,
    /// Half-plane grids cover `[-X, X] × [ymin, X]`.
    #[arg(long, default_value_t = 2.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub ymin: f64,
    /// Trapezoid nodes on the circle; line integrals use half as many.
    #[arg(long, env = NODES_ENV)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, value_enum, hide = true)]
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, env = NODES_ENV)]
    pub nodes: Option<usize>,
    #[arg(long, value_enum, hide = true)]
    pub fault: Option<Fault>,
}

/// Boundary data as loaded for a job.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryData {
    Circle(CircleData, CircleData),
    Line(LineData, LineData),
}

/// A validated job.
#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub domain: DomainKind,
    pub data: BoundaryData,
    /// SHA-256 of the canonical JSON of each datum.
    pub hashes: [String; 2],
    pub constants: FreeConstants,
    pub grid: Grid,
    pub rmax: f64,
    pub extent: f64,
    pub ymin: f64,
    pub quadrature: QuadratureSettings,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub fault: Option<Fault>,
}

fn read_data<T>(path: Option<&Path>) -> Result<T>
where
    T: Default + serde::de::DeserializeOwned,
{
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", p.display())))
        }
    }
}

fn digest<T: Serialize>(v: &T) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(v)?)))
}

impl JobConfig {
    pub fn from_args(args: &JobArgs) -> Result<Self> {
        if args.grid.nx < 2 || args.grid.ny < 2 {
            return Err(Error::Usage(format!(
                "grid resolution must be at least 2x2, got {}x{}",
                args.grid.nx, args.grid.ny
            )));
        }
        let quadrature = match args.nodes {
            Some(0) => return Err(Error::Usage("--nodes must be positive".into())),
            Some(n) => QuadratureSettings::with_nodes(n),
            None => QuadratureSettings::default(),
        };
        let (data, hashes) = match args.domain {
            DomainKind::Halfplane => {
                if !(args.extent > 0.0 && args.ymin > 0.0 && args.ymin < args.extent) {
                    return Err(Error::Usage(
                        "half-plane grids need 0 < ymin < extent".into(),
                    ));
                }
                let u1: LineData = read_data(args.u1.as_deref())?;
                let u3: LineData = read_data(args.u3.as_deref())?;
                u1.pullback.validate()?;
                u3.pullback.validate()?;
                let hashes = [digest(&u1)?, digest(&u3)?];
                (BoundaryData::Line(u1, u3), hashes)
            }
            DomainKind::Disk | DomainKind::MainBiharmonic => {
                if !(args.rmax > 0.0 && args.rmax < 1.0) {
                    return Err(Error::Usage(format!(
                        "rmax must lie in (0, 1), got {}",
                        args.rmax
                    )));
                }
                let u1: CircleData = read_data(args.u1.as_deref())?;
                let u3: CircleData = read_data(args.u3.as_deref())?;
                u1.validate()?;
                u3.validate()?;
                let hashes = [digest(&u1)?, digest(&u3)?];
                (BoundaryData::Circle(u1, u3), hashes)
            }
        };
        Ok(Self {
            domain: args.domain,
            data,
            hashes,
            constants: FreeConstants::new(args.a, args.a1, args.a2),
            grid: args.grid,
            rmax: args.rmax,
            extent: args.extent,
            ymin: args.ymin,
            quadrature,
            out: args.out.clone(),
            format: args.format,
            fault: args.fault,
        })
    }

    /// Grid points in row-major order (`y` outer, `x` inner).
    pub fn grid_points(&self) -> Vec<BPoint> {
        let lin = |lo: f64, hi: f64, n: usize, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let (x0, x1, y0, y1) = match self.domain {
            DomainKind::Halfplane => (-self.extent, self.extent, self.ymin, self.extent),
            DomainKind::Disk | DomainKind::MainBiharmonic => {
                let s = self.rmax / 2f64.sqrt();
                (-s, s, -s, s)
            }
        };
        (0..self.grid.ny)
            .flat_map(|j| (0..self.grid.nx).map(move |i| (i, j)))
            .map(|(i, j)| BPoint::new(lin(x0, x1, self.grid.nx, i), lin(y0, y1, self.grid.ny, j)))
            .collect()
    }

    /// Deterministic interior points for the residual checks.
    fn probe_points(&self) -> Vec<BPoint> {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        (0..VERIFY_POINTS)
            .map(|k| {
                let s = (k as f64 + 0.5) / VERIFY_POINTS as f64;
                let turn = (k as f64 * golden).fract();
                match self.domain {
                    DomainKind::Halfplane => {
                        // the stencil truncation grows quickly toward the axis
                        let lo = self.ymin.max(0.5).min(0.5 * self.extent);
                        BPoint::new(
                            self.extent * (2.0 * turn - 1.0),
                            lo + (self.extent - lo) * s,
                        )
                    }
                    _ => BPoint::polar((self.rmax - 0.05).max(0.0) * s.sqrt(), 2.0 * PI * turn),
                }
            })
            .collect()
    }

    fn region(&self) -> Region {
        match self.domain {
            DomainKind::Halfplane => Region::HalfPlane,
            _ => Region::Disk { rmax: 1.0 },
        }
    }
}

/// A solved job.
pub enum Solved {
    Halfplane(HalfplaneSolution),
    Disk(DiskSolution),
    Main(MainBiharmonicSolution),
}

impl Solved {
    pub fn field(&self) -> &dyn Field {
        match self {
            Solved::Halfplane(s) => s,
            Solved::Disk(s) => s,
            Solved::Main(s) => &s.derivative,
        }
    }

    fn solvability(&self) -> Option<f64> {
        match self {
            Solved::Halfplane(_) => None,
            Solved::Disk(s) => Some(s.solvability),
            Solved::Main(s) => Some(s.derivative.solvability),
        }
    }
}

pub fn solve_job(cfg: &JobConfig) -> Result<Solved> {
    let q = cfg.quadrature;
    let k = cfg.constants;
    Ok(match (&cfg.data, cfg.domain) {
        (BoundaryData::Line(u1, u3), _) => {
            Solved::Halfplane(solve_13_halfplane(u1.clone(), u3.clone(), k.a1, k.a2, q))
        }
        (BoundaryData::Circle(u1, u3), DomainKind::MainBiharmonic) => {
            Solved::Main(solve_main_biharmonic(u1.clone(), u3.clone(), q)?)
        }
        (BoundaryData::Circle(u1, u3), _) => {
            Solved::Disk(solve_13_disk(u1.clone(), u3.clone(), k, q)?)
        }
    })
}

struct Swapped<'a>(&'a dyn Field);

impl Field for Swapped<'_> {
    fn value(&self, at: BPoint) -> Result<BNumber> {
        let v = self.0.value(at)?;
        Ok(BNumber::new(v.z2, v.z1))
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    domain: &'static str,
    u1_sha256: &'a str,
    u3_sha256: &'a str,
    circle_nodes: usize,
    line_nodes: usize,
    radial_nodes: usize,
    a: f64,
    a1: f64,
    a2: f64,
    solvability_integral: Option<f64>,
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders the field on the configured grid.
pub fn render_solution(cfg: &JobConfig, solved: &Solved) -> Result<String> {
    let points = cfg.grid_points();
    let (columns, rows): (&[&str], Vec<Vec<f64>>) = match solved {
        Solved::Main(v) => (
            &["x", "y", "V"],
            points
                .par_iter()
                .map(|&p| Ok(vec![p.x, p.y, v.potential(p)?]))
                .collect::<Result<_>>()?,
        ),
        _ => {
            let field = solved.field();
            (
                &["x", "y", "U1", "U2", "U3", "U4"],
                points
                    .par_iter()
                    .map(|&p| {
                        let u = field.value(p)?.components();
                        Ok(vec![p.x, p.y, u[0], u[1], u[2], u[3]])
                    })
                    .collect::<Result<_>>()?,
            )
        }
    };
    let q = cfg.quadrature;
    let meta = Metadata {
        domain: cfg.domain.name(),
        u1_sha256: &cfg.hashes[0],
        u3_sha256: &cfg.hashes[1],
        circle_nodes: q.circle_nodes,
        line_nodes: q.line_nodes,
        radial_nodes: q.radial_nodes,
        a: cfg.constants.a,
        a1: cfg.constants.a1,
        a2: cfg.constants.a2,
        solvability_integral: solved.solvability(),
    };
    match cfg.format {
        Format::Json => {
            let doc = json!({ "metadata": meta, "columns": columns, "records": rows });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# biharm {}", env!("CARGO_PKG_VERSION"));
            let _ = writeln!(s, "# domain = {}", meta.domain);
            let _ = writeln!(s, "# u1_sha256 = {}", meta.u1_sha256);
            let _ = writeln!(s, "# u3_sha256 = {}", meta.u3_sha256);
            let _ = writeln!(
                s,
                "# quadrature = circle_nodes:{} line_nodes:{} radial_nodes:{}",
                meta.circle_nodes, meta.line_nodes, meta.radial_nodes
            );
            let _ = writeln!(
                s,
                "# constants = a:{} a1:{} a2:{}",
                fmt_f64(meta.a),
                fmt_f64(meta.a1),
                fmt_f64(meta.a2)
            );
            if let Some(v) = meta.solvability_integral {
                let _ = writeln!(s, "# solvability_integral = {}", fmt_f64(v));
            }
            s.push_str(&columns.join(","));
            s.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

/// One line of the verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, value: f64, threshold: f64) -> Self {
        // NaN never passes
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub domain: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v)
        }
    })
}

pub fn verify_job(cfg: &JobConfig, solved: &Solved) -> Result<VerifyReport> {
    let swapped;
    let field: &dyn Field = if cfg.fault == Some(Fault::SwapComponents) {
        swapped = Swapped(solved.field());
        &swapped
    } else {
        solved.field()
    };
    let region = cfg.region();
    let points = cfg.probe_points();
    let mut checks = Vec::new();

    if let BoundaryData::Circle(u1, u3) = &cfg.data {
        let integral = solved.solvability().unwrap_or(0.0);
        checks.push(Check::new(
            "solvability",
            integral.abs(),
            solvability_tolerance(u1, u3),
        ));
    }

    let probe = FieldProbe::new(field, region);
    let cr = points
        .par_iter()
        .map(|&p| cr_residual(&probe, p))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::new("cr_residual", max_of(cr), CR_TOL));

    let stencil = points
        .par_iter()
        .map(|&p| {
            let r = component_residuals(field, p, STENCIL_STEP, region)?;
            Ok(max_of(r.iter().map(|c| c.value.abs() / c.scale)))
        })
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::new(
        "biharmonic_stencil",
        max_of(stencil),
        STENCIL_TOL,
    ));

    match &cfg.data {
        BoundaryData::Circle(u1, u3) => {
            checks.push(Check::new(
                "boundary_recovery",
                disk_boundary_recovery(field, u1, u3, 16)?,
                RECOVERY_TOL,
            ));
            let pv = (0..16)
                .into_par_iter()
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / 16.0;
                    let d1 = (singular_boundary_pv(u1, t) - singular_boundary_disk(u1, t)).norm();
                    let d3 = (singular_boundary_pv(u3, t) - singular_boundary_disk(u3, t)).norm();
                    d1.max(d3)
                })
                .collect::<Vec<_>>();
            checks.push(Check::new("singular_boundary_pv", max_of(pv), PV_TOL));
        }
        BoundaryData::Line(u1, u3) => {
            let xs: Vec<f64> = (0..9)
                .map(|k| cfg.extent * (k as f64 / 4.0 - 1.0))
                .collect();
            checks.push(Check::new(
                "boundary_recovery",
                halfplane_boundary_recovery(field, u1, u3, &xs)?,
                RECOVERY_TOL,
            ));
        }
    }

    if let Solved::Main(v) = solved {
        let h = 1e-4;
        let grad = points
            .par_iter()
            .take(8)
            .map(|&p| {
                let dvx = (v.potential(BPoint::new(p.x + h, p.y))?
                    - v.potential(BPoint::new(p.x - h, p.y))?)
                    / (2.0 * h);
                let dvy = (v.potential(BPoint::new(p.x, p.y + h))?
                    - v.potential(BPoint::new(p.x, p.y - h))?)
                    / (2.0 * h);
                let u = field.value(p)?.components();
                Ok((dvx - u[0]).abs().max((dvy - u[2]).abs()))
            })
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::new("potential_gradient", max_of(grad), GRADIENT_TOL));
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        domain: cfg.domain.name(),
        checks,
        pass,
    })
}

/// One row of the selftest table.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub name: &'static str,
    pub error: f64,
}

impl Identity {
    pub fn pass(&self) -> bool {
        self.error <= SELFTEST_TOL
    }
}

fn product(fault: Option<Fault>) -> fn(BNumber, BNumber) -> BNumber {
    fn wrong(a: BNumber, b: BNumber) -> BNumber {
        BNumber::new(a.z1 * b.z1 - a.z2 * b.z2, a.z1 * b.z2 + a.z2 * b.z1)
    }
    match fault {
        Some(Fault::WrongTable) => wrong,
        _ => |a, b| a * b,
    }
}

pub fn selftest(q: QuadratureSettings, fault: Option<Fault>) -> Result<Vec<Identity>> {
    let mul = product(fault);
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (e1, e2) = (BNumber::e1(), BNumber::e2());
    let rho = BNumber::new(c(2.0, 0.0), c(0.0, 2.0));
    let sq = mul(e1, e1) + mul(e2, e2);
    let zeta = BPoint::new(0.3, -0.4);
    let z = zeta.embed();
    let sdx = mul(BNumber::new(c(1.5, 0.0), c(0.0, 0.5)), z);
    let sdy = mul(BNumber::new(c(0.0, -1.5), c(0.5, 0.0)), z);
    Ok(vec![
        Identity {
            name: "e2^2 = e1 + 2i e2",
            error: (mul(e2, e2) - BNumber::new(c(1.0, 0.0), c(0.0, 2.0))).norm(),
        },
        Identity {
            name: "rho^2 = 0",
            error: mul(rho, rho).norm(),
        },
        Identity {
            name: "(e1^2 + e2^2)^2 = 0",
            error: mul(sq, sq).norm(),
        },
        Identity {
            name: "S_D[1] = e1",
            error: (biharmonic_schwartz_disk(&CircleData::constant(1.0), zeta, &q)? - e1).norm(),
        },
        Identity {
            name: "S_D[x] = (3e1 + ie2) zeta / 2",
            error: (biharmonic_schwartz_disk(&CircleData::cos(1), zeta, &q)? - sdx).norm(),
        },
        Identity {
            name: "S_D[y] = (-3ie1 + e2) zeta / 2",
            error: (biharmonic_schwartz_disk(&CircleData::sin(1), zeta, &q)? - sdy).norm(),
        },
    ])
}

pub fn render_selftest(rows: &[Identity]) -> String {
    let mut s = format!("{:<34} {:>12}  {}\n", "identity", "error", "status");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<34} {:>12.3e}  {}",
            r.name,
            r.error,
            if r.pass() { "ok" } else { "FAIL" }
        );
    }
    s
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = JobConfig::from_args(&args)?;
            let solved = solve_job(&cfg)?;
            emit(cfg.out.as_deref(), &render_solution(&cfg, &solved)?)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let cfg = JobConfig::from_args(&args)?;
            let solved = solve_job(&cfg)?;
            let report = verify_job(&cfg, &solved)?;
            emit(
                cfg.out.as_deref(),
                &(serde_json::to_string_pretty(&report)? + "\n"),
            )?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Selftest(args) => {
            let q = match args.nodes {
                Some(n) if n > 0 => QuadratureSettings::with_nodes(n),
                _ => QuadratureSettings::default(),
            };
            let rows = selftest(q, args.fault)?;
            emit(None, &render_selftest(&rows))?;
            Ok(if rows.iter().all(Identity::pass) {
                0
            } else {
                1
            })
        }
    }
}
