//! Finite-difference verification of the quantization roots.
//!
//! Each separated one-dimensional problem is discretized with the
//! three-point Laplacian on a uniform grid with Dirichlet ends, and its
//! eigenvalues come from Sturm bisection. A level is a root of
//! `F(E) = δE − Σ eig(E)`, where the effective indices are recomputed here
//! from the space constants at every trial energy.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{SpaceSpec, UnitScalars};
use crate::spectra::{BranchSigns, EnergyLevel, Provenance, QuantumNumbers};
use crate::tridiag::{eigenvector, kth_eigenvalue, lowest_eigenvalues};

/// Radial potentials `U(r)` of the transformed problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RadialPotential {
    /// `mω²r²/2 + ħ²(λ²−¼)/(2mr²)`.
    Oscillator { lambda: f64, omega: f64 },
    /// `−α/r + ħ²(λ²−¼)/(2mr²)`.
    Coulomb { lambda: f64, alpha: f64 },
}

impl RadialPotential {
    pub fn value(&self, r: f64, units: UnitScalars) -> f64 {
        let (hbar, m) = (units.hbar, units.mass);
        match *self {
            RadialPotential::Oscillator { lambda, omega } => {
                0.5 * m * omega * omega * r * r + hbar * hbar * (lambda * lambda - 0.25) / (2.0 * m * r * r)
            }
            RadialPotential::Coulomb { lambda, alpha } => {
                -alpha / r + hbar * hbar * (lambda * lambda - 0.25) / (2.0 * m * r * r)
            }
        }
    }

    pub fn length_scale(&self, units: UnitScalars) -> f64 {
        match *self {
            RadialPotential::Oscillator { omega, .. } => (units.hbar / (units.mass * omega)).sqrt(),
            RadialPotential::Coulomb { alpha, .. } => units.hbar * units.hbar / (units.mass * alpha),
        }
    }

    fn lambda(&self) -> f64 {
        match *self {
            RadialPotential::Oscillator { lambda, .. } | RadialPotential::Coulomb { lambda, .. } => lambda,
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            RadialPotential::Oscillator { lambda, omega } => lambda > -1.0 && omega > 0.0,
            RadialPotential::Coulomb { lambda, alpha } => lambda > -1.0 && alpha > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("no bound states for {self:?}")))
        }
    }

    // Rough outer turning point of level `n`, used only to size grids.
    fn turning_point(&self, n: usize, units: UnitScalars) -> f64 {
        let ell = self.length_scale(units);
        match *self {
            RadialPotential::Oscillator { lambda, .. } => ell * (2.0 * (2.0 * n as f64 + lambda.abs() + 1.0)).sqrt(),
            RadialPotential::Coulomb { lambda, .. } => {
                let kappa = n as f64 + lambda.abs() + 0.5;
                2.0 * kappa * kappa * ell
            }
        }
    }
}

/// Uniform radial grid; `u(r_min) = u(r_max) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl FdGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 200 {
            return Err(Error::Config(format!("grid needs at least 200 points, got {}", self.n_points)));
        }
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::Config(format!("invalid grid interval [{}, {}]", self.r_min, self.r_max)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }
}

// Interior nodes of a Dirichlet problem on [lo, hi].
fn fd_matrix(lo: f64, hi: f64, n_points: usize, u: impl Fn(f64) -> f64, units: UnitScalars) -> (Vec<f64>, Vec<f64>) {
    let h = (hi - lo) / (n_points - 1) as f64;
    let t = units.hbar * units.hbar / (2.0 * units.mass * h * h);
    let diag = (1..n_points - 1).map(|i| 2.0 * t + u(lo + i as f64 * h)).collect();
    let off = vec![-t; n_points - 3];
    (diag, off)
}

/// The `k_lowest` smallest eigenvalues of `−(ħ²/2m) d²/dr² + U(r)` on `grid`.
pub fn fd_radial_eigen(
    potential: RadialPotential,
    grid: &FdGrid,
    k_lowest: usize,
    units: UnitScalars,
) -> Result<Vec<f64>> {
    potential.check()?;
    grid.validate()?;
    units.validate()?;
    let (d, e) = fd_matrix(grid.r_min, grid.r_max, grid.n_points, |r| potential.value(r, units), units);
    Ok(lowest_eigenvalues(&d, &e, k_lowest))
}

/// How grids are laid out for each trial energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridPolicy {
    pub n_points: usize,
    /// `r_min` in units of the problem's length scale.
    pub r_min_scale: f64,
    /// Initial `r_max` as a multiple of the outer turning point.
    pub turning_factor: f64,
    /// The eigenvector at `0.9 r_max` must be below this fraction of its maximum.
    pub tail_tol: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy { n_points: 4000, r_min_scale: 1e-4, turning_factor: 2.0, tail_tol: 1e-8 }
    }
}

impl GridPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 200 {
            return Err(Error::Config(format!("grid needs at least 200 points, got {}", self.n_points)));
        }
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.r_min_scale) && self.turning_factor >= 1.0 && pos(self.tail_tol)) {
            return Err(Error::Config(format!("invalid grid policy {self:?}")));
        }
        Ok(())
    }
}

/// A one-dimensional factor of the separated problem at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    Radial {
        potential: RadialPotential,
        level: usize,
    },
    /// Full-line oscillator.
    Line {
        omega: f64,
        level: usize,
    },
}

impl Piece {
    fn length_scale(&self, units: UnitScalars) -> f64 {
        match self {
            Piece::Radial { potential, .. } => potential.length_scale(units),
            Piece::Line { omega, .. } => (units.hbar / (units.mass * omega)).sqrt(),
        }
    }

    fn level(&self) -> usize {
        match *self {
            Piece::Radial { level, .. } | Piece::Line { level, .. } => level,
        }
    }

    fn initial_extent(&self, policy: &GridPolicy, units: UnitScalars) -> f64 {
        let ell = self.length_scale(units);
        match *self {
            Piece::Radial { potential: p @ RadialPotential::Coulomb { .. }, level } => {
                policy.turning_factor * p.turning_point(level, units) / ell
            }
            // Gaussian tails reach 1e-8 about 6 length scales past the turning point
            Piece::Radial { potential, level } => {
                let turn = potential.turning_point(level, units) / ell;
                (policy.turning_factor * turn).max(turn + 7.0)
            }
            Piece::Line { level, .. } => {
                let turn = (2.0 * level as f64 + 1.0).sqrt();
                (policy.turning_factor * turn).max(turn + 7.0)
            }
        }
    }

    /// Matrix on a grid given in units of the length scale: `(lo, hi)`.
    fn matrix(&self, extent: f64, policy: &GridPolicy, units: UnitScalars) -> (Vec<f64>, Vec<f64>) {
        let ell = self.length_scale(units);
        match *self {
            Piece::Radial { potential, .. } => {
                fd_matrix(policy.r_min_scale * ell, extent * ell, policy.n_points, |r| potential.value(r, units), units)
            }
            Piece::Line { omega, .. } => {
                let k = units.mass * omega * omega / 2.0;
                fd_matrix(-extent * ell, extent * ell, policy.n_points, |z| k * z * z, units)
            }
        }
    }

    fn eigen(&self, extent: f64, policy: &GridPolicy, units: UnitScalars) -> Option<f64> {
        let (d, e) = self.matrix(extent, policy, units);
        kth_eigenvalue(&d, &e, self.level())
    }

    /// Grow the extent until the tail of the eigenvector is negligible;
    /// returns the extent and the eigenvalue on it.
    fn fit_extent(&self, policy: &GridPolicy, units: UnitScalars) -> Result<(f64, f64)> {
        let mut extent = self.initial_extent(policy, units);
        for _ in 0..40 {
            let (d, e) = self.matrix(extent, policy, units);
            let val = kth_eigenvalue(&d, &e, self.level())
                .ok_or_else(|| Error::Config("grid too small for the requested level".into()))?;
            let v = eigenvector(&d, &e, val);
            let peak = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let n = v.len();
            let far = match self {
                Piece::Radial { .. } => v[(0.9 * n as f64) as usize].abs(),
                Piece::Line { .. } => v[(0.95 * n as f64) as usize].abs().max(v[(0.05 * n as f64) as usize].abs()),
            };
            if far <= policy.tail_tol * peak {
                return Ok((extent, val));
            }
            extent *= 1.25;
        }
        Err(Error::Config("could not fit the wave-function tail on the grid".into()))
    }
}

fn real_sqrt(sq: f64) -> Option<f64> {
    (sq >= 0.0).then(|| sq.sqrt())
}

/// Separated pieces for `qn` at energy `e`, or `None` where no bound state
/// exists (an index is imaginary or out of range).
fn pieces(spec: &SpaceSpec, qn: &QuantumNumbers, signs: BranchSigns, e: f64) -> Result<Option<Vec<Piece>>> {
    let units = spec.units();
    let (hbar, m) = (units.hbar, units.mass);
    let kc = 2.0 * m / (hbar * hbar);
    let k_of = |k: f64, beta: f64, i: usize| real_sqrt(k * k - kc * beta * e).map(|v| signs.get(i) * v);
    let bad_scheme = || Error::Scheme { scheme: qn.scheme_name().into(), kind: spec.kind().to_string() };
    let radial = |lambda: f64, omega: f64, level: u32| Piece::Radial {
        potential: RadialPotential::Oscillator { lambda, omega },
        level: level as usize,
    };
    let out = match spec {
        SpaceSpec::KI(s) => {
            let (Some(w), Some(kx), Some(ky), Some(kz)) = (
                real_sqrt(s.omega * s.omega - 2.0 * s.alpha * e / m),
                k_of(s.k_x, s.beta_x, 0),
                k_of(s.k_y, s.beta_y, 1),
                k_of(s.k_z, s.beta_z, 2),
            ) else {
                return Ok(None);
            };
            match *qn {
                QuantumNumbers::Polar { n_r, n_theta, n_phi } => {
                    if kx.min(ky).min(kz) <= -1.0 {
                        return Ok(None);
                    }
                    let l1 = 2.0 * n_phi as f64 + kx + ky + 1.0;
                    let l2 = 2.0 * n_theta as f64 + kz + l1 + 1.0;
                    vec![radial(l2, w, n_r)]
                }
                QuantumNumbers::Cartesian { n_x, n_y, n_z } => {
                    vec![radial(kx, w, n_x), radial(ky, w, n_y), radial(kz, w, n_z)]
                }
                _ => return Err(bad_scheme()),
            }
        }
        SpaceSpec::KII(s) => {
            let (Some(w), Some(kx), Some(ky)) = (
                real_sqrt(s.omega * s.omega - 2.0 * s.alpha * e / m),
                k_of(s.k_x, s.beta_x, 0),
                k_of(s.k_y, s.beta_y, 1),
            ) else {
                return Ok(None);
            };
            match *qn {
                QuantumNumbers::Cylindrical { n_rho, n_phi, n_z } => {
                    if kx.min(ky) <= -1.0 {
                        return Ok(None);
                    }
                    let l = 2.0 * n_phi as f64 + kx + ky + 1.0;
                    vec![radial(l, w, n_rho), Piece::Line { omega: w, level: n_z as usize }]
                }
                QuantumNumbers::Cartesian { n_x, n_y, n_z } => {
                    vec![radial(kx, w, n_x), radial(ky, w, n_y), Piece::Line { omega: w, level: n_z as usize }]
                }
                _ => return Err(bad_scheme()),
            }
        }
        SpaceSpec::KIII(s) => {
            let QuantumNumbers::Coulomb { n_r, l, n_phi } = *qn else { return Err(bad_scheme()) };
            let (Some(k1), Some(k2)) = (k_of(s.k1, s.beta, 0), k_of(s.k2, s.gamma, 1)) else {
                return Ok(None);
            };
            let alpha = s.alpha2 - s.alpha1 * e;
            if !(s.delta * e < 0.0 && alpha > 0.0) || k1.min(k2) <= -1.0 {
                return Ok(None);
            }
            let l1 = 2.0 * n_phi as f64 + k1 + k2 + 1.0;
            let l2 = l as f64 + l1 + 0.5;
            vec![Piece::Radial { potential: RadialPotential::Coulomb { lambda: l2, alpha }, level: n_r as usize }]
        }
        SpaceSpec::KIV(_) | SpaceSpec::KV(_) => {
            return Err(Error::Kind { kind: spec.kind().to_string(), reason: "continuous spectrum only".into() })
        }
    };
    let ok = out.iter().all(|p| match p {
        Piece::Radial { potential, .. } => potential.check().is_ok() && potential.lambda() > -1.0,
        Piece::Line { omega, .. } => *omega > 0.0,
    });
    Ok(ok.then_some(out))
}

/// Oracle settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub grid: GridPolicy,
    pub samples_per_decade: f64,
    pub e_max_abs: f64,
    pub tol_rel: f64,
    pub branch_signs: BranchSigns,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid: GridPolicy::default(),
            samples_per_decade: 50.0,
            e_max_abs: 1e6,
            tol_rel: 1e-12,
            branch_signs: BranchSigns::default(),
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.samples_per_decade) && pos(self.e_max_abs) && pos(self.tol_rel)) {
            return Err(Error::Config("samples_per_decade, e_max_abs and tol_rel must be positive".into()));
        }
        Ok(())
    }
}

const SCAN_SCALE: f64 = 1e-8;

struct Sample {
    e: f64,
    f: f64,
}

// Settings for the sign scan: same layout, coarse grid.
fn scan_policy(cfg: &OracleConfig) -> GridPolicy {
    GridPolicy { n_points: SCAN_POINTS.min(cfg.grid.n_points), ..cfg.grid }
}

const SCAN_POINTS: usize = 400;

// F(E) with grid extents fitted at E under `policy`.
fn fitted(
    spec: &SpaceSpec,
    qn: &QuantumNumbers,
    cfg: &OracleConfig,
    policy: &GridPolicy,
    e: f64,
) -> Result<Option<(f64, Vec<f64>)>> {
    let units = spec.units();
    let Some(ps) = pieces(spec, qn, cfg.branch_signs, e)? else { return Ok(None) };
    let mut extents = Vec::with_capacity(ps.len());
    let mut sum = 0.0;
    for p in &ps {
        let Ok((x, v)) = p.fit_extent(policy, units) else { return Ok(None) };
        sum += v;
        extents.push(x);
    }
    Ok(Some((spec.delta() * e - sum, extents)))
}

// F(E) with extents frozen (in length-scale units), smooth in E.
fn frozen(spec: &SpaceSpec, qn: &QuantumNumbers, cfg: &OracleConfig, extents: &[f64], e: f64) -> Result<Option<f64>> {
    let units = spec.units();
    let Some(ps) = pieces(spec, qn, cfg.branch_signs, e)? else { return Ok(None) };
    let mut sum = 0.0;
    for (p, &x) in ps.iter().zip(extents) {
        let Some(v) = p.eigen(x, &cfg.grid, units) else { return Ok(None) };
        sum += v;
    }
    Ok(Some(spec.delta() * e - sum))
}

// Illinois regula falsi on a sign-changing bracket.
fn refine(
    f: impl Fn(f64) -> Result<Option<f64>>,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
    tol_rel: f64,
) -> Result<Option<(f64, f64)>> {
    let mut side = 0;
    let (mut c, mut fc) = (a, fa);
    for _ in 0..200 {
        if (b - a).abs() <= tol_rel * a.abs().max(b.abs()) {
            break;
        }
        c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let Some(v) = f(c)? else { return Ok(None) };
        fc = v;
        if v == 0.0 {
            break;
        }
        if v.signum() == fb.signum() {
            b = c;
            fb = v;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = v;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(Some((c, fc)))
}

/// Every root of `F(E)` found by scanning and bisection, sorted by energy.
///
/// Sign changes are located on a coarse grid and each bracket is then
/// refined on the full grid, with the extents fitted once per bracket.
pub fn self_consistent_levels(spec: &SpaceSpec, qn: &QuantumNumbers, cfg: &OracleConfig) -> Result<Vec<EnergyLevel>> {
    cfg.validate()?;
    spec.validate()?;
    let n = qn.aggregate(spec.kind())?;
    // surfaces scheme and kind errors before the scan swallows them
    pieces(spec, qn, cfg.branch_signs, 0.0)?;
    if spec.delta() == 0.0 {
        return Ok(Vec::new());
    }
    let coarse = scan_policy(cfg);
    let t_max = (cfg.e_max_abs / SCAN_SCALE).asinh();
    let count = (2.0 * t_max / std::f64::consts::LN_10 * cfg.samples_per_decade).ceil() as usize;
    let dt = 2.0 * t_max / count as f64;
    let samples: Vec<Option<Sample>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let e = SCAN_SCALE * (-t_max + (i as f64 + 0.5) * dt).sinh();
            fitted(spec, qn, cfg, &coarse, e).ok().flatten().map(|(f, _)| Sample { e, f })
        })
        .collect();
    let brackets: Vec<(usize, usize)> = samples
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| match (&w[0], &w[1]) {
            (Some(s0), Some(s1)) if s0.f.signum() != s1.f.signum() || s0.f == 0.0 => Some((i, i + 1)),
            _ => None,
        })
        .collect();
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for (i, j) in brackets {
        // widen by one sample on each side if the fine grid moved the root out
        let mut found = None;
        for (lo, hi) in [(i, j), (i.saturating_sub(1), (j + 1).min(count - 1))] {
            let (Some(s0), Some(s1)) = (&samples[lo], &samples[hi]) else { continue };
            let mid = 0.5 * (s0.e + s1.e);
            let Some((_, extents)) = fitted(spec, qn, cfg, &cfg.grid, mid)? else { continue };
            let f = |e: f64| frozen(spec, qn, cfg, &extents, e);
            let (Some(f0), Some(f1)) = (f(s0.e)?, f(s1.e)?) else { continue };
            if f0 == 0.0 {
                found = Some((s0.e, 0.0));
            } else if f1 == 0.0 {
                found = Some((s1.e, 0.0));
            } else if f0.signum() != f1.signum() {
                found = refine(f, s0.e, f0, s1.e, f1, cfg.tol_rel)?;
            }
            if found.is_some() {
                break;
            }
        }
        roots.extend(found);
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|b, a| (b.0 - a.0).abs() <= 1e-9 * a.0.abs().max(b.0.abs()));
    Ok(roots
        .into_iter()
        .map(|(e, f)| EnergyLevel {
            kind: spec.kind(),
            n,
            qn: *qn,
            branch_signs: cfg.branch_signs,
            energy: e,
            residual: f,
            window_id: None,
            provenance: Provenance::Oracle,
        })
        .collect())
}

/// The lowest oracle root, or `None` when no bracket exists.
pub fn self_consistent_level(spec: &SpaceSpec, qn: &QuantumNumbers, cfg: &OracleConfig) -> Result<Option<EnergyLevel>> {
    Ok(self_consistent_levels(spec, qn, cfg)?.into_iter().next())
}

/// Oracle roots on three successively halved grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub n_points: [usize; 3],
    pub energies: [f64; 3],
    /// `(E₁ − E₂)/(E₂ − E₃)`; about 4 for second-order convergence.
    pub ratio: f64,
    /// Richardson extrapolation from the two finest grids.
    pub extrapolated: f64,
}

pub fn grid_convergence(
    spec: &SpaceSpec,
    qn: &QuantumNumbers,
    cfg: &OracleConfig,
    near: f64,
) -> Result<ConvergenceStudy> {
    let mut energies = [0.0; 3];
    let mut n_points = [0; 3];
    for (i, slot) in energies.iter_mut().enumerate() {
        let mut c = *cfg;
        // n - 1 intervals halve exactly
        c.grid.n_points = (cfg.grid.n_points - 1) * (1 << i) + 1;
        n_points[i] = c.grid.n_points;
        let levels = self_consistent_levels(spec, qn, &c)?;
        let best = levels
            .iter()
            .min_by(|a, b| (a.energy - near).abs().total_cmp(&(b.energy - near).abs()))
            .ok_or_else(|| Error::NoConsistentRoot { case: "oracle".into(), reason: "no root on this grid".into() })?;
        *slot = best.energy;
    }
    let ratio = (energies[0] - energies[1]) / (energies[1] - energies[2]);
    let extrapolated = energies[2] + (energies[2] - energies[1]) / 3.0;
    Ok(ConvergenceStudy { n_points, energies, ratio, extrapolated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub index_a: usize,
    pub index_b: usize,
    pub energy_a: f64,
    pub energy_b: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub rel_tol: f64,
    pub pairs: Vec<MatchedPair>,
    pub unmatched_a: Vec<usize>,
    pub unmatched_b: Vec<usize>,
    pub max_deviation: f64,
}

impl CompareReport {
    pub fn all_matched(&self) -> bool {
        self.unmatched_a.is_empty() && self.unmatched_b.is_empty()
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / a.abs().max(f64::MIN_POSITIVE)
    }
}

/// Match levels by nearest energy; pairs further apart than `rel_tol`
/// (relative to the `a` energy) stay unmatched.
pub fn compare(levels_a: &[EnergyLevel], levels_b: &[EnergyLevel], rel_tol: f64) -> CompareReport {
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in levels_a.iter().enumerate() {
        for (j, b) in levels_b.iter().enumerate() {
            let d = rel_dev(a.energy, b.energy);
            if d <= rel_tol {
                cand.push((d, i, j));
            }
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; levels_a.len()];
    let mut used_b = vec![false; levels_b.len()];
    let mut pairs = Vec::new();
    for (d, i, j) in cand {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        pairs.push(MatchedPair {
            index_a: i,
            index_b: j,
            energy_a: levels_a[i].energy,
            energy_b: levels_b[j].energy,
            deviation: d,
        });
    }
    pairs.sort_by_key(|p| p.index_a);
    let max_deviation = pairs.iter().map(|p| p.deviation).fold(0.0, f64::max);
    CompareReport {
        rel_tol,
        pairs,
        unmatched_a: (0..levels_a.len()).filter(|&i| !used_a[i]).collect(),
        unmatched_b: (0..levels_b.len()).filter(|&j| !used_b[j]).collect(),
        max_deviation,
    }
}
