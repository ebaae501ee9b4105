//! Bound-state wave-functions assembled from one-dimensional factors.
//!
//! A state is `Ψ = N · f^{-1/4} · φ`, where `φ` solves the flat-space
//! problem with the energy-dependent indices frozen at the level's energy,
//! and `N` normalizes `∫ |Ψ|² √g d³x = ∫ N² f |φ|² d³x = 1` over the
//! fundamental domain of the chart. Every `f` is a sum of terms that
//! separate in the chart, so the integral reduces to products of
//! one-dimensional moments of the factors.
//!
//! Fundamental domains: `KI` uses the first octant, `KII` the quarter
//! `x, y > 0` with `z` free, `KIII` the wedge `x, y > 0`. Points outside
//! are reflected into the domain (the metric factors are even in the
//! reflected coordinates).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, integrate_tanh_sinh};
use crate::spaces::{metric_factor, Point3, SpaceSpec, UnitScalars};
use crate::specialfn::{coulomb_radial_wf, ho_wf, legendre_polar_wf, poschl_teller_wf, radial_ho_wf};
use crate::spectra::{effective_indices, EffectiveIndices, EnergyLevel, Provenance, QuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Cartesian,
    Spherical,
    CircularPolar,
}

impl Chart {
    /// The chart that goes with a quantum-number scheme.
    pub fn for_labels(qn: &QuantumNumbers) -> Chart {
        match qn {
            QuantumNumbers::Polar { .. } | QuantumNumbers::Coulomb { .. } => Chart::Spherical,
            QuantumNumbers::Cartesian { .. } => Chart::Cartesian,
            QuantumNumbers::Cylindrical { .. } => Chart::CircularPolar,
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Cartesian => "cartesian",
            Chart::Spherical => "spherical",
            Chart::CircularPolar => "circular_polar",
        })
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(Chart::Cartesian),
            "spherical" => Ok(Chart::Spherical),
            "circular_polar" | "circular-polar" => Ok(Chart::CircularPolar),
            other => Err(Error::Config(format!("unknown chart '{other}'"))),
        }
    }
}

/// A normalized one-dimensional factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Factor {
    /// `Φ_n^{(α,β)}` on `(0, π/2)`.
    PoschlTeller { n: usize, alpha: f64, beta: f64 },
    /// `Θ` on `(0, π)`, normalized with weight `sin θ`.
    PolarLegendre { l: usize, mu: f64 },
    /// Radial oscillator on `(0, ∞)`.
    RadialOscillator { n: usize, lambda: f64, omega: f64 },
    /// Radial Coulomb state `u(r)` on `(0, ∞)`.
    Coulomb { n_r: usize, lambda: f64, bohr: f64 },
    /// Full-line oscillator.
    Oscillator { n: usize, omega: f64 },
}

impl Factor {
    pub fn eval(&self, x: f64, units: UnitScalars) -> Result<f64> {
        match *self {
            Factor::PoschlTeller { n, alpha, beta } => poschl_teller_wf(n, alpha, beta, x),
            Factor::PolarLegendre { l, mu } => legendre_polar_wf(l, mu, x),
            Factor::RadialOscillator { n, lambda, omega } => radial_ho_wf(n, lambda, omega, x, units),
            Factor::Coulomb { n_r, lambda, bohr } => coulomb_radial_wf(n_r, lambda, bohr, x),
            Factor::Oscillator { n, omega } => ho_wf(n, omega, x, units),
        }
    }

    /// Natural width used to scale grids and quadrature maps.
    pub fn length_scale(&self, units: UnitScalars) -> f64 {
        match *self {
            Factor::PoschlTeller { .. } | Factor::PolarLegendre { .. } => 1.0,
            Factor::RadialOscillator { omega, .. } | Factor::Oscillator { omega, .. } => {
                (units.hbar / (units.mass * omega)).sqrt()
            }
            Factor::Coulomb { bohr, .. } => bohr,
        }
    }

    /// `∫ g(x) |factor(x)|² dμ(x)` over the factor's domain, with error estimate.
    pub fn moment(&self, g: impl Fn(f64) -> f64, units: UnitScalars) -> (f64, f64) {
        const TOL: f64 = 1e-13;
        const LEVEL: u32 = 11;
        let sq = |x: f64| {
            let v = self.eval(x, units).unwrap_or(0.0);
            v * v
        };
        match *self {
            Factor::PoschlTeller { .. } => integrate_tanh_sinh(|x| g(x) * sq(x), 0.0, FRAC_PI_2, TOL, LEVEL),
            Factor::PolarLegendre { .. } => integrate_tanh_sinh(|x| g(x) * sq(x) * x.sin(), 0.0, PI, TOL, LEVEL),
            Factor::RadialOscillator { n, lambda, .. } => {
                let scale = self.length_scale(units) * (2.0 * n as f64 + lambda + 1.0).max(1.0).sqrt();
                integrate_half_line(|r| g(r) * sq(r), scale, TOL, LEVEL)
            }
            Factor::Coulomb { n_r, lambda, .. } => {
                let kappa = n_r as f64 + lambda + 0.5;
                let scale = self.length_scale(units) * kappa * kappa.max(1.0);
                integrate_half_line(|r| g(r) * sq(r), scale, TOL, LEVEL)
            }
            Factor::Oscillator { n, .. } => {
                let scale = self.length_scale(units) * (n as f64 + 0.5).sqrt();
                integrate_half_line(|z| (g(z) + g(-z)) * sq(z), scale, TOL, LEVEL)
            }
        }
    }
}

/// A bound state with its frozen indices and normalization constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub spec: SpaceSpec,
    pub level: EnergyLevel,
    pub chart: Chart,
    pub indices: EffectiveIndices,
    /// `N_N`; 1 until [`normalize`] runs.
    pub norm_const: f64,
    /// Relative error estimate of the normalization integral.
    pub norm_error: f64,
    /// Coulomb length `a = ħ²/(m α̃)` (`KIII` only).
    pub coulomb_scale: Option<f64>,
    /// Factors in chart-coordinate order.
    pub factors: [Factor; 3],
}

fn index_ok(name: &str, v: f64, lower: f64) -> Result<f64> {
    if v > lower && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parameter(format!("effective index {name} = {v} must exceed {lower} for a normalizable state")))
    }
}

/// Freeze the indices of `level` and build the factors of its wave-function.
pub fn assemble(spec: &SpaceSpec, level: &EnergyLevel, chart: Chart) -> Result<BoundState> {
    if level.provenance == Provenance::Oracle {
        return Err(Error::Config("oracle levels carry no wave-function; solve the level first".into()));
    }
    if level.kind != spec.kind() {
        return Err(Error::Config(format!("level belongs to {} but the space is {}", level.kind, spec.kind())));
    }
    let qn = level.qn;
    let scheme_err = || Error::Scheme { scheme: qn.scheme_name().into(), kind: spec.kind().to_string() };
    let chart_err = || Error::Chart { chart: chart.to_string(), kind: spec.kind().to_string() };
    let e = level.energy;
    let idx = effective_indices(spec, &qn, level.branch_signs, e);
    if !idx.all_real() {
        return Err(Error::OutOfWindow { energy: e, reason: "effective indices are not real at this energy".into() });
    }
    let k = |i: usize| level.branch_signs.get(i) * idx.k_eff[i].value;
    let omega = || -> Result<f64> { index_ok("omega_eff", idx.omega_eff.as_ref().map_or(0.0, |w| w.value), 0.0) };
    let mut coulomb_scale = None;
    let factors = match (spec, chart) {
        (SpaceSpec::KI(_), Chart::Spherical) => {
            let QuantumNumbers::Polar { n_r, n_theta, n_phi } = qn else { return Err(scheme_err()) };
            let w = omega()?;
            let l1 = index_ok("lambda1", idx.lambda1.unwrap_or(f64::NAN), -1.0)?;
            let l2 = index_ok("lambda2", idx.lambda2.unwrap_or(f64::NAN), -1.0)?;
            [
                Factor::RadialOscillator { n: n_r as usize, lambda: l2, omega: w },
                Factor::PoschlTeller { n: n_theta as usize, alpha: index_ok("k_eff_z", k(2), -1.0)?, beta: l1 },
                Factor::PoschlTeller {
                    n: n_phi as usize,
                    alpha: index_ok("k_eff_y", k(1), -1.0)?,
                    beta: index_ok("k_eff_x", k(0), -1.0)?,
                },
            ]
        }
        (SpaceSpec::KI(_), Chart::Cartesian) => {
            let QuantumNumbers::Cartesian { n_x, n_y, n_z } = qn else { return Err(scheme_err()) };
            let w = omega()?;
            [
                Factor::RadialOscillator { n: n_x as usize, lambda: index_ok("k_eff_x", k(0), -1.0)?, omega: w },
                Factor::RadialOscillator { n: n_y as usize, lambda: index_ok("k_eff_y", k(1), -1.0)?, omega: w },
                Factor::RadialOscillator { n: n_z as usize, lambda: index_ok("k_eff_z", k(2), -1.0)?, omega: w },
            ]
        }
        (SpaceSpec::KII(_), Chart::Cartesian) => {
            let QuantumNumbers::Cartesian { n_x, n_y, n_z } = qn else { return Err(scheme_err()) };
            let w = omega()?;
            [
                Factor::RadialOscillator { n: n_x as usize, lambda: index_ok("k_eff_x", k(0), -1.0)?, omega: w },
                Factor::RadialOscillator { n: n_y as usize, lambda: index_ok("k_eff_y", k(1), -1.0)?, omega: w },
                Factor::Oscillator { n: n_z as usize, omega: w },
            ]
        }
        (SpaceSpec::KII(_), Chart::CircularPolar) => {
            let QuantumNumbers::Cylindrical { n_rho, n_phi, n_z } = qn else { return Err(scheme_err()) };
            let w = omega()?;
            let l = index_ok("lambda", idx.lambda1.unwrap_or(f64::NAN), -1.0)?;
            [
                Factor::RadialOscillator { n: n_rho as usize, lambda: l, omega: w },
                Factor::PoschlTeller {
                    n: n_phi as usize,
                    alpha: index_ok("k_eff_y", k(1), -1.0)?,
                    beta: index_ok("k_eff_x", k(0), -1.0)?,
                },
                Factor::Oscillator { n: n_z as usize, omega: w },
            ]
        }
        (SpaceSpec::KIII(_), Chart::Spherical) => {
            let QuantumNumbers::Coulomb { n_r, l, n_phi } = qn else { return Err(scheme_err()) };
            let alpha_eff = index_ok("alpha_eff", idx.alpha_eff.unwrap_or(f64::NAN), 0.0)?;
            let units = spec.units();
            let bohr = units.hbar * units.hbar / (units.mass * alpha_eff);
            coulomb_scale = Some(bohr);
            let l1 = index_ok("lambda1", idx.lambda1.unwrap_or(f64::NAN), -0.5)?;
            let l2 = index_ok("lambda2", idx.lambda2.unwrap_or(f64::NAN), -0.5)?;
            [
                Factor::Coulomb { n_r: n_r as usize, lambda: l2, bohr },
                Factor::PolarLegendre { l: l as usize, mu: l1 },
                Factor::PoschlTeller {
                    n: n_phi as usize,
                    alpha: index_ok("k_eff_2", k(1), -1.0)?,
                    beta: index_ok("k_eff_1", k(0), -1.0)?,
                },
            ]
        }
        _ => return Err(chart_err()),
    };
    Ok(BoundState {
        spec: *spec,
        level: level.clone(),
        chart,
        indices: idx,
        norm_const: 1.0,
        norm_error: 0.0,
        coulomb_scale,
        factors,
    })
}

impl BoundState {
    /// Assemble and normalize in one step.
    pub fn new(spec: &SpaceSpec, level: &EnergyLevel, chart: Chart) -> Result<BoundState> {
        let mut state = assemble(spec, level, chart)?;
        normalize(&mut state)?;
        Ok(state)
    }

    /// Chart coordinates of `p` after reflection into the fundamental domain.
    pub fn chart_coords(&self, p: Point3) -> Result<[f64; 3]> {
        let (ax, ay) = (p.x.abs(), p.y.abs());
        let coords = match (&self.spec, self.chart) {
            (SpaceSpec::KI(_), Chart::Spherical) => {
                let r = p.norm();
                let rho = ax.hypot(ay);
                [r, p.z.abs().atan2(rho), ay.atan2(ax)]
            }
            (SpaceSpec::KI(_), Chart::Cartesian) => [ax, ay, p.z.abs()],
            (SpaceSpec::KII(_), Chart::Cartesian) => [ax, ay, p.z],
            (SpaceSpec::KII(_), Chart::CircularPolar) => [ax.hypot(ay), ay.atan2(ax), p.z],
            (SpaceSpec::KIII(_), Chart::Spherical) => {
                let r = p.norm();
                [r, ax.hypot(ay).atan2(p.z), ay.atan2(ax)]
            }
            _ => unreachable!("chart validated by assemble"),
        };
        Ok(coords)
    }

    /// Cartesian point of chart coordinates (inverse of [`Self::chart_coords`]
    /// on the fundamental domain).
    pub fn point_of(&self, c: [f64; 3]) -> Point3 {
        match (&self.spec, self.chart) {
            (SpaceSpec::KI(_), Chart::Spherical) => {
                let (r, th, ph) = (c[0], c[1], c[2]);
                Point3::new(r * th.cos() * ph.cos(), r * th.cos() * ph.sin(), r * th.sin())
            }
            (_, Chart::Cartesian) => Point3::new(c[0], c[1], c[2]),
            (_, Chart::CircularPolar) => Point3::new(c[0] * c[1].cos(), c[0] * c[1].sin(), c[2]),
            (_, Chart::Spherical) => {
                let (r, th, ph) = (c[0], c[1], c[2]);
                Point3::new(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
            }
        }
    }

    /// Flat-space factor `φ` at chart coordinates, including the Jacobian
    /// factors that make `|φ|²` a density in `d³x`.
    pub fn flat_at(&self, c: [f64; 3]) -> Result<f64> {
        let units = self.spec.units();
        let mut v = 1.0;
        for (f, x) in self.factors.iter().zip(c) {
            v *= f.eval(x, units).map_err(|e| match e {
                Error::Domain(m) => Error::SingularPoint(m),
                other => other,
            })?;
        }
        let jac = match (&self.spec, self.chart) {
            (SpaceSpec::KI(_), Chart::Spherical) => 1.0 / (c[0] * c[1].cos().sqrt()),
            (_, Chart::CircularPolar) => 1.0 / c[0].sqrt(),
            (SpaceSpec::KIII(_), Chart::Spherical) => 1.0 / c[0],
            _ => 1.0,
        };
        Ok(v * jac)
    }

    /// `Ψ(p) = N f(p)^{-1/4} φ(p)`.
    pub fn evaluate(&self, p: Point3) -> Result<f64> {
        let f = metric_factor(&self.spec, p)?;
        let c = self.chart_coords(p)?;
        Ok(self.norm_const * f.powf(-0.25) * self.flat_at(c)?)
    }

    /// Eigenvalue of the first (radial) factor in its own one-dimensional
    /// problem: `δE` minus the energy carried by the other factors.
    pub fn radial_eigenvalue(&self) -> f64 {
        let units = self.spec.units();
        let de = self.spec.delta() * self.level.energy;
        let others: f64 = match self.chart {
            Chart::Spherical => 0.0,
            Chart::Cartesian | Chart::CircularPolar => self.factors[1..]
                .iter()
                .map(|f| match *f {
                    Factor::RadialOscillator { n, lambda, omega } => {
                        units.hbar * omega * (2.0 * n as f64 + lambda + 1.0)
                    }
                    Factor::Oscillator { n, omega } => units.hbar * omega * (n as f64 + 0.5),
                    _ => 0.0,
                })
                .sum(),
        };
        de - others
    }

    /// Effective potential of the first (radial) factor.
    pub fn radial_potential(&self, r: f64) -> f64 {
        let units = self.spec.units();
        let (hbar, m) = (units.hbar, units.mass);
        match self.factors[0] {
            Factor::RadialOscillator { lambda, omega, .. } => {
                0.5 * m * omega * omega * r * r + hbar * hbar * (lambda * lambda - 0.25) / (2.0 * m * r * r)
            }
            Factor::Coulomb { lambda, .. } => {
                let alpha = self.indices.alpha_eff.unwrap_or(f64::NAN);
                -alpha / r + hbar * hbar * (lambda * lambda - 0.25) / (2.0 * m * r * r)
            }
            _ => f64::NAN,
        }
    }

    /// Length scale of the radial factor.
    pub fn length_scale(&self) -> f64 {
        self.factors[0].length_scale(self.spec.units())
    }
}

fn moment_of(state: &BoundState, i: usize, g: impl Fn(f64) -> f64) -> (f64, f64) {
    state.factors[i].moment(g, state.spec.units())
}

/// `∫ g(x) |factor_i|² dx` for the listed factors `i`.
type MomentProduct = Vec<(usize, fn(f64) -> f64)>;

/// Compute `N_N` from `∫ f |φ|² d³x`, store it in `state` and return it.
pub fn normalize(state: &mut BoundState) -> Result<f64> {
    // each term: coefficient times a product of moments
    let mut terms: Vec<(f64, MomentProduct)> = Vec::new();
    let sq: fn(f64) -> f64 = |x| x * x;
    let inv_sq: fn(f64) -> f64 = |x| 1.0 / (x * x);
    let sec_sq: fn(f64) -> f64 = |x| 1.0 / x.cos().powi(2);
    let csc_sq: fn(f64) -> f64 = |x| 1.0 / x.sin().powi(2);
    let inv: fn(f64) -> f64 = |x| 1.0 / x;
    let four_sq: fn(f64) -> f64 = |x| 4.0 * x * x;
    match (&state.spec, state.chart) {
        (SpaceSpec::KI(s), Chart::Spherical) => {
            terms.push((s.alpha, vec![(0, sq)]));
            terms.push((s.beta_x, vec![(0, inv_sq), (1, sec_sq), (2, sec_sq)]));
            terms.push((s.beta_y, vec![(0, inv_sq), (1, sec_sq), (2, csc_sq)]));
            terms.push((s.beta_z, vec![(0, inv_sq), (1, csc_sq)]));
        }
        (SpaceSpec::KI(s), Chart::Cartesian) => {
            for (a, b) in [(0, s.beta_x), (1, s.beta_y), (2, s.beta_z)] {
                terms.push((s.alpha, vec![(a, sq)]));
                terms.push((b, vec![(a, inv_sq)]));
            }
        }
        (SpaceSpec::KII(s), Chart::Cartesian) => {
            terms.push((s.alpha, vec![(0, sq)]));
            terms.push((s.alpha, vec![(1, sq)]));
            terms.push((s.alpha, vec![(2, four_sq)]));
            terms.push((s.beta_x, vec![(0, inv_sq)]));
            terms.push((s.beta_y, vec![(1, inv_sq)]));
        }
        (SpaceSpec::KII(s), Chart::CircularPolar) => {
            terms.push((s.alpha, vec![(0, sq)]));
            terms.push((s.alpha, vec![(2, four_sq)]));
            terms.push((s.beta_x, vec![(0, inv_sq), (1, sec_sq)]));
            terms.push((s.beta_y, vec![(0, inv_sq), (1, csc_sq)]));
        }
        (SpaceSpec::KIII(s), Chart::Spherical) => {
            terms.push((-s.alpha1, vec![(0, inv)]));
            terms.push((s.beta, vec![(0, inv_sq), (1, csc_sq), (2, sec_sq)]));
            terms.push((s.gamma, vec![(0, inv_sq), (1, csc_sq), (2, csc_sq)]));
        }
        _ => return Err(Error::Chart { chart: state.chart.to_string(), kind: state.spec.kind().to_string() }),
    }
    let mut total = state.spec.delta();
    let mut abs_err = 0.0;
    for (coef, moments) in terms.into_iter().filter(|(c, _)| *c != 0.0) {
        let mut prod = 1.0;
        let mut rel = 0.0;
        for (i, g) in moments {
            let (v, e) = moment_of(state, i, g);
            if !v.is_finite() {
                return Err(Error::Accuracy { estimate: f64::INFINITY });
            }
            prod *= v;
            rel += e / v.abs().max(f64::MIN_POSITIVE);
        }
        total += coef * prod;
        abs_err += (coef * prod).abs() * rel;
    }
    if !(total > 0.0) {
        return Err(Error::NonPositiveMetric { value: total });
    }
    let rel_err = abs_err / total;
    if rel_err > 1e-6 {
        return Err(Error::Accuracy { estimate: rel_err });
    }
    state.norm_const = total.powf(-0.5);
    state.norm_error = rel_err;
    Ok(state.norm_const)
}

/// Uniform grid for the radial factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.n_points).map(move |i| self.r_min + i as f64 * h)
    }
}

/// A grid covering the radial factor out to its exponential tail, with
/// spacing `length_scale / 400`.
pub fn default_radial_grid(state: &BoundState) -> RadialGrid {
    let ell = state.length_scale();
    let (lo, hi) = match state.factors[0] {
        Factor::RadialOscillator { n, lambda, .. } => {
            let turn = (2.0 * (2.0 * n as f64 + lambda + 1.0)).sqrt();
            (0.05 * ell, (turn + 8.0) * ell)
        }
        Factor::Coulomb { n_r, lambda, .. } => {
            let kappa = n_r as f64 + lambda + 0.5;
            (0.05 * ell, (2.0 * kappa * kappa + 20.0 * kappa) * ell)
        }
        _ => (0.05 * ell, 10.0 * ell),
    };
    let n = (((hi - lo) / (ell / 400.0)).ceil() as usize + 1).max(200);
    RadialGrid { r_min: lo, r_max: hi, n_points: n }
}

/// Relative L² residual of the radial equation
/// `[-(ħ²/2m) d²/dr² + U(r; E)] u = ε u` on `grid`, with a five-point
/// second difference.
pub fn ode_residual(state: &BoundState, grid: &RadialGrid) -> Result<f64> {
    if grid.n_points < 5 || !(grid.r_min > 0.0) || !(grid.r_max > grid.r_min) {
        return Err(Error::Config(format!("invalid radial grid {grid:?}")));
    }
    let h = grid.step();
    let ell = state.length_scale();
    if h > 1e-2 * ell {
        return Err(Error::Config(format!("grid step {h:e} exceeds 1e-2 of the length scale {ell:e}")));
    }
    let units = state.spec.units();
    let kin = units.hbar * units.hbar / (2.0 * units.mass);
    let f0 = state.factors[0];
    let u: Vec<f64> = grid.points().map(|r| f0.eval(r, units)).collect::<Result<_>>()?;
    let eps = state.radial_eigenvalue();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 2..u.len() - 2 {
        let r = grid.r_min + i as f64 * h;
        let d2 = (-u[i + 2] + 16.0 * u[i + 1] - 30.0 * u[i] + 16.0 * u[i - 1] - u[i - 2]) / (12.0 * h * h);
        let t = -kin * d2;
        let v = state.radial_potential(r) * u[i];
        let res = t + v - eps * u[i];
        num += res * res;
        den += t * t + v * v;
    }
    Ok((num / den).sqrt())
}

/// Sign changes of the radial factor on its default grid.
pub fn radial_node_count(state: &BoundState) -> Result<usize> {
    let grid = default_radial_grid(state);
    let units = state.spec.units();
    let vals: Vec<f64> = grid.points().map(|r| state.factors[0].eval(r, units)).collect::<Result<_>>()?;
    Ok(crate::specialfn::count_sign_changes(&vals))
}
