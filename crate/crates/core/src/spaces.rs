//! The five Koenigs metrics `ds² = f(x,y,z)(dx² + dy² + dz²)` and the
//! quantum curvature corrections that come with them.
//!
//! | kind  | metric factor `f`                                              |
//! |-------|----------------------------------------------------------------|
//! | `KI`  | `α(x²+y²+z²) + β_x/x² + β_y/y² + β_z/z² + δ`                    |
//! | `KII` | `α(x²+y²+4z²) + β_x/x² + β_y/y² + δ`                            |
//! | `KIII`| `-α₁/r + β/x² + γ/y² + δ`                                       |
//! | `KIV` | `(ħ²/2m)(αx/(y²√(x²+y²)) + β/y² + γ/z²) + δ`                    |
//! | `KV`  | `(ħ²/2m)(αx/(y²√(x²+y²)) + β/y²) + γz + δ`                      |
//!
//! The `KII` factor uses `β_y/y²`; a literal transcription reads `β_y/x^y`,
//! which is a misprint. For `KIV` and `KV` the `ħ²/2m` prefactor is part of
//! `f`, so `f` is dimensionless-consistent across kinds once units are fixed.
//!
//! The curvature correction splits as `ΔV = ΔV₁ + ΔV₂`. `ΔV₂` is assembled
//! from the per-axis identity `f = h_a²/x_a²` on all three axes, including
//! axes where `f` carries no `1/x_a²` term; the effective Lagrangian cancels
//! such a term, which is why [`delta_v_split`] also reports the per-axis
//! pieces.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Coordinates closer than this to a singular axis are treated as on-axis.
pub const AXIS_TOL: f64 = 1e-12;

fn one() -> f64 {
    1.0
}

/// Values of `ħ` and `m` used throughout a computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitScalars {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

impl Default for UnitScalars {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl UnitScalars {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite() && self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Config(format!(
                "units must be positive and finite (hbar = {}, mass = {})",
                self.hbar, self.mass
            )));
        }
        Ok(())
    }

    /// `ħ²/(2m)`
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    KI,
    KII,
    KIII,
    KIV,
    KV,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceKind::KI => "KI",
            SpaceKind::KII => "KII",
            SpaceKind::KIII => "KIII",
            SpaceKind::KIV => "KIV",
            SpaceKind::KV => "KV",
        };
        f.write_str(s)
    }
}

/// `K_I`: isotropic singular oscillator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KoenigsI {
    pub alpha: f64,
    pub beta_x: f64,
    pub beta_y: f64,
    pub beta_z: f64,
    pub delta: f64,
    pub omega: f64,
    pub k_x: f64,
    pub k_y: f64,
    pub k_z: f64,
    pub units: UnitScalars,
}

/// `K_II`: Holt potential.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KoenigsII {
    pub alpha: f64,
    pub beta_x: f64,
    pub beta_y: f64,
    pub delta: f64,
    pub omega: f64,
    pub k_x: f64,
    pub k_y: f64,
    pub units: UnitScalars,
}

/// `K_III`: Coulomb potential.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KoenigsIII {
    pub alpha1: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha2: f64,
    pub k1: f64,
    pub k2: f64,
    pub units: UnitScalars,
}

/// `K_IV` and `K_V`: the two centrifugal potentials share one constant set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KoenigsCentrifugal {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub units: UnitScalars,
}

/// A Koenigs space together with its potential constants and units.
///
/// Serializes as a flat JSON object tagged by `"kind"`; omitted constants
/// default to zero and omitted units to `ħ = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceSpec {
    KI(KoenigsI),
    KII(KoenigsII),
    KIII(KoenigsIII),
    KIV(KoenigsCentrifugal),
    KV(KoenigsCentrifugal),
}

impl SpaceSpec {
    pub fn kind(&self) -> SpaceKind {
        match self {
            SpaceSpec::KI(_) => SpaceKind::KI,
            SpaceSpec::KII(_) => SpaceKind::KII,
            SpaceSpec::KIII(_) => SpaceKind::KIII,
            SpaceSpec::KIV(_) => SpaceKind::KIV,
            SpaceSpec::KV(_) => SpaceKind::KV,
        }
    }

    pub fn units(&self) -> UnitScalars {
        match self {
            SpaceSpec::KI(s) => s.units,
            SpaceSpec::KII(s) => s.units,
            SpaceSpec::KIII(s) => s.units,
            SpaceSpec::KIV(s) | SpaceSpec::KV(s) => s.units,
        }
    }

    pub fn with_units(mut self, units: UnitScalars) -> Self {
        match &mut self {
            SpaceSpec::KI(s) => s.units = units,
            SpaceSpec::KII(s) => s.units = units,
            SpaceSpec::KIII(s) => s.units = units,
            SpaceSpec::KIV(s) | SpaceSpec::KV(s) => s.units = units,
        }
        self
    }

    /// Constant `δ` of the metric factor.
    pub fn delta(&self) -> f64 {
        match self {
            SpaceSpec::KI(s) => s.delta,
            SpaceSpec::KII(s) => s.delta,
            SpaceSpec::KIII(s) => s.delta,
            SpaceSpec::KIV(s) | SpaceSpec::KV(s) => s.delta,
        }
    }

    /// Metric constants other than `δ`, in declaration order.
    pub fn metric_constants(&self) -> Vec<(&'static str, f64)> {
        match self {
            SpaceSpec::KI(s) => {
                vec![("alpha", s.alpha), ("beta_x", s.beta_x), ("beta_y", s.beta_y), ("beta_z", s.beta_z)]
            }
            SpaceSpec::KII(s) => vec![("alpha", s.alpha), ("beta_x", s.beta_x), ("beta_y", s.beta_y)],
            SpaceSpec::KIII(s) => vec![("alpha1", s.alpha1), ("beta", s.beta), ("gamma", s.gamma)],
            SpaceSpec::KIV(s) | SpaceSpec::KV(s) => vec![("alpha", s.alpha), ("beta", s.beta), ("gamma", s.gamma)],
        }
    }

    /// True when every metric constant except `δ` vanishes.
    pub fn is_flat_limit(&self) -> bool {
        self.metric_constants().iter().all(|&(_, v)| v == 0.0)
    }

    /// Checks that every constant is finite and the units are positive.
    pub fn validate(&self) -> Result<()> {
        self.units().validate()?;
        let constants = all_constants(self);
        if let Some((name, v)) = constants.into_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Config(format!("constant {name} is not finite ({v})")));
        }
        Ok(())
    }
}

fn all_constants(spec: &SpaceSpec) -> Vec<(&'static str, f64)> {
    let mut v = spec.metric_constants();
    v.push(("delta", spec.delta()));
    match spec {
        SpaceSpec::KI(s) => v.extend([("omega", s.omega), ("k_x", s.k_x), ("k_y", s.k_y), ("k_z", s.k_z)]),
        SpaceSpec::KII(s) => v.extend([("omega", s.omega), ("k_x", s.k_x), ("k_y", s.k_y)]),
        SpaceSpec::KIII(s) => v.extend([("alpha2", s.alpha2), ("k1", s.k1), ("k2", s.k2)]),
        SpaceSpec::KIV(s) | SpaceSpec::KV(s) => v.extend([("k1", s.k1), ("k2", s.k2), ("k3", s.k3)]),
    }
    v
}

/// A point of the underlying Cartesian chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn coord(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn with_coord(mut self, axis: Axis, v: f64) -> Self {
        match axis {
            Axis::X => self.x = v,
            Axis::Y => self.y = v,
            Axis::Z => self.z = v,
        }
        self
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// How `ΔV` obtains the derivatives of the metric factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Derivatives {
    Analytic,
    Numeric,
}

/// `f` with its gradient and the diagonal of its Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub f: f64,
    pub grad: [f64; 3],
    pub hess_diag: [f64; 3],
}

fn check_axis(name: &str, v: f64) -> Result<()> {
    if v.abs() < AXIS_TOL {
        return Err(Error::SingularPoint(format!("{name} = {v} lies on a singular axis")));
    }
    Ok(())
}

/// Rejects points on the singular set of the space (axes whose `1/x_a²`
/// or `1/r` coefficient is nonzero).
pub fn check_singular_set(spec: &SpaceSpec, p: Point3) -> Result<()> {
    match spec {
        SpaceSpec::KI(s) => {
            if s.beta_x != 0.0 {
                check_axis("x", p.x)?;
            }
            if s.beta_y != 0.0 {
                check_axis("y", p.y)?;
            }
            if s.beta_z != 0.0 {
                check_axis("z", p.z)?;
            }
        }
        SpaceSpec::KII(s) => {
            if s.beta_x != 0.0 {
                check_axis("x", p.x)?;
            }
            if s.beta_y != 0.0 {
                check_axis("y", p.y)?;
            }
        }
        SpaceSpec::KIII(s) => {
            if s.alpha1 != 0.0 {
                check_axis("r", p.norm())?;
            }
            if s.beta != 0.0 {
                check_axis("x", p.x)?;
            }
            if s.gamma != 0.0 {
                check_axis("y", p.y)?;
            }
        }
        SpaceSpec::KIV(s) | SpaceSpec::KV(s) => {
            if s.alpha != 0.0 || s.beta != 0.0 {
                check_axis("y", p.y)?;
            }
            if matches!(spec, SpaceSpec::KIV(_)) && s.gamma != 0.0 {
                check_axis("z", p.z)?;
            }
        }
    }
    Ok(())
}

/// Closed-form value, gradient and Hessian diagonal of `f`, without any
/// singular-set or positivity checks.
pub fn metric_jet(spec: &SpaceSpec, p: Point3) -> MetricJet {
    let c = [p.x, p.y, p.z];
    match spec {
        SpaceSpec::KI(s) => {
            let betas = [s.beta_x, s.beta_y, s.beta_z];
            let mut jet = MetricJet {
                f: s.alpha * (p.x * p.x + p.y * p.y + p.z * p.z) + s.delta,
                grad: [0.0; 3],
                hess_diag: [0.0; 3],
            };
            for a in 0..3 {
                let b = betas[a];
                let x = c[a];
                if b != 0.0 {
                    jet.f += b / (x * x);
                }
                jet.grad[a] = 2.0 * s.alpha * x - if b != 0.0 { 2.0 * b / (x * x * x) } else { 0.0 };
                jet.hess_diag[a] = 2.0 * s.alpha + if b != 0.0 { 6.0 * b / (x * x * x * x) } else { 0.0 };
            }
            jet
        }
        SpaceSpec::KII(s) => {
            let betas = [s.beta_x, s.beta_y, 0.0];
            let weights = [1.0, 1.0, 4.0];
            let mut jet = MetricJet {
                f: s.alpha * (p.x * p.x + p.y * p.y + 4.0 * p.z * p.z) + s.delta,
                grad: [0.0; 3],
                hess_diag: [0.0; 3],
            };
            for a in 0..3 {
                let b = betas[a];
                let x = c[a];
                if b != 0.0 {
                    jet.f += b / (x * x);
                }
                jet.grad[a] = 2.0 * weights[a] * s.alpha * x - if b != 0.0 { 2.0 * b / (x * x * x) } else { 0.0 };
                jet.hess_diag[a] = 2.0 * weights[a] * s.alpha + if b != 0.0 { 6.0 * b / (x * x * x * x) } else { 0.0 };
            }
            jet
        }
        SpaceSpec::KIII(s) => {
            let betas = [s.beta, s.gamma, 0.0];
            let mut jet = MetricJet { f: s.delta, grad: [0.0; 3], hess_diag: [0.0; 3] };
            let r = p.norm();
            if s.alpha1 != 0.0 {
                let r3 = r * r * r;
                let r5 = r3 * r * r;
                jet.f -= s.alpha1 / r;
                for a in 0..3 {
                    jet.grad[a] += s.alpha1 * c[a] / r3;
                    jet.hess_diag[a] += s.alpha1 * (1.0 / r3 - 3.0 * c[a] * c[a] / r5);
                }
            }
            for a in 0..2 {
                let b = betas[a];
                if b != 0.0 {
                    let x = c[a];
                    jet.f += b / (x * x);
                    jet.grad[a] -= 2.0 * b / (x * x * x);
                    jet.hess_diag[a] += 6.0 * b / (x * x * x * x);
                }
            }
            jet
        }
        SpaceSpec::KIV(s) | SpaceSpec::KV(s) => {
            let k = s.units.kinetic();
            let mut jet = MetricJet { f: s.delta, grad: [0.0; 3], hess_diag: [0.0; 3] };
            let (x, y, z) = (p.x, p.y, p.z);
            if s.alpha != 0.0 {
                let rho = (x * x + y * y).sqrt();
                let rho3 = rho * rho * rho;
                let rho5 = rho3 * rho * rho;
                let (y2, y3, y4) = (y * y, y * y * y, y * y * y * y);
                let g = x / (y2 * rho);
                let gx = 1.0 / rho3;
                let gxx = -3.0 * x / rho5;
                let gy = -x * (2.0 / (y3 * rho) + 1.0 / (y * rho3));
                let gyy = x * (6.0 / (y4 * rho) + 3.0 / (y2 * rho3) + 3.0 / rho5);
                let gzz = 0.0;
                jet.f += k * s.alpha * g;
                jet.grad[0] += k * s.alpha * gx;
                jet.grad[1] += k * s.alpha * gy;
                jet.hess_diag[0] += k * s.alpha * gxx;
                jet.hess_diag[1] += k * s.alpha * gyy;
                jet.hess_diag[2] += gzz;
            }
            if s.beta != 0.0 {
                jet.f += k * s.beta / (y * y);
                jet.grad[1] -= 2.0 * k * s.beta / (y * y * y);
                jet.hess_diag[1] += 6.0 * k * s.beta / (y * y * y * y);
            }
            if matches!(spec, SpaceSpec::KIV(_)) {
                if s.gamma != 0.0 {
                    jet.f += k * s.gamma / (z * z);
                    jet.grad[2] -= 2.0 * k * s.gamma / (z * z * z);
                    jet.hess_diag[2] += 6.0 * k * s.gamma / (z * z * z * z);
                }
            } else {
                jet.f += s.gamma * z;
                jet.grad[2] += s.gamma;
            }
            jet
        }
    }
}

/// Metric factor `f` at `p`, rejecting singular and non-positive points.
pub fn metric_factor(spec: &SpaceSpec, p: Point3) -> Result<f64> {
    check_singular_set(spec, p)?;
    let f = metric_jet(spec, p).f;
    if !(f > 0.0) || !f.is_finite() {
        return Err(Error::NonPositiveMetric { value: f });
    }
    Ok(f)
}

/// Checked jet: singular-set and positivity guards as in [`metric_factor`].
fn checked_jet(spec: &SpaceSpec, p: Point3) -> Result<MetricJet> {
    metric_factor(spec, p)?;
    Ok(metric_jet(spec, p))
}

/// `h_a = √f · |x_a|`, so that `f = h_a²/x_a²`.
pub fn h_decomposition(spec: &SpaceSpec, p: Point3, axis: Axis) -> Result<f64> {
    let f = metric_factor(spec, p)?;
    let xa = p.coord(axis);
    if xa.abs() < AXIS_TOL {
        return Err(Error::SingularPoint(format!("h vanishes on the {axis:?} = 0 plane")));
    }
    Ok(f.sqrt() * xa.abs())
}

/// Per-axis scale `F = √f` with its first and second derivative along `axis`.
#[derive(Debug, Clone, Copy)]
struct ScaleJet {
    value: f64,
    d1: f64,
    d2: f64,
}

fn analytic_scale_jets(jet: &MetricJet) -> [ScaleJet; 3] {
    let root = jet.f.sqrt();
    let mut out = [ScaleJet { value: root, d1: 0.0, d2: 0.0 }; 3];
    for a in 0..3 {
        let (g, h) = (jet.grad[a], jet.hess_diag[a]);
        out[a].d1 = g / (2.0 * root);
        out[a].d2 = h / (2.0 * root) - g * g / (4.0 * jet.f * root);
    }
    out
}

// Step for the five-point stencils: 1e-3·(1+|x|), shrunk near a singular
// axis and wherever f varies on a shorter scale than that.
fn numeric_step(f_at: impl Fn(f64) -> f64, x: f64) -> f64 {
    let mut h = 1e-3 * (1.0 + x.abs());
    if x.abs() > 0.0 && x.abs() < 8.0 * h {
        h = x.abs() / 8.0;
    }
    let f0 = f_at(0.0);
    for _ in 0..40 {
        let (lo, hi) = (f_at(-2.0 * h), f_at(2.0 * h));
        if lo > 0.0 && hi > 0.0 && (lo - f0).abs().max((hi - f0).abs()) <= 4e-3 * f0 {
            break;
        }
        h *= 0.5;
    }
    h
}

fn numeric_scale_jets(spec: &SpaceSpec, p: Point3) -> [ScaleJet; 3] {
    let f_at = |q: Point3| metric_jet(spec, q).f;
    let centre = f_at(p).sqrt();
    let mut out = [ScaleJet { value: centre, d1: 0.0, d2: 0.0 }; 3];
    for axis in Axis::ALL {
        let x = p.coord(axis);
        let h = numeric_step(|dx| f_at(p.with_coord(axis, x + dx)), x);
        let at = |k: f64| f_at(p.with_coord(axis, x + k * h)).sqrt();
        let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        out[axis.index()].d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        out[axis.index()].d2 = (-m2 + 16.0 * m1 - 30.0 * centre + 16.0 * p1 - p2) / (12.0 * h * h);
    }
    out
}

/// Quantum potential for a diagonal metric `g_ab = f_a² δ_ab` in `dim`
/// dimensions, with every `f_a = √f`:
/// `ΔV = ħ²(D-2)/(8m) Σ_a ((D-4) f_{a,a}² + 2 f_a f_{a,aa}) / f_a⁴`.
pub fn delta_v_general(spec: &SpaceSpec, p: Point3, dim: u32, derivs: Derivatives) -> Result<f64> {
    let jet = checked_jet(spec, p)?;
    if jet.f.abs() < 1e-12 {
        return Err(Error::SingularPoint(format!("metric factor {:e} too close to zero", jet.f)));
    }
    let scales = match derivs {
        Derivatives::Analytic => analytic_scale_jets(&jet),
        Derivatives::Numeric => numeric_scale_jets(spec, p),
    };
    let units = spec.units();
    let d = dim as f64;
    let sum: f64 = scales.iter().map(|s| ((d - 4.0) * s.d1 * s.d1 + 2.0 * s.value * s.d2) / s.value.powi(4)).sum();
    Ok(units.hbar * units.hbar * (d - 2.0) / (8.0 * units.mass) * sum)
}

/// Three-dimensional curvature correction `ΔV`.
pub fn delta_v_total(spec: &SpaceSpec, p: Point3, derivs: Derivatives) -> Result<f64> {
    delta_v_general(spec, p, 3, derivs)
}

/// Output of [`delta_v_split`]: totals and per-axis pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaVSplit {
    pub dv1: f64,
    pub dv2: f64,
    pub dv1_axis: [f64; 3],
    pub dv2_axis: [f64; 3],
}

/// `ΔV = ΔV₁ + ΔV₂` from the per-axis `h`-decomposition:
/// `ΔV₁,a = ħ²/(8m) (2x²h h'' - 2x h h' - x² h'²)/h⁴` and
/// `ΔV₂,a = 3ħ²/(8m h²)`, all derivatives along `x = x_a`.
pub fn delta_v_split(spec: &SpaceSpec, p: Point3) -> Result<DeltaVSplit> {
    let jet = checked_jet(spec, p)?;
    for axis in Axis::ALL {
        if p.coord(axis).abs() < AXIS_TOL {
            return Err(Error::SingularPoint(format!("{axis:?} coordinate is zero; ΔV split needs all axes nonzero")));
        }
    }
    let units = spec.units();
    let pref = units.hbar * units.hbar / (8.0 * units.mass);
    let mut out = DeltaVSplit { dv1: 0.0, dv2: 0.0, dv1_axis: [0.0; 3], dv2_axis: [0.0; 3] };
    for axis in Axis::ALL {
        let a = axis.index();
        let x = p.coord(axis);
        // h² = q = f x²
        let q = jet.f * x * x;
        let q1 = jet.grad[a] * x * x + 2.0 * x * jet.f;
        let q2 = jet.hess_diag[a] * x * x + 4.0 * x * jet.grad[a] + 2.0 * jet.f;
        let h = q.sqrt();
        let h1 = q1 / (2.0 * h);
        let h2 = (2.0 * q * q2 - q1 * q1) / (4.0 * h * h * h);
        let h4 = q * q;
        out.dv1_axis[a] = pref * (2.0 * x * x * h * h2 - 2.0 * x * h * h1 - x * x * h1 * h1) / h4;
        out.dv2_axis[a] = 3.0 * pref / q;
    }
    out.dv1 = out.dv1_axis.iter().sum();
    out.dv2 = out.dv2_axis.iter().sum();
    Ok(out)
}

/// Momentum-operator correction `Γ_i = ∂_i ln √g = (3/2) ∂_i f / f`.
pub fn grad_log_sqrt_g(spec: &SpaceSpec, p: Point3) -> Result<[f64; 3]> {
    let jet = checked_jet(spec, p)?;
    Ok(jet.grad.map(|g| 1.5 * g / jet.f))
}
