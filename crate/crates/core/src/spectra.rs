//! Effective indices, quantization conditions and their numerical roots.
//!
//! For `KI`, `KII` and `KIII` the bound-state energies are the roots of
//! conditions in which the energy also enters through the effective indices
//! (`ω̃² = ω² - 2αE/m`, `k̃² = k² - 2mβE/ħ²`, ...). Squaring such a condition
//! produces a polynomial of high order with spurious roots, so the residual
//! is kept unsquared and solved by bracketing and bisection inside the
//! energy intervals where every index is real.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{SpaceKind, SpaceSpec};

/// Integer labels of a bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuantumNumbers {
    /// Spherical polar labels for `KI`.
    Polar { n_r: u32, n_theta: u32, n_phi: u32 },
    /// Cartesian labels for `KI` and `KII`.
    Cartesian { n_x: u32, n_y: u32, n_z: u32 },
    /// Spherical labels for `KIII`.
    Coulomb { n_r: u32, l: u32, n_phi: u32 },
    /// Circular polar labels (with `z`) for `KII`.
    Cylindrical { n_rho: u32, n_phi: u32, n_z: u32 },
}

impl QuantumNumbers {
    pub fn scheme_name(&self) -> &'static str {
        match self {
            QuantumNumbers::Polar { .. } => "polar",
            QuantumNumbers::Cartesian { .. } => "cartesian",
            QuantumNumbers::Coulomb { .. } => "coulomb",
            QuantumNumbers::Cylindrical { .. } => "cylindrical",
        }
    }

    /// Aggregate principal number `N` under the convention of `kind`.
    pub fn aggregate(&self, kind: SpaceKind) -> Result<u32> {
        use QuantumNumbers::*;
        let n = match (kind, *self) {
            (SpaceKind::KI, Polar { n_r, n_theta, n_phi }) => n_r + n_theta + n_phi,
            (SpaceKind::KI, Cartesian { n_x, n_y, n_z }) => n_x + n_y + n_z,
            (SpaceKind::KII, Cartesian { n_x, n_y, n_z }) => 2 * (n_x + n_y) + n_z,
            (SpaceKind::KII, Cylindrical { n_rho, n_phi, n_z }) => 2 * (n_rho + n_phi) + n_z,
            (SpaceKind::KIII, Coulomb { n_r, l, n_phi }) => 2 + 2 * n_phi + l + n_r,
            _ => {
                return Err(Error::Scheme { scheme: self.scheme_name().into(), kind: kind.to_string() });
            }
        };
        Ok(n)
    }

    /// A representative label set with aggregate `n`; `None` when no label
    /// set reaches `n` (`KIII` needs `n ≥ 2`).
    pub fn canonical(kind: SpaceKind, n: u32) -> Option<QuantumNumbers> {
        match kind {
            SpaceKind::KI => Some(QuantumNumbers::Polar { n_r: n, n_theta: 0, n_phi: 0 }),
            SpaceKind::KII => Some(QuantumNumbers::Cylindrical { n_rho: n / 2, n_phi: 0, n_z: n % 2 }),
            SpaceKind::KIII => (n >= 2).then(|| QuantumNumbers::Coulomb { n_r: 0, l: n - 2, n_phi: 0 }),
            SpaceKind::KIV | SpaceKind::KV => None,
        }
    }

    /// Number of nodes of the radial (or first Cartesian) factor.
    pub fn radial_label(&self) -> u32 {
        match *self {
            QuantumNumbers::Polar { n_r, .. } | QuantumNumbers::Coulomb { n_r, .. } => n_r,
            QuantumNumbers::Cartesian { n_x, .. } => n_x,
            QuantumNumbers::Cylindrical { n_rho, .. } => n_rho,
        }
    }

    /// Compact `name=value` listing, `;`-separated.
    pub fn labels(&self) -> String {
        match *self {
            QuantumNumbers::Polar { n_r, n_theta, n_phi } => format!("n_r={n_r};n_theta={n_theta};n_phi={n_phi}"),
            QuantumNumbers::Cartesian { n_x, n_y, n_z } => format!("n_x={n_x};n_y={n_y};n_z={n_z}"),
            QuantumNumbers::Coulomb { n_r, l, n_phi } => format!("n_r={n_r};l={l};n_phi={n_phi}"),
            QuantumNumbers::Cylindrical { n_rho, n_phi, n_z } => format!("n_rho={n_rho};n_phi={n_phi};n_z={n_z}"),
        }
    }
}

/// Sign in front of one effective index `k̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Signs of the (up to three) `k̃` terms, in the order `x, y, z` for
/// `KI`/`KII` and `1, 2, 3` otherwise. Written as `k1=+,k2=-`; the keys
/// `kx`, `k_x` and `k1` all name the first slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BranchSigns(pub [Sign; 3]);

impl BranchSigns {
    pub fn get(&self, i: usize) -> f64 {
        self.0[i].value()
    }

    /// `;`-separated listing restricted to the slots `kind` uses.
    pub fn describe(&self, kind: SpaceKind) -> String {
        let names: &[&str] = match kind {
            SpaceKind::KI => &["kx", "ky", "kz"],
            SpaceKind::KII => &["kx", "ky"],
            SpaceKind::KIII => &["k1", "k2"],
            SpaceKind::KIV | SpaceKind::KV => &["k1", "k2", "k3"],
        };
        names.iter().enumerate().map(|(i, n)| format!("{n}={}", self.0[i].symbol())).collect::<Vec<_>>().join(";")
    }
}

impl FromStr for BranchSigns {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut signs = [Sign::Plus; 3];
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("branch sign '{part}' is not of the form key=+ or key=-")))?;
            let slot = match key.trim() {
                "k1" | "kx" | "k_x" => 0,
                "k2" | "ky" | "k_y" => 1,
                "k3" | "kz" | "k_z" => 2,
                other => return Err(Error::Config(format!("unknown branch index '{other}'"))),
            };
            signs[slot] = match value.trim() {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                other => return Err(Error::Config(format!("branch sign must be + or -, got '{other}'"))),
            };
        }
        Ok(BranchSigns(signs))
    }
}

impl fmt::Display for BranchSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k1={},k2={},k3={}", self.0[0].symbol(), self.0[1].symbol(), self.0[2].symbol())
    }
}

impl TryFrom<String> for BranchSigns {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BranchSigns> for String {
    fn from(b: BranchSigns) -> String {
        b.to_string()
    }
}

/// One effective index. For an imaginary index `value` holds the modulus
/// of its imaginary part and `real` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexValue {
    pub name: String,
    pub value: f64,
    pub real: bool,
}

impl IndexValue {
    fn from_square(name: &str, square: f64) -> Self {
        Self { name: name.into(), value: square.abs().sqrt(), real: square >= 0.0 }
    }

    pub fn real_value(&self) -> Option<f64> {
        self.real.then_some(self.value)
    }
}

/// Energy-dependent indices of a space at one energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveIndices {
    pub energy: f64,
    /// `ω̃` (`KI`, `KII`).
    pub omega_eff: Option<IndexValue>,
    /// `k̃` in slot order.
    pub k_eff: Vec<IndexValue>,
    /// `λ₁`; for `KII` in circular polar labels the single in-plane index.
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// `α̃ = α₂ - α₁E` (`KIII`).
    pub alpha_eff: Option<f64>,
    /// `κ` (`KIII`).
    pub kappa: Option<IndexValue>,
    pub branch_signs: BranchSigns,
}

impl EffectiveIndices {
    /// True when every index present is real.
    pub fn all_real(&self) -> bool {
        self.omega_eff.iter().chain(self.k_eff.iter()).chain(self.kappa.iter()).all(|v| v.real)
    }

    fn signed_k(&self, i: usize) -> Option<f64> {
        self.k_eff.get(i).and_then(IndexValue::real_value).map(|k| self.branch_signs.get(i) * k)
    }
}

/// A linear realness condition `a + bE ≥ 0` (`> 0` when strict).
#[derive(Debug, Clone, PartialEq)]
struct Constraint {
    tag: &'static str,
    a: f64,
    b: f64,
    strict: bool,
}

impl Constraint {
    fn new(tag: &'static str, a: f64, b: f64) -> Self {
        Self { tag, a, b, strict: false }
    }

    fn holds(&self, e: f64) -> bool {
        let v = self.a + self.b * e;
        if self.strict {
            v > 0.0
        } else {
            v >= 0.0
        }
    }
}

fn constraints(spec: &SpaceSpec) -> Vec<Constraint> {
    match spec {
        SpaceSpec::KI(s) => {
            let (hbar, m) = (s.units.hbar, s.units.mass);
            let kc = 2.0 * m / (hbar * hbar);
            vec![
                Constraint::new("omega_eff real", s.omega * s.omega, -2.0 * s.alpha / m),
                Constraint::new("k_eff_x real", s.k_x * s.k_x, -kc * s.beta_x),
                Constraint::new("k_eff_y real", s.k_y * s.k_y, -kc * s.beta_y),
                Constraint::new("k_eff_z real", s.k_z * s.k_z, -kc * s.beta_z),
            ]
        }
        SpaceSpec::KII(s) => {
            let (hbar, m) = (s.units.hbar, s.units.mass);
            let kc = 2.0 * m / (hbar * hbar);
            vec![
                Constraint::new("omega_eff real", s.omega * s.omega, -2.0 * s.alpha / m),
                Constraint::new("k_eff_x real", s.k_x * s.k_x, -kc * s.beta_x),
                Constraint::new("k_eff_y real", s.k_y * s.k_y, -kc * s.beta_y),
            ]
        }
        SpaceSpec::KIII(s) => {
            let (hbar, m) = (s.units.hbar, s.units.mass);
            let kc = 2.0 * m / (hbar * hbar);
            vec![
                Constraint::new("k_eff_1 real", s.k1 * s.k1, -kc * s.beta),
                Constraint::new("k_eff_2 real", s.k2 * s.k2, -kc * s.gamma),
                Constraint { tag: "delta*E < 0", a: 0.0, b: -s.delta, strict: true },
            ]
        }
        SpaceSpec::KIV(s) | SpaceSpec::KV(s) => {
            let (hbar, m) = (s.units.hbar, s.units.mass);
            let kc = 2.0 * m / (hbar * hbar);
            let mut v = vec![
                Constraint::new("k_eff_1 real", s.k2 * s.k2 + s.k1 * s.k1, -kc * (s.beta + s.alpha)),
                Constraint::new("k_eff_2 real", s.k2 * s.k2 - s.k1 * s.k1, kc * (s.beta - s.alpha)),
            ];
            if matches!(spec, SpaceSpec::KIV(_)) {
                v.push(Constraint::new("k_eff_3 real", s.k3 * s.k3, -kc * s.gamma));
            }
            v
        }
    }
}

/// Effective indices at energy `e`. Imaginary indices are flagged rather
/// than rejected.
pub fn effective_indices(spec: &SpaceSpec, qn: &QuantumNumbers, signs: BranchSigns, e: f64) -> EffectiveIndices {
    let cons = constraints(spec);
    let sq = |i: usize| cons[i].a + cons[i].b * e;
    let mut out = EffectiveIndices {
        energy: e,
        omega_eff: None,
        k_eff: Vec::new(),
        lambda1: None,
        lambda2: None,
        alpha_eff: None,
        kappa: None,
        branch_signs: signs,
    };
    match spec {
        SpaceSpec::KI(_) => {
            out.omega_eff = Some(IndexValue::from_square("omega_eff", sq(0)));
            out.k_eff = ["k_eff_x", "k_eff_y", "k_eff_z"]
                .iter()
                .enumerate()
                .map(|(i, n)| IndexValue::from_square(n, sq(i + 1)))
                .collect();
            if let QuantumNumbers::Polar { n_theta, n_phi, .. } = *qn {
                if let (Some(kx), Some(ky), Some(kz)) = (out.signed_k(0), out.signed_k(1), out.signed_k(2)) {
                    let l1 = 2.0 * n_phi as f64 + kx + ky + 1.0;
                    out.lambda1 = Some(l1);
                    out.lambda2 = Some(2.0 * n_theta as f64 + kz + l1 + 1.0);
                }
            }
        }
        SpaceSpec::KII(_) => {
            out.omega_eff = Some(IndexValue::from_square("omega_eff", sq(0)));
            out.k_eff =
                ["k_eff_x", "k_eff_y"].iter().enumerate().map(|(i, n)| IndexValue::from_square(n, sq(i + 1))).collect();
            if let QuantumNumbers::Cylindrical { n_phi, .. } = *qn {
                if let (Some(kx), Some(ky)) = (out.signed_k(0), out.signed_k(1)) {
                    out.lambda1 = Some(2.0 * n_phi as f64 + kx + ky + 1.0);
                }
            }
        }
        SpaceSpec::KIII(s) => {
            out.k_eff = vec![IndexValue::from_square("k_eff_1", sq(0)), IndexValue::from_square("k_eff_2", sq(1))];
            let alpha_eff = s.alpha2 - s.alpha1 * e;
            out.alpha_eff = Some(alpha_eff);
            let de = s.delta * e;
            out.kappa = Some(if de < 0.0 {
                IndexValue {
                    name: "kappa".into(),
                    value: alpha_eff * (-s.units.mass / (2.0 * de)).sqrt() / s.units.hbar,
                    real: true,
                }
            } else if de > 0.0 {
                IndexValue {
                    name: "kappa".into(),
                    value: alpha_eff * (s.units.mass / (2.0 * de)).sqrt() / s.units.hbar,
                    real: false,
                }
            } else {
                IndexValue { name: "kappa".into(), value: f64::INFINITY, real: false }
            });
            if let QuantumNumbers::Coulomb { l, n_phi, .. } = *qn {
                if let (Some(k1), Some(k2)) = (out.signed_k(0), out.signed_k(1)) {
                    let l1 = 2.0 * n_phi as f64 + k1 + k2 + 1.0;
                    out.lambda1 = Some(l1);
                    out.lambda2 = Some(l as f64 + l1 + 0.5);
                }
            }
        }
        SpaceSpec::KIV(_) => {
            out.k_eff = ["k_eff_1", "k_eff_2", "k_eff_3"]
                .iter()
                .enumerate()
                .map(|(i, n)| IndexValue::from_square(n, sq(i)))
                .collect();
        }
        SpaceSpec::KV(s) => {
            out.k_eff = vec![IndexValue::from_square("k_eff_1", sq(0)), IndexValue::from_square("k_eff_2", sq(1))];
            let k3 = s.k3 - 2.0 * s.units.mass * s.gamma * e / s.units.hbar;
            out.k_eff.push(IndexValue { name: "k_eff_3".into(), value: k3, real: true });
        }
    }
    out
}

/// Maximal open energy interval on which the quantization condition is real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityWindow {
    pub id: usize,
    pub lower: f64,
    pub upper: f64,
    /// Constraints that bound the interval (or all, when unbounded).
    pub constraints: Vec<String>,
}

impl ValidityWindow {
    pub fn contains(&self, e: f64) -> bool {
        e > self.lower && e < self.upper
    }
}

fn require_discrete(spec: &SpaceSpec) -> Result<()> {
    match spec.kind() {
        SpaceKind::KIV | SpaceKind::KV => Err(Error::Kind {
            kind: spec.kind().to_string(),
            reason: "the space has only a continuous spectrum; no bound-state condition exists".into(),
        }),
        _ => Ok(()),
    }
}

/// Energy windows (at most one, since the conditions are linear in `E`).
pub fn validity_windows(spec: &SpaceSpec, qn: &QuantumNumbers) -> Result<Vec<ValidityWindow>> {
    require_discrete(spec)?;
    qn.aggregate(spec.kind())?;
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    let mut lower_tag = None;
    let mut upper_tag = None;
    for c in constraints(spec) {
        if c.b == 0.0 {
            let ok = if c.strict { c.a > 0.0 } else { c.a >= 0.0 };
            if !ok {
                return Ok(Vec::new());
            }
        } else {
            let root = -c.a / c.b;
            if c.b > 0.0 && root >= lower {
                lower = root;
                lower_tag = Some(c.tag);
            } else if c.b < 0.0 && root <= upper {
                upper = root;
                upper_tag = Some(c.tag);
            }
        }
    }
    if !(lower < upper) {
        return Ok(Vec::new());
    }
    let constraints = [lower_tag, upper_tag].into_iter().flatten().map(String::from).collect();
    Ok(vec![ValidityWindow { id: 0, lower, upper, constraints }])
}

fn window_violation(spec: &SpaceSpec, e: f64) -> Option<&'static str> {
    constraints(spec).into_iter().find(|c| !c.holds(e)).map(|c| c.tag)
}

/// Residual of the quantization condition at energy `e`.
///
/// * `KI`:   `δE - ħω̃(2N + Σ s_a k̃_a + 3)`
/// * `KII`:  `δE - ħω̃(N + s_x k̃_x + s_y k̃_y + 5/2)`
/// * `KIII`: `N + s₁k̃₁ + s₂k̃₂ - κ`
pub fn quantization_residual(spec: &SpaceSpec, qn: &QuantumNumbers, signs: BranchSigns, e: f64) -> Result<f64> {
    require_discrete(spec)?;
    let n = qn.aggregate(spec.kind())? as f64;
    if !e.is_finite() {
        return Err(Error::OutOfWindow { energy: e, reason: "energy is not finite".into() });
    }
    if let Some(tag) = window_violation(spec, e) {
        return Err(Error::OutOfWindow { energy: e, reason: format!("{tag} violated") });
    }
    let idx = effective_indices(spec, qn, signs, e);
    let ks: f64 = (0..idx.k_eff.len()).map(|i| idx.signed_k(i).unwrap_or(f64::NAN)).sum();
    let r = match spec {
        SpaceSpec::KI(s) => {
            let w = idx.omega_eff.as_ref().map_or(f64::NAN, |v| v.value);
            s.delta * e - s.units.hbar * w * (2.0 * n + ks + 3.0)
        }
        SpaceSpec::KII(s) => {
            let w = idx.omega_eff.as_ref().map_or(f64::NAN, |v| v.value);
            s.delta * e - s.units.hbar * w * (n + ks + 2.5)
        }
        SpaceSpec::KIII(_) => n + ks - idx.kappa.as_ref().map_or(f64::NAN, |v| v.value),
        SpaceSpec::KIV(_) | SpaceSpec::KV(_) => unreachable!("rejected above"),
    };
    Ok(r)
}

/// Where an energy value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    RootSolver,
    ClosedForm,
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::RootSolver => "root_solver",
            Provenance::ClosedForm => "closed_form",
            Provenance::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub kind: SpaceKind,
    /// Aggregate principal number.
    pub n: u32,
    pub qn: QuantumNumbers,
    pub branch_signs: BranchSigns,
    pub energy: f64,
    /// Quantization residual at `energy`; `NaN` when it lies outside every window.
    pub residual: f64,
    pub window_id: Option<usize>,
    pub provenance: Provenance,
}

/// Root-solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Scan samples per decade of `|E|`.
    pub scan_points_per_decade: f64,
    /// Relative width at which bisection stops.
    pub tol_rel: f64,
    /// Infinite windows are truncated to `|E| ≤ e_max_abs`.
    pub e_max_abs: f64,
    /// Roots closer than this (relative) are merged.
    pub dedupe_rel: f64,
    pub branch_signs: BranchSigns,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scan_points_per_decade: 1e4,
            tol_rel: 1e-13,
            e_max_abs: 1e6,
            dedupe_rel: 1e-9,
            branch_signs: BranchSigns::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("scan_points_per_decade", self.scan_points_per_decade)?;
        positive("tol_rel", self.tol_rel)?;
        positive("e_max_abs", self.e_max_abs)?;
        positive("dedupe_rel", self.dedupe_rel)?;
        if self.tol_rel >= 1e-2 {
            return Err(Error::Config(format!("tol_rel must be below 1e-2, got {}", self.tol_rel)));
        }
        Ok(())
    }
}

/// Levels found by [`solve_levels`] together with non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub levels: Vec<EnergyLevel>,
    pub diagnostics: Vec<String>,
}

/// Energies near zero are resolved down to this scale by the scan map
/// `E = s·sinh(t)`.
const SCAN_SCALE: f64 = 1e-8;

/// Every root of the quantization condition for `qn`, sorted by energy.
pub fn solve_levels(spec: &SpaceSpec, qn: &QuantumNumbers, cfg: &SolverConfig) -> Result<SolveOutcome> {
    require_discrete(spec)?;
    cfg.validate()?;
    spec.validate()?;
    let n = qn.aggregate(spec.kind())?;
    let mut outcome = SolveOutcome::default();
    if spec.delta() == 0.0 && matches!(spec.kind(), SpaceKind::KI | SpaceKind::KII) {
        outcome.diagnostics.push("delta = 0: the energy drops out of the condition; no levels".into());
        return Ok(outcome);
    }
    let windows = validity_windows(spec, qn)?;
    if windows.is_empty() {
        let msg = if spec.delta() == 0.0 {
            "delta = 0: kappa is undefined; no levels".to_string()
        } else {
            "no energy interval keeps every effective index real".to_string()
        };
        outcome.diagnostics.push(msg);
        return Ok(outcome);
    }
    let signs = cfg.branch_signs;
    let residual = |e: f64| quantization_residual(spec, qn, signs, e);
    for w in &windows {
        let lo = w.lower.max(-cfg.e_max_abs);
        let hi = w.upper.min(cfg.e_max_abs);
        if !(lo < hi) {
            continue;
        }
        let (t_lo, t_hi) = ((lo / SCAN_SCALE).asinh(), (hi / SCAN_SCALE).asinh());
        let count = (((t_hi - t_lo) / std::f64::consts::LN_10) * cfg.scan_points_per_decade).ceil().max(16.0) as usize;
        let dt = (t_hi - t_lo) / count as f64;
        let samples: Vec<(f64, f64)> = (0..count)
            .into_par_iter()
            .filter_map(|i| {
                let e = SCAN_SCALE * (t_lo + (i as f64 + 0.5) * dt).sinh();
                if !(e > lo && e < hi) {
                    return None;
                }
                residual(e).ok().filter(|r| r.is_finite()).map(|r| (e, r))
            })
            .collect();
        let mut roots = Vec::new();
        for (j, pair) in samples.windows(2).enumerate() {
            let ((e0, r0), (e1, r1)) = (pair[0], pair[1]);
            if r0 == 0.0 {
                roots.push(e0);
                continue;
            }
            if r0.signum() == r1.signum() || r1 == 0.0 {
                if r1 == 0.0 && j + 2 == samples.len() {
                    roots.push(e1);
                }
                continue;
            }
            let at_cutoff = (j == 0 && lo == -cfg.e_max_abs) || (j + 2 == samples.len() && hi == cfg.e_max_abs);
            if at_cutoff {
                outcome.diagnostics.push(format!(
                    "sign change next to the energy cutoff ±{:e}; raise e_max to resolve it",
                    cfg.e_max_abs
                ));
            }
            roots.push(bisect(&residual, e0, r0, e1, cfg.tol_rel));
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|b, a| (*b - *a).abs() <= cfg.dedupe_rel * a.abs().max(b.abs()));
        for e in roots {
            outcome.levels.push(EnergyLevel {
                kind: spec.kind(),
                n,
                qn: *qn,
                branch_signs: signs,
                energy: e,
                residual: residual(e).unwrap_or(f64::NAN),
                window_id: Some(w.id),
                provenance: Provenance::RootSolver,
            });
        }
    }
    outcome.levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(outcome)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut fa: f64, mut b: f64, tol_rel: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= tol_rel * mid.abs() || mid == a || mid == b {
            break;
        }
        let fm = match f(mid) {
            Ok(v) => v,
            Err(_) => break,
        };
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Closed-form special cases of the quantization conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialCase {
    /// `KI`, `k = ω = 0`.
    #[serde(rename = "ki-1")]
    KiCase1,
    /// `KI`, `k = α = 0`.
    #[serde(rename = "ki-2")]
    KiCase2,
    /// `KI`, `k = α = β = 0`.
    #[serde(rename = "ki-3")]
    KiCase3,
    /// `KI`, `α = β = 0`.
    #[serde(rename = "ki-4")]
    KiCase4,
    /// `KI⁽⁰⁾`: `ω = k = β = 0`.
    #[serde(rename = "ki-zero")]
    KiZero,
    /// `KII`, `α = β = 0`.
    #[serde(rename = "kii-flat")]
    KiiFlat,
    /// `KII⁽⁰⁾`: `ω = k = β = 0`.
    #[serde(rename = "kii-zero")]
    KiiZero,
    /// `KIII`, `α₁ = β = γ = 0`.
    #[serde(rename = "kiii-1")]
    KiiiCase1,
    /// `KIII`, `k = α₂ = 0`.
    #[serde(rename = "kiii-2")]
    KiiiCase2,
    /// `KIII`, `k = 0`.
    #[serde(rename = "kiii-3")]
    KiiiCase3,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 10] = [
        SpecialCase::KiCase1,
        SpecialCase::KiCase2,
        SpecialCase::KiCase3,
        SpecialCase::KiCase4,
        SpecialCase::KiZero,
        SpecialCase::KiiFlat,
        SpecialCase::KiiZero,
        SpecialCase::KiiiCase1,
        SpecialCase::KiiiCase2,
        SpecialCase::KiiiCase3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SpecialCase::KiCase1 => "ki-1",
            SpecialCase::KiCase2 => "ki-2",
            SpecialCase::KiCase3 => "ki-3",
            SpecialCase::KiCase4 => "ki-4",
            SpecialCase::KiZero => "ki-zero",
            SpecialCase::KiiFlat => "kii-flat",
            SpecialCase::KiiZero => "kii-zero",
            SpecialCase::KiiiCase1 => "kiii-1",
            SpecialCase::KiiiCase2 => "kiii-2",
            SpecialCase::KiiiCase3 => "kiii-3",
        }
    }

    pub fn kind(self) -> SpaceKind {
        match self {
            SpecialCase::KiCase1
            | SpecialCase::KiCase2
            | SpecialCase::KiCase3
            | SpecialCase::KiCase4
            | SpecialCase::KiZero => SpaceKind::KI,
            SpecialCase::KiiFlat | SpecialCase::KiiZero => SpaceKind::KII,
            SpecialCase::KiiiCase1 | SpecialCase::KiiiCase2 | SpecialCase::KiiiCase3 => SpaceKind::KIII,
        }
    }
}

impl FromStr for SpecialCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecialCase::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| {
            let ids: Vec<_> = SpecialCase::ALL.iter().map(|c| c.id()).collect();
            Error::Config(format!("unknown special case '{s}' (expected one of {})", ids.join(", ")))
        })
    }
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn require_zero(case: SpecialCase, values: &[(&str, f64)]) -> Result<()> {
    let nonzero: Vec<String> = values.iter().filter(|(_, v)| *v != 0.0).map(|(n, v)| format!("{n}={v}")).collect();
    if nonzero.is_empty() {
        return Ok(());
    }
    let names: Vec<&str> = values.iter().map(|(n, _)| *n).collect();
    Err(Error::PatternMismatch {
        case: case.id().into(),
        reason: format!("requires {} = 0 (nonzero: {})", names.join(", "), nonzero.join(", ")),
    })
}

fn no_root(case: SpecialCase, reason: impl Into<String>) -> Error {
    Error::NoConsistentRoot { case: case.id().into(), reason: reason.into() }
}

/// Positive real roots of `a t² + b t + c = 0`, or the complex pair.
fn positive_quadratic_roots(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    if a == 0.0 {
        return Ok(if b != 0.0 { vec![-c / b] } else { Vec::new() }.into_iter().filter(|t| *t > 0.0).collect());
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::ComplexEnergy { re: -b / (2.0 * a), im: (-disc).sqrt() / (2.0 * a).abs() });
    }
    // cancellation-free pair
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
    roots.retain(|t| *t > 0.0);
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    Ok(roots)
}

/// Closed-form energies of a special case, one entry per sign-consistent
/// branch (cases `ki-2` and `kiii-3` may have two).
///
/// Each formula is the exact root of the unsquared condition; when the
/// signs of the constants rule out every root an error says why.
pub fn closed_form_special(
    spec: &SpaceSpec,
    case: SpecialCase,
    qn: &QuantumNumbers,
    signs: BranchSigns,
) -> Result<Vec<EnergyLevel>> {
    if spec.kind() != case.kind() {
        return Err(Error::PatternMismatch {
            case: case.id().into(),
            reason: format!("applies to {} only, got {}", case.kind(), spec.kind()),
        });
    }
    let n = qn.aggregate(spec.kind())?;
    let nf = n as f64;
    let units = spec.units();
    let (hbar, m) = (units.hbar, units.mass);
    let s = |i: usize| signs.get(i);
    let energies: Vec<f64> = match (spec, case) {
        (SpaceSpec::KI(k), SpecialCase::KiCase1 | SpecialCase::KiZero) => {
            if case == SpecialCase::KiZero {
                require_zero(
                    case,
                    &[
                        ("omega", k.omega),
                        ("k_x", k.k_x),
                        ("k_y", k.k_y),
                        ("k_z", k.k_z),
                        ("beta_x", k.beta_x),
                        ("beta_y", k.beta_y),
                        ("beta_z", k.beta_z),
                    ],
                )?;
            } else {
                require_zero(case, &[("omega", k.omega), ("k_x", k.k_x), ("k_y", k.k_y), ("k_z", k.k_z)])?;
            }
            if k.alpha == 0.0 {
                return Err(Error::PatternMismatch { case: case.id().into(), reason: "requires alpha != 0".into() });
            }
            let betas = [k.beta_x, k.beta_y, k.beta_z];
            if let Some(i) = (0..3).find(|&i| k.alpha * betas[i] < 0.0) {
                return Err(no_root(
                    case,
                    format!(
                        "alpha*beta must be >= 0 for every axis; axis {} has alpha*beta = {}",
                        ["x", "y", "z"][i],
                        k.alpha * betas[i]
                    ),
                ));
            }
            // with σ = sign(E) = -sign(α) and t = √|E|:
            // t (σδ - 2B) = ħ √(2|α|/m) (2N+3),  B = Σ s_a √(α β_a)
            let b_sum: f64 = (0..3).map(|i| s(i) * (k.alpha * betas[i]).sqrt()).sum();
            let sigma = -k.alpha.signum();
            let denom = sigma * k.delta - 2.0 * b_sum;
            if !(denom > 0.0) {
                return Err(no_root(
                    case,
                    format!("needs -sign(alpha)*delta - 2*sum sqrt(alpha*beta) > 0, got {denom}"),
                ));
            }
            let q = 2.0 * nf + 3.0;
            vec![-2.0 * k.alpha * hbar * hbar * q * q / (m * (k.delta + 2.0 * k.alpha.signum() * b_sum).powi(2))]
        }
        (SpaceSpec::KI(k), SpecialCase::KiCase2) => {
            require_zero(case, &[("alpha", k.alpha), ("k_x", k.k_x), ("k_y", k.k_y), ("k_z", k.k_z)])?;
            let betas = [k.beta_x, k.beta_y, k.beta_z];
            let nonzero: Vec<f64> = betas.iter().copied().filter(|b| *b != 0.0).collect();
            if nonzero.is_empty() {
                return Err(Error::PatternMismatch {
                    case: case.id().into(),
                    reason: "requires a nonzero beta (use ki-3 otherwise)".into(),
                });
            }
            if nonzero.iter().any(|b| b.signum() != nonzero[0].signum()) {
                return Err(no_root(case, "the betas must share one sign for real k_eff"));
            }
            // E = σ t², σ = -sign(β):  σδ t² - |ω|√(2m) β̃ t - ħ|ω|(2N+3) = 0
            let sigma = -nonzero[0].signum();
            let beta_t: f64 = (0..3).map(|i| s(i) * betas[i].abs().sqrt()).sum();
            let w = k.omega.abs();
            let ts = positive_quadratic_roots(
                sigma * k.delta,
                -w * (2.0 * m).sqrt() * beta_t,
                -hbar * w * (2.0 * nf + 3.0),
            )?;
            ts.into_iter().map(|t| sigma * t * t).collect()
        }
        (SpaceSpec::KI(k), SpecialCase::KiCase3 | SpecialCase::KiCase4) => {
            if case == SpecialCase::KiCase3 {
                require_zero(
                    case,
                    &[
                        ("alpha", k.alpha),
                        ("beta_x", k.beta_x),
                        ("beta_y", k.beta_y),
                        ("beta_z", k.beta_z),
                        ("k_x", k.k_x),
                        ("k_y", k.k_y),
                        ("k_z", k.k_z),
                    ],
                )?;
            } else {
                require_zero(
                    case,
                    &[("alpha", k.alpha), ("beta_x", k.beta_x), ("beta_y", k.beta_y), ("beta_z", k.beta_z)],
                )?;
            }
            if k.delta == 0.0 {
                return Err(no_root(case, "delta = 0"));
            }
            let ks = s(0) * k.k_x.abs() + s(1) * k.k_y.abs() + s(2) * k.k_z.abs();
            vec![hbar * k.omega.abs() * (2.0 * nf + ks + 3.0) / k.delta]
        }
        (SpaceSpec::KII(k), SpecialCase::KiiFlat) => {
            require_zero(case, &[("alpha", k.alpha), ("beta_x", k.beta_x), ("beta_y", k.beta_y)])?;
            if k.delta == 0.0 {
                return Err(no_root(case, "delta = 0"));
            }
            let ks = s(0) * k.k_x.abs() + s(1) * k.k_y.abs();
            vec![hbar * k.omega.abs() * (nf + ks + 2.5) / k.delta]
        }
        (SpaceSpec::KII(k), SpecialCase::KiiZero) => {
            require_zero(
                case,
                &[("omega", k.omega), ("k_x", k.k_x), ("k_y", k.k_y), ("beta_x", k.beta_x), ("beta_y", k.beta_y)],
            )?;
            if k.alpha == 0.0 {
                return Err(Error::PatternMismatch { case: case.id().into(), reason: "requires alpha != 0".into() });
            }
            if !(-k.alpha * k.delta > 0.0) {
                return Err(no_root(case, format!("needs alpha*delta < 0, got {}", k.alpha * k.delta)));
            }
            let q = nf + 2.5;
            vec![-2.0 * k.alpha * hbar * hbar * q * q / (m * k.delta * k.delta)]
        }
        (SpaceSpec::KIII(k), SpecialCase::KiiiCase1) => {
            require_zero(case, &[("alpha1", k.alpha1), ("beta", k.beta), ("gamma", k.gamma)])?;
            let nn = nf + s(0) * k.k1.abs() + s(1) * k.k2.abs();
            if !(k.alpha2 > 0.0) {
                return Err(no_root(case, format!("needs alpha2 > 0, got {}", k.alpha2)));
            }
            if !(nn > 0.0) || k.delta == 0.0 {
                return Err(no_root(case, "needs N + k1 + k2 > 0 and delta != 0"));
            }
            vec![-m * k.alpha2 * k.alpha2 / (2.0 * k.delta * hbar * hbar * nn * nn)]
        }
        (SpaceSpec::KIII(k), SpecialCase::KiiiCase2 | SpecialCase::KiiiCase3) => {
            if case == SpecialCase::KiiiCase2 {
                require_zero(case, &[("k1", k.k1), ("k2", k.k2), ("alpha2", k.alpha2)])?;
            } else {
                require_zero(case, &[("k1", k.k1), ("k2", k.k2)])?;
            }
            if !(k.delta > 0.0) {
                return Err(no_root(case, format!("needs delta > 0, got {}", k.delta)));
            }
            if k.beta < 0.0 || k.gamma < 0.0 {
                return Err(no_root(case, "needs beta, gamma >= 0 for real k_eff at E < 0"));
            }
            // E = -ħ²u²/(2m): c u² - N u + mα₂/(ħ²√δ) = 0, c = α₁/(2√δ) - β̃
            let sd = k.delta.sqrt();
            let c = k.alpha1 / (2.0 * sd) - (s(0) * k.beta.sqrt() + s(1) * k.gamma.sqrt());
            let us = positive_quadratic_roots(c, -nf, m * k.alpha2 / (hbar * hbar * sd))?;
            if us.is_empty() {
                return Err(no_root(case, format!("no positive root (c = {c})")));
            }
            us.into_iter().map(|u| -hbar * hbar * u * u / (2.0 * m)).collect()
        }
        _ => unreachable!("kind checked above"),
    };
    if energies.is_empty() {
        return Err(no_root(case, "no sign-consistent root"));
    }
    let windows = validity_windows(spec, qn)?;
    Ok(energies
        .into_iter()
        .map(|e| {
            let window = windows.iter().find(|w| w.contains(e));
            EnergyLevel {
                kind: spec.kind(),
                n,
                qn: *qn,
                branch_signs: signs,
                energy: e,
                residual: window.map_or(f64::NAN, |_| quantization_residual(spec, qn, signs, e).unwrap_or(f64::NAN)),
                window_id: window.map(|w| w.id),
                provenance: Provenance::ClosedForm,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumType {
    DiscreteCandidates,
    ContinuousOnly,
}

pub fn spectrum_type(spec: &SpaceSpec) -> SpectrumType {
    match spec.kind() {
        SpaceKind::KI | SpaceKind::KII | SpaceKind::KIII => SpectrumType::DiscreteCandidates,
        SpaceKind::KIV | SpaceKind::KV => SpectrumType::ContinuousOnly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{KoenigsCentrifugal, KoenigsI, KoenigsII, KoenigsIII};

    fn plus() -> BranchSigns {
        BranchSigns::default()
    }

    fn polar(n: u32) -> QuantumNumbers {
        QuantumNumbers::Polar { n_r: n, n_theta: 0, n_phi: 0 }
    }

    fn flat_ki() -> SpaceSpec {
        SpaceSpec::KI(KoenigsI { delta: 1.0, omega: 1.0, ..Default::default() })
    }

    fn coulomb() -> SpaceSpec {
        SpaceSpec::KIII(KoenigsIII { alpha2: 1.0, delta: 1.0, ..Default::default() })
    }

    #[test]
    fn aggregate_conventions() {
        let q = QuantumNumbers::Cartesian { n_x: 1, n_y: 2, n_z: 3 };
        assert_eq!(q.aggregate(SpaceKind::KI).unwrap(), 6);
        assert_eq!(q.aggregate(SpaceKind::KII).unwrap(), 9);
        assert!(q.aggregate(SpaceKind::KIII).is_err());
        let c = QuantumNumbers::Coulomb { n_r: 1, l: 2, n_phi: 1 };
        assert_eq!(c.aggregate(SpaceKind::KIII).unwrap(), 7);
        for n in 0..8 {
            let k2 = QuantumNumbers::canonical(SpaceKind::KII, n).unwrap();
            assert_eq!(k2.aggregate(SpaceKind::KII).unwrap(), n);
        }
        assert!(QuantumNumbers::canonical(SpaceKind::KIII, 1).is_none());
    }

    #[test]
    fn branch_sign_parsing() {
        let b: BranchSigns = "k1=+,k2=-".parse().unwrap();
        assert_eq!(b.0, [Sign::Plus, Sign::Minus, Sign::Plus]);
        let c: BranchSigns = "kz=-".parse().unwrap();
        assert_eq!(c.get(2), -1.0);
        assert!("k4=+".parse::<BranchSigns>().is_err());
        assert!("k1=*".parse::<BranchSigns>().is_err());
        assert_eq!(b.to_string().parse::<BranchSigns>().unwrap(), b);
        assert_eq!(b.describe(SpaceKind::KIII), "k1=+;k2=-");
    }

    #[test]
    fn index_examples() {
        let s = SpaceSpec::KI(KoenigsI { omega: 1.0, k_x: 2.0, delta: 1.0, ..Default::default() });
        let idx = effective_indices(&s, &polar(0), plus(), 10.0);
        assert_eq!(idx.omega_eff.unwrap().value, 1.0);
        assert_eq!(idx.k_eff[0].value, 2.0);
        let s0 = SpaceSpec::KI(KoenigsI { alpha: -1.0, delta: 1.0, ..Default::default() });
        assert!((effective_indices(&s0, &polar(0), plus(), 18.0).omega_eff.unwrap().value - 6.0).abs() < 1e-15);
        let k = effective_indices(&coulomb(), &QuantumNumbers::Coulomb { n_r: 0, l: 0, n_phi: 0 }, plus(), -0.125);
        assert!((k.kappa.unwrap().value - 2.0).abs() < 1e-15);
        let imag = effective_indices(&s0, &polar(0), plus(), -1.0);
        assert!(!imag.all_real());
    }

    #[test]
    fn kv_linear_index() {
        let s = SpaceSpec::KV(KoenigsCentrifugal { gamma: 0.5, k3: 1.0, ..Default::default() });
        let idx = effective_indices(&s, &polar(0), plus(), 3.0);
        assert!((idx.k_eff[2].value - (1.0 - 3.0)).abs() < 1e-15);
        assert!(idx.k_eff[2].real);
    }

    #[test]
    fn window_examples() {
        let w = validity_windows(&flat_ki(), &polar(0)).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].lower.is_infinite() && w[0].upper.is_infinite());
        let s0 = SpaceSpec::KI(KoenigsI { alpha: -1.0, delta: 1.0, ..Default::default() });
        let w = validity_windows(&s0, &polar(0)).unwrap();
        assert_eq!((w[0].lower, w[0].upper), (0.0, f64::INFINITY));
        let q = QuantumNumbers::Coulomb { n_r: 0, l: 0, n_phi: 0 };
        let w = validity_windows(&coulomb(), &q).unwrap();
        assert_eq!((w[0].lower, w[0].upper), (f64::NEG_INFINITY, 0.0));
        let kiv = SpaceSpec::KIV(KoenigsCentrifugal::default());
        assert!(matches!(validity_windows(&kiv, &polar(0)), Err(Error::Kind { .. })));
    }

    #[test]
    fn residual_examples() {
        let s = SpaceSpec::KI(KoenigsI { delta: 0.5, omega: 2.0, ..Default::default() });
        assert_eq!(quantization_residual(&s, &polar(0), plus(), 12.0).unwrap(), 0.0);
        let q = QuantumNumbers::Coulomb { n_r: 0, l: 0, n_phi: 0 };
        assert!(quantization_residual(&coulomb(), &q, plus(), -0.125).unwrap().abs() < 1e-15);
        let kii = SpaceSpec::KII(KoenigsII { omega: 1.0, delta: 1.0, ..Default::default() });
        let z = QuantumNumbers::Cartesian { n_x: 0, n_y: 0, n_z: 0 };
        assert_eq!(quantization_residual(&kii, &z, plus(), 2.5).unwrap(), 0.0);
        assert!(matches!(quantization_residual(&coulomb(), &q, plus(), 0.1), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn solve_flat_oscillator() {
        let cfg = SolverConfig::default();
        for n in 0..5 {
            let out = solve_levels(&flat_ki(), &polar(n), &cfg).unwrap();
            assert_eq!(out.levels.len(), 1, "{out:?}");
            let e = out.levels[0].energy;
            assert!((e - (2 * n + 3) as f64).abs() < 1e-12 * e);
        }
    }

    #[test]
    fn solve_ki_zero_picks_sign_consistent_root() {
        let s = SpaceSpec::KI(KoenigsI { alpha: -1.0, delta: 1.0, ..Default::default() });
        let out = solve_levels(&s, &polar(0), &SolverConfig::default()).unwrap();
        assert_eq!(out.levels.len(), 1);
        assert!((out.levels[0].energy - 18.0).abs() < 1e-10);
        let cf = closed_form_special(&s, SpecialCase::KiZero, &polar(0), plus()).unwrap();
        assert!((cf[0].energy - 18.0).abs() < 1e-12);
        // α > 0 with δ > 0 has no sign-consistent root
        let pos = SpaceSpec::KI(KoenigsI { alpha: 1.0, delta: 1.0, ..Default::default() });
        assert!(solve_levels(&pos, &polar(0), &SolverConfig::default()).unwrap().levels.is_empty());
        assert!(matches!(
            closed_form_special(&pos, SpecialCase::KiZero, &polar(0), plus()),
            Err(Error::NoConsistentRoot { .. })
        ));
    }

    #[test]
    fn solve_coulomb() {
        for (n, want) in [(2u32, -1.0 / 8.0), (3, -1.0 / 18.0), (4, -1.0 / 32.0)] {
            let q = QuantumNumbers::canonical(SpaceKind::KIII, n).unwrap();
            let out = solve_levels(&coulomb(), &q, &SolverConfig::default()).unwrap();
            assert_eq!(out.levels.len(), 1);
            assert!((out.levels[0].energy - want).abs() < 1e-12 * want.abs());
        }
    }

    #[test]
    fn delta_zero_is_diagnosed() {
        let s = SpaceSpec::KI(KoenigsI { omega: 1.0, ..Default::default() });
        let out = solve_levels(&s, &polar(0), &SolverConfig::default()).unwrap();
        assert!(out.levels.is_empty());
        assert!(out.diagnostics[0].contains("delta = 0"));
    }

    #[test]
    fn closed_form_examples() {
        let s = SpaceSpec::KI(KoenigsI { delta: 0.5, omega: 2.0, ..Default::default() });
        let e = closed_form_special(&s, SpecialCase::KiCase3, &polar(1), plus()).unwrap();
        assert_eq!(e[0].energy, 20.0);
        let c = SpaceSpec::KIII(KoenigsIII { alpha2: 2.0, delta: 1.0, ..Default::default() });
        let q = QuantumNumbers::canonical(SpaceKind::KIII, 2).unwrap();
        let e = closed_form_special(&c, SpecialCase::KiiiCase1, &q, plus()).unwrap();
        assert!((e[0].energy + 0.5).abs() < 1e-15);
        assert!(matches!(
            closed_form_special(&flat_ki(), SpecialCase::KiCase1, &polar(0), plus()),
            Err(Error::PatternMismatch { .. })
        ));
        let bad = SpaceSpec::KI(KoenigsI { alpha: 1.0, beta_x: -1.0, delta: -1.0, ..Default::default() });
        assert!(matches!(
            closed_form_special(&bad, SpecialCase::KiCase1, &polar(0), plus()),
            Err(Error::NoConsistentRoot { .. })
        ));
    }

    #[test]
    fn closed_forms_agree_with_solver() {
        let cfg = SolverConfig::default();
        let cases: Vec<(SpaceSpec, SpecialCase)> = vec![
            (
                SpaceSpec::KI(KoenigsI { alpha: -0.5, beta_x: -0.05, beta_z: -0.02, delta: 1.0, ..Default::default() }),
                SpecialCase::KiCase1,
            ),
            (
                SpaceSpec::KI(KoenigsI { omega: 1.5, beta_x: 0.3, beta_y: 0.1, delta: 1.0, ..Default::default() }),
                SpecialCase::KiCase2,
            ),
            (
                SpaceSpec::KI(KoenigsI { omega: 1.5, beta_x: -0.3, delta: 2.0, ..Default::default() }),
                SpecialCase::KiCase2,
            ),
            (
                SpaceSpec::KI(KoenigsI { omega: 1.5, k_x: 0.3, k_z: 1.2, delta: 2.0, ..Default::default() }),
                SpecialCase::KiCase4,
            ),
            (
                SpaceSpec::KII(KoenigsII { omega: 0.7, k_y: 0.4, delta: 1.5, ..Default::default() }),
                SpecialCase::KiiFlat,
            ),
            (SpaceSpec::KII(KoenigsII { alpha: -0.3, delta: 1.0, ..Default::default() }), SpecialCase::KiiZero),
            (
                SpaceSpec::KIII(KoenigsIII { alpha2: 1.3, delta: 0.8, k1: 0.5, ..Default::default() }),
                SpecialCase::KiiiCase1,
            ),
            (
                SpaceSpec::KIII(KoenigsIII { alpha1: 3.0, beta: 0.2, gamma: 0.1, delta: 1.0, ..Default::default() }),
                SpecialCase::KiiiCase2,
            ),
            (
                SpaceSpec::KIII(KoenigsIII { alpha1: 1.0, alpha2: 1.0, beta: 0.05, delta: 1.0, ..Default::default() }),
                SpecialCase::KiiiCase3,
            ),
        ];
        for (spec, case) in cases {
            for n in 0..4 {
                let Some(q) = QuantumNumbers::canonical(spec.kind(), n + 2) else { continue };
                let closed = match closed_form_special(&spec, case, &q, plus()) {
                    Ok(v) => v,
                    Err(Error::ComplexEnergy { .. }) => continue,
                    Err(e) => panic!("{case}: {e}"),
                };
                let solved = solve_levels(&spec, &q, &cfg).unwrap().levels;
                for c in &closed {
                    assert!(c.residual.abs() < 1e-9, "{case} N={}: residual {}", n + 2, c.residual);
                    assert!(
                        solved.iter().any(|s| (s.energy - c.energy).abs() <= 1e-9 * c.energy.abs()),
                        "{case} N={}: closed {} not among {:?}",
                        n + 2,
                        c.energy,
                        solved.iter().map(|s| s.energy).collect::<Vec<_>>()
                    );
                }
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(spectrum_type(&flat_ki()), SpectrumType::DiscreteCandidates);
        assert_eq!(spectrum_type(&SpaceSpec::KIV(Default::default())), SpectrumType::ContinuousOnly);
        assert_eq!(spectrum_type(&SpaceSpec::KV(Default::default())), SpectrumType::ContinuousOnly);
    }

    #[test]
    fn quantum_numbers_json() {
        let q: QuantumNumbers = serde_json::from_str(r#"{"scheme":"polar","n_r":1,"n_theta":0,"n_phi":2}"#).unwrap();
        assert_eq!(q, QuantumNumbers::Polar { n_r: 1, n_theta: 0, n_phi: 2 });
        assert!(serde_json::from_str::<QuantumNumbers>(r#"{"scheme":"polar","n_r":1,"n_theta":0,"n_phi":2,"x":1}"#)
            .is_err());
    }
}
