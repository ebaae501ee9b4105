//! Subcommand implementations. Each returns the process exit code.

use std::path::Path;

use koenigs_core::oracle::{compare, self_consistent_levels, CompareReport, GridPolicy};
use koenigs_core::spaces::{delta_v_split, delta_v_total, metric_factor};
use koenigs_core::spectra::{
    closed_form_special, solve_levels, spectrum_type, EnergyLevel, QuantumNumbers, SpecialCase, SpectrumType,
};
use koenigs_core::wavefunctions::{default_radial_grid, ode_residual, radial_node_count, BoundState, Chart};
use koenigs_core::{Derivatives, Point3, SpaceSpec, UnitScalars};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{emit, Cell, Table};
use crate::Failure;

pub const OK: u8 = 0;
pub const EMPTY: u8 = 2;
pub const MISMATCH: u8 = 4;

fn describe_units(u: UnitScalars) -> String {
    format!("hbar={} mass={}", u.hbar, u.mass)
}

fn common_meta(t: &mut Table, cfg: &RunConfig) {
    t.meta("kind", cfg.kind());
    t.meta("units", describe_units(cfg.units()));
    t.meta("space", serde_json::to_string(&cfg.space).unwrap_or_default());
}

fn require_discrete(space: &SpaceSpec) -> Result<(), Failure> {
    match spectrum_type(space) {
        SpectrumType::DiscreteCandidates => Ok(()),
        SpectrumType::ContinuousOnly => Err(Failure::continuous(format!(
            "{}: only a continuous spectrum exists, so there are no bound states to compute",
            space.kind()
        ))),
    }
}

fn write(t: &Table, cfg: &RunConfig) -> Result<(), Failure> {
    t.write(cfg.output.format, cfg.output.path.as_deref())
}

fn level_row(level: &EnergyLevel) -> Vec<Cell> {
    vec![
        level.kind.to_string().into(),
        level.n.into(),
        level.qn.labels().into(),
        level.branch_signs.describe(level.kind).into(),
        level.energy.into(),
        level.residual.into(),
        level.window_id.into(),
        level.provenance.to_string().into(),
    ]
}

pub fn solve(cfg: &RunConfig) -> Result<u8, Failure> {
    require_discrete(&cfg.space)?;
    let mut t = Table::new(&["kind", "N", "n_labels", "branch_signs", "energy", "residual", "window_id", "provenance"]);
    common_meta(&mut t, cfg);
    let mut notes = Vec::new();
    for qn in cfg.selected()? {
        let out = solve_levels(&cfg.space, &qn, &cfg.solver)?;
        for level in &out.levels {
            t.push(level_row(level));
        }
        notes.extend(out.diagnostics.into_iter().map(|d| format!("{}: {d}", qn.labels())));
    }
    for n in &notes {
        t.meta("diagnostic", n);
    }
    write(&t, cfg)?;
    if t.rows.is_empty() {
        eprintln!("no bound states found for the selected quantum numbers");
        for n in &notes {
            eprintln!("  {n}");
        }
        return Ok(EMPTY);
    }
    Ok(OK)
}

pub fn special_cases(cfg: &RunConfig, case: Option<&str>) -> Result<u8, Failure> {
    require_discrete(&cfg.space)?;
    let case: SpecialCase = match (case, cfg.special_case) {
        (Some(id), _) => id.parse()?,
        (None, Some(c)) => c,
        (None, None) => {
            let ids: Vec<&str> = SpecialCase::ALL.iter().map(|c| c.id()).collect();
            return Err(Failure::config(format!("no special case given; use --case with one of {}", ids.join(", "))));
        }
    };
    let mut t = Table::new(&["kind", "N", "n_labels", "branch_signs", "closed_form", "solver", "rel_deviation"]);
    common_meta(&mut t, cfg);
    t.meta("case", case.id());
    let signs = cfg.solver.branch_signs;
    for qn in cfg.selected()? {
        let closed = closed_form_special(&cfg.space, case, &qn, signs)?;
        let solved = solve_levels(&cfg.space, &qn, &cfg.solver)?.levels;
        for c in closed {
            let nearest =
                solved.iter().map(|l| l.energy).min_by(|a, b| (a - c.energy).abs().total_cmp(&(b - c.energy).abs()));
            let dev = nearest.map_or(f64::NAN, |e| (e - c.energy).abs() / c.energy.abs());
            t.push(vec![
                c.kind.to_string().into(),
                c.n.into(),
                c.qn.labels().into(),
                c.branch_signs.describe(c.kind).into(),
                c.energy.into(),
                nearest.unwrap_or(f64::NAN).into(),
                dev.into(),
            ]);
        }
    }
    write(&t, cfg)?;
    if t.rows.is_empty() {
        eprintln!("the closed form gives no levels for the selected quantum numbers");
        return Ok(EMPTY);
    }
    Ok(OK)
}

fn read_points(path: &Path) -> Result<Vec<[f64; 3]>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let nums: Result<Vec<f64>, _> = fields.iter().map(|s| s.parse::<f64>()).collect();
        match nums {
            Ok(v) if v.len() == 3 => pts.push([v[0], v[1], v[2]]),
            // a header row such as "x,y,z"
            Err(_) if pts.is_empty() && i == 0 => continue,
            _ => return Err(Failure::config(format!("{}:{}: expected three numbers x, y, z", path.display(), i + 1))),
        }
    }
    Ok(pts)
}

pub fn deltav(cfg: &RunConfig, points_file: Option<&Path>) -> Result<u8, Failure> {
    let points = match points_file {
        Some(p) => read_points(p)?,
        None => cfg.deltav.points.clone(),
    };
    if points.is_empty() {
        return Err(Failure::config("no points given; use --points <file> or deltav.points in the config"));
    }
    let mut t =
        Table::new(&["x", "y", "z", "f", "dv1", "dv2", "dv_total_analytic", "dv_total_numeric", "rel_diff", "error"]);
    common_meta(&mut t, cfg);
    for [x, y, z] in points {
        let p = Point3::new(x, y, z);
        let row = (|| -> koenigs_core::Result<[f64; 6]> {
            let f = metric_factor(&cfg.space, p)?;
            let a = delta_v_total(&cfg.space, p, Derivatives::Analytic)?;
            let n = delta_v_total(&cfg.space, p, Derivatives::Numeric)?;
            // the split needs every coordinate off its axis
            let (d1, d2) = delta_v_split(&cfg.space, p).map_or((f64::NAN, f64::NAN), |s| (s.dv1, s.dv2));
            let diff = if a == n { 0.0 } else { (a - n).abs() / a.abs().max(n.abs()) };
            Ok([f, d1, d2, a, n, diff])
        })();
        let mut cells: Vec<Cell> = vec![x.into(), y.into(), z.into()];
        match row {
            Ok(v) => {
                cells.extend(v.iter().map(|&x| Cell::Num(x)));
                cells.push(Cell::Empty);
            }
            Err(e) => {
                cells.extend((0..6).map(|_| Cell::Num(f64::NAN)));
                cells.push(e.to_string().into());
            }
        }
        t.push(cells);
    }
    write(&t, cfg)?;
    Ok(OK)
}

#[derive(Serialize)]
struct VerifyItem {
    n: u32,
    labels: String,
    solver: Vec<f64>,
    oracle: Vec<f64>,
    comparison: CompareReport,
}

#[derive(Serialize)]
struct VerifyReport {
    koenigs: &'static str,
    kind: String,
    units: UnitScalars,
    space: SpaceSpec,
    grid: GridPolicy,
    rel_tol: f64,
    all_matched: bool,
    max_deviation: f64,
    items: Vec<VerifyItem>,
}

pub fn verify(cfg: &RunConfig) -> Result<u8, Failure> {
    require_discrete(&cfg.space)?;
    let mut items = Vec::new();
    for qn in cfg.selected()? {
        let solver = solve_levels(&cfg.space, &qn, &cfg.solver)?.levels;
        let oracle = self_consistent_levels(&cfg.space, &qn, &cfg.oracle)?;
        let comparison = compare(&solver, &oracle, cfg.verify.rel_tol);
        items.push(VerifyItem {
            n: qn.aggregate(cfg.kind())?,
            labels: qn.labels(),
            solver: solver.iter().map(|l| l.energy).collect(),
            oracle: oracle.iter().map(|l| l.energy).collect(),
            comparison,
        });
    }
    let all_matched = items.iter().all(|i| i.comparison.all_matched());
    let report = VerifyReport {
        koenigs: env!("CARGO_PKG_VERSION"),
        kind: cfg.kind().to_string(),
        units: cfg.units(),
        space: cfg.space,
        grid: cfg.oracle.grid,
        rel_tol: cfg.verify.rel_tol,
        all_matched,
        max_deviation: items.iter().map(|i| i.comparison.max_deviation).fold(0.0, f64::max),
        items,
    };
    let mut bytes = serde_json::to_vec_pretty(&report).map_err(Failure::io)?;
    bytes.push(b'\n');
    emit(&bytes, cfg.output.path.as_deref())?;
    if !all_matched {
        eprintln!("solver and oracle disagree beyond rel_tol = {:e}", cfg.verify.rel_tol);
        return Ok(MISMATCH);
    }
    Ok(OK)
}

pub fn wavefunction(cfg: &RunConfig, level: Option<u32>) -> Result<u8, Failure> {
    require_discrete(&cfg.space)?;
    let wc = &cfg.wavefunction;
    let kind = cfg.kind();
    let qn: QuantumNumbers = match (level, wc.labels, wc.n) {
        (Some(n), _, _) | (None, None, Some(n)) => QuantumNumbers::canonical(kind, n)
            .ok_or_else(|| Failure::config(format!("no {kind} labels with N = {n}")))?,
        (None, Some(qn), _) => qn,
        (None, None, None) => {
            return Err(Failure::config("select a level with --level, wavefunction.n or wavefunction.labels"))
        }
    };
    let chart = wc.chart.unwrap_or_else(|| Chart::for_labels(&qn));
    let levels = solve_levels(&cfg.space, &qn, &cfg.solver)?.levels;
    let Some(level) = levels.get(wc.root) else {
        eprintln!("no solved level for {} (root index {}, {} roots found)", qn.labels(), wc.root, levels.len());
        return Ok(EMPTY);
    };
    let state = BoundState::new(&cfg.space, level, chart)?;
    let residual = ode_residual(&state, &default_radial_grid(&state))?;
    let nodes = radial_node_count(&state)?;

    let mut t = Table::new(&["r", "x", "y", "z", "psi", "psi_sq", "error"]);
    common_meta(&mut t, cfg);
    t.meta("labels", qn.labels());
    t.meta("chart", chart);
    t.meta("energy", format!("{:.16e}", level.energy));
    t.meta("norm_const", format!("{:.16e}", state.norm_const));
    t.meta("norm_error", format!("{:.3e}", state.norm_error));
    t.meta("ode_residual", format!("{residual:.3e}"));
    t.meta("radial_nodes", nodes);
    if let Some(a) = state.coulomb_scale {
        t.meta("coulomb_scale", format!("{a:.16e}"));
    }
    let s = wc.sampling;
    let norm = s.direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    let dir = s.direction.map(|c| c / norm);
    for i in 0..s.points {
        let r = s.r_min + (s.r_max - s.r_min) * i as f64 / (s.points - 1) as f64;
        let p = Point3::new(r * dir[0], r * dir[1], r * dir[2]);
        let mut row: Vec<Cell> = vec![r.into(), p.x.into(), p.y.into(), p.z.into()];
        match state.evaluate(p) {
            Ok(v) => row.extend([v.into(), (v * v).into(), Cell::Empty]),
            Err(e) => row.extend([Cell::Num(f64::NAN), Cell::Num(f64::NAN), e.to_string().into()]),
        }
        t.push(row);
    }
    write(&t, cfg)?;
    Ok(OK)
}
