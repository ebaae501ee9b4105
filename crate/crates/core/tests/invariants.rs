use std::f64::consts::PI;

use koenigs_core::quadrature::{gauss_jacobi, gauss_laguerre};
use koenigs_core::spaces::{
    delta_v_split, delta_v_total, h_decomposition, metric_factor, KoenigsCentrifugal, KoenigsI, KoenigsII, KoenigsIII,
};
use koenigs_core::specialfn::{count_sign_changes, hermite, poschl_teller_wf, radial_ho_wf};
use koenigs_core::spectra::{
    effective_indices, quantization_residual, solve_levels, validity_windows, BranchSigns, QuantumNumbers, SolverConfig,
};
use koenigs_core::wavefunctions::{radial_node_count, BoundState, Chart};
use koenigs_core::{Axis, Derivatives, Point3, SpaceKind, SpaceSpec, UnitScalars};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = SpaceSpec> {
    let c = -2.0..2.0f64;
    let pos = 0.1..2.0f64;
    prop_oneof![
        (c.clone(), pos.clone(), pos.clone(), pos.clone(), 0.5..3.0f64).prop_map(|(alpha, bx, by, bz, delta)| {
            SpaceSpec::KI(KoenigsI { alpha, beta_x: bx, beta_y: by, beta_z: bz, delta, ..Default::default() })
        }),
        (c.clone(), pos.clone(), pos.clone(), 0.5..3.0f64).prop_map(|(alpha, bx, by, delta)| {
            SpaceSpec::KII(KoenigsII { alpha, beta_x: bx, beta_y: by, delta, ..Default::default() })
        }),
        (c.clone(), pos.clone(), pos.clone(), 0.5..3.0f64).prop_map(|(a1, beta, gamma, delta)| {
            SpaceSpec::KIII(KoenigsIII { alpha1: a1, beta, gamma, delta, ..Default::default() })
        }),
        (pos.clone(), pos.clone(), pos.clone(), 1.0..3.0f64).prop_map(|(alpha, beta, gamma, delta)| {
            SpaceSpec::KIV(KoenigsCentrifugal { alpha, beta, gamma, delta, ..Default::default() })
        }),
        (pos.clone(), pos.clone(), pos, 1.0..3.0f64).prop_map(|(alpha, beta, gamma, delta)| {
            SpaceSpec::KV(KoenigsCentrifugal { alpha, beta, gamma, delta, ..Default::default() })
        }),
    ]
}

fn point_strategy() -> impl Strategy<Value = Point3> {
    (0.2..2.0f64, 0.2..2.0f64, 0.2..2.0f64, any::<[bool; 3]>()).prop_map(|(x, y, z, s)| {
        let sg = |b: bool| if b { -1.0 } else { 1.0 };
        // K_IV/K_V need y > 0 only through y², but x/ρ must stay away from -1
        Point3::new(x, sg(s[1]) * y, sg(s[2]) * z)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_recomposes_total(spec in spec_strategy(), p in point_strategy()) {
        prop_assume!(metric_factor(&spec, p).is_ok());
        if let Ok(split) = delta_v_split(&spec, p) {
            let total = delta_v_total(&spec, p, Derivatives::Analytic).unwrap();
            let sum = split.dv1 + split.dv2;
            prop_assert!((sum - total).abs() <= 1e-9 * total.abs().max(1e-12), "{sum} vs {total}");
        }
    }

    #[test]
    fn h_squares_back_to_f(spec in spec_strategy(), p in point_strategy()) {
        prop_assume!(metric_factor(&spec, p).is_ok());
        let f = metric_factor(&spec, p).unwrap();
        for axis in Axis::ALL {
            let h = h_decomposition(&spec, p, axis).unwrap();
            let x = p.coord(axis);
            prop_assert!((h * h - f * x * x).abs() <= 1e-12 * f * x * x);
        }
    }

    #[test]
    fn analytic_matches_numeric(spec in spec_strategy(), p in point_strategy()) {
        prop_assume!(metric_factor(&spec, p).is_ok());
        let a = delta_v_total(&spec, p, Derivatives::Analytic).unwrap();
        let n = delta_v_total(&spec, p, Derivatives::Numeric).unwrap();
        prop_assert!((a - n).abs() <= 1e-6 * a.abs().max(1e-8), "{a} vs {n}");
    }

    #[test]
    fn hbar_scaling(c in 0.2..5.0f64, p in point_strategy(), alpha in 0.1..2.0f64, beta in 0.1..2.0f64) {
        let spec = SpaceSpec::KI(KoenigsI { alpha, beta_z: beta, delta: 1.0, ..Default::default() });
        let scaled = spec.with_units(UnitScalars { hbar: c, mass: 1.0 });
        let a = delta_v_total(&spec, p, Derivatives::Analytic).unwrap();
        let b = delta_v_total(&scaled, p, Derivatives::Analytic).unwrap();
        prop_assert!((b - c * c * a).abs() <= 1e-12 * b.abs().max(1e-300));
    }

    #[test]
    fn rho_node_count(n in 0usize..=8, lambda in -0.9..5.0f64) {
        let units = UnitScalars::default();
        let vals: Vec<f64> = (1..4000)
            .map(|i| radial_ho_wf(n, lambda, 1.0, i as f64 * 4e-3, units).unwrap())
            .collect();
        prop_assert_eq!(count_sign_changes(&vals), n);
    }
}

fn window_specs() -> Vec<(SpaceSpec, QuantumNumbers)> {
    let polar = QuantumNumbers::Polar { n_r: 1, n_theta: 0, n_phi: 1 };
    vec![
        (SpaceSpec::KI(KoenigsI { delta: 1.0, omega: 1.0, ..Default::default() }), polar),
        (SpaceSpec::KI(KoenigsI { alpha: -1.0, delta: 1.0, ..Default::default() }), polar),
        (
            SpaceSpec::KI(KoenigsI {
                alpha: -0.3,
                beta_x: 0.1,
                delta: 1.0,
                omega: 1.0,
                k_x: 0.5,
                k_y: 0.5,
                k_z: 0.5,
                ..Default::default()
            }),
            polar,
        ),
        (
            SpaceSpec::KII(KoenigsII { alpha: 0.4, beta_x: -0.2, delta: 1.0, omega: 1.0, ..Default::default() }),
            QuantumNumbers::Cylindrical { n_rho: 1, n_phi: 0, n_z: 1 },
        ),
        (
            SpaceSpec::KIII(KoenigsIII {
                alpha1: 0.3,
                beta: 0.2,
                gamma: -0.1,
                delta: 1.0,
                alpha2: 1.0,
                k1: 0.5,
                k2: 1.0,
                ..Default::default()
            }),
            QuantumNumbers::Coulomb { n_r: 1, l: 1, n_phi: 0 },
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn windows_keep_indices_real(u in 0.0..1.0f64, case in 0usize..5) {
        let (spec, qn) = window_specs()[case];
        for w in validity_windows(&spec, &qn).unwrap() {
            let lo = w.lower.max(-1e3);
            let hi = w.upper.min(1e3);
            let e = lo + (hi - lo) * (1e-9 + u * (1.0 - 2e-9));
            prop_assume!(e > w.lower && e < w.upper);
            prop_assert!(quantization_residual(&spec, &qn, BranchSigns::default(), e).is_ok());
            prop_assert!(effective_indices(&spec, &qn, BranchSigns::default(), e).all_real());
            if spec.kind() == SpaceKind::KIII {
                prop_assert!(spec.delta() * e < 0.0);
            }
        }
    }
}

#[test]
fn roots_satisfy_condition_inside_window() {
    for (spec, qn) in window_specs() {
        let out = solve_levels(&spec, &qn, &SolverConfig::default()).unwrap();
        let windows = validity_windows(&spec, &qn).unwrap();
        for level in &out.levels {
            let w = &windows[level.window_id.unwrap()];
            assert!(level.energy > w.lower && level.energy < w.upper);
            let r = quantization_residual(&spec, &qn, level.branch_signs, level.energy).unwrap();
            assert!(r.abs() < 1e-11 * level.energy.abs().max(1.0), "{spec:?}: {r}");
        }
    }
}

#[test]
fn flat_levels_increase_with_n() {
    let spec = SpaceSpec::KI(KoenigsI { delta: 1.0, omega: 1.0, ..Default::default() });
    let energies: Vec<f64> = (0..8)
        .map(|n| {
            let qn = QuantumNumbers::canonical(SpaceKind::KI, n).unwrap();
            solve_levels(&spec, &qn, &SolverConfig::default()).unwrap().levels[0].energy
        })
        .collect();
    assert!(energies.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn poschl_teller_orthonormal() {
    // x = arccos(t)/2 turns the overlap into a Gauss–Jacobi integral in t
    for &a in &[-0.4, 0.5, 1.0, 2.5] {
        for &b in &[-0.4, 0.5, 1.0, 2.5] {
            let rule = gauss_jacobi(128, a, b).unwrap();
            for n in 0..=6 {
                for m in n..=6 {
                    let s: f64 = rule
                        .iter()
                        .map(|&(t, w)| {
                            let x = 0.5 * t.acos();
                            let jac = 1.0 / (2.0 * (1.0 - t * t).sqrt() * (1.0 - t).powf(a) * (1.0 + t).powf(b));
                            w * poschl_teller_wf(n, a, b, x).unwrap() * poschl_teller_wf(m, a, b, x).unwrap() * jac
                        })
                        .sum();
                    let want = if n == m { 1.0 } else { 0.0 };
                    assert!((s - want).abs() < 1e-8, "({a},{b}) n={n} m={m}: {s}");
                }
            }
        }
    }
}

#[test]
fn radial_oscillator_orthonormal() {
    let units = UnitScalars::default();
    for &lambda in &[-0.4, 0.5, 1.0, 2.5] {
        let rule = gauss_laguerre(128, lambda).unwrap();
        for n in 0..=6 {
            for m in n..=6 {
                let s: f64 = rule
                    .iter()
                    .map(|&(z, w)| {
                        let r = z.sqrt();
                        w * radial_ho_wf(n, lambda, 1.0, r, units).unwrap()
                            * radial_ho_wf(m, lambda, 1.0, r, units).unwrap()
                            / (2.0 * r * z.powf(lambda) * (-z).exp())
                    })
                    .sum();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-8, "λ={lambda} n={n} m={m}: {s}");
            }
        }
    }
}

fn hermite_function(n: usize, x: f64) -> f64 {
    let norm = (2f64.powi(n as i32) * (1..=n).map(|k| k as f64).product::<f64>() * PI.sqrt()).sqrt();
    hermite(n, x).unwrap() * (-0.5 * x * x).exp() / norm
}

#[test]
fn flat_state_matches_textbook_oscillator() {
    // k = 1/2 makes each radial factor an odd oscillator eigenfunction,
    // with the Laguerre sign convention (-1)^n
    let spec = SpaceSpec::KI(KoenigsI { delta: 1.0, omega: 1.0, k_x: 0.5, k_y: 0.5, k_z: 0.5, ..Default::default() });
    let qn = QuantumNumbers::Cartesian { n_x: 2, n_y: 0, n_z: 1 };
    let level = solve_levels(&spec, &qn, &SolverConfig::default()).unwrap().levels.remove(0);
    assert!((level.energy - 10.5).abs() < 1e-12);
    let state = BoundState::new(&spec, &level, Chart::Cartesian).unwrap();
    for &(x, y, z) in &[(0.3, 0.7, 1.1), (1.4, 0.2, 0.9), (2.2, 1.5, 0.4)] {
        let want = -8f64.sqrt() * hermite_function(5, x) * hermite_function(1, y) * hermite_function(3, z);
        let got = state.evaluate(Point3::new(x, y, z)).unwrap();
        assert!((got - want).abs() < 1e-10 * want.abs().max(1e-3), "{got} vs {want}");
    }
}

#[test]
fn radial_nodes_follow_labels() {
    let spec =
        SpaceSpec::KI(KoenigsI { alpha: 0.02, beta_x: 0.1, delta: 1.0, omega: 1.0, k_x: 3.0, ..Default::default() });
    for n_r in 0..=5 {
        let qn = QuantumNumbers::Polar { n_r, n_theta: 1, n_phi: 2 };
        let levels = solve_levels(&spec, &qn, &SolverConfig::default()).unwrap().levels;
        assert!(!levels.is_empty(), "{qn:?}");
        for level in levels {
            let state = BoundState::new(&spec, &level, Chart::Spherical).unwrap();
            assert_eq!(radial_node_count(&state).unwrap(), n_r as usize);
        }
    }
}

#[test]
fn json_round_trip() {
    for (spec, _) in window_specs() {
        let text = serde_json::to_string(&spec).unwrap();
        let back: SpaceSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
