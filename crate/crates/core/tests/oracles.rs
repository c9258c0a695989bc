//! Independent routes to the same physical quantities must agree.

use std::f64::consts::FRAC_1_SQRT_2;

use qslt::channels::evolve;
use qslt::cli::config::{parse_config, Axis, ConfigFile};
use qslt::qmatrix::{hermitian_eigenvalues, partial_trace, BasisConvention};
use qslt::spacetime::kruskal_embed_and_trace;
use qslt::{apply_channel, closed_form, physical_state, qslt_ratio, ChannelKind, ChannelSpec, Scenario};

fn grid() -> Vec<Scenario> {
    let mut out = Vec::new();
    for &alpha in &[0.0, 0.25, FRAC_1_SQRT_2, 0.9, 1.0] {
        for &t in &[0.0, 0.5, 1.0, 3.0, 10.0] {
            for &omega in &[0.5, 1.0, 2.0] {
                out.push(Scenario::new(alpha, omega, t).unwrap());
            }
        }
    }
    out
}

#[test]
fn initial_state_from_embedding() {
    for s in grid() {
        let direct = physical_state(&s).unwrap();
        let traced = kruskal_embed_and_trace(&s).unwrap();
        assert!(direct.max_abs_diff(traced.matrix()) < 1e-13, "{s:?}");
    }
}

#[test]
fn channel_leaves_qubit_c_alone() {
    // Tracing out A and B commutes with noise acting only on A and B.
    for s in grid().into_iter().step_by(7) {
        let rho = physical_state(&s).unwrap();
        for kind in ChannelKind::ALL {
            let out = apply_channel(&rho, ChannelSpec::new(kind, 0.3).unwrap()).unwrap();
            let reduce = |m: &qslt::CMatrix| partial_trace(&partial_trace(m, 0).unwrap(), 0).unwrap();
            assert!(reduce(&out).max_abs_diff(&reduce(&rho)) < 1e-14);
        }
    }
}

#[test]
fn kraus_sum_equals_closed_form_everywhere() {
    for s in grid() {
        for kind in ChannelKind::ALL {
            for i in 0..=20 {
                let p = i as f64 / 20.0;
                let kraus = evolve(&s, ChannelSpec::new(kind, p).unwrap()).unwrap();
                let exact = closed_form(kind, &s, p).unwrap();
                assert!(kraus.max_abs_diff(exact.matrix()) <= 1e-12, "{kind} {s:?} p={p}");
            }
        }
    }
}

#[test]
fn bit_and_bit_phase_flip_are_unitarily_equivalent() {
    for s in grid().into_iter().step_by(5) {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let mut a = closed_form(ChannelKind::Bfc, &s, p).unwrap().eigenvalues();
            let mut b = closed_form(ChannelKind::Bpfc, &s, p).unwrap().eigenvalues();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn evolved_states_stay_physical() {
    for s in grid().into_iter().step_by(3) {
        for kind in ChannelKind::ALL {
            for &p in &[0.0, 0.13, 0.5, 0.77, 1.0] {
                let rho = closed_form(kind, &s, p).unwrap();
                let eig = hermitian_eigenvalues(rho.matrix()).unwrap();
                assert!(eig.iter().all(|&e| e > -1e-12));
                assert!((eig.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn basis_labels_round_trip() {
    for k in 1..=8 {
        assert_eq!(BasisConvention::index_to_label(BasisConvention::label_to_index(k)), k);
    }
    assert_eq!(BasisConvention::label_to_index(8), 0);
    assert_eq!(BasisConvention::index_of(1, 1, 1), 7);
}

#[test]
fn ratio_is_bounded_on_a_wide_grid() {
    for s in grid().into_iter().step_by(2) {
        for kind in ChannelKind::ALL {
            for i in 0..=10 {
                let r = qslt_ratio(kind, &s, i as f64 / 10.0).unwrap();
                assert!((0.0..=1.0 + 1e-10).contains(&r.ratio), "{kind} {s:?}: {}", r.ratio);
                assert!(r.distance <= r.path_length + 1e-10);
            }
        }
    }
}

#[test]
fn fixture_config_is_accepted() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/dpc_temperature.toml")).unwrap();
    let ConfigFile::Sweep(config) = parse_config(&text).unwrap() else {
        panic!("expected a sweep config");
    };
    assert_eq!(config.channel, ChannelKind::Dpc);
    assert_eq!(config.axis, Axis::Temperature);
    assert_eq!(config.range, [0.5, 10.0]);
    assert_eq!(config.count, 200);
    config.validate().unwrap();
}
