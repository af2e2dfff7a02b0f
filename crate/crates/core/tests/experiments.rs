use qwprobe::coin::{Axis, CoinState};
use qwprobe::experiments::{
    run_closed_form_check, run_enhanced_table, run_line_sweep, run_with_workers, ExperimentConfig,
    Outcome, Scenario,
};
use qwprobe::metrology::qudit_reference_qfi;

fn cfg(scenario: Scenario, pairs: &[(&str, &str)]) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(scenario);
    for (k, v) in pairs {
        c.set(k, v).unwrap();
    }
    c
}

fn assert_fi_below_qfi(out: &Outcome) {
    for r in &out.rows {
        assert!(r.report.fi <= r.report.qfi + 1e-8, "{}", r.to_line());
    }
}

#[test]
fn figure_sweep_matches_golden_csv() {
    let golden = include_str!("data/fig_golden.csv");
    let out = run_line_sweep(&ExperimentConfig::new(Scenario::LineSweep)).unwrap();
    assert_eq!(out.rows.len(), 80);
    for (row, line) in out.rows.iter().zip(golden.lines().skip(1)) {
        let g: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row.sigma, Some(g[0]));
        assert_eq!(row.report.t as f64, g[1]);
        assert!(
            (row.report.qfi - g[2]).abs() <= 1e-7 * g[2].max(1.0),
            "{line}"
        );
        assert!(
            (row.report.fi - g[3]).abs() <= 1e-7 * g[3].max(1.0),
            "{line}"
        );
    }
    assert_fi_below_qfi(&out);
}

#[test]
fn wider_probes_gain_quantum_information() {
    let out = run_line_sweep(&ExperimentConfig::new(Scenario::LineSweep)).unwrap();
    let at = |sigma: f64, t: usize| {
        out.rows
            .iter()
            .find(|r| r.sigma == Some(sigma) && r.report.t == t)
            .unwrap()
            .report
            .qfi
    };
    for t in 5..=20 {
        assert!(
            at(1.0, t) <= at(2.0, t) && at(2.0, t) <= at(5.0, t) && at(5.0, t) <= at(10.0, t),
            "t={t}"
        );
    }
}

#[test]
fn very_wide_probe_approaches_coin_only_limit() {
    let out = run_line_sweep(&cfg(
        Scenario::LineSweep,
        &[("sigma", "1e6"), ("steps", "10")],
    ))
    .unwrap();
    let last = &out.rows[9].report;
    let reference = qudit_reference_qfi(
        Axis::Y,
        std::f64::consts::FRAC_PI_2,
        10,
        &CoinState::basis(2, 0).unwrap(),
        2,
    )
    .unwrap();
    assert!(last.fi <= 1e-8, "{}", last.fi);
    assert!(
        (last.qfi - reference).abs() <= 1e-6,
        "{} vs {reference}",
        last.qfi
    );
}

#[test]
fn enhanced_table_examples() {
    let out = run_enhanced_table(&cfg(
        Scenario::EnhancedTable,
        &[("dim", "2"), ("axis", "x")],
    ))
    .unwrap();
    assert_eq!(out.rows.len(), 10);
    for r in &out.rows {
        let t2 = (r.report.t * r.report.t) as f64;
        assert!((r.report.qfi - t2).abs() < 1e-8 && (r.report.fi - t2).abs() < 1e-8);
    }
    let out = run_enhanced_table(&cfg(
        Scenario::EnhancedTable,
        &[("dim", "3"), ("steps", "5")],
    ))
    .unwrap();
    assert!((out.rows[4].report.qfi - 100.0).abs() < 1e-8);
    let out = run_enhanced_table(&cfg(Scenario::EnhancedTable, &[("axis", "z")])).unwrap();
    assert!(out
        .rows
        .iter()
        .all(|r| r.report.fi == 0.0 || r.report.fi < 1e-12));
    assert!(out.passed());
}

#[test]
fn enhanced_table_rejects_oversized_dimension() {
    let c = cfg(Scenario::EnhancedTable, &[("dim", "7")]);
    assert!(run_with_workers(&c, Some(1)).is_err());
}

#[test]
fn closed_form_check_examples() {
    let out = run_closed_form_check(&cfg(
        Scenario::ClosedFormCheck,
        &[("families", "line_z"), ("steps", "6")],
    ))
    .unwrap();
    assert_eq!(out.rows.len(), 30);
    assert!(out.rows.iter().all(|r| r.report.abs_dev().unwrap() <= 1e-9));

    let out = run_closed_form_check(&cfg(
        Scenario::ClosedFormCheck,
        &[("families", "line_xy"), ("steps", "12")],
    ))
    .unwrap();
    assert!(out.rows.iter().all(|r| r.report.abs_dev().unwrap() <= 1e-9));

    let out = run_closed_form_check(&cfg(
        Scenario::ClosedFormCheck,
        &[
            ("families", "enhanced"),
            ("alpha", "0.7071067811865476"),
            ("gamma", "0"),
        ],
    ))
    .unwrap();
    for r in out.rows.iter().filter(|r| r.axis == Axis::X) {
        assert!(
            r.report.qfi_closed == Some(0.0) && r.report.qfi.abs() < 1e-9 && r.report.fi < 1e-9
        );
    }
    assert!(out.passed());
}

#[test]
fn perturbed_coin_is_detected_in_every_family() {
    for family in ["line_z", "line_xy", "enhanced"] {
        let c = cfg(
            Scenario::ClosedFormCheck,
            &[("families", family), ("steps", "6"), ("perturb", "0.02")],
        );
        assert!(!run_closed_form_check(&c).unwrap().passed(), "{family}");
    }
}

#[test]
fn csv_is_independent_of_worker_count() {
    let c = cfg(Scenario::ClosedFormCheck, &[("steps", "5")]);
    let a = run_with_workers(&c, Some(1)).unwrap().to_csv();
    let b = run_with_workers(&c, Some(3)).unwrap().to_csv();
    assert_eq!(a, b);
}

#[test]
fn custom_graph_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/tree.graph");
    let c = cfg(
        Scenario::Custom,
        &[
            ("graph", path),
            ("steps", "2"),
            ("axis", "y"),
            ("coin", "optimal"),
        ],
    );
    let out = run_with_workers(&c, Some(1)).unwrap();
    assert_eq!(out.rows.len(), 2);
    assert!((out.rows[1].report.qfi - 4.0).abs() < 1e-9);
}
