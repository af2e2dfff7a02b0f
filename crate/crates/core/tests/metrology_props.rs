mod common;

use common::*;
use num_complex::Complex64;
use qwprobe::coin::{coin_matrix, Axis, CoinState};
use qwprobe::evolution::{evolve_with_derivative, EvolvedPair, WalkConfig};
use qwprobe::metrology::{
    closed_form_line_z, cramer_rao, position_fi, qfi_pure, qudit_reference_qfi, sld_pure,
};
use qwprobe::probes::{custom_probe, uniform_probe};
use qwprobe::topology::{line_graph, Graph, ShiftOperator};
use qwprobe::WalkerState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn walk(graph: &Graph, axis: Axis, theta: f64, steps: usize, probe: &WalkerState) -> EvolvedPair {
    let shift = ShiftOperator::from_graph(graph).unwrap();
    let cfg = WalkConfig::new(
        shift,
        coin_matrix(axis, theta, graph.coin_dim()).unwrap(),
        steps,
    )
    .unwrap();
    evolve_with_derivative(&cfg, probe).unwrap()
}

#[test]
fn cramer_rao_ordering_and_overlap_reality() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..150 {
        let (g, probe, axis, theta, steps) = random_config(&mut rng);
        let pair = walk(&g, axis, theta, steps, &probe);
        let (h, f) = (qfi_pure(&pair), position_fi(&pair));
        assert!(f >= 0.0 && f <= h + 1e-8, "case {case}: fi {f} > qfi {h}");
        assert!(
            pair.overlap().re.abs() <= 1e-10,
            "case {case}: {:?}",
            pair.overlap()
        );
    }
}

#[test]
fn fisher_bound_is_looser_than_quantum_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0;
    while checked < 50 {
        let (g, probe, axis, theta, steps) = random_config(&mut rng);
        if axis == Axis::Z {
            continue;
        }
        let pair = walk(&g, axis, theta, steps, &probe);
        let m = rng.gen_range(1..1000);
        let (Ok(fb), Ok(qb)) = (
            cramer_rao(position_fi(&pair), m),
            cramer_rao(qfi_pure(&pair), m),
        ) else {
            continue;
        };
        assert!(fb >= qb * (1.0 - 1e-9));
        checked += 1;
    }
}

#[test]
fn qfi_is_invariant_under_global_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let (g, probe, axis, theta, steps) = random_config(&mut rng);
        let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let rotated = WalkerState::from_amplitudes(
            probe.n_positions(),
            probe.coin_dim(),
            probe.amplitudes().iter().map(|a| a * phase).collect(),
            true,
        )
        .unwrap();
        let a = qfi_pure(&walk(&g, axis, theta, steps, &probe));
        let b = qfi_pure(&walk(&g, axis, theta, steps, &rotated));
        assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }
}

#[test]
fn z_encoding_leaves_positions_uninformative() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..40 {
        let (g, probe, _, theta, steps) = random_config(&mut rng);
        let f = position_fi(&walk(&g, Axis::Z, theta, steps, &probe));
        assert!(f <= 1e-12, "{f}");
    }
}

#[test]
fn sld_identities_on_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut checked = 0;
    while checked < 30 {
        let (g, probe, axis, theta, steps) = random_config(&mut rng);
        if g.n_vertices() * g.coin_dim() > 256 {
            continue;
        }
        let pair = walk(&g, axis, theta, steps, &probe);
        let sld = sld_pure(&pair).unwrap();
        assert!((sld.trace_rho_l2() - qfi_pure(&pair)).abs() <= 1e-8);
        assert!(sld.anticommutator_residual() <= 1e-8);
        checked += 1;
    }
}

#[test]
fn line_z_closed_form_on_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let n = 40;
    let g = line_graph(n).unwrap();
    for _ in 0..10 {
        let sites: Vec<_> = (10..30)
            .map(|x| (x, random_complex_vec(&mut rng, 2)))
            .collect();
        let probe = custom_probe(n, 2, &sites).unwrap();
        let profile: Vec<(f64, f64)> = (0..n)
            .map(|x| (probe.site(x)[0].norm_sqr(), probe.site(x)[1].norm_sqr()))
            .collect();
        let pair = walk(&g, Axis::Z, rng.gen_range(-3.0..3.0), 9, &probe);
        let expected = closed_form_line_z(&profile, 9).unwrap();
        assert!(
            (qfi_pure(&pair) - expected).abs() <= 1e-9,
            "{} vs {expected}",
            qfi_pure(&pair)
        );
    }
}

#[test]
fn uniform_probe_reduces_to_coin_only_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for n in [5, 12, 31] {
        let coin = CoinState::new(random_complex_vec(&mut rng, 2)).unwrap();
        let probe = uniform_probe(&coin, n).unwrap();
        let pair = walk(&line_graph(n).unwrap(), Axis::X, 0.7, 5, &probe);
        let reference = qudit_reference_qfi(Axis::X, 0.7, 5, &coin, 2).unwrap();
        assert!(
            (qfi_pure(&pair) - reference).abs() <= 1e-9,
            "{} vs {reference}",
            qfi_pure(&pair)
        );
    }
}
