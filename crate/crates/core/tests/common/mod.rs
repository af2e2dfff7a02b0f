//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qwprobe::coin::{coin_matrix, Axis, CoinOperator, CoinState};
use qwprobe::evolution::{evolve, WalkConfig};
use qwprobe::probes::{gaussian_probe, localized};
use qwprobe::topology::{enhanced_graph, line_graph, Edge, Graph, GraphKind, ShiftOperator};
use qwprobe::WalkerState;
use rand::seq::SliceRandom;
use rand::Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `Σ conj(a_i) b_i` written as a plain loop.
pub fn brute_inner(a: &[C], b: &[C]) -> C {
    let mut acc = c(0.0, 0.0);
    for i in 0..a.len() {
        acc += a[i].conj() * b[i];
    }
    acc
}

/// Dense `(N·D)²` walk operator `S(1⊗C)` assembled from the graph's edge list.
pub fn dense_walk_operator(graph: &Graph, coin: &DMatrix<C>) -> DMatrix<C> {
    let d = graph.coin_dim();
    let dim = graph.n_vertices() * d;
    let mut shift = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for e in graph.edges() {
        shift[(e.target * d + e.label, e.source * d + e.label)] = c(1.0, 0.0);
    }
    let mut local = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for x in 0..graph.n_vertices() {
        local.view_mut((x * d, x * d), (d, d)).copy_from(coin);
    }
    shift * local
}

pub fn dense_evolve(u: &DMatrix<C>, psi: &[C], steps: usize) -> Vec<C> {
    let mut v = DVector::from_column_slice(psi);
    for _ in 0..steps {
        v = u * v;
    }
    v.as_slice().to_vec()
}

/// Plain walk state at angle `theta`.
pub fn state_at(
    shift: &ShiftOperator,
    axis: Axis,
    theta: f64,
    steps: usize,
    probe: &WalkerState,
) -> WalkerState {
    let coin = coin_matrix(axis, theta, shift.coin_dim()).unwrap();
    let cfg = WalkConfig::new(shift.clone(), coin, steps).unwrap();
    evolve(&cfg, probe).unwrap()
}

/// Central difference `(ψ(θ+h) − ψ(θ−h)) / 2h`.
pub fn fd_derivative(
    shift: &ShiftOperator,
    axis: Axis,
    theta: f64,
    steps: usize,
    probe: &WalkerState,
    h: f64,
) -> Vec<C> {
    let plus = state_at(shift, axis, theta + h, steps, probe);
    let minus = state_at(shift, axis, theta - h, steps, probe);
    plus.amplitudes()
        .iter()
        .zip(minus.amplitudes())
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect()
}

/// Position distribution of the walk at angle `theta`.
pub fn probs_at(
    shift: &ShiftOperator,
    axis: Axis,
    theta: f64,
    steps: usize,
    probe: &WalkerState,
) -> Vec<f64> {
    state_at(shift, axis, theta, steps, probe)
        .position_distribution()
        .unwrap()
        .probs()
        .to_vec()
}

/// `Σ_x (∂p)²/p` with `∂p` from a central difference of `p` itself.
pub fn fd_position_fi(
    shift: &ShiftOperator,
    axis: Axis,
    theta: f64,
    steps: usize,
    probe: &WalkerState,
    h: f64,
) -> f64 {
    let p = probs_at(shift, axis, theta, steps, probe);
    let pp = probs_at(shift, axis, theta + h, steps, probe);
    let pm = probs_at(shift, axis, theta - h, steps, probe);
    (0..p.len())
        .filter(|&x| p[x] >= 1e-12)
        .map(|x| {
            let dp = (pp[x] - pm[x]) / (2.0 * h);
            dp * dp / p[x]
        })
        .sum()
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn random_complex_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<C> {
    (0..len)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_normalized<R: Rng>(rng: &mut R, len: usize) -> Vec<C> {
    let v = random_complex_vec(rng, len);
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

pub fn random_axis<R: Rng>(rng: &mut R) -> Axis {
    Axis::ALL[rng.gen_range(0..3)]
}

pub fn coin_dense(axis: Axis, theta: f64, dim: usize) -> DMatrix<C> {
    let op: CoinOperator = coin_matrix(axis, theta, dim).unwrap();
    op.matrix().clone()
}

/// Each label acts as an independent random permutation of the vertices.
pub fn random_permutation_graph<R: Rng>(rng: &mut R, n: usize, d: usize) -> Graph {
    let mut edges = Vec::new();
    for label in 0..d {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        edges.extend(perm.into_iter().enumerate().map(|(source, target)| Edge {
            source,
            label,
            target,
        }));
    }
    Graph::from_edges(n, d, edges, GraphKind::Custom).unwrap()
}

/// A random (topology, probe, axis, θ, t) draw.
pub fn random_config<R: Rng>(rng: &mut R) -> (Graph, WalkerState, Axis, f64, usize) {
    let axis = random_axis(rng);
    let theta = rng.gen_range(-3.1..3.1);
    let steps = rng.gen_range(1..15);
    match rng.gen_range(0..3) {
        0 => {
            let n = 2 * steps + 12;
            let g = line_graph(n).unwrap();
            let coin = CoinState::new(random_complex_vec(rng, 2)).unwrap();
            let probe = if rng.gen_bool(0.5) {
                localized(n / 2, &coin, n).unwrap()
            } else {
                gaussian_probe(n / 2, rng.gen_range(0.5..4.0), &coin, n).unwrap()
            };
            (g, probe, axis, theta, steps)
        }
        1 => {
            let d = rng.gen_range(2..=5);
            let g = enhanced_graph(d, steps).unwrap();
            let coin = CoinState::new(random_complex_vec(rng, d)).unwrap();
            let probe = localized(0, &coin, g.n_vertices()).unwrap();
            (g, probe, axis, theta, steps)
        }
        _ => {
            let d = rng.gen_range(2..=4);
            let n = rng.gen_range(3..25);
            let g = random_permutation_graph(rng, n, d);
            let probe =
                WalkerState::from_amplitudes(n, d, random_normalized(rng, n * d), true).unwrap();
            (g, probe, axis, theta, steps)
        }
    }
}
