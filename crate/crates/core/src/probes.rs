//! Initial walker states.

use num_complex::Complex64;

use crate::coin::{extremal_eigenstates, Axis, CoinState};
use crate::error::{Error, Result};
use crate::state::{Amplitude, WalkerState};

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeSpec {
    Localized {
        x0: usize,
        coin: CoinState,
    },
    Gaussian {
        x0: usize,
        sigma: f64,
        coin: CoinState,
    },
    Uniform {
        coin: CoinState,
    },
    /// Arbitrary per-site coin vectors; normalized globally on build.
    Custom {
        coin_dim: usize,
        sites: Vec<(usize, Vec<Amplitude>)>,
    },
}

impl ProbeSpec {
    pub fn build(&self, n_positions: usize) -> Result<WalkerState> {
        match self {
            ProbeSpec::Localized { x0, coin } => localized(*x0, coin, n_positions),
            ProbeSpec::Gaussian { x0, sigma, coin } => {
                gaussian_probe(*x0, *sigma, coin, n_positions)
            }
            ProbeSpec::Uniform { coin } => uniform_probe(coin, n_positions),
            ProbeSpec::Custom { coin_dim, sites } => custom_probe(n_positions, *coin_dim, sites),
        }
    }
}

fn check_site(x0: usize, n: usize) -> Result<()> {
    if x0 >= n {
        return Err(Error::IndexOutOfRange { index: x0, len: n });
    }
    Ok(())
}

/// `|x0⟩ ⊗ |coin⟩`.
pub fn localized(x0: usize, coin: &CoinState, n_positions: usize) -> Result<WalkerState> {
    check_site(x0, n_positions)?;
    let d = coin.dim();
    let mut amps = vec![Amplitude::new(0.0, 0.0); n_positions * d];
    amps[x0 * d..(x0 + 1) * d].copy_from_slice(coin.components());
    WalkerState::from_amplitudes(n_positions, d, amps, true)
}

/// `|x0⟩ ⊗ (α|−1⟩ + e^{iγ}√(1−α²)|+1⟩)` on `n_positions` sites.
pub fn localized_probe(
    x0: usize,
    alpha: f64,
    gamma: f64,
    n_positions: usize,
) -> Result<WalkerState> {
    localized(x0, &CoinState::qubit(alpha, gamma)?, n_positions)
}

/// Shortest distance between two sites of a ring.
fn ring_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

fn gaussian_weights(x0: usize, sigma: f64, n: usize) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidSigma(sigma));
    }
    check_site(x0, n)?;
    let weights: Vec<f64> = (0..n)
        .map(|x| {
            let d = ring_distance(x, x0, n) as f64;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    Ok(weights.into_iter().map(|w| w / norm).collect())
}

/// `√A Σ_x e^{−d(x,x0)²/(2σ²)} |x⟩ ⊗ |coin⟩` with `d` the ring distance and
/// `A` fixed by the discrete lattice sum.
pub fn gaussian_probe(
    x0: usize,
    sigma: f64,
    coin: &CoinState,
    n_positions: usize,
) -> Result<WalkerState> {
    let weights = gaussian_weights(x0, sigma, n_positions)?;
    let amps = weights
        .iter()
        .flat_map(|&w| coin.components().iter().map(move |&c| c * w))
        .collect();
    WalkerState::from_amplitudes(n_positions, coin.dim(), amps, true)
}

/// Gaussian envelope with a separate coin vector per site.
pub fn gaussian_probe_with_coins(
    x0: usize,
    sigma: f64,
    coins: &[CoinState],
) -> Result<WalkerState> {
    let n = coins.len();
    let weights = gaussian_weights(x0, sigma, n)?;
    let d = coins[0].dim();
    if let Some(bad) = coins.iter().find(|c| c.dim() != d) {
        return Err(Error::dims(d, bad.dim()));
    }
    let amps = weights
        .iter()
        .zip(coins)
        .flat_map(|(&w, coin)| coin.components().iter().map(move |&c| c * w))
        .collect();
    WalkerState::from_amplitudes(n, d, amps, true)
}

/// Equal weight `1/√N` on every site with a shared coin vector.
pub fn uniform_probe(coin: &CoinState, n_positions: usize) -> Result<WalkerState> {
    if n_positions == 0 {
        return Err(Error::InvalidSize {
            size: 0,
            reason: "a probe needs at least one site".into(),
        });
    }
    let w = 1.0 / (n_positions as f64).sqrt();
    let site: Vec<Amplitude> = coin.components().iter().map(|&c| c * w).collect();
    let amps = site
        .iter()
        .copied()
        .cycle()
        .take(n_positions * coin.dim())
        .collect();
    WalkerState::from_amplitudes(n_positions, coin.dim(), amps, true)
}

/// Per-site product state `Σ_x |x⟩ ⊗ |φ_x⟩`, normalized as a whole.
pub fn custom_probe(
    n_positions: usize,
    coin_dim: usize,
    sites: &[(usize, Vec<Amplitude>)],
) -> Result<WalkerState> {
    let mut amps = vec![Amplitude::new(0.0, 0.0); n_positions * coin_dim];
    for (x, coin) in sites {
        check_site(*x, n_positions)?;
        if coin.len() != coin_dim {
            return Err(Error::dims(coin_dim, coin.len()));
        }
        for (j, &c) in coin.iter().enumerate() {
            amps[x * coin_dim + j] += c;
        }
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sites",
            reason: format!("probe norm is {norm}"),
        });
    }
    for a in amps.iter_mut() {
        *a /= norm;
    }
    WalkerState::from_amplitudes(n_positions, coin_dim, amps, true)
}

/// `(|e_min⟩ + e^{iγ}|e_max⟩)/√2` from the extremal eigenvectors of `T_axis`.
pub fn optimal_coin_state(axis: Axis, dim: usize, gamma: f64) -> Result<CoinState> {
    if !gamma.is_finite() {
        return Err(Error::NonFiniteParameter(gamma));
    }
    let (e_min, e_max) = extremal_eigenstates(axis, dim)?;
    let phase = Complex64::from_polar(1.0, gamma);
    let v = e_min
        .components()
        .iter()
        .zip(e_max.components())
        .map(|(&a, &b)| (a + phase * b) * std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    CoinState::new(v)
}
