//! Walk evolution `U = S(1 ⊗ C)` with exact propagation of `∂_θψ`.
//!
//! The derivative obeys `∂ψ(t) = U ∂ψ(t−1) + S(1 ⊗ ∂C) ψ(t−1)` with
//! `∂ψ(0) = 0`, since probes do not depend on θ.

use num_complex::Complex64;

use crate::coin::CoinOperator;
use crate::error::{Error, Result};
use crate::state::{Amplitude, WalkerState};
use crate::topology::ShiftOperator;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct WalkConfig {
    shift: ShiftOperator,
    coin: CoinOperator,
    steps: usize,
}

impl WalkConfig {
    pub fn new(shift: ShiftOperator, coin: CoinOperator, steps: usize) -> Result<Self> {
        if shift.coin_dim() != coin.dim() {
            return Err(Error::dims(
                format!("coin dimension {}", shift.coin_dim()),
                format!("coin dimension {}", coin.dim()),
            ));
        }
        Ok(WalkConfig { shift, coin, steps })
    }

    pub fn shift(&self) -> &ShiftOperator {
        &self.shift
    }

    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    fn check_state(&self, s: &WalkerState) -> Result<()> {
        if s.n_positions() != self.shift.n_positions() || s.coin_dim() != self.shift.coin_dim() {
            return Err(Error::dims(
                format!("{}x{}", self.shift.n_positions(), self.shift.coin_dim()),
                format!("{}x{}", s.n_positions(), s.coin_dim()),
            ));
        }
        Ok(())
    }
}

/// `ψ(t)` and `∂_θψ(t)` at a common time and parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedPair {
    psi: WalkerState,
    dpsi: WalkerState,
    t: usize,
    theta: f64,
}

impl EvolvedPair {
    pub fn new(psi: WalkerState, dpsi: WalkerState, t: usize, theta: f64) -> Result<Self> {
        if psi.n_positions() != dpsi.n_positions() || psi.coin_dim() != dpsi.coin_dim() {
            return Err(Error::dims(
                format!("{}x{}", psi.n_positions(), psi.coin_dim()),
                format!("{}x{}", dpsi.n_positions(), dpsi.coin_dim()),
            ));
        }
        if !psi.is_normalized() {
            return Err(Error::NotNormalized);
        }
        Ok(EvolvedPair {
            psi,
            dpsi,
            t,
            theta,
        })
    }

    pub fn psi(&self) -> &WalkerState {
        &self.psi
    }

    pub fn dpsi(&self) -> &WalkerState {
        &self.dpsi
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `⟨∂ψ|ψ⟩`; purely imaginary for a norm-preserving evolution.
    pub fn overlap(&self) -> Amplitude {
        self.dpsi
            .amplitudes()
            .iter()
            .zip(self.psi.amplitudes())
            .map(|(d, p)| d.conj() * p)
            .sum()
    }
}

fn flatten(m: &crate::coin::CMatrix) -> Vec<Complex64> {
    let d = m.nrows();
    (0..d)
        .flat_map(|r| (0..d).map(move |c| m[(r, c)]))
        .collect()
}

/// Scatters `C ψ_x` (and optionally `C ∂ψ_x + ∂C ψ_x`) into the shifted buffers.
fn propagate(
    targets: &[usize],
    d: usize,
    coin: &[Complex64],
    psi: &[Complex64],
    out: &mut [Complex64],
    derivative: Option<(&[Complex64], &[Complex64], &mut [Complex64])>,
) {
    out.fill(ZERO);
    match derivative {
        None => {
            for (x, site) in psi.chunks_exact(d).enumerate() {
                for k in 0..d {
                    let t = targets[x * d + k];
                    if t == usize::MAX {
                        continue;
                    }
                    let row = &coin[k * d..(k + 1) * d];
                    let a: Complex64 = row.iter().zip(site).map(|(c, p)| c * p).sum();
                    out[t * d + k] += a;
                }
            }
        }
        Some((dcoin, dpsi, dout)) => {
            dout.fill(ZERO);
            for (x, (site, dsite)) in psi.chunks_exact(d).zip(dpsi.chunks_exact(d)).enumerate() {
                for k in 0..d {
                    let t = targets[x * d + k];
                    if t == usize::MAX {
                        continue;
                    }
                    let row = &coin[k * d..(k + 1) * d];
                    let drow = &dcoin[k * d..(k + 1) * d];
                    let mut a = ZERO;
                    let mut da = ZERO;
                    for j in 0..d {
                        a += row[j] * site[j];
                        da += row[j] * dsite[j] + drow[j] * site[j];
                    }
                    out[t * d + k] += a;
                    dout[t * d + k] += da;
                }
            }
        }
    }
}

/// One application of `U` to `s`.
pub fn step(cfg: &WalkConfig, s: &WalkerState) -> Result<WalkerState> {
    cfg.check_state(s)?;
    cfg.shift.check_support(s.amplitudes())?;
    let d = s.coin_dim();
    let mut out = vec![ZERO; s.amplitudes().len()];
    propagate(
        cfg.shift.targets(),
        d,
        &flatten(cfg.coin.matrix()),
        s.amplitudes(),
        &mut out,
        None,
    );
    Ok(WalkerState::from_parts_unchecked(
        s.n_positions(),
        d,
        out,
        s.is_normalized(),
    ))
}

/// `U^steps` applied to `probe`, without the derivative.
pub fn evolve(cfg: &WalkConfig, probe: &WalkerState) -> Result<WalkerState> {
    let mut s = probe.clone();
    for _ in 0..cfg.steps {
        s = step(cfg, &s)?;
    }
    Ok(s)
}

/// Propagates `probe` and its θ-derivative for `cfg.steps` steps.
pub fn evolve_with_derivative(cfg: &WalkConfig, probe: &WalkerState) -> Result<EvolvedPair> {
    let mut walk = Walk::new(&cfg.shift, &cfg.coin, probe)?;
    for _ in 0..cfg.steps {
        walk.advance()?;
    }
    Ok(walk.into_pair())
}

/// Incremental evolution, one step per [`Walk::advance`]; lets sweeps read
/// every intermediate time without re-running from `t = 0`.
#[derive(Debug)]
pub struct Walk<'a> {
    shift: &'a ShiftOperator,
    coin: Vec<Complex64>,
    dcoin: Vec<Complex64>,
    pair: EvolvedPair,
    next_psi: Vec<Complex64>,
    next_dpsi: Vec<Complex64>,
}

impl<'a> Walk<'a> {
    pub fn new(shift: &'a ShiftOperator, coin: &CoinOperator, probe: &WalkerState) -> Result<Self> {
        if shift.coin_dim() != coin.dim() {
            return Err(Error::dims(shift.coin_dim(), coin.dim()));
        }
        if probe.n_positions() != shift.n_positions() || probe.coin_dim() != shift.coin_dim() {
            return Err(Error::dims(
                format!("{}x{}", shift.n_positions(), shift.coin_dim()),
                format!("{}x{}", probe.n_positions(), probe.coin_dim()),
            ));
        }
        if !probe.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let len = probe.amplitudes().len();
        let dpsi = WalkerState::zeros(probe.n_positions(), probe.coin_dim());
        Ok(Walk {
            shift,
            coin: flatten(coin.matrix()),
            dcoin: flatten(coin.derivative()),
            pair: EvolvedPair {
                psi: probe.clone(),
                dpsi,
                t: 0,
                theta: coin.theta(),
            },
            next_psi: vec![ZERO; len],
            next_dpsi: vec![ZERO; len],
        })
    }

    pub fn t(&self) -> usize {
        self.pair.t
    }

    pub fn pair(&self) -> &EvolvedPair {
        &self.pair
    }

    pub fn into_pair(self) -> EvolvedPair {
        self.pair
    }

    pub fn advance(&mut self) -> Result<()> {
        self.shift.check_support(self.pair.psi.amplitudes())?;
        self.shift.check_support(self.pair.dpsi.amplitudes())?;
        let d = self.pair.psi.coin_dim();
        propagate(
            self.shift.targets(),
            d,
            &self.coin,
            self.pair.psi.amplitudes(),
            &mut self.next_psi,
            Some((
                &self.dcoin,
                self.pair.dpsi.amplitudes(),
                &mut self.next_dpsi,
            )),
        );
        std::mem::swap(self.pair.psi.amplitudes_mut_vec(), &mut self.next_psi);
        std::mem::swap(self.pair.dpsi.amplitudes_mut_vec(), &mut self.next_dpsi);
        self.pair.t += 1;
        Ok(())
    }
}
