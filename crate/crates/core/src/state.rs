//! Walker states on the position ⊗ coin Hilbert space.
//!
//! Amplitudes are stored densely, position-major: the amplitude of site `x`
//! with coin index `j` lives at `x * coin_dim + j`. Coin index 0 is the
//! walker's "−1" branch for two-dimensional coins.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single complex amplitude.
pub type Amplitude = Complex64;

/// Tolerance on `|‖ψ‖² − 1|` for states flagged as normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    n_positions: usize,
    coin_dim: usize,
    amplitudes: Vec<Amplitude>,
    normalized: bool,
}

impl WalkerState {
    /// The zero vector. Derivative states start here; they are never normalized.
    pub fn zeros(n_positions: usize, coin_dim: usize) -> Self {
        WalkerState {
            n_positions,
            coin_dim,
            amplitudes: vec![Amplitude::new(0.0, 0.0); n_positions * coin_dim],
            normalized: false,
        }
    }

    /// Wraps raw amplitudes. When `normalized` is set the norm invariant is checked.
    pub fn from_amplitudes(
        n_positions: usize,
        coin_dim: usize,
        amplitudes: Vec<Amplitude>,
        normalized: bool,
    ) -> Result<Self> {
        if amplitudes.len() != n_positions * coin_dim {
            return Err(Error::dims(n_positions * coin_dim, amplitudes.len()));
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFiniteAmplitude(i));
        }
        let state = WalkerState {
            n_positions,
            coin_dim,
            amplitudes,
            normalized,
        };
        if normalized {
            let norm_sqr = state.norm_sqr();
            if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::NormViolation { norm_sqr });
            }
        }
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(
        n_positions: usize,
        coin_dim: usize,
        amplitudes: Vec<Amplitude>,
        normalized: bool,
    ) -> Self {
        debug_assert_eq!(amplitudes.len(), n_positions * coin_dim);
        WalkerState {
            n_positions,
            coin_dim,
            amplitudes,
            normalized,
        }
    }

    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut_vec(&mut self) -> &mut Vec<Amplitude> {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amplitudes
    }

    /// Amplitude at site `x`, coin index `j`.
    pub fn amplitude(&self, x: usize, j: usize) -> Amplitude {
        self.amplitudes[x * self.coin_dim + j]
    }

    /// Coin vector held by site `x`.
    pub fn site(&self, x: usize) -> &[Amplitude] {
        &self.amplitudes[x * self.coin_dim..(x + 1) * self.coin_dim]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_shape(&self, other: &WalkerState) -> Result<()> {
        if self.n_positions != other.n_positions || self.coin_dim != other.coin_dim {
            return Err(Error::dims(
                format!("{}x{}", self.n_positions, self.coin_dim),
                format!("{}x{}", other.n_positions, other.coin_dim),
            ));
        }
        Ok(())
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner_product(&self, other: &WalkerState) -> Result<Amplitude> {
        self.check_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Position distribution with the coin traced out.
    pub fn position_distribution(&self) -> Result<PositionDistribution> {
        if !self.normalized {
            return Err(Error::NotNormalized);
        }
        let probs = self
            .amplitudes
            .chunks_exact(self.coin_dim)
            .map(|site| site.iter().map(|a| a.norm_sqr()).sum::<f64>().max(0.0))
            .collect();
        Ok(PositionDistribution { probs })
    }
}

/// Free-function form of [`WalkerState::inner_product`].
pub fn inner_product(a: &WalkerState, b: &WalkerState) -> Result<Amplitude> {
    a.inner_product(b)
}

/// Free-function form of [`WalkerState::position_distribution`].
pub fn position_distribution(s: &WalkerState) -> Result<PositionDistribution> {
    s.position_distribution()
}

/// `p(x)` over the vertices of the walk.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    probs: Vec<f64>,
}

impl PositionDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

impl std::ops::Index<usize> for PositionDistribution {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.probs[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    fn basis(n: usize, d: usize, x: usize, j: usize) -> WalkerState {
        let mut amps = vec![c(0.0, 0.0); n * d];
        amps[x * d + j] = c(1.0, 0.0);
        WalkerState::from_amplitudes(n, d, amps, true).unwrap()
    }

    #[test]
    fn normalized_self_overlap_is_one() {
        let s = 0.5f64.sqrt();
        let psi = WalkerState::from_amplitudes(
            2,
            2,
            vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, s)],
            true,
        )
        .unwrap();
        let ip = psi.inner_product(&psi).unwrap();
        assert!((ip - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn orthogonal_basis_states() {
        let a = basis(3, 2, 0, 0);
        let b = basis(3, 2, 1, 0);
        assert_eq!(a.inner_product(&b).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = basis(3, 2, 0, 0);
        let b = basis(4, 2, 0, 0);
        assert!(matches!(
            a.inner_product(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn distribution_requires_normalized_flag() {
        let z = WalkerState::zeros(3, 2);
        assert_eq!(z.position_distribution(), Err(Error::NotNormalized));
    }

    #[test]
    fn localized_state_gives_delta() {
        let alpha = 0.6;
        let beta = Amplitude::from_polar(0.8, 1.0);
        let mut amps = vec![c(0.0, 0.0); 10];
        amps[2 * 2] = c(alpha, 0.0);
        amps[2 * 2 + 1] = beta;
        let psi = WalkerState::from_amplitudes(5, 2, amps, true).unwrap();
        let p = psi.position_distribution().unwrap();
        for x in 0..5 {
            let expected = if x == 2 { 1.0 } else { 0.0 };
            assert!((p[x] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_amplitudes_give_uniform_distribution() {
        let n = 7;
        let a = c((1.0 / n as f64).sqrt(), 0.0);
        let mut amps = vec![c(0.0, 0.0); 2 * n];
        for x in 0..n {
            amps[2 * x] = a;
        }
        let p = WalkerState::from_amplitudes(n, 2, amps, true)
            .unwrap()
            .position_distribution()
            .unwrap();
        assert!(p
            .probs()
            .iter()
            .all(|&q| (q - 1.0 / n as f64).abs() < 1e-15));
    }

    #[test]
    fn normalization_flag_is_enforced() {
        let amps = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(
            WalkerState::from_amplitudes(1, 2, amps, true),
            Err(Error::NormViolation { .. })
        ));
    }

    #[test]
    fn non_finite_amplitudes_are_rejected() {
        let amps = vec![c(f64::NAN, 0.0), c(0.0, 0.0)];
        assert_eq!(
            WalkerState::from_amplitudes(1, 2, amps, false),
            Err(Error::NonFiniteAmplitude(0))
        );
    }
}
