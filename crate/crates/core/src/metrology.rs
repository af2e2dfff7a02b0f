//! Fisher information of walker states.
//!
//! * `qfi_pure`: `H = 4(⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²)`.
//! * `position_fi`: classical information of `p(x|θ)`, using
//!   `∂_θ p(x) = 2 Re⟨∂ψ_x|ψ_x⟩`.
//! * `sld_pure`: `L = 2(|ψ⟩⟨∂ψ| + |∂ψ⟩⟨ψ|)`, so that `Tr[ρL²] = H`.
//!
//! The remaining functions are closed-form references for specific probes
//! and topologies, used as cross-checks by the experiment runners.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::coin::{coin_matrix, Axis, CMatrix, CoinState};
use crate::error::{Error, Result};
use crate::evolution::EvolvedPair;
use crate::state::Amplitude;

/// Sites with `p(x)` below this contribute nothing to the position FI.
pub const FI_THRESHOLD: f64 = 1e-12;

/// Largest `N·D` for which a dense SLD is built.
pub const SLD_DENSE_LIMIT: usize = 4096;

/// Slack allowed in `F ≤ H` before a row is flagged.
pub const CRAMER_RAO_SLACK: f64 = 1e-8;

/// QFI from raw amplitude slices.
pub fn qfi_from_amplitudes(psi: &[Amplitude], dpsi: &[Amplitude]) -> f64 {
    let mut dd = 0.0;
    let mut overlap = Complex64::new(0.0, 0.0);
    for (p, d) in psi.iter().zip(dpsi) {
        dd += d.norm_sqr();
        overlap += d.conj() * p;
    }
    (4.0 * (dd - overlap.norm_sqr())).max(0.0)
}

/// Position FI from raw amplitude slices laid out position-major.
pub fn position_fi_from_amplitudes(psi: &[Amplitude], dpsi: &[Amplitude], coin_dim: usize) -> f64 {
    psi.chunks_exact(coin_dim)
        .zip(dpsi.chunks_exact(coin_dim))
        .map(|(site, dsite)| {
            let p: f64 = site.iter().map(|a| a.norm_sqr()).sum();
            if p < FI_THRESHOLD {
                return 0.0;
            }
            let dp: f64 = 2.0
                * site
                    .iter()
                    .zip(dsite)
                    .map(|(a, da)| (da.conj() * a).re)
                    .sum::<f64>();
            dp * dp / p
        })
        .sum()
}

pub fn qfi_pure(pair: &EvolvedPair) -> f64 {
    qfi_from_amplitudes(pair.psi().amplitudes(), pair.dpsi().amplitudes())
}

pub fn position_fi(pair: &EvolvedPair) -> f64 {
    position_fi_from_amplitudes(
        pair.psi().amplitudes(),
        pair.dpsi().amplitudes(),
        pair.psi().coin_dim(),
    )
}

/// Symmetric logarithmic derivative of a pure-state family.
#[derive(Debug, Clone, PartialEq)]
pub struct SldOperator {
    matrix: CMatrix,
    psi: DVector<Complex64>,
    dpsi: DVector<Complex64>,
}

impl SldOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `‖L − L†‖_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        crate::coin::max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    /// `Tr[ρ L²]` with `ρ = |ψ⟩⟨ψ|`.
    pub fn trace_rho_l2(&self) -> f64 {
        (&self.matrix * &self.psi).norm_squared()
    }

    /// `‖∂ρ − (Lρ + ρL)/2‖_max`, elementwise.
    pub fn anticommutator_residual(&self) -> f64 {
        let rho = &self.psi * self.psi.adjoint();
        let drho = &self.dpsi * self.psi.adjoint() + &self.psi * self.dpsi.adjoint();
        let sym = (&self.matrix * &rho + &rho * &self.matrix) * Complex64::new(0.5, 0.0);
        crate::coin::max_abs_diff(&drho, &sym)
    }
}

pub fn sld_pure(pair: &EvolvedPair) -> Result<SldOperator> {
    let rows = pair.psi().amplitudes().len();
    if rows > SLD_DENSE_LIMIT {
        return Err(Error::TooLargeForDense {
            rows,
            limit: SLD_DENSE_LIMIT,
        });
    }
    let psi = DVector::from_column_slice(pair.psi().amplitudes());
    let dpsi = DVector::from_column_slice(pair.dpsi().amplitudes());
    let matrix = (&psi * dpsi.adjoint() + &dpsi * psi.adjoint()) * Complex64::new(2.0, 0.0);
    Ok(SldOperator { matrix, psi, dpsi })
}

/// `1/(M·F)`, the variance bound after `M` repetitions.
pub fn cramer_rao(fisher: f64, measurements: u64) -> Result<f64> {
    if fisher.is_nan() || fisher <= 0.0 || fisher.is_infinite() {
        return Err(Error::NonPositiveFisher(fisher));
    }
    if measurements == 0 {
        return Err(Error::InvalidParameter {
            name: "measurements",
            reason: "must be positive".into(),
        });
    }
    Ok(1.0 / (measurements as f64 * fisher))
}

/// `t²[1 − (Σ_x |α_x|² − |β_x|²)²]` for a z-encoded ring walk; `profile`
/// lists `(|α_x|², |β_x|²)` per site.
pub fn closed_form_line_z(profile: &[(f64, f64)], t: usize) -> Result<f64> {
    let total: f64 = profile.iter().map(|(a, b)| a + b).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::UnnormalizedProfile(total));
    }
    let imbalance: f64 = profile.iter().map(|(a, b)| a - b).sum();
    let t = t as f64;
    Ok(t * t * (1.0 - imbalance * imbalance))
}

/// QFI on the qubit enhanced graph for the probe
/// `α|−1⟩ + e^{iγ}√(1−α²)|+1⟩`: `t²[1 − 4α²(1−α²)cos²γ]` for x and the
/// `sin²γ` variant for y.
pub fn closed_form_enhanced(axis: Axis, alpha: f64, gamma: f64, t: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("{alpha} is outside [0, 1]"),
        });
    }
    let trig = match axis {
        Axis::X => gamma.cos(),
        Axis::Y => gamma.sin(),
        Axis::Z => {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: "closed form covers the x and y encodings".into(),
            })
        }
    };
    let a2 = alpha * alpha;
    let t = t as f64;
    Ok(t * t * (1.0 - 4.0 * a2 * (1.0 - a2) * trig * trig))
}

/// Largest ring QFI for localized probes under x/y encodings, reached at θ = π.
pub fn max_qfi_line_xy(t: usize) -> f64 {
    let tf = t as f64;
    tf * tf / 2.0 + (t % 2) as f64 / 2.0
}

/// `(D−1)²t²`: the optimum on the enhanced graph, attained by both QFI and FI.
pub fn enhanced_max(dim: usize, t: usize) -> f64 {
    let v = (dim as f64 - 1.0) * t as f64;
    v * v
}

/// QFI of the coin-only family `C(θ)^t|φ⟩`, propagated without position space.
pub fn qudit_reference_qfi(
    axis: Axis,
    theta: f64,
    t: usize,
    coin_state: &CoinState,
    dim: usize,
) -> Result<f64> {
    if coin_state.dim() != dim {
        return Err(Error::dims(dim, coin_state.dim()));
    }
    let coin = coin_matrix(axis, theta, dim)?;
    let mut phi = DVector::from_column_slice(coin_state.components());
    let mut dphi = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    for _ in 0..t {
        dphi = coin.matrix() * &dphi + coin.derivative() * &phi;
        phi = coin.matrix() * &phi;
    }
    Ok(qfi_from_amplitudes(phi.as_slice(), dphi.as_slice()))
}

/// One evaluated point: simulated QFI and position FI plus optional references.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherReport {
    pub t: usize,
    pub theta: f64,
    pub qfi: f64,
    pub fi: f64,
    pub qfi_closed: Option<f64>,
    pub fi_closed: Option<f64>,
    pub meas_count: u64,
}

impl FisherReport {
    pub fn from_pair(pair: &EvolvedPair, meas_count: u64) -> Self {
        FisherReport {
            t: pair.t(),
            theta: pair.theta(),
            qfi: qfi_pure(pair),
            fi: position_fi(pair),
            qfi_closed: None,
            fi_closed: None,
            meas_count,
        }
    }

    pub fn with_closed(mut self, qfi_closed: Option<f64>, fi_closed: Option<f64>) -> Self {
        self.qfi_closed = qfi_closed;
        self.fi_closed = fi_closed;
        self
    }

    /// Largest deviation from whichever closed forms are present.
    pub fn abs_dev(&self) -> Option<f64> {
        let q = self.qfi_closed.map(|c| (self.qfi - c).abs());
        let f = self.fi_closed.map(|c| (self.fi - c).abs());
        match (q, f) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0.0).max(b.unwrap_or(0.0))),
        }
    }

    pub fn satisfies_cramer_rao(&self) -> bool {
        self.fi <= self.qfi + CRAMER_RAO_SLACK
    }

    /// `F/H`, when the QFI is nonzero.
    pub fn fi_ratio(&self) -> Option<f64> {
        (self.qfi > 0.0).then(|| self.fi / self.qfi)
    }

    pub fn qfi_bound(&self) -> Option<f64> {
        cramer_rao(self.qfi, self.meas_count).ok()
    }

    pub fn fi_bound(&self) -> Option<f64> {
        cramer_rao(self.fi, self.meas_count).ok()
    }
}
