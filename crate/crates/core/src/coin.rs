//! Coin space: spin-s rotation generators, rotation coins and their
//! θ-derivatives, basis changes and extremal eigenstates.
//!
//! Coin index `j` carries generator eigenvalue `m = s − j` with
//! `s = (D−1)/2`, so `T_z = diag(s, s−1, …, −s)` and the z-coin reads
//! `diag(e^{−iθs}, …, e^{iθs})`. For `D = 2` index 0 is the "−1" branch.
//!
//! The coin index set `{−s, …, s}` (odd `D`) or `{−s−½, …, −1, 1, …, s+½}`
//! (even `D`) is used for human-facing labels; see [`coin_labels`].

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(format!("unknown axis `{other}` (expected x, y or z)")),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

/// Coin labels in index order (ascending), e.g. `[-1, 1]` for `D = 2` and
/// `[-1, 0, 1]` for `D = 3`.
pub fn coin_labels(dim: usize) -> Vec<i32> {
    let half = (dim / 2) as i32;
    if dim % 2 == 1 {
        (-half..=half).collect()
    } else {
        (-half..=half).filter(|&m| m != 0).collect()
    }
}

/// Coin index of a label, if the label belongs to the `D`-dimensional set.
pub fn label_index(dim: usize, label: i32) -> Option<usize> {
    coin_labels(dim).iter().position(|&m| m == label)
}

/// Generator eigenvalues `s, s−1, …, −s` in coin-index order.
pub fn generator_eigenvalues(dim: usize) -> Vec<f64> {
    let s = (dim as f64 - 1.0) / 2.0;
    (0..dim).map(|j| s - j as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinGenerators {
    dim: usize,
    pub t_x: CMatrix,
    pub t_y: CMatrix,
    pub t_z: CMatrix,
}

impl SpinGenerators {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let s = (dim as f64 - 1.0) / 2.0;
        let m = generator_eigenvalues(dim);

        // S₊ raises m by one, i.e. moves coin index j → j−1.
        let mut raise = CMatrix::zeros(dim, dim);
        for j in 1..dim {
            let mj = m[j];
            raise[(j - 1, j)] = Complex64::new((s * (s + 1.0) - mj * (mj + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();

        let t_x = (&raise + &lower) * Complex64::new(0.5, 0.0);
        let t_y = (&raise - &lower) * (Complex64::new(1.0, 0.0) / (2.0 * I));
        let t_z = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            m.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        Ok(SpinGenerators { dim, t_x, t_y, t_z })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, axis: Axis) -> &CMatrix {
        match axis {
            Axis::X => &self.t_x,
            Axis::Y => &self.t_y,
            Axis::Z => &self.t_z,
        }
    }
}

/// Rotates `v` so its first non-negligible component is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    if let Some(lead) = v.iter().find(|c| c.norm() > 1e-12).copied() {
        let phase = lead.conj() / lead.norm();
        for c in v.iter_mut() {
            *c *= phase;
        }
    }
}

/// Orthonormal eigenvectors of a spin generator as columns, ordered by
/// descending eigenvalue, phase-fixed.
fn eigenbasis(generators: &SpinGenerators, axis: Axis) -> CMatrix {
    let dim = generators.dim;
    if axis == Axis::Z {
        return CMatrix::identity(dim, dim);
    }
    let eig = SymmetricEigen::new(generators.get(axis).clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut basis = CMatrix::zeros(dim, dim);
    for (col, &k) in order.iter().enumerate() {
        let mut v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= norm;
        }
        fix_phase(&mut v);
        for (row, c) in v.into_iter().enumerate() {
            basis[(row, col)] = c;
        }
    }
    basis
}

/// Unitaries taking the `T_z` eigenbasis to the `T_x` (`v`) and `T_y` (`w`)
/// eigenbases: `V T_z V† = T_x`, `W T_z W† = T_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisChange {
    dim: usize,
    pub v: CMatrix,
    pub w: CMatrix,
}

impl BasisChange {
    pub fn new(dim: usize) -> Result<Self> {
        let generators = SpinGenerators::new(dim)?;
        Ok(BasisChange {
            dim,
            v: eigenbasis(&generators, Axis::X),
            w: eigenbasis(&generators, Axis::Y),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

pub fn basis_change(dim: usize) -> Result<BasisChange> {
    BasisChange::new(dim)
}

/// A normalized coin vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinState(Vec<Complex64>);

impl CoinState {
    /// Normalizes `components`; fails on a zero or non-finite vector.
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        check_dim(components.len())?;
        if components
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "coin_state",
                reason: "non-finite component".into(),
            });
        }
        let norm = components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidParameter {
                name: "coin_state",
                reason: "zero vector".into(),
            });
        }
        Ok(CoinState(
            components.into_iter().map(|c| c / norm).collect(),
        ))
    }

    /// Coin basis vector with index `j`.
    pub fn basis(dim: usize, j: usize) -> Result<Self> {
        check_dim(dim)?;
        if j >= dim {
            return Err(Error::IndexOutOfRange { index: j, len: dim });
        }
        let mut v = vec![ZERO; dim];
        v[j] = Complex64::new(1.0, 0.0);
        Ok(CoinState(v))
    }

    /// `α|−1⟩ + e^{iγ}√(1−α²)|+1⟩` for a two-dimensional coin.
    pub fn qubit(alpha: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("{alpha} is outside [0, 1]"),
            });
        }
        if !gamma.is_finite() {
            return Err(Error::NonFiniteParameter(gamma));
        }
        let beta = Complex64::from_polar((1.0 - alpha * alpha).max(0.0).sqrt(), gamma);
        Ok(CoinState(vec![Complex64::new(alpha, 0.0), beta]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }
}

/// Eigenvectors of `T_axis` for the minimal and maximal eigenvalue `∓(D−1)/2`.
pub fn extremal_eigenstates(axis: Axis, dim: usize) -> Result<(CoinState, CoinState)> {
    let generators = SpinGenerators::new(dim)?;
    let basis = eigenbasis(&generators, axis);
    let column = |k: usize| CoinState(basis.column(k).iter().copied().collect());
    Ok((column(dim - 1), column(0)))
}

/// A rotation coin `C(θ) = exp(−iθ T_axis)` together with `∂_θ C = −i T C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    dim: usize,
    axis: Axis,
    theta: f64,
    matrix: CMatrix,
    derivative: CMatrix,
}

impl CoinOperator {
    pub fn rotation(axis: Axis, theta: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if !theta.is_finite() {
            return Err(Error::NonFiniteParameter(theta));
        }
        let generators = SpinGenerators::new(dim)?;
        let basis = eigenbasis(&generators, axis);
        let phases = nalgebra::DVector::from_iterator(
            dim,
            generator_eigenvalues(dim)
                .into_iter()
                .map(|m| Complex64::from_polar(1.0, -theta * m)),
        );
        let matrix = if axis == Axis::Z {
            CMatrix::from_diagonal(&phases)
        } else {
            &basis * CMatrix::from_diagonal(&phases) * basis.adjoint()
        };
        let derivative = generators.get(axis) * &matrix * (-I);
        Ok(CoinOperator {
            dim,
            axis,
            theta,
            matrix,
            derivative,
        })
    }

    /// Coin with an arbitrary unitary matrix and derivative; used for fault
    /// injection and composed coins.
    pub fn from_matrices(
        axis: Axis,
        theta: f64,
        matrix: CMatrix,
        derivative: CMatrix,
    ) -> Result<Self> {
        let dim = matrix.nrows();
        check_dim(dim)?;
        if !matrix.is_square() || derivative.shape() != matrix.shape() {
            return Err(Error::dims(
                format!("{dim}x{dim}"),
                format!("{:?}", derivative.shape()),
            ));
        }
        Ok(CoinOperator {
            dim,
            axis,
            theta,
            matrix,
            derivative,
        })
    }

    /// `self · fixed`, where `fixed` does not depend on θ.
    pub fn followed_by_fixed(&self, fixed: &CMatrix) -> Result<Self> {
        if fixed.shape() != self.matrix.shape() {
            return Err(Error::dims(
                format!("{:?}", self.matrix.shape()),
                format!("{:?}", fixed.shape()),
            ));
        }
        Ok(CoinOperator {
            dim: self.dim,
            axis: self.axis,
            theta: self.theta,
            matrix: &self.matrix * fixed,
            derivative: &self.derivative * fixed,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn derivative(&self) -> &CMatrix {
        &self.derivative
    }
}

pub fn coin_matrix(axis: Axis, theta: f64, dim: usize) -> Result<CoinOperator> {
    CoinOperator::rotation(axis, theta, dim)
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
