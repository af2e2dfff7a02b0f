//! Discrete-time quantum walks as parameter-estimation probes.
//!
//! A walker on a graph carries a `D`-level coin. Each step applies a coin
//! rotation `C(θ) = exp(−iθT)` at every vertex and then moves amplitude
//! along the edge labelled by the coin state. The parameter θ is estimated
//! from the evolved state; this crate computes the state, its exact
//! θ-derivative, and the quantum and classical Fisher information.
//!
//! ```
//! use qwprobe::coin::{coin_matrix, Axis};
//! use qwprobe::evolution::{evolve_with_derivative, WalkConfig};
//! use qwprobe::metrology::qfi_pure;
//! use qwprobe::probes::{localized, optimal_coin_state};
//! use qwprobe::topology::{enhanced_graph, ShiftOperator};
//!
//! let graph = enhanced_graph(2, 8).unwrap();
//! let shift = ShiftOperator::from_graph(&graph).unwrap();
//! let cfg = WalkConfig::new(shift, coin_matrix(Axis::X, 0.3, 2).unwrap(), 8).unwrap();
//! let probe = localized(0, &optimal_coin_state(Axis::X, 2, 0.0).unwrap(), graph.n_vertices()).unwrap();
//! let pair = evolve_with_derivative(&cfg, &probe).unwrap();
//! assert!((qfi_pure(&pair) - 64.0).abs() < 1e-9);
//! ```

pub mod coin;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod metrology;
pub mod probes;
pub mod state;
pub mod topology;

pub use coin::{Axis, CoinOperator, CoinState};
pub use error::{Error, Result};
pub use evolution::{evolve, evolve_with_derivative, EvolvedPair, WalkConfig};
pub use state::{Amplitude, WalkerState};
pub use topology::{Graph, ShiftOperator};
