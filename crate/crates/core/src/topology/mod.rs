//! Graph topologies and their conditional shift operators.
//!
//! A [`Graph`] is a labeled digraph: each `(source, coin index)` pair has at
//! most one outgoing edge. [`ShiftOperator`] compiles it into per-label
//! position maps `π_j` and checks that the resulting walk is isometric.
//!
//! Two shapes are accepted:
//!
//! * every `π_j` injective (rings and other permutation-type shifts), or
//! * *merging layers*: sources that collide under some label must each be
//!   entered through a single, distinct coin label and must share all of
//!   their outgoing targets. The walk is then isometric on states where each
//!   such vertex only holds its entry label, which is exactly the support the
//!   shift itself produces. The topologically enhanced graphs are of this kind.

mod dsl;

use std::collections::{BTreeMap, BTreeSet};

use crate::coin::coin_labels;
use crate::error::{Error, Result};
use crate::state::WalkerState;

pub use dsl::parse_graph;

const NO_TARGET: usize = usize::MAX;

/// Amplitudes below this magnitude count as "no support".
const SUPPORT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Ring,
    /// Layered graph built for a finite number of steps.
    Enhanced {
        t_max: usize,
    },
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    /// Coin index, not the signed label.
    pub label: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n_vertices: usize,
    coin_dim: usize,
    /// `targets[source * D + label]`, `NO_TARGET` where there is no edge.
    targets: Vec<usize>,
    edge_count: usize,
    kind: GraphKind,
}

impl Graph {
    /// Builds a graph from 0-based edges. Rejects repeated `(source, label)`
    /// pairs and out-of-range indices.
    pub fn from_edges(
        n_vertices: usize,
        coin_dim: usize,
        edges: impl IntoIterator<Item = Edge>,
        kind: GraphKind,
    ) -> Result<Self> {
        if coin_dim < 2 {
            return Err(Error::InvalidDimension(coin_dim));
        }
        let labels = coin_labels(coin_dim);
        let mut targets = vec![NO_TARGET; n_vertices * coin_dim];
        let mut edge_count = 0;
        for e in edges {
            if e.label >= coin_dim {
                return Err(Error::InvalidParameter {
                    name: "label",
                    reason: format!("coin index {} >= D={coin_dim}", e.label),
                });
            }
            for v in [e.source, e.target] {
                if v >= n_vertices {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        len: n_vertices,
                    });
                }
            }
            let slot = &mut targets[e.source * coin_dim + e.label];
            if *slot != NO_TARGET {
                return Err(Error::DuplicateEdge {
                    line: 0,
                    source_vertex: e.source + 1,
                    label: labels[e.label],
                });
            }
            *slot = e.target;
            edge_count += 1;
        }
        Ok(Graph {
            n_vertices,
            coin_dim,
            targets,
            edge_count,
            kind,
        })
    }

    /// Ring of `n` sites with a two-dimensional coin: label −1 steps to
    /// `x − 1`, label +1 to `x + 1`, both modulo `n`.
    pub fn line(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize {
                size: n,
                reason: "a ring needs at least 3 sites".into(),
            });
        }
        let edges = (0..n).flat_map(|x| {
            [
                Edge {
                    source: x,
                    label: 0,
                    target: (x + n - 1) % n,
                },
                Edge {
                    source: x,
                    label: 1,
                    target: (x + 1) % n,
                },
            ]
        });
        Graph::from_edges(n, 2, edges, GraphKind::Ring)
    }

    /// Layered graph on `1 + t_max·D` vertices. Vertex 0 is the root, layer
    /// `ℓ ≥ 1` holds vertices `1 + (ℓ−1)D … ℓD`, and every vertex of layer
    /// `ℓ < t_max` sends coin index `j` to vertex `1 + ℓD + j`.
    pub fn enhanced(dim: usize, t_max: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if t_max < 1 {
            return Err(Error::InvalidSize {
                size: t_max,
                reason: "the enhanced graph needs at least one layer".into(),
            });
        }
        let n = 1 + t_max * dim;
        let mut edges = Vec::with_capacity(dim * dim * t_max);
        for layer in 0..t_max {
            let sources = if layer == 0 {
                0..1
            } else {
                1 + (layer - 1) * dim..1 + layer * dim
            };
            for source in sources {
                for j in 0..dim {
                    edges.push(Edge {
                        source,
                        label: j,
                        target: 1 + layer * dim + j,
                    });
                }
            }
        }
        Graph::from_edges(n, dim, edges, GraphKind::Enhanced { t_max })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn target(&self, source: usize, label: usize) -> Option<usize> {
        if source >= self.n_vertices || label >= self.coin_dim {
            return None;
        }
        match self.targets[source * self.coin_dim + label] {
            NO_TARGET => None,
            t => Some(t),
        }
    }

    /// Edges ordered by source, then coin index.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let d = self.coin_dim;
        self.targets
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NO_TARGET)
            .map(move |(i, &target)| Edge {
                source: i / d,
                label: i % d,
                target,
            })
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Same vertices, coin dimension and edges, regardless of kind.
    pub fn same_topology(&self, other: &Graph) -> bool {
        self.n_vertices == other.n_vertices
            && self.coin_dim == other.coin_dim
            && self.targets == other.targets
    }

    /// `A[target][source]`: number of edges from `source` to `target`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u32>> {
        let mut a = vec![vec![0u32; self.n_vertices]; self.n_vertices];
        for e in self.edges() {
            a[e.target][e.source] += 1;
        }
        a
    }

    /// Edge-list text accepted by [`parse_graph`].
    pub fn to_dsl(&self) -> String {
        dsl::write_graph(self)
    }
}

pub fn line_graph(n: usize) -> Result<Graph> {
    Graph::line(n)
}

pub fn enhanced_graph(dim: usize, t_max: usize) -> Result<Graph> {
    Graph::enhanced(dim, t_max)
}

/// Per-label position maps realizing the conditional shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperator {
    n_positions: usize,
    coin_dim: usize,
    /// `targets[x * D + j]`, `NO_TARGET` where undefined.
    targets: Vec<usize>,
    /// Vertices with an outgoing edge for every label.
    active: Vec<bool>,
    /// Entry label required of vertices that feed a merging layer.
    merge_label: Vec<Option<usize>>,
    all_active: bool,
}

impl ShiftOperator {
    pub fn from_graph(graph: &Graph) -> Result<Self> {
        let n = graph.n_vertices;
        let d = graph.coin_dim;
        let labels = coin_labels(d);

        let targets = graph.targets.clone();
        // Incoming coin index per vertex: NO_TARGET for none, MANY for several.
        const MANY: usize = NO_TARGET - 1;
        let mut incoming = vec![NO_TARGET; n];
        for e in graph.edges() {
            let slot = &mut incoming[e.target];
            *slot = match *slot {
                NO_TARGET => e.label,
                l if l == e.label => l,
                _ => MANY,
            };
        }
        let active: Vec<bool> = (0..n)
            .map(|x| targets[x * d..(x + 1) * d].iter().all(|&t| t != NO_TARGET))
            .collect();
        let entry_label: Vec<Option<usize>> = incoming
            .iter()
            .map(|&l| (l != NO_TARGET && l != MANY).then_some(l))
            .collect();

        let mut merge_label = vec![None; n];
        let mut first_source = vec![NO_TARGET; n];
        for j in 0..d {
            first_source.fill(NO_TARGET);
            let mut collisions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for x in 0..n {
                let t = targets[x * d + j];
                if t == NO_TARGET {
                    continue;
                }
                match first_source[t] {
                    NO_TARGET => first_source[t] = x,
                    first => collisions.entry(t).or_insert_with(|| vec![first]).push(x),
                }
            }
            for (target, sources) in collisions {
                let row = |x: usize| &targets[x * d..(x + 1) * d];
                let mut seen_entries = BTreeSet::new();
                for &x in &sources {
                    let valid = entry_label[x].is_some_and(|l| seen_entries.insert(l))
                        && row(x) == row(sources[0]);
                    if !valid {
                        let other = if x == sources[0] {
                            sources[1]
                        } else {
                            sources[0]
                        };
                        return Err(Error::NonInjectiveLabelMap {
                            label: labels[j],
                            first: other.min(x) + 1,
                            second: other.max(x) + 1,
                            target: target + 1,
                        });
                    }
                }
                for &x in &sources {
                    merge_label[x] = entry_label[x];
                }
            }
        }

        Ok(ShiftOperator {
            n_positions: n,
            coin_dim: d,
            all_active: active.iter().all(|&a| a),
            targets,
            active,
            merge_label,
        })
    }

    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    /// `π_j(x)`, if defined.
    pub fn target(&self, x: usize, j: usize) -> Option<usize> {
        match self.targets[x * self.coin_dim + j] {
            NO_TARGET => None,
            t => Some(t),
        }
    }

    /// Whether `x` lies in the domain of every label map.
    pub fn is_active(&self, x: usize) -> bool {
        self.active[x]
    }

    /// True when every `π_j` is a permutation of all vertices.
    pub fn is_permutation(&self) -> bool {
        self.all_active && self.merge_label.iter().all(Option::is_none)
    }

    pub(crate) fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Checks that `amplitudes` can be stepped: no support outside the
    /// domain and merge-feeding vertices hold only their entry label.
    pub(crate) fn check_support(&self, amplitudes: &[num_complex::Complex64]) -> Result<()> {
        let d = self.coin_dim;
        let has_merges = self.merge_label.iter().any(Option::is_some);
        if self.all_active && !has_merges {
            return Ok(());
        }
        for (x, site) in amplitudes.chunks_exact(d).enumerate() {
            let occupied = || site.iter().any(|a| a.norm() > SUPPORT_EPS);
            if !self.active[x] && occupied() {
                return Err(Error::HorizonExceeded { vertex: x + 1 });
            }
            if let Some(entry) = self.merge_label[x] {
                if let Some(k) = (0..d).find(|&k| k != entry && site[k].norm() > SUPPORT_EPS) {
                    return Err(Error::UnsortedMergeInput {
                        vertex: x + 1,
                        label: coin_labels(d)[k],
                    });
                }
            }
        }
        Ok(())
    }

    /// Applies the shift alone (no coin) to a state.
    pub fn apply(&self, state: &WalkerState) -> Result<WalkerState> {
        if state.n_positions() != self.n_positions || state.coin_dim() != self.coin_dim {
            return Err(Error::dims(
                format!("{}x{}", self.n_positions, self.coin_dim),
                format!("{}x{}", state.n_positions(), state.coin_dim()),
            ));
        }
        self.check_support(state.amplitudes())?;
        let d = self.coin_dim;
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); state.amplitudes().len()];
        for (idx, a) in state.amplitudes().iter().enumerate() {
            let t = self.targets[idx];
            if t != NO_TARGET {
                out[t * d + idx % d] += a;
            }
        }
        Ok(WalkerState::from_parts_unchecked(
            self.n_positions,
            d,
            out,
            state.is_normalized(),
        ))
    }
}

pub fn shift_from_graph(graph: &Graph) -> Result<ShiftOperator> {
    ShiftOperator::from_graph(graph)
}
