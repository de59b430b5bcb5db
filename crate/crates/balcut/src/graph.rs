//! Compressed sparse row storage for weighted undirected graphs, plus the
//! cut arithmetic the rest of the crate is built on.
//!
//! Conventions used throughout the crate:
//!
//! * `d(i)` is the weighted degree of vertex `i`, the sum of incident edge
//!   weights.
//! * `vol(S)` is the sum of degrees over `S`; `total_volume` is `vol(V)`,
//!   twice the total edge weight.
//! * `mu(i) = d(i) / total_volume` is the degree measure, so `mu(V) = 1`.
//! * The conductance of a nonempty proper subset is
//!   `phi(S) = w(E(S, S̄)) / min(vol(S), vol(S̄))`; a set is `b`-balanced
//!   when `min(vol(S), vol(S̄)) >= b * total_volume`.
//!
//! Edge weights must be positive and finite. Self loops and duplicate
//! edges are rejected at construction. Vertices with no incident edges are
//! permitted (they form their own connected components) but the spectral
//! pipeline requires positive degrees, which [`crate::driver`] enforces.

use crate::vertex_set::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has endpoint outside 0..{n}")]
    EndpointOutOfRange { u: u32, v: u32, n: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: u32, v: u32 },
    #[error("edge ({u}, {v}) has non-positive or non-finite weight {w}")]
    BadWeight { u: u32, v: u32, w: f64 },
}

/// Weighted undirected graph in CSR form. Adjacency rows are sorted by
/// neighbor id.
#[derive(Clone, Debug)]
pub struct Graph {
    xadj: Vec<usize>,
    adjncy: Vec<u32>,
    adjwgt: Vec<f64>,
    degrees: Vec<f64>,
    total_volume: f64,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on vertex set `0..n` from an undirected edge list.
    /// Each unordered pair may appear at most once, in either orientation.
    pub fn from_edges(n: usize, edges: &[(u32, u32, f64)]) -> Result<Graph, GraphError> {
        for &(u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(GraphError::BadWeight { u, v, w });
            }
        }

        let mut counts = vec![0usize; n];
        for &(u, v, _) in edges {
            counts[u as usize] += 1;
            counts[v as usize] += 1;
        }
        let mut xadj = vec![0usize; n + 1];
        for i in 0..n {
            xadj[i + 1] = xadj[i] + counts[i];
        }
        let mut adjncy = vec![0u32; 2 * edges.len()];
        let mut adjwgt = vec![0f64; 2 * edges.len()];
        let mut cursor = xadj[..n].to_vec();
        for &(u, v, w) in edges {
            adjncy[cursor[u as usize]] = v;
            adjwgt[cursor[u as usize]] = w;
            cursor[u as usize] += 1;
            adjncy[cursor[v as usize]] = u;
            adjwgt[cursor[v as usize]] = w;
            cursor[v as usize] += 1;
        }

        // sort each row by neighbor id, then scan for duplicates
        for i in 0..n {
            let lo = xadj[i];
            let hi = xadj[i + 1];
            let mut row: Vec<(u32, f64)> = adjncy[lo..hi]
                .iter()
                .copied()
                .zip(adjwgt[lo..hi].iter().copied())
                .collect();
            row.sort_unstable_by_key(|&(v, _)| v);
            for k in 1..row.len() {
                if row[k].0 == row[k - 1].0 {
                    return Err(GraphError::DuplicateEdge {
                        u: i as u32,
                        v: row[k].0,
                    });
                }
            }
            for (k, (v, w)) in row.into_iter().enumerate() {
                adjncy[lo + k] = v;
                adjwgt[lo + k] = w;
            }
        }

        let degrees: Vec<f64> = (0..n)
            .map(|i| adjwgt[xadj[i]..xadj[i + 1]].iter().sum())
            .collect();
        let total_volume = degrees.iter().sum();
        Ok(Graph {
            xadj,
            adjncy,
            adjwgt,
            degrees,
            total_volume,
            edge_count: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.xadj.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.edge_count
    }

    /// Weighted degree of `i`.
    pub fn degree(&self, i: u32) -> f64 {
        self.degrees[i as usize]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Sum of all degrees, twice the total edge weight.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// Total edge weight, `total_volume / 2`. Equals `m` for unit weights.
    pub fn total_edge_weight(&self) -> f64 {
        self.total_volume / 2.0
    }

    /// Degree measure `mu(i) = d(i) / total_volume`.
    pub fn mu(&self, i: u32) -> f64 {
        self.degrees[i as usize] / self.total_volume
    }

    pub fn neighbor_count(&self, i: u32) -> usize {
        self.xadj[i as usize + 1] - self.xadj[i as usize]
    }

    /// Neighbors of `i` with edge weights, ascending by neighbor id.
    pub fn neighbors(&self, i: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        let lo = self.xadj[i as usize];
        let hi = self.xadj[i as usize + 1];
        self.adjncy[lo..hi]
            .iter()
            .copied()
            .zip(self.adjwgt[lo..hi].iter().copied())
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn volume(&self, s: &VertexSet) -> f64 {
        s.iter().map(|v| self.degrees[v as usize]).sum()
    }

    /// Degree measure of a set, `vol(S) / total_volume`.
    pub fn measure(&self, s: &VertexSet) -> f64 {
        self.volume(s) / self.total_volume
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn cut_weight(&self, s: &VertexSet) -> f64 {
        let mut w = 0.0;
        for v in s.iter() {
            for (u, wu) in self.neighbors(v) {
                if !s.contains(u) {
                    w += wu;
                }
            }
        }
        w
    }

    /// `phi(S) = w(E(S, S̄)) / min(vol S, vol S̄)`. Infinite for the empty
    /// set and for all of `V`, where the denominator vanishes.
    pub fn conductance(&self, s: &VertexSet) -> f64 {
        let vol = self.volume(s);
        let side = vol.min(self.total_volume - vol);
        if side <= 0.0 {
            return f64::INFINITY;
        }
        self.cut_weight(s) / side
    }

    /// `min(vol S, vol S̄) >= b * total_volume`.
    pub fn is_b_balanced(&self, s: &VertexSet, b: f64) -> bool {
        let vol = self.volume(s);
        vol.min(self.total_volume - vol) >= b * self.total_volume
    }

    /// Quadratic form of the weighted Laplacian,
    /// `x' L x = sum over edges of w * (x_u - x_v)^2`.
    pub fn laplacian_quadratic(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n());
        self.edges()
            .map(|(u, v, w)| {
                let d = x[u as usize] - x[v as usize];
                w * d * d
            })
            .sum()
    }

    /// `y = L x` with `(Lx)_i = d_i x_i - sum_j w_ij x_j`.
    pub fn laplacian_matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n());
        assert_eq!(y.len(), self.n());
        for i in 0..self.n() {
            let mut acc = self.degrees[i] * x[i];
            for (j, w) in self.neighbors(i as u32) {
                acc -= w * x[j as usize];
            }
            y[i] = acc;
        }
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::with_capacity(n);
            seen[start] = true;
            queue.push(start as u32);
            comp.insert(start as u32);
            while let Some(v) = queue.pop() {
                for (u, _) in self.neighbors(v) {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        comp.insert(u);
                        queue.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Induced subgraph on `s`. Returns the subgraph and the original id of
    /// each new vertex; new ids follow the ascending order of `s`. Edges
    /// leaving `s` are dropped.
    pub fn subgraph(&self, s: &VertexSet) -> (Graph, Vec<u32>) {
        let old_ids = s.to_vec();
        let mut new_id = vec![u32::MAX; self.n()];
        for (k, &v) in old_ids.iter().enumerate() {
            new_id[v as usize] = k as u32;
        }
        let mut edges = Vec::new();
        for &v in &old_ids {
            for (u, w) in self.neighbors(v) {
                if v < u && s.contains(u) {
                    edges.push((new_id[v as usize], new_id[u as usize], w));
                }
            }
        }
        let g = Graph::from_edges(old_ids.len(), &edges)
            .expect("induced subgraph of a valid graph is valid");
        (g, old_ids)
    }
}
