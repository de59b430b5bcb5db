//! Dense reference implementations and graph generators.
//!
//! Everything here trades speed for transparency: matrices are built
//! explicitly and cuts are enumerated exhaustively. The fast paths in the
//! rest of the crate are tested against these, and the `selftest`
//! subcommand runs a sample of the comparisons at startup.

use crate::graph::Graph;
use crate::operators::UpdateAccumulator;
use crate::vertex_set::VertexSet;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Largest `n` accepted by the exhaustive cut search.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Dense graph Laplacian.
pub fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut m = DMatrix::zeros(n, n);
    for (u, v, w) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        m[(u, u)] += w;
        m[(v, v)] += w;
        m[(u, v)] -= w;
        m[(v, u)] -= w;
    }
    m
}

/// Dense demand Laplacian `K = diag(mu) - mu mu'`.
pub fn dense_demand_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mu: Vec<f64> = (0..n).map(|i| g.mu(i as u32)).collect();
    DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { mu[i] } else { 0.0 };
        diag - mu[i] * mu[j]
    })
}

/// Dense Laplacian of the complete graph on `s` whose edge `{u, v}`
/// carries weight `mu_u mu_v`.
pub fn dense_subset_demand_laplacian(g: &Graph, s: &VertexSet) -> DMatrix<f64> {
    let n = g.n();
    let mut m = DMatrix::zeros(n, n);
    let members = s.to_vec();
    for (a, &u) in members.iter().enumerate() {
        for &v in &members[a + 1..] {
            let w = g.mu(u) * g.mu(v);
            let (u, v) = (u as usize, v as usize);
            m[(u, u)] += w;
            m[(v, v)] += w;
            m[(u, v)] -= w;
            m[(v, u)] -= w;
        }
    }
    m
}

/// Dense spread operator `R_i = (e_i - mu)(e_i - mu)'`.
pub fn dense_spread(g: &Graph, i: u32) -> DMatrix<f64> {
    let n = g.n();
    let mut e: Vec<f64> = (0..n).map(|j| -g.mu(j as u32)).collect();
    e[i as usize] += 1.0;
    DMatrix::from_fn(n, n, |r, c| e[r] * e[c])
}

/// Dense dual operator
/// `M(alpha, beta) = L / total_volume + sum_i beta_i R_i - alpha K`.
pub fn dense_dual_operator(g: &Graph, alpha: f64, beta: &[f64]) -> DMatrix<f64> {
    let n = g.n();
    assert_eq!(beta.len(), n);
    let mut m = dense_laplacian(g) / g.total_volume();
    m -= alpha * dense_demand_laplacian(g);
    for i in 0..n {
        if beta[i] != 0.0 {
            m += beta[i] * dense_spread(g, i as u32);
        }
    }
    m
}

/// Dense form of an accumulated update sum.
pub fn dense_update_sum(g: &Graph, acc: &UpdateAccumulator) -> DMatrix<f64> {
    let mut m = dense_laplacian(g) * acc.laplacian_coefficient();
    m += acc.demand_coefficient() * dense_demand_laplacian(g);
    for (i, &b) in acc.spread_coefficients().iter().enumerate() {
        if b != 0.0 {
            m += b * dense_spread(g, i as u32);
        }
    }
    m
}

/// Matrix exponential of a symmetric matrix via eigendecomposition.
pub fn dense_exp_symmetric(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let scale = m.amax().max(1.0);
    for i in 0..n {
        for j in 0..i {
            assert!(
                (m[(i, j)] - m[(j, i)]).abs() <= 1e-10 * scale,
                "matrix is not symmetric at ({i}, {j})"
            );
        }
    }
    let eig = SymmetricEigen::new(m.clone());
    let exp_vals = eig.eigenvalues.map(|l| l.exp());
    &eig.eigenvectors * DMatrix::from_diagonal(&exp_vals) * eig.eigenvectors.transpose()
}

/// Exhaustive minimum-conductance search over `b`-balanced cuts.
///
/// Enumerates all proper subsets with a Gray code so each step flips one
/// vertex, keeping the cut weight and volume incremental. Returns `None`
/// when no cut meets the balance requirement. Panics above
/// [`BRUTE_FORCE_LIMIT`] vertices.
pub fn brute_force_best_cut(g: &Graph, b: f64) -> Option<(VertexSet, f64)> {
    let n = g.n();
    assert!(n >= 2, "need at least two vertices");
    assert!(
        n <= BRUTE_FORCE_LIMIT,
        "brute force limited to {BRUTE_FORCE_LIMIT} vertices"
    );
    let total = g.total_volume();

    // conductance is symmetric under complement, so pin the last vertex
    // outside the enumerated side
    let mut in_s = vec![false; n];
    let mut w_to_s = vec![0.0; n];
    let mut vol = 0.0;
    let mut cut = 0.0;
    let mut best: Option<(Vec<bool>, f64)> = None;

    for k in 1u64..(1u64 << (n - 1)) {
        let v = k.trailing_zeros() as usize;
        let d = g.degree(v as u32);
        if in_s[v] {
            in_s[v] = false;
            vol -= d;
            cut -= d - 2.0 * w_to_s[v];
            for (u, w) in g.neighbors(v as u32) {
                w_to_s[u as usize] -= w;
            }
        } else {
            in_s[v] = true;
            vol += d;
            cut += d - 2.0 * w_to_s[v];
            for (u, w) in g.neighbors(v as u32) {
                w_to_s[u as usize] += w;
            }
        }
        let side = vol.min(total - vol);
        if side < b * total || side <= 0.0 {
            continue;
        }
        let phi = cut / side;
        if best.as_ref().is_none_or(|(_, bp)| phi < *bp) {
            best = Some((in_s.clone(), phi));
        }
    }
    best.map(|(mask, phi)| {
        let set: VertexSet = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i as u32)
            .collect();
        (set, phi)
    })
}

// ---- generators ----

pub fn path(n: usize) -> Graph {
    assert!(n >= 1);
    let edges: Vec<_> = (1..n as u32).map(|i| (i - 1, i, 1.0)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let mut edges: Vec<_> = (1..n as u32).map(|i| (i - 1, i, 1.0)).collect();
    edges.push((n as u32 - 1, 0, 1.0));
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            edges.push((u, v, 1.0));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Two `k`-cliques joined by `bridges` unit edges, pairing vertex `i` of
/// one clique with vertex `i` of the other. `barbell(5, 1)` has 21 edges.
pub fn barbell(k: usize, bridges: usize) -> Graph {
    assert!(k >= 2 && bridges >= 1 && bridges <= k);
    let mut edges = Vec::new();
    for side in 0..2u32 {
        let off = side * k as u32;
        for u in 0..k as u32 {
            for v in u + 1..k as u32 {
                edges.push((off + u, off + v, 1.0));
            }
        }
    }
    for i in 0..bridges as u32 {
        edges.push((i, k as u32 + i, 1.0));
    }
    Graph::from_edges(2 * k, &edges).unwrap()
}

/// Two `k`-cliques joined by a single bridge of the given weight.
pub fn dumbbell(k: usize, bridge_weight: f64) -> Graph {
    assert!(k >= 2);
    let mut edges = Vec::new();
    for side in 0..2u32 {
        let off = side * k as u32;
        for u in 0..k as u32 {
            for v in u + 1..k as u32 {
                edges.push((off + u, off + v, 1.0));
            }
        }
    }
    edges.push((0, k as u32, bridge_weight));
    Graph::from_edges(2 * k, &edges).unwrap()
}

/// Spine path of length `spine` with `legs` pendant leaves per spine
/// vertex. Vertices `0..spine` form the spine; leaves follow in spine
/// order.
pub fn caterpillar(spine: usize, legs: usize) -> Graph {
    assert!(spine >= 2);
    let mut edges: Vec<_> = (1..spine as u32).map(|i| (i - 1, i, 1.0)).collect();
    let mut next = spine as u32;
    for s in 0..spine as u32 {
        for _ in 0..legs {
            edges.push((s, next, 1.0));
            next += 1;
        }
    }
    Graph::from_edges(next as usize, &edges).unwrap()
}

/// One `head`-clique with `tails` pendant `tail`-cliques, each hanging off
/// a distinct head vertex by a bridge of weight `bridge_weight`.
pub fn pendant_cliques(head: usize, tail: usize, tails: usize, bridge_weight: f64) -> Graph {
    assert!(head >= 2 && tail >= 2 && tails >= 1 && tails <= head);
    let mut edges = Vec::new();
    for u in 0..head as u32 {
        for v in u + 1..head as u32 {
            edges.push((u, v, 1.0));
        }
    }
    let mut off = head as u32;
    for t in 0..tails as u32 {
        for u in 0..tail as u32 {
            for v in u + 1..tail as u32 {
                edges.push((off + u, off + v, 1.0));
            }
        }
        edges.push((t, off, bridge_weight));
        off += tail as u32;
    }
    Graph::from_edges(off as usize, &edges).unwrap()
}

/// Chain of cliques K(widths[0]) - K(widths[1]) - ..., consecutive
/// cliques joined by one bridge of weight `bridge_weight`. Vertices are
/// numbered clique by clique; each bridge runs between the first vertex
/// of one clique and the first vertex of the next.
pub fn clique_chain(widths: &[usize], bridge_weight: f64) -> Graph {
    assert!(widths.len() >= 2 && widths.iter().all(|&w| w >= 2));
    assert!(bridge_weight > 0.0);
    let mut edges = Vec::new();
    let mut off = 0u32;
    let mut prev_anchor = None;
    for &w in widths {
        for u in 0..w as u32 {
            for v in u + 1..w as u32 {
                edges.push((off + u, off + v, 1.0));
            }
        }
        if let Some(p) = prev_anchor {
            edges.push((p, off, bridge_weight));
        }
        prev_anchor = Some(off);
        off += w as u32;
    }
    Graph::from_edges(off as usize, &edges).unwrap()
}

/// Unit-weight `rows x cols` lattice; vertex `(r, c)` is `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    assert!(rows >= 1 && cols >= 1 && rows * cols >= 2);
    let mut edges = Vec::with_capacity(2 * rows * cols);
    let at = |r: usize, c: usize| (r * cols + c) as u32;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1), 1.0));
            }
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c), 1.0));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).unwrap()
}

/// Two halves of `n / 2` vertices each; every intra-half pair draws an
/// edge with probability `p_in`, every cross pair with `p_out`.
/// Resamples until connected. Returns the graph and the planted half.
pub fn planted_bisection(
    n: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> (Graph, VertexSet) {
    assert!(n >= 4 && n % 2 == 0);
    assert!((0.0..=1.0).contains(&p_in) && (0.0..=1.0).contains(&p_out));
    assert!(p_in > 0.0 || p_out > 0.0);
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                let same = (u as usize) < half && (v as usize) < half
                    || (u as usize) >= half && (v as usize) >= half;
                let p = if same { p_in } else { p_out };
                if rng.random::<f64>() < p {
                    edges.push((u, v, 1.0));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            let planted: VertexSet = (0..half as u32).collect();
            return (g, planted);
        }
    }
}

/// Random `d`-regular simple connected graph by the pairing model,
/// resampling until the pairing is simple and the graph connected.
/// Deterministic in `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Graph {
    assert!(d >= 2 && n > d && n * d % 2 == 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: loop {
        let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v, 1.0));
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators;

    #[test]
    fn dense_matches_implicit_operators() {
        let g = barbell(4, 2);
        let n = g.n();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let xv = DMatrix::from_column_slice(n, 1, &x);

        let mut y = vec![0.0; n];
        g.laplacian_matvec(&x, &mut y);
        let dy = dense_laplacian(&g) * &xv;
        for i in 0..n {
            assert!((y[i] - dy[(i, 0)]).abs() < 1e-12);
        }

        operators::demand_matvec(&g, &x, &mut y);
        let ky = dense_demand_laplacian(&g) * &xv;
        for i in 0..n {
            assert!((y[i] - ky[(i, 0)]).abs() < 1e-12);
        }

        operators::spread_matvec(&g, 3, &x, &mut y);
        let ry = dense_spread(&g, 3) * &xv;
        for i in 0..n {
            assert!((y[i] - ry[(i, 0)]).abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_demand_laplacian_is_deflated_identity() {
        // total_volume * D^{-1/2} K D^{-1/2} = I - vhat vhat'
        let g = caterpillar(4, 2);
        let n = g.n();
        let k = dense_demand_laplacian(&g);
        let tv = g.total_volume();
        let vhat: Vec<f64> = (0..n).map(|i| (g.degree(i as u32) / tv).sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = tv * k[(i, j)]
                    / (g.degree(i as u32).sqrt() * g.degree(j as u32).sqrt());
                let rhs = if i == j { 1.0 } else { 0.0 } - vhat[i] * vhat[j];
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::zeros(5, 5);
        let e = dense_exp_symmetric(&z);
        assert!((e - DMatrix::identity(5, 5)).amax() < 1e-14);
    }

    #[test]
    fn exp_inverse_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let raw = DMatrix::from_fn(6, 6, |_, _| rng.random::<f64>() - 0.5);
        let sym = (&raw + raw.transpose()) * 0.5;
        let p = dense_exp_symmetric(&sym);
        let m = dense_exp_symmetric(&(-&sym));
        assert!((p * m - DMatrix::identity(6, 6)).amax() < 1e-10);
    }

    #[test]
    fn brute_force_on_path4() {
        let g = path(4);
        let (cut, phi) = brute_force_best_cut(&g, 0.5).unwrap();
        assert!((phi - 1.0 / 3.0).abs() < 1e-15);
        let want: VertexSet = [0, 1].into_iter().collect();
        let comp = want.complement(4);
        assert!(cut == want || cut == comp);
    }

    #[test]
    fn brute_force_on_complete4() {
        let g = complete(4);
        let (_, phi) = brute_force_best_cut(&g, 0.5).unwrap();
        assert!((phi - 2.0 / 3.0).abs() < 1e-15);
        let (_, phi) = brute_force_best_cut(&g, 0.0).unwrap();
        assert!((phi - 2.0 / 3.0).abs() < 1e-15); // pairs still beat singletons
    }

    #[test]
    fn brute_force_respects_balance() {
        // dumbbell: global best is the bridge, which is perfectly balanced
        let g = dumbbell(4, 0.5);
        let (cut, phi) = brute_force_best_cut(&g, 0.5).unwrap();
        assert_eq!(cut.len(), 4);
        assert!((phi - 0.5 / 12.5).abs() < 1e-12);
        // impossible balance level
        assert!(brute_force_best_cut(&g, 0.51).is_none());
    }

    #[test]
    fn generator_shapes() {
        assert_eq!(barbell(5, 1).m(), 21);
        assert_eq!(barbell(5, 1).n(), 10);
        assert_eq!(dumbbell(3, 0.1).m(), 7);
        assert_eq!(path(6).m(), 5);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(complete(6).m(), 15);
        let c = caterpillar(3, 2);
        assert_eq!(c.n(), 9);
        assert_eq!(c.m(), 8);
        let p = pendant_cliques(6, 3, 2, 0.5);
        assert_eq!(p.n(), 12);
        assert_eq!(p.m(), 15 + 2 * 3 + 2);
        assert_eq!(p.degree(0), 5.0 + 0.5);
        assert!(p.is_connected());
    }

    #[test]
    fn clique_chain_shape_and_planted_cuts() {
        let g = clique_chain(&[6, 3, 3], 0.5);
        assert_eq!(g.n(), 12);
        assert_eq!(g.m(), 15 + 3 + 3 + 2);
        // suffix cuts only pay their one bridge
        let last: VertexSet = (9..12).collect();
        assert!((g.cut_weight(&last) - 0.5).abs() < 1e-15);
        let tail: VertexSet = (6..12).collect();
        assert!((g.cut_weight(&tail) - 0.5).abs() < 1e-15);
        assert!(g.is_connected());
    }

    #[test]
    fn grid_shape_and_degrees() {
        let g = grid(3, 4);
        assert_eq!(g.n(), 12);
        assert_eq!(g.m(), 3 * 3 + 2 * 4); // horizontal + vertical runs
        assert_eq!(g.degree(0), 2.0); // corner
        assert_eq!(g.degree(5), 4.0); // interior (1,1)
        assert!(g.is_connected());
    }

    #[test]
    fn planted_bisection_ground_truth_is_brute_optimum() {
        // dense halves, thin crossing: among cuts at least as balanced as
        // the planted half, enumeration finds nothing better
        for seed in 0..4 {
            let (g, planted) = planted_bisection(12, 0.95, 0.05, seed);
            assert!(g.is_connected());
            assert_eq!(planted.len(), 6);
            let planted_phi = g.conductance(&planted);
            let bal = g.measure(&planted).min(1.0 - g.measure(&planted));
            let (_, best) = brute_force_best_cut(&g, bal).unwrap();
            assert!(
                (planted_phi - best).abs() < 1e-12,
                "seed {seed}: {planted_phi} vs {best}"
            );
        }
    }

    #[test]
    fn random_regular_is_regular_connected_deterministic() {
        let g = random_regular(40, 3, 11);
        assert!(g.is_connected());
        assert!((0..40).all(|i| g.degree(i) == 3.0));
        let h = random_regular(40, 3, 11);
        let ge: Vec<_> = g.edges().collect();
        let he: Vec<_> = h.edges().collect();
        assert_eq!(ge, he);
        let k = random_regular(40, 3, 12);
        let ke: Vec<_> = k.edges().collect();
        assert_ne!(ge, ke);
    }
}
