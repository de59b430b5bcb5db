//! The case oracle: decide whether an embedding rounds or yields a dual
//! update.
//!
//! Given a normalized embedding (unit demand energy), exactly one of
//! three things happens:
//!
//! 1. **Edge energy case.** The mean squared edge stretch is large,
//!    `(L . X) / total_volume >= 2 gamma`. The embedding itself violates
//!    the primal edge constraint by a factor two, and the bare dual
//!    `(alpha, beta) = (gamma, 0)` makes progress.
//! 2. **Roundable.** After discarding the few vertices further than
//!    `32 (1 - b) / b` from the center of mass (by Markov their measure
//!    is at most `b / (32 (1 - b))`), the remaining vertices still carry
//!    pairwise spread at least `1/64`. Such an embedding feeds
//!    [`crate::rounding`].
//! 3. **Sweep case.** Otherwise the spread concentrates on a small
//!    group of far vertices, and sweeping prefixes of the radius order
//!    must produce a low-conductance cut `B` of measure below `b / 8`.
//!    The update `alpha = 7 gamma / 8`, `beta_i = mu_i gamma` on `B`
//!    penalizes exactly the vertices the cut isolates.
//!
//! A sweep case where no prefix beats the `sweep_constant * sqrt(gamma)`
//! conductance threshold is a contract violation
//! ([`OracleError::SweepCutMissing`]), not a recoverable outcome.

use crate::expsketch::Embedding;
use crate::graph::Graph;
use crate::vertex_set::VertexSet;
use serde::Serialize;
use thiserror::Error;

/// Radius cutoff factor for the excluded set.
pub const RADIUS_EXCLUSION_FACTOR: f64 = 32.0;
/// Pairwise spread threshold that makes an embedding roundable.
pub const ROUNDABLE_SPREAD: f64 = 1.0 / 64.0;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(
        "no sweep prefix reaches conductance {threshold:.6e} (best seen {best:.6e}); \
         the embedding violates the oracle contract"
    )]
    SweepCutMissing { best: f64, threshold: f64 },
    #[error("sweep precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OracleConfig {
    /// Leading constant of the sweep-case conductance threshold
    /// `sweep_constant * sqrt(gamma)`.
    pub sweep_constant: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            sweep_constant: 2048.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleCase {
    EdgeEnergy,
    Sweep,
}

/// A dual update emitted by the oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCertificate {
    pub alpha: f64,
    pub beta: Vec<f64>,
    /// Vertices penalized by `beta`; empty in the edge energy case.
    pub cut: VertexSet,
    pub case: OracleCase,
}

#[derive(Clone, Debug)]
pub enum OracleOutcome {
    /// The embedding has enough well-spread mass to round.
    Roundable,
    Certificate(OracleCertificate),
}

/// Runs the case analysis on a normalized embedding.
pub fn run_oracle(
    g: &Graph,
    emb: &Embedding,
    gamma: f64,
    b: f64,
    cfg: &OracleConfig,
) -> Result<OracleOutcome, OracleError> {
    let n = g.n();
    assert_eq!(emb.n(), n);
    assert!(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    assert!(b > 0.0 && b <= 0.5, "balance must lie in (0, 1/2]");

    let avg = emb.mu_average(g);
    let radii2: Vec<f64> = (0..n as u32).map(|i| emb.spread(i, &avg)).collect();

    // excluded set and its Markov budget; a violation means the embedding
    // was not normalized
    let sigma2 = RADIUS_EXCLUSION_FACTOR * (1.0 - b) / b;
    let excluded_measure: f64 = (0..n)
        .filter(|&i| radii2[i] > sigma2)
        .map(|i| g.mu(i as u32))
        .sum();
    let markov_budget = b / (RADIUS_EXCLUSION_FACTOR * (1.0 - b));
    assert!(
        excluded_measure <= markov_budget * (1.0 + 1e-5),
        "excluded measure {excluded_measure} exceeds Markov budget {markov_budget}; \
         embedding is not normalized"
    );

    // case 1: edge energy
    let edge_energy = emb.edge_energy(g);
    log::debug!(
        "oracle: edge_energy={edge_energy:.6e} excluded_measure={excluded_measure:.6e}"
    );
    if edge_energy / 2.0 >= 2.0 * gamma {
        return Ok(OracleOutcome::Certificate(OracleCertificate {
            alpha: gamma,
            beta: vec![0.0; n],
            cut: VertexSet::new(),
            case: OracleCase::EdgeEnergy,
        }));
    }

    // case 2: spread within the kept set
    let kept_measure = 1.0 - excluded_measure;
    let mut kept_avg = vec![0.0; emb.k()];
    for i in 0..n {
        if radii2[i] <= sigma2 {
            let mi = g.mu(i as u32);
            for (a, x) in kept_avg.iter_mut().zip(emb.vertex(i as u32)) {
                *a += mi * x;
            }
        }
    }
    for a in &mut kept_avg {
        *a /= kept_measure;
    }
    let kept_variance: f64 = (0..n)
        .filter(|&i| radii2[i] <= sigma2)
        .map(|i| g.mu(i as u32) * emb.spread(i as u32, &kept_avg))
        .sum::<f64>()
        / kept_measure;
    log::debug!("oracle: kept_variance={kept_variance:.6e}");
    if 2.0 * kept_variance >= ROUNDABLE_SPREAD {
        return Ok(OracleOutcome::Roundable);
    }

    // case 3: radial sweep
    let table = radial_sweep(g, &radii2, b);
    let threshold = cfg.sweep_constant * gamma.sqrt();
    let mut chosen: Option<usize> = None;
    let mut best = f64::INFINITY;
    for p in 0..table.z.saturating_sub(1) {
        best = best.min(table.conductance[p]);
        if table.conductance[p] <= threshold {
            chosen = Some(p);
        }
    }
    let p = chosen.ok_or(OracleError::SweepCutMissing { best, threshold })?;
    let cut: VertexSet = table.order[..=p].iter().copied().collect();
    log::debug!(
        "oracle: sweep prefix {} of {} conductance {:.6e} measure {:.6e}",
        p + 1,
        table.z,
        table.conductance[p],
        g.measure(&cut)
    );
    let mut beta = vec![0.0; n];
    for v in cut.iter() {
        beta[v as usize] = g.mu(v) * gamma;
    }
    let alpha = 7.0 * gamma / 8.0;
    // measure below b/8 keeps the dual objective above 3 gamma / 4
    let value = crate::sdp::dual_value(alpha, &beta, b);
    assert!(
        value >= 0.75 * gamma * (1.0 - 1e-9),
        "sweep dual value {value} fell below 3 gamma / 4"
    );
    Ok(OracleOutcome::Certificate(OracleCertificate {
        alpha,
        beta,
        cut,
        case: OracleCase::Sweep,
    }))
}

/// Prefix cuts of the radius order, largest radius first, ties broken by
/// vertex id. The table stops at `z`, the first prefix of measure at
/// least `b / 8`; entry `p` describes the prefix of length `p + 1`.
#[derive(Clone, Debug)]
pub struct SweepTable {
    pub order: Vec<u32>,
    pub cut_weight: Vec<f64>,
    pub volume: Vec<f64>,
    pub conductance: Vec<f64>,
    /// Length of the shortest prefix with measure at least `b / 8`.
    pub z: usize,
}

pub fn radial_sweep(g: &Graph, radii2: &[f64], b: f64) -> SweepTable {
    let n = g.n();
    assert_eq!(radii2.len(), n);
    assert!(radii2.iter().all(|r| r.is_finite()));
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &bb| {
        radii2[bb as usize]
            .total_cmp(&radii2[a as usize])
            .then(a.cmp(&bb))
    });

    let total = g.total_volume();
    let target = b / 8.0 * total;
    let mut in_prefix = vec![false; n];
    let mut cut = 0.0;
    let mut vol = 0.0;
    let mut cut_weight = Vec::new();
    let mut volume = Vec::new();
    let mut conductance = Vec::new();
    let mut z = n;
    for (p, &v) in order.iter().enumerate() {
        let mut to_prefix = 0.0;
        for (u, w) in g.neighbors(v) {
            if in_prefix[u as usize] {
                to_prefix += w;
            }
        }
        in_prefix[v as usize] = true;
        vol += g.degree(v);
        cut += g.degree(v) - 2.0 * to_prefix;
        cut_weight.push(cut);
        volume.push(vol);
        let side = vol.min(total - vol);
        conductance.push(if side > 0.0 { cut / side } else { f64::INFINITY });
        if vol >= target {
            z = p + 1;
            break;
        }
    }
    order.truncate(cut_weight.len().max(z));
    SweepTable {
        order,
        cut_weight,
        volume,
        conductance,
        z,
    }
}

/// A prefix cut of a sweep vector together with the bound it satisfies.
#[derive(Clone, Debug)]
pub struct CheegerCut {
    pub cut: VertexSet,
    pub conductance: f64,
    /// `sqrt(2 x' L x) / sigma`; the returned conductance never exceeds
    /// it when the preconditions hold.
    pub bound: f64,
}

/// Sweeps a nonnegative vector supported on at most half the volume and
/// returns the best prefix of length at least `k` (1-based, in the order
/// of decreasing entries).
///
/// Preconditions, checked: `x >= 0` entrywise, `mu(supp x) <= 1/2`,
/// `x' D x <= 1`, and the tail starting at position `k` holds degree
/// mass `sum_{pos >= k} d x^2 >= sigma`. Under these the best prefix has
/// conductance at most `sqrt(2 x' L x) / sigma`.
pub fn cheeger_sweep_bound(
    g: &Graph,
    x: &[f64],
    k: usize,
    sigma: f64,
) -> Result<CheegerCut, OracleError> {
    let n = g.n();
    assert_eq!(x.len(), n);
    assert!(sigma > 0.0);
    if let Some(i) = (0..n).find(|&i| !(x[i] >= 0.0)) {
        return Err(OracleError::PreconditionViolated(format!(
            "entry {i} is {}, expected nonnegative",
            x[i]
        )));
    }
    let supp_measure: f64 = (0..n)
        .filter(|&i| x[i] > 0.0)
        .map(|i| g.mu(i as u32))
        .sum();
    if supp_measure > 0.5 + 1e-12 {
        return Err(OracleError::PreconditionViolated(format!(
            "support holds measure {supp_measure}, expected at most 1/2"
        )));
    }
    let dnorm: f64 = (0..n).map(|i| g.degree(i as u32) * x[i] * x[i]).sum();
    if dnorm > 1.0 + 1e-9 {
        return Err(OracleError::PreconditionViolated(format!(
            "x' D x = {dnorm}, expected at most 1"
        )));
    }

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| x[b as usize].total_cmp(&x[a as usize]).then(a.cmp(&b)));
    let nnz = order.iter().filter(|&&v| x[v as usize] > 0.0).count();
    if k == 0 || k > nnz {
        return Err(OracleError::PreconditionViolated(format!(
            "prefix start {k} outside 1..={nnz}"
        )));
    }
    let tail: f64 = order[k - 1..nnz]
        .iter()
        .map(|&v| g.degree(v) * x[v as usize] * x[v as usize])
        .sum();
    if tail < sigma - 1e-9 {
        return Err(OracleError::PreconditionViolated(format!(
            "tail mass {tail} below sigma = {sigma}"
        )));
    }

    let total = g.total_volume();
    let mut in_prefix = vec![false; n];
    let mut cut = 0.0;
    let mut vol = 0.0;
    let mut best: Option<(usize, f64)> = None;
    for (p, &v) in order[..nnz].iter().enumerate() {
        let mut to_prefix = 0.0;
        for (u, w) in g.neighbors(v) {
            if in_prefix[u as usize] {
                to_prefix += w;
            }
        }
        in_prefix[v as usize] = true;
        vol += g.degree(v);
        cut += g.degree(v) - 2.0 * to_prefix;
        if p + 1 < k {
            continue;
        }
        let side = vol.min(total - vol);
        let phi = if side > 0.0 { cut / side } else { f64::INFINITY };
        if best.is_none_or(|(_, bp)| phi < bp) {
            best = Some((p, phi));
        }
    }
    let (p, conductance) = best.expect("k <= nnz guarantees at least one prefix");
    let bound = (2.0 * g.laplacian_quadratic(x)).sqrt() / sigma;
    Ok(CheegerCut {
        cut: order[..=p].iter().copied().collect(),
        conductance,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsketch::{dense_embedding, Embedding};
    use crate::operators::UpdateAccumulator;
    use crate::reference::{complete, dumbbell, path, random_regular};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// One-dimensional embedding with exact unit demand energy.
    fn line_embedding(g: &Graph, positions: &[f64]) -> Embedding {
        let n = g.n();
        let mean: f64 = (0..n).map(|i| g.mu(i as u32) * positions[i]).sum();
        let var: f64 = (0..n)
            .map(|i| g.mu(i as u32) * (positions[i] - mean) * (positions[i] - mean))
            .sum();
        let scale = 1.0 / var.sqrt();
        let data: Vec<f64> = positions.iter().map(|p| p * scale).collect();
        Embedding::from_columns(data, 1, n)
    }

    #[test]
    fn fresh_path_yields_edge_energy_case() {
        // fresh embedding of P4 has mean edge stretch 8/3
        let g = path(4);
        let acc = UpdateAccumulator::new(4);
        let emb = dense_embedding(&g, &acc, 0.5);
        assert!((emb.edge_energy(&g) - 8.0 / 3.0).abs() < 1e-9);
        let out = run_oracle(&g, &emb, 0.1, 0.5, &OracleConfig::default()).unwrap();
        match out {
            OracleOutcome::Certificate(c) => {
                assert_eq!(c.case, OracleCase::EdgeEnergy);
                assert_eq!(c.alpha, 0.1);
                assert!(c.beta.iter().all(|&b| b == 0.0));
                assert!(c.cut.is_empty());
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn separated_dumbbell_is_roundable() {
        // weak bridge, sides pushed apart: low edge energy, high spread
        let g = dumbbell(8, 0.01);
        let pos: Vec<f64> = (0..16).map(|i| if i < 8 { -1.0 } else { 1.0 }).collect();
        let emb = line_embedding(&g, &pos);
        let out = run_oracle(&g, &emb, 0.01, 0.5, &OracleConfig::default()).unwrap();
        assert!(matches!(out, OracleOutcome::Roundable));
    }

    fn pendant_pair_graph() -> (Graph, Vec<f64>) {
        // K16 at the origin, a weakly attached 2-clique far away
        let mut edges = Vec::new();
        for u in 0..16u32 {
            for v in u + 1..16 {
                edges.push((u, v, 1.0));
            }
        }
        edges.push((0, 16, 0.01));
        edges.push((16, 17, 1.0));
        let g = Graph::from_edges(18, &edges).unwrap();
        let mut pos = vec![0.0; 18];
        pos[16] = 1.0;
        pos[17] = 1.0;
        (g, pos)
    }

    use crate::graph::Graph;

    #[test]
    fn far_light_cluster_yields_sweep_case() {
        let (g, pos) = pendant_pair_graph();
        let emb = line_embedding(&g, &pos);
        let gamma = 0.01;
        let out = run_oracle(&g, &emb, gamma, 0.5, &OracleConfig::default()).unwrap();
        match out {
            OracleOutcome::Certificate(c) => {
                assert_eq!(c.case, OracleCase::Sweep);
                assert_eq!(c.cut.to_vec(), vec![16, 17]);
                assert!((c.alpha - 7.0 * gamma / 8.0).abs() < 1e-15);
                for v in 0..18u32 {
                    let want = if c.cut.contains(v) { g.mu(v) * gamma } else { 0.0 };
                    assert_eq!(c.beta[v as usize], want);
                }
            }
            other => panic!("expected sweep certificate, got {other:?}"),
        }
    }

    #[test]
    fn tiny_sweep_constant_reports_missing_cut() {
        let (g, pos) = pendant_pair_graph();
        let emb = line_embedding(&g, &pos);
        let cfg = OracleConfig {
            sweep_constant: 1e-6,
        };
        match run_oracle(&g, &emb, 0.01, 0.5, &cfg) {
            Err(OracleError::SweepCutMissing { best, threshold }) => {
                assert!(best > threshold);
            }
            other => panic!("expected SweepCutMissing, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "Markov budget")]
    fn unnormalized_embedding_trips_markov_assert() {
        let g = complete(6);
        // variance far above one: every vertex lands outside the radius
        let pos: Vec<f64> = (0..6).map(|i| 1e3 * (i as f64 - 2.5)).collect();
        let n = g.n();
        let emb = Embedding::from_columns(pos, 1, n);
        let _ = run_oracle(&g, &emb, 0.01, 0.5, &OracleConfig::default());
    }

    #[test]
    fn radial_sweep_truncates_at_measure_threshold() {
        // unweighted path: the very first prefix holds measure 1/14,
        // already past b/8 = 1/16
        let g = path(8);
        let radii2: Vec<f64> = (0..8).map(|i| 10.0 - i as f64).collect();
        let table = radial_sweep(&g, &radii2, 0.5);
        assert_eq!(table.z, 1);
        assert_eq!(table.order[0], 0);
        assert_eq!(table.cut_weight[0], 1.0);
        assert_eq!(table.conductance[0], 1.0);

        // a light first vertex pushes the crossing to the second prefix
        let g = Graph::from_edges(
            4,
            &[(0, 1, 0.05), (1, 2, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        // volume 4.1, target 4.1/16 = 0.25625; prefix volumes 0.05, 1.1
        let radii2 = vec![4.0, 3.0, 2.0, 1.0];
        let table = radial_sweep(&g, &radii2, 0.5);
        assert_eq!(table.z, 2);
        assert_eq!(table.order[..2], [0, 1]);
        assert_eq!(table.volume[1], 1.1);
        assert!((table.cut_weight[1] - 1.0).abs() < 1e-15);
        assert!((table.conductance[1] - 1.0 / 1.1).abs() < 1e-15);
    }

    #[test]
    fn radial_sweep_breaks_ties_by_vertex_id() {
        let g = complete(5);
        let radii2 = vec![1.0; 5];
        let table = radial_sweep(&g, &radii2, 0.5);
        assert_eq!(table.order[0], 0);
        assert_eq!(table.z, 1); // single vertex holds measure 1/5 >= 1/16
    }

    #[test]
    fn cheeger_sweep_respects_bound_on_random_instances() {
        for seed in 0..30u64 {
            let g = random_regular(24, 3, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let n = g.n();
            // nonnegative vector on a random half of the vertices
            let mut x = vec![0.0; n];
            let mut picked: Vec<usize> = (0..n).collect();
            picked.shuffle(&mut rng);
            for &i in picked.iter().take(n / 2) {
                x[i] = rng.random::<f64>();
            }
            let dnorm: f64 = (0..n).map(|i| g.degree(i as u32) * x[i] * x[i]).sum();
            for v in &mut x {
                *v /= dnorm.sqrt();
            }
            let k = 1 + (seed as usize % 3);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
            let sigma: f64 = order[k - 1..]
                .iter()
                .filter(|&&v| x[v] > 0.0)
                .map(|&v| g.degree(v as u32) * x[v] * x[v])
                .sum();
            let got = cheeger_sweep_bound(&g, &x, k, sigma).unwrap();
            assert!(
                got.conductance <= got.bound + 1e-12,
                "seed {seed}: {} > {}",
                got.conductance,
                got.bound
            );
            assert!(got.cut.len() >= k);
        }
    }

    #[test]
    fn cheeger_sweep_rejects_bad_inputs() {
        let g = path(6);
        let ok = [0.0, 0.0, 0.0, 0.1, 0.2, 0.3];
        assert!(matches!(
            cheeger_sweep_bound(&g, &[0.1, -0.1, 0.0, 0.0, 0.0, 0.0], 1, 0.01),
            Err(OracleError::PreconditionViolated(_))
        ));
        // support too heavy
        assert!(matches!(
            cheeger_sweep_bound(&g, &[0.1; 6], 1, 0.01),
            Err(OracleError::PreconditionViolated(_))
        ));
        // d-norm above one
        assert!(matches!(
            cheeger_sweep_bound(&g, &[0.0, 0.0, 0.0, 0.0, 0.0, 5.0], 1, 0.01),
            Err(OracleError::PreconditionViolated(_))
        ));
        // k out of range
        assert!(matches!(
            cheeger_sweep_bound(&g, &ok, 4, 0.01),
            Err(OracleError::PreconditionViolated(_))
        ));
        // sigma larger than available tail mass
        assert!(matches!(
            cheeger_sweep_bound(&g, &ok, 1, 10.0),
            Err(OracleError::PreconditionViolated(_))
        ));
        assert!(cheeger_sweep_bound(&g, &ok, 1, 0.05).is_ok());
    }
}
