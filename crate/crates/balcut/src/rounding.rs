//! Projection rounding of a well-spread embedding.
//!
//! Each trial projects the embedding onto a random Gaussian direction,
//! sweeps prefixes of the projection order, and keeps the lowest
//! conductance prefix whose volume lands inside the balance window
//! `[c, 1 - c]` (as a fraction of total volume). Trials run in parallel
//! and the winner is chosen by `(conductance, vertex list)` so the result
//! is a pure function of `(embedding, seed)`, independent of thread
//! count.

use crate::expsketch::Embedding;
use crate::graph::Graph;
use crate::vertex_set::VertexSet;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RoundingError {
    #[error(
        "none of {trials} projection sweeps produced a cut inside the \
         volume window [{lo:.4}, {hi:.4}]"
    )]
    NoQualifyingSweep { trials: usize, lo: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct RoundingConfig {
    /// Number of random projections; `ceil(4 log2 n)` when unset.
    pub trials: Option<usize>,
    /// Balance window fraction `c`; `b / 4` when unset.
    pub window: Option<f64>,
}

impl RoundingConfig {
    pub fn resolved_trials(&self, n: usize) -> usize {
        self.trials
            .unwrap_or_else(|| (4.0 * (n as f64).log2()).ceil() as usize)
            .max(1)
    }

    pub fn resolved_window(&self, b: f64) -> f64 {
        let c = self.window.unwrap_or(b / 4.0);
        assert!(c > 0.0 && c < 0.5, "window fraction must lie in (0, 1/2)");
        c
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RoundedCut {
    pub cut: VertexSet,
    pub conductance: f64,
}

/// Rounds an embedding to a balanced cut, or reports that no projection
/// sweep hit the balance window.
pub fn project_round(
    g: &Graph,
    emb: &Embedding,
    b: f64,
    cfg: &RoundingConfig,
    seed: u64,
) -> Result<RoundedCut, RoundingError> {
    let n = g.n();
    assert_eq!(emb.n(), n);
    let trials = cfg.resolved_trials(n);
    let c = cfg.resolved_window(b);
    let total = g.total_volume();
    let (lo, hi) = (c * total, (1.0 - c) * total);

    let candidates: Vec<Option<(f64, Vec<u32>)>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(0x02u64 << 56 | trial as u64);
            let u: Vec<f64> = (0..emb.k()).map(|_| rng.sample(StandardNormal)).collect();
            let proj = emb.project(&u);
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_unstable_by(|&a, &bb| {
                proj[bb as usize]
                    .total_cmp(&proj[a as usize])
                    .then(a.cmp(&bb))
            });

            let mut in_prefix = vec![false; n];
            let mut cut = 0.0;
            let mut vol = 0.0;
            let mut best: Option<(f64, usize)> = None;
            for (p, &v) in order.iter().enumerate() {
                let mut to_prefix = 0.0;
                for (u2, w) in g.neighbors(v) {
                    if in_prefix[u2 as usize] {
                        to_prefix += w;
                    }
                }
                in_prefix[v as usize] = true;
                vol += g.degree(v);
                cut += g.degree(v) - 2.0 * to_prefix;
                if vol < lo || vol > hi {
                    continue;
                }
                let phi = cut / vol.min(total - vol);
                if best.is_none_or(|(bp, _)| phi < bp) {
                    best = Some((phi, p));
                }
            }
            best.map(|(phi, p)| {
                let mut members: Vec<u32> = order[..=p].to_vec();
                members.sort_unstable();
                (phi, members)
            })
        })
        .collect();

    let winner = candidates
        .into_iter()
        .flatten()
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    match winner {
        Some((conductance, members)) => Ok(RoundedCut {
            cut: members.into_iter().collect(),
            conductance,
        }),
        None => Err(RoundingError::NoQualifyingSweep { trials, lo, hi }),
    }
}
