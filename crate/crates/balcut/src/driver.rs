//! The matrix multiplicative weights driver.
//!
//! [`balcut`] runs the loop: sketch the embedding of the accumulated
//! updates, consult the oracle, and either round (a balanced cut), grow
//! the union of sweep cuts until it is `b/4`-balanced (also a balanced
//! cut), or fold the update into the accumulator and continue. A run
//! that exhausts its iteration budget averages the collected dual
//! updates into a certificate: `(alpha_bar, beta_bar)` is dual feasible
//! at level `3 gamma / 16` up to the regret error of the multiplicative
//! weights method, witnessing that no `b/4`-balanced cut of conductance
//! below that level exists outside the returned union.
//!
//! [`decompose`] applies `balcut` recursively: balanced cuts split the
//! graph, certificates close a leaf. [`mmw_regret_check`] verifies the
//! regret inequality the averaging argument rests on, densely, for test
//! sized instances.

use crate::expsketch::{sketch_embedding, SketchError, SketchParams};
use crate::graph::Graph;
use crate::operators::UpdateAccumulator;
use crate::oracle::{run_oracle, OracleCase, OracleConfig, OracleError, OracleOutcome};
use crate::reference::dense_exp_symmetric;
use crate::rounding::{project_round, RoundingConfig, RoundingError};
use crate::vertex_set::VertexSet;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("graph is disconnected; run decompose instead")]
    Disconnected,
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
    #[error("recursion exceeded the derived depth limit {0}")]
    RecursionDepthExceeded(usize),
    #[error("outcome is a balanced cut, not a certificate")]
    NotApplicable,
}

/// Full parameterization of one `balcut` run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Target conductance scale; certificates speak about `3 gamma / 16`.
    pub gamma: f64,
    /// Balance parameter `b` in `(0, 1/2]`.
    pub balance: f64,
    /// Multiplicative weights step size.
    pub epsilon: f64,
    /// Iteration budget constant: `ceil(t_constant * ln n / gamma)`.
    pub t_constant: f64,
    /// Hard cap on iterations, applied after the formula.
    pub max_iterations: Option<usize>,
    pub seed: u64,
    pub sketch: SketchParams,
    pub oracle: OracleConfig,
    pub rounding: RoundingConfig,
}

impl RunConfig {
    pub fn new(gamma: f64) -> Self {
        RunConfig {
            gamma,
            balance: 0.5,
            epsilon: 1.0 / 130.0,
            t_constant: 20.0,
            max_iterations: None,
            seed: 0,
            sketch: SketchParams::default(),
            oracle: OracleConfig::default(),
            rounding: RoundingConfig::default(),
        }
    }

    fn validate(&self) -> Result<(), DriverError> {
        let bad = |msg: String| Err(DriverError::InvalidConfig(msg));
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma = {} outside (0, 1)", self.gamma));
        }
        if !(self.balance > 0.0 && self.balance <= 0.5) {
            return bad(format!("balance = {} outside (0, 1/2]", self.balance));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon = {} outside (0, 1)", self.epsilon));
        }
        if !(self.t_constant > 0.0) {
            return bad(format!("t_constant = {} not positive", self.t_constant));
        }
        Ok(())
    }
}

/// Iterations `balcut` will run on an `n`-vertex graph.
pub fn iteration_budget(n: usize, cfg: &RunConfig) -> usize {
    let formula = (cfg.t_constant * (n as f64).ln() / cfg.gamma).ceil() as usize;
    let formula = formula.max(1);
    match cfg.max_iterations {
        Some(cap) => formula.min(cap.max(1)),
        None => formula,
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BalCutOutcome {
    /// A projection sweep of a roundable embedding.
    Rounded {
        cut: VertexSet,
        conductance: f64,
        iterations: usize,
    },
    /// The union of sweep cuts reached `b/4` balance.
    Union {
        cut: VertexSet,
        conductance: f64,
        iterations: usize,
    },
    /// The iteration budget ran out; the averaged dual is the witness.
    Certificate {
        /// Union of all sweep cuts seen (possibly empty).
        cut: VertexSet,
        alpha_bar: f64,
        beta_bar: Vec<f64>,
        /// Level the averaged dual certifies: `3 gamma / 16`.
        gamma_certified: f64,
        /// Conductance of `cut`; absent when the union is empty.
        conductance: Option<f64>,
        iterations: usize,
    },
}

impl BalCutOutcome {
    pub fn cut(&self) -> &VertexSet {
        match self {
            BalCutOutcome::Rounded { cut, .. }
            | BalCutOutcome::Union { cut, .. }
            | BalCutOutcome::Certificate { cut, .. } => cut,
        }
    }

    pub fn iterations(&self) -> usize {
        match self {
            BalCutOutcome::Rounded { iterations, .. }
            | BalCutOutcome::Union { iterations, .. }
            | BalCutOutcome::Certificate { iterations, .. } => *iterations,
        }
    }

    /// True for the two balanced-cut outcomes.
    pub fn is_balanced_cut(&self) -> bool {
        !matches!(self, BalCutOutcome::Certificate { .. })
    }
}

/// What one loop iteration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IterationCase {
    EdgeEnergy,
    Sweep,
    Roundable,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub case: IterationCase,
    /// Measure of the sweep-cut union after the iteration.
    pub union_measure: f64,
}

/// Runs the multiplicative weights loop on a connected graph.
pub fn balcut(g: &Graph, cfg: &RunConfig) -> Result<BalCutOutcome, DriverError> {
    balcut_traced(g, cfg).map(|(outcome, _)| outcome)
}

/// [`balcut`] with a per-iteration record of which oracle case fired
/// and how the union grew, for diagnosis and tests.
pub fn balcut_traced(
    g: &Graph,
    cfg: &RunConfig,
) -> Result<(BalCutOutcome, Vec<IterationRecord>), DriverError> {
    cfg.validate()?;
    let n = g.n();
    if n < 2 {
        return Err(DriverError::InvalidConfig(
            "graph must have at least two vertices".into(),
        ));
    }
    if !g.is_connected() {
        return Err(DriverError::Disconnected);
    }

    let budget = iteration_budget(n, cfg);
    let mut acc = UpdateAccumulator::new(n);
    let mut union = VertexSet::with_capacity(n);
    let mut alpha_sum = 0.0;
    let mut beta_sum = vec![0.0; n];
    let mut trace = Vec::new();

    for t in 1..=budget {
        let emb = sketch_embedding(g, &acc, cfg.epsilon, &cfg.sketch, cfg.seed, t as u32)?;
        match run_oracle(g, &emb, cfg.gamma, cfg.balance, &cfg.oracle)? {
            OracleOutcome::Roundable => {
                log::info!("iteration {t}/{budget}: roundable");
                trace.push(IterationRecord {
                    case: IterationCase::Roundable,
                    union_measure: g.measure(&union),
                });
                let rounded = project_round(g, &emb, cfg.balance, &cfg.rounding, cfg.seed)?;
                let outcome = BalCutOutcome::Rounded {
                    cut: rounded.cut,
                    conductance: rounded.conductance,
                    iterations: t,
                };
                return Ok((outcome, trace));
            }
            OracleOutcome::Certificate(cert) => {
                if cert.case == OracleCase::Sweep {
                    union.union_with(&cert.cut);
                    let measure = g.measure(&union);
                    log::info!(
                        "iteration {t}/{budget}: sweep cut of {} vertices, union measure {measure:.4}",
                        cert.cut.len(),
                    );
                    trace.push(IterationRecord {
                        case: IterationCase::Sweep,
                        union_measure: measure,
                    });
                    if g.is_b_balanced(&union, cfg.balance / 4.0) {
                        let conductance = g.conductance(&union);
                        let outcome = BalCutOutcome::Union {
                            cut: union,
                            conductance,
                            iterations: t,
                        };
                        return Ok((outcome, trace));
                    }
                } else {
                    log::info!("iteration {t}/{budget}: edge energy update");
                    trace.push(IterationRecord {
                        case: IterationCase::EdgeEnergy,
                        union_measure: g.measure(&union),
                    });
                }
                alpha_sum += cert.alpha;
                for (s, b) in beta_sum.iter_mut().zip(&cert.beta) {
                    *s += b;
                }
                acc.accumulate(g, cert.alpha, &cert.beta, cfg.gamma);
            }
        }
    }

    let iterations = budget;
    let conductance = if union.is_empty() {
        None
    } else {
        Some(g.conductance(&union))
    };
    for s in &mut beta_sum {
        *s /= iterations as f64;
    }
    let outcome = BalCutOutcome::Certificate {
        cut: union,
        alpha_bar: alpha_sum / iterations as f64,
        beta_bar: beta_sum,
        gamma_certified: 3.0 * cfg.gamma / 16.0,
        conductance,
        iterations,
    };
    Ok((outcome, trace))
}

/// What a certificate outcome says about balanced cuts at large.
#[derive(Clone, Debug, Serialize)]
pub struct NoBalancedCutReport {
    /// Every cut of conductance at most `conductance_threshold` has
    /// min-side measure at most this.
    pub balance_ceiling: f64,
    pub conductance_threshold: f64,
    pub union_measure: f64,
    pub gamma_certified: f64,
}

/// Interprets a certificate outcome. Applicable only when the returned
/// union is not `b/4`-balanced, which holds for every certificate
/// `balcut` emits (a balanced union exits the loop instead).
pub fn certify_no_balanced_cut(
    g: &Graph,
    outcome: &BalCutOutcome,
    gamma: f64,
    b: f64,
) -> Result<NoBalancedCutReport, DriverError> {
    match outcome {
        BalCutOutcome::Certificate {
            cut,
            gamma_certified,
            ..
        } => {
            if g.is_b_balanced(cut, b / 4.0) {
                return Err(DriverError::NotApplicable);
            }
            let union_measure = g.measure(cut);
            Ok(NoBalancedCutReport {
                balance_ceiling: 2.0 * union_measure,
                conductance_threshold: gamma / 16.0,
                union_measure,
                gamma_certified: *gamma_certified,
            })
        }
        _ => Err(DriverError::NotApplicable),
    }
}

/// Regret inequality check for a gain sequence, dense.
#[derive(Clone, Debug, Serialize)]
pub struct RegretReport {
    pub total_gain: f64,
    /// `(1 - eps) * total_gain - ln(n) / eps`.
    pub bound: f64,
    /// Smallest eigenvalue of `sum_t Y_t - bound * P` on the subspace
    /// orthogonal to `v_hat`; nonnegative when the inequality holds.
    pub slack: f64,
}

/// Verifies `sum_t Y_t >= ((1 - eps) sum_t Y_t . Z_t - ln(n) / eps) P`
/// on the subspace orthogonal to `v_hat`, where
/// `Z_t = P exp(-eps S_{t-1}) P / (tr exp(-eps S_{t-1}) - 1)` and
/// `S_t = Y_1 + ... + Y_t`.
///
/// Preconditions, asserted: every gain satisfies `0 <= Y <= I` and
/// `Y v_hat = 0`, and the dimension is at most 64 (the check is dense).
pub fn mmw_regret_check(ys: &[DMatrix<f64>], eps: f64, v_hat: &[f64]) -> RegretReport {
    let n = v_hat.len();
    assert!(n >= 2 && n <= 64, "dense check limited to 2..=64 dimensions");
    assert!(eps > 0.0 && eps < 1.0);
    let vn: f64 = v_hat.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((vn - 1.0).abs() < 1e-9, "v_hat must be a unit vector");
    let vh = nalgebra::DVector::from_column_slice(v_hat);
    let p = DMatrix::identity(n, n) - &vh * vh.transpose();

    for (t, y) in ys.iter().enumerate() {
        assert_eq!(y.nrows(), n, "gain {t} has wrong dimension");
        assert!((y - y.transpose()).amax() < 1e-9, "gain {t} not symmetric");
        let yv = y * &vh;
        assert!(yv.amax() < 1e-9, "gain {t} does not annihilate v_hat");
        let vals = SymmetricEigen::new(y.clone()).eigenvalues;
        assert!(
            vals.min() > -1e-9 && vals.max() < 1.0 + 1e-9,
            "gain {t} outside [0, I]"
        );
    }

    let mut s = DMatrix::zeros(n, n);
    let mut total_gain = 0.0;
    for y in ys {
        let e = dense_exp_symmetric(&(-eps * &s));
        let pep = &p * e * &p;
        let z = &pep / pep.trace();
        total_gain += (y.component_mul(&z)).sum();
        s += y;
    }
    let bound = (1.0 - eps) * total_gain - (n as f64).ln() / eps;

    // deflate v_hat with a shift large enough to push its eigenvalue
    // above anything relevant
    let shift = bound.abs() + s.amax() + 1.0;
    let test = &s - bound * &p + shift * (&vh * vh.transpose());
    let slack = SymmetricEigen::new(test).eigenvalues.min();
    RegretReport {
        total_gain,
        bound,
        slack,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafCertificate {
    pub alpha_bar: f64,
    pub gamma_certified: f64,
    pub union_measure: f64,
    pub iterations: usize,
}

/// A piece of the decomposition, in original vertex ids.
#[derive(Clone, Debug, Serialize)]
pub struct Leaf {
    pub vertices: Vec<u32>,
    /// Present when the piece closed with a certificate; singletons and
    /// pieces below two vertices carry none.
    pub certificate: Option<LeafCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub leaves: Vec<Leaf>,
    /// Total weight of edges cut while splitting.
    pub crossing_weight: f64,
    pub max_depth: usize,
    pub depth_limit: usize,
}

/// Recursively partitions a graph: balanced cuts split, certificates
/// close leaves. Handles disconnected inputs by splitting into
/// components first.
pub fn decompose(g: &Graph, cfg: &RunConfig) -> Result<DecompositionReport, DriverError> {
    cfg.validate()?;
    let c = cfg
        .rounding
        .resolved_window(cfg.balance)
        .min(cfg.balance / 4.0);
    // every split leaves each side at most (1 - c) of the volume; the
    // factor two covers component splits interleaved between them
    let vol = g.total_volume();
    let depth_limit = if vol <= 1.0 {
        8
    } else {
        2 * (vol.ln() / -(1.0 - c).ln()).ceil() as usize + 8
    };
    let mut report = DecompositionReport {
        leaves: Vec::new(),
        crossing_weight: 0.0,
        max_depth: 0,
        depth_limit,
    };
    let ids: Vec<u32> = (0..g.n() as u32).collect();
    decompose_rec(g, &ids, 0, cfg, &mut report)?;
    Ok(report)
}

fn decompose_rec(
    g: &Graph,
    ids: &[u32],
    depth: usize,
    cfg: &RunConfig,
    report: &mut DecompositionReport,
) -> Result<(), DriverError> {
    report.max_depth = report.max_depth.max(depth);
    if depth > report.depth_limit {
        return Err(DriverError::RecursionDepthExceeded(report.depth_limit));
    }
    let n = g.n();
    if n == 0 {
        return Ok(());
    }
    if n == 1 {
        report.leaves.push(Leaf {
            vertices: ids.to_vec(),
            certificate: None,
        });
        return Ok(());
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        for comp in comps {
            let (sub, local) = g.subgraph(&comp);
            let mapped: Vec<u32> = local.iter().map(|&l| ids[l as usize]).collect();
            decompose_rec(&sub, &mapped, depth + 1, cfg, report)?;
        }
        return Ok(());
    }
    match balcut(g, cfg)? {
        BalCutOutcome::Rounded { cut, .. } | BalCutOutcome::Union { cut, .. } => {
            report.crossing_weight += g.cut_weight(&cut);
            let complement = cut.complement(n);
            for side in [cut, complement] {
                let (sub, local) = g.subgraph(&side);
                let mapped: Vec<u32> = local.iter().map(|&l| ids[l as usize]).collect();
                decompose_rec(&sub, &mapped, depth + 1, cfg, report)?;
            }
        }
        BalCutOutcome::Certificate {
            cut,
            alpha_bar,
            gamma_certified,
            iterations,
            ..
        } => {
            report.leaves.push(Leaf {
                vertices: ids.to_vec(),
                certificate: Some(LeafCertificate {
                    alpha_bar,
                    gamma_certified,
                    union_measure: g.measure(&cut),
                    iterations,
                }),
            });
        }
    }
    Ok(())
}
