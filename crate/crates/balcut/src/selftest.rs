//! Fast end-to-end sanity checks behind the `selftest` subcommand.
//!
//! Each check exercises one identity or contract the pipeline rests on,
//! at a size that keeps the whole suite under a couple of seconds.

use crate::driver::{balcut, mmw_regret_check, BalCutOutcome, RunConfig};
use crate::expsketch::{expv, sketch_embedding, LanczosParams, SketchParams};
use crate::operators::{demand_quadratic, UpdateAccumulator};
use crate::oracle::{cheeger_sweep_bound, run_oracle, OracleConfig, OracleOutcome};
use crate::reference::{
    complete, dense_exp_symmetric, dumbbell, path, random_regular,
};
use crate::sdp::{evaluate_psdp, verify_dual_feasibility, DualCheckOptions};
use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: true,
            detail,
        }
    }

    fn check(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Runs every check; failures are collected, not panicked.
pub fn run_selftest() -> Vec<CheckResult> {
    vec![
        demand_mixture_identity(),
        exponential_against_dense(),
        fresh_sketch_closed_form(),
        sweep_bound_is_constructive(),
        roundable_bridge_recovery(),
        expander_certificate_is_feasible(),
        regret_inequality(),
        primal_report_consistency(),
    ]
}

/// `K . xx^T` equals the half-sum of pairwise mixture terms.
fn demand_mixture_identity() -> CheckResult {
    let g = dumbbell(6, 0.25);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x: Vec<f64> = (0..g.n()).map(|_| rng.random::<f64>() - 0.5).collect();
    let direct = demand_quadratic(&g, &x);
    let mut mixture = 0.0;
    for i in 0..g.n() {
        for j in 0..g.n() {
            let d = x[i] - x[j];
            mixture += 0.5 * g.mu(i as u32) * g.mu(j as u32) * d * d;
        }
    }
    let err = (direct - mixture).abs();
    CheckResult::check(
        "demand-mixture-identity",
        err < 1e-12,
        format!("|K.xx - mixture| = {err:.2e}"),
    )
}

/// Lanczos `exp(-A)v` against the dense eigendecomposition.
fn exponential_against_dense() -> CheckResult {
    let n = 24;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
    let a = (&raw + raw.transpose()) * 0.5;
    let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let dense = dense_exp_symmetric(&(-&a)) * nalgebra::DVector::from_column_slice(&v);
    let fast = expv(&a, &v, 1e-12, &LanczosParams::default()).unwrap();
    let err = fast
        .iter()
        .zip(dense.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    CheckResult::check(
        "lanczos-exponential",
        err < 1e-9,
        format!("max deviation {err:.2e}"),
    )
}

/// With no accumulated updates the embedding is a known closed form.
fn fresh_sketch_closed_form() -> CheckResult {
    let g = path(12);
    let acc = UpdateAccumulator::new(g.n());
    let params = SketchParams {
        delta: 0.2,
        ..SketchParams::default()
    };
    let emb = sketch_embedding(&g, &acc, 0.5, &params, 11, 1).unwrap();
    let tv = g.total_volume();
    let scale = 1.0 / (g.n() as f64 - 1.0);
    let avg = emb.mu_average(&g);
    let mut worst = 0.0f64;
    for i in 0..g.n() as u32 {
        let expected = (tv / g.degree(i) - 1.0) * scale;
        let got = emb.spread(i, &avg);
        worst = worst.max((got / expected - 1.0).abs());
    }
    CheckResult::check(
        "fresh-sketch-radii",
        worst < 0.75,
        format!("worst relative radius error {worst:.3}"),
    )
}

/// The sweep bound must come with a prefix cut achieving it.
fn sweep_bound_is_constructive() -> CheckResult {
    let g = random_regular(24, 3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut x: Vec<f64> = (0..g.n()).map(|_| rng.random::<f64>()).collect();
    // kill half the support, normalize to x^T D x = 1
    for v in x.iter_mut().skip(g.n() / 2) {
        *v = 0.0;
    }
    let energy: f64 = (0..g.n())
        .map(|i| g.degree(i as u32) * x[i] * x[i])
        .sum();
    for v in &mut x {
        *v /= energy.sqrt();
    }
    let sigma = 0.3;
    match cheeger_sweep_bound(&g, &x, 1, sigma) {
        Ok(cut) => CheckResult::check(
            "cheeger-sweep-bound",
            cut.conductance <= cut.bound + 1e-12,
            format!("phi {:.4} <= bound {:.4}", cut.conductance, cut.bound),
        ),
        Err(e) => CheckResult::check("cheeger-sweep-bound", false, e.to_string()),
    }
}

/// A weak bridge must round to a balanced cut in one iteration.
fn roundable_bridge_recovery() -> CheckResult {
    let g = dumbbell(8, 0.01);
    let cfg = RunConfig {
        epsilon: 0.5,
        sketch: SketchParams {
            delta: 0.5,
            ..SketchParams::default()
        },
        ..RunConfig::new(0.6)
    };
    match balcut(&g, &cfg) {
        Ok(BalCutOutcome::Rounded {
            cut, conductance, ..
        }) => CheckResult::check(
            "roundable-bridge",
            g.is_b_balanced(&cut, cfg.balance / 4.0),
            format!("cut of {} vertices, phi {conductance:.4}", cut.len()),
        ),
        Ok(other) => CheckResult::check(
            "roundable-bridge",
            false,
            format!("expected rounded cut, got {other:?}"),
        ),
        Err(e) => CheckResult::check("roundable-bridge", false, e.to_string()),
    }
}

/// A budget-bound expander run must emit a dual-feasible certificate.
fn expander_certificate_is_feasible() -> CheckResult {
    let g = complete(8);
    let cfg = RunConfig {
        epsilon: 0.5,
        max_iterations: Some(4),
        sketch: SketchParams {
            delta: 0.5,
            ..SketchParams::default()
        },
        ..RunConfig::new(0.2)
    };
    match balcut(&g, &cfg) {
        Ok(BalCutOutcome::Certificate {
            alpha_bar,
            beta_bar,
            gamma_certified,
            ..
        }) => match verify_dual_feasibility(
            &g,
            alpha_bar,
            &beta_bar,
            cfg.balance,
            gamma_certified,
            1e-9,
            &DualCheckOptions::default(),
        ) {
            Ok(rep) => CheckResult::check(
                "expander-certificate",
                rep.feasible(),
                format!(
                    "value {:.4} (ok: {}), lambda_min {:.2e} (ok: {})",
                    rep.value, rep.value_ok, rep.lambda_min, rep.psd_ok
                ),
            ),
            Err(e) => CheckResult::check("expander-certificate", false, e.to_string()),
        },
        Ok(other) => CheckResult::check(
            "expander-certificate",
            false,
            format!("expected certificate, got {other:?}"),
        ),
        Err(e) => CheckResult::check("expander-certificate", false, e.to_string()),
    }
}

/// The multiplicative weights regret inequality on random gains.
fn regret_inequality() -> CheckResult {
    let n = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.1).collect();
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    let vh = nalgebra::DVector::from_column_slice(&v);
    let p = DMatrix::identity(n, n) - &vh * vh.transpose();
    let ys: Vec<DMatrix<f64>> = (0..6)
        .map(|_| {
            let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
            let sym = &p * (&raw + raw.transpose()) * &p;
            let eig = nalgebra::SymmetricEigen::new(sym);
            let clamped = eig.eigenvalues.map(|l| l.clamp(0.0, 1.0));
            &eig.eigenvectors * DMatrix::from_diagonal(&clamped) * eig.eigenvectors.transpose()
        })
        .collect();
    let rep = mmw_regret_check(&ys, 0.1, &v);
    CheckResult::check(
        "regret-inequality",
        rep.slack >= -1e-8,
        format!("slack {:.2e}", rep.slack),
    )
}

/// A fresh embedding satisfies the primal constraints the oracle assumes.
fn primal_report_consistency() -> CheckResult {
    let g = path(10);
    let acc = UpdateAccumulator::new(g.n());
    let params = SketchParams {
        delta: 0.5,
        ..SketchParams::default()
    };
    let emb = match sketch_embedding(&g, &acc, 0.5, &params, 3, 1) {
        Ok(e) => e,
        Err(e) => return CheckResult::check("primal-consistency", false, e.to_string()),
    };
    let rep = evaluate_psdp(&g, &emb, 0.05, 0.9, 1e-9);
    if (rep.variance - 1.0).abs() > 1e-12 {
        return CheckResult::check(
            "primal-consistency",
            false,
            format!("variance {} != 1", rep.variance),
        );
    }
    // generous gamma: the oracle must not need a sweep cut here
    match run_oracle(&g, &emb, 0.9, 0.05, &OracleConfig::default()) {
        Ok(OracleOutcome::Roundable) | Ok(OracleOutcome::Certificate(_)) => CheckResult::pass(
            "primal-consistency",
            format!(
                "edge energy {:.3}, variance {:.12}",
                rep.edge_energy, rep.variance
            ),
        ),
        Err(e) => CheckResult::check("primal-consistency", false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let results = run_selftest();
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 8);
        assert!(all_passed(&results));
    }
}
