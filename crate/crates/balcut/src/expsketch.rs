//! Low-dimensional embeddings through a matrix exponential.
//!
//! The embedding attached to an accumulated update sum `H` is the Gram
//! factorization of
//!
//! ```text
//! X = Y / (K . Y),    Y = D^{-1/2} exp(-A) D^{-1/2},
//! A = total_volume * eps * D^{-1/2} H D^{-1/2},
//! ```
//!
//! so `K . X = 1` holds by construction. Nobody ever forms `exp(-A)`:
//! [`expv`] applies `exp(-A/2)` to one vector with a Lanczos recurrence,
//! and [`sketch_embedding`] compresses the exact (infeasibly wide)
//! embedding `i -> exp(-A/2) D^{-1/2} e_i` down to
//! `k = O(log n / delta^2)` dimensions with one `expv` call per random
//! projection row. The sketched vectors are rescaled at the end so their
//! demand energy `K . X` is exactly one, which removes the scalar
//! freedom the projection cannot preserve.
//!
//! [`dense_u_epsilon`] materializes `X` by eigendecomposition for tests
//! and small instances.

use crate::graph::Graph;
use crate::operators::{self, UpdateAccumulator};
use crate::reference::{self, dense_exp_symmetric};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpvError {
    #[error("Krylov space reached dimension {dim} with relative residual {residual:.3e}")]
    NotConverged { dim: usize, residual: f64 },
    #[error("Lanczos breakdown at dimension {dim} with relative residual {residual:.3e}")]
    BreakdownNotConverged { dim: usize, residual: f64 },
}

#[derive(Debug, Error)]
pub enum SketchError {
    #[error(transparent)]
    Expv(#[from] ExpvError),
    #[error("sketched embedding has no spread to normalize")]
    DegenerateSketch,
}

/// Symmetric operator given by its matrix-vector product.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let xv = nalgebra::DVector::from_column_slice(x);
        let yv = self * xv;
        y.copy_from_slice(yv.as_slice());
    }
}

/// `x -> s * D^{-1/2} H D^{-1/2} x` for an accumulated update sum.
pub struct ScaledExponent<'a> {
    g: &'a Graph,
    acc: &'a UpdateAccumulator,
    scale: f64,
    inv_sqrt_d: Vec<f64>,
}

impl<'a> ScaledExponent<'a> {
    /// The half exponent `A/2` used by the embedding factor `exp(-A/2)`.
    pub fn half(g: &'a Graph, acc: &'a UpdateAccumulator, eps: f64) -> Self {
        Self::with_scale(g, acc, g.total_volume() * eps / 2.0)
    }

    /// The full exponent `A`.
    pub fn full(g: &'a Graph, acc: &'a UpdateAccumulator, eps: f64) -> Self {
        Self::with_scale(g, acc, g.total_volume() * eps)
    }

    fn with_scale(g: &'a Graph, acc: &'a UpdateAccumulator, scale: f64) -> Self {
        let inv_sqrt_d = g
            .degrees()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                assert!(d > 0.0, "vertex {i} has zero degree");
                1.0 / d.sqrt()
            })
            .collect();
        ScaledExponent {
            g,
            acc,
            scale,
            inv_sqrt_d,
        }
    }
}

impl LinearOperator for ScaledExponent<'_> {
    fn dim(&self) -> usize {
        self.g.n()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let z: Vec<f64> = x
            .iter()
            .zip(&self.inv_sqrt_d)
            .map(|(xi, isd)| xi * isd)
            .collect();
        self.acc.matvec(self.g, &z, y);
        for (yi, isd) in y.iter_mut().zip(&self.inv_sqrt_d) {
            *yi *= self.scale * isd;
        }
    }
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct LanczosParams {
    /// Hard cap on the Krylov dimension.
    pub max_dim: usize,
    /// Reorthogonalize twice per step up to this dimension, once beyond.
    pub full_reortho_dim: usize,
}

impl Default for LanczosParams {
    fn default() -> Self {
        LanczosParams {
            max_dim: 256,
            full_reortho_dim: 64,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `y = exp(-T) e_1` for the symmetric tridiagonal with diagonal `alphas`
/// and off-diagonal `betas`, plus the smallest Ritz value.
fn exp_neg_tridiag_e1(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, f64) {
    let j = alphas.len();
    let mut t = DMatrix::zeros(j, j);
    for i in 0..j {
        t[(i, i)] = alphas[i];
        if i + 1 < j {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let theta_min = eig.eigenvalues.min();
    let mut y = vec![0.0; j];
    for c in 0..j {
        let w = (-eig.eigenvalues[c]).exp() * eig.eigenvectors[(0, c)];
        for r in 0..j {
            y[r] += w * eig.eigenvectors[(r, c)];
        }
    }
    (y, theta_min)
}

/// Applies `exp(-A) v` for a symmetric operator `A` by a Lanczos
/// recurrence, stopping once the a-posteriori residual estimate drops
/// below `eta` relative to the dominant output scale `|v| exp(-theta_min)`.
///
/// A breakdown with a small residual means the Krylov space is invariant
/// and the result exact; breakdown before convergence and hitting
/// `max_dim` are reported as errors.
pub fn expv(
    op: &dyn LinearOperator,
    v: &[f64],
    eta: f64,
    params: &LanczosParams,
) -> Result<Vec<f64>, ExpvError> {
    let n = op.dim();
    assert_eq!(v.len(), n);
    assert!(eta > 0.0 && params.max_dim >= 1);
    let beta0 = norm(v);
    if beta0 == 0.0 {
        return Ok(vec![0.0; n]);
    }

    let mut basis: Vec<Vec<f64>> = vec![v.iter().map(|x| x / beta0).collect()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut op_scale: f64 = 1.0;

    for j in 0.. {
        op.apply(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(&mut w, -alpha, &basis[j]);
        if j > 0 {
            axpy(&mut w, -betas[j - 1], &basis[j - 1]);
        }
        let passes = if j < params.full_reortho_dim { 2 } else { 1 };
        for _ in 0..passes {
            for q in &basis {
                let c = dot(q, &w);
                axpy(&mut w, -c, q);
            }
        }
        let beta = norm(&w);
        op_scale = op_scale.max(alpha.abs()).max(beta);

        let dim = j + 1;
        let breakdown = beta <= 1e-14 * op_scale;
        // the j x j eigensolve costs as much as several Lanczos steps, so
        // test convergence on a thinning schedule rather than every step
        let check = if dim <= 24 { dim % 2 == 0 } else { dim % 4 == 0 };
        if check || breakdown || dim == params.max_dim {
            let (y, theta_min) = exp_neg_tridiag_e1(&alphas, &betas);
            let out_scale = beta0 * (-theta_min).exp();
            let err = beta0 * beta * y[j].abs();
            if err <= eta * out_scale {
                let mut out = vec![0.0; n];
                for (q, &yi) in basis.iter().zip(&y) {
                    axpy(&mut out, beta0 * yi, q);
                }
                return Ok(out);
            }
            let residual = err / out_scale;
            if breakdown {
                return Err(ExpvError::BreakdownNotConverged { dim, residual });
            }
            if dim == params.max_dim {
                return Err(ExpvError::NotConverged { dim, residual });
            }
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }
    unreachable!()
}

/// Smallest Ritz value of a symmetric operator after `steps` Lanczos
/// iterations from a seeded random start. An upper bound on the smallest
/// eigenvalue that is tight for the moderate spectra this crate checks.
pub fn smallest_ritz_value(op: &dyn LinearOperator, steps: usize, seed: u64) -> f64 {
    extreme_ritz_values(op, steps, seed).0
}

/// `(smallest, largest)` Ritz values from one Lanczos run.
pub fn extreme_ritz_values(op: &dyn LinearOperator, steps: usize, seed: u64) -> (f64, f64) {
    let n = op.dim();
    assert!(n >= 1 && steps >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let beta0 = norm(&v);
    let mut basis = vec![v.iter().map(|x| x / beta0).collect::<Vec<f64>>()];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    for j in 0..steps.min(n) {
        op.apply(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(&mut w, -alpha, &basis[j]);
        if j > 0 {
            axpy(&mut w, -betas[j - 1], &basis[j - 1]);
        }
        for q in &basis {
            let c = dot(q, &w);
            axpy(&mut w, -c, q);
        }
        let beta = norm(&w);
        if beta <= 1e-14 * alphas.iter().fold(1.0f64, |m, a| m.max(a.abs())) {
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }
    let j = alphas.len();
    let mut t = DMatrix::zeros(j, j);
    for i in 0..j {
        t[(i, i)] = alphas[i];
        if i + 1 < j && i < betas.len() {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let vals = SymmetricEigen::new(t).eigenvalues;
    (vals.min(), vals.max())
}

/// Sketch dimension `ceil(jl_constant * ln n / delta^2)`.
pub fn k_delta(n: usize, jl_constant: f64, delta: f64) -> usize {
    assert!(delta > 0.0 && jl_constant > 0.0);
    ((jl_constant * (n as f64).ln() / (delta * delta)).ceil() as usize).max(1)
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SketchParams {
    /// Target distortion of the random projection.
    pub delta: f64,
    /// Leading constant in the sketch dimension.
    pub jl_constant: f64,
    /// Relative accuracy of each `expv` solve. The default sits three
    /// orders below the projection noise floor, which is what actually
    /// limits sketch fidelity.
    pub eta: f64,
    pub lanczos: LanczosParams,
}

impl Default for SketchParams {
    fn default() -> Self {
        SketchParams {
            delta: 0.25,
            jl_constant: 6.0,
            eta: 1e-9,
            lanczos: LanczosParams::default(),
        }
    }
}

/// A `k`-dimensional vector per vertex, stored column-major.
#[derive(Clone, Debug)]
pub struct Embedding {
    data: Vec<f64>,
    k: usize,
    n: usize,
}

impl Embedding {
    pub fn from_columns(data: Vec<f64>, k: usize, n: usize) -> Self {
        assert_eq!(data.len(), k * n);
        assert!(k >= 1);
        Embedding { data, k, n }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex(&self, i: u32) -> &[f64] {
        let i = i as usize;
        &self.data[i * self.k..(i + 1) * self.k]
    }

    /// `sum_i mu_i v_i`, the embedding's center of mass under the degree
    /// measure.
    pub fn mu_average(&self, g: &Graph) -> Vec<f64> {
        assert_eq!(g.n(), self.n);
        let mut avg = vec![0.0; self.k];
        for i in 0..self.n {
            let mi = g.mu(i as u32);
            for (a, x) in avg.iter_mut().zip(self.vertex(i as u32)) {
                *a += mi * x;
            }
        }
        avg
    }

    pub fn distance2(&self, i: u32, j: u32) -> f64 {
        self.vertex(i)
            .iter()
            .zip(self.vertex(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// `|v_i - c|^2`; with `c` the mu-average this is the spread value
    /// `R_i . X` of the Gram matrix.
    pub fn spread(&self, i: u32, c: &[f64]) -> f64 {
        self.vertex(i)
            .iter()
            .zip(c)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// `L . X` divided by the total edge weight: the mean squared edge
    /// stretch under the edge-weight distribution.
    pub fn edge_energy(&self, g: &Graph) -> f64 {
        assert_eq!(g.n(), self.n);
        let total: f64 = g
            .edges()
            .map(|(u, v, w)| w * self.distance2(u, v))
            .sum();
        total / g.total_edge_weight()
    }

    /// `K . X`, the mu-variance of the embedding. One after
    /// normalization.
    pub fn demand_energy(&self, g: &Graph) -> f64 {
        let avg = self.mu_average(g);
        (0..self.n)
            .map(|i| g.mu(i as u32) * self.spread(i as u32, &avg))
            .sum()
    }

    /// Per-vertex projection `<u, v_i>`.
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.k);
        (0..self.n)
            .map(|i| dot(self.vertex(i as u32), u))
            .collect()
    }

    fn scale(&mut self, s: f64) {
        for x in &mut self.data {
            *x *= s;
        }
    }
}

/// Sketches the embedding of the current update sum at the given MMW
/// iteration. Deterministic in `(seed, iteration)`: projection row `r`
/// draws from its own counter-derived stream, so results do not depend on
/// thread count.
pub fn sketch_embedding(
    g: &Graph,
    acc: &UpdateAccumulator,
    eps: f64,
    params: &SketchParams,
    seed: u64,
    iteration: u32,
) -> Result<Embedding, SketchError> {
    let n = g.n();
    let k = k_delta(n, params.jl_constant, params.delta);
    let op = ScaledExponent::half(g, acc, eps);
    let inv_sqrt_d: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let radius = ((n as f64) / (k as f64)).sqrt();

    let rows: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(0x01u64 << 56 | (iteration as u64) << 32 | r as u64);
            let mut u: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let s = radius / norm(&u);
            for x in &mut u {
                *x *= s;
            }
            let mut b = expv(&op, &u, params.eta, &params.lanczos)?;
            for (bi, isd) in b.iter_mut().zip(&inv_sqrt_d) {
                *bi *= isd;
            }
            Ok(b)
        })
        .collect::<Result<_, ExpvError>>()?;

    let mut data = vec![0.0; k * n];
    for (r, row) in rows.iter().enumerate() {
        for i in 0..n {
            data[i * k + r] = row[i];
        }
    }
    let mut emb = Embedding::from_columns(data, k, n);
    let z = emb.demand_energy(g);
    if !(z.is_finite() && z > 0.0) {
        return Err(SketchError::DegenerateSketch);
    }
    emb.scale(1.0 / z.sqrt());
    Ok(emb)
}

/// Exact embedding matrix `X = Y / (K . Y)` with
/// `Y = D^{-1/2} exp(-A) D^{-1/2}`, by dense eigendecomposition.
pub fn dense_u_epsilon(g: &Graph, acc: &UpdateAccumulator, eps: f64) -> DMatrix<f64> {
    let n = g.n();
    let mut a = reference::dense_update_sum(g, acc) * (g.total_volume() * eps);
    for i in 0..n {
        let di = g.degree(i as u32).sqrt();
        for j in 0..n {
            let dj = g.degree(j as u32).sqrt();
            a[(i, j)] /= di * dj;
        }
    }
    let e = dense_exp_symmetric(&-a);
    let vhat = operators::v_hat(g);
    let vhat_v = nalgebra::DVector::from_column_slice(&vhat);
    let denom = e.trace() - (vhat_v.transpose() * &e * &vhat_v)[(0, 0)];
    let mut x = e;
    for i in 0..n {
        let di = g.degree(i as u32).sqrt();
        for j in 0..n {
            let dj = g.degree(j as u32).sqrt();
            x[(i, j)] *= g.total_volume() / (di * dj * denom);
        }
    }
    x
}

/// Exact embedding as explicit `n`-dimensional vectors, the dense
/// counterpart of [`sketch_embedding`].
pub fn dense_embedding(g: &Graph, acc: &UpdateAccumulator, eps: f64) -> Embedding {
    let x = dense_u_epsilon(g, acc, eps);
    let n = g.n();
    let eig = SymmetricEigen::new(x);
    // vertex i gets row i of V sqrt(diag(lambda)), clamping the tiny
    // negative eigenvalues rounding introduces
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for r in 0..n {
            data[i * n + r] = eig.eigenvectors[(i, r)] * eig.eigenvalues[r].max(0.0).sqrt();
        }
    }
    Embedding::from_columns(data, n, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{barbell, caterpillar, dense_update_sum, path};

    fn random_symmetric(n: usize, scale: f64, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(n, n, |_, _| (rng.random::<f64>() - 0.5) * scale);
        (&raw + raw.transpose()) * 0.5
    }

    #[test]
    fn expv_matches_dense_exponential() {
        for seed in 0..5u64 {
            let n = 30;
            let m = random_symmetric(n, 4.0, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let got = expv(&m, &v, 1e-12, &LanczosParams::default()).unwrap();
            let want = dense_exp_symmetric(&-&m) * nalgebra::DVector::from_column_slice(&v);
            let vnorm = norm(&v);
            for i in 0..n {
                assert!(
                    (got[i] - want[i]).abs() < 1e-9 * vnorm,
                    "seed {seed} entry {i}: {} vs {}",
                    got[i],
                    want[i]
                );
            }
        }
    }

    #[test]
    fn expv_zero_operator_is_identity() {
        let z = DMatrix::zeros(8, 8);
        let v: Vec<f64> = (0..8).map(|i| i as f64 - 3.0).collect();
        let got = expv(&z, &v, 1e-12, &LanczosParams::default()).unwrap();
        for (g, w) in got.iter().zip(&v) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn expv_diagonal_is_entrywise() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, -1.0, 2.0, 0.0]));
        let v = vec![1.0, 2.0, -1.0, 3.0];
        let got = expv(&d, &v, 1e-12, &LanczosParams::default()).unwrap();
        let want = [
            (-0.5f64).exp(),
            2.0 * 1.0f64.exp(),
            -(-2.0f64).exp(),
            3.0,
        ];
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn expv_zero_vector() {
        let m = random_symmetric(6, 1.0, 1);
        let got = expv(&m, &[0.0; 6], 1e-12, &LanczosParams::default()).unwrap();
        assert!(got.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn expv_reports_nonconvergence() {
        let m = random_symmetric(40, 60.0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<f64> = (0..40).map(|_| rng.sample(StandardNormal)).collect();
        let params = LanczosParams {
            max_dim: 4,
            full_reortho_dim: 64,
        };
        match expv(&m, &v, 1e-12, &params) {
            Err(ExpvError::NotConverged { dim: 4, .. }) => {}
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn smallest_ritz_value_close_on_dense() {
        let m = random_symmetric(25, 3.0, 9);
        let exact = SymmetricEigen::new(m.clone()).eigenvalues.min();
        let est = smallest_ritz_value(&m, 25, 4);
        assert!((est - exact).abs() < 1e-8);
        assert!(est >= exact - 1e-10); // Ritz values bound from above
    }

    #[test]
    fn fresh_embedding_has_closed_form() {
        // with no updates, X = total_volume * D^{-1} / (n - 1)
        let g = caterpillar(3, 2);
        let n = g.n();
        let acc = UpdateAccumulator::new(n);
        let x = dense_u_epsilon(&g, &acc, 0.5);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j {
                    g.total_volume() / (g.degree(i as u32) * (n as f64 - 1.0))
                } else {
                    0.0
                };
                assert!((x[(i, j)] - want).abs() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn dense_embedding_is_normalized_and_psd() {
        let g = barbell(4, 1);
        let n = g.n();
        let mut acc = UpdateAccumulator::new(n);
        let gamma = 0.05;
        let mut beta = vec![0.0; n];
        beta[2] = g.mu(2) * gamma;
        acc.accumulate(&g, gamma, &vec![0.0; n], gamma);
        acc.accumulate(&g, 7.0 * gamma / 8.0, &beta, gamma);

        let x = dense_u_epsilon(&g, &acc, 0.7);
        // K . X = 1
        let k = crate::reference::dense_demand_laplacian(&g);
        let dotkx: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| k[(i, j)] * x[(i, j)])
            .sum();
        assert!((dotkx - 1.0).abs() < 1e-10);
        let min_eig = SymmetricEigen::new(x.clone()).eigenvalues.min();
        assert!(min_eig > -1e-10);

        // Gram of the dense embedding reproduces X
        let emb = dense_embedding(&g, &acc, 0.7);
        for i in 0..n as u32 {
            for j in 0..n as u32 {
                let gram: f64 = dot(emb.vertex(i), emb.vertex(j));
                assert!((gram - x[(i as usize, j as usize)]).abs() < 1e-9);
            }
        }
        assert!((emb.demand_energy(&g) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sketch_radii_track_closed_form() {
        // fresh accumulator on a path: spread of vertex i is
        // (total_volume / d_i - 1) / (n - 1)
        let g = path(12);
        let n = g.n();
        let acc = UpdateAccumulator::new(n);
        let params = SketchParams {
            delta: 0.1,
            ..SketchParams::default()
        };
        let emb = sketch_embedding(&g, &acc, 0.5, &params, 42, 1).unwrap();
        assert!((emb.demand_energy(&g) - 1.0).abs() < 1e-12);
        let avg = emb.mu_average(&g);
        for i in 0..n as u32 {
            let want = (g.total_volume() / g.degree(i) - 1.0) / (n as f64 - 1.0);
            let got = emb.spread(i, &avg);
            assert!(
                (got - want).abs() < 0.35 * want,
                "vertex {i}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn sketch_is_deterministic() {
        let g = barbell(5, 1);
        let acc = UpdateAccumulator::new(g.n());
        let params = SketchParams::default();
        let a = sketch_embedding(&g, &acc, 0.5, &params, 7, 3).unwrap();
        let b = sketch_embedding(&g, &acc, 0.5, &params, 7, 3).unwrap();
        assert_eq!(a.data, b.data);
        let c = sketch_embedding(&g, &acc, 0.5, &params, 7, 4).unwrap();
        assert_ne!(a.data, c.data);
        let d = sketch_embedding(&g, &acc, 0.5, &params, 8, 3).unwrap();
        assert_ne!(a.data, d.data);
    }

    #[test]
    fn sketch_edge_energy_tracks_dense() {
        let g = barbell(4, 1);
        let n = g.n();
        let mut acc = UpdateAccumulator::new(n);
        let gamma = 0.1;
        acc.accumulate(&g, gamma, &vec![0.0; n], gamma);
        acc.accumulate(&g, gamma, &vec![0.0; n], gamma);
        let exact = dense_embedding(&g, &acc, 0.6).edge_energy(&g);
        let params = SketchParams {
            delta: 0.05,
            ..SketchParams::default()
        };
        let sketched = sketch_embedding(&g, &acc, 0.6, &params, 11, 2)
            .unwrap()
            .edge_energy(&g);
        assert!(
            (sketched - exact).abs() < 0.15 * exact,
            "{sketched} vs {exact}"
        );
    }

    #[test]
    fn scaled_exponent_matches_dense_update_sum() {
        let g = barbell(4, 2);
        let n = g.n();
        let mut acc = UpdateAccumulator::new(n);
        let gamma = 0.02;
        let mut beta = vec![0.0; n];
        beta[1] = 0.003;
        beta[6] = 0.001;
        acc.accumulate(&g, 7.0 * gamma / 8.0, &beta, gamma);
        let eps = 0.4;

        let op = ScaledExponent::full(&g, &acc, eps);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let mut got = vec![0.0; n];
        op.apply(&x, &mut got);

        let mut dense = dense_update_sum(&g, &acc) * (g.total_volume() * eps);
        for i in 0..n {
            for j in 0..n {
                dense[(i, j)] /= g.degree(i as u32).sqrt() * g.degree(j as u32).sqrt();
            }
        }
        let want = dense * nalgebra::DVector::from_column_slice(&x);
        for i in 0..n {
            assert!((got[i] - want[i]).abs() < 1e-12);
        }
    }
}
