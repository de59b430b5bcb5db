//! Implicit operators over the degree measure.
//!
//! With `mu_i = d_i / total_volume`, the crate works with three matrix
//! families, none of which is ever materialized:
//!
//! * the graph Laplacian `L`,
//! * the demand Laplacian `K = diag(mu) - mu mu'`, the Laplacian of the
//!   complete graph whose edge `{i, j}` has weight `mu_i mu_j`,
//! * per-vertex spread operators `R_i = (e_i - mu)(e_i - mu)'`.
//!
//! Two identities anchor the implementation and its tests: `K` applied to
//! `x` is `mu .* (x - <mu, x> 1)`, and the `mu`-mixture of the spread
//! operators reproduces `K`, `sum_i mu_i R_i = K`.
//!
//! [`UpdateAccumulator`] maintains the running sum of scaled dual updates
//! `H = sum_t (1/6) (L / total_volume + sum_i beta_i R_i + (gamma - alpha) K)`
//! and exposes `H x` in `O(n + m)` time, plus the degree-normalized
//! exponent `A x` with `A = total_volume * eps * D^{-1/2} H D^{-1/2}`
//! consumed by the embedding sketch.

use crate::graph::Graph;

/// Unit vector `vhat_i = sqrt(d_i / total_volume)`, the kernel direction
/// of the degree-normalized Laplacians.
pub fn v_hat(g: &Graph) -> Vec<f64> {
    let tv = g.total_volume();
    g.degrees().iter().map(|d| (d / tv).sqrt()).collect()
}

/// `<mu, x>`.
pub fn mu_dot(g: &Graph, x: &[f64]) -> f64 {
    let tv = g.total_volume();
    g.degrees()
        .iter()
        .zip(x)
        .map(|(d, xi)| d / tv * xi)
        .sum()
}

/// `y = K x` with `(Kx)_i = mu_i (x_i - <mu, x>)`.
pub fn demand_matvec(g: &Graph, x: &[f64], y: &mut [f64]) {
    assert_eq!(x.len(), g.n());
    assert_eq!(y.len(), g.n());
    let s = mu_dot(g, x);
    let tv = g.total_volume();
    for i in 0..g.n() {
        y[i] = g.degrees()[i] / tv * (x[i] - s);
    }
}

/// `x' K x`, the variance of `x` under `mu`.
pub fn demand_quadratic(g: &Graph, x: &[f64]) -> f64 {
    let s = mu_dot(g, x);
    let tv = g.total_volume();
    g.degrees()
        .iter()
        .zip(x)
        .map(|(d, xi)| d / tv * (xi - s) * (xi - s))
        .sum()
}

/// `y = R_i x = (x_i - <mu, x>) (e_i - mu)`.
pub fn spread_matvec(g: &Graph, i: u32, x: &[f64], y: &mut [f64]) {
    assert_eq!(x.len(), g.n());
    assert_eq!(y.len(), g.n());
    let s = mu_dot(g, x);
    let c = x[i as usize] - s;
    let tv = g.total_volume();
    for j in 0..g.n() {
        y[j] = -c * g.degrees()[j] / tv;
    }
    y[i as usize] += c;
}

/// `x' R_i x = (x_i - <mu, x>)^2`.
pub fn spread_quadratic(g: &Graph, i: u32, x: &[f64]) -> f64 {
    let c = x[i as usize] - mu_dot(g, x);
    c * c
}

/// Running sum of scaled dual updates. See the module docs for the exact
/// linear combination; the fields store its coefficients directly:
/// `H = a L + sum_i b_i R_i + c K` after `t` updates.
#[derive(Clone, Debug)]
pub struct UpdateAccumulator {
    a: f64,
    b: Vec<f64>,
    c: f64,
    t: u32,
}

impl UpdateAccumulator {
    pub fn new(n: usize) -> Self {
        UpdateAccumulator {
            a: 0.0,
            b: vec![0.0; n],
            c: 0.0,
            t: 0,
        }
    }

    /// Number of accumulated updates.
    pub fn updates(&self) -> u32 {
        self.t
    }

    pub fn laplacian_coefficient(&self) -> f64 {
        self.a
    }

    pub fn spread_coefficients(&self) -> &[f64] {
        &self.b
    }

    pub fn demand_coefficient(&self) -> f64 {
        self.c
    }

    /// Folds one dual update `(alpha, beta)` into the sum. `beta` must be
    /// entrywise nonnegative; `gamma` is the run's target conductance
    /// parameter, fixed across updates.
    pub fn accumulate(&mut self, g: &Graph, alpha: f64, beta: &[f64], gamma: f64) {
        assert_eq!(beta.len(), self.b.len());
        debug_assert!(beta.iter().all(|&b| b >= 0.0));
        self.a += 1.0 / (6.0 * g.total_volume());
        for (bi, &upd) in self.b.iter_mut().zip(beta) {
            *bi += upd / 6.0;
        }
        self.c += (gamma - alpha) / 6.0;
        self.t += 1;
    }

    /// `y = H x` in one pass over edges plus two passes over vertices.
    pub fn matvec(&self, g: &Graph, x: &[f64], y: &mut [f64]) {
        let n = g.n();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        g.laplacian_matvec(x, y);
        let s = mu_dot(g, x);
        let tv = g.total_volume();
        // sum_i b_i R_i x = z - <1, z> mu with z_i = b_i (x_i - s)
        let mut zsum = 0.0;
        for i in 0..n {
            let z = self.b[i] * (x[i] - s);
            y[i] = self.a * y[i] + z + self.c * g.degrees()[i] / tv * (x[i] - s);
            zsum += z;
        }
        for i in 0..n {
            y[i] -= zsum * g.degrees()[i] / tv;
        }
    }

    /// `x' H x`.
    pub fn quadratic(&self, g: &Graph, x: &[f64]) -> f64 {
        let s = mu_dot(g, x);
        let mut q = self.a * g.laplacian_quadratic(x) + self.c * demand_quadratic(g, x);
        for i in 0..g.n() {
            let c = x[i] - s;
            q += self.b[i] * c * c;
        }
        q
    }

    /// `y = A x` with `A = total_volume * eps * D^{-1/2} H D^{-1/2}`.
    /// Requires every degree positive.
    pub fn exponent_matvec(&self, g: &Graph, eps: f64, x: &[f64], y: &mut [f64]) {
        let n = g.n();
        let scaled: Vec<f64> = (0..n)
            .map(|i| {
                let d = g.degrees()[i];
                assert!(d > 0.0, "vertex {i} has zero degree");
                x[i] / d.sqrt()
            })
            .collect();
        self.matvec(g, &scaled, y);
        let factor = g.total_volume() * eps;
        for i in 0..n {
            y[i] *= factor / g.degrees()[i].sqrt();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn testgraph() -> Graph {
        Graph::from_edges(
            5,
            &[
                (0, 1, 2.0),
                (1, 2, 1.0),
                (2, 3, 0.5),
                (3, 4, 1.0),
                (4, 0, 1.0),
                (1, 3, 2.5),
            ],
        )
        .unwrap()
    }

    fn xvec() -> Vec<f64> {
        vec![0.7, -1.1, 0.2, 2.3, -0.6]
    }

    #[test]
    fn mixture_of_spreads_is_demand_laplacian() {
        let g = testgraph();
        let x = xvec();
        let n = g.n();
        let mut acc = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 0..n as u32 {
            spread_matvec(&g, i, &x, &mut y);
            let mi = g.mu(i);
            for j in 0..n {
                acc[j] += mi * y[j];
            }
        }
        demand_matvec(&g, &x, &mut y);
        for j in 0..n {
            assert!((acc[j] - y[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn demand_quadratic_is_mu_variance() {
        let g = testgraph();
        let x = xvec();
        let s = mu_dot(&g, &x);
        let var: f64 = (0..g.n())
            .map(|i| g.mu(i as u32) * (x[i] - s) * (x[i] - s))
            .sum();
        assert!((demand_quadratic(&g, &x) - var).abs() < 1e-14);
        let mut y = vec![0.0; g.n()];
        demand_matvec(&g, &x, &mut y);
        let xty: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((xty - var).abs() < 1e-14);
    }

    #[test]
    fn all_operators_annihilate_constants() {
        let g = testgraph();
        let ones = vec![1.0; g.n()];
        let mut y = vec![0.0; g.n()];
        demand_matvec(&g, &ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-15));
        spread_matvec(&g, 2, &ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn accumulator_coefficients_after_updates() {
        let g = testgraph();
        let gamma = 0.01;
        let n = g.n();
        let mut acc = UpdateAccumulator::new(n);
        // energy-style update: alpha = gamma, beta = 0
        acc.accumulate(&g, gamma, &vec![0.0; n], gamma);
        assert!((acc.laplacian_coefficient() - 1.0 / (6.0 * g.total_volume())).abs() < 1e-18);
        assert_eq!(acc.demand_coefficient(), 0.0);
        assert_eq!(acc.updates(), 1);
        // sweep-style update: alpha = 7 gamma / 8, beta_i = mu_i gamma on a set
        let mut beta = vec![0.0; n];
        beta[0] = g.mu(0) * gamma;
        acc.accumulate(&g, 7.0 * gamma / 8.0, &beta, gamma);
        assert!((acc.demand_coefficient() - gamma / 48.0).abs() < 1e-18);
        assert!((acc.spread_coefficients()[0] - beta[0] / 6.0).abs() < 1e-18);
        assert_eq!(acc.updates(), 2);
    }

    #[test]
    fn accumulator_matvec_matches_direct_sum() {
        let g = testgraph();
        let n = g.n();
        let gamma = 0.05;
        let mut acc = UpdateAccumulator::new(n);
        let beta1 = vec![0.0, 0.01, 0.0, 0.02, 0.0];
        let beta2 = vec![0.005, 0.0, 0.0, 0.0, 0.015];
        acc.accumulate(&g, gamma, &beta1, gamma);
        acc.accumulate(&g, 7.0 * gamma / 8.0, &beta2, gamma);

        let x = xvec();
        let mut got = vec![0.0; n];
        acc.matvec(&g, &x, &mut got);

        // same combination, assembled from the primitive operators
        let mut want = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        g.laplacian_matvec(&x, &mut tmp);
        for j in 0..n {
            want[j] += acc.laplacian_coefficient() * tmp[j];
        }
        for i in 0..n as u32 {
            spread_matvec(&g, i, &x, &mut tmp);
            for j in 0..n {
                want[j] += acc.spread_coefficients()[i as usize] * tmp[j];
            }
        }
        demand_matvec(&g, &x, &mut tmp);
        for j in 0..n {
            want[j] += acc.demand_coefficient() * tmp[j];
        }

        for j in 0..n {
            assert!((got[j] - want[j]).abs() < 1e-14, "entry {j}");
        }
        let xty: f64 = x.iter().zip(&got).map(|(a, b)| a * b).sum();
        assert!((xty - acc.quadratic(&g, &x)).abs() < 1e-13);
    }

    #[test]
    fn exponent_annihilates_sqrt_degrees() {
        let g = testgraph();
        let n = g.n();
        let mut acc = UpdateAccumulator::new(n);
        acc.accumulate(&g, 0.01, &vec![0.0; n], 0.01);
        let sqrt_d: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
        let mut y = vec![0.0; n];
        acc.exponent_matvec(&g, 0.5, &sqrt_d, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-14));
    }
}
