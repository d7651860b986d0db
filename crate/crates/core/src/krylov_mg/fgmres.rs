//! Flexible GMRES with right preconditioning.

pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// y = A x (overwrites y)
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// A preconditioner may change between iterations, which is why FGMRES
/// stores the preconditioned directions.
pub trait Preconditioner {
    /// z ~ A^{-1} r (overwrites z)
    fn apply(&mut self, r: &[f64], z: &mut [f64]);
}

pub struct Identity;

impl Preconditioner for Identity {
    fn apply(&mut self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}

impl LinearOperator for crate::assembly::SlabOperator {
    fn dim(&self) -> usize {
        crate::assembly::SlabOperator::dim(self)
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        crate::assembly::SlabOperator::apply(self, x, y)
    }
}

impl LinearOperator for crate::sparse::Csr {
    fn dim(&self) -> usize {
        self.nrows
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        self.mul_add(1.0, x, y);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgmresParams {
    /// stop once the Euclidean residual norm is at most this value
    pub abs_tol: f64,
    /// also stop once the residual is at most `rel_tol * |b|`; 0 disables
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for FgmresParams {
    fn default() -> Self {
        Self { abs_tol: 1e-8, rel_tol: 0.0, max_iter: 100 }
    }
}

impl FgmresParams {
    /// Residual norm at which the iteration stops for a right-hand side of norm `beta`.
    pub fn target(&self, beta: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * beta)
    }
}

#[derive(Debug, Clone)]
pub struct FgmresResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// residual norm estimate from the least-squares problem
    pub residual: f64,
    pub converged: bool,
    pub history: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dotp(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve A x = b from a zero initial guess, without restarts.
pub fn fgmres(a: &dyn LinearOperator, prec: &mut dyn Preconditioner, b: &[f64], params: &FgmresParams) -> FgmresResult {
    let n = a.dim();
    let mut x = vec![0.0; n];
    let beta = norm(b);
    let mut history = vec![beta];
    let target = params.target(beta);
    if beta <= target {
        return FgmresResult { x, iterations: 0, residual: beta, converged: true, history };
    }
    let m = params.max_iter;
    let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut z: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut h = vec![vec![0.0; m]; m + 1];
    let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
    let mut g = vec![0.0; m + 1];
    g[0] = beta;
    v.push(b.iter().map(|x| x / beta).collect());
    let mut res = beta;
    let mut k = 0;
    while k < m {
        let mut zk = vec![0.0; n];
        prec.apply(&v[k], &mut zk);
        let mut w = vec![0.0; n];
        a.apply(&zk, &mut w);
        z.push(zk);
        // modified Gram-Schmidt
        for i in 0..=k {
            let hik = dotp(&w, &v[i]);
            h[i][k] = hik;
            for (wj, vj) in w.iter_mut().zip(&v[i]) {
                *wj -= hik * vj;
            }
        }
        let hn = norm(&w);
        h[k + 1][k] = hn;
        for i in 0..k {
            let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
            h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
            h[i][k] = t;
        }
        let d = (h[k][k] * h[k][k] + h[k + 1][k] * h[k + 1][k]).sqrt();
        if d == 0.0 {
            k += 1;
            break;
        }
        cs[k] = h[k][k] / d;
        sn[k] = h[k + 1][k] / d;
        h[k][k] = d;
        h[k + 1][k] = 0.0;
        g[k + 1] = -sn[k] * g[k];
        g[k] *= cs[k];
        res = g[k + 1].abs();
        history.push(res);
        k += 1;
        if res <= target || hn == 0.0 {
            break;
        }
        v.push(w.iter().map(|x| x / hn).collect());
    }
    // back substitution
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = g[i];
        for j in i + 1..k {
            s -= h[i][j] * y[j];
        }
        y[i] = s / h[i][i];
    }
    for (j, yj) in y.iter().enumerate() {
        for (xi, zi) in x.iter_mut().zip(&z[j]) {
            *xi += yj * zi;
        }
    }
    FgmresResult { x, iterations: k, residual: res, converged: res <= target, history }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::{Csr, TripletBuilder};
    use proptest::prelude::*;

    fn convection_diffusion(n: usize, c: f64) -> Csr {
        let mut b = TripletBuilder::new(n, n);
        for i in 0..n {
            b.push(i, i, 2.0);
            if i > 0 {
                b.push(i, i - 1, -1.0 - c);
            }
            if i + 1 < n {
                b.push(i, i + 1, -1.0 + c);
            }
        }
        b.build()
    }

    struct Jacobi(Vec<f64>, usize);

    impl Preconditioner for Jacobi {
        fn apply(&mut self, r: &[f64], z: &mut [f64]) {
            // varies from call to call
            self.1 += 1;
            let s = 1.0 + 0.1 * (self.1 % 3) as f64;
            for i in 0..r.len() {
                z[i] = s * r[i] / self.0[i];
            }
        }
    }

    #[test]
    fn converges_in_at_most_n_steps() {
        let a = convection_diffusion(30, 0.3);
        let b: Vec<f64> = (0..30).map(|i| 1.0 + i as f64).collect();
        let res = fgmres(&a, &mut Identity, &b, &FgmresParams { abs_tol: 1e-10, rel_tol: 0.0, max_iter: 30 });
        assert!(res.converged);
        let mut r = b.clone();
        a.mul_add(-1.0, &res.x, &mut r);
        assert!(norm(&r) < 1e-9);
    }

    #[test]
    fn variable_preconditioner_is_handled() {
        let a = convection_diffusion(40, 0.4);
        let b = vec![1.0; 40];
        let mut p = Jacobi(vec![2.0; 40], 0);
        let res = fgmres(&a, &mut p, &b, &FgmresParams { abs_tol: 1e-10, rel_tol: 0.0, max_iter: 40 });
        assert!(res.converged);
        let mut r = b.clone();
        a.mul_add(-1.0, &res.x, &mut r);
        assert!(norm(&r) < 1e-9, "true residual {}", norm(&r));
    }

    #[test]
    fn zero_rhs_needs_no_iterations() {
        let a = convection_diffusion(5, 0.0);
        let res = fgmres(&a, &mut Identity, &[0.0; 5], &FgmresParams::default());
        assert_eq!(res.iterations, 0);
        assert!(res.x.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let a = convection_diffusion(50, 0.0);
        let res = fgmres(&a, &mut Identity, &vec![1.0; 50], &FgmresParams { abs_tol: 1e-14, rel_tol: 0.0, max_iter: 3 });
        assert!(!res.converged);
        assert_eq!(res.iterations, 3);
    }

    proptest! {
        #[test]
        fn residual_history_is_monotone(c in -0.9f64..0.9, seed in 0u64..1000) {
            let a = convection_diffusion(25, c);
            let b: Vec<f64> = (0..25).map(|i| ((i as u64 * 31 + seed) % 17) as f64 - 8.0).collect();
            let res = fgmres(&a, &mut Identity, &b, &FgmresParams { abs_tol: 1e-9, rel_tol: 0.0, max_iter: 25 });
            for w in res.history.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
            let mut r = b.clone();
            a.mul_add(-1.0, &res.x, &mut r);
            prop_assert!((norm(&r) - res.residual).abs() < 1e-7 * (1.0 + norm(&b)));
        }
    }
}
