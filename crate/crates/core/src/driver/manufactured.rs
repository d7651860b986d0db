//! Manufactured solutions with separable space and time dependence.

use crate::assembly::{ExactSolution, Material, ProblemData};

/// Scalar function of one variable with two derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum Fn1d {
    /// sin(w s)
    Sin(f64),
    /// sin(w s^2)
    SinSquare(f64),
    /// polynomial with coefficients in increasing degree
    Poly(Vec<f64>),
    Const(f64),
}

impl Fn1d {
    /// (value, first derivative, second derivative)
    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        match self {
            Fn1d::Sin(w) => {
                let (sn, cs) = (w * s).sin_cos();
                (sn, w * cs, -w * w * sn)
            }
            Fn1d::SinSquare(w) => {
                let (sn, cs) = (w * s * s).sin_cos();
                (sn, 2.0 * w * s * cs, 2.0 * w * cs - 4.0 * w * w * s * s * sn)
            }
            Fn1d::Poly(c) => {
                let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
                // Horner for value and both derivatives
                for &ci in c.iter().rev() {
                    dd = dd * s + d * 2.0;
                    d = d * s + v;
                    v = v * s + ci;
                }
                (v, d, dd)
            }
            Fn1d::Const(c) => (*c, 0.0, 0.0),
        }
    }
}

/// scale * prod_a f_a(x_a)
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub scale: f64,
    pub factors: Vec<Fn1d>,
}

impl Profile {
    pub fn zero(dim: usize) -> Self {
        Self { scale: 0.0, factors: vec![Fn1d::Const(1.0); dim] }
    }

    /// value, gradient, Hessian
    pub fn eval(&self, x: &[f64; 3]) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let d = self.factors.len();
        let mut v = [[0.0; 3]; 3];
        for (a, f) in self.factors.iter().enumerate() {
            let (f0, f1, f2) = f.eval(x[a]);
            v[a] = [f0, f1, f2];
        }
        let prod_except = |skip: &[usize], orders: &[(usize, usize)]| -> f64 {
            let mut p = self.scale;
            for a in 0..d {
                if skip.contains(&a) {
                    continue;
                }
                p *= v[a][0];
            }
            for &(a, o) in orders {
                p *= v[a][o];
            }
            p
        };
        let val = prod_except(&[], &[]);
        let mut grad = [0.0; 3];
        let mut hess = [[0.0; 3]; 3];
        for a in 0..d {
            grad[a] = prod_except(&[a], &[(a, 1)]);
            for b in 0..d {
                hess[a][b] = if a == b {
                    prod_except(&[a], &[(a, 2)])
                } else {
                    prod_except(&[a, b], &[(a, 1), (b, 1)])
                };
            }
        }
        (val, grad, hess)
    }
}

/// u_c(x, t) = X_c(x) T_u(t), p(x, t) = P(x) T_p(t).
#[derive(Debug, Clone)]
pub struct Manufactured {
    pub dim: usize,
    pub u: Vec<Profile>,
    pub p: Profile,
    pub tu: Fn1d,
    pub tp: Fn1d,
    pub mat: Material,
}

impl Manufactured {
    /// u = phi d, p = phi with phi = sin(w1 t^2) sin(w2 x) sin(w2 y).
    pub fn conv1(mat: Material, w1: f64, w2: f64, direction: [f64; 2]) -> Self {
        let phi = |s: f64| Profile { scale: s, factors: vec![Fn1d::Sin(w2), Fn1d::Sin(w2)] };
        Self {
            dim: 2,
            u: vec![phi(direction[0]), phi(direction[1])],
            p: phi(1.0),
            tu: Fn1d::SinSquare(w1),
            tp: Fn1d::SinSquare(w1),
            mat,
        }
    }

    /// Polynomial-in-space field with separate temporal frequencies.
    pub fn conv2(mat: Material, w1: f64, w2: f64) -> Self {
        // a(s) = (s-1)^2 s^2, b(s) = (s-1) s (2s-1)
        let a = Fn1d::Poly(vec![0.0, 0.0, 1.0, -2.0, 1.0]);
        let b = Fn1d::Poly(vec![0.0, 1.0, -3.0, 2.0]);
        Self {
            dim: 2,
            u: vec![
                Profile { scale: -2.0, factors: vec![a.clone(), b.clone()] },
                Profile { scale: 2.0, factors: vec![b.clone(), a.clone()] },
            ],
            p: Profile { scale: -2.0, factors: vec![a, b] },
            tu: Fn1d::Sin(w1),
            tp: Fn1d::Sin(w2),
            mat,
        }
    }

    fn u_parts(&self, x: &[f64; 3]) -> Vec<(f64, [f64; 3], [[f64; 3]; 3])> {
        self.u.iter().map(|p| p.eval(x)).collect()
    }
}

impl ProblemData for Manufactured {
    fn body_force(&self, x: &[f64; 3], t: f64) -> [f64; 3] {
        let d = self.dim;
        let m = &self.mat;
        let (tu, _, tu2) = self.tu.eval(t);
        let (tp, _, _) = self.tp.eval(t);
        let parts = self.u_parts(x);
        let (_, gp, _) = self.p.eval(x);
        let mut f = [0.0; 3];
        for c in 0..d {
            let lap: f64 = (0..d).map(|a| parts[c].2[a][a]).sum();
            let grad_div: f64 = (0..d).map(|b| parts[b].2[b][c]).sum();
            let div_stress = m.mu * lap + (m.lambda + m.mu) * grad_div;
            f[c] = parts[c].0 * tu2 + (-div_stress * tu + m.alpha * gp[c] * tp) / m.rho;
        }
        f
    }

    fn source(&self, x: &[f64; 3], t: f64) -> f64 {
        let d = self.dim;
        let m = &self.mat;
        let (_, tu1, _) = self.tu.eval(t);
        let (tp, tp1, _) = self.tp.eval(t);
        let parts = self.u_parts(x);
        let (pv, _, hp) = self.p.eval(x);
        let div: f64 = (0..d).map(|b| parts[b].1[b]).sum();
        let mut kh = 0.0;
        for a in 0..d {
            for b in 0..d {
                kh += m.permeability[a][b] * hp[a][b];
            }
        }
        m.c0 * pv * tp1 + m.alpha * div * tu1 - kh * tp
    }

    fn u_dirichlet(&self, x: &[f64; 3], t: f64) -> [f64; 3] {
        ExactSolution::u(self, x, t)
    }

    fn v_dirichlet(&self, x: &[f64; 3], t: f64) -> [f64; 3] {
        ExactSolution::v(self, x, t)
    }

    fn p_dirichlet(&self, x: &[f64; 3], t: f64) -> f64 {
        ExactSolution::p(self, x, t)
    }

    fn initial_u(&self, _x: &[f64; 3]) -> [f64; 3] {
        unreachable!("manufactured problems project the exact solution at the start time")
    }
}

impl ExactSolution for Manufactured {
    fn u(&self, x: &[f64; 3], t: f64) -> [f64; 3] {
        let tu = self.tu.eval(t).0;
        let mut out = [0.0; 3];
        for (c, p) in self.u.iter().enumerate() {
            out[c] = p.eval(x).0 * tu;
        }
        out
    }

    fn v(&self, x: &[f64; 3], t: f64) -> [f64; 3] {
        let tu1 = self.tu.eval(t).1;
        let mut out = [0.0; 3];
        for (c, p) in self.u.iter().enumerate() {
            out[c] = p.eval(x).0 * tu1;
        }
        out
    }

    fn grad_u(&self, x: &[f64; 3], t: f64) -> [[f64; 3]; 3] {
        let tu = self.tu.eval(t).0;
        let mut g = [[0.0; 3]; 3];
        for (c, p) in self.u.iter().enumerate() {
            let (_, gr, _) = p.eval(x);
            for a in 0..3 {
                g[c][a] = gr[a] * tu;
            }
        }
        g
    }

    fn p(&self, x: &[f64; 3], t: f64) -> f64 {
        self.p.eval(x).0 * self.tp.eval(t).0
    }
}

/// Initial data taken from an exact solution at a fixed time.
pub struct InitialFromExact<'a> {
    pub exact: &'a dyn ExactSolution,
    pub t0: f64,
}

impl ProblemData for InitialFromExact<'_> {
    fn initial_u(&self, x: &[f64; 3]) -> [f64; 3] {
        self.exact.u(x, self.t0)
    }
    fn initial_v(&self, x: &[f64; 3]) -> [f64; 3] {
        self.exact.v(x, self.t0)
    }
    fn initial_p(&self, x: &[f64; 3]) -> f64 {
        self.exact.p(x, self.t0)
    }
}
