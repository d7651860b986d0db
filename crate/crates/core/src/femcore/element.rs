//! Reference element spaces on [-1,1]^d and tensor quadrature.

use super::lagrange::{legendre_mode, LagrangeBasis};
use super::quadrature::{gauss_legendre, gauss_lobatto};

/// Quadrature rule on the reference cube or on one of its faces.
#[derive(Debug, Clone)]
pub struct QuadratureNd {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureNd {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Tensor Gauss rule with `n` points per direction on [-1,1]^dim.
pub fn tensor_gauss(dim: usize, n: usize) -> QuadratureNd {
    let g = gauss_legendre(n);
    let total = n.pow(dim as u32);
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    for q in 0..total {
        let mut x = [0.0; 3];
        let mut w = 1.0;
        let mut rem = q;
        for xa in x.iter_mut().take(dim) {
            let i = rem % n;
            rem /= n;
            *xa = g.points[i];
            w *= g.weights[i];
        }
        points.push(x);
        weights.push(w);
    }
    QuadratureNd { points, weights }
}

/// Tensor Gauss rule on the face xi_axis = +-1; weights integrate over the
/// (dim-1)-dimensional reference face.
pub fn face_gauss(dim: usize, n: usize, axis: usize, positive: bool) -> QuadratureNd {
    let lower = tensor_gauss(dim - 1, n);
    let side = if positive { 1.0 } else { -1.0 };
    let points = lower
        .points
        .iter()
        .map(|p| {
            let mut x = [0.0; 3];
            let mut j = 0;
            for (a, xa) in x.iter_mut().enumerate().take(dim) {
                if a == axis {
                    *xa = side;
                } else {
                    *xa = p[j];
                    j += 1;
                }
            }
            x
        })
        .collect();
    QuadratureNd { points, weights: lower.weights }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// tensor Lagrange Q_r with Gauss-Lobatto nodes
    Lagrange,
    /// total degree Legendre polynomials in cell coordinates
    Legendre,
}

/// Scalar reference space.
#[derive(Debug, Clone)]
pub struct RefSpace {
    pub dim: usize,
    pub degree: usize,
    pub kind: SpaceKind,
    basis1d: Option<LagrangeBasis>,
    /// multi-indices: lattice position (Lagrange) or mode degrees (Legendre)
    pub multi: Vec<[usize; 3]>,
}

impl RefSpace {
    pub fn lagrange(dim: usize, degree: usize) -> Self {
        assert!(degree >= 1, "continuous Lagrange space needs degree >= 1");
        let n = degree + 1;
        let basis = LagrangeBasis::new(gauss_lobatto(n).points);
        let total = n.pow(dim as u32);
        let multi = (0..total)
            .map(|i| {
                let mut m = [0usize; 3];
                let mut rem = i;
                for ma in m.iter_mut().take(dim) {
                    *ma = rem % n;
                    rem /= n;
                }
                m
            })
            .collect();
        Self { dim, degree, kind: SpaceKind::Lagrange, basis1d: Some(basis), multi }
    }

    pub fn legendre(dim: usize, degree: usize) -> Self {
        let mut multi = Vec::new();
        for total in 0..=degree {
            match dim {
                2 => {
                    for j in 0..=total {
                        multi.push([total - j, j, 0]);
                    }
                }
                3 => {
                    for l in 0..=total {
                        for j in 0..=(total - l) {
                            multi.push([total - l - j, j, l]);
                        }
                    }
                }
                _ => multi.push([total, 0, 0]),
            }
        }
        Self { dim, degree, kind: SpaceKind::Legendre, basis1d: None, multi }
    }

    pub fn n_local(&self) -> usize {
        self.multi.len()
    }

    /// 1D nodes of the Lagrange space.
    pub fn nodes1d(&self) -> &[f64] {
        self.basis1d.as_ref().map(|b| b.nodes()).unwrap_or(&[])
    }

    /// Reference coordinates of the nodes (Lagrange only).
    pub fn node_points(&self) -> Vec<[f64; 3]> {
        let nodes = self.nodes1d();
        self.multi
            .iter()
            .map(|m| {
                let mut x = [0.0; 3];
                for a in 0..self.dim {
                    x[a] = nodes[m[a]];
                }
                x
            })
            .collect()
    }

    /// Values and reference gradients of all basis functions at `xi`.
    pub fn eval(&self, xi: &[f64; 3], vals: &mut [f64], grads: &mut [[f64; 3]]) {
        let d = self.dim;
        let n1 = self.degree + 1;
        assert!(n1 <= 8, "polynomial degree above 7 is not supported");
        let mut vv = [[0.0; 8]; 3];
        let mut dd = [[0.0; 8]; 3];
        for a in 0..d {
            for i in 0..n1 {
                let (v, dv) = match self.kind {
                    SpaceKind::Lagrange => {
                        let b = self.basis1d.as_ref().unwrap();
                        (b.value(i, xi[a]), b.derivative(i, xi[a]))
                    }
                    SpaceKind::Legendre => legendre_mode(i, xi[a]),
                };
                vv[a][i] = v;
                dd[a][i] = dv;
            }
        }
        for (j, m) in self.multi.iter().enumerate() {
            let mut val = 1.0;
            for a in 0..d {
                val *= vv[a][m[a]];
            }
            vals[j] = val;
            let mut g = [0.0; 3];
            for (a, ga) in g.iter_mut().enumerate().take(d) {
                let mut p = dd[a][m[a]];
                for b in 0..d {
                    if b != a {
                        p *= vv[b][m[b]];
                    }
                }
                *ga = p;
            }
            grads[j] = g;
        }
    }
}

/// Basis values and reference gradients tabulated at quadrature points.
#[derive(Debug, Clone)]
pub struct Tabulation {
    pub n_q: usize,
    pub n_b: usize,
    pub vals: Vec<f64>,
    pub grads: Vec<[f64; 3]>,
}

impl Tabulation {
    pub fn new(space: &RefSpace, quad: &QuadratureNd) -> Self {
        let n_b = space.n_local();
        let n_q = quad.len();
        let mut vals = vec![0.0; n_q * n_b];
        let mut grads = vec![[0.0; 3]; n_q * n_b];
        for (q, xi) in quad.points.iter().enumerate() {
            space.eval(xi, &mut vals[q * n_b..(q + 1) * n_b], &mut grads[q * n_b..(q + 1) * n_b]);
        }
        Self { n_q, n_b, vals, grads }
    }

    #[inline]
    pub fn val(&self, q: usize, i: usize) -> f64 {
        self.vals[q * self.n_b + i]
    }

    #[inline]
    pub fn grad(&self, q: usize, i: usize) -> &[f64; 3] {
        &self.grads[q * self.n_b + i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_rule_integrates_products() {
        let q = tensor_gauss(3, 3);
        let s: f64 = q.points.iter().zip(&q.weights).map(|(p, w)| w * p[0].powi(4) * p[1] * p[1]).sum();
        assert!((s - (2.0 / 5.0) * (2.0 / 3.0) * 2.0).abs() < 1e-13);
        let f = face_gauss(3, 2, 1, true);
        assert!(f.points.iter().all(|p| p[1] == 1.0));
        assert!((f.weights.iter().sum::<f64>() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn lagrange_space_is_nodal_and_reproduces_linears() {
        let s = RefSpace::lagrange(2, 3);
        assert_eq!(s.n_local(), 16);
        let pts = s.node_points();
        let mut v = vec![0.0; 16];
        let mut g = vec![[0.0; 3]; 16];
        for (j, p) in pts.iter().enumerate() {
            s.eval(p, &mut v, &mut g);
            for (i, vi) in v.iter().enumerate() {
                assert!((vi - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
        s.eval(&[0.3, -0.4, 0.0], &mut v, &mut g);
        let f: f64 = (0..16).map(|i| v[i] * (2.0 * pts[i][0] - pts[i][1])).sum();
        let gx: f64 = (0..16).map(|i| g[i][0] * (2.0 * pts[i][0] - pts[i][1])).sum();
        assert!((f - 1.0).abs() < 1e-13);
        assert!((gx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_space_dimension_and_orthogonality() {
        assert_eq!(RefSpace::legendre(2, 2).n_local(), 6);
        assert_eq!(RefSpace::legendre(3, 1).n_local(), 4);
        assert_eq!(RefSpace::legendre(3, 3).n_local(), 20);
        let s = RefSpace::legendre(2, 3);
        let q = tensor_gauss(2, 4);
        let t = Tabulation::new(&s, &q);
        for i in 0..s.n_local() {
            for j in 0..s.n_local() {
                let m: f64 = (0..q.len()).map(|k| q.weights[k] * t.val(k, i) * t.val(k, j)).sum();
                if i != j {
                    assert!(m.abs() < 1e-13);
                } else {
                    assert!(m > 0.0);
                }
            }
        }
    }
}
