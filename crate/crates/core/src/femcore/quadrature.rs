//! One-dimensional quadrature rules on the reference interval [-1, 1].

use std::f64::consts::PI;

/// Points and weights of a 1D rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrate `f` over [-1, 1].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial P_n and its derivative at x.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // derivative via the standard recurrence; at |x| = 1 use the closed form
    let nf = n as f64;
    let dp = if (x * x - 1.0).abs() < 1e-14 {
        x.powi(n as i32 + 1) * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

/// n-point Gauss-Legendre rule (exact for degree 2n-1).
pub fn gauss_legendre(n: usize) -> Rule1d {
    assert!(n >= 1, "Gauss rule needs at least one point");
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        points[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Rule1d { points, weights }
}

/// Roots of `f` in (a, b) located by sign changes on a fine sampling grid
/// and refined by bisection.
fn bracketed_roots(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (b - a) / samples as f64;
    let mut x0 = a;
    let mut f0 = f(x0);
    for s in 1..=samples {
        let x1 = a + h * s as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo < 1e-17 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// n-point Gauss-Lobatto rule, endpoints included (n >= 2).
pub fn gauss_lobatto(n: usize) -> Rule1d {
    assert!(n >= 2, "Lobatto rule needs at least two points");
    let m = n - 1;
    let interior = bracketed_roots(|x| legendre(m, x).1, -1.0, 1.0, 4000 * n)
        .into_iter()
        .filter(|x| x.abs() < 1.0 - 1e-12);
    let mut points = vec![-1.0];
    points.extend(interior);
    points.push(1.0);
    assert_eq!(points.len(), n, "Lobatto root search failed");
    let nf = m as f64;
    let weights = points
        .iter()
        .map(|&x| {
            let p = legendre(m, x).0;
            2.0 / (nf * (nf + 1.0) * p * p)
        })
        .collect();
    Rule1d { points, weights }
}

/// n-point right Gauss-Radau rule; the last point is +1.
/// Exact for polynomials of degree 2n-2.
pub fn gauss_radau_right(n: usize) -> Rule1d {
    assert!(n >= 1, "Radau rule needs at least one point");
    if n == 1 {
        return Rule1d { points: vec![1.0], weights: vec![2.0] };
    }
    let f = |x: f64| legendre(n - 1, x).0 - legendre(n, x).0;
    let mut points: Vec<f64> = bracketed_roots(f, -1.0, 1.0, 4000 * n)
        .into_iter()
        .filter(|x| *x < 1.0 - 1e-12)
        .collect();
    points.push(1.0);
    assert_eq!(points.len(), n, "Radau root search failed");
    let nf = n as f64;
    let weights = points
        .iter()
        .map(|&x| {
            if x == 1.0 {
                2.0 / (nf * nf)
            } else {
                let p = legendre(n - 1, x).0;
                (1.0 + x) / (nf * nf * p * p)
            }
        })
        .collect();
    Rule1d { points, weights }
}
