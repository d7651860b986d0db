use serde::{Deserialize, Serialize};

/// Constant material coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub rho: f64,
    pub alpha: f64,
    pub c0: f64,
    pub lambda: f64,
    pub mu: f64,
    /// permeability tensor (only the leading dim x dim block is used)
    pub permeability: [[f64; 3]; 3],
}

impl Material {
    /// Lame parameters from Young's modulus and Poisson ratio.
    pub fn lame(e: f64, nu: f64) -> (f64, f64) {
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        (lambda, mu)
    }

    pub fn from_young(rho: f64, alpha: f64, c0: f64, e: f64, nu: f64, k: f64) -> Self {
        let (lambda, mu) = Self::lame(e, nu);
        Self { rho, alpha, c0, lambda, mu, permeability: scalar_tensor(k) }
    }

    /// Coefficients of the convergence studies: rho = 1, alpha = 0.9,
    /// c0 = 0.01, K = I, E = 100, nu = 0.35.
    pub fn convergence_default() -> Self {
        Self::from_young(1.0, 0.9, 0.01, 100.0, 0.35, 1.0)
    }

    /// Coefficients of the L-shape benchmark (E = 20000, nu = 0.3).
    pub fn benchmark_default() -> Self {
        Self::from_young(1.0, 0.9, 0.01, 20000.0, 0.3, 1.0)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.rho > 0.0) {
            return Err(format!("density must be positive, got {}", self.rho));
        }
        if !(self.mu > 0.0) {
            return Err(format!("shear modulus must be positive, got {}", self.mu));
        }
        if self.c0 < 0.0 {
            return Err(format!("storage coefficient must be non-negative, got {}", self.c0));
        }
        if ![self.lambda, self.alpha, self.c0].iter().all(|v| v.is_finite()) {
            return Err("material coefficients must be finite".into());
        }
        Ok(())
    }
}

pub fn scalar_tensor(k: f64) -> [[f64; 3]; 3] {
    [[k, 0.0, 0.0], [0.0, k, 0.0], [0.0, 0.0, k]]
}

/// Face length used in the penalty terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FaceSizeMode {
    /// mean d-dimensional measure of the adjacent cells; the cell measure on
    /// boundary faces
    #[default]
    Measure,
    /// cell diameter
    Diameter,
}

/// Penalty parameters of the Nitsche and interior penalty terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NitscheParams {
    /// displacement Nitsche penalty
    pub gamma_a: f64,
    /// pressure Nitsche penalty (continuous pressure)
    pub gamma_b: f64,
    /// interior penalty (discontinuous pressure)
    pub gamma: f64,
    pub face_size: FaceSizeMode,
}

impl NitscheParams {
    /// gamma_a = 5e4 r (r + 1), gamma = gamma_b = r (r - 1) / 2.
    pub fn defaults(r: usize) -> Self {
        let rf = r as f64;
        let gb = 0.5 * rf * (rf - 1.0);
        Self { gamma_a: 5e4 * rf * (rf + 1.0), gamma_b: gb, gamma: gb, face_size: FaceSizeMode::Measure }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lame_parameters_of_the_convergence_material() {
        let m = Material::convergence_default();
        assert!((m.lambda - 86.41975308641975).abs() < 1e-11);
        assert!((m.mu - 37.03703703703704).abs() < 1e-12);
    }

    #[test]
    fn default_penalties() {
        let p = NitscheParams::defaults(3);
        assert_eq!(p.gamma_a, 6e5);
        assert_eq!(p.gamma_b, 3.0);
        assert_eq!(p.gamma, 3.0);
        assert_eq!(NitscheParams::defaults(1).gamma, 0.0);
    }
}
