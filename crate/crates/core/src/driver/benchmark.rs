//! Loaded L-shaped domain with goal quantities on the free face x = 1.

use crate::assembly::ProblemData;

/// Time-periodic traction on the top face y = 1; all other data vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LShapeLoad {
    pub amplitude: f64,
    /// angular frequency of the load
    pub omega: f64,
}

impl Default for LShapeLoad {
    fn default() -> Self {
        Self { amplitude: 5e9, omega: 8.0 * std::f64::consts::PI }
    }
}

impl LShapeLoad {
    /// Normal load profile on the top face.
    pub fn profile(x: &[f64; 3]) -> f64 {
        32.0 * x[0] * x[2] - 18.0 * x[0] - 16.0 * x[2] + 10.0
    }
}

impl ProblemData for LShapeLoad {
    fn traction(&self, x: &[f64; 3], t: f64) -> [f64; 3] {
        if (x[1] - 1.0).abs() > 1e-12 {
            return [0.0; 3];
        }
        [0.0, self.amplitude * Self::profile(x) * (self.omega * t).sin(), 0.0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_lives_on_the_top_face_only() {
        let load = LShapeLoad::default();
        assert_eq!(load.traction(&[1.0, 0.3, 0.2], 0.1), [0.0; 3]);
        let t = load.traction(&[0.25, 1.0, 0.25], 1.0 / 16.0);
        // profile at (0.25, 0.25) is 2 - 4.5 - 4 + 10 = 3.5
        assert!((t[1] - 3.5 * 5e9).abs() < 1e-3);
        assert!(load.traction(&[0.25, 1.0, 0.25], 0.25)[1].abs() < 1e-3 * 5e9);
    }
}
