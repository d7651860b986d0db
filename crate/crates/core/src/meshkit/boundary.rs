use serde::{Deserialize, Serialize};

/// Boundary condition type for the displacement/velocity pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UBc {
    Dirichlet,
    Neumann,
    /// only the normal component is prescribed (slip)
    Directional,
}

/// Boundary condition type for the pressure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PBc {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryTag {
    pub u: UBc,
    pub p: PBc,
    /// face belongs to the surface used for goal quantities
    pub monitor: bool,
}

/// How boundary faces of a domain are classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryRule {
    AllDirichlet,
    /// loaded top face y = 1, free monitored face x = 1, slip elsewhere
    LShapeBenchmark,
    Uniform { u: UBc, p: PBc },
}

impl BoundaryRule {
    pub fn classify(&self, center: &[f64; 3], normal: &[f64; 3], _dim: usize) -> BoundaryTag {
        match *self {
            BoundaryRule::AllDirichlet => BoundaryTag { u: UBc::Dirichlet, p: PBc::Dirichlet, monitor: false },
            BoundaryRule::Uniform { u, p } => BoundaryTag { u, p, monitor: false },
            BoundaryRule::LShapeBenchmark => {
                let eps = 1e-12;
                if (center[1] - 1.0).abs() < eps && normal[1] > 0.5 {
                    BoundaryTag { u: UBc::Neumann, p: PBc::Dirichlet, monitor: false }
                } else if (center[0] - 1.0).abs() < eps && normal[0] > 0.5 {
                    BoundaryTag { u: UBc::Neumann, p: PBc::Neumann, monitor: true }
                } else {
                    BoundaryTag { u: UBc::Directional, p: PBc::Neumann, monitor: false }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshkit::{DomainSpec, MeshHierarchy};

    #[test]
    fn lshape_tags_partition_the_boundary() {
        let h = MeshHierarchy::build(&DomainSpec::lshape3d(), 1).unwrap();
        let l = &h.levels[1];
        let mut top = 0.0;
        let mut monitor = 0.0;
        let mut slip = 0.0;
        for f in l.faces.iter().filter(|f| f.is_boundary()) {
            let t = f.tag.unwrap();
            let a = l.face_measure(f);
            match (t.u, t.p, t.monitor) {
                (UBc::Neumann, PBc::Dirichlet, false) => top += a,
                (UBc::Neumann, PBc::Neumann, true) => monitor += a,
                (UBc::Directional, PBc::Neumann, false) => slip += a,
                other => panic!("unexpected tag {other:?}"),
            }
        }
        assert!((top - 0.25).abs() < 1e-14);
        assert!((monitor - 0.25).abs() < 1e-14);
        // two L-shaped caps plus perimeter 4 times height 0.5
        let total = 2.0 * 0.75 + 4.0 * 0.5;
        assert!((top + monitor + slip - total).abs() < 1e-14);
    }
}
