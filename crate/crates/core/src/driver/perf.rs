//! Speedup, energy ratio and productivity of a strong-scaling series.

use crate::error::{Error, Result};

/// One measurement: node count, wall time and (optionally) energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub nodes: usize,
    pub wall: f64,
    pub energy: Option<f64>,
}

/// Derived quantities for one measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfRow {
    pub nodes: usize,
    pub wall: f64,
    pub energy: Option<f64>,
    /// t_wall(n_min) / t_wall(n)
    pub speedup: f64,
    /// E(n) / E(n_min)
    pub energy_ratio: Option<f64>,
    /// S / R
    pub productivity: Option<f64>,
}

/// Evaluate the model relative to the row with the smallest node count.
/// Energy ratios and productivities are only computed if every row has an
/// energy value.
pub fn perf_model(rows: &[Measurement]) -> Result<Vec<PerfRow>> {
    let base = rows
        .iter()
        .min_by_key(|m| m.nodes)
        .ok_or_else(|| Error::Config("no measurements".into()))?;
    for m in rows {
        if !(m.wall > 0.0) {
            return Err(Error::Config(format!("wall time of n = {} must be positive", m.nodes)));
        }
        if let Some(e) = m.energy {
            if !(e > 0.0) {
                return Err(Error::Config(format!("energy of n = {} must be positive", m.nodes)));
            }
        }
    }
    let with_energy = rows.iter().all(|m| m.energy.is_some());
    Ok(rows
        .iter()
        .map(|m| {
            let speedup = base.wall / m.wall;
            let energy_ratio = if with_energy { Some(m.energy.unwrap_or(0.0) / base.energy.unwrap_or(1.0)) } else { None };
            PerfRow {
                nodes: m.nodes,
                wall: m.wall,
                energy: m.energy,
                speedup,
                energy_ratio,
                productivity: energy_ratio.map(|r| speedup / r),
            }
        })
        .collect())
}

/// Node count with the largest productivity.
pub fn most_productive(rows: &[PerfRow]) -> Option<usize> {
    rows.iter()
        .filter_map(|r| r.productivity.map(|p| (r.nodes, p)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(n, _)| n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(nodes: usize, wall: f64, energy: f64) -> Measurement {
        Measurement { nodes, wall, energy: Some(energy) }
    }

    #[test]
    fn two_point_series() {
        let rows = perf_model(&[m(20, 12.0, 98.31), m(80, 4.87, 173.5)]).unwrap();
        assert!((rows[1].speedup - 2.464).abs() < 1e-3);
        assert!((rows[1].energy_ratio.unwrap() - 1.7648).abs() < 1e-3);
        assert!((rows[1].productivity.unwrap() - 1.396).abs() < 1e-3);
    }

    #[test]
    fn halved_time_and_doubled_energy() {
        let rows = perf_model(&[m(1, 2.0, 1.0), m(2, 1.0, 2.0)]).unwrap();
        assert_eq!(rows[1].speedup, 2.0);
        assert_eq!(rows[1].energy_ratio, Some(2.0));
        assert_eq!(rows[1].productivity, Some(1.0));
    }

    #[test]
    fn missing_energy_leaves_ratios_empty() {
        let rows = perf_model(&[Measurement { nodes: 4, wall: 3.0, energy: None }, m(8, 2.0, 1.0)]).unwrap();
        assert_eq!(rows[1].speedup, 1.5);
        assert!(rows.iter().all(|r| r.energy_ratio.is_none() && r.productivity.is_none()));
    }

    #[test]
    fn invalid_input() {
        assert!(perf_model(&[]).is_err());
        assert!(perf_model(&[m(1, 0.0, 1.0)]).is_err());
        assert!(perf_model(&[m(1, 1.0, -1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn productivity_is_speedup_over_ratio(walls in proptest::collection::vec((0.1f64..100.0, 0.1f64..1000.0), 1..8)) {
            let rows: Vec<Measurement> = walls.iter().enumerate().map(|(i, &(w, e))| m(10 * (i + 1), w, e)).collect();
            let out = perf_model(&rows).unwrap();
            prop_assert!((out[0].speedup - 1.0).abs() < 1e-15);
            prop_assert!((out[0].energy_ratio.unwrap() - 1.0).abs() < 1e-15);
            for r in &out {
                prop_assert!((r.productivity.unwrap() - r.speedup / r.energy_ratio.unwrap()).abs() < 1e-12 * r.productivity.unwrap());
            }
        }
    }
}
