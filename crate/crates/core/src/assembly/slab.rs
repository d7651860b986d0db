//! Space-time slab operator built from temporal weights and spatial forms.
//!
//! Unknowns of a slab are stored per Radau point as `[V, U, P]`, so the
//! global index of field `f`, spatial dof `i` at point `m` is
//! `m * (2R + S) + offset(f) + i`. Rows follow the same layout: the first
//! block holds the kinematic equation, the second the momentum balance and
//! the third the mass balance.

use super::forms::FormMatrices;
use crate::femcore::TimeBasis;
use crate::sparse::Csr;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Treatment of the divergence coupling in the mass balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    /// coupling through the auxiliary velocity
    #[default]
    Dsa,
    /// coupling through the time derivative of the displacement
    Ds,
}

impl std::str::FromStr for Formulation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dsa" => Ok(Formulation::Dsa),
            "ds" => Ok(Formulation::Ds),
            other => Err(format!("unknown formulation '{other}' (expected dsa or ds)")),
        }
    }
}

pub const FIELD_V: usize = 0;
pub const FIELD_U: usize = 1;
pub const FIELD_P: usize = 2;

/// One spatial block `scale * mat` coupling row field `row` to column field `col`.
#[derive(Debug, Clone)]
pub struct FieldBlock {
    pub row: usize,
    pub col: usize,
    pub scale: f64,
    pub mat: Arc<Csr>,
}

/// Spatial building blocks of a slab: `A_n = W1 (x) Mf + W0 (x) Kf`.
#[derive(Debug, Clone)]
pub struct SpatialBlocks {
    pub n_v: usize,
    pub n_q: usize,
    /// blocks multiplied by the derivative/jump weights W1
    pub mf: Vec<FieldBlock>,
    /// blocks multiplied by the quadrature weights W0
    pub kf: Vec<FieldBlock>,
}

impl SpatialBlocks {
    pub fn new(forms: &FormMatrices, formulation: Formulation) -> Self {
        let mass_v = Arc::new(forms.mass_v.clone());
        let a = Arc::new(forms.a.clone());
        let ct = Arc::new(forms.ct.clone());
        let c = Arc::new(forms.c.clone());
        let mass_q = Arc::new(forms.mass_q.clone());
        let b = Arc::new(forms.b.clone());
        let blk = |row, col, scale, mat: &Arc<Csr>| FieldBlock { row, col, scale, mat: mat.clone() };
        let mut mf = vec![blk(0, FIELD_U, 1.0, &mass_v), blk(1, FIELD_V, 1.0, &mass_v), blk(2, FIELD_P, 1.0, &mass_q)];
        let mut kf = vec![
            blk(0, FIELD_V, -1.0, &mass_v),
            blk(1, FIELD_U, 1.0, &a),
            blk(1, FIELD_P, 1.0, &ct),
            blk(2, FIELD_P, 1.0, &b),
        ];
        match formulation {
            Formulation::Dsa => kf.push(blk(2, FIELD_V, -1.0, &c)),
            Formulation::Ds => mf.push(blk(2, FIELD_U, -1.0, &c)),
        }
        Self { n_v: forms.n_v(), n_q: forms.n_q(), mf, kf }
    }

    pub fn block_size(&self) -> usize {
        2 * self.n_v + self.n_q
    }

    pub fn offset(&self, field: usize) -> usize {
        field * self.n_v
    }

    pub fn field_len(&self, field: usize) -> usize {
        if field == FIELD_P {
            self.n_q
        } else {
            self.n_v
        }
    }

    /// y += sum of blocks applied to one spatial vector x (length 2R+S).
    pub fn apply(blocks: &[FieldBlock], sizes: &SpatialBlocks, x: &[f64], y: &mut [f64]) {
        for blk in blocks {
            let (ro, co) = (sizes.offset(blk.row), sizes.offset(blk.col));
            let xs = &x[co..co + sizes.field_len(blk.col)];
            let ys = &mut y[ro..ro + sizes.field_len(blk.row)];
            blk.mat.mul_add(blk.scale, xs, ys);
        }
    }
}

/// Linear operator of one time slab.
#[derive(Debug, Clone)]
pub struct SlabOperator {
    pub blocks: SpatialBlocks,
    pub w1: Vec<Vec<f64>>,
    pub w0: Vec<f64>,
    pub tau: f64,
    pub formulation: Formulation,
}

impl SlabOperator {
    pub fn new(forms: &FormMatrices, tb: &TimeBasis, tau: f64, formulation: Formulation) -> Self {
        Self {
            blocks: SpatialBlocks::new(forms, formulation),
            w1: tb.w1.clone(),
            w0: tb.w0(tau),
            tau,
            formulation,
        }
    }

    pub fn n_time(&self) -> usize {
        self.w0.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks.block_size()
    }

    pub fn dim(&self) -> usize {
        self.n_time() * self.block_size()
    }

    /// y = A_n x
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nb = self.block_size();
        let nt = self.n_time();
        let mut mx = vec![0.0; nt * nb];
        let mut kx = vec![0.0; nt * nb];
        for m in 0..nt {
            let xm = &x[m * nb..(m + 1) * nb];
            SpatialBlocks::apply(&self.blocks.mf, &self.blocks, xm, &mut mx[m * nb..(m + 1) * nb]);
            SpatialBlocks::apply(&self.blocks.kf, &self.blocks, xm, &mut kx[m * nb..(m + 1) * nb]);
        }
        for m in 0..nt {
            let ym = &mut y[m * nb..(m + 1) * nb];
            for (i, yi) in ym.iter_mut().enumerate() {
                let mut s = self.w0[m] * kx[m * nb + i];
                for mp in 0..nt {
                    s += self.w1[m][mp] * mx[mp * nb + i];
                }
                *yi = s;
            }
        }
    }

    /// Assemble A_n explicitly in CSR form.
    pub fn to_csr(&self) -> Csr {
        let nb = self.block_size();
        let nt = self.n_time();
        let n = self.dim();
        let mut indptr = Vec::with_capacity(n + 1);
        indptr.push(0);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        let mut acc = vec![0.0; n];
        let mut mark = vec![false; n];
        let mut touched: Vec<usize> = Vec::new();
        for m in 0..nt {
            for row_field in 0..3 {
                for i in 0..self.blocks.field_len(row_field) {
                    let mut add = |col: usize, v: f64| {
                        if !mark[col] {
                            mark[col] = true;
                            touched.push(col);
                        }
                        acc[col] += v;
                    };
                    for (blocks, is_mass) in [(&self.blocks.mf, true), (&self.blocks.kf, false)] {
                        for blk in blocks.iter().filter(|b| b.row == row_field) {
                            let co = self.blocks.offset(blk.col);
                            let (cols, vals) = blk.mat.row(i);
                            for mp in 0..nt {
                                let w = if is_mass {
                                    self.w1[m][mp]
                                } else if mp == m {
                                    self.w0[m]
                                } else {
                                    0.0
                                };
                                if w == 0.0 {
                                    continue;
                                }
                                for (&j, &v) in cols.iter().zip(vals) {
                                    add(mp * nb + co + j, w * blk.scale * v);
                                }
                            }
                        }
                    }
                    touched.sort_unstable();
                    for &col in &touched {
                        indices.push(col);
                        data.push(acc[col]);
                        acc[col] = 0.0;
                        mark[col] = false;
                    }
                    touched.clear();
                    indptr.push(indices.len());
                }
            }
        }
        Csr { nrows: n, ncols: n, indptr, indices, data }
    }
}
