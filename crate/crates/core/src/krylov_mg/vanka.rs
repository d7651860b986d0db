//! Patchwise Vanka smoother with averaging of the local updates.
//!
//! A patch collects all cells around one mesh vertex. Its unknowns are all
//! velocity, displacement and pressure degrees of freedom of these cells at
//! every Radau point of the slab. The patch matrix is the principal
//! submatrix of the slab matrix on these unknowns.

use crate::assembly::{SlabOperator, SpatialBlocks};
use crate::error::{Error, Result};
use crate::femcore::MixedSpace;
use crate::meshkit::MeshLevel;
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{c64, Mat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How patch systems are factored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PatchSolver {
    /// LU of the full real patch matrix
    Dense,
    /// diagonalize the temporal coupling and factor one complex spatial
    /// system per eigenvalue (conjugate pairs share a factorization)
    #[default]
    TimeDiagonal,
}

impl std::str::FromStr for PatchSolver {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dense" => Ok(PatchSolver::Dense),
            "time-diagonal" => Ok(PatchSolver::TimeDiagonal),
            other => Err(format!("unknown patch solver '{other}' (expected dense or time-diagonal)")),
        }
    }
}

/// Which cells form a patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PatchKind {
    /// all cells sharing a vertex
    #[default]
    Vertex,
    /// a single cell
    Cell,
}

impl std::str::FromStr for PatchKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vertex" => Ok(PatchKind::Vertex),
            "cell" => Ok(PatchKind::Cell),
            other => Err(format!("unknown patch kind '{other}' (expected vertex or cell)")),
        }
    }
}

/// Sorted spatial unknowns (indices into one `[V, U, P]` block) of each patch.
pub fn patch_dofs(mesh: &MeshLevel, space: &MixedSpace, kind: PatchKind) -> Vec<Vec<usize>> {
    let cell_sets: Vec<Vec<usize>> = match kind {
        PatchKind::Vertex => mesh.vertex_patches(),
        PatchKind::Cell => (0..mesh.n_cells()).map(|c| vec![c]).collect(),
    };
    let n_v = space.v.n_dofs();
    cell_sets
        .iter()
        .map(|cells| {
            let mut dofs = Vec::new();
            for &c in cells {
                for d in space.v.cell_dofs(c) {
                    dofs.push(d);
                    dofs.push(n_v + d);
                }
                dofs.extend(space.q.cell_dofs(c).iter().map(|&d| 2 * n_v + d));
            }
            dofs.sort_unstable();
            dofs.dedup();
            dofs
        })
        .collect()
}

/// Dense submatrix of a sum of field blocks on the given sorted unknowns.
pub fn extract_blocks(blocks: &SpatialBlocks, which: &[crate::assembly::slab::FieldBlock], dofs: &[usize]) -> Mat<f64> {
    let n = dofs.len();
    let mut out = Mat::<f64>::zeros(n, n);
    for blk in which {
        let ro = blocks.offset(blk.row);
        let co = blocks.offset(blk.col);
        let (rlen, clen) = (blocks.field_len(blk.row), blocks.field_len(blk.col));
        for (li, &g) in dofs.iter().enumerate() {
            if g < ro || g >= ro + rlen {
                continue;
            }
            let (cols, vals) = blk.mat.row(g - ro);
            for (&j, &v) in cols.iter().zip(vals) {
                let gc = co + j;
                if gc >= co + clen {
                    continue;
                }
                if let Ok(lj) = dofs.binary_search(&gc) {
                    out[(li, lj)] += blk.scale * v;
                }
            }
        }
    }
    out
}

/// Eigen-decomposition G = W0^{-1} W1 = V diag(lambda) V^{-1} of the
/// temporal coupling, with conjugate eigenpairs stored as conjugate
/// columns of V.
#[derive(Debug, Clone)]
pub struct TimeDiagonalization {
    pub lambda: Vec<c64>,
    pub v: Mat<c64>,
    /// V^{-1} W0^{-1}
    pub vinv_w0inv: Mat<c64>,
    /// for each eigenvalue, the index whose factorization it uses and
    /// whether the solution must be conjugated
    pub source: Vec<(usize, bool)>,
}

impl TimeDiagonalization {
    pub fn new(w1: &[Vec<f64>], w0: &[f64]) -> Result<Self> {
        let n = w0.len();
        let g = Mat::<f64>::from_fn(n, n, |i, j| w1[i][j] / w0[i]);
        let eig = g.eigen().map_err(|e| Error::Factorization(format!("temporal eigen-decomposition: {e:?}")))?;
        let s = eig.S();
        let u = eig.U();
        let mut lambda = vec![c64::new(0.0, 0.0); n];
        let mut v = Mat::<c64>::zeros(n, n);
        let mut source = vec![(0, false); n];
        let mut used = vec![false; n];
        let scale = (0..n).map(|i| s[i].norm()).fold(0.0, f64::max).max(1.0);
        let mut col = 0;
        for i in 0..n {
            if used[i] {
                continue;
            }
            used[i] = true;
            let li = s[i];
            if li.im.abs() <= 1e-12 * scale {
                lambda[col] = c64::new(li.re, 0.0);
                for r in 0..n {
                    v[(r, col)] = c64::new(u[(r, i)].re, 0.0);
                }
                // a real eigenvector of a real eigenvalue may come out with a
                // complex phase; take the component with larger norm
                let re: f64 = (0..n).map(|r| u[(r, i)].re.powi(2)).sum();
                let im: f64 = (0..n).map(|r| u[(r, i)].im.powi(2)).sum();
                if im > re {
                    for r in 0..n {
                        v[(r, col)] = c64::new(u[(r, i)].im, 0.0);
                    }
                }
                source[col] = (col, false);
                col += 1;
            } else {
                // pair with the conjugate eigenvalue
                let partner = (0..n)
                    .filter(|&j| !used[j])
                    .min_by(|&a, &b| (s[a] - li.conj()).norm().total_cmp(&(s[b] - li.conj()).norm()))
                    .ok_or_else(|| Error::Factorization("unpaired complex eigenvalue".into()))?;
                used[partner] = true;
                let (l, base) = if li.im > 0.0 { (li, i) } else { (s[partner], partner) };
                lambda[col] = l;
                lambda[col + 1] = l.conj();
                for r in 0..n {
                    v[(r, col)] = u[(r, base)];
                    v[(r, col + 1)] = u[(r, base)].conj();
                }
                source[col] = (col, false);
                source[col + 1] = (col, true);
                col += 2;
            }
        }
        let lu = v.partial_piv_lu();
        let mut w0inv = Mat::<c64>::zeros(n, n);
        for i in 0..n {
            w0inv[(i, i)] = c64::new(1.0 / w0[i], 0.0);
        }
        let vinv_w0inv = lu.solve(&w0inv);
        Ok(Self { lambda, v, vinv_w0inv, source })
    }

    /// Number of distinct complex systems per patch.
    pub fn n_systems(&self) -> usize {
        self.source.iter().filter(|(_, c)| !c).count()
    }
}

enum PatchFactor {
    Dense(PartialPivLu<f64>),
    /// factorizations for eigenvalues with `source.1 == false`, indexed by eigenvalue
    TimeDiagonal(Vec<Option<PartialPivLu<c64>>>),
}

struct Patch {
    dofs: Vec<usize>,
    factor: PatchFactor,
}

/// Vanka smoother on one level for one slab operator.
pub struct VankaSmoother {
    patches: Vec<Patch>,
    inv_counts: Vec<f64>,
    nb: usize,
    nt: usize,
    pub omega: f64,
    pub sweeps: usize,
    diag: Option<TimeDiagonalization>,
}

impl std::fmt::Debug for VankaSmoother {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VankaSmoother")
            .field("patches", &self.patches.len())
            .field("omega", &self.omega)
            .field("sweeps", &self.sweeps)
            .finish()
    }
}

impl VankaSmoother {
    pub fn new(
        op: &SlabOperator,
        patch_dofs: Vec<Vec<usize>>,
        omega: f64,
        sweeps: usize,
        solver: PatchSolver,
    ) -> Result<Self> {
        let nb = op.block_size();
        let nt = op.n_time();
        let diag = match solver {
            PatchSolver::TimeDiagonal => Some(TimeDiagonalization::new(&op.w1, &op.w0)?),
            PatchSolver::Dense => None,
        };
        let patches: Vec<Result<Patch>> = patch_dofs
            .into_par_iter()
            .map(|dofs| {
                let mf = extract_blocks(&op.blocks, &op.blocks.mf, &dofs);
                let kf = extract_blocks(&op.blocks, &op.blocks.kf, &dofs);
                let factor = match &diag {
                    None => PatchFactor::Dense(dense_patch_matrix(op, &mf, &kf).partial_piv_lu()),
                    Some(td) => {
                        let ns = dofs.len();
                        let mut lus = Vec::with_capacity(nt);
                        for (i, &(_, conj)) in td.source.iter().enumerate() {
                            if conj {
                                lus.push(None);
                                continue;
                            }
                            let l = td.lambda[i];
                            let a = Mat::<c64>::from_fn(ns, ns, |r, c| {
                                c64::new(l.re * mf[(r, c)] + kf[(r, c)], l.im * mf[(r, c)])
                            });
                            lus.push(Some(a.partial_piv_lu()));
                        }
                        PatchFactor::TimeDiagonal(lus)
                    }
                };
                Ok(Patch { dofs, factor })
            })
            .collect();
        let patches: Vec<Patch> = patches.into_iter().collect::<Result<_>>()?;
        let mut counts = vec![0usize; nb];
        for p in &patches {
            for &d in &p.dofs {
                counts[d] += 1;
            }
        }
        if let Some(d) = counts.iter().position(|&c| c == 0) {
            return Err(Error::Config(format!("unknown {d} is not covered by any patch")));
        }
        // counts are identical at every Radau point
        let inv_counts = counts.iter().map(|&c| 1.0 / c as f64).collect();
        Ok(Self { patches, inv_counts, nb, nt, omega, sweeps, diag })
    }

    pub fn n_patches(&self) -> usize {
        self.patches.len()
    }

    /// Unknowns per patch per Radau point.
    pub fn patch_sizes(&self) -> Vec<usize> {
        self.patches.iter().map(|p| p.dofs.len()).collect()
    }

    /// Number of patches containing each unknown of one Radau block.
    pub fn counts(&self) -> Vec<usize> {
        self.inv_counts.iter().map(|c| (1.0 / c).round() as usize).collect()
    }

    /// Solve A_P y = r for patch `pi`; r and y use time-major local ordering.
    fn patch_solve(&self, pi: usize, r: &[f64]) -> Vec<f64> {
        let p = &self.patches[pi];
        let ns = p.dofs.len();
        let nt = self.nt;
        match &p.factor {
            PatchFactor::Dense(lu) => {
                let rhs = Mat::<f64>::from_fn(nt * ns, 1, |i, _| r[i]);
                let y = lu.solve(&rhs);
                (0..nt * ns).map(|i| y[(i, 0)]).collect()
            }
            PatchFactor::TimeDiagonal(lus) => {
                let td = self.diag.as_ref().expect("time diagonalization present");
                let mut y = vec![0.0; nt * ns];
                let mut z: Vec<Option<Mat<c64>>> = vec![None; nt];
                for (i, lu) in lus.iter().enumerate() {
                    let Some(lu) = lu else { continue };
                    // s_i = sum_m (V^{-1} W0^{-1})_{im} r_m
                    let s = Mat::<c64>::from_fn(ns, 1, |row, _| {
                        let mut acc = c64::new(0.0, 0.0);
                        for m in 0..nt {
                            acc += td.vinv_w0inv[(i, m)] * r[m * ns + row];
                        }
                        acc
                    });
                    z[i] = Some(lu.solve(&s));
                }
                for m in 0..nt {
                    for (i, &(src, conj)) in td.source.iter().enumerate() {
                        let zi = z[src].as_ref().expect("source system solved");
                        let vmi = td.v[(m, i)];
                        for row in 0..ns {
                            let zv = if conj { zi[(row, 0)].conj() } else { zi[(row, 0)] };
                            y[m * ns + row] += (vmi * zv).re;
                        }
                    }
                }
                y
            }
        }
    }

    /// Smoothing sweeps of A d = b starting from the given `d`.
    pub fn smooth(&self, op: &SlabOperator, b: &[f64], d: &mut [f64]) {
        let nb = self.nb;
        let nt = self.nt;
        let n = d.len();
        let mut r = vec![0.0; n];
        for _ in 0..self.sweeps {
            op.apply(d, &mut r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri = bi - *ri;
            }
            let dref = &*d;
            let rref = &r;
            let updates: Vec<Vec<f64>> = (0..self.patches.len())
                .into_par_iter()
                .map(|pi| {
                    let dofs = &self.patches[pi].dofs;
                    let ns = dofs.len();
                    let mut rp = vec![0.0; nt * ns];
                    for m in 0..nt {
                        for (li, &g) in dofs.iter().enumerate() {
                            rp[m * ns + li] = rref[m * nb + g];
                        }
                    }
                    let mut y = self.patch_solve(pi, &rp);
                    for m in 0..nt {
                        for (li, &g) in dofs.iter().enumerate() {
                            y[m * ns + li] = dref[m * nb + g] + self.omega * y[m * ns + li];
                        }
                    }
                    y
                })
                .collect();
            let mut z = vec![0.0; n];
            for (p, y) in self.patches.iter().zip(&updates) {
                let ns = p.dofs.len();
                for m in 0..nt {
                    for (li, &g) in p.dofs.iter().enumerate() {
                        z[m * nb + g] += y[m * ns + li];
                    }
                }
            }
            for m in 0..nt {
                for i in 0..nb {
                    d[m * nb + i] = z[m * nb + i] * self.inv_counts[i];
                }
            }
        }
    }
}

/// Real patch matrix W1 (x) Mf + W0 (x) Kf in time-major local ordering.
pub fn dense_patch_matrix(op: &SlabOperator, mf: &Mat<f64>, kf: &Mat<f64>) -> Mat<f64> {
    let ns = mf.nrows();
    let nt = op.n_time();
    Mat::<f64>::from_fn(nt * ns, nt * ns, |i, j| {
        let (m, r) = (i / ns, i % ns);
        let (mp, c) = (j / ns, j % ns);
        let mut v = op.w1[m][mp] * mf[(r, c)];
        if m == mp {
            v += op.w0[m] * kf[(r, c)];
        }
        v
    })
}
