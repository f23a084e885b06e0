//! Restarted block Krylov iteration for the smallest eigenpairs of a
//! symmetric pencil (A, B).
//!
//! Each cycle builds a B-orthonormal basis of span{X, OX, O²X, …} with
//! O = (A − σB)⁻¹B, does a Rayleigh–Ritz projection with A and restarts from
//! the lowest Ritz vectors. Full reorthogonalization (two classical
//! Gram–Schmidt passes) is done against the whole basis and the deflation
//! vector. The block is wider than the wanted count, so multiplicity
//! clusters up to that width are resolved.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

use super::linop::{dot, norm, LinearOperator};
use super::Pencil;

pub const MAX_RESTARTS: usize = 500;
/// Restarts without a 1% improvement of the worst residual before giving up.
pub const STAGNATION_RESTARTS: usize = 25;

/// Converged pairs: (value, B-normalized vector, residual).
pub(crate) type Pairs = Vec<(f64, Vec<f64>, f64)>;

pub(crate) struct KrylovSettings {
    pub count: usize,
    pub tol: f64,
}

/// Deterministic start vectors (xorshift stream with a fixed seed).
fn start_block(n: usize, width: usize) -> Vec<Vec<f64>> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    (0..width).map(|_| (0..n).map(|_| next()).collect()).collect()
}

struct Basis {
    v: Vec<Vec<f64>>,
    bv: Vec<Vec<f64>>,
}

impl Basis {
    /// B-orthogonalizes `w` against the basis and appends it if it is not
    /// (numerically) dependent.
    fn push(&mut self, mut w: Vec<f64>, pencil: &Pencil<'_>) -> bool {
        if let Some(d) = pencil.deflation {
            d.project(&mut w);
        }
        let mut bw = pencil.b.apply(&w);
        let before = dot(&w, &bw).max(0.0).sqrt();
        if before == 0.0 || !before.is_finite() {
            return false;
        }
        for _ in 0..2 {
            let coeffs: Vec<f64> = self.bv.iter().map(|bv| dot(bv, &w)).collect();
            for (c, v) in coeffs.iter().zip(&self.v) {
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
            if let Some(d) = pencil.deflation {
                d.project(&mut w);
            }
        }
        pencil.b.apply_to(&w, &mut bw);
        let after = dot(&w, &bw).max(0.0).sqrt();
        if after <= 1e-10 * before {
            return false;
        }
        w.iter_mut().for_each(|x| *x /= after);
        bw.iter_mut().for_each(|x| *x /= after);
        self.v.push(w);
        self.bv.push(bw);
        true
    }
}

fn combine(cols: &[Vec<f64>], coeffs: &DMatrix<f64>, k: usize) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (j, c) in cols.iter().enumerate() {
        let s = coeffs[(j, k)];
        if s != 0.0 {
            out.iter_mut().zip(c).for_each(|(o, x)| *o += s * x);
        }
    }
    out
}

pub(crate) fn backward_error(r: &[f64], value: f64, v: &[f64], a_norm: f64, b_norm: f64) -> f64 {
    let denom = (a_norm + value.abs() * b_norm) * norm(v);
    if denom == 0.0 {
        return if norm(r) == 0.0 { 0.0 } else { f64::INFINITY };
    }
    norm(r) / denom
}

/// Smallest `count` eigenpairs of the pencil; `inverse` applies (A − σB)⁻¹
/// to vectors in the range of B (on the deflated complement when present).
pub(crate) fn block_krylov(
    pencil: &Pencil<'_>,
    inverse: &dyn LinearOperator,
    settings: &KrylovSettings,
) -> Result<Pairs> {
    let n = pencil.a.order();
    let available = n - usize::from(pencil.deflation.is_some());
    let count = settings.count;
    if count > available {
        return Err(Error::CountExceedsOrder {
            count,
            order: available,
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let width = (count + (count / 2).max(8)).min(available);
    let blocks = if width * 5 >= available { available.div_ceil(width).max(1) } else { 5 };
    let a_norm = pencil.a.norm_estimate();
    let b_norm = pencil.b.norm_estimate();

    let mut x: Vec<Vec<f64>> = start_block(n, width);
    let mut worst = f64::INFINITY;
    let mut best = f64::INFINITY;
    let mut since_best = 0;
    let mut residuals = Vec::new();
    let mut restarts = 0;
    while restarts < MAX_RESTARTS && since_best < STAGNATION_RESTARTS {
        restarts += 1;
        let mut basis = Basis {
            v: Vec::new(),
            bv: Vec::new(),
        };
        for w in x.drain(..) {
            basis.push(w, pencil);
        }
        let mut block_start = 0;
        for _ in 1..blocks {
            let block_end = basis.v.len();
            if block_end >= available {
                break;
            }
            let mut added = 0;
            for j in block_start..block_end {
                let bx = &basis.bv[j];
                let w = inverse.apply(bx);
                if basis.push(w, pencil) {
                    added += 1;
                }
                if basis.v.len() >= available {
                    break;
                }
            }
            block_start = block_end;
            if added == 0 {
                break;
            }
        }
        let m = basis.v.len();
        if m < count {
            return Err(Error::Mismatch(format!(
                "Krylov basis collapsed to dimension {m} below the wanted count {count}"
            )));
        }
        let av: Vec<Vec<f64>> = basis.v.iter().map(|v| pencil.a.apply(v)).collect();
        let mut h = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let s = dot(&basis.v[i], &av[j]);
                h[(i, j)] = s;
                h[(j, i)] = s;
            }
        }
        let eig = SymmetricEigen::new(h);
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut s = DMatrix::zeros(m, idx.len());
        for (c, &k) in idx.iter().enumerate() {
            s.set_column(c, &eig.eigenvectors.column(k));
        }

        residuals.clear();
        let mut pairs = Vec::with_capacity(count);
        for k in 0..count {
            let value = eig.eigenvalues[idx[k]];
            let y = combine(&basis.v, &s, k);
            let ay = combine(&av, &s, k);
            let by = combine(&basis.bv, &s, k);
            let r: Vec<f64> = ay.iter().zip(&by).map(|(a, b)| a - value * b).collect();
            let res = backward_error(&r, value, &y, a_norm, b_norm);
            residuals.push(res);
            pairs.push((value, y, res));
        }
        worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= settings.tol {
            return Ok(pairs);
        }
        if worst < 0.99 * best {
            best = worst;
            since_best = 0;
        } else {
            since_best += 1;
        }
        let keep = width.min(m);
        x = (0..keep).map(|k| combine(&basis.v, &s, k)).collect();
    }
    Err(Error::NoConvergence {
        restarts,
        worst_residual: worst,
        residuals,
    })
}
