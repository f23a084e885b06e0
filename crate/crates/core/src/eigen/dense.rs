//! Dense reference solver: Cholesky reduction of the pencil to a standard
//! symmetric eigenproblem, solved with nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

use super::linop::{norm, Deflation};
use super::Pencil;

pub const DENSE_CAP: usize = 3000;

/// Householder reflector H = I − 2uuᵀ with H z ∥ e₁.
fn householder_for(z: &[f64]) -> DVector<f64> {
    let nz = norm(z);
    let mut u = DVector::from_column_slice(z);
    let alpha = if z[0] >= 0.0 { -nz } else { nz };
    u[0] -= alpha;
    let nu = u.norm();
    u / nu
}

/// H A H with H = I − 2uuᵀ.
fn reflect_both_sides(a: &DMatrix<f64>, u: &DVector<f64>) -> DMatrix<f64> {
    let au = a * u;
    let uau = u.dot(&au);
    let mut out = a.clone();
    out -= 2.0 * &au * u.transpose();
    out -= 2.0 * u * au.transpose();
    out += 4.0 * uau * u * u.transpose();
    out
}

/// All eigenpairs of the pencil in ascending order, truncated to `count`.
/// Vectors are B-orthonormal; with a deflation they are projected off z.
pub(crate) fn solve_dense(pencil: &Pencil<'_>, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = pencil.a.order();
    if n > DENSE_CAP {
        return Err(Error::OrderOverCap {
            order: n,
            cap: DENSE_CAP,
            mode: "dense",
        });
    }
    let a = pencil.a.to_dense();
    let b = pencil.b.to_dense();
    let (a_red, b_red, reflector) = match pencil.deflation {
        Some(d) => {
            let u = householder_for(d.vector());
            let ha = reflect_both_sides(&a, &u);
            let hb = reflect_both_sides(&b, &u);
            (
                ha.view((1, 1), (n - 1, n - 1)).into_owned(),
                hb.view((1, 1), (n - 1, n - 1)).into_owned(),
                Some(u),
            )
        }
        None => (a, b, None),
    };
    let m = a_red.nrows();
    if count > m {
        return Err(Error::CountExceedsOrder { count, order: m });
    }
    let chol = nalgebra::Cholesky::new(b_red).ok_or(Error::NotPositiveDefinite {
        pivot: 0,
        value: f64::NAN,
    })?;
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ
    let y = l
        .solve_lower_triangular(&a_red)
        .ok_or_else(|| Error::Mismatch("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Mismatch("singular Cholesky factor".into()))?;
    let c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();
    let mut out = Vec::with_capacity(count);
    for &k in idx.iter().take(count) {
        let w = eig.eigenvectors.column(k).into_owned();
        let x = lt
            .solve_upper_triangular(&w)
            .ok_or_else(|| Error::Mismatch("singular Cholesky factor".into()))?;
        let v = match (&reflector, pencil.deflation) {
            (Some(u), Some(d)) => {
                let mut full = DVector::zeros(n);
                full.rows_mut(1, n - 1).copy_from(&x);
                let proj = u.dot(&full);
                full -= 2.0 * proj * u;
                let mut v: Vec<f64> = full.iter().copied().collect();
                project_and_renormalize(&mut v, d, pencil);
                v
            }
            _ => x.iter().copied().collect(),
        };
        out.push((eig.eigenvalues[k], v));
    }
    Ok(out)
}

fn project_and_renormalize(v: &mut [f64], d: &Deflation, pencil: &Pencil<'_>) {
    d.project(v);
    let bv = pencil.b.apply(v);
    let nb = super::linop::dot(v, &bv).sqrt();
    if nb > 0.0 {
        v.iter_mut().for_each(|x| *x /= nb);
    }
}
