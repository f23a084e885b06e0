use nalgebra::DMatrix;

use crate::sparse::SparseSymMatrix;

/// A symmetric linear operator on Rⁿ.
pub trait LinearOperator: Sync {
    fn order(&self) -> usize;

    /// y = Op x
    fn apply_to(&self, x: &[f64], y: &mut [f64]);

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.order()];
        self.apply_to(x, &mut y);
        y
    }

    /// Estimate of the spectral norm (power iteration unless overridden).
    fn norm_estimate(&self) -> f64 {
        let n = self.order();
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0).collect();
        let mut est = 0.0;
        for _ in 0..30 {
            let nx = norm(&x);
            if nx == 0.0 {
                return 0.0;
            }
            x.iter_mut().for_each(|v| *v /= nx);
            let y = self.apply(&x);
            est = norm(&y);
            x = y;
        }
        est
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply_to(&e, &mut col);
            e[j] = 0.0;
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        0.5 * (&m + m.transpose())
    }
}

impl LinearOperator for SparseSymMatrix {
    fn order(&self) -> usize {
        SparseSymMatrix::order(self)
    }

    fn apply_to(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y);
    }

    fn norm_estimate(&self) -> f64 {
        self.norm_inf()
    }

    fn to_dense(&self) -> DMatrix<f64> {
        SparseSymMatrix::to_dense(self)
    }
}

/// A single known null vector z shared by both sides of a pencil, removed by
/// W-orthogonal projection v ↦ v − z (zᵀWv)/(zᵀWz).
#[derive(Debug, Clone)]
pub struct Deflation {
    vector: Vec<f64>,
    weighted: Vec<f64>,
    weight_norm_sq: f64,
}

impl Deflation {
    pub fn new(vector: Vec<f64>, weight: &SparseSymMatrix) -> Self {
        let weighted = weight.apply(&vector);
        let weight_norm_sq = dot(&vector, &weighted);
        Self {
            vector,
            weighted,
            weight_norm_sq,
        }
    }

    /// Constants, projected out in the inner product of `weight`.
    pub fn constants(weight: &SparseSymMatrix) -> Self {
        Self::new(vec![1.0; weight.order()], weight)
    }

    pub fn vector(&self) -> &[f64] {
        &self.vector
    }

    pub fn project(&self, v: &mut [f64]) {
        let c = dot(&self.weighted, v) / self.weight_norm_sq;
        v.iter_mut().zip(&self.vector).for_each(|(x, z)| *x -= c * z);
    }

    /// Index of the largest |zᵢ|, used to pin singular factorizations.
    pub(crate) fn pivot_index(&self) -> usize {
        let mut best = 0;
        for (i, z) in self.vector.iter().enumerate() {
            if z.abs() > self.vector[best].abs() {
                best = i;
            }
        }
        best
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
