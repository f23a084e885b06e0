//! Symmetric sparse matrices stored as their lower triangle in CSR form.

use std::fmt::Write as _;

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    order: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds from (row, col, value) triplets; either triangle may be given,
    /// duplicates are summed.
    pub fn from_triplets(order: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = triplets
            .into_iter()
            .map(|(i, j, v)| (i.max(j), i.min(j), v))
            .collect();
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; order + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            assert!(i < order, "triplet index {i} out of range for order {order}");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_ptr[i + 1] += 1;
                col_idx.push(j);
                values.push(v);
                last = Some((i, j));
            }
        }
        for i in 0..order {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            order,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &d)| (i, i, d)))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored (lower-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row `i`: columns `j ≤ i` with values.
    pub fn lower_row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn lower_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.order).flat_map(move |i| self.lower_row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.max(j), i.min(j));
        self.lower_row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.lower_entries().all(|(i, j, v)| i == j || v == 0.0)
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.order {
            let mut acc = 0.0;
            for (j, v) in self.lower_row(i) {
                acc += v * x[j];
                if j != i {
                    y[j] += v * x[i];
                }
            }
            y[i] += acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.order];
        self.mul_vec(x, &mut y);
        y
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.apply(&vec![1.0; self.order])
    }

    pub fn total_sum(&self) -> f64 {
        self.row_sums().iter().sum()
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.order];
        for (i, j, v) in self.lower_entries() {
            sums[i] += v.abs();
            if i != j {
                sums[j] += v.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Full (both triangles) adjacency lists, columns ascending.
    pub fn full_rows(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.order];
        for (i, j, v) in self.lower_entries() {
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        for r in &mut rows {
            r.sort_unstable_by_key(|e| e.0);
        }
        rows
    }

    /// self + alpha·other
    pub fn add_scaled(&self, alpha: f64, other: &SparseSymMatrix) -> SparseSymMatrix {
        assert_eq!(self.order, other.order);
        let triplets = self
            .lower_entries()
            .chain(other.lower_entries().map(|(i, j, v)| (i, j, alpha * v)));
        Self::from_triplets(self.order, triplets)
    }

    /// A D⁻¹ A for a positive diagonal D given by its entries.
    pub fn triple_product_diag_inv(&self, diag: &[f64]) -> SparseSymMatrix {
        assert_eq!(diag.len(), self.order);
        let rows = self.full_rows();
        let mut triplets = Vec::new();
        let mut acc = vec![0.0; self.order];
        let mut seen = vec![false; self.order];
        let mut touched = Vec::new();
        for i in 0..self.order {
            for &(k, a_ik) in &rows[i] {
                let w = a_ik / diag[k];
                for &(j, a_kj) in &rows[k] {
                    if j > i {
                        break;
                    }
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] += w * a_kj;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                triplets.push((i, j, acc[j]));
                acc[j] = 0.0;
                seen[j] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.order, triplets)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.order, self.order);
        for (i, j, v) in self.lower_entries() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    /// Matrix Market coordinate text: 1-based indices, lower triangle.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
        writeln!(out, "{} {} {}", self.order, self.order, self.nnz()).unwrap();
        for (i, j, v) in self.lower_entries() {
            writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triplets_sum_duplicates_and_fold_upper_triangle() {
        let a = SparseSymMatrix::from_triplets(3, [(0, 1, 1.0), (1, 0, 2.0), (2, 2, 5.0), (1, 1, 1.0)]);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(1, 0), 3.0);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.apply(&[1.0, 1.0, 1.0]), vec![3.0, 4.0, 5.0]);
        assert_eq!(a.norm_inf(), 5.0);
    }

    #[test]
    fn matrix_market_is_one_based() {
        let a = SparseSymMatrix::from_triplets(2, [(0, 0, 2.0), (1, 0, -1.0), (1, 1, 2.0)]);
        let text = a.to_matrix_market();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "2 2 3");
        assert!(lines[2].starts_with("1 1 "));
        assert!(lines[3].starts_with("2 1 "));
    }

    proptest! {
        #[test]
        fn triple_product_matches_dense(vals in proptest::collection::vec(-2.0f64..2.0, 15),
                                        diag in proptest::collection::vec(0.5f64..3.0, 5)) {
            let mut trip = Vec::new();
            let mut k = 0;
            for i in 0..5 {
                for j in 0..=i {
                    trip.push((i, j, vals[k]));
                    k += 1;
                }
            }
            let a = SparseSymMatrix::from_triplets(5, trip);
            let d = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag.iter().map(|x| 1.0 / x).collect()));
            let dense = a.to_dense() * d * a.to_dense();
            let sparse = a.triple_product_diag_inv(&diag).to_dense();
            prop_assert!((dense - sparse).abs().max() < 1e-12);
        }
    }
}
