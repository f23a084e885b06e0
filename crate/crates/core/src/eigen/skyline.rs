//! Envelope (skyline) Cholesky factorization with reverse Cuthill–McKee
//! ordering, for the shift-invert solves of the iterative eigensolver.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

use super::linop::{Deflation, LinearOperator};

/// Reverse Cuthill–McKee permutation: `perm[new] = old`.
pub fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let degree: Vec<usize> = adjacency.iter().map(|a| a.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize| -> (Vec<usize>, usize) {
        let mut level = vec![usize::MAX; n];
        let mut queue = VecDeque::from([start]);
        level[start] = 0;
        let mut last = vec![start];
        let mut depth = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    if level[w] > depth {
                        depth = level[w];
                        last.clear();
                    }
                    if level[w] == depth {
                        last.push(w);
                    }
                    queue.push_back(w);
                }
            }
        }
        (last, depth)
    };

    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // Pseudo-peripheral start node.
        let mut start = seed;
        let (mut last, mut depth) = bfs_levels(start);
        for _ in 0..8 {
            let candidate = *last.iter().min_by_key(|&&v| (degree[v], v)).unwrap();
            let (next_last, next_depth) = bfs_levels(candidate);
            if next_depth <= depth {
                break;
            }
            start = candidate;
            last = next_last;
            depth = next_depth;
        }
        let begin = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut next: Vec<usize> = adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_unstable_by_key(|&w| (degree[w], w));
            for w in next {
                if !visited[w] {
                    visited[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order.reverse();
    order
}

#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    perm: Vec<usize>,
    inv: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
    pinned: Option<usize>,
}

impl SkylineCholesky {
    /// Factors A = LLᵀ. With `pin = Some(p)`, row and column p are replaced by
    /// the identity, which makes a singular A with a one-dimensional kernel
    /// not orthogonal to e_p factorable.
    pub fn factor(a: &SparseSymMatrix, pin: Option<usize>) -> Result<Self> {
        let n = a.order();
        let rows = a.full_rows();
        let adjacency: Vec<Vec<usize>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().map(|e| e.0).filter(|&j| j != i).collect())
            .collect();
        let perm = reverse_cuthill_mckee(&adjacency);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let pinned = pin.map(|p| inv[p]);

        let mut first: Vec<usize> = (0..n).collect();
        for (old_i, row) in rows.iter().enumerate() {
            let i = inv[old_i];
            if Some(i) == pinned {
                continue;
            }
            for &(old_j, v) in row {
                let j = inv[old_j];
                if j < i && v != 0.0 && Some(j) != pinned {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for (old_i, row) in rows.iter().enumerate() {
            let i = inv[old_i];
            if Some(i) == pinned {
                data[start[i] + (i - first[i])] = 1.0;
                continue;
            }
            for &(old_j, v) in row {
                let j = inv[old_j];
                if j <= i && Some(j) != pinned && j >= first[i] {
                    data[start[i] + (j - first[i])] += v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let row_i = start[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let s = {
                    let li = &data[row_i + (lo - fi)..row_i + (j - fi)];
                    let lj = &data[start[j] + (lo - fj)..start[j] + (j - fj)];
                    li.iter().zip(lj).map(|(x, y)| x * y).sum::<f64>()
                };
                let diag_j = data[start[j] + (j - fj)];
                data[row_i + (j - fi)] = (data[row_i + (j - fi)] - s) / diag_j;
            }
            let row = &data[row_i..row_i + (i - fi)];
            let d = data[row_i + (i - fi)] - row.iter().map(|x| x * x).sum::<f64>();
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    pivot: perm[i],
                    value: d,
                });
            }
            data[row_i + (i - fi)] = d.sqrt();
        }
        Ok(Self {
            perm,
            inv,
            first,
            start,
            data,
            pinned,
        })
    }

    pub fn order(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order();
        let mut y: Vec<f64> = (0..n).map(|i| b[self.perm[i]]).collect();
        if let Some(p) = self.pinned {
            y[p] = 0.0;
        }
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let s: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (k, l) in (fi..i).zip(&row[..i - fi]) {
                y[k] -= l * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (old, &new) in self.inv.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

/// (A − σB)⁻¹ on the complement of an optional deflation vector.
pub(crate) struct ShiftInvert<'a> {
    pub factor: SkylineCholesky,
    pub deflation: Option<&'a Deflation>,
}

impl LinearOperator for ShiftInvert<'_> {
    fn order(&self) -> usize {
        self.factor.order()
    }

    fn apply_to(&self, x: &[f64], y: &mut [f64]) {
        let sol = self.factor.solve(x);
        y.copy_from_slice(&sol);
        if let Some(d) = self.deflation {
            d.project(y);
        }
    }
}
