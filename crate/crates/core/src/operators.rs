//! P1 finite-element Laplace–Beltrami operator on an embedded simplicial mesh.
//!
//! The discrete operator is the pencil (K, M): K is the stiffness matrix of
//! the Dirichlet energy ∫|∇u|², M the mass matrix of the L² product. Δₕ = M⁻¹K
//! is positive semidefinite, matching the positive sign convention
//! Δ = −div grad. Simplices are flat in the ambient space, so all geometry
//! comes from ambient chord lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{sub, SimplicialMesh};
use crate::sparse::SparseSymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MassMode {
    Consistent,
    Lumped,
}

/// Stiffness and mass matrices over one mesh.
#[derive(Debug, Clone)]
pub struct OperatorPair<'a> {
    pub mesh: &'a SimplicialMesh,
    pub stiffness: SparseSymMatrix,
    pub mass: SparseSymMatrix,
    pub mass_mode: MassMode,
}

impl<'a> OperatorPair<'a> {
    pub fn new(mesh: &'a SimplicialMesh, mass_mode: MassMode) -> Result<Self> {
        Ok(Self {
            mesh,
            stiffness: assemble_stiffness(mesh)?,
            mass: assemble_mass(mesh, mass_mode),
            mass_mode,
        })
    }

    pub fn order(&self) -> usize {
        self.stiffness.order()
    }

    /// Diagonal of the lumped mass matrix (row sums of M).
    pub fn lumped_mass(&self) -> Vec<f64> {
        self.mass.row_sums()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Stiffness matrix: cotangent weights on triangles, 1/ℓ on segments.
pub fn assemble_stiffness(mesh: &SimplicialMesh) -> Result<SparseSymMatrix> {
    if mesh.dim != 1 && mesh.dim != 2 {
        return Err(Error::UnsupportedDimension(mesh.dim));
    }
    mesh.check_nondegenerate()?;
    let mut triplets = Vec::with_capacity(mesh.simplices.len() * 9);
    for s in &mesh.simplices {
        match s.len() {
            2 => {
                let w = 1.0 / mesh.simplex_measure(s);
                let (i, j) = (s[0], s[1]);
                triplets.extend([(i, i, w), (j, j, w), (i, j, -w)]);
            }
            _ => {
                for corner in 0..3 {
                    let i = s[corner];
                    let j = s[(corner + 1) % 3];
                    let k = s[(corner + 2) % 3];
                    let u = sub(mesh.vertex(j), mesh.vertex(i));
                    let v = sub(mesh.vertex(k), mesh.vertex(i));
                    let uv = dot(&u, &v);
                    let cross = (dot(&u, &u) * dot(&v, &v) - uv * uv).sqrt();
                    let half_cot = 0.5 * uv / cross;
                    triplets.extend([(j, j, half_cot), (k, k, half_cot), (j, k, -half_cot)]);
                }
            }
        }
    }
    Ok(SparseSymMatrix::from_triplets(mesh.num_vertices(), triplets))
}

/// Mass matrix. Consistent: |T|/12·(2 on the diagonal, 1 off) per triangle,
/// |e|/6·(2, 1) per segment. Lumped: row sums of the consistent matrix.
pub fn assemble_mass(mesh: &SimplicialMesh, mode: MassMode) -> SparseSymMatrix {
    let mut triplets = Vec::with_capacity(mesh.simplices.len() * 6);
    for s in &mesh.simplices {
        let measure = mesh.simplex_measure(s);
        let k = s.len();
        // Element mass of a P1 simplex with k vertices: |T|/(k(k+1))·(1 + δ_ij).
        let unit = measure / (k * (k + 1)) as f64;
        match mode {
            MassMode::Consistent => {
                for a in 0..k {
                    triplets.push((s[a], s[a], 2.0 * unit));
                    for b in 0..a {
                        triplets.push((s[a], s[b], unit));
                    }
                }
            }
            MassMode::Lumped => {
                for &i in s {
                    triplets.push((i, i, measure / k as f64));
                }
            }
        }
    }
    SparseSymMatrix::from_triplets(mesh.num_vertices(), triplets)
}

/// The ambient coordinate functions x₁, …, x_{n+2} sampled at the vertices.
pub fn coordinate_vectors(mesh: &SimplicialMesh) -> Vec<Vec<f64>> {
    (0..mesh.ambient_dim)
        .map(|c| mesh.vertices.iter().map(|v| v.coords()[c]).collect())
        .collect()
}
