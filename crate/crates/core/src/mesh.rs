//! Simplicial meshes of catalog hypersurfaces embedded in Rⁿ⁺².
//!
//! Only n = 1 (polygons on a great circle) and n = 2 (flat tori and
//! icospheres) are generated. Refinement splits every edge at its midpoint and
//! projects the midpoint back onto the hypersurface.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    embed_point, make_clifford, make_great_sphere, reproject, AmbientPoint, HypersurfaceSpec,
    SurfaceKind,
};

pub const MAX_ICOSPHERE_LEVEL: usize = 7;
pub const MAX_GRID: usize = 512;
pub const MAX_SEGMENTS: usize = 1 << 20;

/// Relative measure below which a simplex counts as degenerate.
pub const DEGENERATE_REL: f64 = 1e-14;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicialMesh {
    pub dim: usize,
    pub ambient_dim: usize,
    pub vertices: Vec<AmbientPoint>,
    pub simplices: Vec<Vec<usize>>,
    pub spec: HypersurfaceSpec,
    /// Generator and resolution, e.g. `torus grid=64`.
    pub descriptor: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub h_max: f64,
    pub h_min: f64,
    pub total_measure: f64,
    pub quality_min: f64,
}

impl SimplicialMesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        self.vertices[i].coords()
    }

    /// Unique undirected edges (i < j), sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(self.simplices.len() * 3);
        for s in &self.simplices {
            for a in 0..s.len() {
                for b in a + 1..s.len() {
                    let (i, j) = (s[a].min(s[b]), s[a].max(s[b]));
                    edges.push((i, j));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let e = self.edges().len() as i64;
        match self.dim {
            1 => v - e,
            _ => v - e + self.simplices.len() as i64,
        }
    }

    pub fn simplex_measure(&self, s: &[usize]) -> f64 {
        match s.len() {
            2 => distance(self.vertex(s[0]), self.vertex(s[1])),
            3 => triangle_area(self.vertex(s[0]), self.vertex(s[1]), self.vertex(s[2])),
            _ => f64::NAN,
        }
    }

    /// Checks every structural invariant: unit-norm vertices, valid indices,
    /// no degenerate simplex, closed, consistently oriented and connected.
    pub fn validate(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.ambient_dim != self.dim + 2 || self.spec.n() != self.dim {
            return Err(Error::InvalidMesh(format!(
                "dimension metadata inconsistent: dim {}, ambient {}, spec n {}",
                self.dim,
                self.ambient_dim,
                self.spec.n()
            )));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.dim() != self.ambient_dim {
                return Err(Error::InvalidMesh(format!("vertex {i} has {} coordinates", v.dim())));
            }
            if (v.norm() - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidMesh(format!("vertex {i} has norm {}", v.norm())));
            }
        }
        let nv = self.vertices.len();
        for (k, s) in self.simplices.iter().enumerate() {
            if s.len() != self.dim + 1 {
                return Err(Error::InvalidMesh(format!("simplex {k} has {} vertices", s.len())));
            }
            if s.iter().any(|&i| i >= nv) {
                return Err(Error::InvalidMesh(format!("simplex {k} has an out-of-range index")));
            }
        }
        self.check_nondegenerate()?;

        // Closed and consistently oriented: each directed facet appears once
        // and its reverse appears once.
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for s in &self.simplices {
            for a in 0..s.len() {
                let b = (a + 1) % s.len();
                if self.dim == 1 && a == 1 {
                    break;
                }
                *directed.entry((s[a], s[b])).or_insert(0) += 1;
            }
        }
        match self.dim {
            1 => {
                let mut out_deg = vec![0usize; nv];
                let mut in_deg = vec![0usize; nv];
                for (&(a, b), &c) in &directed {
                    out_deg[a] += c;
                    in_deg[b] += c;
                }
                if let Some(i) = (0..nv).find(|&i| out_deg[i] != 1 || in_deg[i] != 1) {
                    return Err(Error::InvalidMesh(format!(
                        "vertex {i} is not incident to exactly two oriented edges"
                    )));
                }
            }
            _ => {
                for (&(a, b), &c) in &directed {
                    if c != 1 || directed.get(&(b, a)) != Some(&1) {
                        return Err(Error::InvalidMesh(format!(
                            "edge ({a}, {b}) is not shared by exactly two consistently oriented triangles"
                        )));
                    }
                }
            }
        }

        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for s in &self.simplices {
            for w in s.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        if (0..nv).any(|i| find(&mut parent, i) != root) {
            return Err(Error::InvalidMesh("mesh is not connected".into()));
        }
        Ok(())
    }

    pub(crate) fn check_nondegenerate(&self) -> Result<()> {
        let h_max = self
            .edges()
            .iter()
            .map(|&(i, j)| distance(self.vertex(i), self.vertex(j)))
            .fold(0.0, f64::max);
        let threshold = DEGENERATE_REL * h_max.powi(self.dim as i32);
        for (index, s) in self.simplices.iter().enumerate() {
            let measure = self.simplex_measure(s);
            if !(measure >= threshold) || measure == 0.0 {
                return Err(Error::DegenerateSimplex {
                    index,
                    measure,
                    threshold,
                });
            }
        }
        Ok(())
    }

    /// OFF-like text: `OFF`, `AMBIENT d`, counts, one line of d coordinates
    /// per vertex, then one line per simplex prefixed by its vertex count.
    pub fn to_off(&self) -> String {
        let mut out = String::new();
        writeln!(out, "OFF").unwrap();
        writeln!(out, "AMBIENT {}", self.ambient_dim).unwrap();
        writeln!(out, "{} {} 0", self.vertices.len(), self.simplices.len()).unwrap();
        for v in &self.vertices {
            let line: Vec<String> = v.coords().iter().map(|x| format!("{x:.17e}")).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        for s in &self.simplices {
            let line: Vec<String> = s.iter().map(|i| i.to_string()).collect();
            writeln!(out, "{} {}", s.len(), line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mesh: SimplicialMesh = serde_json::from_str(text)?;
        mesh.validate()?;
        Ok(mesh)
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Area of the flat triangle spanned by three points of Rᵈ.
pub(crate) fn triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u = sub(b, a);
    let v = sub(c, a);
    let gram = dot(&u, &u) * dot(&v, &v) - dot(&u, &v).powi(2);
    0.5 * gram.max(0.0).sqrt()
}

/// Regular polygon on the equator of S² ⊂ R³ (the great circle S¹ ⊂ S²).
pub fn mesh_circle(segments: usize) -> Result<SimplicialMesh> {
    if segments < 3 {
        return Err(invalid("segments", "need at least 3 segments"));
    }
    if segments > MAX_SEGMENTS {
        return Err(invalid("segments", format!("at most {MAX_SEGMENTS} segments")));
    }
    let spec = make_great_sphere(1)?;
    let vertices = (0..segments)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / segments as f64;
            embed_point(&spec, &[vec![t]])
        })
        .collect::<Result<Vec<_>>>()?;
    let simplices = (0..segments).map(|k| vec![k, (k + 1) % segments]).collect();
    let mesh = SimplicialMesh {
        dim: 1,
        ambient_dim: 3,
        vertices,
        simplices,
        spec,
        descriptor: format!("circle segments={segments}"),
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Periodic grid×grid triangulation of a torus S¹(r₁) × S¹(r₂) ⊂ S³. Each
/// angle-space quad is split along the same diagonal.
pub fn mesh_torus(spec: &HypersurfaceSpec, grid: usize) -> Result<SimplicialMesh> {
    if spec.kind() != SurfaceKind::ProductOfSpheres
        || spec.factors().len() != 2
        || spec.factors().iter().any(|f| f.dim != 1)
    {
        return Err(invalid("spec", "torus meshes need a product of two circles"));
    }
    if grid < 3 {
        return Err(invalid("grid", "need a grid of at least 3"));
    }
    if grid > MAX_GRID {
        return Err(invalid("grid", format!("at most {MAX_GRID}")));
    }
    let step = 2.0 * PI / grid as f64;
    let mut vertices = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            vertices.push(embed_point(spec, &[vec![i as f64 * step], vec![j as f64 * step]])?);
        }
    }
    let idx = |i: usize, j: usize| (i % grid) * grid + (j % grid);
    let mut simplices = Vec::with_capacity(2 * grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            let (v00, v10, v11, v01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            simplices.push(vec![v00, v10, v11]);
            simplices.push(vec![v00, v11, v01]);
        }
    }
    let mesh = SimplicialMesh {
        dim: 2,
        ambient_dim: 4,
        vertices,
        simplices,
        spec: spec.clone(),
        descriptor: format!("torus grid={grid}"),
    };
    mesh.validate()?;
    Ok(mesh)
}

/// The minimal Clifford torus S¹(√½) × S¹(√½) ⊂ S³.
pub fn mesh_clifford_torus(grid: usize) -> Result<SimplicialMesh> {
    mesh_torus(&make_clifford(1, 1)?, grid)
}

fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let norm = (1.0 + t * t).sqrt();
    let verts = raw.iter().map(|v| [v[0] / norm, v[1] / norm, v[2] / norm]).collect();
    (verts, faces)
}

/// Icosahedron subdivided `levels` times, on the great S² ⊂ S³ (x₄ = 0).
pub fn mesh_great_sphere2(levels: usize) -> Result<SimplicialMesh> {
    if levels > MAX_ICOSPHERE_LEVEL {
        return Err(invalid("levels", format!("at most {MAX_ICOSPHERE_LEVEL}")));
    }
    let spec = make_great_sphere(2)?;
    let (verts, faces) = icosahedron();
    let mut mesh = SimplicialMesh {
        dim: 2,
        ambient_dim: 4,
        vertices: verts
            .iter()
            .map(|v| AmbientPoint::from_coords(vec![v[0], v[1], v[2], 0.0]))
            .collect(),
        simplices: faces.iter().map(|f| f.to_vec()).collect(),
        spec,
        descriptor: "icosphere level=0".into(),
    };
    mesh.validate()?;
    for level in 1..=levels {
        mesh = refine(&mesh)?;
        mesh.descriptor = format!("icosphere level={level}");
    }
    Ok(mesh)
}

/// Midpoint subdivision with reprojection onto the hypersurface: each segment
/// splits in two, each triangle in four. Existing vertices keep their indices.
pub fn refine(mesh: &SimplicialMesh) -> Result<SimplicialMesh> {
    if mesh.dim != 1 && mesh.dim != 2 {
        return Err(Error::UnsupportedDimension(mesh.dim));
    }
    let mut vertices = mesh.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<AmbientPoint>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            let mut m: Vec<f64> = vertices[a]
                .coords()
                .iter()
                .zip(vertices[b].coords())
                .map(|(x, y)| 0.5 * (x + y))
                .collect();
            reproject(&mesh.spec, &mut m);
            vertices.push(AmbientPoint::from_coords(m));
            vertices.len() - 1
        })
    };
    let mut simplices = Vec::with_capacity(mesh.simplices.len() * (1 << mesh.dim));
    for s in &mesh.simplices {
        match s.len() {
            2 => {
                let m = midpoint(s[0], s[1], &mut vertices);
                simplices.push(vec![s[0], m]);
                simplices.push(vec![m, s[1]]);
            }
            _ => {
                let (a, b, c) = (s[0], s[1], s[2]);
                let ab = midpoint(a, b, &mut vertices);
                let bc = midpoint(b, c, &mut vertices);
                let ca = midpoint(c, a, &mut vertices);
                simplices.push(vec![a, ab, ca]);
                simplices.push(vec![ab, b, bc]);
                simplices.push(vec![ca, bc, c]);
                simplices.push(vec![ab, bc, ca]);
            }
        }
    }
    let refined = SimplicialMesh {
        dim: mesh.dim,
        ambient_dim: mesh.ambient_dim,
        vertices,
        simplices,
        spec: mesh.spec.clone(),
        descriptor: format!("{} refined", mesh.descriptor),
    };
    refined.validate()?;
    Ok(refined)
}

/// Edge lengths, total measure and worst simplex quality. Triangle quality is
/// 2·inradius/circumradius (1 for equilateral); segments have quality 1.
pub fn mesh_stats(mesh: &SimplicialMesh) -> MeshStats {
    let (mut h_max, mut h_min) = (0.0f64, f64::INFINITY);
    for (i, j) in mesh.edges() {
        let d = distance(mesh.vertex(i), mesh.vertex(j));
        h_max = h_max.max(d);
        h_min = h_min.min(d);
    }
    let mut total = 0.0;
    let mut quality_min = 1.0f64;
    for s in &mesh.simplices {
        let measure = mesh.simplex_measure(s);
        total += measure;
        if s.len() == 3 {
            let a = distance(mesh.vertex(s[1]), mesh.vertex(s[2]));
            let b = distance(mesh.vertex(s[2]), mesh.vertex(s[0]));
            let c = distance(mesh.vertex(s[0]), mesh.vertex(s[1]));
            let semi = 0.5 * (a + b + c);
            quality_min = quality_min.min(8.0 * measure * measure / (semi * a * b * c));
        }
    }
    MeshStats {
        h_max,
        h_min,
        total_measure: total,
        quality_min,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_product_exact;
    use crate::Rational;

    #[test]
    fn circle_generator() {
        let m = mesh_circle(4).unwrap();
        assert_eq!(m.num_vertices(), 4);
        assert_eq!(m.num_simplices(), 4);
        assert_eq!(m.euler_characteristic(), 0);
        let expect = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (v, e) in m.vertices.iter().zip(expect) {
            assert!((v.coords()[0] - e[0]).abs() < 1e-15 && (v.coords()[1] - e[1]).abs() < 1e-15);
            assert_eq!(v.coords()[2], 0.0);
        }
        let stats = mesh_stats(&mesh_circle(64).unwrap());
        assert!((stats.h_max - 2.0 * (PI / 64.0).sin()).abs() < 1e-14);
        assert!((mesh_stats(&mesh_circle(6).unwrap()).total_measure - 6.0).abs() < 1e-14);
        assert!(mesh_circle(2).is_err());
    }

    #[test]
    fn torus_generator() {
        let m = mesh_clifford_torus(3).unwrap();
        assert_eq!(m.num_vertices(), 9);
        assert_eq!(m.num_simplices(), 18);
        assert_eq!(m.euler_characteristic(), 0);
        assert!(mesh_clifford_torus(2).is_err());
        assert!(mesh_clifford_torus(MAX_GRID + 1).is_err());
    }

    #[test]
    fn torus_triangles_are_congruent_and_edge_length_shrinks() {
        let mut last = f64::INFINITY;
        for grid in [8, 16, 64] {
            let m = mesh_clifford_torus(grid).unwrap();
            let stats = mesh_stats(&m);
            // Axis chord c = 2 r sin(π/N) with r = √½; the diagonal is √2·c.
            let chord = 2.0 * std::f64::consts::FRAC_1_SQRT_2 * (PI / grid as f64).sin();
            assert!((stats.h_min - chord).abs() < 1e-14);
            assert!((stats.h_max - 2f64.sqrt() * chord).abs() < 1e-13);
            assert!(stats.h_max < last);
            last = stats.h_max;
            let first = m.simplex_measure(&m.simplices[0]);
            assert!(m.simplices.iter().all(|s| (m.simplex_measure(s) - first).abs() < 1e-14));
        }
    }

    #[test]
    fn icosphere_counts() {
        let m = mesh_great_sphere2(0).unwrap();
        assert_eq!((m.num_vertices(), m.num_simplices()), (12, 20));
        assert_eq!(m.euler_characteristic(), 2);
        let m = mesh_great_sphere2(2).unwrap();
        assert_eq!((m.num_vertices(), m.num_simplices()), (162, 320));
        assert!(m.vertices.iter().all(|v| v.coords()[3] == 0.0));
        assert!(mesh_great_sphere2(8).is_err());
        let stats = mesh_stats(&mesh_great_sphere2(0).unwrap());
        assert!((stats.quality_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_of_icosphere_is_next_level() {
        let l1 = mesh_great_sphere2(1).unwrap();
        let r = refine(&l1).unwrap();
        let l2 = mesh_great_sphere2(2).unwrap();
        assert_eq!(r.vertices, l2.vertices);
        assert_eq!(r.simplices, l2.simplices);
        assert_eq!(r.num_simplices(), 4 * l1.num_simplices());
        assert_eq!(r.euler_characteristic(), 2);
        let ratio = mesh_stats(&l1).h_max / mesh_stats(&r).h_max;
        assert!((ratio - 2.0).abs() < 0.25, "ratio {ratio}");
    }

    #[test]
    fn refinement_of_torus_matches_doubled_grid() {
        let coarse = mesh_clifford_torus(8).unwrap();
        let r = refine(&coarse).unwrap();
        assert_eq!(r.num_vertices(), 256);
        assert_eq!(r.euler_characteristic(), 0);
        let fine = mesh_clifford_torus(16).unwrap();
        let (a, b) = (mesh_stats(&r), mesh_stats(&fine));
        assert!((a.total_measure - b.total_measure).abs() < 1e-12);
        assert!((a.h_max - b.h_max).abs() < 1e-14);
        assert!((a.h_min - b.h_min).abs() < 1e-14);
        for v in &r.vertices {
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn refinement_of_circle_and_non_minimal_torus() {
        let c = refine(&mesh_circle(5).unwrap()).unwrap();
        assert_eq!(c.num_simplices(), 10);
        let expect = mesh_stats(&mesh_circle(10).unwrap());
        assert!((mesh_stats(&c).total_measure - expect.total_measure).abs() < 1e-13);

        let spec = make_product_exact(1, 1, Rational::new(3, 10)).unwrap();
        let t = refine(&mesh_torus(&spec, 6).unwrap()).unwrap();
        for v in &t.vertices {
            let x = v.coords();
            assert!(((x[0] * x[0] + x[1] * x[1]) - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn measures_converge_to_analytic_values() {
        let mut prev = 0.0;
        for segs in [8, 16, 32, 64, 128] {
            let m = mesh_stats(&mesh_circle(segs).unwrap()).total_measure;
            assert!(m >= prev - 1e-12 && m < 2.0 * PI);
            prev = m;
        }
        assert!((prev - 2.0 * PI).abs() < 2e-3);

        let mut prev = 0.0;
        for grid in [8, 16, 32, 64, 128] {
            let m = mesh_stats(&mesh_clifford_torus(grid).unwrap()).total_measure;
            assert!(m >= prev - 1e-12 && m < 2.0 * PI * PI);
            prev = m;
        }
        // Flat square torus with side 2π√½: area 2π².
        assert!((prev - 2.0 * PI * PI).abs() / (2.0 * PI * PI) < 1e-3);

        let mut prev = 0.0;
        for level in 0..6 {
            let m = mesh_stats(&mesh_great_sphere2(level).unwrap()).total_measure;
            assert!(m >= prev - 1e-12 && m < 4.0 * PI);
            prev = m;
        }
        assert!((prev - 4.0 * PI).abs() / (4.0 * PI) < 1e-3);
    }

    #[test]
    fn validation_rejects_broken_meshes() {
        let mut m = mesh_clifford_torus(4).unwrap();
        m.simplices.pop();
        assert!(matches!(m.validate(), Err(Error::InvalidMesh(_))));

        let mut m = mesh_clifford_torus(4).unwrap();
        m.simplices[0].swap(1, 2);
        assert!(m.validate().is_err());

        let mut m = mesh_circle(6).unwrap();
        m.simplices[0] = vec![0, 0];
        assert!(m.validate().is_err());

        let mut m = mesh_great_sphere2(0).unwrap();
        let v = m.vertices[0].clone();
        m.vertices[1] = v;
        assert!(matches!(m.check_nondegenerate(), Err(Error::DegenerateSimplex { .. })));
    }

    #[test]
    fn off_export_has_ambient_header() {
        let m = mesh_clifford_torus(3).unwrap();
        let off = m.to_off();
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[0], "OFF");
        assert_eq!(lines[1], "AMBIENT 4");
        assert_eq!(lines[2], "9 18 0");
        assert_eq!(lines[3].split_whitespace().count(), 4);
        assert_eq!(lines[12], "3 0 3 4");
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(SimplicialMesh::from_json(&json).unwrap(), m);
    }
}
