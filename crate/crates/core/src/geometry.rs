//! Catalog of explicit hypersurfaces of the unit sphere Sⁿ⁺¹(1).
//!
//! Two families are supported: totally geodesic great spheres Sⁿ ⊂ Sⁿ⁺¹
//! and products of round spheres Sᵖ(r₁) × S^q(r₂) with r₁² + r₂² = 1. Squared
//! radii are stored as exact rationals so that every downstream spectrum is
//! exact. The product is minimal iff r₁² = p/n and r₂² = q/n.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::Rational;

/// Tolerance on squared radii for minimality and unit-sphere checks.
pub const RADIUS_TOL: f64 = 1e-12;

/// Largest denominator accepted when a floating squared radius is turned
/// into an exact rational.
const MAX_RADIUS_DEN: i128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    GreatSphere,
    ProductOfSpheres,
}

/// One round sphere factor S^dim(radius).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SphereFactor {
    pub dim: usize,
    pub radius_sq: Rational,
}

impl SphereFactor {
    pub fn radius(&self) -> f64 {
        crate::rational_to_f64(self.radius_sq).sqrt()
    }
}

/// Symbolic description of a catalog hypersurface Mⁿ ⊂ Sⁿ⁺¹(1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct HypersurfaceSpec {
    kind: SurfaceKind,
    n: usize,
    factors: Vec<SphereFactor>,
}

impl HypersurfaceSpec {
    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// Intrinsic dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[SphereFactor] {
        &self.factors
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 2
    }

    pub fn is_minimal(&self) -> bool {
        is_minimal(self)
    }

    /// Short human-readable label, e.g. `S^1(sqrt(1/2)) x S^1(sqrt(1/2))`.
    pub fn label(&self) -> String {
        match self.kind {
            SurfaceKind::GreatSphere => format!("S^{}", self.n),
            SurfaceKind::ProductOfSpheres => self
                .factors
                .iter()
                .map(|f| format!("S^{}(sqrt({}))", f.dim, f.radius_sq))
                .collect::<Vec<_>>()
                .join(" x "),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "dimension must be positive"));
        }
        match self.kind {
            SurfaceKind::GreatSphere => {
                if !self.factors.is_empty() {
                    return Err(invalid("factors", "a great sphere has no factors"));
                }
            }
            SurfaceKind::ProductOfSpheres => {
                if self.factors.len() < 2 {
                    return Err(invalid("factors", "a product needs at least two factors"));
                }
                let dims: usize = self.factors.iter().map(|f| f.dim).sum();
                if dims != self.n {
                    return Err(invalid(
                        "factors",
                        format!("factor dimensions sum to {dims}, expected n = {}", self.n),
                    ));
                }
                if self.factors.iter().any(|f| f.dim == 0) {
                    return Err(invalid("factors", "factor dimensions must be positive"));
                }
                if self.factors.iter().any(|f| f.radius_sq <= Rational::from_integer(0)) {
                    return Err(invalid("factors", "radii must be strictly positive"));
                }
                let total: Rational = self.factors.iter().map(|f| f.radius_sq).sum();
                if total != Rational::from_integer(1) {
                    return Err(Error::RadiiNotOnSphere {
                        sum: crate::rational_to_f64(total),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A point of the unit sphere Sⁿ⁺¹(1) ⊂ Rⁿ⁺².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbientPoint(Vec<f64>);

impl AmbientPoint {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub(crate) fn from_coords(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

pub fn make_great_sphere(n: usize) -> Result<HypersurfaceSpec> {
    if n == 0 {
        return Err(invalid("n", "dimension must be at least 1"));
    }
    Ok(HypersurfaceSpec {
        kind: SurfaceKind::GreatSphere,
        n,
        factors: Vec::new(),
    })
}

/// The minimal product Sᵖ(√(p/n)) × S^q(√(q/n)), n = p + q.
pub fn make_clifford(p: usize, q: usize) -> Result<HypersurfaceSpec> {
    if p == 0 || q == 0 {
        return Err(invalid("p, q", "factor dimensions must be at least 1"));
    }
    let n = p + q;
    let den = n as i128;
    make_product_exact(p, q, Rational::new(p as i128, den))
}

/// Product Sᵖ(r₁) × S^q(r₂) from real radii. The squared radius r₁² must be
/// representable as a rational with denominator at most 10⁶ to within 1e-12.
pub fn make_product(p: usize, q: usize, r1: f64, r2: f64) -> Result<HypersurfaceSpec> {
    if !(r1 > 0.0 && r2 > 0.0) || !r1.is_finite() || !r2.is_finite() {
        return Err(invalid("r1, r2", "radii must be finite and strictly positive"));
    }
    let sum = r1 * r1 + r2 * r2;
    if (sum - 1.0).abs() > RADIUS_TOL {
        return Err(Error::RadiiNotOnSphere { sum });
    }
    let r1_sq = approximate_rational(r1 * r1, MAX_RADIUS_DEN);
    if (crate::rational_to_f64(r1_sq) - r1 * r1).abs() > RADIUS_TOL {
        return Err(invalid(
            "r1",
            format!("r1^2 = {} has no rational form with denominator <= {MAX_RADIUS_DEN}", r1 * r1),
        ));
    }
    make_product_exact(p, q, r1_sq)
}

/// Product Sᵖ(r₁) × S^q(r₂) with r₁² given exactly and r₂² = 1 − r₁².
pub fn make_product_exact(p: usize, q: usize, r1_sq: Rational) -> Result<HypersurfaceSpec> {
    if p == 0 || q == 0 {
        return Err(invalid("p, q", "factor dimensions must be at least 1"));
    }
    let one = Rational::from_integer(1);
    let zero = Rational::from_integer(0);
    if r1_sq <= zero || r1_sq >= one {
        return Err(invalid("r1_sq", format!("r1^2 = {r1_sq} must lie strictly between 0 and 1")));
    }
    let spec = HypersurfaceSpec {
        kind: SurfaceKind::ProductOfSpheres,
        n: p + q,
        factors: vec![
            SphereFactor { dim: p, radius_sq: r1_sq },
            SphereFactor { dim: q, radius_sq: one - r1_sq },
        ],
    };
    spec.validate()?;
    Ok(spec)
}

/// True for great spheres, and for products whose squared radii equal dim/n.
pub fn is_minimal(spec: &HypersurfaceSpec) -> bool {
    match spec.kind {
        SurfaceKind::GreatSphere => true,
        SurfaceKind::ProductOfSpheres => spec.factors.iter().all(|f| {
            let r_sq = crate::rational_to_f64(f.radius_sq);
            (r_sq - f.dim as f64 / spec.n as f64).abs() <= RADIUS_TOL
        }),
    }
}

/// Hyperspherical embedding of Sᵐ(1) from m angles:
/// x₀ = cos φ₁, x₁ = sin φ₁ cos φ₂, …, x_m = sin φ₁ ⋯ sin φ_m.
pub(crate) fn unit_sphere_point(angles: &[f64], out: &mut [f64]) {
    let m = angles.len();
    debug_assert_eq!(out.len(), m + 1);
    let mut sin_prod = 1.0;
    for (i, &phi) in angles.iter().enumerate() {
        out[i] = sin_prod * phi.cos();
        sin_prod *= phi.sin();
    }
    out[m] = sin_prod;
}

/// Evaluates the embedding ψ: Mⁿ → Sⁿ⁺¹ ⊂ Rⁿ⁺² at angular chart coordinates,
/// one angle vector per factor (a single vector of n angles for a great sphere).
pub fn embed_point(spec: &HypersurfaceSpec, charts: &[Vec<f64>]) -> Result<AmbientPoint> {
    let mut coords = vec![0.0; spec.ambient_dim()];
    match spec.kind {
        SurfaceKind::GreatSphere => {
            if charts.len() != 1 || charts[0].len() != spec.n {
                return Err(Error::ChartArity(format!(
                    "great sphere S^{} takes one chart of {} angles",
                    spec.n, spec.n
                )));
            }
            unit_sphere_point(&charts[0], &mut coords[..spec.n + 1]);
        }
        SurfaceKind::ProductOfSpheres => {
            if charts.len() != spec.factors.len() {
                return Err(Error::ChartArity(format!(
                    "product of {} spheres takes {} charts, got {}",
                    spec.factors.len(),
                    spec.factors.len(),
                    charts.len()
                )));
            }
            let mut offset = 0;
            for (factor, chart) in spec.factors.iter().zip(charts) {
                if chart.len() != factor.dim {
                    return Err(Error::ChartArity(format!(
                        "factor S^{} takes {} angles, got {}",
                        factor.dim,
                        factor.dim,
                        chart.len()
                    )));
                }
                let block = &mut coords[offset..offset + factor.dim + 1];
                unit_sphere_point(chart, block);
                let r = factor.radius();
                block.iter_mut().for_each(|x| *x *= r);
                offset += factor.dim + 1;
            }
        }
    }
    Ok(AmbientPoint(coords))
}

/// Moves an ambient point back onto the hypersurface by normalizing each
/// factor block to its radius (or the whole point to the unit sphere).
pub(crate) fn reproject(spec: &HypersurfaceSpec, coords: &mut [f64]) {
    fn scale_to(block: &mut [f64], r: f64) {
        let norm = block.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            block.iter_mut().for_each(|x| *x *= r / norm);
        }
    }
    match spec.kind {
        SurfaceKind::GreatSphere => scale_to(&mut coords[..spec.n + 1], 1.0),
        SurfaceKind::ProductOfSpheres => {
            let mut offset = 0;
            for factor in &spec.factors {
                scale_to(&mut coords[offset..offset + factor.dim + 1], factor.radius());
                offset += factor.dim + 1;
            }
        }
    }
}

/// Best rational approximation of `x` with denominator ≤ `max_den`
/// (continued-fraction convergents).
pub fn approximate_rational(x: f64, max_den: i128) -> Rational {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rem - a;
        if frac.abs() < 1e-15 || (h1 as f64 / k1 as f64 - x).abs() < 1e-16 * x.abs().max(1.0) {
            break;
        }
        rem = 1.0 / frac;
    }
    if k1 == 0 {
        return Rational::from_integer(x.round() as i128);
    }
    Rational::new(h1, k1)
}

#[derive(Serialize, Deserialize)]
struct FactorWire {
    dim: usize,
    radius_sq_num: i128,
    radius_sq_den: i128,
}

#[derive(Serialize, Deserialize)]
struct SpecWire {
    kind: SurfaceKind,
    n: usize,
    factors: Vec<FactorWire>,
}

impl From<HypersurfaceSpec> for SpecWire {
    fn from(spec: HypersurfaceSpec) -> Self {
        SpecWire {
            kind: spec.kind,
            n: spec.n,
            factors: spec
                .factors
                .iter()
                .map(|f| FactorWire {
                    dim: f.dim,
                    radius_sq_num: *f.radius_sq.numer(),
                    radius_sq_den: *f.radius_sq.denom(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SpecWire> for HypersurfaceSpec {
    type Error = Error;

    fn try_from(wire: SpecWire) -> Result<Self> {
        let mut factors = Vec::with_capacity(wire.factors.len());
        for f in wire.factors {
            if f.radius_sq_den == 0 {
                return Err(invalid("radius_sq_den", "zero denominator"));
            }
            factors.push(SphereFactor {
                dim: f.dim,
                radius_sq: Rational::new(f.radius_sq_num, f.radius_sq_den),
            });
        }
        let spec = HypersurfaceSpec {
            kind: wire.kind,
            n: wire.n,
            factors,
        };
        spec.validate()?;
        Ok(spec)
    }
}
