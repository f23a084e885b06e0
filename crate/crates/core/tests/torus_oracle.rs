//! Closed forms on the Clifford torus grid mesh.
//!
//! The grid triangles are right isosceles in R⁴ with legs a = 2r sin(ω/2),
//! r² = 1/2, ω = 2π/N. Cotangent weights give the 5-point stencil, so for the
//! mode cos θ₁: K v = 4 sin²(ω/2) v, consistent M v = A(8 + 4cos ω)/6 v,
//! lumped M = 2A with A = a²/2. Hence
//!   consistent λ₁ = 6 / (2 + cos ω),  lumped λ₁ = 2,
//! with multiplicity 4 (cos θ₁, sin θ₁, cos θ₂, sin θ₂), and the consistent
//! Takahashi residual is (1 − cos ω) / (2 + cos ω).

use std::f64::consts::PI;

use isospec::eigen::{bilaplace_eigs, buckling_eigs, laplace_eigs, BiLaplaceMethod, SolveOptions, SolverMode};
use isospec::mesh::mesh_clifford_torus;
use isospec::operators::{MassMode, OperatorPair};
use isospec::verify::takahashi_residual;

fn consistent_lambda1(n: usize) -> f64 {
    6.0 / (2.0 + (2.0 * PI / n as f64).cos())
}

#[test]
fn consistent_lambda1_closed_form() {
    for n in [8, 16, 24, 40] {
        let mesh = mesh_clifford_torus(n).unwrap();
        let ops = OperatorPair::new(&mesh, MassMode::Consistent).unwrap();
        let r = laplace_eigs(&ops, &SolveOptions::new(6, 1e-11)).unwrap();
        let c = r.clusters();
        assert_eq!(c[1].1, 4, "grid {n}: {c:?}");
        assert!((c[1].0 - consistent_lambda1(n)).abs() < 1e-10, "grid {n}: {} vs {}", c[1].0, consistent_lambda1(n));
    }
}

#[test]
fn lumped_lambda1_is_exact() {
    for n in [8, 20] {
        let mesh = mesh_clifford_torus(n).unwrap();
        let ops = OperatorPair::new(&mesh, MassMode::Lumped).unwrap();
        let r = laplace_eigs(&ops, &SolveOptions::new(5, 1e-11)).unwrap();
        for k in 1..5 {
            assert!((r.value(k) - 2.0).abs() < 1e-10);
        }
    }
}

#[test]
fn mixed_and_buckling_follow_the_laplace_closed_form() {
    let n = 16;
    let mesh = mesh_clifford_torus(n).unwrap();
    let ops = OperatorPair::new(&mesh, MassMode::Consistent).unwrap();
    let l = consistent_lambda1(n);
    for mode in [SolverMode::Dense, SolverMode::Iterative] {
        let opts = SolveOptions::new(5, 1e-10).with_mode(mode);
        let bi = bilaplace_eigs(&ops, &opts, BiLaplaceMethod::Mixed).unwrap();
        let buck = buckling_eigs(&ops, &opts).unwrap();
        for k in 1..5 {
            assert!((bi.value(k) - l * l).abs() < 1e-9, "{mode:?}");
            assert!((buck.value(k) - l).abs() < 1e-9, "{mode:?}");
        }
    }
}

#[test]
fn consistent_takahashi_closed_form() {
    for n in [8, 32, 64] {
        let mesh = mesh_clifford_torus(n).unwrap();
        let ops = OperatorPair::new(&mesh, MassMode::Consistent).unwrap();
        let c = (2.0 * PI / n as f64).cos();
        let expected = (1.0 - c) / (2.0 + c);
        let got = takahashi_residual(&ops, 2);
        assert!((got - expected).abs() < 1e-12, "grid {n}: {got} vs {expected}");
    }
}
