//! Decomposition of `∇ω` into the twelve classes of almost contact metric
//! structures.
//!
//! `C(V)` is the space of covariant 3-tensors `α` with
//! `α(x, y, z) = -α(x, z, y) = -α(x, φy, φz) + η(y)α(x, ξ, z) + η(z)α(x, y, ξ)`.
//! Each class `Cᵢ` is cut out of `C(V)` by linear conditions and found as a
//! numerical nullspace; the classes are mutually orthogonal and sum to
//! `C(V)`.

mod classes;
mod classify;
mod decompose;
mod invariants;
mod relations;
mod tensor;
mod theorem;

pub use classes::{
    ambient_basis, coordinate_frame, frame_residual, subspace_basis, ClassBases, ClassId, SubspaceBasis,
};
pub use classify::{classify, ClassReport, NamedType, TypeVerdict, DEFAULT_TOL_REL, PARALLEL_LOCUS};
pub use decompose::{adapted_frame, decompose, ClassDecomposition, ClassNorms, Decomposer, PointDecomposition};
pub use invariants::{quadratic_invariants, QuadraticInvariants};
pub use relations::{relation_check, relations, Quantity, Relation, RelationOutcome, RelationReport, RelationTable};
pub use tensor::CovDeg3Tensor;
pub use theorem::{
    analyze_field, analyze_point, field_flags, theorem_ledger, FieldFlags, Outcome, PointAnalysis, TheoremLedger,
    TheoremRow, TheoremTolerances, CASES,
};

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::acms::{standard_structure, AlmostContactMetric};
    use crate::algebra7::{G2Structure, Matrix7, Vector7};

    const DIMS: [usize; 12] = [2, 16, 12, 6, 1, 1, 8, 8, 12, 6, 6, 6];

    fn random_tensor(rng: &mut ChaCha8Rng) -> CovDeg3Tensor<f64> {
        CovDeg3Tensor::from_fn(|_, _, _| rng.random_range(-1.0..1.0))
    }

    fn random_unit(rng: &mut ChaCha8Rng) -> Vector7<f64> {
        let v = Vector7::from_fn(|_| rng.random_range(-1.0..1.0));
        v.scale(1.0 / v.euclidean_norm())
    }

    fn generic_structure(seed: u64) -> AlmostContactMetric<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        standard_structure(&G2Structure::model(), &random_unit(&mut rng)).unwrap()
    }

    #[test]
    fn dimensions_at_model_and_generic_point() {
        for acms in [standard_structure(&G2Structure::model(), &Vector7::basis(6)).unwrap(), generic_structure(1)] {
            let b = ClassBases::build(&acms).unwrap();
            assert_eq!(b.ambient_dimension(), 84);
            for (c, d) in ClassId::ALL.iter().zip(DIMS) {
                assert_eq!(b.dimension(*c), d, "{c}");
            }
            assert_eq!(b.dimension(ClassId::D1), 36);
            assert_eq!(b.dimension(ClassId::D2), 42);
        }
    }

    #[test]
    fn classes_are_orthogonal_and_complete() {
        let acms = generic_structure(2);
        let b = ClassBases::build(&acms).unwrap();
        let frames: Vec<Vec<Vec<f64>>> = ClassId::ALL.iter().map(|c| b.frame_basis(*c).to_vec()).collect();
        for i in 0..12 {
            for j in 0..12 {
                for (p, u) in frames[i].iter().enumerate() {
                    for (q, v) in frames[j].iter().enumerate() {
                        let d: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                        let expect = if i == j && p == q { 1.0 } else { 0.0 };
                        assert!((d - expect).abs() < 1e-10, "C{} C{}", i + 1, j + 1);
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = b.project_ambient(&random_tensor(&mut rng));
            let dec = b.decompose(&a);
            assert!(dec.residual_norm < 1e-10 * dec.alpha_norm);
            let sum = dec.beta.iter().fold(CovDeg3Tensor::zero(), |s, x| s.add(x));
            assert!(sum.sub(&a).max_abs() < 1e-10);
        }
    }

    #[test]
    fn members_satisfy_defining_relation() {
        let acms = generic_structure(4);
        let b = ClassBases::build(&acms).unwrap();
        for t in b.ambient().basis {
            assert!(t.antisymmetry_residual() < 1e-10);
            assert!(t.phi_relation_residual(&acms) < 1e-10);
        }
    }

    #[test]
    fn fast_path_agrees_with_direct_route() {
        let d = Decomposer::<f64>::new().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..4 {
            let acms = generic_structure(100 + seed);
            let b = ClassBases::build(&acms).unwrap();
            let a = b.project_ambient(&random_tensor(&mut rng));
            let direct = b.decompose(&a);
            let fast = d.decompose(&acms, &a).unwrap();
            for k in 0..12 {
                assert!((direct.component_norms[k] - fast.component_norms[k]).abs() < 1e-10);
                assert!(direct.beta[k].sub(&fast.beta[k]).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn invariants_are_frame_independent() {
        let acms = generic_structure(6);
        let b = ClassBases::build(&acms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = b.project_ambient(&random_tensor(&mut rng));
        let f0 = adapted_frame(&acms).unwrap();
        let base = quadratic_invariants(&a, &f0, &acms).unwrap();
        for _ in 0..20 {
            // Rotate e₁ … e₆ by a random orthogonal matrix.
            let q = Matrix7::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let cols: Vec<Vector7<f64>> = (0..6).map(|j| f0.mul_vec(&q.column(j))).collect();
            let mut on: Vec<Vector7<f64>> = vec![*acms.xi()];
            for c in cols {
                let mut w = c;
                for _ in 0..2 {
                    for s in &on {
                        w = w - *s * s.dot(&w);
                    }
                }
                on.push(w.scale(1.0 / w.euclidean_norm()));
            }
            on.rotate_left(1);
            let frame = Matrix7::from_columns(&on.try_into().unwrap());
            let inv = quadratic_invariants(&a, &frame, &acms).unwrap();
            for m in 1..=18 {
                assert!((inv.get(m) - base.get(m)).abs() <= 1e-9 * base.norm_sq, "i{m}");
            }
        }
    }

    #[test]
    fn corrected_table_holds_and_classical_fails_only_where_expected() {
        let acms = generic_structure(8);
        let b = ClassBases::build(&acms).unwrap();
        let frame = adapted_frame(&acms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for c in ClassId::ALL {
            for _ in 0..5 {
                let beta = b.project(c, &random_tensor(&mut rng));
                let inv = quadratic_invariants(&beta, &frame, &acms).unwrap();
                let corrected = relation_check(c, &inv, RelationTable::Corrected, 1e-8);
                assert!(corrected.all_satisfied(), "{c}: {:?}", corrected.violations().collect::<Vec<_>>());
                let classical = relation_check(c, &inv, RelationTable::Classical, 1e-8);
                let bad: Vec<&str> = classical.violations().map(|o| o.label.as_str()).collect();
                if c == ClassId::C12 {
                    assert_eq!(bad.len(), 2, "{bad:?}");
                } else {
                    assert!(bad.is_empty(), "{c}: {bad:?}");
                }
            }
        }
    }

    #[test]
    fn c4_scalar() {
        let acms = generic_structure(10);
        let b = ClassBases::build(&acms).unwrap();
        let frame = adapted_frame(&acms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let beta = b.project(ClassId::C4, &random_tensor(&mut rng));
        let inv = quadratic_invariants(&beta, &frame, &acms).unwrap();
        assert!((inv.get(1) - inv.get(4)).abs() < 1e-12 * inv.norm_sq);
        assert!((inv.get(1) - 0.75 * inv.get(4)).abs() > 0.1 * inv.norm_sq);
    }
}
