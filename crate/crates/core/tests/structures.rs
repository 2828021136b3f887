use g2contact::algebra7::{G2Structure, Vector7, DIM};
use g2contact::chinea_gonzalez::{
    analyze_field, classify, theorem_ledger, ClassId, Decomposer, NamedType, Outcome, PointAnalysis,
    TheoremTolerances, DEFAULT_TOL_REL,
};
use g2contact::fields::families::{geodesic_unit_field, helix_field, random_unit_field};
use g2contact::fields::{ConstantField, DifferentiationContext, Field, LatticeSampling};
use g2contact::three_structure::{kuo_report, three_cosymplectic_check, KuoReport, ThreeStructureField};
use g2contact::Error;

fn analyze<F: Field<f64, Value = Vector7<f64>>>(xi: &F, count: usize, seed: u64) -> Vec<PointAnalysis<f64>> {
    let s = LatticeSampling::subsample(8, count, seed).unwrap();
    analyze_field(&G2Structure::model(), xi, &s, &DifferentiationContext::exact(), &Decomposer::new().unwrap())
        .unwrap()
}

fn max_ratio(pts: &[PointAnalysis<f64>], class: usize) -> f64 {
    pts.iter()
        .filter(|p| p.norms.alpha_norm > 1e-12)
        .map(|p| p.norms.component[class - 1] / p.norms.alpha_norm)
        .fold(0.0, f64::max)
}

#[test]
fn helix_is_divergence_free_without_c5() {
    let pts = analyze(&helix_field::<f64>(0.6, 1), 120, 1);
    let ledger = theorem_ledger(&pts, TheoremTolerances::default());
    assert!(ledger.flags.divergence_free);
    assert!(!ledger.flags.geodesic);
    assert!(max_ratio(&pts, 5) < 1e-12);
    assert!(max_ratio(&pts, 11) > 0.1);
    assert_eq!(ledger.row("beta5 <=> delta eta").unwrap().outcome, Outcome::Pass);
    assert_eq!(ledger.row("case 2").unwrap().outcome, Outcome::Fail);
}

#[test]
fn geodesic_family_has_no_c11_or_c12() {
    let pts = analyze(&geodesic_unit_field::<f64>(2, 3, 2), 120, 2);
    let ledger = theorem_ledger(&pts, TheoremTolerances::default());
    assert!(ledger.flags.geodesic && ledger.flags.divergence_free);
    assert!(max_ratio(&pts, 11) < 1e-12);
    assert!(max_ratio(&pts, 12) < 1e-12);
    assert!(pts.iter().all(|p| p.invariants.get(16).abs() < 1e-24));
    assert_eq!(ledger.row("beta11 vanishes").unwrap().outcome, Outcome::Pass);
}

#[test]
fn transverse_derivative_feeds_d1() {
    // The component of ∇ξ across ξ is never zero for these fields, and D1
    // tracks it pointwise.
    for seed in 0..3 {
        let pts = analyze(&random_unit_field::<f64>(30 + seed, 3, 2), 80, seed);
        let ledger = theorem_ledger(&pts, TheoremTolerances::default());
        assert_eq!(ledger.row("D1 <=> transverse nabla xi").unwrap().outcome, Outcome::Pass);
        assert_eq!(ledger.row("D1 vanishes").unwrap().outcome, Outcome::Fail);
        assert_eq!(ledger.first_failure().unwrap().name, "case 1");
    }
}

#[test]
fn pointwise_norm_identities() {
    let pts = analyze(&random_unit_field::<f64>(40, 3, 2), 100, 4);
    for p in &pts {
        let a2 = p.norms.alpha_norm.powi(2);
        let geo = p.geodesic_norm.powi(2);
        let tr = p.transverse_norm.powi(2);
        assert!((p.invariants.get(16) - geo).abs() <= 1e-10 * (1.0 + a2));
        assert!((p.invariants.get(6) - tr).abs() <= 1e-10 * (1.0 + a2));
        assert!((p.norms.get(ClassId::C5) - p.delta_eta.abs() / 3f64.sqrt()).abs() <= 1e-10 * (1.0 + a2));
        assert!(p.invariants.full_norm_residual().abs() <= 1e-10 * (1.0 + a2));
    }
}

#[test]
fn classifier_on_generic_field() {
    let pts = analyze(&random_unit_field::<f64>(50, 3, 2), 100, 5);
    let norms: Vec<_> = pts.iter().map(|p| p.norms).collect();
    let report = classify(&norms, DEFAULT_TOL_REL);
    assert_eq!(report.present_classes().len(), 12);
    assert!(NamedType::ALL.iter().all(|t| !report.holds(*t)));
    assert!(report.most_specific().is_empty());
}

#[test]
fn orthogonal_trig_pair_satisfies_printed_xi3() {
    // u = e₁ and v = cos(x¹) e₂ + sin(x¹) e₃ are orthonormal everywhere.
    let g2 = G2Structure::<f64>::model();
    let s = LatticeSampling::subsample(8, 200, 6).unwrap();
    let f = ThreeStructureField::new(g2, ConstantField(Vector7::basis(0)), helix_field::<f64>(0.0, 1), &s).unwrap();
    let k = kuo_report(&f, &s).unwrap();
    assert!(k.axioms_max() < 1e-12);
    assert!(k.xi3_printed < 1e-12);
    assert!((k.min_cross_norm - 1.0).abs() < 1e-12);
    assert!(k.phi3_vs_cross > 0.5);
    let c = three_cosymplectic_check(&f, &s, &DifferentiationContext::exact(), 1e-12).unwrap();
    assert!(!c.three_cosymplectic);
}

#[test]
fn parallel_pair_through_every_basis_pair() {
    let g2 = G2Structure::<f64>::model();
    let s = LatticeSampling::subsample(4, 5, 7).unwrap();
    for i in 0..DIM {
        for j in 0..DIM {
            let (u, v) = (Vector7::basis(i), Vector7::basis(j));
            let f = ThreeStructureField::new(g2.clone(), ConstantField(u), ConstantField(v), &s);
            if i == j {
                assert!(matches!(f, Err(Error::DegeneratePair { .. })));
                continue;
            }
            let f = f.unwrap();
            let c = three_cosymplectic_check(&f, &s, &DifferentiationContext::exact(), 1e-12).unwrap();
            assert_eq!(c.verdict(), "3-cosymplectic");
            assert!(kuo_report(&f, &s).unwrap().axioms_max() < 1e-14);
        }
    }
}

#[test]
fn reports_round_trip_through_json() {
    let g2 = G2Structure::<f64>::model();
    let s = LatticeSampling::subsample(8, 20, 8).unwrap();
    let f = ThreeStructureField::new(g2, random_unit_field::<f64>(60, 2, 1), helix_field::<f64>(0.6, 1), &s).unwrap();
    let k = kuo_report(&f, &s).unwrap();
    let back: KuoReport = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
    assert_eq!(back, k);

    let pts = analyze(&random_unit_field::<f64>(61, 2, 1), 10, 9);
    let ledger = theorem_ledger(&pts, TheoremTolerances::default());
    let text = serde_json::to_string(&ledger).unwrap();
    assert_eq!(serde_json::from_str::<g2contact::chinea_gonzalez::TheoremLedger>(&text).unwrap(), ledger);
}
