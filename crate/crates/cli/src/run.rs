//! Executes the selected suites and assembles a [`Report`].

use g2contact::acms::{standard_structure, AlmostContactMetric};
use g2contact::algebra7::{
    double_cross_residual, four_term_residual, metric_from_three_form, G2Structure, KForm7, Matrix7, Vector7, DIM,
};
use g2contact::chinea_gonzalez::{analyze_field, classify, theorem_ledger, ClassNorms, Decomposer, Outcome, PointAnalysis};
use g2contact::fields::{
    nabla_omega_leibniz, normalize, DifferentiationContext, Field, LatticeSampling, NormalizedField, TrigVectorField,
};
use g2contact::three_structure::{kuo_report, three_cosymplectic_check, ThreeStructureField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Suite};
use crate::error::CliError;
use crate::report::{
    class_stats, AlgebraSection, Assertion, ClassifySection, Metadata, PointRow, Report, StructureClasses,
    ThreeStructureSection,
};

/// Random tuples per algebraic identity.
const RANDOM_SAMPLES: usize = 1000;

/// The seven signed basis products `eᵢ × eⱼ = s e_k`, one-based.
const PRODUCTS: [(usize, usize, f64, usize); 7] =
    [(1, 2, 1.0, 3), (1, 4, 1.0, 5), (1, 6, 1.0, 7), (2, 4, 1.0, 6), (2, 5, -1.0, 7), (3, 4, -1.0, 7), (3, 5, -1.0, 6)];

type UnitField = NormalizedField<TrigVectorField<f64>, f64>;

fn field(config: &RunConfig, name: &str) -> Result<TrigVectorField<f64>, CliError> {
    config.fields.field(name).ok_or_else(|| CliError::Usage(format!("missing field \"{name}\"")))
}

fn unit_field(config: &RunConfig, name: &str, sampling: &LatticeSampling<f64>) -> Result<UnitField, CliError> {
    let g2 = G2Structure::<f64>::model();
    normalize(field(config, name)?, sampling, g2.metric())
        .map_err(|e| CliError::Degenerate(format!("field \"{name}\": {e}")))
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vector7<f64> {
    loop {
        let v = Vector7::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.euclidean_norm();
        if n > 0.1 {
            return v.scale(1.0 / n);
        }
    }
}

fn algebra(config: &RunConfig, xi: Option<&UnitField>, sampling: &LatticeSampling<f64>) -> AlgebraSection {
    let g2 = G2Structure::<f64>::model();
    let e = |k: usize| Vector7::<f64>::basis(k - 1);
    let cross_table = PRODUCTS.iter().fold(0.0f64, |m, &(i, j, s, k)| {
        let p = g2.cross(&e(i), &e(j));
        m.max((p - e(k) * s).max_abs()).max((p + g2.cross(&e(j), &e(i))).max_abs())
    });
    let metric_recovery = metric_from_three_form(g2.phi(), &KForm7::volume())
        .map_or(f64::MAX, |g| (*g.gram() - Matrix7::identity()).max_abs());

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut double_cross, mut four_term, mut axioms) = (0.0f64, 0.0f64, 0.0f64);
    let mut min_nondegeneracy = f64::MAX;
    for _ in 0..RANDOM_SAMPLES {
        let (a, b, c) = (unit_vector(&mut rng), unit_vector(&mut rng), unit_vector(&mut rng));
        double_cross = double_cross.max(double_cross_residual(&g2, &a, &b));
        four_term = four_term.max(four_term_residual(&g2, &a, &b, &c));
        let r = standard_structure(&g2, &a).expect("unit vector").axiom_residuals();
        axioms = axioms.max(r.max());
        min_nondegeneracy = min_nondegeneracy.min(r.nondegeneracy.abs());
    }
    let field_axioms = xi.map(|f| {
        sampling
            .par_map(|_, x| standard_structure(&g2, &f.value(x)).map_or(f64::MAX, |s| s.axiom_residuals().max()))
            .into_iter()
            .fold(0.0, f64::max)
    });
    AlgebraSection {
        cross_table,
        metric_recovery,
        random_samples: RANDOM_SAMPLES,
        double_cross,
        four_term,
        structure_axioms: axioms,
        min_nondegeneracy,
        field_axioms,
    }
}

fn point_rows(points: &[PointAnalysis<f64>]) -> Vec<PointRow> {
    points
        .iter()
        .enumerate()
        .map(|(index, p)| PointRow {
            index,
            point: p.point,
            alpha_norm: p.norms.alpha_norm,
            invariants: p.invariants.i,
            components: p.norms.component,
        })
        .collect()
}

/// Class norms of `∇ωᵢ` for each member of a 3-structure, computed from
/// the derivative of `ωᵢ` itself.
fn three_structure_classes<U, V>(
    field: &ThreeStructureField<U, V, f64>,
    sampling: &LatticeSampling<f64>,
    ctx: &DifferentiationContext<f64>,
    decomposer: &Decomposer<f64>,
    tol: f64,
) -> Result<Vec<StructureClasses>, CliError>
where
    U: Field<f64, Value = Vector7<f64>>,
    V: Field<f64, Value = Vector7<f64>>,
{
    let metric = field.g2().metric().clone();
    (0..3)
        .map(|i| {
            let component = field.structure(i);
            let norms: Vec<ClassNorms<f64>> = sampling.try_par_map(|_, x| {
                let acms = AlmostContactMetric::new(component.value(x), metric.clone());
                let alpha = nabla_omega_leibniz(&component, &metric, x, ctx);
                Ok(decomposer.analyze(&acms, &alpha)?.norms)
            })?;
            Ok(StructureClasses {
                structure: i + 1,
                components: class_stats(norms.iter().map(|n| &n.component)),
                verdicts: classify(&norms, tol),
            })
        })
        .collect()
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let sampling = if config.subsamples == config.resolution.pow(DIM as u32) {
        LatticeSampling::full_grid(config.resolution)?
    } else {
        LatticeSampling::subsample(config.resolution, config.subsamples, config.seed)?
    };
    let tol = &config.tolerances;
    let ctx = DifferentiationContext::exact();
    let g2 = G2Structure::<f64>::model();
    let needs_xi = config.runs(Suite::Classify) || config.runs(Suite::Theorems);
    let xi = if needs_xi || config.fields.fields.contains_key("xi") {
        Some(unit_field(config, "xi", &sampling)?)
    } else {
        None
    };
    let decomposer = Decomposer::new()?;
    let mut assertions = Vec::new();

    let mut algebra_section = None;
    if config.runs(Suite::Algebra) {
        let a = algebra(config, xi.as_ref(), &sampling);
        let s = Suite::Algebra;
        assertions.push(Assertion::at_most(s, "cross-product table", a.cross_table, tol.identities));
        assertions.push(Assertion::at_most(s, "metric recovery", a.metric_recovery, tol.identities));
        assertions.push(Assertion::at_most(s, "double cross identity", a.double_cross, tol.identities));
        assertions.push(Assertion::at_most(s, "four-term identity", a.four_term, tol.identities));
        assertions.push(Assertion::at_most(s, "structure axioms", a.structure_axioms, tol.axioms));
        assertions.push(Assertion::at_least(s, "eta ^ omega^3 nonzero", a.min_nondegeneracy, tol.nondegeneracy));
        if let Some(f) = a.field_axioms {
            assertions.push(Assertion::at_most(s, "structure axioms along xi", f, tol.axioms));
        }
        algebra_section = Some(a);
    }

    let analyses = match (&xi, needs_xi) {
        (Some(f), true) => analyze_field(&g2, f, &sampling, &ctx, &decomposer)?,
        _ => Vec::new(),
    };

    let mut classify_section = None;
    if config.runs(Suite::Classify) {
        let norms: Vec<ClassNorms<f64>> = analyses.iter().map(|p| p.norms).collect();
        let verdicts = classify(&norms, tol.classify);
        let max_residual =
            analyses.iter().map(|p| p.residual_norm / p.norms.alpha_norm.max(1.0)).fold(0.0f64, f64::max);
        let norm_identity = analyses
            .iter()
            .map(|p| p.invariants.full_norm_residual().abs() / p.invariants.norm_sq.max(1.0))
            .fold(0.0f64, f64::max);
        let s = Suite::Classify;
        assertions.push(Assertion::at_most(s, "decomposition residual", max_residual, tol.axioms));
        assertions.push(Assertion::at_most(s, "|alpha|^2 = i1 + i5 + 2 i6 + 2 i16", norm_identity, tol.axioms));
        classify_section = Some(ClassifySection {
            components: class_stats(norms.iter().map(|n| &n.component)),
            most_specific: verdicts.most_specific(),
            verdicts,
            max_residual,
        });
    }

    let mut theorems = None;
    if config.runs(Suite::Theorems) {
        let ledger = theorem_ledger(&analyses, tol.theorem);
        for r in ledger.rows.iter().filter(|r| r.outcome != Outcome::NotExercised) {
            let mut a = Assertion::at_most(Suite::Theorems, &r.name, r.worst, r.tolerance);
            a.passed = r.outcome == Outcome::Pass;
            assertions.push(a);
        }
        theorems = Some(ledger);
    }

    let mut three = None;
    if config.runs(Suite::ThreeStructure) {
        let u = unit_field(config, "u", &sampling)?;
        let v = field(config, "v")?;
        let f = ThreeStructureField::new(g2.clone(), u, v, &sampling)?;
        let kuo = kuo_report(&f, &sampling)?;
        let cosymplectic = three_cosymplectic_check(&f, &sampling, &ctx, tol.identities)?;
        let structures = three_structure_classes(&f, &sampling, &ctx, &decomposer, tol.classify)?;
        let s = Suite::ThreeStructure;
        for (k, v) in kuo.cyclic.iter().enumerate() {
            assertions.push(Assertion::at_most(s, &format!("ac3s{}", k + 1), *v, tol.axioms));
        }
        for (k, v) in kuo.pair.iter().enumerate() {
            assertions.push(Assertion::at_most(s, &format!("ac3s{}", k + 5), *v, tol.axioms));
        }
        for (i, v) in kuo.structures.iter().enumerate() {
            assertions.push(Assertion::at_most(s, &format!("structure {} axioms", i + 1), *v, tol.axioms));
        }
        assertions.push(Assertion::at_most(s, "Reeb orthonormality", kuo.reeb_orthonormality, tol.axioms));
        assertions.push(Assertion::at_most(s, "xi3 = -v + eta1(v) u", kuo.xi3_printed, tol.axioms));
        assertions.push(Assertion::at_most(s, "phi3 = xi3 x", kuo.phi3_vs_cross, tol.axioms));
        three = Some(ThreeStructureSection { kuo, cosymplectic, structures });
    }

    let first_failure = assertions.iter().find(|a| !a.passed).map(Assertion::label);
    Ok(Report {
        metadata: Metadata {
            tool: "g2contact".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: config.seed,
            resolution: config.resolution,
            subsamples: config.subsamples,
            suites: config.suites.clone(),
            tolerances: *tol,
            derivatives: "exact".into(),
        },
        assertions,
        first_failure,
        algebra: algebra_section,
        points: if needs_xi { point_rows(&analyses) } else { Vec::new() },
        classify: classify_section,
        theorems,
        three_structure: three,
    })
}
