use serde::{Deserialize, Serialize};

use super::classes::ClassId;
use super::decompose::{ClassNorms, Decomposer};
use super::invariants::QuadraticInvariants;
use crate::acms::{normality_from_jet, standard_structure, AlmostContact};
use crate::algebra7::{G2Structure, Vector7, DIM};
use crate::error::Result;
use crate::fields::{nabla_omega_jet, DifferentiationContext, Field, Jet, LatticeSampling};
use crate::scalar::Real;

/// Pointwise quantities entering the containment theorem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointAnalysis<T> {
    pub point: [f64; DIM],
    pub norms: ClassNorms<T>,
    /// `‖α - Σ βᵢ‖`
    pub residual_norm: T,
    pub invariants: QuadraticInvariants<T>,
    /// `δη = -div ξ`
    pub delta_eta: T,
    /// `‖∇_ξ ξ‖`
    pub geodesic_norm: T,
    /// `(Σ_{j ≤ 6} ‖∇_{e_j} ξ‖²)^{1/2}` over an orthonormal frame of `ξ^⊥`.
    pub transverse_norm: T,
    /// Frobenius norm of `N⁽¹⁾`.
    pub n1_norm: T,
}

/// Analyzes `∇ω` of the structure induced by the unit field `xi` at `x`.
pub fn analyze_point<T, F>(
    g2: &G2Structure<T>,
    xi: &F,
    x: &Vector7<T>,
    ctx: &DifferentiationContext<T>,
    decomposer: &Decomposer<T>,
) -> Result<PointAnalysis<T>>
where
    T: Real,
    F: Field<T, Value = Vector7<T>> + ?Sized,
{
    let jet = ctx.jet(xi, x);
    let acms = standard_structure(g2, &jet.value)?;
    let alpha = nabla_omega_jet(g2, &jet);
    let pd = decomposer.analyze(&acms, &alpha)?;
    let g = g2.metric();
    let along = (0..DIM).fold(Vector7::zero(), |acc, a| acc + jet.partials[a] * jet.value.0[a]);
    let transverse_sq = (0..DIM - 1).fold(T::zero(), |acc, j| {
        let e = pd.frame.column(j);
        let d = (0..DIM).fold(Vector7::zero(), |s, a| s + jet.partials[a] * e.0[a]);
        acc + g.norm_sq(&d)
    });
    let div = (0..DIM).fold(T::zero(), |s, a| s + jet.partials[a].0[a]);
    let structure_jet = Jet {
        value: AlmostContact::from_xi(g2, &jet.value),
        partials: jet.partials.map(|d| AlmostContact::from_xi(g2, &d)),
    };
    let n1_norm = normality_from_jet(&structure_jet).n1.norm();
    Ok(PointAnalysis {
        point: x.to_f64(),
        norms: pd.norms,
        residual_norm: pd.residual_norm,
        invariants: pd.invariants,
        delta_eta: -div,
        geodesic_norm: g.norm(&along),
        transverse_norm: transverse_sq.sqrt(),
        n1_norm,
    })
}

/// [`analyze_point`] at every sample, in parallel.
pub fn analyze_field<T, F>(
    g2: &G2Structure<T>,
    xi: &F,
    sampling: &LatticeSampling<T>,
    ctx: &DifferentiationContext<T>,
    decomposer: &Decomposer<T>,
) -> Result<Vec<PointAnalysis<T>>>
where
    T: Real,
    F: Field<T, Value = Vector7<T>> + ?Sized,
{
    sampling.try_par_map(|_, x| analyze_point(g2, xi, x, ctx, decomposer))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    NotExercised,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::NotExercised => "NOT EXERCISED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub name: String,
    pub outcome: Outcome,
    /// Largest offending ratio, or the quantity that decided the outcome.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoremTolerances {
    /// Component threshold relative to `‖∇ω‖`.
    pub component_rel: f64,
    /// Absolute threshold for pointwise hypotheses (`δη`, `∇_ξ ξ`, `N⁽¹⁾`).
    pub hypothesis_abs: f64,
    /// A locus quantity below this (relative) counts as vanishing.
    pub locus_zero: f64,
    /// A locus quantity above this (relative) counts as present.
    pub locus_present: f64,
    /// `‖∇ω‖` at or below this marks a parallel point.
    pub parallel: f64,
}

impl Default for TheoremTolerances {
    fn default() -> Self {
        Self { component_rel: 1e-9, hypothesis_abs: 1e-10, locus_zero: 1e-9, locus_present: 1e-6, parallel: 1e-12 }
    }
}

/// Pointwise hypotheses holding on the whole sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFlags {
    pub divergence_free: bool,
    pub geodesic: bool,
    pub normal: bool,
    pub non_parallel_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremLedger {
    pub flags: FieldFlags,
    pub tolerances: TheoremTolerances,
    pub rows: Vec<TheoremRow>,
}

impl TheoremLedger {
    pub fn row(&self, name: &str) -> Option<&TheoremRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn first_failure(&self) -> Option<&TheoremRow> {
        self.rows.iter().find(|r| r.outcome == Outcome::Fail)
    }
}

/// The six containment cases: name, hypotheses (divergence free, geodesic,
/// normal) and the allowed classes.
pub const CASES: [(&str, [bool; 3], &[usize]); 6] = [
    ("case 1", [false, false, false], &[5, 6, 7, 8, 9, 10, 12]),
    ("case 2", [true, false, false], &[6, 7, 8, 9, 10, 12]),
    ("case 3", [false, true, false], &[5, 6, 7, 8, 9, 10]),
    ("case 4", [true, true, false], &[6, 7, 8, 9, 10]),
    ("case 5", [false, false, true], &[5, 6, 7, 8]),
    ("case 6", [true, false, true], &[6, 7, 8]),
];

fn vanishing_row<T: Real>(
    name: &str,
    classes: &[usize],
    points: &[&PointAnalysis<T>],
    tol: f64,
) -> TheoremRow {
    if points.is_empty() {
        return TheoremRow {
            name: name.into(),
            outcome: Outcome::NotExercised,
            worst: 0.0,
            tolerance: tol,
            detail: "no non-parallel sample".into(),
        };
    }
    let mut worst = 0.0f64;
    let mut worst_class = 0;
    for p in points {
        let a = p.norms.alpha_norm.to_f64_lossy();
        for &k in classes {
            let r = p.norms.component[k - 1].to_f64_lossy() / a;
            if r > worst {
                worst = r;
                worst_class = k;
            }
        }
    }
    let outcome = if worst <= tol { Outcome::Pass } else { Outcome::Fail };
    let detail = if outcome == Outcome::Pass {
        format!("{} samples", points.len())
    } else {
        format!("|beta{worst_class}| / |nabla omega| = {worst:.3e}")
    };
    TheoremRow { name: name.into(), outcome, worst, tolerance: tol, detail }
}

fn locus_row<T: Real>(
    name: &str,
    points: &[&PointAnalysis<T>],
    tol: &TheoremTolerances,
    lhs: impl Fn(&PointAnalysis<T>) -> f64,
    rhs: impl Fn(&PointAnalysis<T>) -> f64,
) -> TheoremRow {
    let mut mismatches = 0;
    let mut worst = 0.0f64;
    let (mut both_present, mut both_zero) = (0, 0);
    for p in points {
        let a = p.norms.alpha_norm.to_f64_lossy();
        let (x, y) = (lhs(p) / a, rhs(p) / a);
        let present = |v: f64| v > tol.locus_present;
        let zero = |v: f64| v < tol.locus_zero;
        if (present(x) && zero(y)) || (zero(x) && present(y)) {
            mismatches += 1;
            worst = worst.max(x.max(y));
        }
        if present(x) && present(y) {
            both_present += 1;
        }
        if zero(x) && zero(y) {
            both_zero += 1;
        }
    }
    let outcome = if points.is_empty() {
        Outcome::NotExercised
    } else if mismatches == 0 {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    TheoremRow {
        name: name.into(),
        outcome,
        worst,
        tolerance: tol.locus_zero,
        detail: format!("{mismatches} mismatched, {both_present} both present, {both_zero} both vanishing"),
    }
}

/// Field-level hypotheses from a set of point analyses.
pub fn field_flags<T: Real>(points: &[PointAnalysis<T>], tol: &TheoremTolerances) -> FieldFlags {
    let all = |f: &dyn Fn(&PointAnalysis<T>) -> bool| points.iter().all(f);
    FieldFlags {
        divergence_free: all(&|p| p.delta_eta.to_f64_lossy().abs() <= tol.hypothesis_abs),
        geodesic: all(&|p| p.geodesic_norm.to_f64_lossy() <= tol.hypothesis_abs),
        normal: all(&|p| p.n1_norm.to_f64_lossy() <= tol.hypothesis_abs),
        non_parallel_points: points.iter().filter(|p| p.norms.alpha_norm.to_f64_lossy() > tol.parallel).count(),
    }
}

/// Checks the containment cases whose hypotheses the field satisfies, and
/// the pointwise lemmas behind them.
pub fn theorem_ledger<T: Real>(points: &[PointAnalysis<T>], tol: TheoremTolerances) -> TheoremLedger {
    let flags = field_flags(points, &tol);
    let moving: Vec<&PointAnalysis<T>> =
        points.iter().filter(|p| p.norms.alpha_norm.to_f64_lossy() > tol.parallel).collect();
    let have = [flags.divergence_free, flags.geodesic, flags.normal];
    let mut rows = Vec::new();
    for (name, needs, allowed) in CASES {
        let excluded: Vec<usize> = (1..=12).filter(|k| !allowed.contains(k)).collect();
        let applies = needs.iter().zip(have).all(|(n, h)| !n || h);
        if applies {
            rows.push(vanishing_row(name, &excluded, &moving, tol.component_rel));
        } else {
            rows.push(TheoremRow {
                name: name.into(),
                outcome: Outcome::NotExercised,
                worst: 0.0,
                tolerance: tol.component_rel,
                detail: "hypotheses not met by this field".into(),
            });
        }
    }
    let members = |c: ClassId| c.members().iter().map(|m| m.index().expect("irreducible") + 1).collect::<Vec<_>>();
    rows.push(vanishing_row("D1 vanishes", &members(ClassId::D1), &moving, tol.component_rel));
    rows.push(vanishing_row("beta11 vanishes", &[11], &moving, tol.component_rel));
    let f = |v: T| v.to_f64_lossy();
    let beta = |k: usize| move |p: &PointAnalysis<T>| f(p.norms.component[k - 1]);
    rows.push(locus_row("beta12 <=> i16", &moving, &tol, beta(12), |p| f(p.invariants.get(16)).max(0.0).sqrt()));
    rows.push(locus_row("i16 <=> nabla_xi xi", &moving, &tol, |p| f(p.invariants.get(16)).max(0.0).sqrt(), |p| {
        f(p.geodesic_norm)
    }));
    rows.push(locus_row("beta5 <=> delta eta", &moving, &tol, beta(5), |p| f(p.delta_eta).abs()));
    rows.push(locus_row("beta11 <=> beta12", &moving, &tol, beta(11), beta(12)));
    rows.push(locus_row("D1 <=> transverse nabla xi", &moving, &tol, |p| f(p.norms.get(ClassId::D1)), |p| {
        f(p.transverse_norm)
    }));
    rows.push(locus_row("i6 <=> transverse nabla xi", &moving, &tol, |p| f(p.invariants.get(6)).max(0.0).sqrt(), |p| {
        f(p.transverse_norm)
    }));
    TheoremLedger { flags, tolerances: tol, rows }
}
