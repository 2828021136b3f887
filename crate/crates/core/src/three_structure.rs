//! Almost contact metric 3-structures built from two nowhere parallel unit
//! vector fields `u`, `v`:
//!
//! `ξ₁ = u`, `ξ₂ = u × v / |u × v|`, `φᵢ = ξᵢ ×`, `ηᵢ = g(ξᵢ, ·)` for
//! `i = 1, 2`, and `φ₃ = φ₁φ₂ - η₂ ⊗ ξ₁`, `ξ₃ = φ₁ξ₂`, `η₃ = η₁ ∘ φ₂`.
//!
//! The third structure is an almost contact metric structure but in general
//! not the one induced by `ξ₃`: `φ₃ ≠ ξ₃ ×`.

use serde::{Deserialize, Serialize};

use crate::acms::{normality_from_jet, AlmostContact, AlmostContactMetric, AxiomResiduals};
use crate::algebra7::{G2Structure, Matrix7, Vector7, DIM};
use crate::error::{Error, Result};
use crate::fields::{
    exterior_derivative, normalize_jet, DifferentiationContext, EtaField, Field, Jet, LatticeSampling, OmegaField,
};
use crate::scalar::Real;

const DEGENERATE_PAIR_TOL: f64 = 1e-8;
const UNIT_TOL: f64 = 1e-10;

/// `(φ₁φ₂ - η₂ ⊗ ξ₁, φ₁ξ₂, η₁ ∘ φ₂)`.
pub fn compose<T: Real>(a: &AlmostContact<T>, b: &AlmostContact<T>) -> AlmostContact<T> {
    AlmostContact {
        phi: a.phi.mul_mat(&b.phi) - Matrix7::rank_one(&b.eta, &a.xi),
        xi: a.phi.mul_vec(&b.xi),
        eta: a.eta.compose(&b.phi),
    }
}

fn compose_derivative<T: Real>(
    a: &AlmostContact<T>,
    da: &AlmostContact<T>,
    b: &AlmostContact<T>,
    db: &AlmostContact<T>,
) -> AlmostContact<T> {
    AlmostContact {
        phi: da.phi.mul_mat(&b.phi) + a.phi.mul_mat(&db.phi)
            - Matrix7::rank_one(&db.eta, &a.xi)
            - Matrix7::rank_one(&b.eta, &da.xi),
        xi: da.phi.mul_vec(&b.xi) + a.phi.mul_vec(&db.xi),
        eta: da.eta.compose(&b.phi) + a.eta.compose(&db.phi),
    }
}

/// Three almost contact metric structures sharing one metric, at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostContact3<T> {
    pub structures: [AlmostContactMetric<T>; 3],
    pub u: Vector7<T>,
    pub v: Vector7<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicResiduals<T> {
    pub permutation: [usize; 3],
    /// `ηᵢ(ξⱼ) = ηⱼ(ξᵢ) = 0`
    pub ac3s1: T,
    /// `φᵢξⱼ = -φⱼξᵢ = ξₖ`
    pub ac3s2: T,
    /// `ηᵢ ∘ φⱼ = -ηⱼ ∘ φᵢ = ηₖ`
    pub ac3s3: T,
    /// `φᵢφⱼ - ηⱼ ⊗ ξᵢ = -φⱼφᵢ + ηᵢ ⊗ ξⱼ = φₖ`
    pub ac3s4: T,
}

impl<T: Real> CyclicResiduals<T> {
    pub fn max(&self) -> T {
        self.ac3s1.max(self.ac3s2).max(self.ac3s3).max(self.ac3s4)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KuoResiduals<T> {
    pub cyclic: [CyclicResiduals<T>; 3],
    /// `η₁(ξ₂) = η₂(ξ₁) = 0`
    pub ac3s5: T,
    /// `φ₁ξ₂ = -φ₂ξ₁`
    pub ac3s6: T,
    /// `η₁ ∘ φ₂ = -η₂ ∘ φ₁`
    pub ac3s7: T,
    /// `φ₁φ₂ - η₂ ⊗ ξ₁ = -φ₂φ₁ + η₁ ⊗ ξ₂`
    pub ac3s8: T,
    pub structures: [AxiomResiduals<T>; 3],
    /// `max |g(ξᵢ, ξⱼ) - δᵢⱼ|`
    pub reeb_orthonormality: T,
    /// `|ξ₃ + v - η₁(v)u|`, which vanishes only where `u ⊥ v`.
    pub xi3_printed: T,
    /// `| |u × v| ξ₃ + v - η₁(v)u |`
    pub xi3_normalized: T,
    /// `|φ₃ - ξ₃ ×|`
    pub phi3_vs_cross: T,
}

impl<T: Real> KuoResiduals<T> {
    /// Largest residual among the axioms (ac3s1)–(ac3s8), the single
    /// structure axioms and Reeb orthonormality.
    pub fn axioms_max(&self) -> T {
        let c = self.cyclic.iter().fold(T::zero(), |m, r| m.max(r.max()));
        let s = self.structures.iter().fold(T::zero(), |m, r| m.max(r.max()));
        c.max(self.ac3s5).max(self.ac3s6).max(self.ac3s7).max(self.ac3s8).max(s).max(self.reeb_orthonormality)
    }
}

impl<T: Real> AlmostContact3<T> {
    /// Builds the 3-structure from a `g`-unit `u` and any `v` not parallel
    /// to it. `point` is only used in the error.
    pub fn build(g2: &G2Structure<T>, u: &Vector7<T>, v: &Vector7<T>, point: [f64; DIM]) -> Result<Self> {
        let g = g2.metric();
        let nu = g.norm_sq(u);
        if (nu - T::one()).abs() > T::lit(UNIT_TOL) {
            return Err(Error::XiNotNormalized { norm_sq: nu.to_f64_lossy() });
        }
        let w = g2.cross(u, v);
        let n = g.norm(&w);
        if !(n > T::lit(DEGENERATE_PAIR_TOL)) {
            return Err(Error::DegeneratePair { norm: n.to_f64_lossy(), point });
        }
        let s1 = AlmostContact::from_xi(g2, u);
        let s2 = AlmostContact::from_xi(g2, &(w * (T::one() / n)));
        let s3 = compose(&s1, &s2);
        let m = |s| AlmostContactMetric::new(s, g.clone());
        Ok(Self { structures: [m(s1), m(s2), m(s3)], u: *u, v: *v })
    }

    pub fn structure(&self, i: usize) -> &AlmostContactMetric<T> {
        &self.structures[i]
    }

    pub fn kuo_axioms(&self, g2: &G2Structure<T>) -> KuoResiduals<T> {
        let s = |i: usize| &self.structures[i].structure;
        let cyclic = [(0, 1, 2), (1, 2, 0), (2, 0, 1)].map(|(i, j, k)| {
            let (a, b, c) = (s(i), s(j), s(k));
            CyclicResiduals {
                permutation: [i + 1, j + 1, k + 1],
                ac3s1: a.eta.apply(&b.xi).abs().max(b.eta.apply(&a.xi).abs()),
                ac3s2: (a.phi.mul_vec(&b.xi) - c.xi).max_abs().max((b.phi.mul_vec(&a.xi) + c.xi).max_abs()),
                ac3s3: (a.eta.compose(&b.phi) - c.eta).max_abs().max((b.eta.compose(&a.phi) + c.eta).max_abs()),
                ac3s4: (a.phi.mul_mat(&b.phi) - Matrix7::rank_one(&b.eta, &a.xi) - c.phi)
                    .max_abs()
                    .max((Matrix7::rank_one(&a.eta, &b.xi) - b.phi.mul_mat(&a.phi) - c.phi).max_abs()),
            }
        });
        let (a, b) = (s(0), s(1));
        let ac3s8 = (a.phi.mul_mat(&b.phi) - Matrix7::rank_one(&b.eta, &a.xi) + b.phi.mul_mat(&a.phi)
            - Matrix7::rank_one(&a.eta, &b.xi))
        .max_abs();
        let g = g2.metric();
        let xis = [s(0).xi, s(1).xi, s(2).xi];
        let mut reeb = T::zero();
        for (i, x) in xis.iter().enumerate() {
            for (j, y) in xis.iter().enumerate() {
                let d = if i == j { T::one() } else { T::zero() };
                reeb = reeb.max((g.inner(x, y) - d).abs());
            }
        }
        let eta1_v = a.eta.apply(&self.v);
        let tail = self.v - self.u * eta1_v;
        let n = g.norm(&g2.cross(&self.u, &self.v));
        KuoResiduals {
            cyclic,
            ac3s5: a.eta.apply(&b.xi).abs().max(b.eta.apply(&a.xi).abs()),
            ac3s6: (a.phi.mul_vec(&b.xi) + b.phi.mul_vec(&a.xi)).max_abs(),
            ac3s7: (a.eta.compose(&b.phi) + b.eta.compose(&a.phi)).max_abs(),
            ac3s8,
            structures: [0, 1, 2].map(|i| self.structures[i].axiom_residuals()),
            reeb_orthonormality: reeb,
            xi3_printed: (xis[2] + tail).max_abs(),
            xi3_normalized: (xis[2] * n + tail).max_abs(),
            phi3_vs_cross: (s(2).phi - g2.cross_matrix(&xis[2])).max_abs(),
        }
    }
}

/// The 3-structure induced by unit fields `u` and `v` (not necessarily
/// orthogonal).
#[derive(Clone, Debug)]
pub struct ThreeStructureField<U, V, T> {
    g2: G2Structure<T>,
    u: U,
    v: V,
}

/// Structure `index` (0, 1 or 2) of a [`ThreeStructureField`] as a field.
#[derive(Debug)]
pub struct StructureComponent<'a, U, V, T> {
    parent: &'a ThreeStructureField<U, V, T>,
    index: usize,
}

impl<U, V, T> Clone for StructureComponent<'_, U, V, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<U, V, T> Copy for StructureComponent<'_, U, V, T> {}

impl<T, U, V> ThreeStructureField<U, V, T>
where
    T: Real,
    U: Field<T, Value = Vector7<T>>,
    V: Field<T, Value = Vector7<T>>,
{
    /// Checks at every sample that `u` is unit and that `u`, `v` are not
    /// parallel.
    pub fn new(g2: G2Structure<T>, u: U, v: V, sampling: &LatticeSampling<T>) -> Result<Self> {
        let f = Self { g2, u, v };
        sampling.try_par_map(|_, x| f.at(x).map(|_| ()))?;
        Ok(f)
    }

    pub fn g2(&self) -> &G2Structure<T> {
        &self.g2
    }

    pub fn at(&self, x: &Vector7<T>) -> Result<AlmostContact3<T>> {
        AlmostContact3::build(&self.g2, &self.u.value(x), &self.v.value(x), x.to_f64())
    }

    pub fn structure(&self, index: usize) -> StructureComponent<'_, U, V, T> {
        assert!(index < 3, "structure index {index}");
        StructureComponent { parent: self, index }
    }

    /// Exact 1-jets of the three structures.
    pub fn jets(&self, x: &Vector7<T>) -> [Jet<AlmostContact<T>>; 3] {
        let ju = self.u.jet(x);
        let jv = self.v.jet(x);
        let c = |a: &Vector7<T>, b: &Vector7<T>| self.g2.cross(a, b);
        let raw = Jet {
            value: c(&ju.value, &jv.value),
            partials: std::array::from_fn(|a| c(&ju.partials[a], &jv.value) + c(&ju.value, &jv.partials[a])),
        };
        let j2 = normalize_jet(self.g2.metric(), raw);
        let lift = |j: &Jet<Vector7<T>>| Jet {
            value: AlmostContact::from_xi(&self.g2, &j.value),
            partials: j.partials.map(|d| AlmostContact::from_xi(&self.g2, &d)),
        };
        let s1 = lift(&ju);
        let s2 = lift(&j2);
        let s3 = Jet {
            value: compose(&s1.value, &s2.value),
            partials: std::array::from_fn(|a| {
                compose_derivative(&s1.value, &s1.partials[a], &s2.value, &s2.partials[a])
            }),
        };
        [s1, s2, s3]
    }

    fn value_of(&self, index: usize, x: &Vector7<T>) -> AlmostContact<T> {
        let u = self.u.value(x);
        let w = self.g2.cross(&u, &self.v.value(x));
        let w = w * (T::one() / self.g2.metric().norm(&w));
        let s1 = AlmostContact::from_xi(&self.g2, &u);
        let s2 = AlmostContact::from_xi(&self.g2, &w);
        match index {
            0 => s1,
            1 => s2,
            _ => compose(&s1, &s2),
        }
    }
}

impl<T, U, V> Field<T> for StructureComponent<'_, U, V, T>
where
    T: Real,
    U: Field<T, Value = Vector7<T>>,
    V: Field<T, Value = Vector7<T>>,
{
    type Value = AlmostContact<T>;

    fn value(&self, x: &Vector7<T>) -> AlmostContact<T> {
        self.parent.value_of(self.index, x)
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> AlmostContact<T> {
        self.jet(x).partials[axis]
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<AlmostContact<T>> {
        let [a, b, c] = self.parent.jets(x);
        [a, b, c].into_iter().nth(self.index).expect("index below 3")
    }
}

/// Maxima of the axiom residuals over a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KuoReport {
    /// `[ac3s1, ac3s2, ac3s3, ac3s4]` maximized over samples and cyclic
    /// permutations.
    pub cyclic: [f64; 4],
    /// `[ac3s5, ac3s6, ac3s7, ac3s8]`
    pub pair: [f64; 4],
    /// Largest single-structure axiom residual, per structure.
    pub structures: [f64; 3],
    /// Smallest `|η ∧ ω³|` coefficient, per structure.
    pub nondegeneracy_min: [f64; 3],
    pub reeb_orthonormality: f64,
    pub xi3_printed: f64,
    pub xi3_normalized: f64,
    pub phi3_vs_cross: f64,
    /// Smallest `|u × v|`.
    pub min_cross_norm: f64,
}

impl KuoReport {
    pub fn axioms_max(&self) -> f64 {
        self.cyclic
            .iter()
            .chain(&self.pair)
            .chain(&self.structures)
            .fold(self.reeb_orthonormality, |m, v| m.max(*v))
    }
}

pub fn kuo_report<T, U, V>(field: &ThreeStructureField<U, V, T>, sampling: &LatticeSampling<T>) -> Result<KuoReport>
where
    T: Real,
    U: Field<T, Value = Vector7<T>>,
    V: Field<T, Value = Vector7<T>>,
{
    let per_point = sampling.try_par_map(|_, x| {
        let s = field.at(x)?;
        let n = field.g2.metric().norm(&field.g2.cross(&s.u, &s.v)).to_f64_lossy();
        Ok((s.kuo_axioms(&field.g2), n))
    })?;
    let f = |v: T| v.to_f64_lossy();
    let mut r = KuoReport {
        cyclic: [0.0; 4],
        pair: [0.0; 4],
        structures: [0.0; 3],
        nondegeneracy_min: [f64::INFINITY; 3],
        reeb_orthonormality: 0.0,
        xi3_printed: 0.0,
        xi3_normalized: 0.0,
        phi3_vs_cross: 0.0,
        min_cross_norm: f64::INFINITY,
    };
    for (k, n) in &per_point {
        for c in &k.cyclic {
            for (m, v) in r.cyclic.iter_mut().zip([c.ac3s1, c.ac3s2, c.ac3s3, c.ac3s4]) {
                *m = m.max(f(v));
            }
        }
        for (m, v) in r.pair.iter_mut().zip([k.ac3s5, k.ac3s6, k.ac3s7, k.ac3s8]) {
            *m = m.max(f(v));
        }
        for i in 0..3 {
            let a = &k.structures[i];
            let single = a
                .contact
                .phi_squared
                .max(a.contact.eta_xi)
                .max(a.contact.phi_xi)
                .max(a.contact.eta_phi)
                .max(a.compatibility)
                .max(a.duality)
                .max(a.fundamental_form);
            r.structures[i] = r.structures[i].max(f(single));
            r.nondegeneracy_min[i] = r.nondegeneracy_min[i].min(f(a.nondegeneracy).abs());
        }
        r.reeb_orthonormality = r.reeb_orthonormality.max(f(k.reeb_orthonormality));
        r.xi3_printed = r.xi3_printed.max(f(k.xi3_printed));
        r.xi3_normalized = r.xi3_normalized.max(f(k.xi3_normalized));
        r.phi3_vs_cross = r.phi3_vs_cross.max(f(k.phi3_vs_cross));
        r.min_cross_norm = r.min_cross_norm.min(*n);
    }
    Ok(r)
}

/// Maxima over a sample of the quantities that vanish for a 3-cosymplectic
/// structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeCosymplecticReport {
    /// `max |dωᵢ|` per structure.
    pub d_omega: [f64; 3],
    /// `max |dηᵢ|`
    pub d_eta: [f64; 3],
    /// `max |N⁽¹⁾ᵢ|`
    pub n1: [f64; 3],
    /// `max |∇ξᵢ|`
    pub nabla_xi: [f64; 3],
    /// `max |∇φ₃|`
    pub nabla_phi3: f64,
    pub tolerance: f64,
    pub three_cosymplectic: bool,
}

impl ThreeCosymplecticReport {
    pub fn verdict(&self) -> &'static str {
        if self.three_cosymplectic {
            "3-cosymplectic"
        } else {
            "not 3-cosymplectic"
        }
    }
}

pub fn three_cosymplectic_check<T, U, V>(
    field: &ThreeStructureField<U, V, T>,
    sampling: &LatticeSampling<T>,
    ctx: &DifferentiationContext<T>,
    tolerance: f64,
) -> Result<ThreeCosymplecticReport>
where
    T: Real,
    U: Field<T, Value = Vector7<T>>,
    V: Field<T, Value = Vector7<T>>,
{
    let metric = field.g2.metric().clone();
    let per_point = sampling.try_par_map(|_, x| {
        let mut out = [[0.0f64; 4]; 3];
        let mut nabla_phi3 = 0.0f64;
        for (i, row) in out.iter_mut().enumerate() {
            let s = field.structure(i);
            let d_omega = exterior_derivative(&OmegaField::new(s, metric.clone()), x, ctx)?;
            let d_eta = exterior_derivative(&EtaField(s), x, ctx)?;
            let jet = ctx.jet(&s, x);
            let n1 = normality_from_jet(&jet).n1.norm();
            let nabla_xi = jet.partials.iter().fold(T::zero(), |m, d| m.max(d.xi.max_abs()));
            if i == 2 {
                nabla_phi3 = jet.partials.iter().fold(0.0, |m, d| m.max(d.phi.max_abs().to_f64_lossy()));
            }
            *row = [d_omega.max_abs(), d_eta.max_abs(), n1, nabla_xi].map(|v| v.to_f64_lossy());
        }
        Ok((out, nabla_phi3))
    })?;
    let mut r = ThreeCosymplecticReport {
        d_omega: [0.0; 3],
        d_eta: [0.0; 3],
        n1: [0.0; 3],
        nabla_xi: [0.0; 3],
        nabla_phi3: 0.0,
        tolerance,
        three_cosymplectic: false,
    };
    for (out, p3) in &per_point {
        for i in 0..3 {
            r.d_omega[i] = r.d_omega[i].max(out[i][0]);
            r.d_eta[i] = r.d_eta[i].max(out[i][1]);
            r.n1[i] = r.n1[i].max(out[i][2]);
            r.nabla_xi[i] = r.nabla_xi[i].max(out[i][3]);
        }
        r.nabla_phi3 = r.nabla_phi3.max(*p3);
    }
    r.three_cosymplectic =
        r.d_omega.iter().chain(&r.d_eta).chain(&r.n1).all(|v| *v <= tolerance) && r.nabla_phi3 <= tolerance;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::families::random_unit_field;
    use crate::fields::{ConstantField, NormalizedField, TrigVectorField};

    fn e(i: usize) -> Vector7<f64> {
        Vector7::basis(i)
    }

    #[test]
    fn basis_pair() {
        let g2 = G2Structure::model();
        let s = AlmostContact3::build(&g2, &e(0), &e(1), [0.0; DIM]).unwrap();
        assert_eq!(*s.structure(1).xi(), e(2));
        assert_eq!(*s.structure(2).xi(), -e(1));
        let k = s.kuo_axioms(&g2);
        assert!(k.axioms_max() < 1e-12);
        assert!(k.xi3_printed < 1e-12);
        assert!(k.phi3_vs_cross > 1.0);
    }

    #[test]
    fn non_orthogonal_pair() {
        let g2 = G2Structure::model();
        let v = (e(0) + e(1)).scale(1.0 / 2f64.sqrt());
        let s = AlmostContact3::build(&g2, &e(0), &v, [0.0; DIM]).unwrap();
        let k = s.kuo_axioms(&g2);
        assert!(k.axioms_max() < 1e-12);
        assert!(k.xi3_normalized < 1e-12);
        assert!(k.xi3_printed > 0.1);
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let g2 = G2Structure::model();
        let err = AlmostContact3::build(&g2, &e(0), &e(0).scale(-2.0), [1.0; DIM]).unwrap_err();
        assert!(matches!(err, Error::DegeneratePair { point, .. } if point == [1.0; DIM]));
    }

    #[test]
    fn constant_pair_is_three_cosymplectic() {
        let g2 = G2Structure::model();
        let s = LatticeSampling::subsample(8, 50, 1).unwrap();
        let f = ThreeStructureField::new(g2, ConstantField(e(0)), ConstantField(e(1)), &s).unwrap();
        let r = three_cosymplectic_check(&f, &s, &DifferentiationContext::exact(), 1e-12).unwrap();
        assert!(r.three_cosymplectic);
        assert_eq!(r.nabla_phi3, 0.0);
    }

    #[test]
    fn product_rule_matches_finite_differences() {
        let g2 = G2Structure::model();
        let s = LatticeSampling::subsample(8, 10, 2).unwrap();
        let u = random_unit_field::<f64>(1, 3, 2);
        let v: NormalizedField<TrigVectorField<f64>, f64> = random_unit_field(2, 3, 2);
        let f = ThreeStructureField::new(g2, u, v, &s).unwrap();
        let fd = DifferentiationContext::finite_difference(1e-3);
        for x in s.points() {
            for i in 0..3 {
                let a = f.structure(i).jet(&x);
                let b = fd.jet(&f.structure(i), &x);
                for k in 0..DIM {
                    let d = a.partials[k] - b.partials[k];
                    assert!(d.phi.max_abs().max(d.xi.max_abs()).max(d.eta.max_abs()) < 1e-7);
                }
            }
        }
        let r = three_cosymplectic_check(&f, &s, &DifferentiationContext::exact(), 1e-12).unwrap();
        assert!(!r.three_cosymplectic);
        assert!(r.d_omega[0] > 1e-4);
    }
}
