//! Almost contact metric structures and their normality tensors.
//!
//! A unit vector field `ξ` on a 7-manifold with G₂-structure induces
//! `φ = ξ × ·`, `η = g(ξ, ·)` and `ω(X, Y) = g(X, φY) = -(ξ ⌟ φ₃)(X, Y)`.

use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;

use crate::algebra7::{Covector7, G2Structure, KForm7, Matrix7, Metric7, Vector7, DIM};
use crate::error::{Error, Result};
use crate::fields::{DifferentiationContext, Field, Jet, LatticeSampling};
use crate::scalar::Real;

const XI_NORM_TOL: f64 = 1e-10;
const RANK_REL_TOL: f64 = 1e-8;

/// `(φ, ξ, η)` at a point, or a linear combination of such triples (partial
/// derivatives, finite-difference stencils).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlmostContact<T> {
    pub phi: Matrix7<T>,
    pub xi: Vector7<T>,
    pub eta: Covector7<T>,
}

impl<T: Real> AlmostContact<T> {
    pub fn zero() -> Self {
        Self { phi: Matrix7::zero(), xi: Vector7::zero(), eta: Covector7::zero() }
    }

    /// `φ = ξ ×`, `η = g(ξ, ·)` without the unit-length check.
    pub fn from_xi(s: &G2Structure<T>, xi: &Vector7<T>) -> Self {
        Self { phi: s.cross_matrix(xi), xi: *xi, eta: s.metric().lower(xi) }
    }

    /// Residuals of the almost contact axioms, metric-free.
    pub fn residuals(&self) -> ContactResiduals<T> {
        let id = Matrix7::identity();
        let phi2 = self.phi.mul_mat(&self.phi);
        let sv = self.phi.singular_values();
        let rank = sv.iter().filter(|s| **s > T::lit(RANK_REL_TOL) * sv[0]).count();
        ContactResiduals {
            phi_squared: (phi2 + id - Matrix7::rank_one(&self.eta, &self.xi)).max_abs(),
            eta_xi: (self.eta.apply(&self.xi) - T::one()).abs(),
            phi_xi: self.phi.mul_vec(&self.xi).max_abs(),
            eta_phi: self.eta.compose(&self.phi).max_abs(),
            rank,
        }
    }
}

impl<T: Real> Add for AlmostContact<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { phi: self.phi + o.phi, xi: self.xi + o.xi, eta: self.eta + o.eta }
    }
}

impl<T: Real> Sub for AlmostContact<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { phi: self.phi - o.phi, xi: self.xi - o.xi, eta: self.eta - o.eta }
    }
}

impl<T: Real> Mul<T> for AlmostContact<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self { phi: self.phi * s, xi: self.xi * s, eta: self.eta * s }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactResiduals<T> {
    /// `max |φ² + I - η ⊗ ξ|`
    pub phi_squared: T,
    /// `|η(ξ) - 1|`
    pub eta_xi: T,
    pub phi_xi: T,
    pub eta_phi: T,
    /// Numerical rank of `φ`.
    pub rank: usize,
}

impl<T: Real> ContactResiduals<T> {
    pub fn max(&self) -> T {
        self.phi_squared.max(self.eta_xi).max(self.phi_xi).max(self.eta_phi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlmostContactMetric<T> {
    pub structure: AlmostContact<T>,
    pub metric: Metric7<T>,
    pub omega: KForm7<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiomResiduals<T> {
    pub contact: ContactResiduals<T>,
    /// `max |g(φX, φY) - g(X, Y) + η(X)η(Y)|` over basis pairs.
    pub compatibility: T,
    /// `max |η - g(ξ, ·)|`
    pub duality: T,
    /// `max |ω(X, Y) - g(X, φY)|`
    pub fundamental_form: T,
    /// Coefficient of `η ∧ ω³` on `dx¹ ∧ … ∧ dx⁷`.
    pub nondegeneracy: T,
}

impl<T: Real> AxiomResiduals<T> {
    pub fn max(&self) -> T {
        self.contact.max().max(self.compatibility).max(self.duality).max(self.fundamental_form)
    }
}

/// `ω(e_a, e_b) = g(e_a, φ e_b)`.
pub fn fundamental_form<T: Real>(phi: &Matrix7<T>, g: &Metric7<T>) -> KForm7<T> {
    KForm7::from_bilinear(&g.gram().mul_mat(phi))
}

impl<T: Real> AlmostContactMetric<T> {
    pub fn new(structure: AlmostContact<T>, metric: Metric7<T>) -> Self {
        let omega = fundamental_form(&structure.phi, &metric);
        Self { structure, metric, omega }
    }

    pub fn phi(&self) -> &Matrix7<T> {
        &self.structure.phi
    }

    pub fn xi(&self) -> &Vector7<T> {
        &self.structure.xi
    }

    pub fn eta(&self) -> &Covector7<T> {
        &self.structure.eta
    }

    pub fn axiom_residuals(&self) -> AxiomResiduals<T> {
        let s = &self.structure;
        let gm = self.metric.gram();
        let pullback = s.phi.transpose().mul_mat(gm).mul_mat(&s.phi);
        let eta_eta = Matrix7::rank_one(&s.eta, &Vector7(s.eta.0));
        let omega_m = self.omega.to_bilinear();
        let nondegeneracy = (|| -> Result<T> {
            let eta = KForm7::from_covector(&s.eta);
            let w2 = self.omega.wedge(&self.omega)?;
            Ok(eta.wedge(&w2.wedge(&self.omega)?)?.top_coefficient())
        })()
        .expect("degrees 1 + 2 + 2 + 2 fit in dimension 7");
        AxiomResiduals {
            contact: s.residuals(),
            compatibility: (pullback - *gm + eta_eta).max_abs(),
            duality: (s.eta - self.metric.lower(&s.xi)).max_abs(),
            fundamental_form: (omega_m - gm.mul_mat(&s.phi)).max_abs(),
            nondegeneracy,
        }
    }
}

/// The structure induced by a `g`-unit vector `ξ`.
pub fn standard_structure<T: Real>(s: &G2Structure<T>, xi: &Vector7<T>) -> Result<AlmostContactMetric<T>> {
    let n2 = s.metric().norm_sq(xi);
    if (n2 - T::one()).abs() > T::lit(XI_NORM_TOL) {
        return Err(Error::XiNotNormalized { norm_sq: n2.to_f64_lossy() });
    }
    Ok(AlmostContactMetric::new(AlmostContact::from_xi(s, xi), s.metric().clone()))
}

/// A vector-valued 2-form at a point: `n[a][b] = N(e_a, e_b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NijenhuisTensor<T>(pub [[Vector7<T>; DIM]; DIM]);

impl<T: Real> NijenhuisTensor<T> {
    pub fn norm(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, v| acc + v.dot(v)).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.max_abs()))
    }
}

fn frobenius<T: Real>(m: &Matrix7<T>) -> T {
    m.0.iter().flatten().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
}

fn bracket_term<T: Real>(t: &Matrix7<T>, dt: &[Matrix7<T>; DIM], a: usize, b: usize) -> Vector7<T> {
    // [T,T](e_a, e_b) with constant coordinate fields e_a, e_b.
    let mut v = t.mul_vec(&dt[b].column(a)) - t.mul_vec(&dt[a].column(b));
    for (j, dtj) in dt.iter().enumerate() {
        v += dtj.column(b) * t.0[j][a];
        v -= dtj.column(a) * t.0[j][b];
    }
    v
}

/// Nijenhuis torsion `[T, T]` of a (1,1)-tensor from its 1-jet.
pub fn nijenhuis_from_jet<T: Real>(jet: &Jet<Matrix7<T>>) -> NijenhuisTensor<T> {
    NijenhuisTensor(std::array::from_fn(|a| std::array::from_fn(|b| bracket_term(&jet.value, &jet.partials, a, b))))
}

/// `[T, T]` at `x` for a (1,1)-tensor field.
pub fn nijenhuis<T: Real, F>(t: &F, x: &Vector7<T>, ctx: &DifferentiationContext<T>) -> NijenhuisTensor<T>
where
    F: Field<T, Value = Matrix7<T>> + ?Sized,
{
    nijenhuis_from_jet(&ctx.jet(t, x))
}

/// The four normality tensors at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointNormality<T> {
    /// `N⁽¹⁾ = [φ, φ] + dη ⊗ ξ`
    pub n1: NijenhuisTensor<T>,
    /// `N⁽²⁾(X, Y) = (L_{φX} η)(Y) - (L_{φY} η)(X)`, as `n2[a][b]`.
    pub n2: Matrix7<T>,
    /// `N⁽³⁾ = L_ξ φ`, as an endomorphism.
    pub n3: Matrix7<T>,
    /// `N⁽⁴⁾ = L_ξ η`
    pub n4: Covector7<T>,
}

impl<T: Real> PointNormality<T> {
    pub fn norms(&self) -> [T; 4] {
        [self.n1.norm(), frobenius(&self.n2), frobenius(&self.n3), self.n4.0.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt()]
    }
}

/// Normality tensors from the 1-jet of `(φ, ξ, η)`.
///
/// Here `dη(e_a, e_b) = ∂_a η_b - ∂_b η_a`.
pub fn normality_from_jet<T: Real>(jet: &Jet<AlmostContact<T>>) -> PointNormality<T> {
    let s = &jet.value;
    let dphi: [Matrix7<T>; DIM] = std::array::from_fn(|j| jet.partials[j].phi);
    let dxi: [Vector7<T>; DIM] = std::array::from_fn(|j| jet.partials[j].xi);
    let deta: [Covector7<T>; DIM] = std::array::from_fn(|j| jet.partials[j].eta);

    let n1 = NijenhuisTensor(std::array::from_fn(|a| {
        std::array::from_fn(|b| bracket_term(&s.phi, &dphi, a, b) + s.xi * (deta[a].0[b] - deta[b].0[a]))
    }));

    let lie_eta = |a: usize, b: usize| -> T {
        let mut v = s.eta.apply(&dphi[b].column(a));
        for (j, dj) in deta.iter().enumerate() {
            v = v + s.phi.0[j][a] * dj.0[b];
        }
        v
    };
    let n2 = Matrix7::from_fn(|a, b| lie_eta(a, b) - lie_eta(b, a));

    let n3_cols: [Vector7<T>; DIM] = std::array::from_fn(|a| {
        let mut v = s.phi.mul_vec(&dxi[a]);
        for j in 0..DIM {
            v += dphi[j].column(a) * s.xi.0[j];
            v -= dxi[j] * s.phi.0[j][a];
        }
        v
    });
    let n3 = Matrix7::from_columns(&n3_cols);

    let n4 = Covector7(std::array::from_fn(|a| {
        (0..DIM).fold(s.eta.apply(&dxi[a]), |acc, j| acc + s.xi.0[j] * deta[j].0[a])
    }));

    PointNormality { n1, n2, n3, n4 }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NijenhuisReport<T> {
    pub points: Vec<PointNormality<T>>,
    /// Largest Frobenius norm of `N⁽¹⁾ … N⁽⁴⁾` over the samples.
    pub max_norms: [T; 4],
}

impl<T: Real> NijenhuisReport<T> {
    pub fn is_normal(&self, tol: T) -> bool {
        self.max_norms[0] <= tol
    }
}

/// Evaluates the normality tensors of a structure field at every sample.
pub fn normality_tensors<T, S>(
    structure: &S,
    sampling: &LatticeSampling<T>,
    ctx: &DifferentiationContext<T>,
) -> NijenhuisReport<T>
where
    T: Real,
    S: Field<T, Value = AlmostContact<T>> + ?Sized,
{
    let points: Vec<PointNormality<T>> =
        (0..sampling.len()).into_par_iter().map(|k| normality_from_jet(&ctx.jet(structure, &sampling.point(k)))).collect();
    let max_norms = points.iter().fold([T::zero(); 4], |acc, p| {
        let n = p.norms();
        std::array::from_fn(|i| acc[i].max(n[i]))
    });
    NijenhuisReport { points, max_norms }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: [f64; 7]) -> Vector7<f64> {
        let v = Vector7(v);
        v * (1.0 / v.euclidean_norm())
    }

    #[test]
    fn model_structure_satisfies_axioms() {
        let s = G2Structure::<f64>::model();
        let acms = standard_structure(&s, &Vector7::basis(6)).unwrap();
        let r = acms.axiom_residuals();
        assert!(r.max() < 1e-15);
        assert_eq!(r.contact.rank, 6);
        assert!(r.nondegeneracy.abs() > 0.1);
        // ω = -(e7 ⌟ φ₀) = -dx¹⁶ + dx²⁵ + dx³⁴
        assert_eq!(acms.omega.component(&[0, 5]), -1.0);
        assert_eq!(acms.omega.component(&[1, 4]), 1.0);
        assert_eq!(acms.omega.component(&[2, 3]), 1.0);
    }

    #[test]
    fn generic_unit_vector_satisfies_axioms() {
        let s = G2Structure::<f64>::model();
        let xi = unit([0.3, -1.2, 0.5, 2.0, 0.1, -0.7, 0.9]);
        let acms = standard_structure(&s, &xi).unwrap();
        let r = acms.axiom_residuals();
        assert!(r.max() < 1e-13, "{r:?}");
        assert_eq!(r.contact.rank, 6);
        let omega_alt = s.phi().as_form().interior(&xi).unwrap().scale(-1.0);
        assert!((acms.omega.clone() - omega_alt).max_abs() < 1e-14);
    }

    #[test]
    fn rejects_non_unit_xi() {
        let s = G2Structure::<f64>::model();
        let e = standard_structure(&s, &Vector7([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.001])).unwrap_err();
        assert!(matches!(e, Error::XiNotNormalized { .. }));
    }

    #[test]
    fn constant_field_is_normal() {
        let s = G2Structure::<f64>::model();
        let xi = unit([1.0, 2.0, 0.0, -1.0, 0.5, 0.0, 3.0]);
        let jet = Jet { value: AlmostContact::from_xi(&s, &xi), partials: [AlmostContact::zero(); DIM] };
        let n = normality_from_jet(&jet);
        assert!(n.norms().iter().all(|v| *v == 0.0));
    }
}
