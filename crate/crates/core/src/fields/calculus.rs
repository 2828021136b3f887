use super::{DifferentiationContext, Field, FieldValue, Jet, LatticeSampling};
use crate::acms::{fundamental_form, AlmostContact};
use crate::algebra7::{G2Structure, KForm7, Matrix7, Metric7, ThreeForm7, Vector7, DIM};
use crate::chinea_gonzalez::CovDeg3Tensor;
use crate::error::{Error, Result};
use crate::scalar::Real;

const VANISHING_TOL: f64 = 1e-8;

/// A field with the same value everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantField<V>(pub V);

impl<T: Real, V: FieldValue<T> + Sync> Field<T> for ConstantField<V> {
    type Value = V;

    fn value(&self, _x: &Vector7<T>) -> V {
        self.0.clone()
    }

    fn partial(&self, _axis: usize, _x: &Vector7<T>) -> V {
        self.0.clone() * T::zero()
    }
}

pub(crate) fn normalize_jet<T: Real>(g: &Metric7<T>, raw: Jet<Vector7<T>>) -> Jet<Vector7<T>> {
    let n = g.norm(&raw.value);
    let inv = T::one() / n;
    let xi = raw.value * inv;
    let partials = raw.partials.map(|d| (d - xi * g.inner(&xi, &d)) * inv);
    Jet { value: xi, partials }
}

/// `ξ = ξ_raw / |ξ_raw|_g` with the quotient-rule derivative.
#[derive(Clone, Debug)]
pub struct NormalizedField<F, T> {
    raw: F,
    metric: Metric7<T>,
}

impl<T: Real, F: Field<T, Value = Vector7<T>>> NormalizedField<F, T> {
    pub fn raw(&self) -> &F {
        &self.raw
    }

    pub fn metric(&self) -> &Metric7<T> {
        &self.metric
    }

    /// Normalizes without checking for zeros.
    pub fn new_unchecked(raw: F, metric: Metric7<T>) -> Self {
        Self { raw, metric }
    }
}

impl<T: Real, F: Field<T, Value = Vector7<T>>> Field<T> for NormalizedField<F, T> {
    type Value = Vector7<T>;

    fn value(&self, x: &Vector7<T>) -> Vector7<T> {
        let r = self.raw.value(x);
        r * (T::one() / self.metric.norm(&r))
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> Vector7<T> {
        let r = self.raw.value(x);
        let d = self.raw.partial(axis, x);
        let n = self.metric.norm(&r);
        let xi = r * (T::one() / n);
        (d - xi * self.metric.inner(&xi, &d)) * (T::one() / n)
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<Vector7<T>> {
        normalize_jet(&self.metric, self.raw.jet(x))
    }
}

/// Normalizes `raw` after checking `|raw|_g > 10⁻⁸` at every sample.
pub fn normalize<T, F>(raw: F, sampling: &LatticeSampling<T>, metric: &Metric7<T>) -> Result<NormalizedField<F, T>>
where
    T: Real,
    F: Field<T, Value = Vector7<T>>,
{
    let norms = sampling.par_map(|_, x| metric.norm(&raw.value(x)));
    if let Some(k) = norms.iter().position(|n| !(*n > T::lit(VANISHING_TOL))) {
        return Err(Error::VanishingField { norm: norms[k].to_f64_lossy(), point: sampling.point(k).to_f64() });
    }
    Ok(NormalizedField { raw, metric: metric.clone() })
}

/// `(ξ ×, ξ, g(ξ, ·))` for a unit field `ξ`.
#[derive(Clone, Debug)]
pub struct StandardStructureField<F, T> {
    g2: G2Structure<T>,
    xi: F,
}

impl<T: Real, F: Field<T, Value = Vector7<T>>> StandardStructureField<F, T> {
    pub fn new(g2: G2Structure<T>, xi: F) -> Self {
        Self { g2, xi }
    }

    pub fn g2(&self) -> &G2Structure<T> {
        &self.g2
    }

    pub fn xi_field(&self) -> &F {
        &self.xi
    }
}

impl<T: Real, F: Field<T, Value = Vector7<T>>> Field<T> for StandardStructureField<F, T> {
    type Value = AlmostContact<T>;

    fn value(&self, x: &Vector7<T>) -> AlmostContact<T> {
        AlmostContact::from_xi(&self.g2, &self.xi.value(x))
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> AlmostContact<T> {
        // φ, η are linear in ξ, so the derivative has the same shape.
        AlmostContact::from_xi(&self.g2, &self.xi.partial(axis, x))
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<AlmostContact<T>> {
        let j = self.xi.jet(x);
        Jet {
            value: AlmostContact::from_xi(&self.g2, &j.value),
            partials: j.partials.map(|d| AlmostContact::from_xi(&self.g2, &d)),
        }
    }
}

/// `(u × v) / |u × v|`.
#[derive(Clone, Debug)]
pub struct UnitCrossField<U, V, T> {
    g2: G2Structure<T>,
    u: U,
    v: V,
}

impl<T: Real, U, V> UnitCrossField<U, V, T>
where
    U: Field<T, Value = Vector7<T>>,
    V: Field<T, Value = Vector7<T>>,
{
    pub fn new(g2: G2Structure<T>, u: U, v: V) -> Self {
        Self { g2, u, v }
    }
}

impl<T: Real, U, V> Field<T> for UnitCrossField<U, V, T>
where
    U: Field<T, Value = Vector7<T>>,
    V: Field<T, Value = Vector7<T>>,
{
    type Value = Vector7<T>;

    fn value(&self, x: &Vector7<T>) -> Vector7<T> {
        let w = self.g2.cross(&self.u.value(x), &self.v.value(x));
        w * (T::one() / self.g2.metric().norm(&w))
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> Vector7<T> {
        self.jet(x).partials[axis]
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<Vector7<T>> {
        let ju = self.u.jet(x);
        let jv = self.v.jet(x);
        let raw = Jet {
            value: self.g2.cross(&ju.value, &jv.value),
            partials: std::array::from_fn(|a| {
                self.g2.cross(&ju.partials[a], &jv.value) + self.g2.cross(&ju.value, &jv.partials[a])
            }),
        };
        normalize_jet(self.g2.metric(), raw)
    }
}

/// `η` of a structure field as a 1-form field.
#[derive(Clone, Debug)]
pub struct EtaField<S>(pub S);

impl<T: Real, S: Field<T, Value = AlmostContact<T>>> Field<T> for EtaField<S> {
    type Value = KForm7<T>;

    fn value(&self, x: &Vector7<T>) -> KForm7<T> {
        KForm7::from_covector(&self.0.value(x).eta)
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> KForm7<T> {
        KForm7::from_covector(&self.0.partial(axis, x).eta)
    }
}

/// `ω = g(·, φ ·)` of a structure field as a 2-form field.
#[derive(Clone, Debug)]
pub struct OmegaField<S, T> {
    structure: S,
    metric: Metric7<T>,
}

impl<T: Real, S: Field<T, Value = AlmostContact<T>>> OmegaField<S, T> {
    pub fn new(structure: S, metric: Metric7<T>) -> Self {
        Self { structure, metric }
    }
}

impl<T: Real, S: Field<T, Value = AlmostContact<T>>> Field<T> for OmegaField<S, T> {
    type Value = KForm7<T>;

    fn value(&self, x: &Vector7<T>) -> KForm7<T> {
        fundamental_form(&self.structure.value(x).phi, &self.metric)
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> KForm7<T> {
        fundamental_form(&self.structure.partial(axis, x).phi, &self.metric)
    }
}

/// `X ⌟ β` for a vector field `X` and a form field `β` of positive degree.
#[derive(Clone, Debug)]
pub struct InteriorField<V, W> {
    vector: V,
    form: W,
}

impl<V, W> InteriorField<V, W> {
    pub fn new<T>(vector: V, form: W) -> Result<Self>
    where
        T: Real,
        W: Field<T, Value = KForm7<T>>,
    {
        if form.value(&Vector7::zero()).degree() == 0 {
            return Err(Error::InteriorOfScalar);
        }
        Ok(Self { vector, form })
    }
}

impl<T: Real, V, W> Field<T> for InteriorField<V, W>
where
    V: Field<T, Value = Vector7<T>>,
    W: Field<T, Value = KForm7<T>>,
{
    type Value = KForm7<T>;

    fn value(&self, x: &Vector7<T>) -> KForm7<T> {
        self.form.value(x).interior(&self.vector.value(x)).expect("degree checked at construction")
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> KForm7<T> {
        let v = self.vector.value(x);
        let dv = self.vector.partial(axis, x);
        let f = self.form.value(x);
        let df = self.form.partial(axis, x);
        let a = f.interior(&dv).expect("degree checked at construction");
        let b = df.interior(&v).expect("degree checked at construction");
        a + b
    }
}

/// `∇ξ` as the endomorphism `X ↦ ∇_X ξ`: column `a` is `∂_a ξ`.
pub fn nabla_xi<T, F>(xi: &F, x: &Vector7<T>, ctx: &DifferentiationContext<T>) -> Matrix7<T>
where
    T: Real,
    F: Field<T, Value = Vector7<T>> + ?Sized,
{
    let jet = ctx.jet(xi, x);
    Matrix7::from_columns(&jet.partials)
}

/// `∇_X ξ` from the 1-jet of `ξ`.
pub fn covariant_derivative_along<T: Real>(jet: &Jet<Vector7<T>>, x: &Vector7<T>) -> Vector7<T> {
    (0..DIM).fold(Vector7::zero(), |acc, a| acc + jet.partials[a] * x.0[a])
}

/// `dβ = Σ_a dx^a ∧ ∂_a β`.
pub fn exterior_derivative<T, F>(f: &F, x: &Vector7<T>, ctx: &DifferentiationContext<T>) -> Result<KForm7<T>>
where
    T: Real,
    F: Field<T, Value = KForm7<T>> + ?Sized,
{
    let jet = ctx.jet(f, x);
    let k = jet.value.degree();
    if k >= DIM {
        return Err(Error::TopDegreeDerivative);
    }
    let mut out = KForm7::zero(k + 1);
    for (a, d) in jet.partials.iter().enumerate() {
        out = out + KForm7::dx(a).wedge(d)?;
    }
    Ok(out)
}

/// `δβ = -Σ_{a,b} g^{ab} e_a ⌟ ∂_b β` for the flat connection; zero on
/// functions.
pub fn codifferential<T, F>(f: &F, x: &Vector7<T>, ctx: &DifferentiationContext<T>) -> Result<KForm7<T>>
where
    T: Real,
    F: Field<T, Value = KForm7<T>> + ?Sized,
{
    let jet = ctx.jet(f, x);
    let k = jet.value.degree();
    if k == 0 {
        return Ok(KForm7::zero(0));
    }
    let ginv = ctx.metric.inverse();
    let mut out = KForm7::zero(k - 1);
    for b in 0..DIM {
        let v = Vector7::from_fn(|a| ginv.0[a][b]);
        out = out - jet.partials[b].interior(&v)?;
    }
    Ok(out)
}

/// `L_ξ φ₃ = ξ ⌟ dφ₃ + d(ξ ⌟ φ₃)` for a constant 3-form.
pub fn lie_derivative_3form<T, F>(
    xi: &F,
    phi: &ThreeForm7<T>,
    x: &Vector7<T>,
    ctx: &DifferentiationContext<T>,
) -> Result<KForm7<T>>
where
    T: Real,
    F: Field<T, Value = Vector7<T>>,
{
    let phi_field = ConstantField(phi.as_form().clone());
    let contracted = InteriorField::new(xi, &phi_field)?;
    let d_phi = exterior_derivative(&phi_field, x, ctx)?;
    Ok(d_phi.interior(&xi.value(x))? + exterior_derivative(&contracted, x, ctx)?)
}

/// `α(a, b, c) = (∇_{e_a} ω)(e_b, e_c) = φ₃(∂_a ξ, e_c, e_b)` from the 1-jet
/// of `ξ`.
pub fn nabla_omega_jet<T: Real>(g2: &G2Structure<T>, jet: &Jet<Vector7<T>>) -> CovDeg3Tensor<T> {
    let mut t = CovDeg3Tensor::zero();
    for a in 0..DIM {
        let d = &jet.partials[a];
        for c in 0..DIM {
            for b in 0..DIM {
                let v = (0..DIM).fold(T::zero(), |acc, i| acc + d.0[i] * g2.phi_component(i, c, b));
                t.set(a, b, c, v);
            }
        }
    }
    t
}

/// `∇ω` at `x` for the structure induced by the unit field `ξ`.
pub fn nabla_omega<T, F>(
    g2: &G2Structure<T>,
    xi: &F,
    x: &Vector7<T>,
    ctx: &DifferentiationContext<T>,
) -> CovDeg3Tensor<T>
where
    T: Real,
    F: Field<T, Value = Vector7<T>> + ?Sized,
{
    nabla_omega_jet(g2, &ctx.jet(xi, x))
}

/// `∇ω` by differentiating the components of `ω` directly.
pub fn nabla_omega_leibniz<T, S>(
    structure: &S,
    metric: &Metric7<T>,
    x: &Vector7<T>,
    ctx: &DifferentiationContext<T>,
) -> CovDeg3Tensor<T>
where
    T: Real,
    S: Field<T, Value = AlmostContact<T>>,
{
    let omega = OmegaField::new(structure, metric.clone());
    let jet = ctx.jet(&omega, x);
    CovDeg3Tensor::from_fn(|a, b, c| jet.partials[a].component(&[b, c]))
}

/// `L_ξ g` as a symmetric matrix.
pub fn killing_residual<T: Real>(jet: &Jet<Vector7<T>>, metric: &Metric7<T>) -> Matrix7<T> {
    let gm = metric.gram().mul_mat(&Matrix7::from_columns(&jet.partials));
    gm + gm.transpose()
}

/// `∫_{T⁷} β` for a 7-form field.
pub fn integrate_form<T, F>(f: &F, sampling: &LatticeSampling<T>) -> Result<T>
where
    T: Real,
    F: Field<T, Value = KForm7<T>> + ?Sized,
{
    let probe = f.value(&Vector7::zero()).degree();
    if probe != DIM {
        return Err(Error::WrongDegree { expected: DIM, found: probe });
    }
    super::integrate(|x| f.value(x).top_coefficient(), sampling)
}
