//! Field calculus on the flat torus `T⁷ = ℝ⁷/(2πℤ)⁷`.
//!
//! Fields are evaluated pointwise. Each [`Field`] knows its exact partial
//! derivatives; a [`DifferentiationContext`] either uses them or replaces
//! them by a fourth-order central difference of the values. The metric is
//! constant and the connection is flat, so covariant derivatives along
//! coordinate fields are plain partial derivatives.

mod calculus;
pub mod families;
mod sampling;
mod spec;
mod trig;

pub use calculus::{
    codifferential, covariant_derivative_along, exterior_derivative, integrate_form, killing_residual,
    lie_derivative_3form, nabla_omega, nabla_omega_jet, nabla_omega_leibniz, nabla_xi, normalize, ConstantField,
    EtaField, InteriorField, NormalizedField, OmegaField, StandardStructureField, UnitCrossField,
};
pub(crate) use calculus::normalize_jet;
pub use sampling::{integrate, LatticeSampling};
pub use spec::{FieldSpecFile, SpecFormat, TrigTermSpec};
pub use trig::{Phase, TrigForm, TrigFormTerm, TrigTerm, TrigVectorField};

use std::ops::{Add, Mul, Sub};

use crate::algebra7::{Metric7, Vector7, DIM};
use crate::scalar::Real;

/// Values a field can take: anything closed under linear combination.
pub trait FieldValue<T>: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {}

impl<T, V> FieldValue<T> for V where V: Clone + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V> {}

/// Value together with all seven coordinate partial derivatives.
#[derive(Clone, Debug)]
pub struct Jet<V> {
    pub value: V,
    pub partials: [V; DIM],
}

pub trait Field<T: Real>: Sync {
    type Value: FieldValue<T>;

    fn value(&self, x: &Vector7<T>) -> Self::Value;

    /// Exact `∂_axis` of the field at `x`.
    fn partial(&self, axis: usize, x: &Vector7<T>) -> Self::Value;

    fn jet(&self, x: &Vector7<T>) -> Jet<Self::Value> {
        Jet { value: self.value(x), partials: std::array::from_fn(|a| self.partial(a, x)) }
    }
}

impl<T: Real, F: Field<T> + ?Sized> Field<T> for &F {
    type Value = F::Value;

    fn value(&self, x: &Vector7<T>) -> Self::Value {
        (**self).value(x)
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> Self::Value {
        (**self).partial(axis, x)
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<Self::Value> {
        (**self).jet(x)
    }
}

impl<T: Real, F: Field<T> + ?Sized + Send> Field<T> for Box<F> {
    type Value = F::Value;

    fn value(&self, x: &Vector7<T>) -> Self::Value {
        (**self).value(x)
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> Self::Value {
        (**self).partial(axis, x)
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<Self::Value> {
        (**self).jet(x)
    }
}

/// A unit (or raw) vector field, boxed for heterogeneous collections.
pub type DynVectorField<T> = dyn Field<T, Value = Vector7<T>> + Send;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMode<T> {
    /// Use each field's exact derivative.
    Exact,
    /// Fourth-order central difference with the given step.
    CentralFd4 { step: T },
}

#[derive(Clone, Debug)]
pub struct DifferentiationContext<T> {
    pub mode: DerivativeMode<T>,
    pub metric: Metric7<T>,
}

impl<T: Real> DifferentiationContext<T> {
    /// Exact derivatives, identity metric.
    pub fn exact() -> Self {
        Self { mode: DerivativeMode::Exact, metric: Metric7::identity() }
    }

    pub fn finite_difference(step: T) -> Self {
        Self { mode: DerivativeMode::CentralFd4 { step }, metric: Metric7::identity() }
    }

    pub fn with_metric(mut self, metric: Metric7<T>) -> Self {
        self.metric = metric;
        self
    }

    pub fn partial<F: Field<T> + ?Sized>(&self, f: &F, axis: usize, x: &Vector7<T>) -> F::Value {
        match self.mode {
            DerivativeMode::Exact => f.partial(axis, x),
            DerivativeMode::CentralFd4 { step } => {
                let e = Vector7::<T>::basis(axis);
                let at = |k: f64| f.value(&(*x + e * (step * T::lit(k))));
                let num = at(-2.0) - at(-1.0) * T::lit(8.0) + at(1.0) * T::lit(8.0) - at(2.0);
                num * (T::one() / (T::lit(12.0) * step))
            }
        }
    }

    pub fn jet<F: Field<T> + ?Sized>(&self, f: &F, x: &Vector7<T>) -> Jet<F::Value> {
        match self.mode {
            DerivativeMode::Exact => f.jet(x),
            DerivativeMode::CentralFd4 { .. } => {
                Jet { value: f.value(x), partials: std::array::from_fn(|a| self.partial(f, a, x)) }
            }
        }
    }
}
