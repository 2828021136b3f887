use serde::{Deserialize, Serialize};

use super::{Field, Jet};
use crate::algebra7::{KForm7, Vector7, DIM};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Cos,
    Sin,
}

impl Phase {
    fn eval<T: Real>(self, t: T) -> T {
        match self {
            Phase::Cos => t.cos(),
            Phase::Sin => t.sin(),
        }
    }
}

fn phase_arg<T: Real>(wave: &[i32; DIM], x: &Vector7<T>) -> T {
    (0..DIM).fold(T::zero(), |acc, a| acc + T::lit(f64::from(wave[a])) * x.0[a])
}

fn add_waves(a: &[i32; DIM], b: &[i32; DIM], sign: i32) -> [i32; DIM] {
    std::array::from_fn(|i| a[i] + sign * b[i])
}

/// `coeff · cos(k·x)` or `coeff · sin(k·x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigTerm<T> {
    pub coeff: Vector7<T>,
    pub wave: [i32; DIM],
    pub phase: Phase,
}

/// A finite sum of trigonometric vector terms with integer wave vectors, so
/// the field is well defined on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigVectorField<T> {
    pub terms: Vec<TrigTerm<T>>,
}

impl<T: Real> TrigVectorField<T> {
    pub fn new(terms: Vec<TrigTerm<T>>) -> Self {
        Self { terms }
    }

    pub fn constant(v: Vector7<T>) -> Self {
        Self::new(vec![TrigTerm { coeff: v, wave: [0; DIM], phase: Phase::Cos }])
    }

    pub fn push(mut self, coeff: Vector7<T>, wave: [i32; DIM], phase: Phase) -> Self {
        self.terms.push(TrigTerm { coeff, wave, phase });
        self
    }

    /// The exact partial derivative as another trigonometric field.
    pub fn derivative(&self, axis: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.wave[axis] != 0)
            .map(|t| {
                let k = T::lit(f64::from(t.wave[axis]));
                match t.phase {
                    Phase::Cos => TrigTerm { coeff: t.coeff * (-k), wave: t.wave, phase: Phase::Sin },
                    Phase::Sin => TrigTerm { coeff: t.coeff * k, wave: t.wave, phase: Phase::Cos },
                }
            })
            .collect();
        Self { terms }
    }

    /// The 1-form `X ↦ ⟨self, X⟩` for the Euclidean metric.
    pub fn to_one_form(&self) -> TrigForm<T> {
        TrigForm {
            degree: 1,
            terms: self
                .terms
                .iter()
                .map(|t| TrigFormTerm {
                    coeff: KForm7::from_covector(&t.coeff.to_covector()),
                    wave: t.wave,
                    phase: t.phase,
                })
                .collect(),
        }
    }
}

impl<T: Real> Field<T> for TrigVectorField<T> {
    type Value = Vector7<T>;

    fn value(&self, x: &Vector7<T>) -> Vector7<T> {
        self.terms.iter().fold(Vector7::zero(), |acc, t| acc + t.coeff * t.phase.eval(phase_arg(&t.wave, x)))
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> Vector7<T> {
        self.terms.iter().fold(Vector7::zero(), |acc, t| {
            let k = T::lit(f64::from(t.wave[axis]));
            if k == T::zero() {
                return acc;
            }
            let th = phase_arg(&t.wave, x);
            let d = match t.phase {
                Phase::Cos => -k * th.sin(),
                Phase::Sin => k * th.cos(),
            };
            acc + t.coeff * d
        })
    }

    fn jet(&self, x: &Vector7<T>) -> Jet<Vector7<T>> {
        let mut value = Vector7::zero();
        let mut partials = [Vector7::zero(); DIM];
        for t in &self.terms {
            let th = phase_arg(&t.wave, x);
            let (s, c) = th.sin_cos();
            let (v, dv) = match t.phase {
                Phase::Cos => (c, -s),
                Phase::Sin => (s, c),
            };
            value += t.coeff * v;
            for (a, p) in partials.iter_mut().enumerate() {
                if t.wave[a] != 0 {
                    *p += t.coeff * (dv * T::lit(f64::from(t.wave[a])));
                }
            }
        }
        Jet { value, partials }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigFormTerm<T> {
    pub coeff: KForm7<T>,
    pub wave: [i32; DIM],
    pub phase: Phase,
}

/// A trigonometric differential form of fixed degree. Derivatives and wedge
/// products stay in this class and are computed exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigForm<T> {
    degree: usize,
    terms: Vec<TrigFormTerm<T>>,
}

impl<T: Real> TrigForm<T> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: Vec::new() }
    }

    pub fn constant(form: KForm7<T>) -> Self {
        let degree = form.degree();
        Self { degree, terms: vec![TrigFormTerm { coeff: form, wave: [0; DIM], phase: Phase::Cos }] }
    }

    pub fn from_terms(degree: usize, terms: Vec<TrigFormTerm<T>>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|t| t.coeff.degree() != degree) {
            return Err(Error::WrongDegree { expected: degree, found: bad.coeff.degree() });
        }
        Ok(Self { degree, terms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[TrigFormTerm<T>] {
        &self.terms
    }

    pub fn derivative(&self, axis: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.wave[axis] != 0)
            .map(|t| {
                let k = T::lit(f64::from(t.wave[axis]));
                match t.phase {
                    Phase::Cos => TrigFormTerm { coeff: t.coeff.scale(-k), wave: t.wave, phase: Phase::Sin },
                    Phase::Sin => TrigFormTerm { coeff: t.coeff.scale(k), wave: t.wave, phase: Phase::Cos },
                }
            })
            .collect();
        Self { degree: self.degree, terms }
    }

    /// `d = Σ_a dx^a ∧ ∂_a`, exact.
    pub fn exterior_derivative(&self) -> Result<Self> {
        if self.degree >= DIM {
            return Err(Error::TopDegreeDerivative);
        }
        let mut terms = Vec::new();
        for a in 0..DIM {
            let dxa = KForm7::dx(a);
            for t in self.derivative(a).terms {
                terms.push(TrigFormTerm { coeff: dxa.wedge(&t.coeff)?, wave: t.wave, phase: t.phase });
            }
        }
        Ok(Self { degree: self.degree + 1, terms })
    }

    /// Wedge product, expanded with the product-to-sum identities.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.degree + other.degree > DIM {
            return Err(Error::DegreeOverflow { lhs: self.degree, rhs: other.degree });
        }
        let half = T::lit(0.5);
        let mut terms = Vec::with_capacity(2 * self.terms.len() * other.terms.len());
        for p in &self.terms {
            for q in &other.terms {
                let c = p.coeff.wedge(&q.coeff)?.scale(half);
                let plus = add_waves(&p.wave, &q.wave, 1);
                let minus = add_waves(&p.wave, &q.wave, -1);
                let (sum_phase, sum_sign, diff_phase, diff_sign) = match (p.phase, q.phase) {
                    (Phase::Cos, Phase::Cos) => (Phase::Cos, 1.0, Phase::Cos, 1.0),
                    (Phase::Sin, Phase::Sin) => (Phase::Cos, -1.0, Phase::Cos, 1.0),
                    (Phase::Sin, Phase::Cos) => (Phase::Sin, 1.0, Phase::Sin, 1.0),
                    (Phase::Cos, Phase::Sin) => (Phase::Sin, 1.0, Phase::Sin, -1.0),
                };
                terms.push(TrigFormTerm { coeff: c.scale(T::lit(sum_sign)), wave: plus, phase: sum_phase });
                terms.push(TrigFormTerm { coeff: c.scale(T::lit(diff_sign)), wave: minus, phase: diff_phase });
            }
        }
        Ok(Self { degree: self.degree + other.degree, terms })
    }

    /// Interior product with a constant vector.
    pub fn interior_const(&self, v: &Vector7<T>) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InteriorOfScalar);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(TrigFormTerm { coeff: t.coeff.interior(v)?, wave: t.wave, phase: t.phase }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { degree: self.degree - 1, terms })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|t| TrigFormTerm { coeff: t.coeff.scale(s), wave: t.wave, phase: t.phase })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::WrongDegree { expected: self.degree, found: other.degree });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { degree: self.degree, terms })
    }
}

impl<T: Real> Field<T> for TrigForm<T> {
    type Value = KForm7<T>;

    fn value(&self, x: &Vector7<T>) -> KForm7<T> {
        self.terms.iter().fold(KForm7::zero(self.degree), |acc, t| {
            acc + t.coeff.scale(t.phase.eval(phase_arg(&t.wave, x)))
        })
    }

    fn partial(&self, axis: usize, x: &Vector7<T>) -> KForm7<T> {
        self.derivative(axis).value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_point() -> Vector7<f64> {
        Vector7([0.3, -1.1, 2.0, 0.7, 5.9, -0.4, 1.3])
    }

    #[test]
    fn derivative_matches_partial() {
        let f = TrigVectorField::new(vec![])
            .push(Vector7([1.0, 2.0, 0.0, 0.0, -1.0, 0.5, 0.0]), [1, 0, 2, 0, 0, -1, 0], Phase::Cos)
            .push(Vector7([0.0, 0.3, 1.0, 0.0, 0.0, 0.0, 2.0]), [0, 3, 0, 1, 0, 0, 1], Phase::Sin);
        let x = sample_point();
        let jet = f.jet(&x);
        for a in 0..DIM {
            let d1 = f.derivative(a).value(&x);
            let d2 = f.partial(a, &x);
            assert!((d1 - d2).max_abs() < 1e-14);
            assert!((jet.partials[a] - d2).max_abs() < 1e-14);
        }
    }

    #[test]
    fn d_squared_vanishes() {
        let f = TrigVectorField::new(vec![])
            .push(Vector7([1.0, 2.0, 0.0, 0.0, -1.0, 0.5, 0.0]), [1, 0, 2, 0, 0, -1, 0], Phase::Cos)
            .push(Vector7([0.0, 0.3, 1.0, 0.0, 0.0, 0.0, 2.0]), [0, 3, 0, 1, 0, 0, 1], Phase::Sin)
            .to_one_form();
        let dd = f.exterior_derivative().unwrap().exterior_derivative().unwrap();
        assert!(dd.value(&sample_point()).max_abs() < 1e-12);
    }

    #[test]
    fn wedge_is_pointwise_product() {
        let a = TrigVectorField::new(vec![])
            .push(Vector7([1.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]), [1, 1, 0, 0, 0, 0, 0], Phase::Sin)
            .push(Vector7([0.0, 1.0, 0.0, 0.0, 0.0, 3.0, 0.0]), [0, 0, 0, 2, 0, 0, 0], Phase::Cos)
            .to_one_form();
        let b = TrigVectorField::new(vec![])
            .push(Vector7([0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]), [0, 1, 0, 0, 0, 0, 3], Phase::Cos)
            .push(Vector7([2.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]), [1, 0, 0, 0, 1, 0, 0], Phase::Sin)
            .to_one_form();
        let x = sample_point();
        let direct = a.value(&x).wedge(&b.value(&x)).unwrap();
        let expanded = a.wedge(&b).unwrap().value(&x);
        assert!((direct - expanded).max_abs() < 1e-13);
    }

    #[test]
    fn top_degree_derivative_is_an_error() {
        let v = TrigForm::<f64>::constant(KForm7::volume());
        assert_eq!(v.exterior_derivative().unwrap_err(), Error::TopDegreeDerivative);
    }
}
