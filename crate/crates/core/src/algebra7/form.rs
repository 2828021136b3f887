use std::ops::{Add, Mul, Neg, Sub};

use super::vector::{Covector7, Vector7, DIM};
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

const SUBSETS: usize = 1 << DIM;

/// An exterior `k`-form on the model space.
///
/// Storage is dense over increasing multi-indices: the coefficient of
/// `dx^{i₁…i_k}` with `i₁ < … < i_k` lives at the bitmask of `{i₁,…,i_k}`.
/// Evaluation follows the determinant convention,
/// `dx^{i₁…i_k}(e_{i₁},…,e_{i_k}) = 1`, and the wedge product is the
/// unnormalized shuffle product, so `dx¹ ∧ dx² = dx¹²`.
#[derive(Clone, Debug, PartialEq)]
pub struct KForm7<T> {
    degree: usize,
    coeffs: [T; SUBSETS],
}

/// Sign of the permutation sorting `idx`, or `None` if an index repeats.
fn sort_sign(idx: &[usize]) -> Option<(usize, bool)> {
    let mut mask = 0usize;
    let mut odd = false;
    for (p, &i) in idx.iter().enumerate() {
        assert!(i < DIM, "axis index {i} out of range");
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        odd ^= idx[..p].iter().filter(|&&j| j > i).count() % 2 == 1;
    }
    Some((mask, odd))
}

/// Parity of the shuffle that merges the sorted index sets `a` and `b`.
fn merge_sign_odd(a: usize, b: usize) -> bool {
    let mut count = 0u32;
    for q in 0..DIM {
        if b & (1 << q) != 0 {
            count += (a >> (q + 1)).count_ones();
        }
    }
    count % 2 == 1
}

impl<T: Scalar> KForm7<T> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "degree {degree} exceeds 7");
        Self { degree, coeffs: [T::zero(); SUBSETS] }
    }

    pub fn scalar(v: T) -> Self {
        let mut f = Self::zero(0);
        f.coeffs[0] = v;
        f
    }

    /// `dx^{i₁} ∧ … ∧ dx^{i_k}` for 0-based axes in any order.
    pub fn monomial(idx: &[usize]) -> Self {
        let mut f = Self::zero(idx.len());
        if let Some((mask, odd)) = sort_sign(idx) {
            f.coeffs[mask] = if odd { -T::one() } else { T::one() };
        }
        f
    }

    pub fn dx(axis: usize) -> Self {
        Self::monomial(&[axis])
    }

    /// `dx¹ ∧ … ∧ dx⁷`, the positively oriented coordinate volume.
    pub fn volume() -> Self {
        Self::monomial(&[0, 1, 2, 3, 4, 5, 6])
    }

    pub fn from_covector(c: &Covector7<T>) -> Self {
        let mut f = Self::zero(1);
        for i in 0..DIM {
            f.coeffs[1 << i] = c.0[i];
        }
        f
    }

    /// The 2-form with `f(e_a, e_b) = m[a][b]`; only the antisymmetric part
    /// of `m` contributes.
    pub fn from_bilinear(m: &super::Matrix7<T>) -> Self {
        let mut f = Self::zero(2);
        let half = T::one() / T::from_int(2);
        for a in 0..DIM {
            for b in a + 1..DIM {
                f.coeffs[(1 << a) | (1 << b)] = (m.0[a][b] - m.0[b][a]) * half;
            }
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component `f(e_{i₁}, …, e_{i_k})` for axes in any order.
    pub fn component(&self, idx: &[usize]) -> T {
        assert_eq!(idx.len(), self.degree, "component arity must equal degree");
        match sort_sign(idx) {
            None => T::zero(),
            Some((mask, odd)) => {
                if odd {
                    -self.coeffs[mask]
                } else {
                    self.coeffs[mask]
                }
            }
        }
    }

    /// Sets the component for `idx` so that `component(idx) == v` while
    /// preserving total antisymmetry.
    pub fn set_component(&mut self, idx: &[usize], v: T) {
        assert_eq!(idx.len(), self.degree, "component arity must equal degree");
        if let Some((mask, odd)) = sort_sign(idx) {
            self.coeffs[mask] = if odd { -v } else { v };
        }
    }

    /// Coefficient of the volume form for a 7-form.
    pub fn top_coefficient(&self) -> T {
        assert_eq!(self.degree, DIM);
        self.coeffs[SUBSETS - 1]
    }

    /// Iterates `(sorted axes, coefficient)` over nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, T)> + '_ {
        (0..SUBSETS).filter(|m| self.coeffs[*m] != T::zero()).map(|m| {
            let axes = (0..DIM).filter(|i| m & (1 << i) != 0).collect();
            (axes, self.coeffs[m])
        })
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.degree + other.degree > DIM {
            return Err(Error::DegreeOverflow { lhs: self.degree, rhs: other.degree });
        }
        let mut out = Self::zero(self.degree + other.degree);
        for a in 0..SUBSETS {
            let ca = self.coeffs[a];
            if ca == T::zero() {
                continue;
            }
            for b in 0..SUBSETS {
                let cb = other.coeffs[b];
                if cb == T::zero() || a & b != 0 {
                    continue;
                }
                let term = ca * cb;
                out.coeffs[a | b] = if merge_sign_odd(a, b) {
                    out.coeffs[a | b] - term
                } else {
                    out.coeffs[a | b] + term
                };
            }
        }
        Ok(out)
    }

    /// `x ⌟ f`, with `(x ⌟ f)(v₂,…,v_k) = f(x, v₂,…,v_k)`.
    pub fn interior(&self, x: &Vector7<T>) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InteriorOfScalar);
        }
        let mut out = Self::zero(self.degree - 1);
        for m in 0..SUBSETS {
            let c = self.coeffs[m];
            if c == T::zero() {
                continue;
            }
            let mut pos = 0;
            for i in 0..DIM {
                if m & (1 << i) == 0 {
                    continue;
                }
                if x.0[i] != T::zero() {
                    let rest = m & !(1 << i);
                    let term = c * x.0[i];
                    out.coeffs[rest] = if pos % 2 == 1 {
                        out.coeffs[rest] - term
                    } else {
                        out.coeffs[rest] + term
                    };
                }
                pos += 1;
            }
        }
        Ok(out)
    }

    /// Full evaluation `f(v₁, …, v_k)`.
    pub fn eval(&self, vs: &[Vector7<T>]) -> T {
        assert_eq!(vs.len(), self.degree, "argument count must equal degree");
        let mut f = self.clone();
        for v in vs {
            f = f.interior(v).expect("degree checked");
        }
        f.coeffs[0]
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = *c * s;
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, x| if x.abs() > acc { x.abs() } else { acc })
    }

    /// Sum of squared coefficients over increasing multi-indices.
    pub fn coeff_norm_sq(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, x| acc + *x * *x)
    }

    /// For a 2-form, the matrix `m[a][b] = f(e_a, e_b)`.
    pub fn to_bilinear(&self) -> super::Matrix7<T> {
        assert_eq!(self.degree, 2);
        super::Matrix7::from_fn(|a, b| self.component(&[a, b]))
    }

    pub fn to_covector(&self) -> Covector7<T> {
        assert_eq!(self.degree, 1);
        Covector7(std::array::from_fn(|i| self.coeffs[1 << i]))
    }

    /// All `7³` components `f(e_a, e_b, e_c)` of a 3-form, indexed `49a + 7b + c`.
    pub fn to_dense3(&self) -> Vec<T> {
        assert_eq!(self.degree, 3);
        let mut out = vec![T::zero(); DIM * DIM * DIM];
        for a in 0..DIM {
            for b in 0..DIM {
                for c in 0..DIM {
                    out[49 * a + 7 * b + c] = self.component(&[a, b, c]);
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (o, b) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *o = f(*o, *b);
        }
        out
    }
}

impl<T: Real> KForm7<T> {
    pub fn coeff_norm(&self) -> T {
        self.coeff_norm_sq().sqrt()
    }
}

impl<T: Scalar> Add for KForm7<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for KForm7<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Neg for KForm7<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul<T> for KForm7<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// A totally antisymmetric covariant 3-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm7<T>(KForm7<T>);

impl<T: Scalar> ThreeForm7<T> {
    pub fn from_form(f: KForm7<T>) -> Result<Self> {
        if f.degree() != 3 {
            return Err(Error::WrongDegree { expected: 3, found: f.degree() });
        }
        Ok(Self(f))
    }

    /// The model G₂ 3-form
    /// `dx¹²³ + dx¹⁴⁵ + dx¹⁶⁷ + dx²⁴⁶ − dx²⁵⁷ − dx³⁴⁷ − dx³⁵⁶`.
    pub fn model() -> Self {
        const TERMS: [([usize; 3], i64); 7] = [
            ([1, 2, 3], 1),
            ([1, 4, 5], 1),
            ([1, 6, 7], 1),
            ([2, 4, 6], 1),
            ([2, 5, 7], -1),
            ([3, 4, 7], -1),
            ([3, 5, 6], -1),
        ];
        let mut f = KForm7::zero(3);
        for (idx, s) in TERMS {
            f.set_component(&[idx[0] - 1, idx[1] - 1, idx[2] - 1], T::from_int(s));
        }
        Self(f)
    }

    pub fn as_form(&self) -> &KForm7<T> {
        &self.0
    }

    pub fn into_form(self) -> KForm7<T> {
        self.0
    }

    pub fn component(&self, a: usize, b: usize, c: usize) -> T {
        self.0.component(&[a, b, c])
    }

    pub fn eval(&self, x: &Vector7<T>, y: &Vector7<T>, z: &Vector7<T>) -> T {
        self.0.eval(&[*x, *y, *z])
    }

    /// The pullback `(A*φ)(x, y, z) = φ(Ax, Ay, Az)`.
    pub fn pullback(&self, a: &super::Matrix7<T>) -> Self {
        let cols: Vec<Vector7<T>> = (0..DIM).map(|j| a.column(j)).collect();
        let mut f = KForm7::zero(3);
        for i in 0..DIM {
            for j in i + 1..DIM {
                for k in j + 1..DIM {
                    f.set_component(&[i, j, k], self.eval(&cols[i], &cols[j], &cols[k]));
                }
            }
        }
        Self(f)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn wedge_of_coordinate_differentials() {
        let f = KForm7::<Q>::dx(0).wedge(&KForm7::dx(1)).unwrap();
        assert_eq!(f.component(&[0, 1]), Q::from_integer(1));
        assert_eq!(f.component(&[1, 0]), Q::from_integer(-1));
    }

    #[test]
    fn repeated_index_wedge_vanishes() {
        let a = KForm7::<Q>::monomial(&[0, 1]);
        let b = KForm7::<Q>::monomial(&[0, 2]);
        assert_eq!(a.wedge(&b).unwrap(), KForm7::zero(4));
    }

    #[test]
    fn wedge_sign_against_permutation_count() {
        // dx¹²³ ∧ dx⁴⁵⁶ ∧ dx⁷ = +vol; dx⁴⁵⁶ ∧ dx¹²³ ∧ dx⁷ = (−1)^9 vol.
        let a = KForm7::<Q>::monomial(&[0, 1, 2]);
        let b = KForm7::<Q>::monomial(&[3, 4, 5]);
        let c = KForm7::<Q>::dx(6);
        let v = a.wedge(&b).unwrap().wedge(&c).unwrap();
        assert_eq!(v, KForm7::volume());
        let w = b.wedge(&a).unwrap().wedge(&c).unwrap();
        assert_eq!(w, -KForm7::volume());
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let a = KForm7::<f64>::monomial(&[0, 1, 2, 3]);
        assert_eq!(a.wedge(&a), Err(Error::DegreeOverflow { lhs: 4, rhs: 4 }));
    }

    #[test]
    fn interior_products() {
        let f = KForm7::<Q>::monomial(&[0, 1, 2]);
        let e1 = Vector7::basis(0);
        assert_eq!(f.interior(&e1).unwrap(), KForm7::monomial(&[1, 2]));
        let e4 = Vector7::basis(3);
        assert_eq!(f.interior(&e4).unwrap(), KForm7::zero(2));
        assert_eq!(KForm7::<Q>::scalar(Q::from_integer(1)).interior(&e1), Err(Error::InteriorOfScalar));
    }

    #[test]
    fn monomial_sign_from_unsorted_axes() {
        let f = KForm7::<Q>::monomial(&[2, 0, 1]);
        assert_eq!(f.component(&[0, 1, 2]), Q::from_integer(1));
        let g = KForm7::<Q>::monomial(&[1, 0, 2]);
        assert_eq!(g.component(&[0, 1, 2]), Q::from_integer(-1));
    }

    #[test]
    fn model_form_components() {
        let phi = ThreeForm7::<Q>::model();
        assert_eq!(phi.component(0, 1, 2), Q::from_integer(1));
        assert_eq!(phi.component(1, 4, 6), Q::from_integer(-1));
        assert_eq!(phi.component(0, 1, 3), Q::from_integer(0));
        assert_eq!(phi.as_form().terms().count(), 7);
    }

    #[test]
    fn eval_matches_determinant_convention() {
        let f = KForm7::<Q>::monomial(&[0, 1]);
        let x = Vector7::from_fn(|i| Q::from_integer(i as i64 + 1));
        let y = Vector7::from_fn(|i| Q::from_integer(2 * i as i64 - 3));
        // det [[x0, y0], [x1, y1]]
        let expected = x.0[0] * y.0[1] - x.0[1] * y.0[0];
        assert_eq!(f.eval(&[x, y]), expected);
    }
}
