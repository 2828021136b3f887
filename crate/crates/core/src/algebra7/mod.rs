//! Linear and multilinear algebra on the oriented 7-dimensional model space:
//! exterior forms, the G₂ 3-form, the metric it induces and its 2-fold
//! cross product.
//!
//! Orientation: `dx¹ ∧ … ∧ dx⁷` is positive. The opposite choice flips the
//! sign of every cross product.

mod form;
mod vector;

pub use form::{KForm7, ThreeForm7};
pub use vector::{Covector7, Matrix7, Vector7, DIM};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// A symmetric bilinear form with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric7<T> {
    gram: Matrix7<T>,
    inverse: Matrix7<T>,
}

impl<T: Scalar> Metric7<T> {
    pub fn identity() -> Self {
        Self { gram: Matrix7::identity(), inverse: Matrix7::identity() }
    }

    /// Wraps a Gram matrix; rejects asymmetric or singular input.
    pub fn new(gram: Matrix7<T>) -> Result<Self> {
        let asym = gram.asymmetry();
        if asym > T::pivot_epsilon() * (T::one() + gram.max_abs()) {
            return Err(Error::NonSymmetricMetric {
                asymmetry: num_traits::ToPrimitive::to_f64(&asym).unwrap_or(f64::NAN),
            });
        }
        let inverse = gram.inverse().ok_or(Error::DegenerateMetric)?;
        Ok(Self { gram, inverse })
    }

    pub fn gram(&self) -> &Matrix7<T> {
        &self.gram
    }

    pub fn inverse(&self) -> &Matrix7<T> {
        &self.inverse
    }

    pub fn inner(&self, x: &Vector7<T>, y: &Vector7<T>) -> T {
        x.dot(&self.gram.mul_vec(y))
    }

    pub fn norm_sq(&self, x: &Vector7<T>) -> T {
        self.inner(x, x)
    }

    /// `X ↦ g(X, ·)`.
    pub fn lower(&self, x: &Vector7<T>) -> Covector7<T> {
        self.gram.mul_vec(x).to_covector()
    }

    /// The vector `w` with `g(w, ·) = c`.
    pub fn raise(&self, c: &Covector7<T>) -> Vector7<T> {
        self.inverse.mul_vec(&Vector7(c.0))
    }

    pub fn is_identity(&self) -> bool {
        self.gram == Matrix7::identity()
    }
}

impl<T: Real> Metric7<T> {
    pub fn norm(&self, x: &Vector7<T>) -> T {
        self.norm_sq(x).sqrt()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.gram.cholesky().is_some()
    }

    /// Metric volume density `√det g` relative to `dx¹ ∧ … ∧ dx⁷`.
    pub fn volume_density(&self) -> T {
        self.gram.determinant().abs().sqrt()
    }

    /// Gram–Schmidt of `vectors` with respect to this metric.
    pub fn orthonormalize(&self, vectors: &[Vector7<T>]) -> Vec<Vector7<T>> {
        let mut out: Vec<Vector7<T>> = Vec::new();
        for v in vectors {
            let mut w = *v;
            for _ in 0..2 {
                for q in &out {
                    w = w - *q * self.inner(q, &w);
                }
            }
            let n = self.norm(&w);
            if n > T::lit(1e-12) {
                out.push(w * (T::one() / n));
            }
        }
        out
    }
}

/// A 3-form paired with a metric, with the dense component table cached for
/// repeated cross products.
#[derive(Clone, Debug)]
pub struct G2Structure<T> {
    phi: ThreeForm7<T>,
    metric: Metric7<T>,
    dense: Vec<T>,
}

impl<T: Scalar> G2Structure<T> {
    pub fn new(phi: ThreeForm7<T>, metric: Metric7<T>) -> Self {
        let dense = phi.as_form().to_dense3();
        Self { phi, metric, dense }
    }

    /// `(φ₀, identity)`.
    pub fn model() -> Self {
        Self::new(ThreeForm7::model(), Metric7::identity())
    }

    pub fn phi(&self) -> &ThreeForm7<T> {
        &self.phi
    }

    pub fn metric(&self) -> &Metric7<T> {
        &self.metric
    }

    /// `φ(x, y, e_c)` for every `c`.
    pub fn contract2(&self, x: &Vector7<T>, y: &Vector7<T>) -> Covector7<T> {
        let mut out = [T::zero(); DIM];
        for a in 0..DIM {
            if x.0[a] == T::zero() {
                continue;
            }
            for b in 0..DIM {
                let xy = x.0[a] * y.0[b];
                if xy == T::zero() {
                    continue;
                }
                let row = &self.dense[49 * a + 7 * b..49 * a + 7 * b + 7];
                for c in 0..DIM {
                    out[c] = out[c] + xy * row[c];
                }
            }
        }
        Covector7(out)
    }

    /// The unique `w` with `g(w, z) = φ(x, y, z)` for all `z`.
    pub fn cross(&self, x: &Vector7<T>, y: &Vector7<T>) -> Vector7<T> {
        self.metric.raise(&self.contract2(x, y))
    }

    /// Matrix of `X ↦ x × X`.
    pub fn cross_matrix(&self, x: &Vector7<T>) -> Matrix7<T> {
        let cols: [Vector7<T>; DIM] = std::array::from_fn(|j| self.cross(x, &Vector7::basis(j)));
        Matrix7::from_columns(&cols)
    }

    pub fn phi_component(&self, a: usize, b: usize, c: usize) -> T {
        self.dense[49 * a + 7 * b + c]
    }
}

/// `φ₀`, the model G₂ 3-form.
pub fn model_three_form<T: Scalar>() -> ThreeForm7<T> {
    ThreeForm7::model()
}

/// The cross product determined by `φ(x, y, z) = g(x × y, z)`.
pub fn cross<T: Scalar>(
    phi: &ThreeForm7<T>,
    g: &Matrix7<T>,
    x: &Vector7<T>,
    y: &Vector7<T>,
) -> Result<Vector7<T>> {
    let inverse = g.inverse().ok_or(Error::DegenerateMetric)?;
    let covector = G2Structure::new(phi.clone(), Metric7::identity()).contract2(x, y);
    Ok(inverse.mul_vec(&Vector7(covector.0)))
}

pub fn wedge<T: Scalar>(a: &KForm7<T>, b: &KForm7<T>) -> Result<KForm7<T>> {
    a.wedge(b)
}

pub fn interior<T: Scalar>(x: &Vector7<T>, a: &KForm7<T>) -> Result<KForm7<T>> {
    a.interior(x)
}

/// The bilinear form `B(x, y)` defined by
/// `(x ⌟ φ) ∧ (y ⌟ φ) ∧ φ = 6 B(x, y) vol_ref`.
pub fn volume_pairing<T: Scalar>(phi: &ThreeForm7<T>, reference_volume: &KForm7<T>) -> Result<Matrix7<T>> {
    if reference_volume.degree() != DIM || reference_volume.top_coefficient() == T::zero() {
        return Err(Error::BadReferenceVolume);
    }
    let contractions: Vec<KForm7<T>> = (0..DIM)
        .map(|a| phi.as_form().interior(&Vector7::basis(a)))
        .collect::<Result<_>>()?;
    let six = T::from_int(6);
    let vol = reference_volume.top_coefficient();
    let mut b = Matrix7::zero();
    for x in 0..DIM {
        for y in x..DIM {
            let top = contractions[x].wedge(&contractions[y])?.wedge(phi.as_form())?;
            let v = top.top_coefficient() / (six * vol);
            b.0[x][y] = v;
            b.0[y][x] = v;
        }
    }
    Ok(b)
}

/// Recovers the metric `g_φ` of a positive 3-form.
///
/// The defining relation `(x⌟φ) ∧ (y⌟φ) ∧ φ = 6 g_φ(x, y) vol_g` refers to
/// the metric's own volume form. Writing `B` for the pairing against the
/// reference volume, `B = g √det g`, so `det g = (det B)^{2/9}` and
/// `g = B (det B)^{-1/9}`.
pub fn metric_from_three_form<T: Real>(phi: &ThreeForm7<T>, reference_volume: &KForm7<T>) -> Result<Metric7<T>> {
    let b = volume_pairing(phi, reference_volume)?;
    if b.cholesky().is_none() {
        return Err(Error::NotPositiveThreeForm);
    }
    let det = b.determinant();
    let g = b.scale(det.powf(T::lit(-1.0 / 9.0)));
    Metric7::new(g)
}

/// `‖x₁ × (x₁ × x₂) + g(x₁,x₁) x₂ − g(x₁,x₂) x₁‖_g`.
pub fn double_cross_check<T: Real>(g: &Metric7<T>, phi: &ThreeForm7<T>, x1: &Vector7<T>, x2: &Vector7<T>) -> T {
    let s = G2Structure::new(phi.clone(), g.clone());
    double_cross_residual(&s, x1, x2)
}

pub fn double_cross_residual<T: Real>(s: &G2Structure<T>, x1: &Vector7<T>, x2: &Vector7<T>) -> T {
    let g = s.metric();
    let lhs = s.cross(x1, &s.cross(x1, x2));
    let r = lhs + *x2 * g.norm_sq(x1) - *x1 * g.inner(x1, x2);
    g.norm(&r)
}

/// Residual of `u×((u×v)×x) = −(u×v)×(u×x) + u×(u×(v×x)) + (u×(u×x))×v`.
pub fn four_term_residual<T: Real>(s: &G2Structure<T>, u: &Vector7<T>, v: &Vector7<T>, x: &Vector7<T>) -> T {
    let uv = s.cross(u, v);
    let lhs = s.cross(u, &s.cross(&uv, x));
    let rhs = -s.cross(&uv, &s.cross(u, x)) + s.cross(u, &s.cross(u, &s.cross(v, x))) + s.cross(&s.cross(u, &s.cross(u, x)), v);
    s.metric().norm(&(lhs - rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn e<T: Scalar>(i: usize) -> Vector7<T> {
        Vector7::basis(i - 1)
    }

    #[test]
    fn cross_table_exact() {
        let s = G2Structure::<Q>::model();
        assert_eq!(s.cross(&e(1), &e(2)), e(3));
        assert_eq!(s.cross(&e(3), &e(4)), -e(7));
        assert_eq!(s.cross(&e(1), &e(1)), Vector7::zero());
    }

    #[test]
    fn free_cross_rejects_singular_metric() {
        let mut g = Matrix7::<f64>::identity();
        g.0[2][2] = 0.0;
        let r = cross(&ThreeForm7::model(), &g, &e(1), &e(2));
        assert_eq!(r, Err(Error::DegenerateMetric));
    }

    #[test]
    fn interior_of_model_with_e7() {
        // e₇ ⌟ φ₀ = dx¹⁶ − dx²⁵ − dx³⁴ up to the sign of moving 7 to the front.
        let f = ThreeForm7::<Q>::model().as_form().interior(&e(7)).unwrap();
        let expected = KForm7::monomial(&[0, 5]) - KForm7::monomial(&[1, 4]) - KForm7::monomial(&[2, 3]);
        assert_eq!(f, expected);
    }

    #[test]
    fn model_pairing_is_identity_exactly() {
        let b = volume_pairing(&ThreeForm7::<Q>::model(), &KForm7::volume()).unwrap();
        assert_eq!(b, Matrix7::identity());
    }

    #[test]
    fn metric_recovery_model() {
        let g = metric_from_three_form(&ThreeForm7::<f64>::model(), &KForm7::volume()).unwrap();
        assert!((*g.gram() - Matrix7::identity()).max_abs() < 1e-12);
    }

    #[test]
    fn metric_recovery_scaling_law() {
        let g = metric_from_three_form(&ThreeForm7::<f64>::model().scale(2.0), &KForm7::volume()).unwrap();
        let c = 2f64.powf(2.0 / 3.0);
        assert!((*g.gram() - Matrix7::identity().scale(c)).max_abs() < 1e-12);
    }

    #[test]
    fn metric_recovery_rejects_reversed_orientation() {
        let r = metric_from_three_form(&ThreeForm7::<f64>::model().scale(-1.0), &KForm7::volume());
        assert_eq!(r, Err(Error::NotPositiveThreeForm));
        let r = metric_from_three_form(&ThreeForm7::<f64>::model(), &KForm7::zero(7));
        assert_eq!(r, Err(Error::BadReferenceVolume));
    }

    #[test]
    fn swapped_axes_need_a_sign_flip() {
        let mut p = Matrix7::<f64>::zero();
        for i in 0..DIM {
            let j = match i {
                0 => 1,
                1 => 0,
                k => k,
            };
            p.0[i][j] = 1.0;
        }
        let swapped = ThreeForm7::model().pullback(&p);
        assert_eq!(
            metric_from_three_form(&swapped, &KForm7::volume()),
            Err(Error::NotPositiveThreeForm)
        );
        let g = metric_from_three_form(&swapped.scale(-1.0), &KForm7::volume()).unwrap();
        assert!((*g.gram() - p.transpose().mul_mat(&p)).max_abs() < 1e-12);
    }

    #[test]
    fn double_cross_on_basis() {
        let g = Metric7::<f64>::identity();
        let phi = ThreeForm7::model();
        assert_eq!(double_cross_check(&g, &phi, &e(1), &e(2)), 0.0);
        assert_eq!(double_cross_check(&g, &phi, &e(1), &e(1)), 0.0);
    }

    #[test]
    fn rational_scalars_reproduce_double_cross_exactly() {
        let s = G2Structure::<Q>::model();
        let x = Vector7::from_fn(|i| Q::new(i as i64 - 2, 3));
        let y = Vector7::from_fn(|i| Q::new(5 - (i as i64) * (i as i64), 7));
        let g = s.metric();
        let r = s.cross(&x, &s.cross(&x, &y)) + y * g.norm_sq(&x) - x * g.inner(&x, &y);
        assert_eq!(r, Vector7::zero());
    }

    #[test]
    fn f32_cross_table() {
        let s = G2Structure::<f32>::model();
        assert_eq!(s.cross(&e(2), &e(5)), -e(7));
    }
}
