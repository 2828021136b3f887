use serde::{Deserialize, Serialize};

use super::classes::{check_frame, ClassBases, ClassId};
use super::invariants::QuadraticInvariants;
use super::tensor::{CovDeg3Tensor, LEN};
use crate::acms::{standard_structure, AlmostContactMetric};
use crate::algebra7::{G2Structure, Matrix7, Vector7, DIM};
use crate::error::Result;
use crate::linalg::dot;
use crate::scalar::Real;

/// Twelve orthogonal components of a tensor and the part of it outside
/// `C(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassDecomposition<T> {
    /// `β₁ … β₁₂` in coordinate components.
    pub beta: Vec<CovDeg3Tensor<T>>,
    pub component_norms: [T; 12],
    pub d1_norm: T,
    pub d2_norm: T,
    pub alpha_norm: T,
    /// `‖α - Σ βᵢ‖`
    pub residual_norm: T,
}

fn slice_norm<T: Real>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

impl<T: Real> ClassDecomposition<T> {
    pub(crate) fn assemble(
        a: &[T],
        parts: &[Vec<T>],
        d1: &[T],
        d2: &[T],
        to_coordinates: impl Fn(&[T]) -> CovDeg3Tensor<T>,
    ) -> Self {
        let mut rest = a.to_vec();
        for p in parts {
            for (r, x) in rest.iter_mut().zip(p) {
                *r = *r - *x;
            }
        }
        Self {
            beta: parts.iter().map(|p| to_coordinates(p)).collect(),
            component_norms: std::array::from_fn(|i| slice_norm(&parts[i])),
            d1_norm: slice_norm(d1),
            d2_norm: slice_norm(d2),
            alpha_norm: slice_norm(a),
            residual_norm: slice_norm(&rest),
        }
    }

    pub fn norms(&self) -> ClassNorms<T> {
        ClassNorms { component: self.component_norms, alpha_norm: self.alpha_norm }
    }

    pub fn beta(&self, class: ClassId) -> &CovDeg3Tensor<T> {
        &self.beta[class.index().expect("irreducible class")]
    }
}

/// Component norms of one tensor, without the components themselves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassNorms<T> {
    pub component: [T; 12],
    pub alpha_norm: T,
}

impl<T: Real> ClassNorms<T> {
    pub fn get(&self, class: ClassId) -> T {
        match class {
            ClassId::D1 | ClassId::D2 => {
                class.members().iter().fold(T::zero(), |s, c| s + self.get(*c).powi(2)).sqrt()
            }
            c => self.component[c.index().expect("irreducible class")],
        }
    }
}

pub fn decompose<T: Real>(alpha: &CovDeg3Tensor<T>, bases: &ClassBases<T>) -> ClassDecomposition<T> {
    bases.decompose(alpha)
}

/// A `g`-orthonormal frame `(u₁, u₂, u₃, -φu₃, -φu₂, φu₁, ξ)` in which `φ`
/// has the same matrix as `e₇ ×` for the model 3-form.
///
/// `u₁, u₂, u₃` come from Gram–Schmidt of the coordinate axes against `ξ`
/// and the vectors already chosen; an axis whose residual is shorter than
/// half its length is skipped in favour of the next one.
pub fn adapted_frame<T: Real>(acms: &AlmostContactMetric<T>) -> Result<Matrix7<T>> {
    let g = &acms.metric;
    let phi = acms.phi();
    let xi = *acms.xi();
    let mut span = vec![xi];
    let mut us: Vec<Vector7<T>> = Vec::with_capacity(3);
    let residual = |span: &[Vector7<T>], v: Vector7<T>| {
        let mut w = v;
        for _ in 0..2 {
            for s in span {
                w = w - *s * g.inner(s, &w);
            }
        }
        w
    };
    let push = |span: &mut Vec<Vector7<T>>, us: &mut Vec<Vector7<T>>, w: Vector7<T>| {
        let u = w * (T::one() / g.norm(&w));
        span.push(u);
        span.push(phi.mul_vec(&u));
        us.push(u);
    };
    for axis in 0..DIM {
        if us.len() == 3 {
            break;
        }
        let e = Vector7::basis(axis);
        let w = residual(&span, e);
        if g.norm(&w) >= T::lit(0.5) * g.norm(&e) {
            push(&mut span, &mut us, w);
        }
    }
    while us.len() < 3 {
        let w = (0..DIM)
            .map(|a| residual(&span, Vector7::basis(a)))
            .fold(Vector7::zero(), |best, w| if g.norm(&w) > g.norm(&best) { w } else { best });
        push(&mut span, &mut us, w);
    }
    let cols = [
        us[0],
        us[1],
        us[2],
        -phi.mul_vec(&us[2]),
        -phi.mul_vec(&us[1]),
        phi.mul_vec(&us[0]),
        xi,
    ];
    let frame = Matrix7::from_columns(&cols);
    check_frame(acms, &frame)?;
    Ok(frame)
}

/// Everything computed for one tensor by [`Decomposer`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointDecomposition<T> {
    pub norms: ClassNorms<T>,
    pub residual_norm: T,
    pub invariants: QuadraticInvariants<T>,
    pub frame: Matrix7<T>,
}

/// Decomposes tensors at arbitrary points by moving them into an adapted
/// frame, where every almost contact metric structure looks like the model
/// `(e₇ ×, e₇, dx⁷, I)`. The bases are built once, for the model.
#[derive(Clone, Debug)]
pub struct Decomposer<T> {
    model: ClassBases<T>,
    model_phi: Matrix7<T>,
    rows: Vec<Vec<T>>,
    ranges: [std::ops::Range<usize>; 12],
}

impl<T: Real> Decomposer<T> {
    pub fn new() -> Result<Self> {
        let g2 = G2Structure::<T>::model();
        let acms = standard_structure(&g2, &Vector7::basis(DIM - 1))?;
        let model = ClassBases::build_in_frame(&acms, &Matrix7::identity())?;
        let mut rows = Vec::new();
        let ranges = std::array::from_fn(|i| {
            let start = rows.len();
            rows.extend(model.frame_basis(ClassId::ALL[i]).iter().cloned());
            start..rows.len()
        });
        Ok(Self { model_phi: *acms.phi(), model, rows, ranges })
    }

    pub fn model_bases(&self) -> &ClassBases<T> {
        &self.model
    }

    fn coefficients(&self, a: &[T]) -> Vec<T> {
        self.rows.iter().map(|r| dot(r, a)).collect()
    }

    /// Component norms and invariants of `alpha` at a point with structure
    /// `acms`.
    pub fn analyze(&self, acms: &AlmostContactMetric<T>, alpha: &CovDeg3Tensor<T>) -> Result<PointDecomposition<T>> {
        let frame = adapted_frame(acms)?;
        let a = alpha.transform(&frame);
        let c = self.coefficients(a.as_slice());
        let component = std::array::from_fn(|i| slice_norm(&c[self.ranges[i].clone()]));
        let alpha_norm = a.norm();
        let mut rest = a.as_slice().to_vec();
        for (ck, row) in c.iter().zip(&self.rows) {
            for (r, b) in rest.iter_mut().zip(row) {
                *r = *r - *ck * *b;
            }
        }
        let residual_norm = slice_norm(&rest);
        let invariants = QuadraticInvariants::from_frame_components(&a, &self.model_phi);
        Ok(PointDecomposition { norms: ClassNorms { component, alpha_norm }, residual_norm, invariants, frame })
    }

    /// Full decomposition with the components mapped back to coordinates.
    pub fn decompose(&self, acms: &AlmostContactMetric<T>, alpha: &CovDeg3Tensor<T>) -> Result<ClassDecomposition<T>> {
        let frame = adapted_frame(acms)?;
        let frame_inv = check_frame(acms, &frame)?;
        let a = alpha.transform(&frame);
        let c = self.coefficients(a.as_slice());
        let parts: Vec<Vec<T>> = (0..12)
            .map(|i| {
                let mut v = vec![T::zero(); LEN];
                for k in self.ranges[i].clone() {
                    for (o, b) in v.iter_mut().zip(&self.rows[k]) {
                        *o = *o + c[k] * *b;
                    }
                }
                v
            })
            .collect();
        let sum = |r: std::ops::Range<usize>| -> Vec<T> {
            let mut v = vec![T::zero(); LEN];
            for p in &parts[r] {
                for (o, x) in v.iter_mut().zip(p) {
                    *o = *o + *x;
                }
            }
            v
        };
        let d1 = sum(0..4);
        let d2 = sum(4..11);
        Ok(ClassDecomposition::assemble(a.as_slice(), &parts, &d1, &d2, |v| {
            CovDeg3Tensor::from_vec(v.to_vec()).expect("343 components").transform(&frame_inv)
        }))
    }
}
