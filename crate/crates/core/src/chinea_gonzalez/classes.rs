use std::fmt;

use serde::{Deserialize, Serialize};

use super::tensor::{idx, CovDeg3Tensor, LEN};
use crate::acms::AlmostContactMetric;
use crate::algebra7::{Matrix7, Vector7, DIM};
use crate::error::{Error, Result};
use crate::linalg::{dot, orthonormal_nullspace};
use crate::scalar::Real;

/// Invariant subspaces of `C(V)`: the twelve irreducible classes and the
/// two intermediate sums `D₁ = C₁ ⊕ … ⊕ C₄`, `D₂ = C₅ ⊕ … ⊕ C₁₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    D1,
    D2,
}

impl ClassId {
    pub const ALL: [ClassId; 12] = [
        ClassId::C1,
        ClassId::C2,
        ClassId::C3,
        ClassId::C4,
        ClassId::C5,
        ClassId::C6,
        ClassId::C7,
        ClassId::C8,
        ClassId::C9,
        ClassId::C10,
        ClassId::C11,
        ClassId::C12,
    ];

    /// `C_k` for `k` in `1..=12`.
    pub fn from_number(k: usize) -> Option<Self> {
        k.checked_sub(1).and_then(|i| Self::ALL.get(i).copied())
    }

    /// Position in [`Self::ALL`]; `None` for `D₁`, `D₂`.
    pub fn index(self) -> Option<usize> {
        Self::ALL.iter().position(|c| *c == self)
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 14] =
            ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "D1", "D2"];
        NAMES[self as usize]
    }

    /// The irreducible classes a sum subspace is made of.
    pub fn members(self) -> &'static [ClassId] {
        match self {
            ClassId::D1 => &Self::ALL[0..4],
            ClassId::D2 => &Self::ALL[4..11],
            _ => std::slice::from_ref(&Self::ALL[self as usize]),
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An orthonormal basis of `C(V)` (`class == None`) or of one of its
/// invariant subspaces, in coordinate components.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<T> {
    pub class: Option<ClassId>,
    pub basis: Vec<CovDeg3Tensor<T>>,
}

impl<T> SubspaceBasis<T> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// `(φ, ξ, η)` written in a `g`-orthonormal frame, where the metric is the
/// Euclidean one.
pub(crate) struct FrameModel<T> {
    phi: Matrix7<T>,
    xi: Vector7<T>,
}

impl<T: Real> FrameModel<T> {
    pub(crate) fn new(acms: &AlmostContactMetric<T>, frame: &Matrix7<T>, frame_inv: &Matrix7<T>) -> Self {
        Self { phi: frame_inv.mul_mat(acms.phi()).mul_mat(frame), xi: frame_inv.mul_vec(acms.xi()) }
    }

    fn eta(&self, a: usize) -> T {
        self.xi.0[a]
    }

    fn phi_col(&self, a: usize) -> Vector7<T> {
        self.phi.column(a)
    }
}

/// Accumulates a linear functional on 3-tensors.
struct Row<T>(Vec<T>);

impl<T: Real> Row<T> {
    fn new() -> Self {
        Row(vec![T::zero(); LEN])
    }

    /// Adds `s · α(x, y, z)`.
    fn ev(&mut self, s: T, x: &Vector7<T>, y: &Vector7<T>, z: &Vector7<T>) -> &mut Self {
        if s == T::zero() {
            return self;
        }
        for a in 0..DIM {
            if x.0[a] == T::zero() {
                continue;
            }
            for b in 0..DIM {
                let xy = s * x.0[a] * y.0[b];
                if xy == T::zero() {
                    continue;
                }
                for c in 0..DIM {
                    self.0[idx(a, b, c)] = self.0[idx(a, b, c)] + xy * z.0[c];
                }
            }
        }
        self
    }

    /// Adds `s · c₁₂α(z)`.
    fn c12(&mut self, s: T, z: &Vector7<T>) -> &mut Self {
        for i in 0..DIM {
            let e = Vector7::basis(i);
            self.ev(s, &e, &e, z);
        }
        self
    }

    /// Adds `s · c̄₁₂α(z)`.
    fn c12bar(&mut self, s: T, m: &FrameModel<T>, z: &Vector7<T>) -> &mut Self {
        for i in 0..DIM {
            self.ev(s, &Vector7::basis(i), &m.phi_col(i), z);
        }
        self
    }

    fn done(&mut self) -> Vec<T> {
        std::mem::take(&mut self.0)
    }
}

fn basis_vectors<T: Real>() -> [Vector7<T>; DIM] {
    std::array::from_fn(Vector7::basis)
}

/// The two families of linear equations cutting out `C(V)`.
pub(crate) fn ambient_rows<T: Real>(m: &FrameModel<T>) -> Vec<Vec<T>> {
    let e = basis_vectors::<T>();
    let one = T::one();
    let mut rows = Vec::with_capacity(2 * LEN);
    for x in 0..DIM {
        for y in 0..DIM {
            for z in 0..DIM {
                rows.push(Row::new().ev(one, &e[x], &e[y], &e[z]).ev(one, &e[x], &e[z], &e[y]).done());
                rows.push(
                    Row::new()
                        .ev(one, &e[x], &e[y], &e[z])
                        .ev(one, &e[x], &m.phi_col(y), &m.phi_col(z))
                        .ev(-m.eta(y), &e[x], &m.xi, &e[z])
                        .ev(-m.eta(z), &e[x], &e[y], &m.xi)
                        .done(),
                );
            }
        }
    }
    rows
}

/// Defining equations of a subspace, to be imposed on top of `C(V)`.
pub(crate) fn class_rows<T: Real>(class: ClassId, m: &FrameModel<T>) -> Vec<Vec<T>> {
    let e = basis_vectors::<T>();
    let one = T::one();
    let n = T::lit(3.0);
    let xi = &m.xi;
    let mut rows = Vec::new();
    for x in 0..DIM {
        for y in 0..DIM {
            for z in 0..DIM {
                let (ex, ey, ez) = (&e[x], &e[y], &e[z]);
                let (fx, fy, fz) = (m.phi_col(x), m.phi_col(y), m.phi_col(z));
                let (hx, hy, hz) = (m.eta(x), m.eta(y), m.eta(z));
                let ip = |a: usize, b: usize| if a == b { one } else { T::zero() };
                let ip_phi = |a: usize, b: usize| m.phi.0[a][b];
                match class {
                    ClassId::D1 => {
                        rows.push(Row::new().ev(one, xi, ey, ez).done());
                        rows.push(Row::new().ev(one, ex, xi, ez).done());
                    }
                    ClassId::D2 => rows.push(
                        Row::new()
                            .ev(one, ex, ey, ez)
                            .ev(-hx, xi, ey, ez)
                            .ev(-hy, ex, xi, ez)
                            .ev(-hz, ex, ey, xi)
                            .done(),
                    ),
                    ClassId::C12 => rows.push(
                        Row::new().ev(one, ex, ey, ez).ev(-hx * hy, xi, xi, ez).ev(-hx * hz, xi, ey, xi).done(),
                    ),
                    ClassId::C1 => {
                        rows.push(Row::new().ev(one, ex, ey, ez).ev(one, ey, ex, ez).done());
                        rows.push(Row::new().ev(one, ex, ey, xi).done());
                    }
                    ClassId::C2 => {
                        rows.push(Row::new().ev(one, ex, ey, ez).ev(one, ey, ez, ex).ev(one, ez, ex, ey).done());
                        rows.push(Row::new().ev(one, ex, ey, xi).done());
                    }
                    ClassId::C3 => rows.push(Row::new().ev(one, ex, ey, ez).ev(-one, &fx, &fy, ez).done()),
                    ClassId::C4 => {
                        let k = -one / (T::lit(2.0) * (n - one));
                        rows.push(
                            Row::new()
                                .ev(one, ex, ey, ez)
                                .c12(k * (ip(x, y) - hx * hy), ez)
                                .c12(-k * (ip(x, z) - hx * hz), ey)
                                .c12(-k * ip_phi(x, y), &fz)
                                .c12(k * ip_phi(x, z), &fy)
                                .done(),
                        )
                    }
                    ClassId::C5 => {
                        let k = -one / (T::lit(2.0) * n);
                        rows.push(
                            Row::new()
                                .ev(one, ex, ey, ez)
                                .c12bar(k * ip_phi(x, z) * hy, m, xi)
                                .c12bar(-k * ip_phi(x, y) * hz, m, xi)
                                .done(),
                        )
                    }
                    ClassId::C6 => {
                        let k = -one / (T::lit(2.0) * n);
                        rows.push(
                            Row::new()
                                .ev(one, ex, ey, ez)
                                .c12(k * ip(x, y) * hz, xi)
                                .c12(-k * ip(x, z) * hy, xi)
                                .done(),
                        )
                    }
                    ClassId::C7 => rows.push(
                        Row::new().ev(one, ex, ey, ez).ev(-hz, ey, ex, xi).ev(hy, &fx, &fz, xi).done(),
                    ),
                    ClassId::C8 => rows.push(
                        Row::new().ev(one, ex, ey, ez).ev(hz, ey, ex, xi).ev(hy, &fx, &fz, xi).done(),
                    ),
                    ClassId::C9 => rows.push(
                        Row::new().ev(one, ex, ey, ez).ev(-hz, ey, ex, xi).ev(-hy, &fx, &fz, xi).done(),
                    ),
                    ClassId::C10 => rows.push(
                        Row::new().ev(one, ex, ey, ez).ev(hz, ey, ex, xi).ev(-hy, &fx, &fz, xi).done(),
                    ),
                    ClassId::C11 => rows.push(Row::new().ev(one, ex, ey, ez).ev(hx, xi, &fy, &fz).done()),
                }
            }
        }
    }
    match class {
        ClassId::C3 => {
            for z in &e {
                rows.push(Row::new().c12(one, z).done());
            }
        }
        ClassId::C4 | ClassId::C7 => rows.push(Row::new().c12(one, xi).done()),
        ClassId::C8 => rows.push(Row::new().c12bar(one, m, xi).done()),
        _ => {}
    }
    rows
}

const SPAN_TOL: f64 = 1e-9;

/// Orthonormal bases of `C(V)` and all its invariant subspaces at one point,
/// stored as frame components.
#[derive(Clone, Debug)]
pub struct ClassBases<T> {
    frame: Matrix7<T>,
    frame_inv: Matrix7<T>,
    ambient: Vec<Vec<T>>,
    classes: Vec<Vec<Vec<T>>>,
    d1: Vec<Vec<T>>,
    d2: Vec<Vec<T>>,
}

/// A `g`-orthonormal frame by Gram–Schmidt of the coordinate axes.
pub fn coordinate_frame<T: Real>(acms: &AlmostContactMetric<T>) -> Matrix7<T> {
    let axes: Vec<Vector7<T>> = (0..DIM).map(Vector7::basis).collect();
    let q = acms.metric.orthonormalize(&axes);
    let cols: [Vector7<T>; DIM] = std::array::from_fn(|i| q[i]);
    Matrix7::from_columns(&cols)
}

/// `max |Fᵀ G F - I|`.
pub fn frame_residual<T: Real>(acms: &AlmostContactMetric<T>, frame: &Matrix7<T>) -> T {
    (frame.transpose().mul_mat(acms.metric.gram()).mul_mat(frame) - Matrix7::identity()).max_abs()
}

pub(crate) fn check_frame<T: Real>(acms: &AlmostContactMetric<T>, frame: &Matrix7<T>) -> Result<Matrix7<T>> {
    let r = frame_residual(acms, frame);
    if !(r <= T::lit(1e-10)) {
        return Err(Error::FrameNotOrthonormal { residual: r.to_f64_lossy() });
    }
    frame.inverse().ok_or(Error::FrameNotOrthonormal { residual: r.to_f64_lossy() })
}

fn restrict<T: Real>(rows: &[Vec<T>], basis: &[Vec<T>]) -> Vec<Vec<T>> {
    rows.iter().map(|r| basis.iter().map(|b| dot(r, b)).collect()).collect()
}

fn lift<T: Real>(coeffs: &[Vec<T>], basis: &[Vec<T>]) -> Vec<Vec<T>> {
    coeffs
        .iter()
        .map(|c| {
            let mut v = vec![T::zero(); LEN];
            for (ci, b) in c.iter().zip(basis) {
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk = *vk + *ci * *bk;
                }
            }
            v
        })
        .collect()
}

impl<T: Real> ClassBases<T> {
    /// Bases built in the Gram–Schmidt coordinate frame.
    pub fn build(acms: &AlmostContactMetric<T>) -> Result<Self> {
        Self::build_in_frame(acms, &coordinate_frame(acms))
    }

    /// Bases built in the given `g`-orthonormal frame (columns).
    pub fn build_in_frame(acms: &AlmostContactMetric<T>, frame: &Matrix7<T>) -> Result<Self> {
        let frame_inv = check_frame(acms, frame)?;
        let model = FrameModel::new(acms, frame, &frame_inv);
        let tol = T::lit(SPAN_TOL);
        let ambient = orthonormal_nullspace(&ambient_rows(&model), LEN, tol);
        let subspace = |class: ClassId| -> Result<Vec<Vec<T>>> {
            let reduced = restrict(&class_rows(class, &model), &ambient);
            let coeffs = orthonormal_nullspace(&reduced, ambient.len(), tol);
            if coeffs.is_empty() {
                return Err(Error::BasisConstructionFailed { class });
            }
            Ok(lift(&coeffs, &ambient))
        };
        let classes = ClassId::ALL.iter().map(|c| subspace(*c)).collect::<Result<Vec<_>>>()?;
        let d1 = subspace(ClassId::D1)?;
        let d2 = subspace(ClassId::D2)?;
        Ok(Self { frame: *frame, frame_inv, ambient, classes, d1, d2 })
    }

    pub fn frame(&self) -> &Matrix7<T> {
        &self.frame
    }

    pub fn ambient_dimension(&self) -> usize {
        self.ambient.len()
    }

    pub fn dimension(&self, class: ClassId) -> usize {
        self.frame_basis(class).len()
    }

    pub(crate) fn frame_basis(&self, class: ClassId) -> &[Vec<T>] {
        match class {
            ClassId::D1 => &self.d1,
            ClassId::D2 => &self.d2,
            c => &self.classes[c.index().expect("irreducible class")],
        }
    }

    fn to_coordinates(&self, v: &[T]) -> CovDeg3Tensor<T> {
        CovDeg3Tensor::from_vec(v.to_vec()).expect("343 components").transform(&self.frame_inv)
    }

    pub fn ambient(&self) -> SubspaceBasis<T> {
        SubspaceBasis { class: None, basis: self.ambient.iter().map(|v| self.to_coordinates(v)).collect() }
    }

    pub fn subspace(&self, class: ClassId) -> SubspaceBasis<T> {
        SubspaceBasis {
            class: Some(class),
            basis: self.frame_basis(class).iter().map(|v| self.to_coordinates(v)).collect(),
        }
    }

    /// Orthogonal projection of `alpha` onto a subspace.
    pub fn project(&self, class: ClassId, alpha: &CovDeg3Tensor<T>) -> CovDeg3Tensor<T> {
        let a = alpha.transform(&self.frame);
        let p = project_frame(self.frame_basis(class), a.as_slice());
        self.to_coordinates(&p)
    }

    /// Orthogonal projection onto `C(V)`.
    pub fn project_ambient(&self, alpha: &CovDeg3Tensor<T>) -> CovDeg3Tensor<T> {
        let a = alpha.transform(&self.frame);
        self.to_coordinates(&project_frame(&self.ambient, a.as_slice()))
    }

    pub fn decompose(&self, alpha: &CovDeg3Tensor<T>) -> super::ClassDecomposition<T> {
        let a = alpha.transform(&self.frame);
        let parts: Vec<Vec<T>> = self.classes.iter().map(|b| project_frame(b, a.as_slice())).collect();
        let d1 = project_frame(&self.d1, a.as_slice());
        let d2 = project_frame(&self.d2, a.as_slice());
        super::ClassDecomposition::assemble(a.as_slice(), &parts, &d1, &d2, |v| self.to_coordinates(v))
    }
}

pub(crate) fn project_frame<T: Real>(basis: &[Vec<T>], a: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); LEN];
    for b in basis {
        let c = dot(a, b);
        for (o, bk) in out.iter_mut().zip(b) {
            *o = *o + c * *bk;
        }
    }
    out
}

pub fn ambient_basis<T: Real>(acms: &AlmostContactMetric<T>) -> Result<SubspaceBasis<T>> {
    let frame = coordinate_frame(acms);
    let frame_inv = check_frame(acms, &frame)?;
    let model = FrameModel::new(acms, &frame, &frame_inv);
    let ambient = orthonormal_nullspace(&ambient_rows(&model), LEN, T::lit(SPAN_TOL));
    Ok(SubspaceBasis {
        class: None,
        basis: ambient
            .iter()
            .map(|v| CovDeg3Tensor::from_vec(v.clone()).expect("343 components").transform(&frame_inv))
            .collect(),
    })
}

pub fn subspace_basis<T: Real>(class: ClassId, acms: &AlmostContactMetric<T>) -> Result<SubspaceBasis<T>> {
    Ok(ClassBases::build(acms)?.subspace(class))
}
