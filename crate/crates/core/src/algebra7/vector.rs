use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::scalar::{Real, Scalar};

pub const DIM: usize = 7;

/// A vector in the 7-dimensional model space, in coordinate components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector7<T>(pub [T; DIM]);

/// A linear functional on [`Vector7`], in coordinate components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Covector7<T>(pub [T; DIM]);

/// A 7×7 matrix stored row-major: `m.0[i][j]` is row `i`, column `j`.
///
/// As an endomorphism it acts on column vectors: `(M v)_i = Σ_j m_ij v_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix7<T>(pub [[T; DIM]; DIM]);

impl<T: Scalar> Vector7<T> {
    pub fn zero() -> Self {
        Self([T::zero(); DIM])
    }

    /// The coordinate basis vector `e_{i+1}` (0-based axis index).
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }

    pub fn from_fn(f: impl FnMut(usize) -> T) -> Self {
        Self(std::array::from_fn(f))
    }

    /// Euclidean dot product of the components.
    pub fn dot(&self, other: &Self) -> T {
        (0..DIM).fold(T::zero(), |acc, i| acc + self.0[i] * other.0[i])
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .fold(T::zero(), |acc, x| if x.abs() > acc { x.abs() } else { acc })
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i| self.0[i] * s)
    }

    pub fn to_covector(self) -> Covector7<T> {
        Covector7(self.0)
    }
}

impl<T: Real> Vector7<T> {
    pub fn euclidean_norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn to_f64(&self) -> [f64; DIM] {
        std::array::from_fn(|i| self.0[i].to_f64_lossy())
    }
}

impl<T: Scalar> Covector7<T> {
    pub fn zero() -> Self {
        Self([T::zero(); DIM])
    }

    pub fn apply(&self, v: &Vector7<T>) -> T {
        (0..DIM).fold(T::zero(), |acc, i| acc + self.0[i] * v.0[i])
    }

    /// `η ∘ M`, the pullback of the functional through an endomorphism.
    pub fn compose(&self, m: &Matrix7<T>) -> Self {
        Self(std::array::from_fn(|j| {
            (0..DIM).fold(T::zero(), |acc, i| acc + self.0[i] * m.0[i][j])
        }))
    }

    pub fn max_abs(&self) -> T {
        Vector7(self.0).max_abs()
    }

    pub fn scale(&self, s: T) -> Self {
        Self(std::array::from_fn(|i| self.0[i] * s))
    }
}

impl<T: Scalar> Matrix7<T> {
    pub fn zero() -> Self {
        Self([[T::zero(); DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vector7<T>; DIM]) -> Self {
        Self::from_fn(|i, j| cols[j].0[i])
    }

    pub fn column(&self, j: usize) -> Vector7<T> {
        Vector7::from_fn(|i| self.0[i][j])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn mul_vec(&self, v: &Vector7<T>) -> Vector7<T> {
        Vector7::from_fn(|i| (0..DIM).fold(T::zero(), |acc, j| acc + self.0[i][j] * v.0[j]))
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..DIM).fold(T::zero(), |acc, k| acc + self.0[i][k] * other.0[k][j])
        })
    }

    /// The rank-one endomorphism `X ↦ c(X) v`, written `c ⊗ v`.
    pub fn rank_one(c: &Covector7<T>, v: &Vector7<T>) -> Self {
        Self::from_fn(|i, j| v.0[i] * c.0[j])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> T {
        (0..DIM).fold(T::zero(), |acc, i| acc + self.0[i][i])
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.0 {
            for x in row {
                if x.abs() > m {
                    m = x.abs();
                }
            }
        }
        m
    }

    /// Largest `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> T {
        (*self - self.transpose()).max_abs()
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    ///
    /// Returns `None` when a pivot falls below `T::pivot_epsilon()` times the
    /// largest entry of the matrix.
    pub fn inverse(&self) -> Option<Self> {
        let scale = self.max_abs();
        if scale == T::zero() {
            return None;
        }
        let threshold = T::pivot_epsilon() * scale;
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for col in 0..DIM {
            let mut piv = col;
            for r in col + 1..DIM {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            if a[piv][col].abs() <= threshold || a[piv][col] == T::zero() {
                return None;
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col];
            for j in 0..DIM {
                a[col][j] = a[col][j] / p;
                inv[col][j] = inv[col][j] / p;
            }
            for r in 0..DIM {
                if r != col && a[r][col] != T::zero() {
                    let f = a[r][col];
                    for j in 0..DIM {
                        a[r][j] = a[r][j] - f * a[col][j];
                        inv[r][j] = inv[r][j] - f * inv[col][j];
                    }
                }
            }
        }
        Some(Self(inv))
    }

    /// Determinant by elimination; exact for rational scalars.
    pub fn determinant(&self) -> T {
        let mut a = self.0;
        let mut det = T::one();
        for col in 0..DIM {
            let mut piv = col;
            for r in col + 1..DIM {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            if a[piv][col] == T::zero() {
                return T::zero();
            }
            if piv != col {
                a.swap(col, piv);
                det = -det;
            }
            det = det * a[col][col];
            for r in col + 1..DIM {
                let f = a[r][col] / a[col][col];
                for j in col..DIM {
                    a[r][j] = a[r][j] - f * a[col][j];
                }
            }
        }
        det
    }
}

impl<T: Real> Matrix7<T> {
    /// Lower-triangular Cholesky factor, or `None` if not positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let mut l = Self::zero();
        for i in 0..DIM {
            for j in 0..=i {
                let mut s = self.0[i][j];
                for k in 0..j {
                    s = s - l.0[i][k] * l.0[j][k];
                }
                if i == j {
                    if s <= T::zero() {
                        return None;
                    }
                    l.0[i][i] = s.sqrt();
                } else {
                    l.0[i][j] = s / l.0[j][j];
                }
            }
        }
        Some(l)
    }

    /// Singular values in descending order (square roots of the eigenvalues
    /// of `MᵀM`).
    pub fn singular_values(&self) -> [T; DIM] {
        let ata = self.transpose().mul_mat(self);
        let mut ev = crate::linalg::symmetric_eigenvalues(&ata);
        for v in ev.iter_mut() {
            *v = v.max(T::zero()).sqrt();
        }
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    /// Numerical rank: singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: T) -> usize {
        let sv = self.singular_values();
        if sv[0] == T::zero() {
            return 0;
        }
        sv.iter().filter(|s| **s > rel_tol * sv[0]).count()
    }
}

macro_rules! componentwise_ops {
    ($ty:ident) => {
        impl<T: Scalar> Add for $ty<T> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
            }
        }
        impl<T: Scalar> Sub for $ty<T> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
            }
        }
        impl<T: Scalar> Neg for $ty<T> {
            type Output = Self;
            fn neg(self) -> Self {
                Self(std::array::from_fn(|i| -self.0[i]))
            }
        }
        impl<T: Scalar> Mul<T> for $ty<T> {
            type Output = Self;
            fn mul(self, s: T) -> Self {
                Self(std::array::from_fn(|i| self.0[i] * s))
            }
        }
        impl<T: Scalar> AddAssign for $ty<T> {
            fn add_assign(&mut self, rhs: Self) {
                for i in 0..DIM {
                    self.0[i] = self.0[i] + rhs.0[i];
                }
            }
        }
        impl<T: Scalar> SubAssign for $ty<T> {
            fn sub_assign(&mut self, rhs: Self) {
                for i in 0..DIM {
                    self.0[i] = self.0[i] - rhs.0[i];
                }
            }
        }
        impl<T> Index<usize> for $ty<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }
        impl<T> IndexMut<usize> for $ty<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.0[i]
            }
        }
    };
}

componentwise_ops!(Vector7);
componentwise_ops!(Covector7);

impl<T: Scalar> Add for Matrix7<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Scalar> Sub for Matrix7<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Scalar> Neg for Matrix7<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<T: Scalar> Mul<T> for Matrix7<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Scalar> AddAssign for Matrix7<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn exact_inverse_and_determinant() {
        let m = Matrix7::<Q>::from_fn(|i, j| {
            if i == j {
                Q::from_integer(2)
            } else if j == i + 1 {
                Q::from_integer(1)
            } else {
                Q::from_integer(0)
            }
        });
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_mat(&inv), Matrix7::identity());
        assert_eq!(m.determinant(), Q::from_integer(128));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let mut m = Matrix7::<f64>::identity();
        m.0[3][3] = 0.0;
        assert!(m.inverse().is_none());
        assert_eq!(m.determinant(), 0.0);
    }

    #[test]
    fn rank_of_projector() {
        let xi = Vector7::<f64>::basis(6);
        let p = Matrix7::identity() - Matrix7::rank_one(&xi.to_covector(), &xi);
        assert_eq!(p.rank(1e-8), 6);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut m = Matrix7::<f64>::identity();
        m.0[0][0] = -1.0;
        assert!(m.cholesky().is_none());
        assert!(Matrix7::<f64>::identity().cholesky().is_some());
    }
}
