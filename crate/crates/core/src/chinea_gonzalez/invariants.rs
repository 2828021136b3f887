use serde::{Deserialize, Serialize};

use super::classes::check_frame;
use super::tensor::CovDeg3Tensor;
use crate::acms::AlmostContactMetric;
use crate::algebra7::{Matrix7, DIM};
use crate::error::{Error, Result};
use crate::scalar::Real;

const XI: usize = DIM - 1;
const PERP: std::ops::Range<usize> = 0..DIM - 1;

/// The eighteen quadratic invariants `i₁ … i₁₈` of a tensor in `C(V)`,
/// together with the squared norms they are compared against.
///
/// Sums run over an orthonormal frame `e₁ … e₆` of `ξ^⊥`. `i₁₅` is taken as
/// `Σ_{i,j} α(e_i, φe_i, ξ) α(e_j, e_j, ξ)`, the product of the two traces,
/// which is independent of the frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticInvariants<T> {
    pub i: [T; 18],
    pub norm_sq: T,
    /// `c₁₂α` in the frame; the last entry is `c₁₂α(ξ)`.
    pub c12: [T; DIM],
    /// `c̄₁₂α` in the frame; the last entry is `c̄₁₂α(ξ)`.
    pub c12bar: [T; DIM],
}

impl<T: Real> QuadraticInvariants<T> {
    /// `i_m`, 1-based.
    pub fn get(&self, m: usize) -> T {
        self.i[m - 1]
    }

    pub fn c12_norm_sq(&self) -> T {
        self.c12.iter().fold(T::zero(), |a, v| a + *v * *v)
    }

    pub fn c12bar_norm_sq(&self) -> T {
        self.c12bar.iter().fold(T::zero(), |a, v| a + *v * *v)
    }

    /// `Σ_{k ≤ 6} c₁₂α(e_k)²`.
    pub fn c12_perp_sq(&self) -> T {
        self.c12[PERP].iter().fold(T::zero(), |a, v| a + *v * *v)
    }

    /// Invariants from the components of `alpha` in an adapted frame
    /// (`ξ = e₇`) and the matrix of `φ` in that frame.
    pub fn from_frame_components(a: &CovDeg3Tensor<T>, phi: &Matrix7<T>) -> Self {
        let ajj = a.contract_slot(0, phi).contract_slot(1, phi);
        let aj = a.contract_slot(1, phi);
        let ja = a.contract_slot(0, phi);
        let aaj = a.contract_slot(2, phi);
        let z = T::zero;
        let mut i = [T::zero(); 18];
        for p in PERP {
            for q in PERP {
                for r in PERP {
                    let v = a.get(p, q, r);
                    i[0] = i[0] + v * v;
                    i[1] = i[1] + v * a.get(q, p, r);
                    i[2] = i[2] + v * ajj.get(p, q, r);
                }
            }
        }
        let trace_perp: Vec<T> = (0..DIM).map(|k| PERP.fold(z(), |s, p| s + a.get(p, p, k))).collect();
        let trace_phi: Vec<T> = (0..DIM).map(|k| PERP.fold(z(), |s, p| s + aj.get(p, p, k))).collect();
        i[3] = PERP.fold(z(), |s, k| s + trace_perp[k] * trace_perp[k]);
        for q in PERP {
            for r in PERP {
                let x = a.get(XI, q, r);
                let y = a.get(q, XI, r);
                i[4] = i[4] + x * x;
                i[5] = i[5] + y * y;
                i[6] = i[6] + x * y;
                i[12] = i[12] + x * ja.get(q, XI, r);
                let w = a.get(q, r, XI);
                i[7] = i[7] + w * a.get(r, q, XI);
                i[8] = i[8] + w * ajj.get(q, r, XI);
                i[10] = i[10] + w * aj.get(r, q, XI);
                i[11] = i[11] + w * ajj.get(r, q, XI);
            }
        }
        i[9] = trace_perp[XI] * trace_perp[XI];
        i[13] = trace_phi[XI] * trace_phi[XI];
        i[14] = trace_phi[XI] * trace_perp[XI];
        for k in PERP {
            let x = a.get(XI, XI, k);
            i[15] = i[15] + x * x;
            i[16] = i[16] + trace_perp[k] * x;
            i[17] = i[17] + PERP.fold(z(), |s, p| s + aaj.get(p, p, k)) * x;
        }
        let c12 = std::array::from_fn(|k| trace_perp[k] + a.get(XI, XI, k));
        let c12bar = std::array::from_fn(|k| trace_phi[k]);
        Self { i, norm_sq: a.dot(a), c12, c12bar }
    }

    /// As tabulated, the identities
    /// `‖α‖² = i₁ + i₅ + 2i₆ + i₁₆`, `‖c₁₂α‖² = i₄ + i₁₀ + i₁₆ + 2i₁₇`,
    /// `‖c̄₁₂α‖² = i₄ + i₁₄`, returned as `lhs - rhs`.
    ///
    /// The first undercounts the `α(ξ, ξ, ·)` block: the norm also contains
    /// `α(ξ, e_k, ξ)² = α(ξ, ξ, e_k)²`, so the residual is `i₁₆` in general.
    pub fn norm_identity_residuals(&self) -> [T; 3] {
        let g = |m| self.get(m);
        let two = T::lit(2.0);
        [
            self.norm_sq - (g(1) + g(5) + two * g(6) + g(16)),
            self.c12_norm_sq() - (g(4) + g(10) + g(16) + two * g(17)),
            self.c12bar_norm_sq() - (g(4) + g(14)),
        ]
    }

    /// `‖α‖² - (i₁ + i₅ + 2i₆ + 2i₁₆)`, which vanishes on all of `C(V)`.
    pub fn full_norm_residual(&self) -> T {
        let g = |m| self.get(m);
        let two = T::lit(2.0);
        self.norm_sq - (g(1) + g(5) + two * g(6) + two * g(16))
    }
}

/// Invariants of `alpha` evaluated in `frame`, whose columns must be
/// `g`-orthonormal with the last one equal to `ξ`.
pub fn quadratic_invariants<T: Real>(
    alpha: &CovDeg3Tensor<T>,
    frame: &Matrix7<T>,
    acms: &AlmostContactMetric<T>,
) -> Result<QuadraticInvariants<T>> {
    let inv = check_frame(acms, frame)?;
    let last = (frame.column(XI) - *acms.xi()).max_abs();
    if !(last <= T::lit(1e-10)) {
        return Err(Error::FrameNotOrthonormal { residual: last.to_f64_lossy() });
    }
    let phi = inv.mul_mat(acms.phi()).mul_mat(frame);
    Ok(QuadraticInvariants::from_frame_components(&alpha.transform(frame), &phi))
}
