use thiserror::Error;

use crate::chinea_gonzalez::ClassId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate metric")]
    DegenerateMetric,

    #[error("metric is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetricMetric { asymmetry: f64 },

    #[error("not a positive 3-form")]
    NotPositiveThreeForm,

    #[error("reference volume form is zero or has the wrong degree")]
    BadReferenceVolume,

    #[error("degree overflow: {lhs} + {rhs} > 7")]
    DegreeOverflow { lhs: usize, rhs: usize },

    #[error("interior product of a degree-0 form")]
    InteriorOfScalar,

    #[error("expected a form of degree {expected}, got {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("exterior derivative of a top-degree form")]
    TopDegreeDerivative,

    #[error("xi not normalized (g(xi, xi) = {norm_sq})")]
    XiNotNormalized { norm_sq: f64 },

    #[error("vanishing field: |xi_raw| = {norm:e} at {point:?}")]
    VanishingField { norm: f64, point: [f64; 7] },

    #[error("degenerate pair: |u x v| = {norm:e} at {point:?}")]
    DegeneratePair { norm: f64, point: [f64; 7] },

    #[error("quadrature requires full grid")]
    QuadratureRequiresFullGrid,

    #[error("invalid sampling: {0}")]
    InvalidSampling(String),

    #[error("basis construction failed for {class:?}")]
    BasisConstructionFailed { class: ClassId },

    #[error("frame not orthonormal (residual {residual:e})")]
    FrameNotOrthonormal { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
