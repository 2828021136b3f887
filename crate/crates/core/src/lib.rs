//! G₂ cross-product algebra, the almost contact metric structure a unit
//! vector field induces on a manifold with G₂-structure, and the
//! Chinea–Gonzalez decomposition of `∇ω`, evaluated on the flat 7-torus.
//!
//! The core types are generic over the scalar. The multilinear algebra
//! ([`algebra7`]) works over any [`Scalar`], including exact rationals; the
//! field calculus and the decomposition need a floating point [`Real`]. The
//! aliases below fix `f64`, which is what the command-line tool uses.

pub mod acms;
pub mod algebra7;
pub mod chinea_gonzalez;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod scalar;
pub mod three_structure;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational scalar for the algebra layer.
pub type Rational = num_rational::Ratio<i64>;

pub type Vector7 = algebra7::Vector7<f64>;
pub type Covector7 = algebra7::Covector7<f64>;
pub type Matrix7 = algebra7::Matrix7<f64>;
pub type Metric7 = algebra7::Metric7<f64>;
pub type KForm7 = algebra7::KForm7<f64>;
pub type ThreeForm7 = algebra7::ThreeForm7<f64>;
pub type G2Structure = algebra7::G2Structure<f64>;
pub type AlmostContact = acms::AlmostContact<f64>;
pub type AlmostContactMetric = acms::AlmostContactMetric<f64>;
pub type CovDeg3Tensor = chinea_gonzalez::CovDeg3Tensor<f64>;
pub type QuadraticInvariants = chinea_gonzalez::QuadraticInvariants<f64>;
pub type ClassDecomposition = chinea_gonzalez::ClassDecomposition<f64>;
pub type TrigVectorField = fields::TrigVectorField<f64>;
pub type LatticeSampling = fields::LatticeSampling<f64>;
pub type DifferentiationContext = fields::DifferentiationContext<f64>;
pub type AlmostContact3 = three_structure::AlmostContact3<f64>;

pub type ExactVector7 = algebra7::Vector7<Rational>;
pub type ExactKForm7 = algebra7::KForm7<Rational>;
pub type ExactThreeForm7 = algebra7::ThreeForm7<Rational>;
