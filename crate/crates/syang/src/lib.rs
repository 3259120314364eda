//! Exact computations for sl(m|n) root data, their affine super Yangians and
//! the verification of presentations, reflections and coproducts.

#![allow(clippy::type_complexity)]

pub mod error;
pub mod hopf;
pub mod idealcheck;
pub mod matrixrep;
pub mod parser;
pub mod poly;
pub mod presentations;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod superfree;
pub mod weyl;

pub use error::{Error, Result};
pub use poly::HbarPoly;
pub use roots::{bilinear, CartanMatrix, Diagram, Letter, RootDatum, RootEntry, WeightVector};
pub use scalar::Scalar;
pub use superfree::{Element, GenKind, GeneratorId, GeneratorMap, TensorElement, Word};

/// Default exact scalar field.
pub type Q = num_rational::BigRational;
pub type Coef = HbarPoly<Q>;
pub type Elem = Element<Q>;
pub type Tensor = TensorElement<Q>;
