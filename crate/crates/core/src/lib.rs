//! Exact multidimensional continued fractions.
//!
//! Field arithmetic in `Q(α)` with certified embeddings ([`nfield`]),
//! conjugate-vector systems and the Markov–Davenport form ([`conjugates`]),
//! the expansion algorithms ([`engines`]), exact period detection
//! ([`periodicity`]) and unimodular matrices commuting with a given integer
//! matrix ([`dirichlet`]).

pub mod conjugates;
pub mod dirichlet;
pub mod engines;
pub mod error;
pub mod interval;
pub mod matrix;
pub mod nfield;
pub mod periodicity;
pub mod poly;
pub mod serde_util;

pub use error::{Error, Result};
pub use nfield::{EmbeddingIndex, EmbeddingKind, FieldElement, MinimalPolynomial};
pub use poly::QPoly;
pub use matrix::IntegerMatrix;
pub use conjugates::{ConjugateSystem, SystemState};
pub use engines::{Algorithm, Element, ExpansionStep, RunLimits};
pub use periodicity::{Expansion, Status};
pub use dirichlet::{Answer, Assembly, DirichletOptions, EigenData};
