//! Dimensions and defects of higher secant varieties of osculating
//! varieties to Veronese embeddings, computed as exact ranks over a prime
//! field via Terracini's lemma, together with the closed-form predictions
//! they are checked against.

pub mod apolarity;
pub mod check;
pub mod error;
pub mod fatpoints;
pub mod field;
pub mod form;
pub mod linalg;
pub mod monomial;
pub mod predictions;
pub mod seed;
pub mod survey;
pub mod tangent;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField, DEFAULT_PRIME, SECOND_PRIME};
pub use form::Form;
pub use linalg::BasisMatrix;
pub use monomial::{binomial, monomial_basis, ExponentVector};
pub use predictions::{predict, Prediction};
pub use tangent::{expected_dim, secant_dim, ParameterCell, SecantResult, Verdict};
