//! Exact symbolic verification engine for holomorphic string algebroids.
//!
//! Everything is computed over polynomials with Gaussian-rational
//! coefficients on a single chart of ℂⁿ, so every identity is checked by
//! exact zero testing.

pub mod algebroid;
pub mod cech;
pub mod coeff;
pub mod dgla;
pub mod error;
pub mod form;
pub mod fuzz;
pub mod gen;
pub mod homotopy;
pub mod lie;
pub mod morphisms;
pub mod mutation;
pub mod scalar;
pub mod scenario;
pub mod text;
pub mod vector;

pub use algebroid::{SectionQ, StringData};
pub use coeff::Coeff;
pub use error::{Error, Result};
pub use form::{Basis, Form};
pub use lie::{Connection, GaugeMap, LieAlgebraSpec, LieForm};
pub use scalar::{Mono, Scalar, Var};
pub use vector::VectorField10;
