//! Executable synthetic Lorentzian geometry at desk scale.
//!
//! Spaces are queried through [`LorentzSpace`]: finite tables
//! ([`FiniteSpace`]), Minkowski space and Lorentzian products `R x X`.
//! On top of that sit the longest-chain maximizer, triangle comparison
//! against `R^{1,1}`, asymptotes and Busemann values, parallel lines, and
//! the reconstruction of a splitting `R x S -> X`.

pub mod asymptotics;
pub mod chains;
pub mod comparison;
pub mod error;
pub mod model;
pub mod parallel;
pub mod space;
pub mod splitting;
pub mod tol;

pub use error::{Error, Result};
pub use model::{Minkowski, MinkowskiPoint, ProductPoint, ProductSpace};
pub use space::{FiniteSpace, LorentzSpace, PointId};
