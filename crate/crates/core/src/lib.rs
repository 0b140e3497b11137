pub mod assembler;
pub mod chow;
pub mod confspace;
pub mod error;
pub mod evalmap;
pub mod graded;
pub mod linalg;
pub mod quotient;
pub mod surface;
pub mod vassiliev;

pub use error::{Error, Result};
pub use graded::{GradedTate, TateClass};
pub use linalg::{ExactMatrix, Field};
pub use surface::{maroni_strata, monomial_basis, section_dimension, Monomial, StratumInfo, SurfaceSpec};
