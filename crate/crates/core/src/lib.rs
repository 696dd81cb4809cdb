//! Exact symbolic computations with Lie algebroids, their modular classes
//! and Courant algebroids over a single coordinate chart.

pub mod algebroid;
pub mod batch;
pub mod courant;
pub mod dirac;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod modular;
pub mod random;
pub mod scalar;
pub mod superalg;
pub mod verdict;

pub use algebroid::{AlgebroidMorphism, SkewAlgebroid};
pub use error::{Error, Pos, Result};
pub use scalar::{BaseChart, ScalarField};
pub use superalg::{GeneratorTable, SuperPoly, SuperVectorField};
pub use verdict::Verdict;
