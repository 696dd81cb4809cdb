//! Graded-commutative algebras `C^inf(M)[odd, even]` and their vector
//! fields.

mod field;
mod poly;
mod table;

pub use field::SuperVectorField;
pub use poly::{Key, SuperPoly};
pub use table::{Generator, GeneratorTable, Slot, MAX_ODD};

pub(crate) use poly::bits;
pub(crate) use table::same_table;
