//! Regular expressions for finite languages and lower bounds on their size.

pub mod automata;
pub mod bounds;
pub mod envelopes;
pub mod error;
pub mod expr;
pub mod interval;
pub mod languages;
pub mod logproduct;
pub mod random;
mod serde_big;
pub mod transforms;

pub use error::{Error, Result};
pub use expr::{Alphabet, EnumOptions, Expr, ExprKind, Language, Letter, Word};
pub use languages::FamilySpec;
