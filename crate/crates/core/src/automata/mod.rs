//! Layered automata, slices of family automata and their conversion to
//! expressions.

mod convert;
mod dfa;
mod file;
mod layered;

pub use convert::{to_expression, to_expression_with_stats, ConversionStats};
pub use dfa::{build_family_dfa, DfaSpec};
pub use file::{Automaton, AutomatonFile};
pub use layered::{nfa_language, slice, LayeredBuilder, LayeredNfa, Row};
