//! Order types of ordinal grammars.

pub mod cli;
pub mod components;
pub mod error;
pub mod grammar;
pub mod langops;
pub mod normalize;
pub mod oracle;
pub mod ordinal;
pub mod solver;
pub mod words;

pub use error::{Error, Result};
pub use grammar::{FormSet, Grammar, Nt, SForm, Symbol};
pub use ordinal::Ordinal;
pub use words::{Alphabet, Letter, UpWord, Word};
