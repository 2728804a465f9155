//! Finite recognisers for regular languages: syntactic monoids, unary and
//! binary Schützenberger products, existential projection of marked-word
//! languages, quotient-closed Boolean algebras with their dual monoids, and
//! finite-resolution ultrafilter equations for Schützenberger sums.

pub mod algebra;
pub mod alphabet;
pub mod corpus;
pub mod dfa;
pub mod equations;
pub mod error;
pub mod limits;
pub mod marking;
pub mod monoid;
pub mod regex;
pub mod schutz;
pub mod subset;
pub mod verify;

pub use algebra::{dual_recogniser, generate_algebra, schutz_sum, transport, DualRecogniser, LanguageAlgebra, Universe};
pub use alphabet::{Alphabet, Word};
pub use dfa::{BoolOp, Dfa};
pub use error::{Error, Result};
pub use limits::Limits;
pub use monoid::{all_morphisms, recognised_algebra, syntactic_monoid, FiniteMonoid, Mode, MonoidMorphism};
pub use regex::Regex;
pub use subset::Subset;
