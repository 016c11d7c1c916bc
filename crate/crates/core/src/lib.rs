//! Finite combinatorics for creature-forcing constructions: packing norms on
//! families of partial functions, creature operations, truncated conditions
//! with their order and amalgamation, and the block-partition conditions with
//! exact measure and category witnesses.

pub mod alphabet;
pub mod conditions;
pub mod creatures;
pub mod error;
pub mod gen;
pub mod json;
pub mod matching;
pub mod oracle;
pub mod pf;
pub mod points;
pub mod qhn;
pub mod rational;
pub mod suites;

pub use alphabet::{Alphabet, Symbol};
pub use creatures::{Creature, Norm};
pub use error::{Error, Result};
pub use pf::{coords, Coord, CoordSet, Embedding, PartialFunction};
pub use points::{Assignment, Budget, Window};
