//! Word systems and their relatives.
//!
//! Cardinality sequences of word systems (factorial languages) coincide with
//! dimension sequences of discrete subproduct systems. This crate makes both
//! sides concrete and exact:
//!
//! - [`words`]: words, word systems, excluded words and antidictionaries;
//! - [`cartesian`]: Cartesian systems with explicit injection tables,
//!   standardization and the stride/overlap thinning transforms;
//! - [`subproduct`]: subproduct systems in standard form as nested rational
//!   projectors, and the extraction of a word system with the same dimensions;
//! - [`graph`]: graph systems and path counting;
//! - [`enumeration`]: avoidance automata, complexity series and recurrences;
//! - [`realizability`]: necessary conditions, constructions and searches for
//!   prescribed cardinality sequences.
//!
//! Everything is computed with exact integer or rational arithmetic except
//! [`enumeration::growth_rate`], which is labeled approximate.

pub mod cartesian;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod realizability;
pub mod sample;
pub mod subproduct;
pub mod words;

pub use cartesian::CartesianSystem;
pub use enumeration::{AvoidanceAutomaton, ComplexitySeries};
pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::{QMatrix, Rational};
pub use realizability::TargetSequence;
pub use subproduct::{AbstractSubproduct, ProjectorFamily};
pub use words::{ExclusionSet, Word, WordSystem};
