//! Meaning assembly in second-order lambda calculus.
//!
//! Lexical entries are System F terms over a many-sorted ontology.
//! Composition follows a binary syntax tree, repairs sort mismatches with
//! lexical coercions and ontological inclusions, specialises polymorphic
//! constants, and normalises. Readings are then read back as multisorted
//! higher-order formulas.

pub mod batch;
pub mod compose;
pub mod demo;
pub mod hol;
pub mod kernel;
pub mod lexicon;
pub mod sexpr;
