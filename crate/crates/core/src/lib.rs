//! Computational toolkit for finite pomonoids and S-posets.
//!
//! The crate builds tensor products of S-posets together with tossing
//! certificates, decides interpolation and flatness conditions, recognises
//! free and projective S-posets, emits the first-order axiom schemes for
//! several classes and model-checks them on finite structures.

pub mod error;
pub mod relation;
pub mod structures;
pub mod congruence;
pub mod tensor;
pub mod conditions;
pub mod flatness;
pub mod structure;
pub mod axioms;
pub mod search;
pub mod io;

pub use error::{Error, Result};
pub use structures::{Map, MorphismKind, Pomonoid, RawPomonoid, RawSPoset, SPoset, Side, ValidationReport};
