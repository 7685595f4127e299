//! Recognition of ω-regular languages by morphisms onto finite semigroups.
//!
//! A language `L ⊆ A^w` is described by a [`Recognizer`]: a morphism
//! `h: A+ -> S` onto a finite semigroup together with a set `P` of linked
//! pairs, recognizing `[P]`, the union of the sets `h⁻¹(s) h⁻¹(e)^w` over
//! `(s, e) in P`.

pub mod buchi;
pub mod cli;
pub mod conjugacy;
pub mod error;
pub mod format;
pub mod inclusion;
pub mod langops;
pub mod mso;
pub mod recognizer;
pub mod semigroup;
pub mod syntactic;
pub mod testgen;

pub use error::{Error, Result};
pub use recognizer::{Alphabet, Letter, Mode, Morphism, PairSet, Recognizer, RecognizerStats, UpWord};
pub use semigroup::{ClosureOptions, Element, Semigroup};
