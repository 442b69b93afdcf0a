//! Nonlinearity and multiplicative complexity of Boolean functions.
//!
//! - [`truth_table`]: bit-packed tables of functions in `B_n`.
//! - [`walsh`]: Walsh spectrum, nonlinearity and best affine approximation.
//! - [`circuit`]: XOR-AND circuits, their text format and normal form.
//! - [`mc`]: exact multiplicative complexity and the census of `B_s`.
//! - [`reductions`]: the AFFINE certificate, TAUTOLOGY → AFFINE and the
//!   #SAT → nonlinearity padding gadget.
//! - [`distinguisher`]: restriction-based distinguishers run against a toy
//!   keyed family and seeded random oracles.
//!
//! The guide in `book/` walks through each of these; its code snippets are
//! compiled and run as doctests of this crate.

pub mod circuit;
pub mod distinguisher;
pub mod error;
pub mod mc;
pub mod reductions;
pub mod truth_table;
pub mod walsh;

pub use circuit::{Circuit, CircuitBuilder, Gate, NormalForm, Wire};
pub use error::{Error, Result};
pub use truth_table::{Assignment, TruthTable};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/truth-tables.md")]
    mod truth_tables {}
    #[doc = include_str!("../../../book/src/walsh.md")]
    mod walsh {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/multiplicative-complexity.md")]
    mod multiplicative_complexity {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/distinguisher.md")]
    mod distinguisher {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
