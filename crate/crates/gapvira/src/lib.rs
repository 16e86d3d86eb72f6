//! Exact computer algebra for the gap-p Virasoro algebra and its companion.
//!
//! The crate provides:
//!
//! - exact scalar arithmetic in the cyclotomic field Q(xi_p) ([`scalar`]),
//! - structure constants, gradings, and automorphisms for the two Lie
//!   algebra families ([`algebra`], [`rescaled`]),
//! - a PBW normal-form engine on the universal enveloping algebra
//!   ([`pbw`], [`exponents`]),
//! - formal delta-series calculus for generating-function identities
//!   ([`formal`]),
//! - induced modules, Verma modules, graded dimensions, and singular
//!   vector search ([`modules`]),
//! - simple-module constructions: pullbacks, polynomial realizations,
//!   and Whittaker modules ([`constructions`]),
//! - a text grammar and JSON layer shared with the CLI ([`parse`], [`cli`]).
//!
//! All arithmetic is exact; no floating point appears anywhere.

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod exponents;
pub mod formal;
pub mod linalg;
pub mod modules;
pub mod parse;
pub mod pbw;
pub mod rescaled;
pub mod rng;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
pub use scalar::Cyclo;
