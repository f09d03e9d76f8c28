//! Exact-arithmetic toolkit for generalized continued fractions.
//!
//! The crate turns slowly convergent series into continued fractions with
//! symbolic element rules, applies the classical transforms (equivalence,
//! modified approximants, even part) with machine-checked certificates,
//! and solves for asymptotic tail corrections of difference equations. A
//! small catalog of series drives everything end to end; `src/bin/cfkit.rs`
//! exposes it on the command line.

pub mod catalog;
pub mod cf;
pub mod fixed;
pub mod identity;
pub mod json;
pub mod linalg;
pub mod mc;
pub mod oracles;
pub mod parse;
pub mod pattern;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod term;
pub mod transforms;
