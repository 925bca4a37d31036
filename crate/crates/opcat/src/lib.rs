//! Finite operadic categories, their skew monoidal categories of
//! collections, and mechanical checks of the axioms relating the two.
//!
//! The crate works at desk scale: categories are explicit tables, all
//! quantifiers are finite, and every checker either verifies a law
//! exhaustively or reports a concrete counterexample with labelled
//! witnesses.

pub mod builders;
pub mod coll;
pub mod diag;
pub mod cat;
pub mod fin;
pub mod functor;
pub mod hopf;
pub mod normal;
pub mod ocjson;
pub mod operad;
pub mod operadic;
pub mod rebuild;
pub mod opmonoidal;
pub mod report;
pub mod sample;
mod uf;
