//! Finite Kripke frames and their Heyting-algebra duals, exhaustively
//! checkable at desk scale.
//!
//! The crate bundles:
//!
//! - finite posets with open (p-morphism) maps and the upset Heyting
//!   algebras they carry ([`poset`]);
//! - the category of frames: coproducts, coequalizers, image
//!   factorization, covers, and an explicit non-exactness witness ([`kp`]);
//! - the finite duality between distributive lattices / Heyting algebras
//!   and posets ([`duality`]);
//! - an intuitionistic propositional prover that returns countermodels
//!   ([`logic`]);
//! - nerve constructions: model sets of presented algebras, poset nerves,
//!   sheaf gluing, cohesion stages ([`nerve`]);
//! - the Rieger-Nishimura ladder as an exact one-generator free Heyting
//!   algebra, with the topology-operator classification ([`ladder`]);
//! - quantifier adjoints along the ladder fiber and Artin glueing
//!   ([`quant`]);
//! - batch verification suites behind the `kpcheck verify` command
//!   ([`verify`]).

pub mod duality;
pub mod error;
pub mod json;
pub mod kp;
pub mod ladder;
pub mod logic;
pub mod nerve;
pub mod poset;
pub mod quant;
pub mod verify;

pub use error::{Error, Result};
