//! Exact root counts for vector-valued Laurent polynomial systems.
//!
//! A system is described by an invariant subspace `L = ⊕ E_α ⊗ x^α` of
//! vector-valued Laurent polynomials. Its characteristic polytopes
//! `Δ_0 ⊆ … ⊆ Δ_r` give a multi-support function whose mixed volume counts
//! the zeros of a generic member of `L` in the torus.

pub mod afcheck;
pub mod arrangements;
pub mod bkk;
pub mod charseq;
pub mod error;
pub mod fixtures;
pub mod klyachko;
pub mod lattice;
pub mod polyhedra;
pub mod polymat;
pub mod rat;
pub mod ratlin;

pub use error::{Error, ErrorClass, Result};
