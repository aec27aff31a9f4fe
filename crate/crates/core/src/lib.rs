//! Exact symbolic calculus for the projective embedding of sl(m+1, R) into
//! polynomial vector fields on R^m, together with the operator calculus it
//! acts on and a Chevalley-Eilenberg cohomology engine over the rationals.
//!
//! Everything is computed with arbitrary-precision rational arithmetic; no
//! floating point is used anywhere. The crate is `no_std` (with `alloc`) so
//! the algebraic kernel can be embedded anywhere; IO, CLI and serialization
//! live in the companion `projcoh` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chi;
pub mod cohomology;
pub mod field;
pub mod finite;
pub mod lie;
pub mod linalg;
pub mod maps;
pub mod poly;
pub mod rational;
pub mod weyl;
