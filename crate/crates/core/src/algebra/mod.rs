//! Exact arithmetic over GF(p^a): elements, vectors, matrices and Frobenius automorphisms.

pub mod field;
pub mod matrix;

pub use field::{arith, is_prime, ArithOp, Fe, Field, FieldAut, FieldElement};
pub use matrix::{Matrix, Vector};
