//! Regular partitions and two-element bases for solvable groups acting coprimely.
//!
//! Every construction is certified by brute-force enumeration: a partition is
//! checked against the full group it claims to be regular for, and a base pair
//! `(x, y)` carries the enumerated intersection `C_G(x) ∩ C_G(y)`.

pub mod algebra;
pub mod baseconstruct;
pub mod cli;
pub mod error;
pub mod group;
pub mod matgrp;
pub mod partitions;
pub mod permgrp;

pub use error::{Error, Result};
