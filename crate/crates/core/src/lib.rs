//! Measure algebras, p-adic L-series and their archimedean counterparts for
//! elliptic curves over Q.
//!
//! Everything here is pure computation over `alloc`; file formats, caches and
//! the command line live in the companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod curve;
pub mod cyclotomic;
pub mod dirichlet;
pub mod error;
pub mod lvalues;
pub mod measure;
pub mod mtt;
pub mod padic;
pub mod rational;
pub mod ring;

pub use error::{Error, Result};
