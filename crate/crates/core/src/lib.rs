//! Exact-arithmetic Hochschild cohomology of weight-graded commutative
//! algebras over Q, by two independent routes: the direct Hochschild cochain
//! complex and the resolvent/Kähler-differential route, plus a Čech layer
//! for toy smooth covered schemes.
//!
//! Everything is computed over Q with arbitrary-precision rationals; tables
//! of cohomology dimensions are exact integers, and the two routes are
//! cross-checked entry-wise.

pub mod bar;
pub mod cech;
pub mod cli;
pub mod dgalg;
pub mod error;
pub mod exactlin;
pub mod koszul;
pub mod manifest;
pub mod parse;
pub mod quotient;
pub mod resolvent;
pub mod table;

pub use error::{Error, Result};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
