//! Exact computations around descent classes of Weyl groups: the cell
//! representations sigma_S, their family and special-orbit data, and the
//! rational Whittaker polynomials attached to covering groups, for the
//! classical types A, B, C, D and for G2.
//!
//! Everything is computed in exact integer/rational arithmetic; no floating
//! point is used anywhere.

pub mod cellfam;
pub mod chars;
pub mod cli;
pub mod error;
pub mod partition;
pub mod poly;
pub mod rootsys;
pub mod weyl;
pub mod whitpoly;

pub use error::{Error, Result};
pub use partition::{BiPartition, Partition};
pub use poly::{RatPoly, SplitReport};
pub use rootsys::{build_cartan, CartanDatum, TypeLabel};
pub use weyl::WeylElement;
