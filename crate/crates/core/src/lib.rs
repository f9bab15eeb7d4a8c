//! Virtual link diagrams: exact invariants, realizations, moves and surface
//! twist constructions.

pub mod cli;
pub mod codec;
pub mod diagram;
mod dsu;
pub mod error;
pub mod invariants;
pub mod moves;
pub mod poly;
pub mod realization;
pub mod representation;
pub mod tangle;

pub use codec::{parse_diagram, render_diagram};
pub use diagram::{Crossing, CrossingKind, Diagram, Edge, Over};
pub use error::{Error, Result};
pub use poly::LaurentPoly;
