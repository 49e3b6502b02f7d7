//! Weighted self-avoiding walks on the rhombic lattice.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod geometry;
pub mod honeycomb;
pub mod loops;
pub mod observable;
pub mod plaquette;
pub mod series;
pub mod weights;

pub use error::{Error, Result};
