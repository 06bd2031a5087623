//! Numerical companion for the sharp Riesz-type inequality relating the
//! analytic and co-analytic parts of a harmonic function on the unit disk.

pub mod circle;
pub mod constants;
pub mod error;
pub mod extremals;
pub mod grid;
pub mod lemmas;
pub mod minorant;
pub mod optimize;
pub mod quadrature;
pub mod report;
pub mod search;

pub use constants::{ConstantSet, Params};
pub use error::{Result, RieszError};
