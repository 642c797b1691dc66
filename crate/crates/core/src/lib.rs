//! Integral point sets over finite rings: arithmetic, geometry,
//! constructions, automorphisms, exhaustive searches and known bounds.

pub mod automorph;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod gauss;
pub mod io;
pub mod plane;
pub mod plot;
pub mod rings;
pub mod search;

pub use error::{Error, Result};
pub use plane::{Classification, Convention, Direction, Point, PointSet};
pub use rings::{Elem, Ring, RingSpec};
