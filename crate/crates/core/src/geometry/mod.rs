//! Delone set samples, windows, van Hove sequences, and metric utilities.

mod delone;
mod generators;
mod grid;
mod point;
mod window;

pub use delone::{inner_boundary_sites, DeloneSet, GeneratorTag};
pub use generators::{generate, GeneratorSpec};
pub(crate) use grid::CellGrid;
pub use point::{sets_equal, sort_lex, Point};
pub use window::{unit_ball_volume, VanHoveSequence, Window};
