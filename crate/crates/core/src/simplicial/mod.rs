//! Truncated simplicial finite sets, nerves, cylinders and homotopies.

mod cylinder;
mod homotopy;
mod map;
mod nerve;
mod space;

pub use cylinder::{cylinder, projection, Cylinder};
pub use homotopy::{homotopy_from_cylinder, CylinderOrientation, SimplicialHomotopy};
pub use map::SimplicialMap;
pub use nerve::{nerve, CoverSpec, Nerve};
pub use space::SimplicialSpace;
