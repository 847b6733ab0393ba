//! The bigraded cochain calculus: Hom-type and module-type cochains,
//! composition, the interior-face differential, pullbacks and gauge action.

mod element;
mod gauge;
mod section;
mod sheaf;

pub use element::{BlockKey, HomElement};
pub use gauge::{gauge_transform, invert_graded, mc_residual};
pub use section::{CechSection, SectionKey};
pub use sheaf::{hom_degree_range, GradedSheaf};
