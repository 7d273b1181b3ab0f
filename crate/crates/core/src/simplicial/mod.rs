pub mod chains;
pub mod equivariant;
pub mod poset;
pub mod sset;

pub use chains::{chains_via_functor, LiveView, PointedLevels};
pub use equivariant::{equivariant_nerve, fixed_subcomplex, EquivariantSSet};
pub use poset::FinPoset;
pub use sset::{bounded_subcomplexes, nerve, smash_with_discrete, Nerve, PointedSSet, SSet};
