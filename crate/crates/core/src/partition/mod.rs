pub mod filtration;
pub mod fixed;
pub mod groups;
pub mod operad;
pub mod perm;
pub mod setpart;
pub mod uniform;

pub use filtration::{complete_filtrations, CompleteFiltration};
pub use fixed::{fixed_poset_iso, partition_homology, FixedPosetIso};
pub use groups::{transitive_abelian_classes, transitive_abelian_subgroups, TransAbSubgroup};
pub use perm::Perm;
pub use setpart::{partition_poset, PartitionPoset, SetPartition};
pub use uniform::{USimplex, Uniform};
