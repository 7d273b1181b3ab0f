//! Shelling of the uniform complex: the subset poset `K_k`, the map
//! `χ: U → K_k`, the disorder filtration, and an explicit k-contraction of
//! `NQ̃(Ū)` for any sum-preserving functor `Q`.

pub mod chi;
pub mod contraction;
pub mod strata;
pub mod subsets;

pub use chi::{best_completion_u, chi, chi_cross_check, verify_completion_uniqueness, verify_jump_properties, JumpReport};
pub use contraction::{build_k_contraction, build_k_contraction_on, ShellingContraction};
pub use strata::{verify_all_pushouts, verify_pushout, DisorderFiltration, PushoutReport, StratumRow};
pub use subsets::{subset_poset, DisorderValue, SubsetChain};
