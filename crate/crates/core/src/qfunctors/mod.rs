pub mod four_term;
pub mod functors;
pub mod gset;
pub mod section;

pub use functors::{functor_by_name, SumFunctor};
pub use gset::GSet;
