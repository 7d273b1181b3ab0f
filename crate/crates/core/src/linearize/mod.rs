//! Linearization of reduced functors between finite free modules over a
//! finite field, its cross-effect and the chain rule.

pub mod functors;
pub mod ops;

pub use functors::{check_functor_laws, functor_by_name, Compose, Functor, FunctorRef};
pub use ops::{
    chain_rule, chain_rule_suite, check_additivity, linearize, perp_and_gamma, sym_linearization_dims,
    ChainRuleReport, Linearization, PerpReport, TripleSuite,
};
