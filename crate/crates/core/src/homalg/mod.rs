//! Exact linear algebra, chain complexes, homology and contractions.

pub mod complex;
pub mod contraction;
pub mod dense;
pub mod elim;
pub mod homology;
pub mod interchange;
pub mod matrix;
pub mod ring;
pub mod snf;

pub use complex::{ChainComplex, Degree, GradedMap};
pub use contraction::{
    extend_over_ses, split_ses_contraction_quotient, split_ses_contraction_sub,
    transfer_k_contraction, verify_k_contraction, KContraction, ResidualReport, Retract,
    SesEquivalence, SplitComplex, SplitSes,
};
pub use homology::{homology, homology_all, ModulePresentation};
pub use matrix::SparseMatrix;
pub use ring::{Arith, CoeffRing, Scalar};
pub use snf::smith_normal_form;
