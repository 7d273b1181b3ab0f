//! Graded rings over a possibly non-central degree-0 part, their bar
//! complexes, and Koszul duality data.

pub mod analysis;
pub mod bar;
pub mod ring;

pub use analysis::{
    koszul_check, koszul_complex_e1, koszul_dual_ranks, quadratic_presentation, series_inverse, DualRanksReport,
    E1Report, KoszulReport, QuadraticReport,
};
pub use bar::{bar_complex, bar_variant, four_term_bar_sequence, reduced_bar, BarVariant, FourTermBarReport, Slot};
pub use ring::{tensor_algebra, GradedRing, RingReport};

/// The sample rings shipped in `rings/`, by file stem.
pub const BUNDLED: [(&str, &str); 6] = [
    ("exterior", include_str!("../../rings/exterior.json")),
    ("truncated-cubic", include_str!("../../rings/truncated-cubic.json")),
    ("tensor1", include_str!("../../rings/tensor1.json")),
    ("tensor2", include_str!("../../rings/tensor2.json")),
    ("exterior2", include_str!("../../rings/exterior2.json")),
    ("twisted-f4", include_str!("../../rings/twisted-f4.json")),
];

pub fn bundled_ring(name: &str) -> crate::Result<GradedRing> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| crate::Error::Invalid(format!("no bundled ring {name:?}")))?;
    GradedRing::from_json(&serde_json::from_str(text)?)
}
