//! Exact computations around layered directed graphs: the induced poset and
//! its reduced order (co)homology, Möbius numbers, Cohen–Macaulayness, the
//! Hilbert series of the associated graded algebras B(Γ) and A(Γ), a
//! numerical-Koszulity test, and a presentation-level oracle that recomputes
//! the B(Γ) dimensions independently.
//!
//! Everything is exact: ranks are taken over the rationals (fraction-free
//! elimination over big integers) or over a prime field, never floats.

pub mod field;
pub mod generators;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod oracle;
pub mod poset;
pub mod series;

pub use field::FieldSpec;
pub use graph::{LayeredGraph, Vertex};
pub use homology::{is_cohen_macaulay, mobius, reduced_cohomology_dims, BettiTable};
pub use poset::FinitePoset;
pub use series::{
    hilbert_b_low_degree, inv_hilbert_a_chain_count, HilbertEngine, KoszulReport,
    TruncatedSeries,
};
