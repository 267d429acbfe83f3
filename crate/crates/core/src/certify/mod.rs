//! Cheeger constants (exact and spectral), densest subgraphs, decorations and
//! α-AN / α-strong-core certificates.

mod an;
mod cheeger;
mod densest;
mod spectral;

pub use an::{
    check_AN, check_strong_core, decorations, kernel_expansion_ratio, ANCertificate, AttachCheck,
    DecorationReport, ExpansionCheck, StripSummary, StrongCoreCertificate, TailCheck,
};
pub use cheeger::{
    cheeger_exact, cheeger_exact_graph, cheeger_quotient, CheegerMethod, CheegerResult, MAX_EXACT_CHEEGER_STATES,
};
pub use densest::{densest_subgraph, DensestSubgraph};
pub use spectral::{cheeger_bounds, cheeger_bounds_graph};
