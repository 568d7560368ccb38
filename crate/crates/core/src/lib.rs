//! Coined quantum-walk search on a periodic honeycomb lattice.
//!
//! The crate simulates the walk in real space ([`walk`]), analyses it in
//! reciprocal space ([`spectral`]), and runs search experiments across
//! lattice sizes ([`search`]). [`dense`] builds explicit matrices for small
//! lattices, and [`cli`] backs the `hexsearch` binary.

pub mod cli;
pub mod dense;
pub mod error;
pub mod lattice;
pub mod search;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use lattice::{KPoint, LatticeConfig, VertexAddress};
pub use search::{ModeSpec, ScalingFit, SearchMode, SearchRun};
pub use spectral::{KBlock, KSpectrum, SpectralSummary};
pub use walk::{LogBase, OracleControl, SearchTarget, TulsiParams, Walk, WalkState};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/walk.md")]
    mod walk {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/tulsi.md")]
    mod tulsi {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
