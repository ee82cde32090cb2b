//! Nested lattice codes for Gaussian relay networks.
//!
//! The crate is organized bottom-up:
//!
//! - [`lattice_core`]: lattices with exact quantization, mod-Λ algebra and Voronoi statistics.
//! - [`nested_codes`]: nested chains, Voronoi codebooks and dithered encoding.
//! - [`list_decoding`]: lattice list decoding and unique decoding in mixed noise.
//! - [`relay_schemes`]: block-Markov simulations of decode-and-forward and compress-and-forward.
//! - [`rate_regions`]: closed-form achievable rates, cut-set bounds and sweeps.
//! - [`harness`]: configuration, seeded execution and result records behind the CLI.

pub mod error;
pub mod harness;
pub mod lattice_core;
pub mod list_decoding;
pub mod nested_codes;
pub mod rate_regions;
pub mod relay_schemes;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/nested-codes.md")]
    mod nested_codes {}
    #[doc = include_str!("../../../book/src/list-decoding.md")]
    mod list_decoding {}
    #[doc = include_str!("../../../book/src/relaying.md")]
    mod relaying {}
    #[doc = include_str!("../../../book/src/rate-regions.md")]
    mod rate_regions {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/caveats.md")]
    mod caveats {}
}
