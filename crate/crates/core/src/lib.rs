//! Directed scale-free graph ensembles, Google matrices, and the spectral gap
//! of the interpolating PageRank Hamiltonian.
//!
//! The crate is organised bottom-up:
//!
//! * [`netgen`] grows multigraphs under three growth models and reduces them
//!   to simple digraphs.
//! * [`pagerank`] builds the transition and Google matrices with structured
//!   (sparse plus rank-one) products and runs classical power iteration.
//! * [`spectral`] forms `h(G) = (I - G)^T (I - G)` and the interpolation
//!   `H(s) = s h(G) + (1 - s) h(G_c)`, and minimises the gap over `s`.
//! * [`analysis`] bins degree distributions and fits scaling laws.
//! * [`harness`] runs seeded, parallel ensemble sweeps and writes outputs.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod netgen;
pub mod pagerank;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
