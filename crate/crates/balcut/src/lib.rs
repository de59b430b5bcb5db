//! Spectral tools for the balanced separator problem on weighted graphs.
//!
//! The crate is organized around one pipeline: embed the graph through a
//! matrix exponential of accumulated dual updates ([`expsketch`]), ask a
//! case oracle whether the embedding rounds to a balanced low-conductance
//! cut or yields a dual update ([`oracle`]), round when possible
//! ([`rounding`]), and otherwise iterate a matrix multiplicative weights
//! loop until the averaged dual certifies that no sufficiently balanced
//! cut of low conductance exists ([`driver`]).
//!
//! Supporting layers: compact graph storage and cut arithmetic ([`graph`]),
//! the implicit operators the pipeline multiplies by ([`operators`]),
//! feasibility checks for the primal and dual programs ([`sdp`]), dense
//! reference implementations and generators used by tests and the
//! `selftest` subcommand ([`reference`]).

pub mod cli;
pub mod driver;
pub mod expsketch;
pub mod graph;
pub mod io;
pub mod operators;
pub mod oracle;
pub mod reference;
pub mod rounding;
pub mod sdp;
pub mod selftest;
pub mod vertex_set;

pub use driver::{balcut, balcut_traced, decompose, BalCutOutcome, RunConfig};
pub use graph::Graph;
pub use vertex_set::VertexSet;

#[doc = include_str!("../../../README.md")]
#[cfg(doctest)]
pub struct ReadmeDoctests;

#[doc = include_str!("../../../book/src/graphs.md")]
#[cfg(doctest)]
pub struct BookGraphsDoctests;

#[doc = include_str!("../../../book/src/sdp.md")]
#[cfg(doctest)]
pub struct BookSdpDoctests;

#[doc = include_str!("../../../book/src/exponential-embeddings.md")]
#[cfg(doctest)]
pub struct BookEmbeddingsDoctests;

#[doc = include_str!("../../../book/src/oracle.md")]
#[cfg(doctest)]
pub struct BookOracleDoctests;

#[doc = include_str!("../../../book/src/rounding.md")]
#[cfg(doctest)]
pub struct BookRoundingDoctests;

#[doc = include_str!("../../../book/src/driver.md")]
#[cfg(doctest)]
pub struct BookDriverDoctests;
