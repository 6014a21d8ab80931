//! Colour-biased perfect matchings in edge-coloured k-uniform hypergraphs.
//!
//! Given an r-colouring of the edges of a k-uniform hypergraph whose minimum
//! ℓ-degree is large, every perfect matching is forced to favour some colour
//! beyond the balanced share n/(rk). This crate provides, at desk scale:
//!
//! - an exact hypergraph core with degree and neighbourhood queries
//!   ([`hypergraph`]);
//! - edge colourings, colour profiles, and the same-/cross-colour pair
//!   classification that drives gadget construction ([`colouring`]);
//! - an exhaustive, deterministic perfect-matching oracle used as ground
//!   truth everywhere ([`oracle`]);
//! - gadget builders producing small subhypergraphs with exactly two
//!   perfect matchings of differing colour profiles ([`gadgets`]);
//! - the constructive bias pipeline that harvests gadgets and assembles a
//!   biased perfect matching with a verifiable certificate ([`pipeline`]);
//! - generators for the tight constructions where every perfect matching is
//!   exactly balanced, plus seeded random dense instances ([`extremal`]);
//! - a line-based and JSON instance format ([`instance`]).
//!
//! All threshold arithmetic is exact: binomial coefficients are
//! arbitrary-precision integers and every bound is a rational number.
//! Instances are capped (default 40 vertices, hard cap 64) and refused
//! beyond the cap rather than accepted and left to crawl.

pub mod arith;
pub mod colouring;
pub mod error;
pub mod extremal;
pub mod gadgets;
pub mod hypergraph;
pub mod instance;
pub mod oracle;
pub mod pipeline;

pub use arith::Rational;
pub use colouring::{ColourProfile, Colouring, PairClassification, PairType, ThresholdMode};
pub use error::{Error, Result};
pub use extremal::{Construction, ConstructionKind, ProbeResult};
pub use gadgets::{Gadget, GadgetShape, GoodnessCertificate};
pub use hypergraph::{Hypergraph, VertexSet};
pub use instance::Instance;
pub use oracle::{BiasResult, Enumeration, Matching, SearchConfig};
pub use pipeline::{HarvestFailure, HarvestOutcome, RunParams, RunReport};
