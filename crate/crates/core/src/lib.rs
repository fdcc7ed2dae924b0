//! Influence maximisation on scaled-down networks.
//!
//! Communities are detected and filtered, a smaller network with the same
//! block structure is generated, a multi-objective evolutionary search runs on
//! it, and the resulting seed sets are mapped back by centrality rank.

pub mod baseline;
pub mod cascade;
pub mod centrality;
pub mod community;
pub mod downscale;
pub mod error;
pub mod evaluate;
pub mod generators;
pub mod front;
pub mod graph;
pub mod moea;
pub mod pipeline;
pub mod rng;
pub mod upscale;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
