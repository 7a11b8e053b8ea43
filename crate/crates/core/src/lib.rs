//! Load-balancing sparsifiers and Matching-Contractors.

pub mod commgame;
pub mod contractor;
pub mod error;
mod flow;
pub mod format;
pub mod graph;
pub mod loadbal;
pub mod lp;
pub mod matching;
pub mod ratio;
pub mod rng;
mod simplex;
pub mod sparsifier;

pub use contractor::MatchingDecomposition;
pub use error::{Error, Result};
pub use graph::{Assignment, BipartiteGraph, Matching};
pub use loadbal::OptLoad;
pub use ratio::{ExtRatio, Rational};
