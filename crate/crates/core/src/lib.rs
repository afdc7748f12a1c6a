//! Search for binary self-dual codes through standard-form generator matrices.

pub mod cli;
pub mod code;
pub mod equivalence;
pub mod error;
pub mod gamma;
pub mod gf2;
pub mod mutable;
pub mod neighbors;
pub mod oracle;
pub mod persist;
pub mod search;

pub use code::{distance_bound, CodeType, LinearCode};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use search::{run_search, SearchConfig, SearchReport};
