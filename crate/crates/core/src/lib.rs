//! Random-graph cores, severe stripping, decorated-expander certification and
//! exact random-walk mixing times.

pub mod certify;
pub mod decompose;
pub mod error;
pub mod experiments;
pub mod genmodels;
pub mod mixing;
pub mod multigraph;
pub mod rng;
pub mod strip;

pub use error::{Error, Result};
pub use multigraph::Multigraph;
