//! Random-walk quantities: stationary law, hitting and access times, the
//! mixing time `ℋ`, the uniform-stopping time `U_ε`, the chain induced on a
//! vertex subset, and simulated walks.

mod access;
mod chain;
pub(crate) mod dense;
mod hitting;
mod induced;
mod uniform;
mod walk;

pub use access::{access_time, chain_mixing_time, mixing_time_detail, mixing_time_exact, MixingTime};
pub use chain::{stationary, ReversibleChain};
pub use hitting::{hitting_times, ChainSolve, HittingMatrix, MAX_DENSE_STATES};
pub use induced::{induced_chain, InducedChain};
pub use uniform::{uniform_mixing_time, MAX_UNIFORM_HORIZON};
pub use walk::{simulate_walk, WalkSample};
