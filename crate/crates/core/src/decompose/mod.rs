//! Structural decompositions: 2-core, trimmed core, kernel and maximal 2-paths,
//! the forest hanging off the core, and exponential-tail statistics.

mod cores;
mod forest;
mod kernel;
mod tail;

pub use cores::{two_core, two_core_map, trimmed_core, trimmed_core_map};
pub use forest::{attached_forest, ForestStats};
pub use kernel::{kernel, maximal_2paths, KernelResult};
pub use tail::{tail_statistics, TailFit, DEFAULT_RATE_MIN, MIN_TAIL_VALUES};
