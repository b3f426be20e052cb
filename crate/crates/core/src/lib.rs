//! Core algorithms for the integrated periodic vehicle routing and bin
//! sizing problem that arises in municipal solid-waste collection.
//!
//! A collection area is a set of points served from a single depot over a
//! cyclic planning horizon (one week, Sunday off). Every point receives one
//! bin combination from a catalog; the combination must hold the largest
//! amount of waste that accumulates between two visits. The cost of a plan
//! is the amortised cost of the installed bins plus the cost of the vehicle
//! time spent on the daily routes.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`model`]: domain types, the cost evaluator and the constraint checker.
//! * [`decode`]: the mixed chromosome (visit orders + visit mask), its repair
//!   and the decoder that turns it into a [`model::Schedule`].
//! * [`ga`]: the mixed binary/permutation genetic algorithm with penalised
//!   fitness.
//! * [`exact`]: the linearised MILP in LP text format, constraint
//!   substitution, and a brute-force oracle for tiny instances.
//! * [`stats`]: rank statistics and summaries used by the benchmark tools.
//!
//! Enable the `parallel` feature to evaluate offspring on a rayon pool; the
//! random stream is split per offspring pair, so results do not depend on it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod decode;
pub mod error;
pub mod exact;
pub mod ga;
pub mod model;
pub mod stats;

pub use error::{Error, Result};
