//! Exact analysis engine for the bilateral network creation game (BNCG).
//!
//! Agents are nodes of an undirected graph. Creating an edge requires the
//! consent of both endpoints and costs each of them `alpha`; every agent also
//! pays her total hop distance to all other agents. This crate provides the
//! exact cost semantics of that game, exhaustive improving-move checkers for
//! the bilateral solution concepts (remove, add, swap, neighborhood, and
//! coalition equilibria), generators for the graph families used to exhibit
//! extremal equilibria, closed-form bound evaluators, and a small-graph atlas
//! for classification and witness search.
//!
//! All game arithmetic is exact rational; disconnection is handled
//! lexicographically (an agent first minimizes the number of agents she
//! cannot reach, then her exact cost) instead of through a huge sentinel
//! distance. The crate is `no_std` + `alloc`; everything is a pure function
//! of immutable inputs, so values can be shared freely between workers.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod atlas;
pub mod bounds;
pub mod concept;
pub mod construct;
pub mod cost;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod moves;
pub mod scalar;
pub mod stability;
pub mod tree;

mod search;

pub use concept::Concept;
pub use cost::{CostDelta, ExtendedCost, GameParams};
pub use error::Error;
pub use graph::{Distance, Graph};
pub use moves::Move;
pub use scalar::Scalar;
pub use stability::{SearchLimits, StabilityReport};
