//! Constructions realising finite groups G₁, G₂ and a subgroup H ≤ G₁×G₂ as
//! automorphism groups of an arrow, together with exhaustive verifiers.

pub mod budget;
pub mod cdga;
pub mod digraph;
pub mod error;
pub mod goursat;
pub mod graph;
pub mod group;
pub mod iso;
pub mod refine;
pub mod relsys;

pub use budget::SearchBudget;
pub use error::{Error, Result};
