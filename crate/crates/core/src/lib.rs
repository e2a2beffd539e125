//! Stallings graphs of subgroups of free groups, the functor induced by a
//! homomorphism of free groups, Whitehead graphs, and a case engine for the
//! splitting procedure on restricted homomorphisms.

pub mod case_engine;
pub mod functor;
pub mod graph;
pub mod parallel;
pub mod random;
pub mod stallings;
pub mod whitehead;
pub mod words;
