//! Exact computation and certification of the ratio between the maximum
//! weight of a perfect matching and the maximum weight of any matching,
//! on cubic graphs and beyond.

pub mod budget;
pub mod classify;
pub mod eta;
pub mod generators;
pub mod lp;
pub mod graph;
pub mod matching;
pub mod mesh;
pub mod rational;
pub mod registry;
pub mod reproduce;
