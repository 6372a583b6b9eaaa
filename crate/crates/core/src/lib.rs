//! Dynamic two-dimensional dictionary matching.
//!
//! A [`Dictionary2D`] holds rectangular byte patterns that all share one
//! width. Patterns can be inserted and removed at any time, and a text grid
//! can be searched for every occurrence of every live pattern.

pub mod bird_baker;
pub mod dictionary;
pub mod dyn_dict;
pub mod error;
pub mod group1;
pub mod group2;
pub mod matrix;
pub mod name_index;
pub mod oracle;
pub mod periodicity;
pub mod rmq;
pub mod row_index;
pub mod session;
pub mod stats;
pub mod testgen;
pub mod witness_tree;

pub use dictionary::{Dictionary2D, Engine};
pub use error::{Error, Result};
pub use matrix::{
    format_occurrences, BlockView, Matrix, Occurrence, PatternId, PatternMatrix, TextGrid,
};
pub use oracle::{naive_min_rotation, naive_search};
pub use stats::{CounterSnapshot, Counters, DictionaryStats};
