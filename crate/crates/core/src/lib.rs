//! Finite groups, their conjugation racks, subrack lattices, and the exact
//! integer homology of order complexes.

pub mod bitset;
pub mod groups;
pub mod lattice;
pub mod partitions;
pub mod racks;
pub mod topology;

pub use bitset::{ElementSet, MAX_ELEMENTS};
