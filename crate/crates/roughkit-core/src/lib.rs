//! Rough approximation operators over finite universes.

pub mod error;
pub mod foundation;
pub mod granulation;
pub mod approx;
pub mod decision;
pub mod multiview;
pub mod hyper;
pub mod valued;
pub mod structures;

pub use error::{Error, Result};
pub use foundation::{
    indiscernibility, partition_refines, relation_properties, BinaryRel, InformationTable,
    Partition, Rational, RelProps, Subset, Universe, Value,
};
