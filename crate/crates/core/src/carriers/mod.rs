//! Concrete gyrogroup carriers.

pub mod mobius;
pub mod product;
pub mod search;
pub mod table;
