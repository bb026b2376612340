pub mod bounds;
pub mod constructions;
pub mod field;
pub mod intervals;
pub mod kernel;
pub mod search;
pub mod sets;
