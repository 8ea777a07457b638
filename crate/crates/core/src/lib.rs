//! Exact computational models for Sato Grassmannians, dimensional and
//! determinantal torsors, and multiplicative torsors on simplicial sets.

pub mod detline;
pub mod dimtorsor;
pub mod exactcat;
pub mod exactlin;
pub mod simptors;
pub mod swald;
pub mod tate;
pub mod verify;
