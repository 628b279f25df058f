pub mod chess;
pub mod eval;
pub mod search;
pub mod genome;
pub mod harness;
pub mod evolve;
