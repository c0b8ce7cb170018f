//! Product-congruence games: impartial games on heap vectors where a position
//! is losing when the product of its heaps lands in a fixed subset of a finite
//! unit group. Numeric, RSA exponent-chain and finite-field instances share one
//! engine, and every structural claim about them has an exhaustive checker.

pub mod analysis;
pub mod chain_rsa;
pub mod cli;
pub mod collapse;
pub mod error;
pub mod finite_field;
pub mod game_core;
pub mod grundy;
pub mod number_theory;
pub mod verify;

pub use chain_rsa::ChainSpec;
pub use error::{Error, Result};
pub use finite_field::{FieldElement, FieldSpec};
pub use game_core::{GameSpec, Move, Outcome, Position, RegionTag, Solver};
