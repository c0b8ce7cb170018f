use thiserror::Error;

use crate::finite_field::FieldError;
use crate::number_theory::NumberTheoryError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
    #[error("invalid position: {0}")]
    InvalidPosition(String),
    #[error("illegal move: heap {heap_index} -> {new_value}")]
    IllegalMove { heap_index: usize, new_value: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("product is not a unit, no single-heap normal form")]
    ZeroInvariant,
    #[error("game-tree search exceeded its budget ({0})")]
    SearchBudgetExceeded(String),
    #[error("losing set does not contain 1; the spec is only usable for predicate analysis")]
    PredicateOnly,
    #[error("generator has order {0}, need at least 2")]
    DegenerateOrder(u64),
    #[error("positions belong to different games")]
    SpecMismatch,
    #[error("position is not in the Threshold Region")]
    WrongRegion,
    #[error("losing set must be {{1}} for product-SG values")]
    UnsupportedLosingSet,
    #[error("every value of the SG domain is present")]
    DomainExhausted,
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
