use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("wire {0} has no assignment")]
    MissingAssignment(usize),
    #[error("expected {expected} {what} inputs, got {got}")]
    InputCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("division by zero while generating the witness")]
    DivisionByZero,
    #[error("constraint {constraint} violated in gadget {gadget}")]
    Unsatisfied { constraint: usize, gadget: String },
    #[error("linear row {row} violated in gadget {gadget}")]
    UnsatisfiedLinear { row: usize, gadget: String },
    #[error("scenario spec invalid: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Core(#[from] zkcred_core::CoreError),
}
