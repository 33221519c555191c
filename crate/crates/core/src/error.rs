use std::fmt;

use thiserror::Error;

use crate::set::ElementSet;

/// A single failed axiom together with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("order {0} outside 1..=64")]
    BadOrder(usize),
    #[error("cell ({0}, {1}) is missing")]
    MissingCell(usize, usize),
    #[error("cell ({0}, {1}) contains an index outside the element range")]
    CellOutOfRange(usize, usize),
    #[error("cell ({0}, {1}) is empty")]
    EmptyCell(usize, usize),
    #[error("element 0 is not a right identity (s*0 = {{s}} fails at s = {witness})")]
    NoIdentity { witness: usize },
    #[error("element 0 is not a left identity (0*s = {{s}} fails at s = {0})")]
    LeftIdentity(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    AssociativityViolation(usize, usize, usize),
    #[error("exchange axiom fails at ({0}, {1}, {2})")]
    H3Violation(usize, usize, usize),
    #[error("no involution satisfies the exchange axiom")]
    StarMissing,
    #[error("{} involutions satisfy the exchange axiom", .0.len())]
    StarAmbiguous(Vec<Vec<usize>>),
    #[error("declared star is not an involution fixing 0 (element {0})")]
    StarNotInvolution(usize),
}

/// Every axiom a candidate table violates, each with one witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn first(&self) -> &Violation {
        &self.violations[0]
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.violations[0])?;
        if self.violations.len() > 1 {
            write!(f, " (and {} more)", self.violations.len() - 1)?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid hypergroup: {0}")]
    Validation(ValidationError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset {0} is not closed")]
    NotClosed(ElementSet),
    #[error("cosets {0} and {1} overlap without coinciding")]
    PartitionFailure(ElementSet, ElementSet),
    #[error("quotient is not a hypergroup: {0}")]
    QuotientAxiomFailure(String),
    #[error("hypergroup is not residually thin")]
    UndefinedForNonRT,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("reference oracle disagrees: {0}")]
    OracleDisagreement(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

// Not `#[from]`: that would also make the validation error the `source`, and
// error chains would print the same message twice.
impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Error::Validation(e)
    }
}
