//! Computational algebra for finite hypergroups.
//!
//! Tables are validated against the hypergroup axioms on construction; element
//! `0` is always the identity and subsets are word-sized bitsets. On top of
//! that the crate decides closedness and (strong) normality, builds quotients
//! `H//F`, computes upper center series and weak nilpotency, the residually
//! thin machinery (valency, Sylow p-subsets, p-valencedness, `O_p`,
//! solvability), enumerates all hypergroups of small order up to isomorphism,
//! and checks structural theorems against such catalogs.

pub mod arith;
pub mod budget;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod hgt;
pub mod hypergroup;
pub mod oracle;
pub mod quotient;
pub mod report;
pub mod series;
pub mod set;
pub mod subsets;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result, ValidationError, Violation};
pub use hypergroup::{Hypergroup, Table, IDENTITY};
pub use quotient::{quotient, QuotientMap};
pub use set::ElementSet;
pub use subsets::{ClosedSubsetLattice, NormalityMode};
pub use arith::PValencedReading;
pub use report::{analyze, AnalysisReport};
pub use verify::{Check, Question, TheoremCheckResult};
