//! Words over an abstract alphabet, formal linear combinations, and the
//! quasi-shuffle/shuffle/Hopf operations parameterized by a bracket table.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.

mod bracket;
mod hoffman;
mod hopf;
mod poly;
mod product;
mod word;

pub use bracket::{BracketTable, PolyDto, TermDto};
pub use hoffman::{hoffman_exp, hoffman_log};
pub use hopf::antipode;
pub use poly::Poly;
pub use product::{quasi_shuffle, shuffle};
pub use word::{concat, deconcat, Letter, LetterId, Word};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("letter `{0}` has grade 0; grades must be >= 1")]
    ZeroGrade(String),
    #[error("bracket entry for ({0}, {1}) is not a linear combination of letters")]
    EntryNotLinear(String, String),
    #[error("bracket table is not associative at letters ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("malformed polynomial: {0}")]
    MalformedPoly(String),
}
