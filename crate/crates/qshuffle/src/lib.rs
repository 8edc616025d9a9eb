//! Quasi-shuffle algebras generated by independent Lévy processes.
//!
//! The crate is organized in three layers:
//!
//! * the exact word-algebra kernel ([`algebra`]): words over an abstract
//!   alphabet, formal linear combinations with arbitrary-precision rational
//!   coefficients, the quasi-shuffle and shuffle products, deconcatenation,
//!   the antipode, and the Hoffman exponential/logarithm;
//! * the Lévy layer ([`levy`], [`teugels`], [`alphabet`]): exact coordinate
//!   vectors for jump diffusions with finitely many jump sizes, Teugels
//!   martingales with their Gram matrix and strong orthogonalization, and
//!   the alphabet construction that turns a family of independent Lévy
//!   processes into a bracket table of structure constants;
//! * pathwise certification ([`pathsim`]): reproducible simulation of the
//!   driving processes, evaluation of iterated Itô integrals along each
//!   path, and verification of the product identity
//!   `I_v · I_w = I_{v * w}` — exactly for pure-jump families, on a grid
//!   for diffusive ones.
//!
//! [`config`] holds the JSON configuration schema shared by the CLI.

pub mod algebra;
pub mod alphabet;
pub mod config;
pub mod levy;
pub mod pathsim;
pub mod rational;
pub mod teugels;
