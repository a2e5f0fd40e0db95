//! Exact toolkit for distinct-evaluation problems over subset families.
//!
//! For a sequence of `n` entries in `Z^k` (or `Q^k`), the degree-`m`
//! evaluation of a subset `A` of positions is the m-th elementary symmetric
//! polynomial of the entries indexed by `A`, taken per coordinate. The
//! central question: how small can the largest entry `M` be while all
//! evaluations over the subsets of size at most `floor(lambda * n)` stay
//! pairwise distinct (degree 1 with `lambda = 1` is the classical
//! distinct-subset-sums problem)?
//!
//! The crate provides:
//!
//! - incremental evaluation over whole families at one ring operation per
//!   subset per coordinate ([`esp`]),
//! - exact and real-spacing distinctness verification with canonical,
//!   thread-count-independent witnesses ([`verify`], plus a deliberately
//!   naive cross-checking oracle in [`naive`]),
//! - closed-form lower and upper bounds on `M` with every irrational value
//!   carried as a guaranteed rational enclosure ([`bounds`], [`interval`]),
//! - exact first and second moments of evaluations over the family, the
//!   binomial-coefficient decomposition of the variance, and seeded
//!   Monte Carlo estimates ([`stats`]),
//! - explicit and probabilistic sequence constructions ([`construct`]),
//! - exhaustive minimal-`M` search with canonical-order pruning and a
//!   meet-in-the-middle special case ([`search`]),
//! - file and report plumbing shared by the `symdist` binary ([`seqfile`],
//!   [`report`]).
//!
//! Everything numeric is exact: arbitrary-precision integers, exact
//! rationals, and directed-rounding enclosures. There is no floating point
//! anywhere in the evaluation or decision paths, so all results are
//! bit-reproducible across platforms, thread counts, and runs.

/// Arbitrary-precision signed integer used for all exact integer work.
pub type Int = num_bigint::BigInt;
/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rat = num_rational::BigRational;

pub mod bounds;
pub mod construct;
pub mod counting;
pub mod error;
pub mod esp;
pub mod interval;
pub mod naive;
pub mod params;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod search;
pub mod seqfile;
pub mod sequence;
pub mod stats;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use params::ProblemParams;
pub use sequence::{Element, IntSequence, RatSequence, Sequence};
pub use subset::SubsetRef;
