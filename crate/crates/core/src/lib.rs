//! Compact approximators for lattice-valued functions.
//!
//! A [`CompactApproximator`] stores an upper approximation of a function
//! from keys to a lattice in `m` buckets addressed by `d` hash functions,
//! without storing the keys. Over the Boolean lattice it is a Bloom filter;
//! over the naturals it can hold the last-occurrence table that drives
//! bad-character shifts, which makes Boyer-Moore style search practical on
//! alphabets too large for a direct table (see [`search`]).

pub mod approximator;
pub mod distinct;
pub mod error;
pub mod error_analysis;
pub mod hash;
pub mod lattice;
pub mod search;

pub use approximator::{choose_params, optimal_d, BuildParams, CompactApproximator, DEFAULT_M_FLOOR};
pub use distinct::{estimate_distinct, exact_distinct, DistinctEstimate, EstimateMethod};
pub use error::{Error, Result};
pub use hash::{BucketHasher, FamilyShape, FixedFamily, HashFamily, Key};
pub use lattice::{check_lattice_laws, BoolLattice, FunctionSample, Lattice, LawViolation, NatLattice};
