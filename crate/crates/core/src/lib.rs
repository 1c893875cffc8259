//! Exact computation of the algebraic degree of circulant graphs.
//!
//! A circulant graph `Cay(Z_n, S)` has algebraic degree `phi(n) / |Fix(S)|`
//! where `Fix(S)` is the stabilizer of `S` in the unit group `Z_n^*`. On top
//! of that formula this crate provides:
//!
//! * [`numtheory`]: factorization, multiplicative functions, prime search;
//! * [`unitgroup`]: the structure of `Z_n^*`, subgroups and cosets;
//! * [`circulant`]: connection sets, `Fix(S)`, degree, explicit constructions;
//! * [`cyclotomic`]: exact arithmetic in `Z[zeta_n]`, eigenvalues and an
//!   independent splitting-field degree oracle;
//! * [`integral`]: integral symbols `G_n(d)` and the count of connected
//!   integral circulants;
//! * [`census`]: isomorphism classes of d-integral circulants, bounds and
//!   witness families;
//! * [`mintable`]: the least order `C(d)` of a degree-d circulant and the
//!   table for `d <= 100`;
//! * [`verify`]: the cross-module property suites used by `circdeg verify`.

pub mod census;
pub mod circulant;
pub mod cyclotomic;
mod error;
pub mod integral;
pub mod mintable;
pub mod numtheory;
pub mod unitgroup;
pub mod verify;

pub use census::{CensusKind, CensusRecord};
pub use circulant::ConnectionSet;
pub use cyclotomic::{CyclotomicInt, CyclotomicRing, IntPolynomial};
pub use error::{Error, Result};
pub use integral::IntegralSymbol;
pub use mintable::TableRow;
pub use numtheory::Factorization;
pub use unitgroup::{Subgroup, UnitGroup};

/// Version string recorded in result envelopes.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
