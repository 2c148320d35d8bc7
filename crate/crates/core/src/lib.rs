//! Exact Fedosov star products on linear symplectic orbifold charts.
//!
//! Everything is computed over the Gaussian rationals with polynomial
//! coefficients, so every identity of the construction (flatness of the
//! Fedosov connection, associativity, the Hodge splitting) is checked as an
//! exact zero test.

pub mod error;
pub mod matrix;
pub mod parallel;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use matrix::RatMatrix;
pub use poly::{BasePoly, MultiIndex};
pub use scalar::Scalar;
pub use weyl::{Convention, TruncationPolicy, WeylForm, WeylKey};

pub mod chart;
pub mod connection;
pub mod group;
pub mod invariants;
pub mod strata;

pub use chart::Chart;
pub use connection::Christoffel;
pub use group::FiniteGroup;
pub mod axioms;
pub mod engine;
pub mod sampling;
pub mod suite;
