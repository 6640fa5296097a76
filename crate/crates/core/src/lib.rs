//! Utility maximisation and indifference pricing for exponential Lévy models
//! driven by a random factor.
//!
//! Conditionally on the factor value `u`, the traded asset is the stochastic
//! exponential of a Lévy process with triplet `(b^u, σ², ν^u)`. For each of the
//! three HARA utilities this crate
//!
//! * solves the scalar Girsanov parameter of the f-divergence minimal
//!   equivalent martingale measure ([`measure`]),
//! * evaluates the deterministic information processes of that measure
//!   ([`info`]),
//! * integrates conditional results against the factor law ([`factor`]),
//! * computes maximal expected utilities and buyer/seller indifference prices,
//!   and checks the convex risk measure axioms ([`pricer`]),
//! * and provides the closed forms of the correlated Geometric Brownian motion
//!   case ([`gbm`]).
//!
//! The crate is `no_std` and only needs `alloc`. Simulation, configuration and
//! the command-line front end live in the `indiff` companion crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod error;
pub mod factor;
pub mod gbm;
pub mod info;
pub mod levy;
pub mod measure;
pub mod pricer;
pub mod root;
pub mod sum;

pub use error::{Error, Result};
pub use factor::{AlphaSpec, FactorFamily, FactorModel, FactorNode, PayoffSpec};
pub use gbm::GbmModel;
pub use info::InfoQuantities;
pub use levy::{Atom, CheckedTriplet, HaraUtility, LevyMeasure, LevyTriplet};
pub use measure::{ConditionMode, GirsanovSolution, SolverSettings};
pub use pricer::{PriceReport, Side};
