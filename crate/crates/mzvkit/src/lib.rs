//! Exact and numeric toolkit for multiple zeta values and alternating Euler sums.
//!
//! Modules build bottom-up: [`exactalg`] → [`mzvword`] → [`numeval`] →
//! [`identities`], with [`coaction`] and [`blocklie`] for the exact
//! structural checks.

pub mod blocklie;
pub mod coaction;
pub mod exactalg;
pub mod identities;
pub mod mzvword;
pub mod numeval;
pub mod par;

pub use exactalg::{MultiPoly, Rational};
pub use mzvword::{LinComb, SignedIndex, Word};

