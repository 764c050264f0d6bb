//! Exact-arithmetic laboratory for pathwise trading games.
//!
//! The crate models price paths on [0,1] with exact rationals, computes their
//! variation calculus (including certified infinite one-sided variation),
//! runs an Ockham prediction system over explicitly well-ordered countable
//! path families, evaluates event-driven trading strategies with positivity
//! and predictability validation, and cross-checks the closed-form singleton
//! superhedging price against a brute-force minimax oracle.

pub mod error;
pub mod logsum;
pub mod paths;
pub mod rat;
pub mod strategy;
pub mod theorems;
pub mod variation;
pub mod wellorder;

pub use error::{Error, Result};
pub use rat::Rat;
