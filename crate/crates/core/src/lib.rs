//! Quantitative analysis of password-management schemes.
//!
//! A password-management scheme decides how one user's `m` passwords relate
//! to each other. This crate models both sides of that design problem:
//!
//! * **Usability** — each password is a set of cue-association pairs that
//!   human memory retains only under a rehearsal schedule ([`rehearsal`]).
//!   Account visits form Poisson processes that rehearse cues naturally, and
//!   [`usability`] computes (and simulates) the expected number of extra
//!   rehearsal sessions a user must add on top of normal browsing.
//! * **Security** — an adversary with an economic guessing budget, online
//!   strike limits, and possibly leaked plaintext passwords tries to crack
//!   one more account. [`security`] evaluates the winning-probability bounds
//!   and validates them with an empirical game oracle at toy scale.
//! * **Constructions** — [`designs`] builds the sharing set families that let
//!   accounts share cues aggressively (for natural rehearsal) while bounding
//!   pairwise overlap (for leak containment), and [`schemes`] assembles whole
//!   schemes, from naive password reuse to split person-action-object story
//!   cues assigned by a greedy rehearsal-minimizing map.
//!
//! The default `parallel` feature runs Monte Carlo trials and verification
//! scans on rayon; disabling it yields a sequential build with bit-identical
//! results.

pub mod data;
pub mod designs;
pub mod error;
pub mod rehearsal;
pub mod schemes;
pub mod security;
pub mod usability;

pub use error::{Error, Result};
