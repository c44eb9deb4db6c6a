//! Synergy, network-position and audience-discourse metrics for dyadic
//! content-creator collaborations.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! command-line interface and report rendering live in the `collabkit`
//! companion crate.
//!
//! The pipeline, module by module:
//!
//! * [`corpus`]: channel, video and comment records, row-level validation
//!   and median viewership baselines.
//! * [`collab`]: handle mentions in video descriptions, two-way
//!   collaboration dyads and collaboration share statistics.
//! * [`synergy`]: two-way Shapley contributions, their normalized form,
//!   aggregation by dyad type and reciprocity.
//! * [`netmetrics`]: the creator collaboration graph with closeness
//!   centrality, and the commenter attention graph with Shannon entropy.
//! * [`discourse`]: lexicon sentiment scoring, keyword topic tagging and
//!   per-dyad-type aggregation.
//! * [`simgen`]: seeded synthetic communities with planted parameters and
//!   an independent oracle for end-to-end checks.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod collab;
pub mod corpus;
pub mod discourse;
pub mod netmetrics;
pub mod rational;
pub mod simgen;
pub mod synergy;

pub use rational::Rational;
