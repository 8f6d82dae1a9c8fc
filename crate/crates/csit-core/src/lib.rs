//! Link-level simulator and sparse-recovery library for CSIT estimation in
//! multi-cell FDD massive MIMO.
//!
//! The crate models a cluster of hexagonal cells whose base stations transmit
//! random-phase downlink pilots. Users feed the received pilot signal back,
//! and the serving BS recovers the angle-domain channels of every nearby cell
//! jointly, exploiting that the angular support of a user-cell link is shared
//! across subcarriers and partially shared across physically close users.
//! Recovered channels feed a multi-cell joint zero-forcing precoder whose
//! per-user throughput quantifies the end-to-end value of the estimate.
//!
//! Modules map onto the pipeline stages:
//!
//! * [`channel`] — cell geometry, path loss, sparse angular channel synthesis
//! * [`pilot`] — pilot books, active-cell sets, sensing matrices, feedback
//! * [`estimators`] — greedy joint sparse recovery and baselines
//! * [`precoding`] — serving-set selection, joint ZF, throughput evaluation
//! * [`harness`] — configuration-driven Monte-Carlo experiments with CSV output
//!
//! The `parallel` feature (on by default) runs independent trials and
//! per-subcarrier work on a rayon pool; without it every loop runs
//! sequentially with identical results.

pub mod channel;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod harness;
pub mod linalg;
pub mod pilot;
pub mod precoding;

pub use error::SimError;
pub use linalg::CMat;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SimError>;
