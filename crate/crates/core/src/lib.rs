//! Monte Carlo estimation of critical intensities for Poisson random
//! connection models with finite-range radial connection functions.
//!
//! The cluster of the origin is grown by [`exploration::explore_cluster`],
//! repeated explorations decide percolation at one intensity
//! ([`threshold::percolation_verdict`]), and
//! [`threshold::estimate_critical`] brackets the critical intensity
//! starting from the branching lower bound of [`branching`].

pub mod branching;
pub mod cli;
pub mod connection;
pub mod error;
pub mod exploration;
pub mod geometry;
pub mod quadrature;
pub mod records;
pub mod reference;
pub mod reproduce;
pub mod sampling;
pub mod threshold;

pub use branching::{branching_bound, constant_g_certificate, BranchingReport};
pub use connection::ConnectionModel;
pub use error::{RcmError, Result};
pub use exploration::{estimate_pair_connectedness, explore_cluster, ClusterOutcome, PairConnectedness, SimParams};
pub use geometry::{ball_volume, Point, SpatialIndex};
pub use records::TrialRecord;
pub use sampling::{RngStream, DEFAULT_SEED};
pub use threshold::{estimate_critical, percolation_verdict, CriticalEstimate, PercolationVerdict, SearchConfig};
