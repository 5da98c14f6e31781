//! Monte-Carlo evaluation of power-line communications as the backhaul of
//! dense femto-cell networks.
//!
//! A replication runs the whole pipeline for one random deployment:
//!
//! 1. [`topology`] scatters houses over a territory and wires them to a
//!    central coordinator (CCo) through a radial low-voltage tree.
//! 2. [`channel`] computes each house→CCo transfer function with
//!    transmission-line theory (ABCD cascades with collapsed branches) and
//!    its average channel gain (ACG).
//! 3. [`capacity`] turns each response into a Shannon rate under flat
//!    Gaussian noise.
//! 4. [`traffic`] draws the backhaul demand of every cell.
//! 5. [`scheduler`] shares each sector's medium by TDMA and computes
//!    throughput and grade of service (GoS).
//!
//! [`harness`] drives replications and density sweeps and writes CSV output.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod harness;
pub mod scheduler;
pub mod stats;
pub mod topology;
pub mod traffic;

pub use error::{Result, SimError};
