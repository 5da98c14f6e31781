//! Power-line channel model: per-link transfer functions from
//! transmission-line theory, plus a nodal-analysis cross-check.

mod cable;
mod mna;
mod network;
mod twoport;

pub use cable::{line_constants, rlgc_at, secondary_params, CableCatalog, CableType, FrequencyGrid, LineConstants, Rlgc};
pub use mna::mna_solve;
pub use network::{average_channel_gain, path_transfer, ChannelResponse, ChannelSolver, PortImpedances};
pub use twoport::{abcd_line, abcd_shunt, cascade, input_impedance, Abcd, TwoPortAbcd, ATTENUATION_LIMIT_NEPER};
