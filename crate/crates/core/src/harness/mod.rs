//! Replications, density sweeps and their CSV artifacts.

mod config;
mod output;
mod run;
mod seed;

pub use config::{SimConfig, SweepParams};
pub use output::{
    format_sig9, heatmap_file_name, write_channel_csv, write_heatmap_csv, write_outputs, write_sweep_csv, Heatmap,
    CHANNEL_HEADER, HEATMAP_HEADER, SWEEP_HEADER,
};
pub use run::{density_index, run_indexed, run_replication, run_sweep, Execution, HeatmapRow, Replication, SweepRow};
pub use seed::{derive_seed, mix64};
