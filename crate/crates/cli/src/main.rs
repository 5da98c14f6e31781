use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plcsim::channel::ChannelSolver;
use plcsim::harness::{
    density_index, derive_seed, run_replication, run_sweep, write_channel_csv, write_heatmap_csv, write_outputs,
    Execution, Heatmap, SimConfig, SweepRow,
};
use plcsim::SimError;

/// Power-line backhaul simulator for dense femto-cell deployments.
#[derive(Debug, Parser)]
#[command(name = "sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one replication; writes sweep.csv (one row) and its heatmap.
    Single(ReplicationArgs),
    /// Run every density and replication of the config; writes sweep.csv.
    Sweep(SweepArgs),
    /// Run one replication and write only its per-cell heatmap.
    Heatmap(ReplicationArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Overrides sweep.master_seed from the config.
    #[arg(long)]
    master_seed: Option<u64>,
}

#[derive(Debug, Args)]
struct ReplicationArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    density: f64,
    #[arg(long)]
    rep: usize,
    /// Also dump the transfer function of these cells as channel_<id>.csv.
    #[arg(long = "channel", value_name = "CELL_ID")]
    channels: Vec<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Run replications one after another instead of on a thread pool.
    #[arg(long)]
    serial: bool,
    /// Also write the heatmap of every replication.
    #[arg(long)]
    heatmaps: bool,
}

fn load(common: &Common) -> Result<SimConfig, SimError> {
    let mut config = SimConfig::load(&common.config)?;
    if let Some(seed) = common.master_seed {
        config.sweep.master_seed = seed;
    }
    Ok(config)
}

fn replication(args: &ReplicationArgs, write_row: bool) -> Result<(), SimError> {
    let config = load(&args.common)?;
    if !(0.0..=1.0).contains(&args.density) {
        return Err(SimError::Config(format!("density {} outside [0, 1]", args.density)));
    }
    let d = density_index(&config, args.density);
    let seed = derive_seed(config.sweep.master_seed, d as u64, args.rep as u64);
    let result = run_replication(&config, args.density, seed)?;

    let heatmap = Heatmap {
        density: args.density,
        rep: args.rep,
        rows: result.heatmap,
    };
    let out = &args.common.out;
    let written = if write_row {
        let m = result.metrics;
        let row = SweepRow {
            density: args.density,
            rep: args.rep,
            avg_cell_throughput_bps: m.avg_cell_throughput_bps,
            aggregate_throughput_bps: m.aggregate_throughput_bps,
            gos: m.gos,
            avg_acg_db: m.avg_acg_db,
        };
        write_outputs(&[row], &[heatmap], out)?
    } else {
        create_dir(out)?;
        let path = out.join(plcsim::harness::heatmap_file_name(heatmap.density, heatmap.rep));
        write_heatmap_csv(&path, &heatmap.rows)?;
        vec![path]
    };

    if !args.channels.is_empty() {
        let solver = ChannelSolver::new(&result.grid, &config.cables, &config.band, &config.ports)?;
        for &cell in &args.channels {
            let path = out.join(format!("channel_{cell}.csv"));
            write_channel_csv(&path, &config.band, &solver.response(cell)?)?;
            println!("{}", path.display());
        }
    }
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), SimError> {
    std::fs::create_dir_all(dir).map_err(|source| SimError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn sweep(args: &SweepArgs) -> Result<(), SimError> {
    let config = load(&args.common)?;
    let execution = if args.serial { Execution::Serial } else { Execution::Parallel };
    let rows = run_sweep(&config, execution)?;
    let heatmaps = if args.heatmaps {
        let mut maps = Vec::new();
        for (d, &density) in config.sweep.densities.iter().enumerate() {
            for rep in 0..config.sweep.replications {
                maps.push(Heatmap {
                    density,
                    rep,
                    rows: plcsim::harness::run_indexed(&config, d, rep)?.heatmap,
                });
            }
        }
        maps
    } else {
        Vec::new()
    };
    for path in write_outputs(&rows, &heatmaps, &args.common.out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Single(args) => replication(args, true),
        Command::Heatmap(args) => replication(args, false),
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ SimError::Config(_)) => {
            eprintln!("sim: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("sim: {e}");
            ExitCode::FAILURE
        }
    }
}
