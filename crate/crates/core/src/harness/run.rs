use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::seed::derive_seed;
use crate::capacity::link_capacity;
use crate::channel::ChannelSolver;
use crate::error::Result;
use crate::scheduler::{effective_per_cell, network_metrics, schedule_sectors, NetworkMetrics};
use crate::topology::{assign_sectors, build_power_grid, generate_deployment, PowerGrid};
use crate::traffic::{generate_demand, DemandVector};

/// RNG stream used for the deployment of a replication.
const DEPLOYMENT_STREAM: u64 = 0;
/// RNG stream used for the traffic demand of a replication.
const TRAFFIC_STREAM: u64 = 1;

/// One row of the per-cell report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapRow {
    pub cell_id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub sector: usize,
    pub acg_db: f64,
    pub capacity_bps: f64,
    pub demand_bps: f64,
    pub effective_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub density: f64,
    pub rep: usize,
    pub avg_cell_throughput_bps: f64,
    pub aggregate_throughput_bps: f64,
    pub gos: f64,
    pub avg_acg_db: f64,
}

/// Everything one replication produced.
#[derive(Debug, Clone)]
pub struct Replication {
    pub metrics: NetworkMetrics,
    pub heatmap: Vec<HeatmapRow>,
    pub grid: PowerGrid,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Deployment, grid, channels, capacities, demand and TDMA for one seed.
///
/// Deployment and demand draw from separate ChaCha8 streams of `seed`, so
/// changing the traffic model never moves the houses.
pub fn run_replication(config: &SimConfig, density: f64, seed: u64) -> Result<Replication> {
    let deployment = generate_deployment(
        &config.territory,
        density,
        &config.grid.house_load_ohm,
        &mut stream(seed, DEPLOYMENT_STREAM),
    )?;
    let grid = build_power_grid(&deployment, &config.grid)?;
    let sectors = assign_sectors(&grid);

    let solver = ChannelSolver::new(&grid, &config.cables, &config.band, &config.ports)?;
    let responses = solver.all_responses()?;
    let capacities = responses
        .iter()
        .map(|r| link_capacity(r, &config.psd, &config.band).map(|c| c.bps))
        .collect::<Result<Vec<f64>>>()?;
    let acg: Vec<f64> = responses.iter().map(|r| r.acg_db).collect();

    let demands: DemandVector = generate_demand(deployment.cells.len(), &config.traffic, &mut stream(seed, TRAFFIC_STREAM))?;
    let plans = schedule_sectors(&sectors, &demands.demand_bps, &capacities)?;
    let metrics = network_metrics(&plans, &demands, &acg)?;
    let effective = effective_per_cell(&plans, deployment.cells.len());

    let heatmap = deployment
        .cells
        .iter()
        .map(|cell| HeatmapRow {
            cell_id: cell.id,
            x_m: cell.x_m,
            y_m: cell.y_m,
            sector: sectors[cell.id],
            acg_db: acg[cell.id],
            capacity_bps: capacities[cell.id],
            demand_bps: demands.demand_bps[cell.id],
            effective_bps: effective[cell.id],
        })
        .collect();

    Ok(Replication { metrics, heatmap, grid })
}

/// Replication at a sweep coordinate, seeded via [`derive_seed`].
pub fn run_indexed(config: &SimConfig, density_index: usize, rep: usize) -> Result<Replication> {
    let seed = derive_seed(config.sweep.master_seed, density_index as u64, rep as u64);
    run_replication(config, config.sweep.densities[density_index], seed)
}

/// Where a given density sits in the config's sweep; densities not listed
/// get the index one past the end so their seeds never alias a sweep cell.
pub fn density_index(config: &SimConfig, density: f64) -> usize {
    config
        .sweep
        .densities
        .iter()
        .position(|&d| d == density)
        .unwrap_or(config.sweep.densities.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Runs every (density, replication) pair; rows come back density-major
/// regardless of execution mode.
pub fn run_sweep(config: &SimConfig, execution: Execution) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let reps = config.sweep.replications;
    let jobs: Vec<(usize, usize)> = (0..config.sweep.densities.len())
        .flat_map(|d| (0..reps).map(move |r| (d, r)))
        .collect();

    let run = |&(d, r): &(usize, usize)| -> Result<SweepRow> {
        let m = run_indexed(config, d, r)?.metrics;
        Ok(SweepRow {
            density: config.sweep.densities[d],
            rep: r,
            avg_cell_throughput_bps: m.avg_cell_throughput_bps,
            aggregate_throughput_bps: m.aggregate_throughput_bps,
            gos: m.gos,
            avg_acg_db: m.avg_acg_db,
        })
    };

    match execution {
        Execution::Serial => jobs.iter().map(run).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            jobs.par_iter().map(run).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => jobs.iter().map(run).collect(),
    }
}
