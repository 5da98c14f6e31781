//! Browser bindings: one replication as a map, the gain-to-rate curve, and a
//! small density sweep. Every call takes and returns plain JSON strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use plcsim::capacity::{capacity_from_gains, PsdConfig};
use plcsim::harness::{derive_seed, run_indexed, run_replication, HeatmapRow, SimConfig};
use plcsim::stats::mean;
use plcsim::topology::NodeKind;

/// Frequency points used by the demo; coarser than the batch default so
/// dense territories stay interactive.
const DEMO_POINTS: usize = 256;

fn demo_config(master_seed: u64) -> SimConfig {
    let mut config = SimConfig::default();
    config.band.n_points = DEMO_POINTS;
    config.sweep.master_seed = master_seed;
    config
}

fn to_js<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(|e| JsValue::from_str(&e.to_string()))
}

fn js_err(e: plcsim::SimError) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[derive(Serialize)]
struct Wire {
    x: [f64; 2],
    y: [f64; 2],
    backbone: bool,
}

#[derive(Serialize)]
pub struct DeploymentView {
    width_m: f64,
    height_m: f64,
    cco: [f64; 2],
    cells: Vec<HeatmapRow>,
    wires: Vec<Wire>,
    gos: f64,
    aggregate_bps: f64,
    avg_acg_db: f64,
}

pub fn deployment_view(density: f64, seed: u64) -> plcsim::Result<DeploymentView> {
    let config = demo_config(seed);
    let r = run_replication(&config, density, derive_seed(seed, 0, 0))?;
    let nodes = &r.grid.nodes;
    let cco = &nodes[r.grid.cco()];
    let wires = r
        .grid
        .segments
        .iter()
        .map(|s| {
            let (a, b) = (&nodes[s.from_node], &nodes[s.to_node]);
            Wire {
                x: [a.x_m, b.x_m],
                y: [a.y_m, b.y_m],
                backbone: b.kind != NodeKind::House,
            }
        })
        .collect();
    Ok(DeploymentView {
        width_m: config.territory.width_m,
        height_m: config.territory.height_m,
        cco: [cco.x_m, cco.y_m],
        cells: r.heatmap,
        wires,
        gos: r.metrics.gos,
        aggregate_bps: r.metrics.aggregate_throughput_bps,
        avg_acg_db: r.metrics.avg_acg_db,
    })
}

#[derive(Serialize)]
pub struct CurvePoint {
    acg_db: f64,
    capacity_bps: f64,
}

/// Capacity of a flat channel for gains from -150 dB to 0 dB.
pub fn capacity_curve_points(tx_dbm_per_hz: f64, noise_dbm_per_hz: f64) -> plcsim::Result<Vec<CurvePoint>> {
    let psd = PsdConfig {
        tx_dbm_per_hz,
        noise_dbm_per_hz,
        ..PsdConfig::default()
    };
    psd.validate()?;
    let band = SimConfig::default().band;
    Ok((0..=150)
        .map(|k| {
            let acg_db = -150.0 + k as f64;
            let g = 10f64.powf(acg_db / 10.0);
            CurvePoint {
                acg_db,
                capacity_bps: capacity_from_gains(std::iter::repeat_n(g, band.n_points), &psd, band.spacing_hz()),
            }
        })
        .collect())
}

#[derive(Serialize)]
pub struct SweepPoint {
    density: f64,
    gos: f64,
    aggregate_per_sector_bps: f64,
}

pub fn sweep_points(replications: usize, seed: u64) -> plcsim::Result<Vec<SweepPoint>> {
    let mut config = demo_config(seed);
    config.sweep.replications = replications.max(1);
    let sectors = config.grid.n_feeders as f64;
    (0..config.sweep.densities.len())
        .map(|d| {
            let runs = (0..config.sweep.replications)
                .map(|rep| run_indexed(&config, d, rep).map(|r| r.metrics))
                .collect::<plcsim::Result<Vec<_>>>()?;
            let gos: Vec<f64> = runs.iter().map(|m| m.gos).collect();
            let agg: Vec<f64> = runs.iter().map(|m| m.aggregate_throughput_bps / sectors).collect();
            Ok(SweepPoint {
                density: config.sweep.densities[d],
                gos: mean(&gos),
                aggregate_per_sector_bps: mean(&agg),
            })
        })
        .collect()
}

/// One replication at `density`: houses, wires and per-cell results.
#[wasm_bindgen]
pub fn deployment(density: f64, seed: u64) -> Result<String, JsValue> {
    to_js(&deployment_view(density, seed).map_err(js_err)?)
}

/// Flat-channel capacity against average channel gain.
#[wasm_bindgen]
pub fn capacity_curve(tx_dbm_per_hz: f64, noise_dbm_per_hz: f64) -> Result<String, JsValue> {
    to_js(&capacity_curve_points(tx_dbm_per_hz, noise_dbm_per_hz).map_err(js_err)?)
}

/// Mean GoS and per-sector throughput over the default densities.
#[wasm_bindgen]
pub fn density_sweep(replications: usize, seed: u64) -> Result<String, JsValue> {
    to_js(&sweep_points(replications, seed).map_err(js_err)?)
}
