//! Per-sector TDMA sharing and the network-level service metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::traffic::DemandVector;

/// Time shares and delivered rates for the cells of one sector, in the
/// order the cells were given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorAllocation {
    pub tau: Vec<f64>,
    pub effective_bps: Vec<f64>,
}

/// TDMA allocation proportional to the airtime each cell needs.
///
/// A cell needs `demand / capacity` of the frame. When the sector's total
/// need fits in one frame every cell gets exactly what it needs; otherwise
/// all needs are scaled down by the same factor. Cells with no demand or no
/// capacity get no time.
pub fn tdma_allocate(demands: &[f64], capacities: &[f64]) -> Result<SectorAllocation> {
    if demands.len() != capacities.len() {
        return Err(SimError::Shape(format!(
            "{} demands for {} capacities",
            demands.len(),
            capacities.len()
        )));
    }
    if let Some(x) = demands.iter().chain(capacities).find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(SimError::domain(format!("demands and capacities must be nonnegative, got {x}")));
    }

    let need: Vec<f64> = demands
        .iter()
        .zip(capacities)
        .map(|(&d, &c)| if d > 0.0 && c > 0.0 { d / c } else { 0.0 })
        .collect();
    let total: f64 = need.iter().sum();
    let fits = total <= 1.0;

    let (tau, effective_bps) = if fits {
        let effective = demands
            .iter()
            .zip(&need)
            .map(|(&d, &r)| if r > 0.0 { d } else { 0.0 })
            .collect();
        (need, effective)
    } else {
        // d / scale equals tau * c; this form keeps it below d exactly.
        let scale = total.max(1.0);
        let effective = demands
            .iter()
            .zip(capacities)
            .zip(&need)
            .map(|((&d, &c), &r)| if r > 0.0 { (d / scale).min(c) } else { 0.0 })
            .collect();
        (need.iter().map(|r| r / scale).collect(), effective)
    };
    Ok(SectorAllocation { tau, effective_bps })
}

/// Mean of delivered/requested over cells with positive demand; 1 when no
/// cell asks for anything.
pub fn grade_of_service(demands: &[f64], allocation: &SectorAllocation) -> f64 {
    let ratios: Vec<f64> = demands
        .iter()
        .zip(&allocation.effective_bps)
        .filter(|(&d, _)| d > 0.0)
        .map(|(&d, &e)| e / d)
        .collect();
    if ratios.is_empty() {
        1.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    }
}

/// One sector: its cell ids and their allocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorPlan {
    pub cells: Vec<usize>,
    pub allocation: SectorAllocation,
}

/// Groups cells by sector and runs [`tdma_allocate`] on each group.
pub fn schedule_sectors(sector_of: &[usize], demands: &[f64], capacities: &[f64]) -> Result<Vec<SectorPlan>> {
    if sector_of.len() != demands.len() || demands.len() != capacities.len() {
        return Err(SimError::Shape(format!(
            "{} sector labels, {} demands, {} capacities",
            sector_of.len(),
            demands.len(),
            capacities.len()
        )));
    }
    let n_sectors = sector_of.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); n_sectors];
    for (cell, &s) in sector_of.iter().enumerate() {
        members[s].push(cell);
    }
    members
        .into_iter()
        .map(|cells| {
            let d: Vec<f64> = cells.iter().map(|&c| demands[c]).collect();
            let c: Vec<f64> = cells.iter().map(|&c| capacities[c]).collect();
            Ok(SectorPlan {
                allocation: tdma_allocate(&d, &c)?,
                cells,
            })
        })
        .collect()
}

/// Replication-level summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub n_cells: usize,
    /// Aggregate over cells with positive demand; 0 when there are none.
    pub avg_cell_throughput_bps: f64,
    pub aggregate_throughput_bps: f64,
    pub gos: f64,
    /// Mean ACG over all cells; NaN for an empty network.
    pub avg_acg_db: f64,
}

/// Delivered rate per cell id, assembled from sector plans.
pub fn effective_per_cell(plans: &[SectorPlan], n_cells: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_cells];
    for plan in plans {
        for (&cell, &e) in plan.cells.iter().zip(&plan.allocation.effective_bps) {
            out[cell] = e;
        }
    }
    out
}

/// Network-wide metrics. GoS averages over every demand-positive cell of the
/// network, not over sector means.
pub fn network_metrics(plans: &[SectorPlan], demands: &DemandVector, acg_db: &[f64]) -> Result<NetworkMetrics> {
    let n = demands.len();
    if acg_db.len() != n {
        return Err(SimError::Shape(format!("{} ACG values for {n} cells", acg_db.len())));
    }
    let mut seen = vec![false; n];
    for plan in plans {
        if plan.cells.len() != plan.allocation.effective_bps.len() {
            return Err(SimError::Shape("sector plan cells and allocation differ in length".into()));
        }
        for &cell in &plan.cells {
            match seen.get_mut(cell) {
                None => return Err(SimError::Partition(format!("cell {cell} out of range"))),
                Some(true) => return Err(SimError::Partition(format!("cell {cell} in two sectors"))),
                Some(s) => *s = true,
            }
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(SimError::Partition(format!("cell {missing} in no sector")));
    }

    let effective = effective_per_cell(plans, n);
    let aggregate = effective.iter().fold(0.0, |acc, e| acc + e);
    let (served, ratio_sum) = demands
        .demand_bps
        .iter()
        .zip(&effective)
        .filter(|(&d, _)| d > 0.0)
        .fold((0usize, 0.0), |(k, s), (&d, &e)| (k + 1, s + e / d));

    Ok(NetworkMetrics {
        n_cells: n,
        avg_cell_throughput_bps: if served == 0 { 0.0 } else { aggregate / served as f64 },
        aggregate_throughput_bps: aggregate,
        gos: if served == 0 { 1.0 } else { ratio_sum / served as f64 },
        avg_acg_db: if n == 0 {
            f64::NAN
        } else {
            acg_db.iter().sum::<f64>() / n as f64
        },
    })
}
