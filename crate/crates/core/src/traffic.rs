//! Per-cell backhaul demand: a compound Poisson number of users, each with a
//! lognormal rate, capped per cell.

use rand::Rng;
use rand_distr::{Distribution, LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrafficParams {
    pub mean_users_per_cell: f64,
    pub user_rate_median_bps: f64,
    pub user_rate_sigma_ln: f64,
    pub max_cell_demand_bps: f64,
}

impl Default for TrafficParams {
    fn default() -> Self {
        Self {
            mean_users_per_cell: 4.0,
            user_rate_median_bps: 4e6,
            user_rate_sigma_ln: 0.5,
            max_cell_demand_bps: 100e6,
        }
    }
}

impl TrafficParams {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !(nonneg(self.mean_users_per_cell) && nonneg(self.user_rate_median_bps) && nonneg(self.user_rate_sigma_ln)) {
            return Err(SimError::domain(format!("traffic parameters must be nonnegative, got {self:?}")));
        }
        if !(self.max_cell_demand_bps > 0.0) {
            return Err(SimError::domain("max_cell_demand_bps must be positive"));
        }
        Ok(())
    }

    /// Expected cell demand before the cap: `mean_users * median * exp(sigma^2 / 2)`.
    pub fn uncapped_mean_bps(&self) -> f64 {
        self.mean_users_per_cell * self.user_rate_median_bps * (self.user_rate_sigma_ln.powi(2) / 2.0).exp()
    }
}

/// Requested throughput per cell id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandVector {
    pub demand_bps: Vec<f64>,
}

impl DemandVector {
    pub fn len(&self) -> usize {
        self.demand_bps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demand_bps.is_empty()
    }
}

/// Draws the demand of `n_cells` cells, one cell at a time: the user count,
/// then that many user rates.
pub fn generate_demand<R: Rng + ?Sized>(n_cells: usize, params: &TrafficParams, rng: &mut R) -> Result<DemandVector> {
    params.validate()?;
    if params.mean_users_per_cell == 0.0 || params.user_rate_median_bps == 0.0 {
        return Ok(DemandVector {
            demand_bps: vec![0.0; n_cells],
        });
    }
    let users = Poisson::new(params.mean_users_per_cell).map_err(|e| SimError::domain(e.to_string()))?;
    let rate = LogNormal::new(params.user_rate_median_bps.ln(), params.user_rate_sigma_ln)
        .map_err(|e| SimError::domain(e.to_string()))?;
    let demand_bps = (0..n_cells)
        .map(|_| {
            let u = users.sample(rng) as u64;
            let total: f64 = (0..u).map(|_| rate.sample(rng)).sum();
            total.min(params.max_cell_demand_bps)
        })
        .collect();
    Ok(DemandVector { demand_bps })
}
