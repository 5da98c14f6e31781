//! House-to-CCo transfer functions over a grid tree.
//!
//! Every branch that leaves the house→CCo path is folded into a shunt
//! admittance at its junction, working upward from the leaves with the
//! line input-impedance relation. The path itself is then a chain of line
//! sections and shunts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cable::{line_constants, CableCatalog, FrequencyGrid, LineConstants};
use super::twoport::{input_impedance, Abcd, ATTENUATION_LIMIT_NEPER};
use crate::error::{Result, SimError};
use crate::topology::PowerGrid;

/// Lowest mean power gain reported, so the ACG stays finite.
const POWER_FLOOR: f64 = 1e-300;

/// Modem impedances: the transmitting cell's source and the CCo receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PortImpedances {
    pub z_source_ohm: Complex64,
    pub z_load_ohm: Complex64,
}

impl Default for PortImpedances {
    fn default() -> Self {
        Self {
            z_source_ohm: Complex64::new(50.0, 0.0),
            z_load_ohm: Complex64::new(50.0, 0.0),
        }
    }
}

impl PortImpedances {
    pub fn validate(&self) -> Result<()> {
        let (zs, zl) = (self.z_source_ohm, self.z_load_ohm);
        if !(zs.is_finite() && zl.is_finite()) || zs.re < 0.0 || zl.re < 0.0 {
            return Err(SimError::domain(format!("port impedances must be finite and passive, got {self:?}")));
        }
        if zl.norm() == 0.0 {
            return Err(SimError::SingularLoad);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelResponse {
    pub h: Vec<Complex64>,
    pub acg_db: f64,
}

impl ChannelResponse {
    pub fn from_transfer(h: Vec<Complex64>) -> Result<Self> {
        let acg_db = average_channel_gain(&h)?;
        Ok(Self { h, acg_db })
    }
}

/// `10 log10` of the mean of `|h_k|^2`, floored at -3000 dB.
pub fn average_channel_gain(h: &[Complex64]) -> Result<f64> {
    if h.is_empty() {
        return Err(SimError::domain("average channel gain of an empty response"));
    }
    let mean = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / h.len() as f64;
    Ok(10.0 * mean.max(POWER_FLOOR).log10())
}

pub(crate) fn admittance(z: Complex64) -> Complex64 {
    if z.is_infinite() {
        Complex64::new(0.0, 0.0)
    } else {
        z.inv()
    }
}

/// Line constants per segment, shared between segments of the same cable.
pub(crate) struct SegmentConstants {
    table: Vec<Vec<LineConstants>>,
    index: Vec<usize>,
}

impl SegmentConstants {
    pub(crate) fn new(grid: &PowerGrid, cables: &CableCatalog, fgrid: &FrequencyGrid) -> Result<Self> {
        fgrid.validate()?;
        let mut keys: Vec<&str> = Vec::new();
        let mut index = Vec::with_capacity(grid.segments.len());
        for seg in &grid.segments {
            let i = match keys.iter().position(|k| *k == seg.cable) {
                Some(i) => i,
                None => {
                    keys.push(&seg.cable);
                    keys.len() - 1
                }
            };
            index.push(i);
        }
        let table = keys
            .iter()
            .map(|k| {
                let cable = cables.get(k)?;
                cable.validate()?;
                line_constants(cable, fgrid)
            })
            .collect::<Result<_>>()?;
        Ok(Self { table, index })
    }

    pub(crate) fn get(&self, segment: usize, k: usize) -> &LineConstants {
        &self.table[self.index[segment]][k]
    }
}

/// Precomputed branch admittances for one grid; answers per-cell queries.
pub struct ChannelSolver<'g> {
    grid: &'g PowerGrid,
    fgrid: FrequencyGrid,
    ports: PortImpedances,
    constants: SegmentConstants,
    /// Admittance looking from a segment's upper node into it, per frequency.
    branch_admittance: Vec<Vec<Complex64>>,
}

impl<'g> ChannelSolver<'g> {
    pub fn new(grid: &'g PowerGrid, cables: &CableCatalog, fgrid: &FrequencyGrid, ports: &PortImpedances) -> Result<Self> {
        ports.validate()?;
        let constants = SegmentConstants::new(grid, cables, fgrid)?;
        let n = fgrid.n_points;

        // Children before parents: reverse of a preorder walk from the CCo.
        let mut order = Vec::with_capacity(grid.segments.len());
        let mut stack: Vec<usize> = grid.child_segments(grid.cco()).to_vec();
        while let Some(s) = stack.pop() {
            order.push(s);
            stack.extend_from_slice(grid.child_segments(grid.segments[s].to_node));
        }

        let mut branch_admittance = vec![Vec::new(); grid.segments.len()];
        for &s in order.iter().rev() {
            let below = grid.segments[s].to_node;
            let length = grid.segments[s].length_m;
            let ys = (0..n)
                .map(|k| {
                    let y_term = node_load(grid, below)
                        + grid
                            .child_segments(below)
                            .iter()
                            .map(|&c| branch_admittance[c][k])
                            .sum::<Complex64>();
                    admittance(input_impedance(constants.get(s, k), length, z_of(y_term)))
                })
                .collect();
            branch_admittance[s] = ys;
        }

        Ok(Self {
            grid,
            fgrid: *fgrid,
            ports: *ports,
            constants,
            branch_admittance,
        })
    }

    pub fn grid(&self) -> &PowerGrid {
        self.grid
    }

    pub fn frequency_grid(&self) -> &FrequencyGrid {
        &self.fgrid
    }

    /// Chain matrix from the house of `cell` (after its own load) to the CCo
    /// port, per frequency. `None` where some path segment exceeds
    /// [`ATTENUATION_LIMIT_NEPER`].
    pub fn path_abcd(&self, cell: usize) -> Result<Vec<Option<Abcd>>> {
        let grid = self.grid;
        let house = grid.house_node(cell)?;
        let path = grid.path_to_cco(cell)?;
        Ok((0..self.fgrid.n_points)
            .map(|k| {
                let mut chain = Abcd::shunt_admittance(node_load(grid, house));
                for &s in &path {
                    let lc = self.constants.get(s, k);
                    let length = grid.segments[s].length_m;
                    if (lc.gamma * length).re > ATTENUATION_LIMIT_NEPER {
                        return None;
                    }
                    let junction = grid.segments[s].from_node;
                    let y_off = node_load(grid, junction)
                        + grid
                            .child_segments(junction)
                            .iter()
                            .filter(|&&c| c != s)
                            .map(|&c| self.branch_admittance[c][k])
                            .sum::<Complex64>();
                    chain = chain * Abcd::line(lc, length) * Abcd::shunt_admittance(y_off);
                }
                Some(chain)
            })
            .collect())
    }

    /// Transfer function from the modem of `cell` to the CCo receiver.
    /// Links past the attenuation limit read as zero.
    pub fn response(&self, cell: usize) -> Result<ChannelResponse> {
        let (zs, zl) = (self.ports.z_source_ohm, self.ports.z_load_ohm);
        let h = self
            .path_abcd(cell)?
            .into_iter()
            .map(|chain| chain.map_or(Complex64::new(0.0, 0.0), |m| m.voltage_transfer(zs, zl)))
            .collect();
        ChannelResponse::from_transfer(h)
    }

    /// Responses of every cell, in cell-id order.
    pub fn all_responses(&self) -> Result<Vec<ChannelResponse>> {
        (0..self.grid.n_cells()).map(|c| self.response(c)).collect()
    }
}

fn node_load(grid: &PowerGrid, node: usize) -> Complex64 {
    match grid.nodes[node].load_ohm {
        Some(r) => Complex64::new(r.recip(), 0.0),
        None => Complex64::new(0.0, 0.0),
    }
}

fn z_of(y: Complex64) -> Complex64 {
    if y == Complex64::new(0.0, 0.0) {
        Complex64::new(f64::INFINITY, 0.0)
    } else {
        y.inv()
    }
}

/// Channel response of one cell's link to the CCo.
pub fn path_transfer(
    grid: &PowerGrid,
    cell: usize,
    cables: &CableCatalog,
    fgrid: &FrequencyGrid,
    ports: &PortImpedances,
) -> Result<ChannelResponse> {
    grid.house_node(cell)?;
    ChannelSolver::new(grid, cables, fgrid, ports)?.response(cell)
}
