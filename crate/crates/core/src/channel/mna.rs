//! Nodal-analysis reference solver.
//!
//! Stamps every segment's two-port admittance parameters into one network
//! matrix and solves it per frequency. Slow, but shares nothing with the
//! chain-matrix path beyond the line constants, so it serves as a check on
//! [`super::path_transfer`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::cable::{CableCatalog, FrequencyGrid};
use super::network::{ChannelResponse, PortImpedances, SegmentConstants};
use super::twoport::{coth, ATTENUATION_LIMIT_NEPER};
use crate::error::{Result, SimError};
use crate::topology::PowerGrid;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Channel response of `cell` by full nodal analysis.
///
/// Nodes joined by zero-length segments are merged first. A zero source
/// impedance is handled as an ideal voltage source with its own current
/// unknown.
pub fn mna_solve(
    grid: &PowerGrid,
    cables: &CableCatalog,
    fgrid: &FrequencyGrid,
    ports: &PortImpedances,
    cell: usize,
) -> Result<ChannelResponse> {
    let house = grid.house_node(cell)?;
    ports.validate()?;
    let constants = SegmentConstants::new(grid, cables, fgrid)?;

    let mut parent: Vec<usize> = (0..grid.nodes.len()).collect();
    for seg in grid.segments.iter().filter(|s| s.length_m == 0.0) {
        let (a, b) = (find(&mut parent, seg.from_node), find(&mut parent, seg.to_node));
        parent[a.max(b)] = a.min(b);
    }
    let mut compact = vec![usize::MAX; grid.nodes.len()];
    let mut n_nodes = 0;
    for v in 0..grid.nodes.len() {
        let r = find(&mut parent, v);
        if compact[r] == usize::MAX {
            compact[r] = n_nodes;
            n_nodes += 1;
        }
        compact[v] = compact[r];
    }

    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let (zs, zl) = (ports.z_source_ohm, ports.z_load_ohm);
    let ideal_source = zs == zero;
    let dim = n_nodes + usize::from(ideal_source);
    let src = compact[house];
    let cco = compact[grid.cco()];

    let mut h = Vec::with_capacity(fgrid.n_points);
    for k in 0..fgrid.n_points {
        let mut y = DMatrix::<Complex64>::zeros(dim, dim);
        let mut rhs = DVector::<Complex64>::zeros(dim);

        for (s, seg) in grid.segments.iter().enumerate() {
            if seg.length_m == 0.0 {
                continue;
            }
            let lc = constants.get(s, k);
            let gl = lc.gamma * seg.length_m;
            let (y_self, y_mutual) = if gl.re > ATTENUATION_LIMIT_NEPER {
                (lc.z0.inv(), zero)
            } else {
                (coth(gl) / lc.z0, -(lc.z0 * gl.sinh()).inv())
            };
            let (i, j) = (compact[seg.from_node], compact[seg.to_node]);
            y[(i, i)] += y_self;
            y[(j, j)] += y_self;
            y[(i, j)] += y_mutual;
            y[(j, i)] += y_mutual;
        }
        for node in &grid.nodes {
            if let Some(r) = node.load_ohm {
                let i = compact[node.id];
                y[(i, i)] += Complex64::new(r.recip(), 0.0);
            }
        }
        y[(cco, cco)] += zl.inv();

        if ideal_source {
            y[(src, n_nodes)] = -one;
            y[(n_nodes, src)] = one;
            rhs[n_nodes] = one;
        } else {
            y[(src, src)] += zs.inv();
            rhs[src] = zs.inv();
        }

        let v = y.lu().solve(&rhs).ok_or(SimError::SingularMatrix { index: k })?;
        if !v[cco].is_finite() {
            return Err(SimError::SingularMatrix { index: k });
        }
        h.push(v[cco]);
    }
    ChannelResponse::from_transfer(h)
}
