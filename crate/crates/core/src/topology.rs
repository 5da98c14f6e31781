//! Random femto-cell deployments and the radial low-voltage grid that links
//! every house to the central coordinator.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Rectangular area over which cells are scattered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Territory {
    pub width_m: f64,
    pub height_m: f64,
    /// Area covered by one femto-cell.
    pub cell_coverage_area_m2: f64,
}

impl Default for Territory {
    fn default() -> Self {
        Self {
            width_m: 500.0,
            height_m: 500.0,
            cell_coverage_area_m2: 1000.0,
        }
    }
}

impl Territory {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.width_m) && ok(self.height_m) && ok(self.cell_coverage_area_m2)) {
            return Err(SimError::domain(format!(
                "territory dimensions must be positive, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn center(&self) -> (f64, f64) {
        (self.width_m / 2.0, self.height_m / 2.0)
    }
}

/// Resistance presented by a house to the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HouseLoad {
    Fixed(f64),
    Uniform { low_ohm: f64, high_ohm: f64 },
}

impl HouseLoad {
    fn validate(&self) -> Result<()> {
        match *self {
            HouseLoad::Fixed(r) if r.is_finite() && r > 0.0 => Ok(()),
            HouseLoad::Uniform { low_ohm, high_ohm }
                if low_ohm.is_finite() && low_ohm > 0.0 && high_ohm.is_finite() && high_ohm >= low_ohm =>
            {
                Ok(())
            }
            other => Err(SimError::domain(format!("invalid house load {other:?}"))),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            HouseLoad::Fixed(r) => r,
            HouseLoad::Uniform { low_ohm, high_ohm } => low_ohm + (high_ohm - low_ohm) * rng.random::<f64>(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridParams {
    pub n_feeders: usize,
    pub backbone_cable: String,
    pub drop_cable: String,
    pub min_drop_length_m: f64,
    pub house_load_ohm: HouseLoad,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            n_feeders: 4,
            backbone_cable: "backbone".into(),
            drop_cable: "drop".into(),
            min_drop_length_m: 5.0,
            house_load_ohm: HouseLoad::Fixed(50.0),
        }
    }
}

impl GridParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_feeders == 0 {
            return Err(SimError::domain("n_feeders must be at least 1"));
        }
        if !(self.min_drop_length_m.is_finite() && self.min_drop_length_m >= 0.0) {
            return Err(SimError::domain("min_drop_length_m must be nonnegative"));
        }
        self.house_load_ohm.validate()
    }
}

/// One femto-cell, living in one house.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSite {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub house_load_ohm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub territory: Territory,
    pub density: f64,
    pub cells: Vec<CellSite>,
}

/// Number of cells whose coverage adds up to `density` of the territory.
pub fn cell_count(territory: &Territory, density: f64) -> Result<usize> {
    territory.validate()?;
    if !(0.0..=1.0).contains(&density) {
        return Err(SimError::domain(format!("density {density} outside [0, 1]")));
    }
    let n = density * territory.width_m * territory.height_m / territory.cell_coverage_area_m2;
    Ok(n.round() as usize)
}

/// Scatters `cell_count` houses uniformly over the territory.
///
/// Draws, per cell in id order: x, y, then the house load (uniform loads
/// only). The result depends on nothing but the inputs and the stream state.
pub fn generate_deployment<R: Rng + ?Sized>(
    territory: &Territory,
    density: f64,
    house_load: &HouseLoad,
    rng: &mut R,
) -> Result<Deployment> {
    let n = cell_count(territory, density)?;
    house_load.validate()?;
    let cells = (0..n)
        .map(|id| {
            let x_m = territory.width_m * rng.random::<f64>();
            let y_m = territory.height_m * rng.random::<f64>();
            let house_load_ohm = house_load.draw(rng);
            CellSite {
                id,
                x_m,
                y_m,
                house_load_ohm,
            }
        })
        .collect();
    Ok(Deployment {
        territory: *territory,
        density,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Cco,
    Tap,
    House,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    pub id: usize,
    pub kind: NodeKind,
    pub x_m: f64,
    pub y_m: f64,
    /// Feeder the node hangs from; `None` for the CCo.
    pub feeder: Option<usize>,
    /// Cell living in this house; `None` unless `kind == House`.
    pub cell: Option<usize>,
    /// Termination resistance; houses only.
    pub load_ohm: Option<f64>,
}

/// Cable run between two nodes. `from_node` is the end closer to the CCo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CableSegment {
    pub from_node: usize,
    pub to_node: usize,
    pub length_m: f64,
    pub cable: String,
}

/// Tree of cable segments rooted at the CCo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerGrid {
    pub nodes: Vec<GridNode>,
    pub segments: Vec<CableSegment>,
    /// Sector index per cell id.
    pub sector_of: Vec<usize>,
    house_of: Vec<usize>,
    parent_segment: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    cco: usize,
}

impl PowerGrid {
    /// Assembles and validates a grid from explicit parts.
    ///
    /// Node ids must equal their index. Cells are numbered by the `cell`
    /// field of house nodes and must be contiguous from 0. Segments may be
    /// listed in either orientation; they are re-oriented away from the CCo.
    pub fn from_parts(nodes: Vec<GridNode>, segments: Vec<CableSegment>) -> Result<Self> {
        let bad = |msg: String| Err(SimError::domain(format!("invalid grid: {msg}")));
        for (i, n) in nodes.iter().enumerate() {
            if n.id != i {
                return bad(format!("node at index {i} has id {}", n.id));
            }
        }
        let ccos: Vec<usize> = nodes.iter().filter(|n| n.kind == NodeKind::Cco).map(|n| n.id).collect();
        if ccos.len() != 1 {
            return bad(format!("expected exactly one CCo, found {}", ccos.len()));
        }
        let cco = ccos[0];
        if segments.len() + 1 != nodes.len() {
            return bad(format!("{} segments for {} nodes", segments.len(), nodes.len()));
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (s, seg) in segments.iter().enumerate() {
            if seg.from_node >= nodes.len() || seg.to_node >= nodes.len() || seg.from_node == seg.to_node {
                return bad(format!("segment {s} has bad endpoints"));
            }
            if !(seg.length_m.is_finite() && seg.length_m >= 0.0) {
                return bad(format!("segment {s} has length {}", seg.length_m));
            }
            adjacency[seg.from_node].push(s);
            adjacency[seg.to_node].push(s);
        }

        // Orient away from the CCo with a BFS; a tree reaches every node once.
        let mut segments = segments;
        let mut parent_segment = vec![None; nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        let mut seen = vec![false; nodes.len()];
        let mut queue = std::collections::VecDeque::from([cco]);
        seen[cco] = true;
        while let Some(u) = queue.pop_front() {
            for &s in &adjacency[u] {
                if parent_segment[u] == Some(s) {
                    continue;
                }
                let seg = &mut segments[s];
                let v = if seg.from_node == u { seg.to_node } else { seg.from_node };
                if seen[v] {
                    return bad("cycle detected".into());
                }
                if seg.from_node != u {
                    std::mem::swap(&mut seg.from_node, &mut seg.to_node);
                }
                seen[v] = true;
                parent_segment[v] = Some(s);
                children[u].push(s);
                queue.push_back(v);
            }
        }
        if seen.iter().any(|&b| !b) {
            return bad("grid is not connected".into());
        }

        let n_cells = nodes.iter().filter(|n| n.kind == NodeKind::House).count();
        let mut house_of = vec![usize::MAX; n_cells];
        let mut sector_of = vec![0; n_cells];
        for n in &nodes {
            match n.kind {
                NodeKind::House => {
                    let Some(cell) = n.cell.filter(|&c| c < n_cells) else {
                        return bad(format!("house node {} has no valid cell id", n.id));
                    };
                    if house_of[cell] != usize::MAX {
                        return bad(format!("cell {cell} mapped to two houses"));
                    }
                    if !children[n.id].is_empty() {
                        return bad(format!("house node {} is not a leaf", n.id));
                    }
                    if !n.load_ohm.is_some_and(|r| r > 0.0) {
                        return bad(format!("house node {} needs a positive load", n.id));
                    }
                    house_of[cell] = n.id;
                    sector_of[cell] = n.feeder.unwrap_or(0);
                }
                _ if n.cell.is_some() => return bad(format!("non-house node {} carries a cell", n.id)),
                _ => {}
            }
        }

        Ok(Self {
            nodes,
            segments,
            sector_of,
            house_of,
            parent_segment,
            children,
            cco,
        })
    }

    pub fn cco(&self) -> usize {
        self.cco
    }

    pub fn n_cells(&self) -> usize {
        self.house_of.len()
    }

    pub fn house_node(&self, cell: usize) -> Result<usize> {
        self.house_of.get(cell).copied().ok_or(SimError::UnknownCell(cell))
    }

    /// Segment linking `node` to its parent, `None` at the CCo.
    pub fn parent_segment(&self, node: usize) -> Option<usize> {
        self.parent_segment[node]
    }

    /// Segments hanging below `node`.
    pub fn child_segments(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Segments from the house of `cell` up to the CCo, house end first.
    pub fn path_to_cco(&self, cell: usize) -> Result<Vec<usize>> {
        let mut node = self.house_node(cell)?;
        let mut path = Vec::new();
        while let Some(s) = self.parent_segment[node] {
            path.push(s);
            node = self.segments[s].from_node;
        }
        Ok(path)
    }

    /// Cable length between the house of `cell` and the CCo.
    pub fn cable_distance(&self, cell: usize) -> Result<f64> {
        Ok(self.path_to_cco(cell)?.iter().map(|&s| self.segments[s].length_m).sum())
    }

    pub fn degree(&self, node: usize) -> usize {
        self.children[node].len() + usize::from(self.parent_segment[node].is_some())
    }
}

/// Distances to two feeders closer than this count as a tie.
const TIE_TOLERANCE_M: f64 = 1e-9;

/// Wires every house to a CCo at the territory center.
///
/// `n_feeders` straight feeders leave the CCo at angles `2πk/n_feeders`.
/// Each house drops perpendicularly onto its nearest feeder ray (ties within
/// [`TIE_TOLERANCE_M`] go to the lowest index); a house whose nearest feeder
/// point is the ray origin attaches at the CCo.
/// Taps at the same distance along a feeder share one node.
pub fn build_power_grid(deployment: &Deployment, params: &GridParams) -> Result<PowerGrid> {
    params.validate()?;
    let (cx, cy) = deployment.territory.center();
    let directions: Vec<(f64, f64)> = (0..params.n_feeders)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / params.n_feeders as f64;
            (theta.cos(), theta.sin())
        })
        .collect();

    // (feeder, distance along feeder, drop length) per cell
    let attachments: Vec<(usize, f64, f64)> = deployment
        .cells
        .iter()
        .map(|cell| {
            let (px, py) = (cell.x_m - cx, cell.y_m - cy);
            let mut best = (0, 0.0, f64::INFINITY);
            for (k, &(ux, uy)) in directions.iter().enumerate() {
                let t = px * ux + py * uy;
                let (t, dist) = if t <= 0.0 {
                    (0.0, px.hypot(py))
                } else {
                    (t, (px * uy - py * ux).abs())
                };
                if dist < best.2 - TIE_TOLERANCE_M {
                    best = (k, t, dist);
                }
            }
            (best.0, best.1, best.2.max(params.min_drop_length_m))
        })
        .collect();

    let mut nodes = vec![GridNode {
        id: 0,
        kind: NodeKind::Cco,
        x_m: cx,
        y_m: cy,
        feeder: None,
        cell: None,
        load_ohm: None,
    }];
    let mut segments = Vec::new();

    for (k, &(ux, uy)) in directions.iter().enumerate() {
        let mut on_feeder: Vec<usize> = (0..attachments.len()).filter(|&c| attachments[c].0 == k).collect();
        on_feeder.sort_by(|&a, &b| attachments[a].1.total_cmp(&attachments[b].1).then(a.cmp(&b)));

        let mut tap_node = 0;
        let mut tap_dist = 0.0;
        for cell in on_feeder {
            let (_, t, drop_len) = attachments[cell];
            if t > tap_dist {
                let id = nodes.len();
                nodes.push(GridNode {
                    id,
                    kind: NodeKind::Tap,
                    x_m: cx + t * ux,
                    y_m: cy + t * uy,
                    feeder: Some(k),
                    cell: None,
                    load_ohm: None,
                });
                segments.push(CableSegment {
                    from_node: tap_node,
                    to_node: id,
                    length_m: t - tap_dist,
                    cable: params.backbone_cable.clone(),
                });
                tap_node = id;
                tap_dist = t;
            }
            let site = &deployment.cells[cell];
            let id = nodes.len();
            nodes.push(GridNode {
                id,
                kind: NodeKind::House,
                x_m: site.x_m,
                y_m: site.y_m,
                feeder: Some(k),
                cell: Some(site.id),
                load_ohm: Some(site.house_load_ohm),
            });
            segments.push(CableSegment {
                from_node: tap_node,
                to_node: id,
                length_m: drop_len,
                cable: params.drop_cable.clone(),
            });
        }
    }

    PowerGrid::from_parts(nodes, segments)
}

/// Random small tree for randomized checks of the channel solvers.
///
/// Node 0 is the CCo; every later node hangs off a uniformly chosen earlier
/// node. Leaves become houses except that, when there are several
/// leaves, each may instead stay an unterminated tap with probability 1/5.
/// Segment lengths are uniform in [1, 200) m, cables alternate randomly
/// between `cable_keys`, and house loads are uniform in [10, 200) ohms.
pub fn random_tree<R: Rng + ?Sized>(n_nodes: usize, cable_keys: &[&str], rng: &mut R) -> Result<PowerGrid> {
    if n_nodes < 2 || cable_keys.is_empty() {
        return Err(SimError::domain("random tree needs at least 2 nodes and one cable type"));
    }
    let parent: Vec<usize> = (1..n_nodes).map(|i| rng.random_range(0..i)).collect();
    let mut has_child = vec![false; n_nodes];
    for &p in &parent {
        has_child[p] = true;
    }
    let leaves: Vec<usize> = (1..n_nodes).filter(|&v| !has_child[v]).collect();
    let keep_open = |rng: &mut R| leaves.len() > 1 && rng.random_bool(0.2);

    let mut nodes = vec![GridNode {
        id: 0,
        kind: NodeKind::Cco,
        x_m: 0.0,
        y_m: 0.0,
        feeder: None,
        cell: None,
        load_ohm: None,
    }];
    let mut n_cells = 0;
    let mut any_house = false;
    for v in 1..n_nodes {
        let is_last_leaf = leaves.last() == Some(&v);
        let house = !has_child[v] && ((is_last_leaf && !any_house) || !keep_open(rng));
        any_house |= house;
        nodes.push(GridNode {
            id: v,
            kind: if house { NodeKind::House } else { NodeKind::Tap },
            x_m: 0.0,
            y_m: 0.0,
            feeder: Some(0),
            cell: house.then(|| {
                n_cells += 1;
                n_cells - 1
            }),
            load_ohm: house.then(|| rng.random_range(10.0..200.0)),
        });
    }
    let segments = parent
        .iter()
        .enumerate()
        .map(|(i, &p)| CableSegment {
            from_node: p,
            to_node: i + 1,
            length_m: rng.random_range(1.0..200.0),
            cable: cable_keys[rng.random_range(0..cable_keys.len())].to_string(),
        })
        .collect();
    PowerGrid::from_parts(nodes, segments)
}

/// Sector of every cell: the feeder its house drop attaches to.
pub fn assign_sectors(grid: &PowerGrid) -> Vec<usize> {
    (0..grid.n_cells())
        .map(|cell| grid.nodes[grid.house_of[cell]].feeder.unwrap_or(0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn territory() -> Territory {
        Territory::default()
    }

    fn site(id: usize, x_m: f64, y_m: f64) -> CellSite {
        CellSite {
            id,
            x_m,
            y_m,
            house_load_ohm: 50.0,
        }
    }

    fn deployment(cells: Vec<CellSite>) -> Deployment {
        Deployment {
            territory: territory(),
            density: 0.0,
            cells,
        }
    }

    #[test]
    fn cell_count_examples() {
        let t = territory();
        assert_eq!(cell_count(&t, 0.0).unwrap(), 0);
        assert_eq!(cell_count(&t, 1.0).unwrap(), 250);
        assert_eq!(cell_count(&t, 0.5).unwrap(), 125);
    }

    #[test]
    fn cell_count_rejects_bad_density() {
        assert!(matches!(cell_count(&territory(), -0.1), Err(SimError::Domain(_))));
        assert!(matches!(cell_count(&territory(), 1.5), Err(SimError::Domain(_))));
        assert!(cell_count(&territory(), f64::NAN).is_err());
    }

    #[test]
    fn zero_density_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = generate_deployment(&territory(), 0.0, &HouseLoad::Fixed(50.0), &mut rng).unwrap();
        assert!(d.cells.is_empty());
    }

    #[test]
    fn deployment_is_seed_deterministic() {
        let load = HouseLoad::Uniform {
            low_ohm: 20.0,
            high_ohm: 80.0,
        };
        let a = generate_deployment(&territory(), 0.4, &load, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = generate_deployment(&territory(), 0.4, &load, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert!(a.cells.iter().all(|c| (20.0..=80.0).contains(&c.house_load_ohm)));
    }

    #[test]
    fn positions_are_uniform_on_average() {
        // 1e5 cells: density 1 over a territory holding exactly 1e5 coverage areas
        let t = Territory {
            width_m: 1000.0,
            height_m: 1000.0,
            cell_coverage_area_m2: 10.0,
        };
        let d = generate_deployment(&t, 1.0, &HouseLoad::Fixed(50.0), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(d.cells.len(), 100_000);
        let mean_x = d.cells.iter().map(|c| c.x_m).sum::<f64>() / d.cells.len() as f64;
        assert!((mean_x - 500.0).abs() < 5.0, "mean x {mean_x}");
        assert!(d.cells.iter().all(|c| (0.0..=t.width_m).contains(&c.x_m) && (0.0..=t.height_m).contains(&c.y_m)));
    }

    #[test]
    fn single_house_geometry() {
        // feeder 0 points along +x from (250, 250)
        let d = deployment(vec![site(0, 250.0 + 120.0, 250.0 + 30.0)]);
        let grid = build_power_grid(&d, &GridParams::default()).unwrap();
        assert_eq!(grid.nodes.len(), 3);
        assert_eq!(grid.segments.len(), 2);
        assert_relative_eq!(grid.segments[0].length_m, 120.0, epsilon = 1e-9);
        assert_relative_eq!(grid.segments[1].length_m, 30.0, epsilon = 1e-9);
        assert_eq!(grid.segments[0].cable, "backbone");
        assert_eq!(grid.segments[1].cable, "drop");

        // offset below the minimum drop length
        let d = deployment(vec![site(0, 250.0 + 80.0, 250.0 + 1.0)]);
        let grid = build_power_grid(&d, &GridParams::default()).unwrap();
        assert_relative_eq!(grid.segments[1].length_m, 5.0);
    }

    #[test]
    fn empty_deployment_gives_lone_cco() {
        let grid = build_power_grid(&deployment(vec![]), &GridParams::default()).unwrap();
        assert_eq!(grid.nodes.len(), 1);
        assert!(grid.segments.is_empty());
        assert_eq!(grid.nodes[0].kind, NodeKind::Cco);
    }

    #[test]
    fn sectors_follow_feeders() {
        // feeders 0..4 point +x, +y, -x, -y
        let d = deployment(vec![
            site(0, 400.0, 260.0),
            site(1, 240.0, 400.0),
            site(2, 100.0, 245.0),
            site(3, 255.0, 90.0),
        ]);
        let grid = build_power_grid(&d, &GridParams::default()).unwrap();
        assert_eq!(assign_sectors(&grid), vec![0, 1, 2, 3]);
        assert_eq!(grid.sector_of, vec![0, 1, 2, 3]);

        let single = GridParams {
            n_feeders: 1,
            ..GridParams::default()
        };
        let grid = build_power_grid(&d, &single).unwrap();
        assert_eq!(assign_sectors(&grid), vec![0; 4]);
    }

    #[test]
    fn house_behind_single_feeder_hangs_off_cco() {
        let single = GridParams {
            n_feeders: 1,
            ..GridParams::default()
        };
        let d = deployment(vec![site(0, 100.0, 250.0)]);
        let grid = build_power_grid(&d, &single).unwrap();
        assert_eq!(grid.segments.len(), 1);
        assert_eq!(grid.segments[0].from_node, grid.cco());
        assert_relative_eq!(grid.segments[0].length_m, 150.0, epsilon = 1e-9);
    }

    #[test]
    fn nearest_feeder_tie_goes_to_lowest_index() {
        // on the diagonal between feeder 0 (+x) and feeder 1 (+y)
        let d = deployment(vec![site(0, 350.0, 350.0)]);
        let grid = build_power_grid(&d, &GridParams::default()).unwrap();
        assert_eq!(grid.sector_of, vec![0]);
    }

    #[test]
    fn from_parts_rejects_cycles_and_inner_houses() {
        let node = |id, kind, cell: Option<usize>| GridNode {
            id,
            kind,
            x_m: 0.0,
            y_m: 0.0,
            feeder: Some(0),
            cell,
            load_ohm: cell.map(|_| 50.0),
        };
        let seg = |a, b| CableSegment {
            from_node: a,
            to_node: b,
            length_m: 1.0,
            cable: "drop".into(),
        };
        let nodes = vec![node(0, NodeKind::Cco, None), node(1, NodeKind::House, Some(0)), node(2, NodeKind::Tap, None)];
        assert!(PowerGrid::from_parts(nodes.clone(), vec![seg(0, 1), seg(1, 2)]).is_err());
        assert!(PowerGrid::from_parts(nodes.clone(), vec![seg(0, 1), seg(1, 0)]).is_err());
        let ok = PowerGrid::from_parts(nodes, vec![seg(2, 0), seg(2, 1)]).unwrap();
        assert_eq!(ok.path_to_cco(0).unwrap(), vec![1, 0]);
        assert_eq!(ok.segments[0].from_node, 0);
    }
}
