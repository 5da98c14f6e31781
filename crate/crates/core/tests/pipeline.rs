//! Channel, capacity and TDMA chained by hand on a three-house grid.

use approx::assert_relative_eq;
use plcsim::capacity::{link_capacity, PsdConfig};
use plcsim::channel::{mna_solve, CableCatalog, ChannelSolver, FrequencyGrid, PortImpedances};
use plcsim::scheduler::{network_metrics, schedule_sectors};
use plcsim::topology::{assign_sectors, CableSegment, GridNode, NodeKind, PowerGrid};
use plcsim::traffic::DemandVector;

fn grid() -> PowerGrid {
    let node = |id, kind, feeder: Option<usize>, cell: Option<usize>| GridNode {
        id,
        kind,
        x_m: 0.0,
        y_m: 0.0,
        feeder,
        cell,
        load_ohm: cell.map(|_| 50.0),
    };
    let seg = |from, to, len, cable: &str| CableSegment {
        from_node: from,
        to_node: to,
        length_m: len,
        cable: cable.into(),
    };
    PowerGrid::from_parts(
        vec![
            node(0, NodeKind::Cco, None, None),
            node(1, NodeKind::Tap, Some(0), None),
            node(2, NodeKind::House, Some(0), Some(0)),
            node(3, NodeKind::House, Some(0), Some(1)),
            node(4, NodeKind::Tap, Some(1), None),
            node(5, NodeKind::House, Some(1), Some(2)),
        ],
        vec![
            seg(0, 1, 150.0, "backbone"),
            seg(1, 2, 20.0, "drop"),
            seg(1, 3, 600.0, "drop"),
            seg(0, 4, 80.0, "backbone"),
            seg(4, 5, 10.0, "drop"),
        ],
    )
    .unwrap()
}

#[test]
fn three_cells_end_to_end() {
    let grid = grid();
    let (cables, fgrid, ports, psd) = (
        CableCatalog::default(),
        FrequencyGrid::default(),
        PortImpedances::default(),
        PsdConfig::default(),
    );
    let solver = ChannelSolver::new(&grid, &cables, &fgrid, &ports).unwrap();

    // independent path: nodal solve, then Shannon sum written out
    let snr0 = 10f64.powf(9.0);
    let df = 84e6 / 1024.0;
    let mut capacity = Vec::new();
    let mut acg = Vec::new();
    for cell in 0..3 {
        let h = mna_solve(&grid, &cables, &fgrid, &ports, cell).unwrap().h;
        let c: f64 = h.iter().map(|x| df * (1.0 + x.norm_sqr() * snr0).log2().min(12.0)).sum();
        let p = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / h.len() as f64;
        let fast = solver.response(cell).unwrap();
        assert_relative_eq!(link_capacity(&fast, &psd, &fgrid).unwrap().bps, c, max_relative = 1e-9);
        assert_relative_eq!(fast.acg_db, 10.0 * p.log10(), epsilon = 1e-8);
        capacity.push(c);
        acg.push(10.0 * p.log10());
    }
    // the far house on the long drop hears the CCo worst
    assert!(acg[1] < acg[0] && acg[1] < acg[2]);

    // sector 0 is asked for more airtime than exists, sector 1 is not
    let demand = vec![0.7 * capacity[0], 0.6 * capacity[1], 0.5 * capacity[2]];
    let sectors = assign_sectors(&grid);
    assert_eq!(sectors, vec![0, 0, 1]);
    let plans = schedule_sectors(&sectors, &demand, &capacity).unwrap();
    let m = network_metrics(&plans, &DemandVector { demand_bps: demand.clone() }, &acg).unwrap();

    let served = [demand[0] / 1.3, demand[1] / 1.3, demand[2]];
    let aggregate: f64 = served.iter().sum();
    assert_relative_eq!(m.aggregate_throughput_bps, aggregate, max_relative = 1e-12);
    assert_relative_eq!(m.avg_cell_throughput_bps, aggregate / 3.0, max_relative = 1e-12);
    assert_relative_eq!(m.gos, (2.0 / 1.3 + 1.0) / 3.0, max_relative = 1e-12);
    assert_relative_eq!(m.avg_acg_db, acg.iter().sum::<f64>() / 3.0, max_relative = 1e-12);
}
