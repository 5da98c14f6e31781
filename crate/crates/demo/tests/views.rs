use plcsim_demo::{capacity_curve_points, deployment_view, sweep_points};

#[test]
fn deployment_view_serializes() {
    let v = deployment_view(0.1, 5).unwrap();
    let json = serde_json::to_value(&v).unwrap();
    let cells = json["cells"].as_array().unwrap().len();
    let wires = json["wires"].as_array().unwrap();
    assert_eq!(cells, 25);
    assert_eq!(wires.iter().filter(|w| w["backbone"] == false).count(), cells);
}

#[test]
fn curve_spans_the_ceiling() {
    let pts = serde_json::to_value(capacity_curve_points(-50.0, -140.0).unwrap()).unwrap();
    let pts = pts.as_array().unwrap();
    assert_eq!(pts.len(), 151);
    assert_eq!(pts[150]["capacity_bps"].as_f64().unwrap(), 1.008e9);
    assert!(capacity_curve_points(-150.0, -140.0).is_err());
}

#[test]
fn sweep_has_one_point_per_density() {
    let pts = serde_json::to_value(sweep_points(1, 3).unwrap()).unwrap();
    assert_eq!(pts.as_array().unwrap().len(), 10);
}
