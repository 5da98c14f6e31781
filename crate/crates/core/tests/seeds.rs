use plcsim::harness::derive_seed;

#[test]
fn derive_seed_matches_golden_table() {
    let table = include_str!("golden/derive_seed.csv");
    let mut rows = 0;
    for line in table.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let v: Vec<u64> = line.split(',').map(|f| f.trim().parse().unwrap()).collect();
        assert_eq!(derive_seed(v[0], v[1], v[2]), v[3], "row {line}");
        rows += 1;
    }
    assert_eq!(rows, 8);
}
