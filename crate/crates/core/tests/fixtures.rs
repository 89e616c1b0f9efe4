use charmorph::fixture::{replay, Fixture};

fn run(name: &str, checks: usize) {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let fx = Fixture::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    let (_, report) = replay(&fx).unwrap();
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert_eq!(report.checks.len(), checks);
}

#[test]
fn example1_replays() {
    run("example1.json", 5 + 6 + 2);
}

#[test]
fn example2_replays() {
    run("example2.json", 5 + 8 + 2);
}
