use geogate::acceptance::{run_criterion, CRITERIA};
use geogate::random::DEFAULT_SEED;

#[test]
fn all_criteria() {
    let mut failed = Vec::new();
    for &(id, _) in CRITERIA.iter() {
        let outcome = run_criterion(id, DEFAULT_SEED);
        println!("{}  ({:.1}s)", outcome.summary_line(), outcome.wall_time);
        if !outcome.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
