//! Runs all four disciplines over the same scenario and tabulates makespan,
//! waiting and utilization side by side.
//!
//! Run with: cargo run --example compare_schedulers

use dmmm_sched::{compare, demo, Algorithm, SchedulerConfig};

fn main() {
    let scenario = demo::demo_scenario();
    let rows = compare(&scenario, &Algorithm::ALL, &SchedulerConfig::default()).unwrap();

    println!("{:<13} {:>8} {:>10} {:>9} {:>10}", "algorithm", "makespan", "mean_wait", "max_wait", "mean_util");
    for row in &rows {
        println!(
            "{:<13} {:>8} {:>10.3} {:>9} {:>10.3}",
            row.algorithm.name(),
            row.makespan,
            row.mean_wait,
            row.max_wait,
            row.mean_utilization
        );
    }

    // The matrix discipline concentrates load on the top-scored resource,
    // so it can trade makespan for preferential placement.
    let dmmm = &rows[0];
    let best = rows.iter().min_by_key(|r| r.makespan).unwrap();
    println!(
        "\ndmmm makespan {} vs best {} ({})",
        dmmm.makespan,
        best.makespan,
        best.algorithm.name()
    );
}
