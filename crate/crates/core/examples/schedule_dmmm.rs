//! Schedules the bundled scenario with the decision-matrix discipline and
//! prints the resulting timeline and metrics.
//!
//! Run with: cargo run --example schedule_dmmm

use dmmm_sched::{dmmm_schedule, demo, metrics, SchedulerConfig};

fn main() {
    let scenario = demo::demo_scenario();
    let schedule = dmmm_schedule(&scenario, &SchedulerConfig::default()).unwrap();

    println!("bindings in dispatch order:");
    for a in &schedule.assignments {
        let exec = scenario.tasks.iter().find(|t| t.id == a.task_id).unwrap().execution_time;
        println!(
            "  {} ({} units) -> {} over [{}, {})",
            a.task_id, exec, a.resource_id, a.start, a.finish
        );
    }

    let m = metrics(&schedule, None);
    println!("makespan: {}", m.makespan);
    println!("mean wait: {}", m.mean_wait);
    for (resource, fraction) in &m.utilization {
        println!("  {resource} utilized {:.0}%", fraction * 100.0);
    }
}
