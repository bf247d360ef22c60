//! Shows what the priority-first switch changes: owners with higher
//! priority dispatch before shorter tasks, on every discipline but
//! round-robin (whose pairing is positional).
//!
//! Run with: cargo run --example priority_first

use dmmm_sched::{demo, run, Algorithm, Schedule, SchedulerConfig};

fn print_order(label: &str, schedule: &Schedule) {
    let order: Vec<&str> = schedule.assignments.iter().map(|a| a.task_id.as_str()).collect();
    println!("{label:<28} {} (makespan {})", order.join(" "), schedule.makespan());
}

fn main() {
    let scenario = demo::demo_scenario();
    println!("task owners: t1/u1(prio 4) t2/u2(3) t3/u3(2) t4/u4(1)\n");

    for algorithm in Algorithm::ALL {
        let plain = SchedulerConfig { algorithm, ..SchedulerConfig::default() };
        let prio = SchedulerConfig { algorithm, priority_first: true, ..SchedulerConfig::default() };
        let a = run(&scenario, &plain).unwrap();
        let b = run(&scenario, &prio).unwrap();
        print_order(&format!("{algorithm} plain:"), &a);
        print_order(&format!("{algorithm} priority-first:"), &b);
        if a == b {
            println!("  (unchanged)");
        }
        println!();
    }
}
