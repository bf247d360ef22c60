//! The full loop in one program: synthesize usage, report on it, classify
//! customers, inject the classified users into a scenario and schedule it.
//! Equivalent to the `pipeline` subcommand, shown here through the library.
//!
//! Run with: cargo run --example pipeline

use dmmm_sched::{
    build_report, classify_users, demo, dmmm_schedule, ingest_usage, metrics, synthesize_usage,
    ClassificationRule, SchedulerConfig, UsageProfile,
};

fn main() {
    // Stage 1: monitor. Four customers' worth of bursty usage.
    let records = synthesize_usage(7, 4, 3, 24, UsageProfile::Bursty).unwrap();
    let store = ingest_usage(&records).unwrap();

    // Stage 2: report totals and notable windows to the provider.
    let report = build_report(&store, 12, 2).unwrap();
    println!("monitored {} records over {} buckets", records.len(), store.horizon());
    println!("{} peak windows, {} dormant windows", report.peak_windows.len(), report.dormant_windows.len());

    // Stage 3: prioritize. Usage ranks pick each customer's type.
    let profiles = classify_users(&store, &ClassificationRule::default_quartiles()).unwrap();
    for p in &profiles {
        println!("  {} used {:>4} -> {} (priority {})",
            p.id, report.customer_totals[&p.id], p.user_type, p.priority);
    }

    // Stage 4: allocate. The bundled pipeline scenario owns its tasks by
    // customer id; the classified profiles become its user list.
    let mut doc = demo::pipeline_doc();
    doc.users = profiles;
    let scenario = doc.validate().unwrap();
    let schedule = dmmm_schedule(&scenario, &SchedulerConfig::default()).unwrap();

    println!("\nschedule:");
    for a in &schedule.assignments {
        println!("  {} -> {} [{}, {})", a.task_id, a.resource_id, a.start, a.finish);
    }
    println!("makespan {}", metrics(&schedule, None).makespan);
}
