//! Synthesizes a bursty workload, ingests it, and reports totals plus the
//! peak and dormant windows the provider would flag.
//!
//! Run with: cargo run --example monitor_usage

use dmmm_sched::{build_report, ingest_usage, synthesize_usage, UsageProfile};

fn main() {
    let records = synthesize_usage(7, 4, 3, 24, UsageProfile::Bursty).unwrap();
    println!("synthesized {} records (seed 7, 4 customers, 3 resources, 24 buckets)", records.len());

    let store = ingest_usage(&records).unwrap();
    let report = build_report(&store, 12, 2).unwrap();

    println!("\ntotals per customer:");
    for (customer, total) in &report.customer_totals {
        let per_resource: Vec<String> = report.pair_totals[customer]
            .iter()
            .map(|(r, v)| format!("{r}={v}"))
            .collect();
        println!("  {customer}: {total} ({})", per_resource.join(", "));
    }

    println!("\npeak windows (combined usage >= 12):");
    for w in &report.peak_windows {
        println!("  {} busy over [{}, {})", w.customer_id, w.start, w.end);
    }

    println!("\ndormant windows (combined usage <= 2):");
    for w in &report.dormant_windows {
        println!("  {} quiet over [{}, {})", w.customer_id, w.start, w.end);
    }
}
