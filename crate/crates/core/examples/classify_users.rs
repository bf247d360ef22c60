//! Turns raw usage totals into user types with the rank-quantile rule:
//! heavier customers earn better types and higher priorities.
//!
//! Run with: cargo run --example classify_users

use dmmm_sched::{classify_users, ingest_usage, ClassificationRule, UsageRecord};

fn main() {
    // One bucket of usage per customer is enough: only totals matter.
    let totals = [("acme", 4000), ("brite", 310), ("corex", 2750), ("dale", 45)];
    let records: Vec<UsageRecord> = totals
        .iter()
        .map(|(customer, amount)| UsageRecord {
            customer_id: customer.to_string(),
            resource_id: "r1".into(),
            bucket_start: 0,
            amount: *amount,
        })
        .collect();
    let store = ingest_usage(&records).unwrap();

    let rule = ClassificationRule::default_quartiles();
    println!("bands (first match on rank quantile, strictly above the bound):");
    for band in &rule.bands {
        println!("  quantile > {:<4} -> {} (priority {})", band.min_quantile, band.user_type, band.priority);
    }

    let profiles = classify_users(&store, &rule).unwrap();
    println!("\nclassified profiles:");
    for p in &profiles {
        println!(
            "  {:<6} total {:>5} -> {} (priority {})",
            p.id, store.customer_totals()[&p.id], p.user_type, p.priority
        );
    }

    // Scale every total by 1000: ranks are unchanged, so classes are too.
    let scaled: Vec<UsageRecord> = records
        .iter()
        .map(|r| UsageRecord { amount: r.amount * 1000, ..r.clone() })
        .collect();
    let rescored = classify_users(&ingest_usage(&scaled).unwrap(), &rule).unwrap();
    assert_eq!(profiles, rescored);
    println!("\nscaling all totals by 1000 changes nothing: classification is rank-based");
}
