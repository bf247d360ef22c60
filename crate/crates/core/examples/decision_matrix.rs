//! Builds a decision matrix by hand, inspects its cells and totals, and
//! ranks a resource pool by matrix score.
//!
//! Run with: cargo run --example decision_matrix

use dmmm_sched::{build_matrix, demo, rank_resources, Criterion, MatrixColumn};

fn main() {
    let matrix = build_matrix(
        vec![
            Criterion { name: "compute".into(), weight: 1 },
            Criterion { name: "storage".into(), weight: 2 },
            Criterion { name: "network".into(), weight: 3 },
        ],
        vec![
            MatrixColumn { user_type: "benefited".into(), rating: 4 },
            MatrixColumn { user_type: "important".into(), rating: 3 },
            MatrixColumn { user_type: "casual".into(), rating: 2 },
            MatrixColumn { user_type: "lesser-privileged".into(), rating: 1 },
        ],
    );

    println!("cells (weight x rating):");
    for criterion in &matrix.criteria {
        let row: Vec<String> = matrix
            .columns
            .iter()
            .map(|c| format!("{:>2}", matrix.cell(criterion, c)))
            .collect();
        println!("  {:<8} (w={})  {}", criterion.name, criterion.weight, row.join("  "));
    }

    println!("column totals:");
    for (user_type, total) in matrix.column_totals() {
        println!("  {user_type:<18} {total}");
    }
    println!("score: {} (best user type: {})", matrix.score(), matrix.best_user_type().unwrap());

    // Rank a whole pool: highest score first, ties by ascending id.
    let scenario = demo::demo_scenario();
    let ranked = rank_resources(&scenario.resources).unwrap();
    println!("resource ranking: {}", ranked.join(" > "));
    for resource in &scenario.resources {
        println!("  {} scores {}", resource.id, resource.matrix.score());
    }
}
