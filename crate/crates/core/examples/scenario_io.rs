//! Parses scenario JSON, walks through the validation errors a bad file
//! can produce, and shows how fractional speed factors stay exact.
//!
//! Run with: cargo run --example scenario_io

use dmmm_sched::{ScenarioDoc, SpeedFactor};

fn try_validate(label: &str, text: &str) {
    let outcome = serde_json::from_str::<ScenarioDoc>(text)
        .map_err(|e| e.to_string())
        .and_then(|doc| doc.validate().map_err(|e| e.to_string()));
    match outcome {
        Ok(s) => println!("{label}: ok ({} tasks, {} resources)", s.tasks.len(), s.resources.len()),
        Err(e) => println!("{label}: rejected: {e}"),
    }
}

fn main() {
    let valid = r#"{
        "users": [{ "id": "u1", "user_type": "casual", "priority": 2 }],
        "tasks": [{ "id": "t1", "user_id": "u1", "execution_time": 9 }],
        "resources": [{
            "id": "r1",
            "speed_factor": 0.7,
            "matrix": {
                "criteria": [{ "name": "compute", "weight": 2 }],
                "columns": [{ "user_type": "casual", "rating": 1 }]
            }
        }]
    }"#;
    try_validate("well-formed scenario", valid);

    try_validate(
        "unknown key",
        r#"{ "users": [], "tasks": [], "resources": [], "comment": "hi" }"#,
    );
    try_validate(
        "dangling owner",
        r#"{ "users": [], "tasks": [{ "id": "t1", "user_id": "ghost", "execution_time": 1 }], "resources": [] }"#,
    );
    try_validate(
        "missing matrix",
        r#"{ "users": [], "tasks": [], "resources": [{ "id": "r1" }] }"#,
    );
    try_validate(
        "zero-weight criterion",
        r#"{ "users": [], "tasks": [], "resources": [{
            "id": "r1",
            "matrix": { "criteria": [{ "name": "compute", "weight": 0 }],
                        "columns": [{ "user_type": "casual", "rating": 1 }] }
        }] }"#,
    );

    // speed_factor 0.7 is handled as the exact fraction 7/10, so a task of
    // 9 units takes ceil(9 * 10 / 7) = 13 ticks; no float rounding leaks in.
    let speed = SpeedFactor::from_f64(0.7).unwrap();
    println!("\nspeed 0.7: 9 units -> {} ticks", speed.effective_duration(9));
    println!("speed 0.7: 49 units -> {} ticks (exactly 70, not 70.00000000000001)",
        speed.effective_duration(49));
    let doc: ScenarioDoc = serde_json::from_str(valid).unwrap();
    let scenario = doc.validate().unwrap();
    let round_trip = serde_json::to_string_pretty(&scenario.to_doc()).unwrap();
    println!("\nresolved document round-trips:\n{round_trip}");
}
