//! Deterministic task scheduling over simulated cloud resources.
//!
//! The core discipline ranks resources by a weighted decision matrix over
//! user types and hands the highest-scoring free resource the shortest
//! pending task. Min-min, max-min and round-robin baselines run on the
//! same event-driven engine for like-for-like comparison, and a usage
//! monitor closes the loop: it aggregates per-customer consumption,
//! detects peak and dormant windows, and classifies customers into the
//! user types the matrices rate.
//!
//! Everything is reproducible by construction: integer time, exact
//! rational speed factors, lexicographic tie-breaking and seeded synthetic
//! workloads. Running the same inputs twice yields byte-identical outputs.
//!
//! Start with [`demo::demo_scenario`] and [`sched::run`], or see the
//! examples directory for one runnable walkthrough per capability.

pub mod cli;
pub mod decision;
pub mod demo;
pub mod model;
pub mod monitor;
pub mod sched;
pub mod sim;

pub use decision::{build_matrix, matrix_from_priorities, rank_resources, DecisionError};
pub use model::{
    Assignment, Criterion, DecisionMatrix, MatrixColumn, MatrixError, ReportWindow, Resource,
    ResourceDoc, Scenario, ScenarioDoc, Schedule, SpeedFactor, Task, UsageRecord, UsageReport,
    UserProfile, ValidationError,
};
pub use monitor::{
    build_report, classify_users, dormant_windows, ingest_usage, peak_windows, synthesize_usage,
    ClassificationRule, MonitorError, RuleBand, UsageProfile, UsageStore,
};
pub use sched::{
    compare, dmmm_schedule, max_min_schedule, min_min_schedule, round_robin_schedule, run,
    Algorithm, ComparisonRow, SchedError, SchedulerConfig,
};
pub use sim::{execute, metrics, oracle_execute, BindingPolicy, EventQueue, Metrics, PolicyView, SimError};
