//! Command-line surface: argument definitions, file formats and the four
//! commands. Each command is a plain function returning a typed outcome so
//! the thin binary and the examples share one code path.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Scenario, ScenarioDoc, Schedule, UsageRecord, UsageReport, UserProfile, ValidationError};
use crate::monitor::{self, ClassificationRule, MonitorError, RuleError, UsageProfile};
use crate::sched::{self, Algorithm, ComparisonRow, SchedError, SchedulerConfig};
use crate::sim::{self, Metrics};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SCHEDULING: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Monitor(#[from] MonitorError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Sched(#[from] SchedError),
    #[error("no usage input: pass --usage FILE or --synthesize")]
    MissingUsageInput,
}

impl CliError {
    /// Process exit code: 1 unreadable or malformed input, 2 well-formed
    /// but invalid input, 3 scheduling failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Csv { .. } => EXIT_PARSE,
            CliError::Validation(_)
            | CliError::Monitor(_)
            | CliError::Rule(_)
            | CliError::MissingUsageInput => EXIT_VALIDATION,
            CliError::Sched(_) => EXIT_SCHEDULING,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dmmm", version, about = "Decision-matrix scheduling over simulated cloud resources")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm over a scenario and write the schedule
    Schedule(ScheduleOpts),
    /// Run several algorithms over one scenario and tabulate the results
    Compare(CompareOpts),
    /// Ingest or synthesize usage, then report and classify customers
    Monitor(MonitorOpts),
    /// Monitor, classify, inject and schedule in one pass
    Pipeline(PipelineOpts),
}

#[derive(Debug, Args)]
pub struct ScheduleOpts {
    /// Scenario JSON file
    #[arg(long)]
    pub scenario: PathBuf,
    /// Algorithm to run; defaults to the scenario's scheduler entry, then dmmm
    #[arg(long, value_parser = Algorithm::from_str)]
    pub algorithm: Option<Algorithm>,
    /// Dispatch tasks of higher-priority owners first
    #[arg(long)]
    pub priority_first: bool,
    /// Output directory, created if absent
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareOpts {
    /// Scenario JSON file
    #[arg(long)]
    pub scenario: PathBuf,
    /// Comma-separated algorithms to compare
    #[arg(
        long = "algorithm",
        value_delimiter = ',',
        value_parser = Algorithm::from_str,
        default_values_t = Algorithm::ALL,
    )]
    pub algorithms: Vec<Algorithm>,
    /// Dispatch tasks of higher-priority owners first
    #[arg(long)]
    pub priority_first: bool,
    /// Output directory, created if absent
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MonitorOpts {
    /// Usage CSV to ingest (customer_id,resource_id,bucket_start,amount)
    #[arg(long, conflicts_with = "synthesize")]
    pub usage: Option<PathBuf>,
    /// Generate usage instead of reading it
    #[arg(long)]
    pub synthesize: bool,
    /// Seed for synthetic usage
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Synthetic customer count
    #[arg(long, default_value_t = 4)]
    pub customers: u32,
    /// Synthetic resource count
    #[arg(long, default_value_t = 3)]
    pub resources: u32,
    /// Synthetic horizon in buckets
    #[arg(long, default_value_t = 24)]
    pub horizon: u64,
    /// Synthetic load shape: flat, bursty or diurnal
    #[arg(long, default_value = "flat", value_parser = UsageProfile::from_str)]
    pub profile: UsageProfile,
    /// Combined per-bucket usage at or above this is a peak
    #[arg(long, default_value_t = 10)]
    pub peak_threshold: u64,
    /// Combined per-bucket usage at or below this is dormant
    #[arg(long, default_value_t = 0)]
    pub dormant_threshold: u64,
    /// Output directory, created if absent
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PipelineOpts {
    /// Scenario JSON file; its users are replaced by the classified ones
    #[arg(long)]
    pub scenario: PathBuf,
    /// Usage CSV to ingest (customer_id,resource_id,bucket_start,amount)
    #[arg(long, conflicts_with = "synthesize")]
    pub usage: Option<PathBuf>,
    /// Generate usage instead of reading it
    #[arg(long)]
    pub synthesize: bool,
    /// Seed for synthetic usage
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Synthetic customer count
    #[arg(long, default_value_t = 4)]
    pub customers: u32,
    /// Synthetic resource count
    #[arg(long, default_value_t = 3)]
    pub resources: u32,
    /// Synthetic horizon in buckets
    #[arg(long, default_value_t = 24)]
    pub horizon: u64,
    /// Synthetic load shape: flat, bursty or diurnal
    #[arg(long, default_value = "flat", value_parser = UsageProfile::from_str)]
    pub profile: UsageProfile,
    /// Combined per-bucket usage at or above this is a peak
    #[arg(long, default_value_t = 10)]
    pub peak_threshold: u64,
    /// Combined per-bucket usage at or below this is dormant
    #[arg(long, default_value_t = 0)]
    pub dormant_threshold: u64,
    /// Dispatch tasks of higher-priority owners first
    #[arg(long)]
    pub priority_first: bool,
    /// Output directory, created if absent
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Everything that shaped a run, written next to its outputs. Contains no
/// timestamps or host details, so reruns produce identical bytes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub algorithms: Vec<String>,
    pub priority_first: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub usage: Option<String>,
    pub synthesize: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub customers: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resources: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_threshold: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dormant_threshold: Option<u64>,
    /// Files written before the manifest itself, in write order.
    pub outputs: Vec<String>,
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc: ScenarioDoc = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(doc.validate()?)
}

/// Flag-over-file precedence: an explicit --algorithm beats the scenario's
/// scheduler entry, which beats the dmmm default; --priority-first can
/// only turn prioritization on.
pub fn resolve_config(
    scenario: &Scenario,
    algorithm: Option<Algorithm>,
    priority_first: bool,
) -> SchedulerConfig {
    let mut config = scenario.scheduler.clone().unwrap_or_default();
    if let Some(algorithm) = algorithm {
        config.algorithm = algorithm;
    }
    if priority_first {
        config.priority_first = true;
    }
    config
}

/// schedule.csv: one row per assignment, in binding order.
pub fn schedule_csv(schedule: &Schedule) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for assignment in &schedule.assignments {
        w.serialize(assignment).expect("serialize assignment row");
    }
    if schedule.assignments.is_empty() {
        w.write_record(["task_id", "resource_id", "start", "finish"])
            .expect("write header");
    }
    String::from_utf8(w.into_inner().expect("flush csv buffer")).expect("csv is utf-8")
}

/// metrics.csv: long-form metric,value rows, scalars first, then one
/// utilization row per resource.
pub fn metrics_csv(metrics: &Metrics) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["metric", "value"]).expect("write header");
    w.write_record(["makespan", &metrics.makespan.to_string()])
        .expect("write row");
    w.write_record(["mean_wait", &metrics.mean_wait.to_string()])
        .expect("write row");
    w.write_record(["max_wait", &metrics.max_wait.to_string()])
        .expect("write row");
    w.write_record(["mean_utilization", &metrics.mean_utilization.to_string()])
        .expect("write row");
    for (resource, fraction) in &metrics.utilization {
        w.write_record([&format!("utilization:{resource}"), &fraction.to_string()])
            .expect("write row");
    }
    String::from_utf8(w.into_inner().expect("flush csv buffer")).expect("csv is utf-8")
}

/// compare.csv: one row per algorithm in request order.
pub fn compare_csv(rows: &[ComparisonRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("serialize comparison row");
    }
    if rows.is_empty() {
        w.write_record(["algorithm", "makespan", "mean_wait", "max_wait", "mean_utilization"])
            .expect("write header");
    }
    String::from_utf8(w.into_inner().expect("flush csv buffer")).expect("csv is utf-8")
}

/// usage.csv: one row per record.
pub fn usage_csv(records: &[UsageRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for record in records {
        w.serialize(record).expect("serialize usage row");
    }
    if records.is_empty() {
        w.write_record(["customer_id", "resource_id", "bucket_start", "amount"])
            .expect("write header");
    }
    String::from_utf8(w.into_inner().expect("flush csv buffer")).expect("csv is utf-8")
}

/// Parses a usage CSV with the exact header
/// `customer_id,resource_id,bucket_start,amount`.
pub fn read_usage(path: &Path) -> Result<Vec<UsageRecord>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .deserialize()
        .collect::<Result<Vec<UsageRecord>, csv::Error>>()
        .map_err(|source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialize in-memory value");
    text.push('\n');
    text
}

struct OutDir {
    dir: PathBuf,
    names: Vec<String>,
    files: Vec<PathBuf>,
}

impl OutDir {
    fn create(dir: &Path) -> Result<OutDir, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            names: Vec::new(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.names.push(name.to_string());
        self.files.push(path);
        Ok(())
    }

    /// The manifest goes last and lists everything written before it.
    fn finish(mut self, mut manifest: RunManifest) -> Result<Vec<PathBuf>, CliError> {
        manifest.outputs = self.names.clone();
        let text = pretty_json(&manifest);
        self.write("manifest.json", &text)?;
        Ok(self.files)
    }
}

#[derive(Debug)]
pub struct ScheduleOutcome {
    pub config: SchedulerConfig,
    pub schedule: Schedule,
    pub metrics: Metrics,
    pub files: Vec<PathBuf>,
}

impl ScheduleOutcome {
    pub fn summary(&self) -> String {
        let mut out = format!(
            "algorithm {}: {} tasks over {} resources\n",
            self.config.algorithm,
            self.schedule.assignments.len(),
            self.schedule.resource_ids.len(),
        );
        for a in &self.schedule.assignments {
            out.push_str(&format!(
                "  {} -> {} [{}, {})\n",
                a.task_id, a.resource_id, a.start, a.finish
            ));
        }
        out.push_str(&format!(
            "makespan {}, mean wait {}, mean utilization {:.3}\n",
            self.metrics.makespan, self.metrics.mean_wait, self.metrics.mean_utilization
        ));
        out.push_str(&wrote_line(&self.files));
        out
    }
}

#[derive(Debug)]
pub struct CompareOutcome {
    pub rows: Vec<ComparisonRow>,
    /// Duplicate algorithm requests that were ignored, in request order.
    pub dropped: Vec<Algorithm>,
    pub files: Vec<PathBuf>,
}

impl CompareOutcome {
    pub fn summary(&self) -> String {
        let mut out = String::from("algorithm      makespan  mean_wait  max_wait  mean_util\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:<13} {:>9} {:>10.3} {:>9} {:>10.3}\n",
                row.algorithm.name(),
                row.makespan,
                row.mean_wait,
                row.max_wait,
                row.mean_utilization
            ));
        }
        out.push_str(&wrote_line(&self.files));
        out
    }
}

#[derive(Debug)]
pub struct MonitorOutcome {
    pub records: usize,
    pub report: UsageReport,
    pub profiles: Vec<UserProfile>,
    pub files: Vec<PathBuf>,
}

impl MonitorOutcome {
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} records from {} customers; {} peak windows, {} dormant windows\n",
            self.records,
            self.report.customer_totals.len(),
            self.report.peak_windows.len(),
            self.report.dormant_windows.len(),
        );
        for profile in &self.profiles {
            out.push_str(&format!(
                "  {}: {} (priority {}, total {})\n",
                profile.id,
                profile.user_type,
                profile.priority,
                self.report.customer_totals.get(&profile.id).copied().unwrap_or(0),
            ));
        }
        out.push_str(&wrote_line(&self.files));
        out
    }
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub monitor: MonitorOutcome,
    pub schedule: Schedule,
    pub metrics: Metrics,
    pub files: Vec<PathBuf>,
}

impl PipelineOutcome {
    pub fn summary(&self) -> String {
        let mut out = format!(
            "classified {} customers, scheduled {} tasks, makespan {}\n",
            self.monitor.profiles.len(),
            self.schedule.assignments.len(),
            self.metrics.makespan,
        );
        for a in &self.schedule.assignments {
            out.push_str(&format!(
                "  {} -> {} [{}, {})\n",
                a.task_id, a.resource_id, a.start, a.finish
            ));
        }
        out.push_str(&wrote_line(&self.files));
        out
    }
}

fn wrote_line(files: &[PathBuf]) -> String {
    let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    format!("wrote {}\n", names.join(", "))
}

pub fn cmd_schedule(opts: &ScheduleOpts) -> Result<ScheduleOutcome, CliError> {
    let scenario = load_scenario(&opts.scenario)?;
    let config = resolve_config(&scenario, opts.algorithm, opts.priority_first);
    let schedule = sched::run(&scenario, &config)?;
    let metrics = sim::metrics(&schedule, None);

    let mut out = OutDir::create(&opts.out)?;
    out.write("schedule.csv", &schedule_csv(&schedule))?;
    out.write("metrics.csv", &metrics_csv(&metrics))?;
    let files = out.finish(RunManifest {
        command: "schedule".into(),
        scenario: Some(opts.scenario.display().to_string()),
        algorithms: vec![config.algorithm.name().into()],
        priority_first: config.priority_first,
        ..RunManifest::default()
    })?;
    Ok(ScheduleOutcome { config, schedule, metrics, files })
}

pub fn cmd_compare(opts: &CompareOpts) -> Result<CompareOutcome, CliError> {
    let scenario = load_scenario(&opts.scenario)?;
    let config = resolve_config(&scenario, None, opts.priority_first);

    let mut kept: Vec<Algorithm> = Vec::new();
    let mut dropped = Vec::new();
    for &algorithm in &opts.algorithms {
        if kept.contains(&algorithm) {
            dropped.push(algorithm);
        } else {
            kept.push(algorithm);
        }
    }

    let rows = sched::compare(&scenario, &kept, &config)?;
    let mut out = OutDir::create(&opts.out)?;
    out.write("compare.csv", &compare_csv(&rows))?;
    let files = out.finish(RunManifest {
        command: "compare".into(),
        scenario: Some(opts.scenario.display().to_string()),
        algorithms: kept.iter().map(|a| a.name().to_string()).collect(),
        priority_first: config.priority_first,
        ..RunManifest::default()
    })?;
    Ok(CompareOutcome { rows, dropped, files })
}

/// Shared by monitor and pipeline: get records (synthetic or from disk),
/// ingest, report, classify.
struct MonitorStage {
    records: Vec<UsageRecord>,
    synthesized: bool,
    report: UsageReport,
    profiles: Vec<UserProfile>,
}

#[allow(clippy::too_many_arguments)]
fn monitor_stage(
    usage: Option<&Path>,
    synthesize: bool,
    seed: u64,
    customers: u32,
    resources: u32,
    horizon: u64,
    profile: UsageProfile,
    peak_threshold: u64,
    dormant_threshold: u64,
) -> Result<MonitorStage, CliError> {
    let (records, synthesized) = if synthesize {
        let records = monitor::synthesize_usage(seed, customers, resources, horizon, profile)?;
        (records, true)
    } else if let Some(path) = usage {
        (read_usage(path)?, false)
    } else {
        return Err(CliError::MissingUsageInput);
    };
    let store = monitor::ingest_usage(&records)?;
    let report = monitor::build_report(&store, peak_threshold, dormant_threshold)?;
    let profiles = monitor::classify_users(&store, &ClassificationRule::default_quartiles())?;
    Ok(MonitorStage { records, synthesized, report, profiles })
}

pub fn cmd_monitor(opts: &MonitorOpts) -> Result<MonitorOutcome, CliError> {
    let stage = monitor_stage(
        opts.usage.as_deref(),
        opts.synthesize,
        opts.seed,
        opts.customers,
        opts.resources,
        opts.horizon,
        opts.profile,
        opts.peak_threshold,
        opts.dormant_threshold,
    )?;

    let mut out = OutDir::create(&opts.out)?;
    if stage.synthesized {
        out.write("usage.csv", &usage_csv(&stage.records))?;
    }
    out.write("report.json", &pretty_json(&stage.report))?;
    out.write("users.json", &pretty_json(&stage.profiles))?;
    let files = out.finish(RunManifest {
        command: "monitor".into(),
        usage: opts.usage.as_ref().map(|p| p.display().to_string()),
        synthesize: opts.synthesize,
        seed: opts.synthesize.then_some(opts.seed),
        customers: opts.synthesize.then_some(opts.customers),
        resources: opts.synthesize.then_some(opts.resources),
        horizon: opts.synthesize.then_some(opts.horizon),
        profile: opts.synthesize.then(|| opts.profile.name().to_string()),
        peak_threshold: Some(opts.peak_threshold),
        dormant_threshold: Some(opts.dormant_threshold),
        ..RunManifest::default()
    })?;
    Ok(MonitorOutcome {
        records: stage.records.len(),
        report: stage.report,
        profiles: stage.profiles,
        files,
    })
}

pub fn cmd_pipeline(opts: &PipelineOpts) -> Result<PipelineOutcome, CliError> {
    let stage = monitor_stage(
        opts.usage.as_deref(),
        opts.synthesize,
        opts.seed,
        opts.customers,
        opts.resources,
        opts.horizon,
        opts.profile,
        opts.peak_threshold,
        opts.dormant_threshold,
    )?;

    // The classified profiles replace whatever users the document declares;
    // the tasks' user_ids must match the monitored customer ids.
    let text = fs::read_to_string(&opts.scenario).map_err(|source| CliError::Io {
        path: opts.scenario.clone(),
        source,
    })?;
    let mut doc: ScenarioDoc = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: opts.scenario.clone(),
        source,
    })?;
    doc.users = stage.profiles.clone();
    let config = SchedulerConfig {
        algorithm: Algorithm::Dmmm,
        priority_first: opts.priority_first,
        ..SchedulerConfig::default()
    };
    doc.scheduler = Some(config.clone());
    let scenario = doc.validate()?;

    let schedule = sched::run(&scenario, &config)?;
    let metrics = sim::metrics(&schedule, None);

    let mut out = OutDir::create(&opts.out)?;
    if stage.synthesized {
        out.write("usage.csv", &usage_csv(&stage.records))?;
    }
    out.write("report.json", &pretty_json(&stage.report))?;
    out.write("users.json", &pretty_json(&stage.profiles))?;
    out.write("scenario.json", &pretty_json(&scenario.to_doc()))?;
    out.write("schedule.csv", &schedule_csv(&schedule))?;
    out.write("metrics.csv", &metrics_csv(&metrics))?;
    let files = out.finish(RunManifest {
        command: "pipeline".into(),
        scenario: Some(opts.scenario.display().to_string()),
        algorithms: vec![config.algorithm.name().into()],
        priority_first: config.priority_first,
        usage: opts.usage.as_ref().map(|p| p.display().to_string()),
        synthesize: opts.synthesize,
        seed: opts.synthesize.then_some(opts.seed),
        customers: opts.synthesize.then_some(opts.customers),
        resources: opts.synthesize.then_some(opts.resources),
        horizon: opts.synthesize.then_some(opts.horizon),
        profile: opts.synthesize.then(|| opts.profile.name().to_string()),
        peak_threshold: Some(opts.peak_threshold),
        dormant_threshold: Some(opts.dormant_threshold),
        ..RunManifest::default()
    })?;
    Ok(PipelineOutcome {
        monitor: MonitorOutcome {
            records: stage.records.len(),
            report: stage.report,
            profiles: stage.profiles,
            files: Vec::new(),
        },
        schedule,
        metrics,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;
    use crate::model::Assignment;

    fn write_demo_scenario(dir: &Path) -> PathBuf {
        let path = dir.join("scenario.json");
        fs::write(&path, demo::DEMO_SCENARIO).unwrap();
        path
    }

    #[test]
    fn schedule_command_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let scenario = write_demo_scenario(dir.path());
        let opts = ScheduleOpts {
            scenario,
            algorithm: None,
            priority_first: false,
            out: dir.path().join("out"),
        };
        let outcome = cmd_schedule(&opts).unwrap();
        assert_eq!(
            outcome.schedule.assignments[0],
            Assignment { task_id: "t4".into(), resource_id: "r1".into(), start: 0, finish: 5 }
        );

        let csv = fs::read_to_string(dir.path().join("out/schedule.csv")).unwrap();
        assert!(csv.starts_with("task_id,resource_id,start,finish\n"));
        assert!(csv.contains("t4,r1,0,5\n"));

        let metrics = fs::read_to_string(dir.path().join("out/metrics.csv")).unwrap();
        assert!(metrics.contains("makespan,25\n"));
        assert!(metrics.contains("utilization:r2,0.4\n"));

        let manifest: RunManifest = serde_json::from_str(
            &fs::read_to_string(dir.path().join("out/manifest.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(manifest.command, "schedule");
        assert_eq!(manifest.algorithms, vec!["dmmm"]);
        assert_eq!(manifest.outputs, vec!["schedule.csv", "metrics.csv"]);
    }

    #[test]
    fn schedule_flag_overrides_scenario_scheduler_entry() {
        let dir = tempfile::tempdir().unwrap();
        let mut doc: ScenarioDoc = serde_json::from_str(demo::DEMO_SCENARIO).unwrap();
        doc.scheduler = Some(SchedulerConfig {
            algorithm: Algorithm::RoundRobin,
            ..SchedulerConfig::default()
        });
        let path = dir.path().join("scenario.json");
        fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

        let opts = ScheduleOpts {
            scenario: path.clone(),
            algorithm: None,
            priority_first: false,
            out: dir.path().join("a"),
        };
        assert_eq!(cmd_schedule(&opts).unwrap().config.algorithm, Algorithm::RoundRobin);

        let opts = ScheduleOpts {
            scenario: path,
            algorithm: Some(Algorithm::MaxMin),
            priority_first: false,
            out: dir.path().join("b"),
        };
        assert_eq!(cmd_schedule(&opts).unwrap().config.algorithm, Algorithm::MaxMin);
    }

    #[test]
    fn compare_command_dedups_and_reports_rows() {
        let dir = tempfile::tempdir().unwrap();
        let scenario = write_demo_scenario(dir.path());
        let opts = CompareOpts {
            scenario,
            algorithms: vec![Algorithm::Dmmm, Algorithm::RoundRobin, Algorithm::Dmmm],
            priority_first: false,
            out: dir.path().join("out"),
        };
        let outcome = cmd_compare(&opts).unwrap();
        assert_eq!(outcome.dropped, vec![Algorithm::Dmmm]);
        assert_eq!(outcome.rows.len(), 2);
        assert_eq!(outcome.rows[0].makespan, 25);
        assert_eq!(outcome.rows[1].makespan, 20);

        let csv = fs::read_to_string(dir.path().join("out/compare.csv")).unwrap();
        assert!(csv.starts_with("algorithm,makespan,mean_wait,max_wait,mean_utilization\n"));
        assert!(csv.contains("dmmm,25,"));
        assert!(csv.contains("round-robin,20,"));
    }

    #[test]
    fn monitor_command_synthesizes_reports_and_classifies() {
        let dir = tempfile::tempdir().unwrap();
        let opts = MonitorOpts {
            usage: None,
            synthesize: true,
            seed: 11,
            customers: 4,
            resources: 3,
            horizon: 24,
            profile: UsageProfile::Bursty,
            peak_threshold: 10,
            dormant_threshold: 0,
            out: dir.path().join("out"),
        };
        let outcome = cmd_monitor(&opts).unwrap();
        assert_eq!(outcome.profiles.len(), 4);
        assert_eq!(outcome.report.customer_totals.len(), 4);

        let usage = fs::read_to_string(dir.path().join("out/usage.csv")).unwrap();
        assert!(usage.starts_with("customer_id,resource_id,bucket_start,amount\n"));

        let report: UsageReport = serde_json::from_str(
            &fs::read_to_string(dir.path().join("out/report.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(report, outcome.report);

        let users: Vec<UserProfile> = serde_json::from_str(
            &fs::read_to_string(dir.path().join("out/users.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(users, outcome.profiles);
    }

    #[test]
    fn monitor_command_reads_usage_files() {
        let dir = tempfile::tempdir().unwrap();
        let usage_path = dir.path().join("usage.csv");
        fs::write(
            &usage_path,
            "customer_id,resource_id,bucket_start,amount\nc1,r1,0,12\nc2,r1,0,3\n",
        )
        .unwrap();
        let opts = MonitorOpts {
            usage: Some(usage_path),
            synthesize: false,
            seed: 0,
            customers: 4,
            resources: 3,
            horizon: 24,
            profile: UsageProfile::Flat,
            peak_threshold: 10,
            dormant_threshold: 0,
            out: dir.path().join("out"),
        };
        let outcome = cmd_monitor(&opts).unwrap();
        assert_eq!(outcome.records, 2);
        assert_eq!(outcome.report.customer_totals["c1"], 12);
        assert_eq!(outcome.report.peak_windows.len(), 1);
        assert!(!dir.path().join("out/usage.csv").exists());
    }

    #[test]
    fn monitor_without_input_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let opts = MonitorOpts {
            usage: None,
            synthesize: false,
            seed: 0,
            customers: 4,
            resources: 3,
            horizon: 24,
            profile: UsageProfile::Flat,
            peak_threshold: 10,
            dormant_threshold: 0,
            out: dir.path().join("out"),
        };
        let err = cmd_monitor(&opts).unwrap_err();
        assert!(matches!(err, CliError::MissingUsageInput));
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn pipeline_runs_end_to_end_and_reruns_identically() {
        let dir = tempfile::tempdir().unwrap();
        let scenario_path = dir.path().join("pipeline.json");
        fs::write(&scenario_path, demo::PIPELINE_SCENARIO).unwrap();
        let opts = PipelineOpts {
            scenario: scenario_path,
            usage: None,
            synthesize: true,
            seed: 7,
            customers: 4,
            resources: 3,
            horizon: 24,
            profile: UsageProfile::Bursty,
            peak_threshold: 10,
            dormant_threshold: 0,
            priority_first: false,
            out: dir.path().join("out"),
        };
        let first = cmd_pipeline(&opts).unwrap();
        assert_eq!(first.schedule.assignments.len(), 4);
        assert_eq!(first.monitor.profiles.len(), 4);
        let snapshot: Vec<(String, String)> = first
            .files
            .iter()
            .map(|p| (p.display().to_string(), fs::read_to_string(p).unwrap()))
            .collect();

        let second = cmd_pipeline(&opts).unwrap();
        assert_eq!(first.schedule, second.schedule);
        for (path, contents) in snapshot {
            assert_eq!(fs::read_to_string(&path).unwrap(), contents, "{path} changed");
        }

        // The resolved scenario reruns to the same schedule by itself.
        let replay = cmd_schedule(&ScheduleOpts {
            scenario: dir.path().join("out/scenario.json"),
            algorithm: None,
            priority_first: false,
            out: dir.path().join("replay"),
        })
        .unwrap();
        assert_eq!(replay.schedule, first.schedule);
    }

    #[test]
    fn io_and_parse_failures_map_to_exit_one() {
        let missing = load_scenario(Path::new("/nonexistent/scenario.json")).unwrap_err();
        assert_eq!(missing.exit_code(), EXIT_PARSE);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{not json").unwrap();
        assert_eq!(load_scenario(&path).unwrap_err().exit_code(), EXIT_PARSE);

        let csv_path = dir.path().join("bad.csv");
        fs::write(&csv_path, "customer_id,resource_id\nc1,r1\n").unwrap();
        assert_eq!(read_usage(&csv_path).unwrap_err().exit_code(), EXIT_PARSE);
    }

    #[test]
    fn invalid_scenarios_map_to_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        fs::write(
            &path,
            r#"{"users": [], "tasks": [{"id": "t1", "user_id": "ghost", "execution_time": 5}], "resources": []}"#,
        )
        .unwrap();
        let err = load_scenario(&path).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn scheduling_failures_map_to_exit_three() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        fs::write(
            &path,
            r#"{"users": [{"id": "u1", "user_type": "casual", "priority": 1}],
                "tasks": [{"id": "t1", "user_id": "u1", "execution_time": 5}],
                "resources": []}"#,
        )
        .unwrap();
        let opts = ScheduleOpts {
            scenario: path,
            algorithm: None,
            priority_first: false,
            out: dir.path().join("out"),
        };
        let err = cmd_schedule(&opts).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_SCHEDULING);
    }

    #[test]
    fn threshold_misorder_maps_to_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let opts = MonitorOpts {
            usage: None,
            synthesize: true,
            seed: 0,
            customers: 2,
            resources: 1,
            horizon: 4,
            profile: UsageProfile::Flat,
            peak_threshold: 5,
            dormant_threshold: 9,
            out: dir.path().join("out"),
        };
        let err = cmd_monitor(&opts).unwrap_err();
        assert!(matches!(err, CliError::Monitor(MonitorError::ThresholdOrder { .. })));
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn manifest_round_trips_and_rejects_unknown_keys() {
        let manifest = RunManifest {
            command: "schedule".into(),
            scenario: Some("s.json".into()),
            algorithms: vec!["dmmm".into()],
            priority_first: true,
            outputs: vec!["schedule.csv".into()],
            ..RunManifest::default()
        };
        let text = pretty_json(&manifest);
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, manifest);
        assert!(serde_json::from_str::<RunManifest>(r#"{"command": "x", "bogus": 1}"#).is_err());
    }

    #[test]
    fn empty_csv_renders_keep_their_headers() {
        let schedule = Schedule { assignments: vec![], resource_ids: vec![] };
        assert_eq!(schedule_csv(&schedule), "task_id,resource_id,start,finish\n");
        assert_eq!(
            compare_csv(&[]),
            "algorithm,makespan,mean_wait,max_wait,mean_utilization\n"
        );
        assert_eq!(usage_csv(&[]), "customer_id,resource_id,bucket_start,amount\n");
    }

    #[test]
    fn cli_parses_the_documented_flags() {
        let cli = Cli::try_parse_from([
            "dmmm", "schedule", "--scenario", "s.json", "--algorithm", "max-min",
            "--priority-first", "--out", "results",
        ])
        .unwrap();
        match cli.command {
            Command::Schedule(opts) => {
                assert_eq!(opts.algorithm, Some(Algorithm::MaxMin));
                assert!(opts.priority_first);
                assert_eq!(opts.out, PathBuf::from("results"));
            }
            other => panic!("parsed wrong command: {other:?}"),
        }

        let cli = Cli::try_parse_from([
            "dmmm", "compare", "--scenario", "s.json", "--algorithm", "dmmm,round-robin",
        ])
        .unwrap();
        match cli.command {
            Command::Compare(opts) => {
                assert_eq!(opts.algorithms, vec![Algorithm::Dmmm, Algorithm::RoundRobin]);
            }
            other => panic!("parsed wrong command: {other:?}"),
        }

        let cli = Cli::try_parse_from([
            "dmmm", "monitor", "--synthesize", "--seed", "9", "--profile", "diurnal",
            "--peak-threshold", "12", "--dormant-threshold", "1",
        ])
        .unwrap();
        match cli.command {
            Command::Monitor(opts) => {
                assert!(opts.synthesize);
                assert_eq!(opts.seed, 9);
                assert_eq!(opts.profile, UsageProfile::Diurnal);
                assert_eq!(opts.peak_threshold, 12);
                assert_eq!(opts.dormant_threshold, 1);
            }
            other => panic!("parsed wrong command: {other:?}"),
        }

        assert!(Cli::try_parse_from(["dmmm", "schedule", "--scenario", "s.json", "--algorithm", "bogus"]).is_err());
        assert!(Cli::try_parse_from(["dmmm", "monitor", "--usage", "u.csv", "--synthesize"]).is_err());
    }
}
