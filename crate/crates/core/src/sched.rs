//! The four scheduling disciplines, expressed as binding policies over the
//! shared engine so their timing semantics cannot drift apart.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Resource, Scenario, Schedule, Task};
use crate::sim::{self, BindingPolicy, PolicyView, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Highest decision-matrix score resource takes the shortest task.
    Dmmm,
    /// Shortest task to its fastest-completing resource.
    MinMin,
    /// Longest task first, also to its fastest-completing resource.
    MaxMin,
    /// Tasks dealt cyclically over resources in id order.
    RoundRobin,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Dmmm,
        Algorithm::MinMin,
        Algorithm::MaxMin,
        Algorithm::RoundRobin,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Dmmm => "dmmm",
            Algorithm::MinMin => "min-min",
            Algorithm::MaxMin => "max-min",
            Algorithm::RoundRobin => "round-robin",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm {0:?} (expected dmmm, min-min, max-min or round-robin)")]
pub struct AlgorithmParseError(pub String);

impl FromStr for Algorithm {
    type Err = AlgorithmParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dmmm" => Ok(Algorithm::Dmmm),
            "min-min" => Ok(Algorithm::MinMin),
            "max-min" => Ok(Algorithm::MaxMin),
            "round-robin" => Ok(Algorithm::RoundRobin),
            other => Err(AlgorithmParseError(other.to_string())),
        }
    }
}

/// How equal-keyed candidates are separated. Only one rule exists; the
/// enum pins it down in serialized configs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    #[default]
    AscendingIds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchedulerConfig {
    pub algorithm: Algorithm,
    /// Order tasks by owner priority before the algorithm's duration key.
    /// Round-robin pairs tasks positionally and ignores this.
    pub priority_first: bool,
    pub tie_rule: TieRule,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig {
            algorithm: Algorithm::Dmmm,
            priority_first: false,
            tie_rule: TieRule::AscendingIds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchedError {
    #[error("scenario has tasks but no resources")]
    EmptyResources,
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Which duration the greedy policies prefer when choosing the next task.
#[derive(Clone, Copy)]
enum DurationOrder {
    Shortest,
    Longest,
}

/// How the greedy policies choose the resource for the chosen task.
enum ResourceRule {
    /// Highest matrix score wins, regardless of the task.
    HighestScore(Vec<u64>),
    /// Earliest completion of the chosen task wins.
    FastestCompletion,
}

/// dmmm, min-min and max-min differ only in these two choices, so they
/// share one policy body. Never defers: any pending task binds to any
/// available resource.
struct GreedyPolicy<'a> {
    tasks: &'a [Task],
    resources: &'a [Resource],
    priorities: Vec<u64>,
    priority_first: bool,
    duration: DurationOrder,
    rule: ResourceRule,
}

impl<'a> GreedyPolicy<'a> {
    fn new(
        scenario: &'a Scenario,
        duration: DurationOrder,
        rule: ResourceRule,
        config: &SchedulerConfig,
    ) -> Self {
        GreedyPolicy {
            tasks: &scenario.tasks,
            resources: &scenario.resources,
            priorities: scenario.tasks.iter().map(|t| scenario.task_priority(t)).collect(),
            priority_first: config.priority_first,
            duration,
            rule,
        }
    }

    fn task_cmp(&self, a: usize, b: usize) -> Ordering {
        let by_priority = if self.priority_first {
            self.priorities[b].cmp(&self.priorities[a])
        } else {
            Ordering::Equal
        };
        let (ta, tb) = (&self.tasks[a], &self.tasks[b]);
        let by_duration = match self.duration {
            DurationOrder::Shortest => ta.execution_time.cmp(&tb.execution_time),
            DurationOrder::Longest => tb.execution_time.cmp(&ta.execution_time),
        };
        by_priority.then(by_duration).then_with(|| ta.id.cmp(&tb.id))
    }

    fn resource_cmp(&self, task: usize, a: usize, b: usize) -> Ordering {
        let by_rule = match &self.rule {
            ResourceRule::HighestScore(scores) => scores[b].cmp(&scores[a]),
            ResourceRule::FastestCompletion => {
                let exec = self.tasks[task].execution_time;
                let (ea, eb) = (
                    self.resources[a].speed.effective_duration(exec),
                    self.resources[b].speed.effective_duration(exec),
                );
                ea.cmp(&eb)
            }
        };
        by_rule.then_with(|| self.resources[a].id.cmp(&self.resources[b].id))
    }
}

impl BindingPolicy for GreedyPolicy<'_> {
    fn bind(&self, view: &PolicyView<'_>) -> Option<(usize, usize)> {
        let task = view.pending.iter().copied().min_by(|&a, &b| self.task_cmp(a, b))?;
        let resource = view
            .available
            .iter()
            .copied()
            .min_by(|&a, &b| self.resource_cmp(task, a, b))?;
        Some((task, resource))
    }
}

/// Fixed positional pairing: the k-th task in id order is dealt to the
/// (k mod m)-th resource in id order, and waits for exactly that resource.
struct RoundRobinPolicy {
    /// task index -> resource index it was dealt to
    dealt: Vec<usize>,
    /// task index -> deal position, the dispatch order
    rank: Vec<usize>,
}

impl RoundRobinPolicy {
    fn new(tasks: &[Task], resources: &[Resource]) -> Self {
        let mut task_order: Vec<usize> = (0..tasks.len()).collect();
        task_order.sort_by(|&a, &b| tasks[a].id.cmp(&tasks[b].id));
        let mut res_order: Vec<usize> = (0..resources.len()).collect();
        res_order.sort_by(|&a, &b| resources[a].id.cmp(&resources[b].id));

        let mut dealt = vec![0; tasks.len()];
        let mut rank = vec![0; tasks.len()];
        for (k, &t) in task_order.iter().enumerate() {
            dealt[t] = res_order[k % res_order.len()];
            rank[t] = k;
        }
        RoundRobinPolicy { dealt, rank }
    }
}

impl BindingPolicy for RoundRobinPolicy {
    fn bind(&self, view: &PolicyView<'_>) -> Option<(usize, usize)> {
        view.pending
            .iter()
            .copied()
            .filter(|&t| view.available.contains(&self.dealt[t]))
            .min_by_key(|&t| self.rank[t])
            .map(|t| (t, self.dealt[t]))
    }
}

fn guard(scenario: &Scenario) -> Result<(), SchedError> {
    if scenario.resources.is_empty() && !scenario.tasks.is_empty() {
        return Err(SchedError::EmptyResources);
    }
    Ok(())
}

pub fn dmmm_schedule(scenario: &Scenario, config: &SchedulerConfig) -> Result<Schedule, SchedError> {
    guard(scenario)?;
    let scores = scenario.resources.iter().map(|r| r.matrix.score()).collect();
    let policy = GreedyPolicy::new(
        scenario,
        DurationOrder::Shortest,
        ResourceRule::HighestScore(scores),
        config,
    );
    Ok(sim::execute(&scenario.tasks, &scenario.resources, &policy)?)
}

pub fn min_min_schedule(scenario: &Scenario, config: &SchedulerConfig) -> Result<Schedule, SchedError> {
    guard(scenario)?;
    let policy = GreedyPolicy::new(
        scenario,
        DurationOrder::Shortest,
        ResourceRule::FastestCompletion,
        config,
    );
    Ok(sim::execute(&scenario.tasks, &scenario.resources, &policy)?)
}

pub fn max_min_schedule(scenario: &Scenario, config: &SchedulerConfig) -> Result<Schedule, SchedError> {
    guard(scenario)?;
    let policy = GreedyPolicy::new(
        scenario,
        DurationOrder::Longest,
        ResourceRule::FastestCompletion,
        config,
    );
    Ok(sim::execute(&scenario.tasks, &scenario.resources, &policy)?)
}

pub fn round_robin_schedule(
    scenario: &Scenario,
    _config: &SchedulerConfig,
) -> Result<Schedule, SchedError> {
    guard(scenario)?;
    let policy = RoundRobinPolicy::new(&scenario.tasks, &scenario.resources);
    Ok(sim::execute(&scenario.tasks, &scenario.resources, &policy)?)
}

/// Runs whichever algorithm the config names.
pub fn run(scenario: &Scenario, config: &SchedulerConfig) -> Result<Schedule, SchedError> {
    match config.algorithm {
        Algorithm::Dmmm => dmmm_schedule(scenario, config),
        Algorithm::MinMin => min_min_schedule(scenario, config),
        Algorithm::MaxMin => max_min_schedule(scenario, config),
        Algorithm::RoundRobin => round_robin_schedule(scenario, config),
    }
}

/// One line of a side-by-side algorithm comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub makespan: u64,
    pub mean_wait: f64,
    pub max_wait: u64,
    pub mean_utilization: f64,
}

/// Runs each algorithm over the same scenario and summarizes the results,
/// in the order given. Utilization is relative to each run's own makespan.
pub fn compare(
    scenario: &Scenario,
    algorithms: &[Algorithm],
    config: &SchedulerConfig,
) -> Result<Vec<ComparisonRow>, SchedError> {
    algorithms
        .iter()
        .map(|&algorithm| {
            let cfg = SchedulerConfig { algorithm, ..config.clone() };
            let schedule = run(scenario, &cfg)?;
            let m = sim::metrics(&schedule, None);
            Ok(ComparisonRow {
                algorithm,
                makespan: m.makespan,
                mean_wait: m.mean_wait,
                max_wait: m.max_wait,
                mean_utilization: m.mean_utilization,
            })
        })
        .collect()
}
