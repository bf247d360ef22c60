//! Shared helpers for the integration suites: seeded scenario generation,
//! the structural invariants every legal schedule must satisfy, and an
//! independently rewritten reference implementation of all four policies.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dmmm_sched::{
    execute, oracle_execute, Algorithm, BindingPolicy, Criterion, DecisionMatrix, MatrixColumn,
    PolicyView, ResourceDoc, Scenario, ScenarioDoc, Schedule, SchedulerConfig, SimError, Task,
    UserProfile,
};

pub const USER_TYPES: [&str; 4] = ["benefited", "important", "casual", "lesser-privileged"];
pub const SPEEDS: [f64; 3] = [1.0, 2.0, 0.5];

/// A small random scenario: 1..=max_tasks tasks with durations 1..=6,
/// 1..=max_resources resources with random matrices and speeds drawn from
/// {1, 2, 0.5}. Always validates.
pub fn random_scenario(rng: &mut ChaCha8Rng, max_tasks: usize, max_resources: usize) -> Scenario {
    let user_count = rng.gen_range(1..=USER_TYPES.len());
    let users: Vec<UserProfile> = (0..user_count)
        .map(|i| UserProfile {
            id: format!("u{i}"),
            user_type: USER_TYPES[i].to_string(),
            priority: rng.gen_range(1..=4),
        })
        .collect();

    let task_count = rng.gen_range(1..=max_tasks);
    let tasks: Vec<Task> = (0..task_count)
        .map(|i| Task {
            id: format!("t{i}"),
            user_id: format!("u{}", rng.gen_range(0..user_count)),
            execution_time: rng.gen_range(1..=6),
        })
        .collect();

    let resource_count = rng.gen_range(1..=max_resources);
    let resources: Vec<ResourceDoc> = (0..resource_count)
        .map(|i| ResourceDoc {
            id: format!("r{i}"),
            speed_factor: Some(SPEEDS[rng.gen_range(0..SPEEDS.len())]),
            matrix: Some(random_matrix(rng)),
        })
        .collect();

    ScenarioDoc { users, tasks, resources, scheduler: None }
        .validate()
        .expect("generated scenario validates")
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> DecisionMatrix {
    let criteria: Vec<Criterion> = (0..rng.gen_range(1..=3))
        .map(|i| Criterion { name: format!("c{i}"), weight: rng.gen_range(1..=5) })
        .collect();
    let columns: Vec<MatrixColumn> = USER_TYPES
        .iter()
        .take(rng.gen_range(1..=USER_TYPES.len()))
        .map(|t| MatrixColumn { user_type: t.to_string(), rating: rng.gen_range(1..=5) })
        .collect();
    DecisionMatrix { criteria, columns }
}

/// Checks the invariants shared by every discipline: each task placed
/// exactly once on a declared resource, spans equal to the effective
/// duration, no overlap per resource, and starts that never precede an
/// earlier binding.
pub fn check_schedule(scenario: &Scenario, schedule: &Schedule) {
    assert_eq!(
        schedule.assignments.len(),
        scenario.tasks.len(),
        "every task is assigned exactly once"
    );

    let mut last_start = 0u64;
    let mut per_resource: BTreeMap<&str, Vec<(u64, u64)>> = BTreeMap::new();
    let mut seen_tasks: Vec<&str> = Vec::new();

    for a in &schedule.assignments {
        let task = scenario
            .tasks
            .iter()
            .find(|t| t.id == a.task_id)
            .unwrap_or_else(|| panic!("assignment names unknown task {}", a.task_id));
        let resource = scenario
            .resources
            .iter()
            .find(|r| r.id == a.resource_id)
            .unwrap_or_else(|| panic!("assignment names unknown resource {}", a.resource_id));

        assert!(!seen_tasks.contains(&a.task_id.as_str()), "task {} assigned twice", a.task_id);
        seen_tasks.push(&a.task_id);

        let expected = resource.speed.effective_duration(task.execution_time);
        assert_eq!(
            a.finish - a.start,
            expected,
            "span of {} on {} must be its effective duration",
            a.task_id,
            a.resource_id
        );
        assert!(a.start >= last_start, "bindings happen in non-decreasing time order");
        last_start = a.start;

        per_resource.entry(&a.resource_id).or_default().push((a.start, a.finish));
    }

    for (resource, mut spans) in per_resource {
        spans.sort();
        for pair in spans.windows(2) {
            assert!(
                pair[1].0 >= pair[0].1,
                "overlapping spans on {resource}: {:?} then {:?}",
                pair[0],
                pair[1]
            );
        }
    }
}

/// All four selection rules, rewritten from scratch against the published
/// behavior rather than shared with the library, so the two cannot agree
/// by accident of implementation.
struct Rebuilt<'a> {
    scenario: &'a Scenario,
    config: &'a SchedulerConfig,
}

impl BindingPolicy for Rebuilt<'_> {
    fn bind(&self, view: &PolicyView<'_>) -> Option<(usize, usize)> {
        let tasks = &self.scenario.tasks;
        let resources = &self.scenario.resources;
        let prio = |i: usize| self.scenario.task_priority(&tasks[i]);

        if self.config.algorithm == Algorithm::RoundRobin {
            let mut order: Vec<usize> = (0..tasks.len()).collect();
            order.sort_by(|&a, &b| tasks[a].id.cmp(&tasks[b].id));
            let mut rorder: Vec<usize> = (0..resources.len()).collect();
            rorder.sort_by(|&a, &b| resources[a].id.cmp(&resources[b].id));
            return order
                .iter()
                .enumerate()
                .filter(|(_, t)| view.pending.contains(t))
                .map(|(k, &t)| (t, rorder[k % rorder.len()]))
                .find(|(_, r)| view.available.contains(r));
        }

        let longest = self.config.algorithm == Algorithm::MaxMin;
        let task = view.pending.iter().copied().min_by(|&a, &b| {
            let by_priority = if self.config.priority_first {
                prio(b).cmp(&prio(a))
            } else {
                std::cmp::Ordering::Equal
            };
            let by_duration = if longest {
                tasks[b].execution_time.cmp(&tasks[a].execution_time)
            } else {
                tasks[a].execution_time.cmp(&tasks[b].execution_time)
            };
            by_priority.then(by_duration).then_with(|| tasks[a].id.cmp(&tasks[b].id))
        })?;

        let resource = view.available.iter().copied().min_by(|&a, &b| {
            let key = match self.config.algorithm {
                Algorithm::Dmmm => {
                    resources[b].matrix.score().cmp(&resources[a].matrix.score())
                }
                _ => {
                    let exec = tasks[task].execution_time;
                    resources[a]
                        .speed
                        .effective_duration(exec)
                        .cmp(&resources[b].speed.effective_duration(exec))
                }
            };
            key.then_with(|| resources[a].id.cmp(&resources[b].id))
        })?;
        Some((task, resource))
    }
}

/// Runs the rebuilt policy on the tick-stepped reference engine (falling
/// back to the event engine when the task count exceeds its limit).
pub fn reference_schedule(scenario: &Scenario, config: &SchedulerConfig) -> Schedule {
    let policy = Rebuilt { scenario, config };
    match oracle_execute(&scenario.tasks, &scenario.resources, &policy) {
        Ok(schedule) => schedule,
        Err(SimError::ReferenceLimit(_)) => {
            execute(&scenario.tasks, &scenario.resources, &policy).unwrap()
        }
        Err(other) => panic!("reference run failed: {other}"),
    }
}
