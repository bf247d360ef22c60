//! Event-driven execution of a binding policy over a task set, plus a
//! deliberately naive tick-by-tick reference engine used to cross-check it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{Assignment, Resource, Schedule, Task};

/// Completion events keyed by (finish time, resource index).
///
/// Popping drains every event at the earliest time at once, so resources
/// that finish together become available together before the policy runs
/// again. A tick-stepped engine observes the same wakeup batches.
#[derive(Debug, Default, Clone)]
pub struct EventQueue {
    events: BTreeSet<(u64, usize)>,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, finish: u64, resource: usize) {
        self.events.insert((finish, resource));
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn next_time(&self) -> Option<u64> {
        self.events.iter().next().map(|(t, _)| *t)
    }

    /// Removes and returns all events at the earliest finish time, as
    /// (time, resource indices ascending).
    pub fn pop_batch(&mut self) -> Option<(u64, Vec<usize>)> {
        let time = self.next_time()?;
        let mut freed = Vec::new();
        while let Some(&(t, r)) = self.events.iter().next() {
            if t != time {
                break;
            }
            self.events.remove(&(t, r));
            freed.push(r);
        }
        Some((time, freed))
    }
}

/// What a policy sees when asked for its next binding: indices into the
/// engine's task and resource slices, both ascending, plus the clock.
#[derive(Debug)]
pub struct PolicyView<'a> {
    pub pending: &'a [usize],
    pub available: &'a [usize],
    pub clock: u64,
}

/// A scheduling discipline, reduced to one question: given what is pending
/// and what is free, which (task, resource) pair binds next?
///
/// Returning `None` defers until the next completion event; a policy that
/// defers while nothing is running deadlocks the run and is reported as
/// [`SimError::PolicyStalled`].
pub trait BindingPolicy {
    fn bind(&self, view: &PolicyView<'_>) -> Option<(usize, usize)>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("policy bound task index {0} which is not pending")]
    PolicyReturnedNonPending(usize),
    #[error("policy bound resource index {0} which is not available")]
    PolicyReturnedBusy(usize),
    #[error("policy made no binding at time {clock} with {pending} tasks pending and every resource idle")]
    PolicyStalled { clock: u64, pending: usize },
    #[error("reference engine refuses {0} tasks (limit 8)")]
    ReferenceLimit(usize),
}

fn take(list: &mut Vec<usize>, value: usize) -> bool {
    match list.iter().position(|&v| v == value) {
        Some(at) => {
            list.remove(at);
            true
        }
        None => false,
    }
}

/// Runs the policy to completion over tasks all released at time zero.
///
/// The loop alternates two phases: bind until the policy defers or runs
/// out of tasks or resources, then jump the clock to the next completion
/// batch. Assignments are recorded in binding order.
pub fn execute(
    tasks: &[Task],
    resources: &[Resource],
    policy: &dyn BindingPolicy,
) -> Result<Schedule, SimError> {
    let mut pending: Vec<usize> = (0..tasks.len()).collect();
    let mut available: Vec<usize> = (0..resources.len()).collect();
    let mut events = EventQueue::new();
    let mut assignments = Vec::with_capacity(tasks.len());
    let mut clock = 0u64;

    while !pending.is_empty() {
        while !pending.is_empty() && !available.is_empty() {
            let view = PolicyView { pending: &pending, available: &available, clock };
            let Some((task, resource)) = policy.bind(&view) else {
                break;
            };
            if !take(&mut pending, task) {
                return Err(SimError::PolicyReturnedNonPending(task));
            }
            if !take(&mut available, resource) {
                return Err(SimError::PolicyReturnedBusy(resource));
            }
            let eff = resources[resource].speed.effective_duration(tasks[task].execution_time);
            let finish = clock + eff;
            assignments.push(Assignment {
                task_id: tasks[task].id.clone(),
                resource_id: resources[resource].id.clone(),
                start: clock,
                finish,
            });
            events.push(finish, resource);
        }
        if pending.is_empty() {
            break;
        }
        match events.pop_batch() {
            Some((time, freed)) => {
                clock = time;
                available.extend(freed);
                available.sort_unstable();
            }
            None => {
                return Err(SimError::PolicyStalled { clock, pending: pending.len() });
            }
        }
    }

    Ok(Schedule {
        assignments,
        resource_ids: resources.iter().map(|r| r.id.clone()).collect(),
    })
}

/// Tick-by-tick reference engine: advances the clock one unit at a time
/// and re-derives availability from scratch each tick. Slow by design and
/// capped at 8 tasks; exists only to corroborate [`execute`].
pub fn oracle_execute(
    tasks: &[Task],
    resources: &[Resource],
    policy: &dyn BindingPolicy,
) -> Result<Schedule, SimError> {
    if tasks.len() > 8 {
        return Err(SimError::ReferenceLimit(tasks.len()));
    }

    let mut pending: Vec<usize> = (0..tasks.len()).collect();
    let mut busy_until: Vec<Option<u64>> = vec![None; resources.len()];
    let mut assignments = Vec::with_capacity(tasks.len());
    let mut clock = 0u64;

    loop {
        for slot in busy_until.iter_mut() {
            if *slot == Some(clock) {
                *slot = None;
            }
        }
        loop {
            let available: Vec<usize> = (0..resources.len())
                .filter(|&r| busy_until[r].is_none())
                .collect();
            if pending.is_empty() || available.is_empty() {
                break;
            }
            let view = PolicyView { pending: &pending, available: &available, clock };
            let Some((task, resource)) = policy.bind(&view) else {
                break;
            };
            if !take(&mut pending, task) {
                return Err(SimError::PolicyReturnedNonPending(task));
            }
            if busy_until[resource].is_some() {
                return Err(SimError::PolicyReturnedBusy(resource));
            }
            let eff = resources[resource].speed.effective_duration(tasks[task].execution_time);
            assignments.push(Assignment {
                task_id: tasks[task].id.clone(),
                resource_id: resources[resource].id.clone(),
                start: clock,
                finish: clock + eff,
            });
            busy_until[resource] = Some(clock + eff);
        }
        let running = busy_until.iter().any(|s| s.is_some());
        if pending.is_empty() && !running {
            break;
        }
        if !running {
            return Err(SimError::PolicyStalled { clock, pending: pending.len() });
        }
        clock += 1;
    }

    Ok(Schedule {
        assignments,
        resource_ids: resources.iter().map(|r| r.id.clone()).collect(),
    })
}

/// Summary statistics for a finished schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub makespan: u64,
    /// (resource id, busy fraction) for every resource, idle ones included.
    pub utilization: Vec<(String, f64)>,
    pub mean_utilization: f64,
    pub mean_wait: f64,
    pub max_wait: u64,
}

/// Computes utilization and waiting statistics.
///
/// Busy fractions divide by `horizon` when given (for comparing runs over
/// a common window), otherwise by the schedule's own makespan. A zero
/// denominator yields zero utilization rather than a NaN.
pub fn metrics(schedule: &Schedule, horizon: Option<u64>) -> Metrics {
    let makespan = schedule.makespan();
    let denom = horizon.unwrap_or(makespan);

    let mut busy: Vec<(String, u64)> = schedule
        .resource_ids
        .iter()
        .map(|id| (id.clone(), 0u64))
        .collect();
    for a in &schedule.assignments {
        if let Some(entry) = busy.iter_mut().find(|(id, _)| *id == a.resource_id) {
            entry.1 += a.finish - a.start;
        }
    }
    let utilization: Vec<(String, f64)> = busy
        .into_iter()
        .map(|(id, b)| {
            let frac = if denom == 0 { 0.0 } else { b as f64 / denom as f64 };
            (id, frac)
        })
        .collect();
    let mean_utilization = if utilization.is_empty() {
        0.0
    } else {
        utilization.iter().map(|(_, f)| *f).sum::<f64>() / utilization.len() as f64
    };

    let waits: Vec<u64> = schedule.assignments.iter().map(|a| a.start).collect();
    let mean_wait = if waits.is_empty() {
        0.0
    } else {
        waits.iter().sum::<u64>() as f64 / waits.len() as f64
    };
    let max_wait = waits.iter().copied().max().unwrap_or(0);

    Metrics { makespan, utilization, mean_utilization, mean_wait, max_wait }
}
