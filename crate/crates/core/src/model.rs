//! Domain types shared by every other module: tasks, users, resources,
//! decision matrices, usage data and schedules. Pure data plus validation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sched::SchedulerConfig;

/// A unit of work with an intrinsic duration, owned by one user.
///
/// Durations are abstract integer time units; `execution_time` must be >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub id: String,
    pub user_id: String,
    pub execution_time: u64,
}

/// A customer with an assigned type label and an integer priority rank
/// (larger = more important).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserProfile {
    pub id: String,
    pub user_type: String,
    pub priority: u64,
}

/// One weighted row of a decision matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Criterion {
    pub name: String,
    pub weight: u64,
}

/// One column of a decision matrix: a user type with its rating.
///
/// In the default construction the rating is the user type's priority.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixColumn {
    pub user_type: String,
    pub rating: u64,
}

/// A weighted criteria-by-user-type grid.
///
/// Every cell is `weight(criterion) * rating(column)`, so the grid, the
/// column totals and the score are all derived from `criteria` and
/// `columns` and are recomputed on demand (see the accessors in
/// [`crate::decision`]). Only the defining lists are serialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionMatrix {
    pub criteria: Vec<Criterion>,
    pub columns: Vec<MatrixColumn>,
}

/// Relative processing speed of a resource, kept as an exact rational so
/// that `ceil(execution_time / speed)` is integer arithmetic end to end.
///
/// Values originate from JSON numbers; the shortest decimal form of the
/// number is converted exactly (`0.7` becomes 7/10, not the nearest
/// binary double), which keeps effective durations reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpeedFactor {
    num: u64,
    den: u64,
}

impl SpeedFactor {
    /// Unit speed: effective duration equals execution time.
    pub const UNIT: SpeedFactor = SpeedFactor { num: 1, den: 1 };

    /// Converts a JSON number into an exact decimal rational.
    ///
    /// Rejects non-finite and non-positive values, and values whose
    /// decimal form needs more than 18 fractional digits.
    pub fn from_f64(value: f64) -> Result<SpeedFactor, SpeedFactorError> {
        if !value.is_finite() || value <= 0.0 {
            return Err(SpeedFactorError::NonPositive(value));
        }
        // Shortest round-trip decimal form; Rust's Display never uses
        // exponent notation for f64.
        let text = format!("{value}");
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text.as_str(), ""),
        };
        if frac_part.len() > 18 {
            return Err(SpeedFactorError::Unrepresentable(value));
        }
        let den: u128 = 10u128.pow(frac_part.len() as u32);
        let int: u128 = int_part
            .parse()
            .map_err(|_| SpeedFactorError::Unrepresentable(value))?;
        let frac: u128 = if frac_part.is_empty() {
            0
        } else {
            frac_part
                .parse()
                .map_err(|_| SpeedFactorError::Unrepresentable(value))?
        };
        let num = int
            .checked_mul(den)
            .and_then(|n| n.checked_add(frac))
            .ok_or(SpeedFactorError::Unrepresentable(value))?;
        if num == 0 {
            return Err(SpeedFactorError::NonPositive(value));
        }
        let g = gcd(num, den);
        let num = u64::try_from(num / g).map_err(|_| SpeedFactorError::Unrepresentable(value))?;
        let den = u64::try_from(den / g).map_err(|_| SpeedFactorError::Unrepresentable(value))?;
        Ok(SpeedFactor { num, den })
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Effective duration of a task on this resource:
    /// `ceil(execution_time / speed)`, exact and at least 1 for any
    /// positive execution time.
    pub fn effective_duration(&self, execution_time: u64) -> u64 {
        let t = execution_time as u128;
        let ticks = (t * self.den as u128).div_ceil(self.num as u128);
        u64::try_from(ticks).unwrap_or(u64::MAX)
    }
}

impl Default for SpeedFactor {
    fn default() -> Self {
        SpeedFactor::UNIT
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpeedFactorError {
    #[error("speed factor must be a positive finite number, got {0}")]
    NonPositive(f64),
    #[error("speed factor {0} cannot be represented exactly")]
    Unrepresentable(f64),
}

/// A scheduling target. Runs exactly one task at any instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Resource {
    pub id: String,
    pub speed: SpeedFactor,
    pub matrix: DecisionMatrix,
}

/// Time-bucketed consumption of one resource by one customer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsageRecord {
    pub customer_id: String,
    pub resource_id: String,
    pub bucket_start: u64,
    pub amount: u64,
}

/// A half-open `[start, end)` window of notable activity for one customer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportWindow {
    pub customer_id: String,
    pub start: u64,
    pub end: u64,
}

/// Aggregated usage handed to the provider: exact totals plus the peak and
/// dormant windows of every customer.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsageReport {
    /// Total usage per customer, summed over all resources and buckets.
    pub customer_totals: BTreeMap<String, u64>,
    /// Total usage per customer per resource.
    pub pair_totals: BTreeMap<String, BTreeMap<String, u64>>,
    pub peak_windows: Vec<ReportWindow>,
    pub dormant_windows: Vec<ReportWindow>,
}

/// One placement decision: a task bound to a resource for `[start, finish)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub task_id: String,
    pub resource_id: String,
    pub start: u64,
    pub finish: u64,
}

/// A complete set of assignments in binding order, together with the
/// resource ids it was built against (so idle resources still show up in
/// utilization metrics).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    pub resource_ids: Vec<String>,
}

impl Schedule {
    /// Finish time of the last assignment; 0 for an empty schedule.
    pub fn makespan(&self) -> u64 {
        self.assignments.iter().map(|a| a.finish).max().unwrap_or(0)
    }
}

/// The scenario document as written on disk (JSON). Unknown keys are
/// rejected; `matrix` and `speed_factor` are optional at this layer so
/// their absence surfaces as a validation error rather than a parse error.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default)]
    pub users: Vec<UserProfile>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub resources: Vec<ResourceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheduler: Option<SchedulerConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<DecisionMatrix>,
}

/// A scenario that passed [`ScenarioDoc::validate`]: ids are unique, task
/// owners resolve, every matrix is present and well formed, and all
/// numeric invariants hold. Immutable after validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub users: Vec<UserProfile>,
    pub tasks: Vec<Task>,
    pub resources: Vec<Resource>,
    pub scheduler: Option<SchedulerConfig>,
}

impl Scenario {
    pub fn user(&self, id: &str) -> Option<&UserProfile> {
        self.users.iter().find(|u| u.id == id)
    }

    /// Priority of the task's owner. Only meaningful on validated
    /// scenarios, where the owner always resolves.
    pub fn task_priority(&self, task: &Task) -> u64 {
        self.user(&task.user_id).map(|u| u.priority).unwrap_or(0)
    }

    /// Converts back to the document form, making defaults explicit.
    pub fn to_doc(&self) -> ScenarioDoc {
        ScenarioDoc {
            users: self.users.clone(),
            tasks: self.tasks.clone(),
            resources: self
                .resources
                .iter()
                .map(|r| ResourceDoc {
                    id: r.id.clone(),
                    speed_factor: Some(r.speed.as_f64()),
                    matrix: Some(r.matrix.clone()),
                })
                .collect(),
            scheduler: self.scheduler.clone(),
        }
    }
}

/// Problems found while validating a matrix, reported with the owning
/// resource id by [`ValidationError::Matrix`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix has no criteria")]
    EmptyCriteria,
    #[error("matrix has no columns")]
    EmptyColumns,
    #[error("non-positive weight for criterion {0:?}")]
    NonPositiveWeight(String),
    #[error("non-positive rating for user type {0:?}")]
    NonPositiveRating(String),
    #[error("duplicate column for user type {0:?}")]
    DuplicateColumn(String),
}

impl DecisionMatrix {
    /// Checks the structural invariants: at least one criterion and one
    /// column, all weights and ratings positive, column labels distinct.
    pub fn check(&self) -> Result<(), MatrixError> {
        if self.criteria.is_empty() {
            return Err(MatrixError::EmptyCriteria);
        }
        if self.columns.is_empty() {
            return Err(MatrixError::EmptyColumns);
        }
        for criterion in &self.criteria {
            if criterion.weight == 0 {
                return Err(MatrixError::NonPositiveWeight(criterion.name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for column in &self.columns {
            if column.rating == 0 {
                return Err(MatrixError::NonPositiveRating(column.user_type.clone()));
            }
            if !seen.insert(column.user_type.as_str()) {
                return Err(MatrixError::DuplicateColumn(column.user_type.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("duplicate task id {0:?}")]
    DuplicateTaskId(String),
    #[error("duplicate user id {0:?}")]
    DuplicateUserId(String),
    #[error("duplicate resource id {0:?}")]
    DuplicateResourceId(String),
    #[error("task {task:?} references unknown user {user:?}")]
    DanglingUserRef { task: String, user: String },
    #[error("non-positive duration for task {0:?}")]
    NonPositiveDuration(String),
    #[error("non-positive priority for user {0:?}")]
    NonPositivePriority(String),
    #[error("empty user type label for user {0:?}")]
    EmptyUserType(String),
    #[error("resource {0:?} declares no decision matrix")]
    MissingMatrix(String),
    #[error("invalid matrix for resource {resource:?}: {source}")]
    Matrix {
        resource: String,
        #[source]
        source: MatrixError,
    },
    #[error("invalid speed factor for resource {resource:?}: {source}")]
    Speed {
        resource: String,
        #[source]
        source: SpeedFactorError,
    },
}

impl ScenarioDoc {
    /// Validates every type invariant and resolves every task owner,
    /// returning the immutable [`Scenario`] used by the schedulers.
    pub fn validate(&self) -> Result<Scenario, ValidationError> {
        let mut user_ids = BTreeSet::new();
        for user in &self.users {
            if !user_ids.insert(user.id.as_str()) {
                return Err(ValidationError::DuplicateUserId(user.id.clone()));
            }
            if user.priority == 0 {
                return Err(ValidationError::NonPositivePriority(user.id.clone()));
            }
            if user.user_type.is_empty() {
                return Err(ValidationError::EmptyUserType(user.id.clone()));
            }
        }

        let mut task_ids = BTreeSet::new();
        for task in &self.tasks {
            if !task_ids.insert(task.id.as_str()) {
                return Err(ValidationError::DuplicateTaskId(task.id.clone()));
            }
            if task.execution_time == 0 {
                return Err(ValidationError::NonPositiveDuration(task.id.clone()));
            }
            if !user_ids.contains(task.user_id.as_str()) {
                return Err(ValidationError::DanglingUserRef {
                    task: task.id.clone(),
                    user: task.user_id.clone(),
                });
            }
        }

        let mut resource_ids = BTreeSet::new();
        let mut resources = Vec::with_capacity(self.resources.len());
        for doc in &self.resources {
            if !resource_ids.insert(doc.id.as_str()) {
                return Err(ValidationError::DuplicateResourceId(doc.id.clone()));
            }
            let speed = match doc.speed_factor {
                Some(value) => SpeedFactor::from_f64(value).map_err(|source| {
                    ValidationError::Speed {
                        resource: doc.id.clone(),
                        source,
                    }
                })?,
                None => SpeedFactor::UNIT,
            };
            let matrix = doc
                .matrix
                .clone()
                .ok_or_else(|| ValidationError::MissingMatrix(doc.id.clone()))?;
            matrix.check().map_err(|source| ValidationError::Matrix {
                resource: doc.id.clone(),
                source,
            })?;
            resources.push(Resource {
                id: doc.id.clone(),
                speed,
                matrix,
            });
        }

        Ok(Scenario {
            users: self.users.clone(),
            tasks: self.tasks.clone(),
            resources,
            scheduler: self.scheduler.clone(),
        })
    }
}

/// Operation form of [`ScenarioDoc::validate`] for callers holding the
/// three collections separately.
pub fn validate_scenario(
    users: Vec<UserProfile>,
    tasks: Vec<Task>,
    resources: Vec<ResourceDoc>,
) -> Result<Scenario, ValidationError> {
    ScenarioDoc {
        users,
        tasks,
        resources,
        scheduler: None,
    }
    .validate()
}
