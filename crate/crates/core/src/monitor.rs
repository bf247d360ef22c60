//! Usage monitoring: synthetic workload generation, record ingestion,
//! peak/dormant window detection, report assembly and the usage-driven
//! classification of customers into user types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ReportWindow, UsageRecord, UsageReport, UserProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UsageProfile {
    /// Every bucket carries the same constant amount.
    Flat,
    /// Noisy baseline with occasional spikes; heavier customers stay heavier.
    Bursty,
    /// Periodic wave with a quiet trough, plus small jitter.
    Diurnal,
}

impl UsageProfile {
    pub fn name(&self) -> &'static str {
        match self {
            UsageProfile::Flat => "flat",
            UsageProfile::Bursty => "bursty",
            UsageProfile::Diurnal => "diurnal",
        }
    }
}

impl fmt::Display for UsageProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown usage profile {0:?} (expected flat, bursty or diurnal)")]
pub struct ProfileParseError(pub String);

impl FromStr for UsageProfile {
    type Err = ProfileParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat" => Ok(UsageProfile::Flat),
            "bursty" => Ok(UsageProfile::Bursty),
            "diurnal" => Ok(UsageProfile::Diurnal),
            other => Err(ProfileParseError(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonitorError {
    #[error("cannot synthesize usage for zero customers")]
    ZeroCustomers,
    #[error("cannot synthesize usage for zero resources")]
    ZeroResources,
    #[error("cannot synthesize usage over a zero-bucket horizon")]
    ZeroHorizon,
    #[error("duplicate usage record for customer {customer:?}, resource {resource:?}, bucket {bucket}")]
    DuplicateRecord {
        customer: String,
        resource: String,
        bucket: u64,
    },
    #[error("peak threshold must be positive")]
    ZeroPeakThreshold,
    #[error("dormant threshold {dormant} must be below peak threshold {peak}")]
    ThresholdOrder { peak: u64, dormant: u64 },
    #[error("no usage recorded for customer {0:?}")]
    UnknownCustomer(String),
}

/// Generates seeded, reproducible usage for customers c1..cN over
/// resources r1..rM and buckets 0..horizon.
///
/// Amounts are drawn in a fixed customer/resource/bucket loop order from a
/// generator whose output is identical on every platform, so a seed fully
/// determines the result. Zero draws are not emitted; an absent bucket
/// means zero.
pub fn synthesize_usage(
    seed: u64,
    customers: u32,
    resources: u32,
    horizon: u64,
    profile: UsageProfile,
) -> Result<Vec<UsageRecord>, MonitorError> {
    if customers == 0 {
        return Err(MonitorError::ZeroCustomers);
    }
    if resources == 0 {
        return Err(MonitorError::ZeroResources);
    }
    if horizon == 0 {
        return Err(MonitorError::ZeroHorizon);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for c in 1..=customers {
        let customer_id = format!("c{c}");
        // Per-customer character, drawn before the bucket sweep.
        let level: u64 = rng.gen_range(1..=4);
        let phase: u64 = rng.gen_range(0..12);
        let amplitude: u64 = rng.gen_range(1..=3);
        for r in 1..=resources {
            let resource_id = format!("r{r}");
            for bucket in 0..horizon {
                let amount = match profile {
                    UsageProfile::Flat => 5,
                    UsageProfile::Bursty => {
                        let base: u64 = rng.gen_range(0..=2);
                        let burst = if rng.gen_range(0..5) == 0 {
                            rng.gen_range(4..=8)
                        } else {
                            0
                        };
                        level + base + burst
                    }
                    UsageProfile::Diurnal => {
                        let pos = (bucket + phase) % 12;
                        let tri = 6 - pos.min(12 - pos);
                        let jitter: u64 = rng.gen_range(0..=1);
                        amplitude * tri / 2 + jitter
                    }
                };
                if amount > 0 {
                    records.push(UsageRecord {
                        customer_id: customer_id.clone(),
                        resource_id: resource_id.clone(),
                        bucket_start: bucket,
                        amount,
                    });
                }
            }
        }
    }
    Ok(records)
}

/// Accumulated usage, indexed three ways: per customer, per (customer,
/// resource) pair, and per (customer, bucket) for window scans.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UsageStore {
    customer_totals: BTreeMap<String, u64>,
    pair_totals: BTreeMap<String, BTreeMap<String, u64>>,
    bucket_totals: BTreeMap<String, BTreeMap<u64, u64>>,
    seen: BTreeSet<(String, String, u64)>,
    horizon: u64,
}

impl UsageStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one record. At most one record may exist per (customer,
    /// resource, bucket) key; amounts are never merged silently.
    pub fn ingest(&mut self, record: &UsageRecord) -> Result<(), MonitorError> {
        let key = (
            record.customer_id.clone(),
            record.resource_id.clone(),
            record.bucket_start,
        );
        if !self.seen.insert(key) {
            return Err(MonitorError::DuplicateRecord {
                customer: record.customer_id.clone(),
                resource: record.resource_id.clone(),
                bucket: record.bucket_start,
            });
        }
        *self
            .customer_totals
            .entry(record.customer_id.clone())
            .or_default() += record.amount;
        *self
            .pair_totals
            .entry(record.customer_id.clone())
            .or_default()
            .entry(record.resource_id.clone())
            .or_default() += record.amount;
        *self
            .bucket_totals
            .entry(record.customer_id.clone())
            .or_default()
            .entry(record.bucket_start)
            .or_default() += record.amount;
        self.horizon = self.horizon.max(record.bucket_start + 1);
        Ok(())
    }

    pub fn customer_totals(&self) -> &BTreeMap<String, u64> {
        &self.customer_totals
    }

    pub fn pair_totals(&self) -> &BTreeMap<String, BTreeMap<String, u64>> {
        &self.pair_totals
    }

    /// One past the last bucket seen in any record; 0 for an empty store.
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Combined usage of one customer at one bucket, across all resources.
    pub fn bucket_level(&self, customer: &str, bucket: u64) -> u64 {
        self.bucket_totals
            .get(customer)
            .and_then(|b| b.get(&bucket))
            .copied()
            .unwrap_or(0)
    }
}

/// Builds a store from a batch of records.
pub fn ingest_usage(records: &[UsageRecord]) -> Result<UsageStore, MonitorError> {
    let mut store = UsageStore::new();
    for record in records {
        store.ingest(record)?;
    }
    Ok(store)
}

/// Maximal half-open bucket runs, per customer in id order, where the
/// predicate holds. Buckets with no records count as zero and the scan
/// always covers the store's full horizon.
fn windows_where<F: Fn(u64) -> bool>(store: &UsageStore, keep: F) -> Vec<ReportWindow> {
    let mut windows = Vec::new();
    for customer in store.customer_totals.keys() {
        let mut open: Option<u64> = None;
        for bucket in 0..store.horizon {
            let hit = keep(store.bucket_level(customer, bucket));
            match (hit, open) {
                (true, None) => open = Some(bucket),
                (false, Some(start)) => {
                    windows.push(ReportWindow {
                        customer_id: customer.clone(),
                        start,
                        end: bucket,
                    });
                    open = None;
                }
                _ => {}
            }
        }
        if let Some(start) = open {
            windows.push(ReportWindow {
                customer_id: customer.clone(),
                start,
                end: store.horizon,
            });
        }
    }
    windows
}

/// Maximal windows where a customer's combined usage is at least
/// `threshold`. The threshold must be positive, otherwise every bucket of
/// every customer would qualify.
pub fn peak_windows(store: &UsageStore, threshold: u64) -> Result<Vec<ReportWindow>, MonitorError> {
    if threshold == 0 {
        return Err(MonitorError::ZeroPeakThreshold);
    }
    Ok(windows_where(store, |level| level >= threshold))
}

/// Maximal windows where a customer's combined usage is at most
/// `threshold`. A threshold of zero means strictly idle.
pub fn dormant_windows(store: &UsageStore, threshold: u64) -> Vec<ReportWindow> {
    windows_where(store, |level| level <= threshold)
}

/// Peak windows of a single customer; errors if the store has never seen
/// that customer.
pub fn peak_windows_for(
    store: &UsageStore,
    customer: &str,
    threshold: u64,
) -> Result<Vec<ReportWindow>, MonitorError> {
    if !store.customer_totals.contains_key(customer) {
        return Err(MonitorError::UnknownCustomer(customer.to_string()));
    }
    let mut windows = peak_windows(store, threshold)?;
    windows.retain(|w| w.customer_id == customer);
    Ok(windows)
}

/// Assembles the provider-facing report: exact totals plus the peak and
/// dormant windows at the given thresholds. Requires `dormant < peak` so
/// the two window kinds cannot overlap.
pub fn build_report(
    store: &UsageStore,
    peak_threshold: u64,
    dormant_threshold: u64,
) -> Result<UsageReport, MonitorError> {
    if dormant_threshold >= peak_threshold {
        return Err(MonitorError::ThresholdOrder {
            peak: peak_threshold,
            dormant: dormant_threshold,
        });
    }
    Ok(UsageReport {
        customer_totals: store.customer_totals.clone(),
        pair_totals: store.pair_totals.clone(),
        peak_windows: peak_windows(store, peak_threshold)?,
        dormant_windows: dormant_windows(store, dormant_threshold),
    })
}

/// One classification band: customers whose usage rank-quantile clears
/// `min_quantile` (strictly) earn this type and priority.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBand {
    pub user_type: String,
    pub priority: u64,
    pub min_quantile: f64,
}

/// An ordered list of bands, best first. The final band is the catch-all.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRule {
    pub bands: Vec<RuleBand>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("classification rule has no bands")]
    Empty,
    #[error("band {0:?} has an empty user type")]
    EmptyUserType(usize),
    #[error("band {0:?} has zero priority")]
    ZeroPriority(usize),
    #[error("bands {0} and {1} share priority {2}")]
    DuplicatePriority(usize, usize, u64),
    #[error("band {0} quantile bound {1} is out of [0, 1)")]
    BoundOutOfRange(usize, f64),
    #[error("band {0} quantile bound {1} does not decrease from the previous band")]
    BoundNotDecreasing(usize, f64),
}

impl ClassificationRule {
    /// The quartile split used throughout: top quarter benefited, then
    /// important, casual, and lesser-privileged for the rest.
    pub fn default_quartiles() -> Self {
        let band = |user_type: &str, priority, min_quantile| RuleBand {
            user_type: user_type.to_string(),
            priority,
            min_quantile,
        };
        ClassificationRule {
            bands: vec![
                band("benefited", 4, 0.75),
                band("important", 3, 0.5),
                band("casual", 2, 0.25),
                band("lesser-privileged", 1, 0.0),
            ],
        }
    }

    pub fn check(&self) -> Result<(), RuleError> {
        if self.bands.is_empty() {
            return Err(RuleError::Empty);
        }
        for (i, band) in self.bands.iter().enumerate() {
            if band.user_type.is_empty() {
                return Err(RuleError::EmptyUserType(i));
            }
            if band.priority == 0 {
                return Err(RuleError::ZeroPriority(i));
            }
            if !(0.0..1.0).contains(&band.min_quantile) {
                return Err(RuleError::BoundOutOfRange(i, band.min_quantile));
            }
            if i > 0 && band.min_quantile >= self.bands[i - 1].min_quantile {
                return Err(RuleError::BoundNotDecreasing(i, band.min_quantile));
            }
            for (j, other) in self.bands[..i].iter().enumerate() {
                if other.priority == band.priority {
                    return Err(RuleError::DuplicatePriority(j, i, band.priority));
                }
            }
        }
        Ok(())
    }
}

/// Classifies customers by usage rank.
///
/// Customers are ordered by total usage (descending, ties by ascending
/// id); the customer at rank i of n gets quantile `1 - i/n`, and takes the
/// first band whose bound it strictly exceeds, falling back to the last
/// band. Only ranks matter, so scaling all totals by any positive factor
/// changes nothing.
pub fn classify_users(
    store: &UsageStore,
    rule: &ClassificationRule,
) -> Result<Vec<UserProfile>, RuleError> {
    rule.check()?;
    let mut ordered: Vec<(&String, u64)> = store
        .customer_totals
        .iter()
        .map(|(id, total)| (id, *total))
        .collect();
    ordered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

    let n = ordered.len() as f64;
    let mut profiles: Vec<UserProfile> = ordered
        .into_iter()
        .enumerate()
        .map(|(i, (id, _))| {
            let quantile = 1.0 - i as f64 / n;
            let band = rule
                .bands
                .iter()
                .find(|b| quantile > b.min_quantile)
                .unwrap_or_else(|| rule.bands.last().expect("rule checked non-empty"));
            UserProfile {
                id: id.clone(),
                user_type: band.user_type.clone(),
                priority: band.priority,
            }
        })
        .collect();
    profiles.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(profiles)
}
