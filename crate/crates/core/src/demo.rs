//! Bundled demonstration scenarios, compiled into the library so examples
//! and tests run without touching the filesystem.

use crate::model::{Scenario, ScenarioDoc};

/// Four users of distinct types, four tasks of 15/20/10/5 time units, and
/// three resources whose decision-matrix scores are 24, 12 and 4.
pub const DEMO_SCENARIO: &str = include_str!("../data/demo_scenario.json");

/// Same tasks and resources, but owned by customers c1..c4 and with an
/// empty user list: the pipeline fills the users in from monitored usage.
pub const PIPELINE_SCENARIO: &str = include_str!("../data/pipeline_demo.json");

/// The parsed and validated demonstration scenario.
pub fn demo_scenario() -> Scenario {
    serde_json::from_str::<ScenarioDoc>(DEMO_SCENARIO)
        .expect("bundled scenario parses")
        .validate()
        .expect("bundled scenario validates")
}

/// The pipeline document, unvalidated: its tasks reference customers that
/// only exist after classification.
pub fn pipeline_doc() -> ScenarioDoc {
    serde_json::from_str(PIPELINE_SCENARIO).expect("bundled scenario parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_scenario_scores_descend_from_r1() {
        let scenario = demo_scenario();
        let scores: Vec<u64> = scenario.resources.iter().map(|r| r.matrix.score()).collect();
        assert_eq!(scores, vec![24, 12, 4]);
    }

    #[test]
    fn pipeline_doc_needs_classified_users() {
        let doc = pipeline_doc();
        assert!(doc.users.is_empty());
        assert!(doc.validate().is_err());
    }
}
