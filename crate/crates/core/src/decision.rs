//! Decision-matrix arithmetic: cell values, column totals, resource scores
//! and the score-based resource ranking. All integer, all exact.

use thiserror::Error;

use crate::model::{Criterion, DecisionMatrix, MatrixColumn, Resource, UserProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecisionError {
    #[error("matrix has no column for user type {0:?}")]
    UnknownUserType(String),
    #[error("cannot rank an empty resource list")]
    NoResources,
}

/// Builds a matrix from explicit criteria and columns.
pub fn build_matrix(criteria: Vec<Criterion>, columns: Vec<MatrixColumn>) -> DecisionMatrix {
    DecisionMatrix { criteria, columns }
}

/// Builds the default matrix for a user population: one column per distinct
/// user type, rated by that type's priority, in first-declaration order.
pub fn matrix_from_priorities(criteria: Vec<Criterion>, users: &[UserProfile]) -> DecisionMatrix {
    let mut columns: Vec<MatrixColumn> = Vec::new();
    for user in users {
        if columns.iter().any(|c| c.user_type == user.user_type) {
            continue;
        }
        columns.push(MatrixColumn {
            user_type: user.user_type.clone(),
            rating: user.priority,
        });
    }
    DecisionMatrix { criteria, columns }
}

impl DecisionMatrix {
    /// Value of one grid cell: `weight * rating`.
    pub fn cell(&self, criterion: &Criterion, column: &MatrixColumn) -> u64 {
        criterion.weight * column.rating
    }

    /// Sum of all criterion weights.
    pub fn weight_sum(&self) -> u64 {
        self.criteria.iter().map(|c| c.weight).sum()
    }

    /// Column totals in column order. Each total collapses to
    /// `rating * weight_sum` because every cell shares the column rating.
    pub fn column_totals(&self) -> Vec<(String, u64)> {
        let weights = self.weight_sum();
        self.columns
            .iter()
            .map(|c| (c.user_type.clone(), c.rating * weights))
            .collect()
    }

    /// Total of the column labelled `user_type`.
    pub fn column_total(&self, user_type: &str) -> Result<u64, DecisionError> {
        self.columns
            .iter()
            .find(|c| c.user_type == user_type)
            .map(|c| c.rating * self.weight_sum())
            .ok_or_else(|| DecisionError::UnknownUserType(user_type.to_string()))
    }

    /// The resource's score: the maximum column total, 0 when the matrix
    /// is empty.
    pub fn score(&self) -> u64 {
        let weights = self.weight_sum();
        self.columns
            .iter()
            .map(|c| c.rating * weights)
            .max()
            .unwrap_or(0)
    }

    /// The user type whose column attains the score. Ties go to the higher
    /// rating, then to declaration order; `None` on an empty matrix.
    pub fn best_user_type(&self) -> Option<&str> {
        let weights = self.weight_sum();
        let mut best: Option<&MatrixColumn> = None;
        for column in &self.columns {
            let better = match best {
                None => true,
                Some(b) => {
                    let (total, best_total) = (column.rating * weights, b.rating * weights);
                    total > best_total || (total == best_total && column.rating > b.rating)
                }
            };
            if better {
                best = Some(column);
            }
        }
        best.map(|c| c.user_type.as_str())
    }
}

/// Resource ids ordered by descending matrix score, ties broken by
/// ascending id.
pub fn rank_resources(resources: &[Resource]) -> Result<Vec<&str>, DecisionError> {
    if resources.is_empty() {
        return Err(DecisionError::NoResources);
    }
    let mut ranked: Vec<&Resource> = resources.iter().collect();
    ranked.sort_by(|a, b| {
        b.matrix
            .score()
            .cmp(&a.matrix.score())
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(ranked.into_iter().map(|r| r.id.as_str()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpeedFactor;
    use proptest::prelude::*;

    fn matrix(weights: &[u64], ratings: &[(&str, u64)]) -> DecisionMatrix {
        DecisionMatrix {
            criteria: weights
                .iter()
                .enumerate()
                .map(|(i, w)| Criterion { name: format!("c{}", i + 1), weight: *w })
                .collect(),
            columns: ratings
                .iter()
                .map(|(t, r)| MatrixColumn { user_type: (*t).into(), rating: *r })
                .collect(),
        }
    }

    fn four_type_matrix() -> DecisionMatrix {
        matrix(
            &[1, 2, 3],
            &[("benefited", 4), ("important", 3), ("casual", 2), ("lesser-privileged", 1)],
        )
    }

    #[test]
    fn column_totals_of_unit_weight_grid() {
        let m = four_type_matrix();
        assert_eq!(
            m.column_totals(),
            vec![
                ("benefited".to_string(), 24),
                ("important".to_string(), 18),
                ("casual".to_string(), 12),
                ("lesser-privileged".to_string(), 6),
            ]
        );
        assert_eq!(m.score(), 24);
        assert_eq!(m.best_user_type(), Some("benefited"));
    }

    #[test]
    fn cells_multiply_weight_by_rating() {
        let m = four_type_matrix();
        assert_eq!(m.cell(&m.criteria[2], &m.columns[0]), 12);
        assert_eq!(m.cell(&m.criteria[0], &m.columns[3]), 1);
    }

    #[test]
    fn uneven_weights_spread_totals() {
        let m = matrix(&[2, 5], &[("gold", 3), ("tin", 1)]);
        assert_eq!(m.column_total("gold").unwrap(), 21);
        assert_eq!(m.column_total("tin").unwrap(), 7);
        assert_eq!(m.score(), 21);
    }

    #[test]
    fn equal_ratings_tie_to_declaration_order() {
        let m = matrix(&[3, 3, 3], &[("first", 2), ("second", 2)]);
        assert_eq!(m.column_total("first").unwrap(), 18);
        assert_eq!(m.column_total("second").unwrap(), 18);
        assert_eq!(m.best_user_type(), Some("first"));
    }

    #[test]
    fn unknown_user_type_is_an_error() {
        let m = four_type_matrix();
        assert_eq!(
            m.column_total("stranger").unwrap_err(),
            DecisionError::UnknownUserType("stranger".into())
        );
    }

    #[test]
    fn priority_matrix_keeps_first_declaration_and_dedups() {
        let users = vec![
            UserProfile { id: "u1".into(), user_type: "gold".into(), priority: 4 },
            UserProfile { id: "u2".into(), user_type: "tin".into(), priority: 1 },
            UserProfile { id: "u3".into(), user_type: "gold".into(), priority: 4 },
        ];
        let m = matrix_from_priorities(
            vec![Criterion { name: "c1".into(), weight: 2 }],
            &users,
        );
        assert_eq!(m.columns.len(), 2);
        assert_eq!(m.columns[0].user_type, "gold");
        assert_eq!(m.columns[0].rating, 4);
        assert_eq!(m.columns[1].user_type, "tin");
    }

    #[test]
    fn ranking_sorts_by_score_then_id() {
        let make = |id: &str, weights: &[u64]| Resource {
            id: id.into(),
            speed: SpeedFactor::UNIT,
            matrix: matrix(weights, &[("benefited", 4)]),
        };
        let resources = vec![make("r2", &[1]), make("r1", &[1, 2, 3]), make("r3", &[1])];
        assert_eq!(rank_resources(&resources).unwrap(), vec!["r1", "r2", "r3"]);
    }

    #[test]
    fn ranking_empty_list_is_an_error() {
        assert_eq!(rank_resources(&[]).unwrap_err(), DecisionError::NoResources);
    }

    proptest! {
        // Scaling every rating by a constant scales totals but never
        // reorders columns or changes the best user type.
        #[test]
        fn rating_scaling_preserves_order(
            weights in prop::collection::vec(1u64..50, 1..5),
            ratings in prop::collection::vec(1u64..50, 1..6),
            scale in 1u64..20,
        ) {
            let columns: Vec<(String, u64)> = ratings
                .iter()
                .enumerate()
                .map(|(i, r)| (format!("type{i}"), *r))
                .collect();
            let base = DecisionMatrix {
                criteria: weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| Criterion { name: format!("c{i}"), weight: *w })
                    .collect(),
                columns: columns
                    .iter()
                    .map(|(t, r)| MatrixColumn { user_type: t.clone(), rating: *r })
                    .collect(),
            };
            let scaled = DecisionMatrix {
                criteria: base.criteria.clone(),
                columns: base
                    .columns
                    .iter()
                    .map(|c| MatrixColumn { user_type: c.user_type.clone(), rating: c.rating * scale })
                    .collect(),
            };
            prop_assert_eq!(base.best_user_type(), scaled.best_user_type());
            prop_assert_eq!(base.score() * scale, scaled.score());
            for (t, _) in &columns {
                prop_assert_eq!(
                    base.column_total(t).unwrap() * scale,
                    scaled.column_total(t).unwrap()
                );
            }
        }

        // The score is always attained by some column and dominates all.
        #[test]
        fn score_is_max_column_total(
            weights in prop::collection::vec(1u64..100, 1..6),
            ratings in prop::collection::vec(1u64..100, 1..6),
        ) {
            let m = DecisionMatrix {
                criteria: weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| Criterion { name: format!("c{i}"), weight: *w })
                    .collect(),
                columns: ratings
                    .iter()
                    .enumerate()
                    .map(|(i, r)| MatrixColumn { user_type: format!("t{i}"), rating: *r })
                    .collect(),
            };
            let totals = m.column_totals();
            let max = totals.iter().map(|(_, v)| *v).max().unwrap();
            prop_assert_eq!(m.score(), max);
            let best = m.best_user_type().unwrap();
            prop_assert_eq!(m.column_total(best).unwrap(), max);
        }
    }
}
