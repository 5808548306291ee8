//! Model files: canonical JSON with the predicate vocabulary (so test data
//! is binarized with the training cut points), the search parameters and
//! the rule list itself. Keys are sorted and estimates are exact `p/q`
//! strings, so serialization is byte-stable.

use crate::dataset::Predicate;
use crate::rational::{rat_string, Rat};
use crate::rulelist::{ElseClause, ListMode, Rule, RuleList};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown rule list mode {0:?}")]
    BadMode(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelParams {
    pub algorithm: String,
    #[serde(with = "rat_string")]
    pub w: Rat,
    #[serde(with = "rat_string")]
    pub c: Rat,
    #[serde(with = "rat_string")]
    pub c1: Rat,
    pub iterations: u64,
    pub seed: u64,
    #[serde(with = "rat_string")]
    pub lambda: Rat,
    pub p_terminate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct RuleJson {
    antecedent: Vec<String>,
    #[serde(with = "rat_string")]
    estimate: Rat,
    n_pos: usize,
    n_neg: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ElseJson {
    #[serde(with = "rat_string")]
    estimate: Rat,
    n_pos: usize,
    n_neg: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct RuleListJson {
    mode: String,
    rules: Vec<RuleJson>,
    #[serde(rename = "else")]
    else_clause: ElseJson,
}

/// Everything needed to re-apply and re-evaluate a trained model.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub params: ModelParams,
    pub predicates: Vec<Predicate>,
    list: RuleListJson,
}

fn proportion(n_pos: usize, n_neg: usize) -> Rat {
    if n_pos + n_neg == 0 {
        Rat::zero()
    } else {
        crate::rational::rat_counts(n_pos, n_pos + n_neg)
    }
}

impl ModelFile {
    pub fn new(params: ModelParams, predicates: Vec<Predicate>, list: &RuleList) -> Self {
        ModelFile {
            params,
            predicates,
            list: RuleListJson {
                mode: match list.mode {
                    ListMode::Falling => "falling".into(),
                    ListMode::SoftlyFalling => "softly_falling".into(),
                },
                rules: list
                    .rules
                    .iter()
                    .map(|r| RuleJson {
                        antecedent: r.antecedent.clone(),
                        estimate: r.estimate.clone(),
                        n_pos: r.n_pos,
                        n_neg: r.n_neg,
                    })
                    .collect(),
                else_clause: ElseJson {
                    estimate: list.else_clause.estimate.clone(),
                    n_pos: list.else_clause.n_pos,
                    n_neg: list.else_clause.n_neg,
                },
            },
        }
    }

    pub fn rule_list(&self) -> Result<RuleList, ModelError> {
        let mode = match self.list.mode.as_str() {
            "falling" => ListMode::Falling,
            "softly_falling" => ListMode::SoftlyFalling,
            other => return Err(ModelError::BadMode(other.to_string())),
        };
        Ok(RuleList {
            mode,
            rules: self
                .list
                .rules
                .iter()
                .map(|r| Rule {
                    antecedent: r.antecedent.clone(),
                    n_pos: r.n_pos,
                    n_neg: r.n_neg,
                    proportion: proportion(r.n_pos, r.n_neg),
                    estimate: r.estimate.clone(),
                })
                .collect(),
            else_clause: ElseClause {
                n_pos: self.list.else_clause.n_pos,
                n_neg: self.list.else_clause.n_neg,
                proportion: proportion(self.list.else_clause.n_pos, self.list.else_clause.n_neg),
                estimate: self.list.else_clause.estimate.clone(),
            },
        })
    }

    /// Canonical rendering: sorted keys, stable float formatting, trailing
    /// newline. Byte-identical for identical models.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("model serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value renders");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        std::fs::write(path.as_ref(), self.to_canonical_json()).map_err(|source| ModelError::Io {
            path: path.as_ref().display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|source| ModelError::Io {
            path: path.as_ref().display().to_string(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::rulelist::{ListMode, PrefixState};
    use crate::synth;

    fn sample_model() -> ModelFile {
        let (ds, ants) = synth::instance_from_rows(
            19,
            (0..14).collect(),
            vec![(0..8).chain([14, 15, 16]).collect()],
        );
        let list = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap()
            .close(&ants, &ds, ListMode::Falling);
        let params = ModelParams {
            algorithm: "frl".into(),
            w: rat_int(1),
            c: rat(1, 1_000_000),
            c1: Rat::zero(),
            iterations: 100,
            seed: 42,
            lambda: rat(1, 2),
            p_terminate: 0.05,
        };
        ModelFile::new(params, ds.predicates.clone(), &list)
    }

    #[test]
    fn canonical_json_round_trips_byte_identically() {
        let model = sample_model();
        let json = model.to_canonical_json();
        let reloaded: ModelFile = serde_json::from_str(&json).unwrap();
        assert_eq!(reloaded.to_canonical_json(), json);
        // Keys come out sorted.
        let else_pos = json.find("\"else\"").unwrap();
        let rules_pos = json.find("\"rules\"").unwrap();
        assert!(else_pos < rules_pos);
    }

    #[test]
    fn rule_list_reconstruction_restores_proportions() {
        let model = sample_model();
        let list = model.rule_list().unwrap();
        assert_eq!(list.rules[0].proportion, rat(8, 11));
        assert_eq!(list.else_clause.proportion, rat(6, 8));
        assert_eq!(list.mode, ListMode::Falling);
    }

    #[test]
    fn bad_mode_is_rejected() {
        let mut model = sample_model();
        model.list.mode = "rising".into();
        assert!(matches!(model.rule_list(), Err(ModelError::BadMode(_))));
    }
}
