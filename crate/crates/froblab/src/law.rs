//! Pass/fail reports for exact law checking, with failure witnesses.

use serde::Serialize;

use crate::matrix::{format_rat, MatMorphism};

/// A pair of unequal morphisms attached to a failed law entry.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub lhs: MorphismJson,
    pub rhs: MorphismJson,
}

/// Serialized morphism in the standard interchange format: factor words plus
/// a matrix of rational strings.
#[derive(Debug, Clone, Serialize)]
pub struct MorphismJson {
    pub dom: Vec<FactorJson>,
    pub cod: Vec<FactorJson>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorJson {
    pub label: String,
    pub dim: usize,
}

impl MorphismJson {
    pub fn from_morphism(m: &MatMorphism) -> Self {
        let rows = m.rows();
        let cols = m.cols();
        let matrix = (0..rows)
            .map(|i| (0..cols).map(|j| format_rat(m.at(i, j))).collect())
            .collect();
        MorphismJson {
            dom: m
                .dom
                .factors
                .iter()
                .map(|f| FactorJson { label: f.label.clone(), dim: f.dim })
                .collect(),
            cod: m
                .cod
                .factors
                .iter()
                .map(|f| FactorJson { label: f.label.clone(), dim: f.dim })
                .collect(),
            matrix,
        }
    }
}

/// One checked equation.
#[derive(Debug, Clone, Serialize)]
pub struct LawEntry {
    pub law: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Outcome of running a family of exact law checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct LawReport {
    pub entries: Vec<LawEntry>,
}

impl LawReport {
    pub fn new() -> Self {
        LawReport { entries: Vec::new() }
    }

    /// Record an exact equality check.
    pub fn check(&mut self, law: impl Into<String>, lhs: &MatMorphism, rhs: &MatMorphism) {
        let passed = lhs == rhs;
        self.entries.push(LawEntry {
            law: law.into(),
            passed,
            witness: if passed {
                None
            } else {
                Some(Witness {
                    lhs: MorphismJson::from_morphism(lhs),
                    rhs: MorphismJson::from_morphism(rhs),
                })
            },
        });
    }

    /// Record a boolean condition with no morphism witness.
    pub fn check_flag(&mut self, law: impl Into<String>, passed: bool) {
        self.entries.push(LawEntry { law: law.into(), passed, witness: None });
    }

    pub fn merge(&mut self, other: LawReport) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failed_laws(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| !e.passed)
            .map(|e| e.law.as_str())
            .collect()
    }

    /// True when every entry whose name starts with `prefix` failed and at
    /// least one such entry exists.
    pub fn all_failed_with_prefix(&self, prefix: &str) -> bool {
        let mut seen = false;
        for e in &self.entries {
            if e.law.starts_with(prefix) {
                seen = true;
                if e.passed {
                    return false;
                }
            }
        }
        seen
    }

    /// True when every failed entry's name starts with `prefix`.
    pub fn failures_confined_to(&self, prefix: &str) -> bool {
        self.entries.iter().all(|e| e.passed || e.law.starts_with(prefix))
    }
}
