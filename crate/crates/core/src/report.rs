//! Verification reports: per-property outcomes with counterexamples.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// The first witness of a failed property: the offending element tuple and
/// the residual magnitude of the violated equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub elements: Vec<String>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub status: CheckStatus,
    pub checks: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Largest residual observed across all checks, when meaningful.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyCheck {
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    pub fn skipped(name: &str, note: &str) -> Self {
        PropertyCheck {
            property: name.to_string(),
            status: CheckStatus::Skipped,
            checks: 0,
            counterexample: None,
            max_residual: None,
            note: Some(note.to_string()),
        }
    }
}

/// Outcome of a verification run. A failing entry always carries a
/// counterexample; `budget_consumed` totals the checks across properties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub properties: Vec<PropertyCheck>,
    pub budget: u64,
    pub budget_consumed: u64,
    /// True when every property was enumerated rather than sampled.
    pub exhaustive: bool,
}

impl VerificationReport {
    pub fn new(budget: u64, exhaustive: bool) -> Self {
        VerificationReport {
            properties: Vec::new(),
            budget,
            budget_consumed: 0,
            exhaustive,
        }
    }

    pub fn push(&mut self, check: PropertyCheck) {
        self.budget_consumed += check.checks;
        self.properties.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.passed())
    }

    pub fn get(&self, property: &str) -> Option<&PropertyCheck> {
        self.properties.iter().find(|p| p.property == property)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.properties
            .iter()
            .filter(|p| p.status == CheckStatus::Fail)
    }

    /// One human-readable line per property.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            let status = match p.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skip",
            };
            out.push_str(&format!(
                "{:<34} {:>4}  checks={}",
                p.property, status, p.checks
            ));
            if let Some(r) = p.max_residual {
                out.push_str(&format!("  max_residual={r:.3e}"));
            }
            if let Some(cex) = &p.counterexample {
                out.push_str(&format!(
                    "  counterexample=({})  residual={:.3e}",
                    cex.elements.join(", "),
                    cex.residual
                ));
            }
            if let Some(note) = &p.note {
                out.push_str(&format!("  [{note}]"));
            }
            out.push('\n');
        }
        out
    }
}
