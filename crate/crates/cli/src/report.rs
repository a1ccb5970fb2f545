//! Report documents: versioned JSON with a plain text rendering.

use std::fmt::Write as _;

use ei_hereditary::category::Clause;
use ei_hereditary::Side;
use serde::Serialize;

use crate::input::Settings;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Item {
    pub input: String,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    /// verdict of the specialised or category criterion
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hereditary: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed_clauses: Vec<Clause>,
    /// general category criterion, when a specialised one produced the verdict
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category_criterion: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub criterion_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Item {
    pub fn new(input: &str, kind: &'static str) -> Self {
        Item { input: input.to_string(), kind, ..Item::default() }
    }

    pub fn at(mut self, characteristic: u64, side: Side) -> Self {
        self.characteristic = Some(characteristic);
        self.side = Some(side);
        self
    }

    /// Sets the agreement flag from all verdicts present.
    pub fn settle(&mut self) {
        let verdicts: Vec<bool> =
            [self.hereditary, self.category_criterion, self.oracle].into_iter().flatten().collect();
        if self.error.is_none() && verdicts.len() > 1 {
            self.agreement = Some(verdicts.iter().all(|&v| v == verdicts[0]));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SettingsEcho {
    pub chars: Vec<u64>,
    pub sides: Vec<Side>,
    pub oracle: bool,
    pub limit_dim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub items: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub settings: SettingsEcho,
    pub items: Vec<Item>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, settings: &Settings, mut items: Vec<Item>) -> Self {
        items.sort_by(|a, b| {
            (&a.input, a.kind, a.characteristic, a.side).cmp(&(&b.input, b.kind, b.characteristic, b.side))
        });
        let summary = Summary {
            items: items.len(),
            agreements: items.iter().filter(|i| i.agreement == Some(true)).count(),
            disagreements: items.iter().filter(|i| i.agreement == Some(false)).count(),
            errors: items.iter().filter(|i| i.error.is_some()).count(),
        };
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            settings: SettingsEcho {
                chars: settings.chars.iter().map(|k| k.characteristic()).collect(),
                sides: settings.sides.clone(),
                oracle: settings.oracle,
                limit_dim: settings.limit_dim,
                seed: settings.seed,
            },
            items,
            summary,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.disagreements == 0 && self.summary.errors == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            let _ = write!(out, "{} [{}]", i.input, i.kind);
            if let Some(p) = i.characteristic {
                let _ = write!(out, " char {p}");
            }
            if let Some(s) = i.side {
                let _ = write!(out, " {s}");
            }
            let show = |b: Option<bool>| match b {
                Some(true) => "yes",
                Some(false) => "no",
                None => "-",
            };
            if i.hereditary.is_some() {
                let _ = write!(out, ": hereditary {}", show(i.hereditary));
            }
            if i.oracle.is_some() {
                let _ = write!(out, ", oracle {}", show(i.oracle));
            }
            if let Some(a) = i.agreement {
                let _ = write!(out, ", {}", if a { "agree" } else { "DISAGREE" });
            }
            if i.criterion_only {
                out.push_str(", criterion only");
            }
            for c in &i.failed_clauses {
                let _ = write!(out, "\n    {} fails: {}", c.name, c.witnesses.join("; "));
            }
            if let Some(d) = &i.detail {
                let _ = write!(out, "\n    {d}");
            }
            if let Some(e) = &i.error {
                let _ = write!(out, "\n    error: {e}");
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} items, {} agreements, {} disagreements, {} errors",
            s.items, s.agreements, s.disagreements, s.errors
        );
        out
    }
}
