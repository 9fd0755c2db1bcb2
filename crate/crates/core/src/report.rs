//! Verdicts, witnesses and probes shared by every check in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::order::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// An element reference carrying both its carrier index and its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemRef {
    pub index: Elem,
    pub label: String,
}

impl ElemRef {
    pub fn new(index: Elem, label: impl Into<String>) -> Self {
        ElemRef {
            index,
            label: label.into(),
        }
    }
}

/// One variable of a witness assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub var: String,
    pub elem: Elem,
    pub label: String,
}

/// A falsifying assignment, optionally with the two sides of the atom that
/// came out unequal (or out of order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    pub assignment: Vec<Binding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<ElemRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<ElemRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    pub fn new(assignment: Vec<Binding>) -> Self {
        Witness {
            clause: None,
            assignment,
            left: None,
            right: None,
            note: None,
        }
    }

    pub fn with_clause(mut self, clause: impl Into<String>) -> Self {
        self.clause = Some(clause.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Label bound to `var`, if the assignment mentions it.
    pub fn get(&self, var: &str) -> Option<&str> {
        self.assignment
            .iter()
            .find(|b| b.var == var)
            .map(|b| b.label.as_str())
    }

    /// The assignment as `(var, label)` pairs.
    pub fn labels(&self) -> Vec<(&str, &str)> {
        self.assignment
            .iter()
            .map(|b| (b.var.as_str(), b.label.as_str()))
            .collect()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(clause) = &self.clause {
            write!(f, "[{clause}] ")?;
        }
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|b| format!("{} ↦ {}", b.var, b.label))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))?;
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            write!(f, " left {} right {}", l.label, r.label)?;
        }
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

/// Evaluation of a clause at a caller-chosen assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub clause: String,
    pub assignment: Vec<Binding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<ElemRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<ElemRef>,
    pub holds: bool,
    /// Whether the probed assignment appears among the reported witnesses.
    pub is_witness: bool,
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|b| format!("{} ↦ {}", b.var, b.label))
            .collect();
        write!(f, "probe [{}] {{{}}}", self.clause, parts.join(", "))?;
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            write!(f, " left {} right {}", l.label, r.label)?;
        }
        write!(
            f,
            ": {}, {}",
            if self.holds { "holds" } else { "fails" },
            if self.is_witness {
                "among witnesses"
            } else {
                "not a witness"
            }
        )
    }
}

/// Outcome of a check. A failing report always carries a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub all_witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<Probe>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport {
            verdict: Verdict::Pass,
            subject: None,
            clause: None,
            witness: None,
            all_witnesses: Vec::new(),
            probes: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(witness: Witness) -> Self {
        CheckReport {
            verdict: Verdict::Fail,
            clause: witness.clause.clone(),
            witness: Some(witness),
            ..CheckReport::pass()
        }
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Witnesses recorded for `clause` in `all_witnesses`.
    pub fn witnesses_for<'a>(&'a self, clause: &'a str) -> impl Iterator<Item = &'a Witness> + 'a {
        self.all_witnesses
            .iter()
            .filter(move |w| w.clause.as_deref() == Some(clause))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        match &self.subject {
            Some(s) => write!(f, "{s}: {verdict}")?,
            None => write!(f, "{verdict}")?,
        }
        if let Some(clause) = &self.clause {
            write!(f, " at {clause}")?;
        }
        if let Some(w) = &self.witness {
            let mut w = w.clone();
            w.clause = None;
            write!(f, "\n  witness {w}")?;
        }
        if !self.all_witnesses.is_empty() {
            write!(f, "\n  all witnesses ({}):", self.all_witnesses.len())?;
            for w in &self.all_witnesses {
                write!(f, "\n    {w}")?;
            }
        }
        for p in &self.probes {
            write!(f, "\n  {p}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}
