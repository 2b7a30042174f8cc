//! Three-valued answers with certificates.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
    Unknown,
}

impl Status {
    pub fn is_yes(self) -> bool {
        self == Status::Yes
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Yes
        } else {
            Status::No
        }
    }
}

/// One row of an `E -> F` witness table: for base entry `e` the entry `f` works.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub e: String,
    pub f: String,
    pub e_index: usize,
    pub f_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `E -> F` table over base entries.
    Table {
        rows: Vec<TableRow>,
    },
    /// Scales at which a per-scale property was validated.
    Scales {
        names: Vec<String>,
        indices: Vec<usize>,
    },
    /// A single base entry.
    Entourage {
        name: String,
        index: usize,
    },
    /// Free-form witness (e.g. a generated subgroup).
    Elements {
        elements: Vec<usize>,
    },
    Note {
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub description: String,
    /// Concrete indices (points, group elements, scales) in the order named by `description`.
    pub tuple: Vec<usize>,
    /// Chains that replay the failure, when the property is about chains.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<Vec<usize>>,
}

impl Counterexample {
    pub fn new(description: impl Into<String>, tuple: Vec<usize>) -> Self {
        Counterexample {
            description: description.into(),
            tuple,
            chains: Vec::new(),
        }
    }

    pub fn with_chains(mut self, chains: Vec<Vec<usize>>) -> Self {
        self.chains = chains;
        self
    }
}

/// Status plus certificate. Constructors keep the invariant that `yes`
/// carries a witness and `no` carries a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Computed over a scale chain that is not a uniform base.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub base_relative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn yes(witness: Witness) -> Self {
        Verdict {
            status: Status::Yes,
            witness: Some(witness),
            counterexample: None,
            base_relative: false,
            note: None,
        }
    }

    pub fn no(counterexample: Counterexample) -> Self {
        Verdict {
            status: Status::No,
            witness: None,
            counterexample: Some(counterexample),
            base_relative: false,
            note: None,
        }
    }

    pub fn unknown(note: impl Into<String>) -> Self {
        Verdict {
            status: Status::Unknown,
            witness: None,
            counterexample: None,
            base_relative: false,
            note: Some(note.into()),
        }
    }

    pub fn relative_to(mut self, base_relative: bool) -> Self {
        self.base_relative = base_relative;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }

    pub fn table(&self) -> Option<&[TableRow]> {
        match &self.witness {
            Some(Witness::Table { rows }) => Some(rows),
            _ => None,
        }
    }

    /// Conjunction: yes when both are yes (keeps the left witness), no when
    /// either is no (keeps that counterexample), unknown otherwise.
    pub fn and(self, other: Verdict) -> Verdict {
        let rel = self.base_relative || other.base_relative;
        let out = match (self.status, other.status) {
            (Status::No, _) => self,
            (_, Status::No) => other,
            (Status::Yes, Status::Yes) => self,
            (Status::Unknown, _) => self,
            (_, Status::Unknown) => other,
        };
        out.relative_to(rel)
    }
}
