//! Check reports: named entries with a status and exact witness strings.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::scalar::format_rational;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// A membership that is true by construction (a zero difference), reported
    /// but kept out of the overall verdict.
    ExpectedMember,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedMember => "EXPECTED-MEMBER",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    /// Exact values backing the verdict, keyed by label (sorted on output).
    pub witnesses: BTreeMap<String, String>,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self { name: name.into(), status, witnesses: BTreeMap::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.witnesses.insert(key.into(), value.into());
        self
    }

    pub fn with_rational(self, key: impl Into<String>, value: &Rational) -> Self {
        self.with(key, format_rational(value))
    }

    pub fn with_vector(self, key: impl Into<String>, value: &[Rational]) -> Self {
        let parts: Vec<String> = value.iter().map(format_rational).collect();
        self.with(key, format!("({})", parts.join(", ")))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub title: String,
    pub notes: Vec<String>,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), ..Self::default() }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.notes.extend(other.notes);
        self.entries.extend(other.entries);
    }

    /// PASS iff every PASS/FAIL entry passed; expected memberships are ignored.
    pub fn overall(&self) -> Status {
        let failed = self.entries.iter().any(|e| e.status == Status::Fail);
        Status::from_bool(!failed && !self.entries.is_empty())
    }

    pub fn passed(&self) -> bool {
        self.overall() == Status::Pass
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.entry(name).map(|e| e.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 4)?;
        st.serialize_field("title", &self.title)?;
        st.serialize_field("overall", &self.overall())?;
        st.serialize_field("notes", &self.notes)?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}
