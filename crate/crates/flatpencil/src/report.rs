//! Structured verification reports.
//!
//! Every identity check produces a [`CheckRecord`]; failures carry the first
//! non-vanishing component as a witness.

use std::fmt;
use std::time::{Duration, Instant};

use crate::expr::{RationalExpr, RuleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one identity check: `Err` holds the witness.
pub type Outcome = Result<(), String>;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    /// Human label of the statement being checked.
    pub anchor: String,
    pub status: Status,
    pub witness: Option<String>,
    pub elapsed: Duration,
}

/// A computed quantity worth showing next to the checks, such as a
/// curvature value or a rescaling factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub records: Vec<CheckRecord>,
    pub facts: Vec<Fact>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), ..Report::default() }
    }

    /// Runs `f`, timing it, and records the outcome. Returns whether it
    /// passed.
    pub fn check(&mut self, name: &str, anchor: &str, f: impl FnOnce() -> Outcome) -> bool {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (status, witness) = match outcome {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        self.records.push(CheckRecord { name: name.into(), anchor: anchor.into(), status, witness, elapsed });
        status == Status::Pass
    }

    /// Records a check whose outcome is already known.
    pub fn record(&mut self, name: &str, anchor: &str, outcome: Outcome) -> bool {
        self.check(name, anchor, || outcome)
    }

    pub fn skip(&mut self, name: &str, anchor: &str, reason: &str) {
        self.records.push(CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            witness: Some(reason.into()),
            elapsed: Duration::ZERO,
        });
    }

    pub fn fact(&mut self, name: &str, value: impl fmt::Display) {
        self.facts.push(Fact { name: name.into(), value: value.to_string() });
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|r| r.status)
    }

    pub fn fact_value(&self, name: &str) -> Option<&str> {
        self.facts.iter().find(|f| f.name == name).map(|f| f.value.as_str())
    }

    /// True when every non-skipped record passed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    /// Appends another report's records and facts, prefixing names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        let name = |n: String| if prefix.is_empty() { n } else { format!("{prefix}.{n}") };
        for mut r in other.records {
            r.name = name(r.name);
            self.records.push(r);
        }
        for mut f in other.facts {
            f.name = name(f.name);
            self.facts.push(f);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for fact in &self.facts {
            writeln!(f, "  {} = {}", fact.name, fact.value)?;
        }
        for r in &self.records {
            write!(f, "  [{}] {} ({})", r.status, r.name, r.anchor)?;
            if let Some(w) = &r.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        write!(f, "  verdict: {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Passes when every expression is identically zero; otherwise the first
/// nonzero one, with its label, is the witness.
pub fn all_zero<L: fmt::Display>(items: impl IntoIterator<Item = (L, RationalExpr)>) -> Outcome {
    for (label, e) in items {
        if !e.is_zero() {
            return Err(format!("{label} = {e}"));
        }
    }
    Ok(())
}

/// [`all_zero`] after reducing each expression with `rules`.
pub fn all_zero_mod<L: fmt::Display>(items: impl IntoIterator<Item = (L, RationalExpr)>, rules: &RuleSet) -> Outcome {
    if rules.is_empty() {
        return all_zero(items);
    }
    all_zero(items.into_iter().map(|(l, e)| {
        let r = rules.apply(&e).unwrap_or(e);
        (l, r)
    }))
}

pub fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}
