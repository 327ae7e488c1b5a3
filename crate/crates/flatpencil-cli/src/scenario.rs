//! Scenario files.
//!
//! ```text
//! # comment
//! kind = conformal
//! name = conformal-I2-3
//! symbols = c d
//! expect = pass
//!
//! [chart]
//! coords = t1 t2
//!
//! [functions]
//! f = t2 t3
//!
//! [fields]
//! g = 9*t2^2, 6*t1; 6*t1, 4*t2
//! gt = 0, 6; 6, 0
//! euler = 3*t1, 2*t2
//! omega = 1/(c*t2 + d)
//!
//! [params]
//! group = I2(3)
//!
//! [checks]
//! oracle = on
//! ```
//!
//! Matrices list rows separated by `;` and entries by `,`; vectors are a
//! single row. `rules` holds rewrite rules separated by `;`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use flatpencil::expr::{RationalExpr, RewriteRule, RuleSet, Symbols};
use flatpencil::tensor::{Chart, Matrix, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("unknown scenario kind `{0}`")]
    UnknownKind(String),
    #[error("{kind} scenario needs `{key}` in [{section}]")]
    Missing { kind: Kind, section: &'static str, key: String },
    #[error("{kind} scenario does not use `{key}` in [{section}]")]
    Unexpected { kind: Kind, section: &'static str, key: String },
    #[error("line {line}: `{key}`: {message}")]
    Invalid { line: usize, key: String, message: String },
    #[error("{0}")]
    Pipeline(String),
    #[error("no identity named `{0}`")]
    NoSuchIdentity(String),
    #[error("cannot read {0}: {1}")]
    Io(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    PencilCheck,
    Saito,
    ModifiedSaito,
    Wdvv,
    Sl2,
    Frobenius,
    Conformal,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::PencilCheck, Kind::Saito, Kind::ModifiedSaito, Kind::Wdvv, Kind::Sl2, Kind::Frobenius, Kind::Conformal];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::PencilCheck => "pencil-check",
            Kind::Saito => "saito",
            Kind::ModifiedSaito => "modified-saito",
            Kind::Wdvv => "wdvv",
            Kind::Sl2 => "sl2",
            Kind::Frobenius => "frobenius",
            Kind::Conformal => "conformal",
        }
    }

    fn needs_chart(self) -> bool {
        !matches!(self, Kind::Saito | Kind::ModifiedSaito)
    }

    /// Required and optional keys of `[fields]`.
    fn fields(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Kind::PencilCheck => (&["g", "gt"], &["omega", "rules"]),
            Kind::Conformal => (&["g", "gt", "euler", "omega"], &["rules"]),
            Kind::Wdvv => (&["F", "eta"], &["rules"]),
            Kind::Frobenius => (&["F", "eta"], &["euler", "rules"]),
            Kind::Sl2 => (&["F"], &["rules"]),
            Kind::Saito | Kind::ModifiedSaito => (&[], &[]),
        }
    }

    fn params(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Kind::Saito => (&["group"], &[]),
            Kind::ModifiedSaito => (&["group", "c", "d"], &[]),
            Kind::Sl2 => (&["a", "b", "c", "d"], &[]),
            _ => (&[], &[]),
        }
    }

    /// Identity-check toggles with their defaults.
    pub fn checks(self) -> &'static [(&'static str, bool)] {
        match self {
            Kind::PencilCheck => &[("almost-compatible", false), ("auxiliary", false), ("compatible", true), ("flat", true), ("oracle", false)],
            Kind::Saito => &[("prepotential", false), ("oracle", false)],
            Kind::ModifiedSaito => &[
                ("curvature", true),
                ("compatibility", true),
                ("f-manifold", true),
                ("ambient", true),
                ("regularity", true),
                ("oracle", false),
            ],
            Kind::Wdvv => &[],
            Kind::Frobenius => &[("intersection-form", false)],
            Kind::Sl2 => &[],
            Kind::Conformal => &[("weak-quasihomogeneous", true), ("cheie", true), ("mul", true), ("equivalence", true), ("oracle", false)],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = ScenarioError;
    fn from_str(s: &str) -> Result<Kind, ScenarioError> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| ScenarioError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail,
}

/// A `key = value` entry with the line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub value: String,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    pub expect: Expect,
    pub chart: Option<Chart>,
    pub symbols: Symbols,
    fields: BTreeMap<String, Entry>,
    params: BTreeMap<String, Entry>,
    checks: BTreeMap<String, bool>,
}

/// Splits at `sep` outside parentheses and brackets.
pub fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

type Section = BTreeMap<String, Entry>;

fn sections(text: &str) -> Result<BTreeMap<String, Section>, ScenarioError> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current = String::new();
    out.insert(current.clone(), Section::new());
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = h.trim().to_string();
            if !["chart", "functions", "fields", "params", "checks"].contains(&current.as_str()) {
                return Err(ScenarioError::Syntax(no + 1, format!("unknown section [{current}]")));
            }
            if out.contains_key(&current) {
                return Err(ScenarioError::Syntax(no + 1, format!("section [{current}] appears twice")));
            }
            out.insert(current.clone(), Section::new());
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ScenarioError::Syntax(no + 1, "expected `key = value`".into()))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ScenarioError::Syntax(no + 1, "empty key or value".into()));
        }
        let section = out.get_mut(&current).expect("section exists");
        if section.insert(k.to_string(), Entry { line: no + 1, value: v.to_string() }).is_some() {
            return Err(ScenarioError::Syntax(no + 1, format!("`{k}` set twice")));
        }
    }
    Ok(out)
}

impl Scenario {
    /// Parses and validates a scenario; `default_name` is used when the file
    /// has no `name`.
    pub fn parse(text: &str, default_name: &str) -> Result<Scenario, ScenarioError> {
        let mut secs = sections(text)?;
        let top = secs.remove("").unwrap_or_default();
        for k in top.keys() {
            if !["kind", "name", "symbols", "expect", "description"].contains(&k.as_str()) {
                return Err(ScenarioError::Invalid { line: top[k].line, key: k.clone(), message: "unknown top-level key".into() });
            }
        }
        let kind: Kind = top.get("kind").ok_or_else(|| ScenarioError::Syntax(1, "missing `kind`".into()))?.value.parse()?;
        let name = top.get("name").map_or_else(|| default_name.to_string(), |e| e.value.clone());
        let expect = match top.get("expect").map(|e| (e.line, e.value.as_str())) {
            None | Some((_, "pass")) => Expect::Pass,
            Some((_, "fail")) => Expect::Fail,
            Some((line, v)) => return Err(ScenarioError::Invalid { line, key: "expect".into(), message: format!("`{v}` is not pass or fail") }),
        };
        let params_declared: Vec<String> = top.get("symbols").map(|e| e.value.split_whitespace().map(str::to_string).collect()).unwrap_or_default();

        let chart_sec = secs.remove("chart").unwrap_or_default();
        let chart = match (kind.needs_chart(), chart_sec.get("coords")) {
            (true, Some(e)) => {
                let coords: Vec<&str> = e.value.split_whitespace().collect();
                let name = chart_sec.get("name").map_or("chart", |n| n.value.as_str());
                Some(Chart::new(name, &coords).map_err(|err| ScenarioError::Invalid { line: e.line, key: "coords".into(), message: err.to_string() })?)
            }
            (true, None) => return Err(ScenarioError::Missing { kind, section: "chart", key: "coords".into() }),
            (false, Some(_)) => return Err(ScenarioError::Unexpected { kind, section: "chart", key: "coords".into() }),
            (false, None) => None,
        };

        let mut symbols = Symbols::with_vars(&params_declared);
        if let Some(c) = &chart {
            for v in c.coords() {
                symbols.declare_var(v);
            }
        }
        for (f, e) in secs.remove("functions").unwrap_or_default() {
            let args: Vec<&str> = e.value.split_whitespace().collect();
            symbols.declare_function(&f, &args);
        }

        let fields = secs.remove("fields").unwrap_or_default();
        let params = secs.remove("params").unwrap_or_default();
        for (section, map, (req, opt)) in [("fields", &fields, kind.fields()), ("params", &params, kind.params())] {
            if let Some(key) = req.iter().find(|k| !map.contains_key(**k)) {
                return Err(ScenarioError::Missing { kind, section, key: key.to_string() });
            }
            if let Some(key) = map.keys().find(|k| !req.contains(&k.as_str()) && !opt.contains(&k.as_str())) {
                return Err(ScenarioError::Unexpected { kind, section, key: key.clone() });
            }
        }

        let mut checks: BTreeMap<String, bool> = kind.checks().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, e) in secs.remove("checks").unwrap_or_default() {
            let Some(slot) = checks.get_mut(&k) else {
                return Err(ScenarioError::Unexpected { kind, section: "checks", key: k });
            };
            *slot = match e.value.as_str() {
                "on" => true,
                "off" => false,
                v => return Err(ScenarioError::Invalid { line: e.line, key: k, message: format!("`{v}` is not on or off") }),
            };
        }

        let scn = Scenario { name, kind, expect, chart, symbols, fields, params, checks };
        scn.validate()?;
        Ok(scn)
    }

    /// Parses every expression once so that undeclared symbols are reported
    /// before any computation starts.
    fn validate(&self) -> Result<(), ScenarioError> {
        for (k, e) in &self.fields {
            match k.as_str() {
                "g" | "gt" | "eta" => {
                    self.matrix(k)?;
                }
                "euler" => {
                    self.vector(k)?;
                }
                "rules" => {
                    self.rules()?;
                }
                _ => {
                    self.parse_expr(k, e)?;
                }
            }
        }
        for (k, e) in &self.params {
            if k != "group" {
                self.parse_expr(k, e)?;
            }
        }
        Ok(())
    }

    fn invalid(e: &Entry, key: &str, message: impl fmt::Display) -> ScenarioError {
        ScenarioError::Invalid { line: e.line, key: key.to_string(), message: message.to_string() }
    }

    fn parse_expr(&self, key: &str, e: &Entry) -> Result<RationalExpr, ScenarioError> {
        self.symbols.parse(&e.value).map_err(|err| Scenario::invalid(e, key, err))
    }

    fn entry(&self, key: &str) -> Result<&Entry, ScenarioError> {
        self.fields
            .get(key)
            .or_else(|| self.params.get(key))
            .ok_or_else(|| ScenarioError::Missing { kind: self.kind, section: "fields", key: key.to_string() })
    }

    pub fn has(&self, key: &str) -> bool {
        self.fields.contains_key(key) || self.params.contains_key(key)
    }

    pub fn expr(&self, key: &str) -> Result<RationalExpr, ScenarioError> {
        let e = self.entry(key)?;
        self.parse_expr(key, e)
    }

    pub fn text(&self, key: &str) -> Result<&str, ScenarioError> {
        Ok(&self.entry(key)?.value)
    }

    pub fn chart(&self) -> Result<&Chart, ScenarioError> {
        self.chart.as_ref().ok_or_else(|| ScenarioError::Missing { kind: self.kind, section: "chart", key: "coords".into() })
    }

    pub fn matrix(&self, key: &str) -> Result<Matrix, ScenarioError> {
        let e = self.entry(key)?;
        let n = self.chart()?.dim();
        let rows: Vec<Vec<RationalExpr>> = split_top(&e.value, ';')
            .into_iter()
            .map(|row| split_top(row, ',').into_iter().map(|x| self.symbols.parse(x).map_err(|err| Scenario::invalid(e, key, err))).collect())
            .collect::<Result<_, _>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Scenario::invalid(e, key, format!("expected a {n} x {n} matrix")));
        }
        Ok(Matrix::from_rows(rows))
    }

    pub fn vector(&self, key: &str) -> Result<VectorField, ScenarioError> {
        let e = self.entry(key)?;
        let chart = self.chart()?;
        let comps: Vec<RationalExpr> =
            split_top(&e.value, ',').into_iter().map(|x| self.symbols.parse(x).map_err(|err| Scenario::invalid(e, key, err))).collect::<Result<_, _>>()?;
        VectorField::new(chart, comps).map_err(|err| Scenario::invalid(e, key, err))
    }

    pub fn rules(&self) -> Result<RuleSet, ScenarioError> {
        let Some(e) = self.fields.get("rules") else {
            return Ok(RuleSet::empty());
        };
        let rules = split_top(&e.value, ';')
            .into_iter()
            .map(|r| RewriteRule::parse(r, &self.symbols).map_err(|err| Scenario::invalid(e, "rules", err)))
            .collect::<Result<Vec<_>, _>>()?;
        RuleSet::new(rules).map_err(|err| Scenario::invalid(e, "rules", err))
    }

    pub fn check(&self, name: &str) -> bool {
        self.checks.get(name).copied().unwrap_or(false)
    }
}
