use flatpencil::report::Report;
use serde::Serialize;

#[derive(Serialize)]
pub struct JsonFact {
    pub name: String,
    pub value: String,
}

#[derive(Serialize)]
pub struct JsonRecord {
    pub name: String,
    pub anchor: String,
    pub status: &'static str,
    /// Empty when the identity holds.
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Serialize)]
pub struct JsonReport {
    pub scenario: String,
    pub kind: String,
    pub expect: &'static str,
    pub seed: u64,
    pub verdict: &'static str,
    pub facts: Vec<JsonFact>,
    pub records: Vec<JsonRecord>,
}

#[derive(Serialize)]
pub struct JsonSuite {
    pub seed: u64,
    pub verdict: &'static str,
    pub scenarios: Vec<JsonReport>,
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn json_report(scenario: &str, kind: &str, expect: &'static str, seed: u64, report: &Report, timings: bool) -> JsonReport {
    JsonReport {
        scenario: scenario.to_string(),
        kind: kind.to_string(),
        expect,
        seed,
        verdict: verdict(report.passed()),
        facts: report.facts.iter().map(|f| JsonFact { name: f.name.clone(), value: f.value.clone() }).collect(),
        records: report
            .records
            .iter()
            .map(|r| JsonRecord {
                name: r.name.clone(),
                anchor: r.anchor.clone(),
                status: r.status.as_str(),
                witness: r.witness.clone().unwrap_or_default(),
                elapsed_ms: timings.then(|| r.elapsed.as_millis()),
            })
            .collect(),
    }
}

/// The human rendering; it lists the same facts and records as the JSON.
pub fn human(j: &JsonReport) -> String {
    let mut out = format!("scenario {} ({}), expect {}, seed {}\n", j.scenario, j.kind, j.expect, j.seed);
    for f in &j.facts {
        out.push_str(&format!("  {} = {}\n", f.name, f.value));
    }
    for r in &j.records {
        out.push_str(&format!("  [{}] {} ({})", r.status, r.name, r.anchor));
        if !r.witness.is_empty() {
            out.push_str(&format!(": {}", r.witness));
        }
        if let Some(ms) = r.elapsed_ms {
            out.push_str(&format!(" [{ms} ms]"));
        }
        out.push('\n');
    }
    out.push_str(&format!("  verdict: {}\n", j.verdict));
    out
}
