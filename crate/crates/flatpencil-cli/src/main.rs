//! `flatpencil`: runs verification scenarios and prints their reports.
//!
//! Exit status is 0 when every checked identity holds, 1 when one fails and
//! 2 when a scenario cannot be read, parsed or set up.

mod output;
mod run;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flatpencil::saito::Catalog;

use output::{human, json_report, verdict, JsonReport, JsonSuite};
use scenario::{Expect, Scenario, ScenarioError};

const BUNDLED: &[(&str, &str)] = &[
    ("saito-I2-3", include_str!("../scenarios/saito-I2-3.scn")),
    ("saito-I2-4", include_str!("../scenarios/saito-I2-4.scn")),
    ("saito-A3", include_str!("../scenarios/saito-A3.scn")),
    ("modified-saito-I2-3", include_str!("../scenarios/modified-saito-I2-3.scn")),
    ("modified-saito-I2-4", include_str!("../scenarios/modified-saito-I2-4.scn")),
    ("modified-saito-I2-5", include_str!("../scenarios/modified-saito-I2-5.scn")),
    ("pencil-check-I2-3-scaled", include_str!("../scenarios/pencil-check-I2-3-scaled.scn")),
    ("perturbed-pencil-I2-3", include_str!("../scenarios/perturbed-pencil-I2-3.scn")),
    ("conformal-I2-3", include_str!("../scenarios/conformal-I2-3.scn")),
    ("conformal-plane-pair", include_str!("../scenarios/conformal-plane-pair.scn")),
    ("sl2-example-n3", include_str!("../scenarios/sl2-example-n3.scn")),
    ("frobenius-A3", include_str!("../scenarios/frobenius-A3.scn")),
    ("wdvv-A3-perturbed", include_str!("../scenarios/wdvv-A3-perturbed.scn")),
];

#[derive(Parser)]
#[command(name = "flatpencil", version, about = "Exact verification of pencils of metrics and Frobenius structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the machine-readable report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for random sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report only this identity (or the identities under it).
    #[arg(long, global = true)]
    only: Option<String>,
    /// Include wall time per identity in the reports.
    #[arg(long, global = true)]
    timings: bool,
    /// Use this catalog file instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file, or a bundled scenario by name.
    Run { file: String },
    /// Print the catalog, or one group with its invariants.
    ListCatalog { group: Option<String> },
    /// Run every bundled scenario.
    Suite,
}

fn expect_str(e: Expect) -> &'static str {
    match e {
        Expect::Pass => "pass",
        Expect::Fail => "fail",
    }
}

fn load_catalog(cli: &Cli) -> Result<Catalog, ScenarioError> {
    match &cli.catalog {
        None => Ok(Catalog::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| ScenarioError::Io(p.display().to_string(), e.to_string()))?;
            Catalog::parse(&text).map_err(|e| ScenarioError::Pipeline(e.to_string()))
        }
    }
}

fn load_scenario(file: &str) -> Result<Scenario, ScenarioError> {
    if let Some((name, text)) = BUNDLED.iter().find(|(n, _)| *n == file) {
        return Scenario::parse(text, name);
    }
    let path = Path::new(file);
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(file.to_string(), e.to_string()))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(file);
    Scenario::parse(&text, stem)
}

fn execute(cli: &Cli, scn: &Scenario, catalog: &Catalog) -> Result<JsonReport, ScenarioError> {
    let mut report = run::run(scn, catalog, cli.seed)?;
    if let Some(only) = &cli.only {
        if !run::filter(&mut report, only) {
            return Err(ScenarioError::NoSuchIdentity(only.clone()));
        }
    }
    Ok(json_report(&scn.name, scn.kind.as_str(), expect_str(scn.expect), cli.seed, &report, cli.timings))
}

fn write_json<T: serde::Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), ScenarioError> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value).expect("reports serialize");
        std::fs::write(p, text + "\n").map_err(|e| ScenarioError::Io(p.display().to_string(), e.to_string()))?;
    }
    Ok(())
}

fn run_one(cli: &Cli, file: &str) -> Result<ExitCode, ScenarioError> {
    let catalog = load_catalog(cli)?;
    let scn = load_scenario(file)?;
    let j = execute(cli, &scn, &catalog)?;
    print!("{}", human(&j));
    write_json(&cli.json, &j)?;
    Ok(if j.verdict == "pass" { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn suite(cli: &Cli) -> Result<ExitCode, ScenarioError> {
    let catalog = load_catalog(cli)?;
    let mut reports = Vec::new();
    let mut errors = 0;
    let mut unexpected = 0;
    for (name, text) in BUNDLED {
        let result = Scenario::parse(text, name).and_then(|scn| execute(cli, &scn, &catalog));
        match result {
            Ok(j) => {
                print!("{}", human(&j));
                let met = j.verdict == j.expect;
                println!("  expectation {}\n", if met { "met" } else { "NOT met" });
                if !met {
                    unexpected += 1;
                }
                reports.push(j);
            }
            Err(ScenarioError::NoSuchIdentity(_)) if cli.only.is_some() => {}
            Err(e) => {
                println!("scenario {name}: error: {e}\n");
                errors += 1;
            }
        }
    }
    if let Some(only) = &cli.only {
        if reports.is_empty() && errors == 0 {
            return Err(ScenarioError::NoSuchIdentity(only.clone()));
        }
    }
    let ok = errors == 0 && unexpected == 0;
    println!("suite: {} scenarios, {} unexpected, {} errors: {}", reports.len() + errors, unexpected, errors, verdict(ok));
    write_json(&cli.json, &JsonSuite { seed: cli.seed, verdict: verdict(ok), scenarios: reports })?;
    Ok(if errors > 0 {
        ExitCode::from(2)
    } else if unexpected > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn list_catalog(cli: &Cli, group: Option<&str>) -> Result<ExitCode, ScenarioError> {
    let catalog = load_catalog(cli)?;
    match group {
        None => print!("{}", catalog.describe()),
        Some(g) => print!("{}", catalog.get(g).map_err(|e| ScenarioError::Pipeline(e.to_string()))?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { file } => run_one(&cli, file),
        Command::ListCatalog { group } => list_catalog(&cli, group.as_deref()),
        Command::Suite => suite(&cli),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
