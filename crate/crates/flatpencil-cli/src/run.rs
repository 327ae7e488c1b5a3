use std::fmt::Display;

use flatpencil::conformal::{proposition_cheie_check, proposition_f_check, proposition_mul_check, weak_quasihomogeneous_check, ScaledPencil};
use flatpencil::frobenius::{check_wdvv, frobenius_from_prepotential, intersection_form, sl2_transform, Prepotential};
use flatpencil::jet::oracle_agreement;
use flatpencil::pencil::{check_auxiliary_identities, is_almost_compatible, is_compatible, is_flat_pencil, MetricPair};
use flatpencil::report::Report;
use flatpencil::saito::{modified_saito_with, regularity_locus, saito_pencil, saito_prepotential, Catalog, ModifiedChecks};
use flatpencil::tensor::{Matrix, MetricField};

use crate::scenario::{Kind, Scenario, ScenarioError};

/// Sample points per metric for the jet oracle.
pub const ORACLE_POINTS: usize = 20;

fn pipeline(e: impl Display) -> ScenarioError {
    ScenarioError::Pipeline(e.to_string())
}

fn oracle(report: &mut Report, label: &str, g: &MetricField, seed: u64) {
    report.absorb(&format!("oracle.{label}"), oracle_agreement(g, ORACLE_POINTS, seed));
}

fn pair(s: &Scenario) -> Result<MetricPair, ScenarioError> {
    let chart = s.chart()?;
    let g = MetricField::contravariant(chart, s.matrix("g")?).map_err(pipeline)?;
    let gt = MetricField::contravariant(chart, s.matrix("gt")?).map_err(pipeline)?;
    Ok(MetricPair::new(g, gt).map_err(pipeline)?.with_rules(s.rules()?))
}

fn prepotential(s: &Scenario, eta: Matrix) -> Result<Prepotential, ScenarioError> {
    let euler = if s.has("euler") { Some(s.vector("euler")?) } else { None };
    Prepotential::new(s.chart()?, s.expr("F")?, eta, euler, s.rules()?).map_err(pipeline)
}

/// Executes the scenario's pipeline; identity outcomes end up in the report,
/// everything else is a scenario error.
pub fn run(s: &Scenario, catalog: &Catalog, seed: u64) -> Result<Report, ScenarioError> {
    let mut r = Report::new(format!("{} ({})", s.name, s.kind));
    r.fact("seed", seed);
    match s.kind {
        Kind::PencilCheck => {
            let mut p = pair(s)?;
            if s.has("omega") {
                let w = s.expr("omega")?;
                r.fact("W", &w);
                p = p.scaled(&w).map_err(pipeline)?;
            }
            if s.check("almost-compatible") {
                r.absorb("almost-compatible", is_almost_compatible(&p));
            }
            if s.check("auxiliary") {
                r.absorb("auxiliary", check_auxiliary_identities(&p));
            }
            if s.check("compatible") {
                r.absorb("compatible", is_compatible(&p));
            }
            if s.check("flat") {
                r.absorb("flat", is_flat_pencil(&p));
            }
            if s.check("oracle") {
                oracle(&mut r, "g", p.g(), seed);
                oracle(&mut r, "g~", p.gt(), seed);
            }
        }
        Kind::Saito => {
            let sp = saito_pencil(&catalog.get(s.text("group")?).map_err(pipeline)?).map_err(pipeline)?;
            r.absorb("", sp.report.clone());
            if s.check("prepotential") {
                let p = saito_prepotential(&sp).map_err(pipeline)?;
                r.fact("F", p.f());
                r.absorb("prepotential", check_wdvv(&p).map_err(pipeline)?);
            }
            if s.check("oracle") {
                oracle(&mut r, "g", sp.pair.g(), seed);
                oracle(&mut r, "g~", sp.pair.gt(), seed);
            }
        }
        Kind::ModifiedSaito => {
            let sp = saito_pencil(&catalog.get(s.text("group")?).map_err(pipeline)?).map_err(pipeline)?;
            let checks = ModifiedChecks {
                curvature: s.check("curvature"),
                compatibility: s.check("compatibility"),
                f_manifold: s.check("f-manifold"),
                ambient: s.check("ambient"),
            };
            let ms = modified_saito_with(&sp, &s.expr("c")?, &s.expr("d")?, checks).map_err(pipeline)?;
            r.absorb("", ms.report.clone());
            if s.check("regularity") {
                let loc = regularity_locus(&ms).map_err(pipeline)?;
                r.absorb("regularity", loc.report);
            }
            if s.check("oracle") {
                oracle(&mut r, "h", ms.pencil.h(), seed);
                oracle(&mut r, "h~", ms.pencil.ht(), seed);
            }
        }
        Kind::Wdvv => {
            let p = prepotential(s, s.matrix("eta")?)?;
            r.absorb("", check_wdvv(&p).map_err(pipeline)?);
        }
        Kind::Frobenius => {
            let p = prepotential(s, s.matrix("eta")?)?;
            let wdvv = check_wdvv(&p).map_err(pipeline)?;
            if !wdvv.passed() {
                r.absorb("", wdvv);
                return Ok(r);
            }
            let fs = frobenius_from_prepotential(&p).map_err(pipeline)?;
            r.absorb("", fs.report.clone());
            if s.check("intersection-form") {
                let ig = intersection_form(&fs).map_err(pipeline)?;
                r.fact("g*", ig.g.upper());
                r.absorb("intersection-form", ig.report);
            }
        }
        Kind::Sl2 => {
            let n = s.chart()?.dim();
            let p = prepotential(s, Matrix::antidiagonal(n))?;
            let t = sl2_transform(&p, &s.expr("a")?, &s.expr("b")?, &s.expr("c")?, &s.expr("d")?).map_err(pipeline)?;
            r.fact("F~", t.prepotential.f());
            r.absorb("", t.report);
        }
        Kind::Conformal => {
            let sp = ScaledPencil::new(pair(s)?, s.expr("omega")?, s.vector("euler")?).map_err(pipeline)?;
            r.fact("W", &sp.omega);
            if s.check("weak-quasihomogeneous") {
                r.absorb("weak-qh", weak_quasihomogeneous_check(&sp));
            }
            if s.check("cheie") {
                r.absorb("cheie", proposition_cheie_check(&sp).map_err(pipeline)?);
            }
            if s.check("mul") {
                r.absorb("mul", proposition_mul_check(&sp).map_err(pipeline)?);
            }
            if s.check("equivalence") {
                r.absorb("f", proposition_f_check(&sp).map_err(pipeline)?);
            }
            if s.check("oracle") {
                oracle(&mut r, "h", sp.h(), seed);
                oracle(&mut r, "h~", sp.ht(), seed);
            }
        }
    }
    Ok(r)
}

/// Keeps the records named `only`, or those under it (`only.x`), or ending
/// in it (`x.only`).
pub fn filter(report: &mut Report, only: &str) -> bool {
    let under = format!("{only}.");
    let tail = format!(".{only}");
    report.records.retain(|rec| rec.name == only || rec.name.starts_with(&under) || rec.name.ends_with(&tail));
    !report.records.is_empty()
}
