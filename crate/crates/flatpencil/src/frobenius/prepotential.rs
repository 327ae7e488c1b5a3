use std::sync::OnceLock;

use super::FrobeniusError;
use crate::expr::{RationalExpr, RuleSet};
use crate::report::{all_zero_mod, Report};
use crate::tensor::{Chart, Matrix, MetricField, VectorField};

/// A function `F` of flat coordinates with its constant metric `eta`,
/// optional Euler field and the relations satisfied by opaque functions in
/// `F`.
#[derive(Clone)]
pub struct Prepotential {
    chart: Chart,
    f: RationalExpr,
    eta: MetricField,
    euler: Option<VectorField>,
    rules: RuleSet,
    third: OnceLock<Vec<RationalExpr>>,
}

impl std::fmt::Debug for Prepotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Prepotential").field("f", &self.f.to_string()).field("chart", &self.chart).finish()
    }
}

impl Prepotential {
    /// `eta` holds the covariant components `<d_i, d_j>`.
    pub fn new(chart: &Chart, f: RationalExpr, eta: Matrix, euler: Option<VectorField>, rules: RuleSet) -> Result<Prepotential, FrobeniusError> {
        let eta = MetricField::covariant(chart, eta)?;
        if !eta.is_constant() {
            return Err(FrobeniusError::NonConstantEta);
        }
        if let Some(e) = &euler {
            chart.same(e.chart())?;
        }
        Ok(Prepotential { chart: chart.clone(), f, eta, euler, rules, third: OnceLock::new() })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn f(&self) -> &RationalExpr {
        &self.f
    }

    pub fn eta(&self) -> &MetricField {
        &self.eta
    }

    pub fn euler(&self) -> Option<&VectorField> {
        self.euler.as_ref()
    }

    pub fn with_euler(mut self, e: VectorField) -> Prepotential {
        self.euler = Some(e);
        self
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn reduce(&self, e: &RationalExpr) -> RationalExpr {
        self.rules.apply(e).unwrap_or_else(|_| e.clone())
    }

    /// `d^3 F / dt^i dt^j dt^k`, reduced by the rules.
    pub fn third(&self, i: usize, j: usize, k: usize) -> &RationalExpr {
        let n = self.dim();
        let all = self.third.get_or_init(|| {
            let mut out = vec![RationalExpr::zero(); n * n * n];
            for a in 0..n {
                let fa = self.f.diff(self.chart.coord(a));
                for b in a..n {
                    let fab = fa.diff(self.chart.coord(b));
                    for c in b..n {
                        let v = self.reduce(&fab.diff(self.chart.coord(c)));
                        for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                            out[(x * n + y) * n + z] = v.clone();
                        }
                    }
                }
            }
            out
        });
        &all[(i * n + j) * n + k]
    }

    /// `d^3 F / dt^1 dt^i dt^j = eta_ij`.
    pub fn eta_normalization(&self) -> Result<(), FrobeniusError> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let found = self.third(0, i, j);
                let expected = self.eta.lower().get(i, j);
                if !self.reduce(&found.sub(expected)).is_zero() {
                    return Err(FrobeniusError::EtaMismatch { i: i + 1, j: j + 1, found: found.to_string(), expected: expected.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// The associativity equations
/// `F_ijk eta^kl F_lmn = F_njk eta^kl F_lmi` for all index choices, after
/// reduction by the prepotential's rules.
pub fn check_wdvv(p: &Prepotential) -> Result<Report, FrobeniusError> {
    p.eta_normalization()?;
    let n = p.dim();
    let up = p.eta().upper();
    let mut r = Report::new("WDVV equations");
    r.record("eta-normalization", "d^3F/dt1 dti dtj = eta_ij", Ok(()));
    r.check("wdvv", "WDVV associativity equations", || {
        // A[i][j][l] = F_ijk eta^kl
        let a: Vec<RationalExpr> = (0..n * n * n)
            .map(|x| {
                let (i, j, l) = (x / (n * n), (x / n) % n, x % n);
                (0..n).filter(|&k| !up.get(k, l).is_zero()).map(|k| p.third(i, j, k).mul(up.get(k, l))).sum()
            })
            .collect();
        let side = |i: usize, j: usize, m: usize, q: usize| -> RationalExpr {
            (0..n).map(|l| a[(i * n + j) * n + l].mul(p.third(l, m, q))).sum()
        };
        let mut items = Vec::new();
        for i in 0..n {
            for q in i + 1..n {
                for j in 0..n {
                    for m in 0..n {
                        let v = side(i, j, m, q).sub(&side(q, j, m, i));
                        items.push((format!("(i,j,m,n) = ({},{},{},{})", i + 1, j + 1, m + 1, q + 1), v));
                    }
                }
            }
        }
        all_zero_mod(items, p.rules())
    });
    Ok(r)
}
