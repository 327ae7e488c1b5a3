use std::collections::BTreeMap;
use std::fmt;

use super::SaitoError;
use crate::expr::{Poly, Rational, RationalExpr, Symbols};

const BUILTIN: &str = include_str!("../../catalog/coxeter.catalog");

/// A Coxeter group given by a basis of invariant polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterDatum {
    pub name: String,
    pub coords: Vec<String>,
    /// `d_1 > d_2 >= ... >= d_n = 2`; `d_1` is the Coxeter number.
    pub degrees: Vec<u32>,
    pub invariants: Vec<RationalExpr>,
}

impl CoxeterDatum {
    /// Validates degrees, homogeneity, the duality `d_i + d_(n+1-i) = d_1 + 2`
    /// and `t^n = sum (x^i)^2`.
    pub fn new(name: &str, coords: Vec<String>, degrees: Vec<u32>, invariants: Vec<RationalExpr>) -> Result<CoxeterDatum, SaitoError> {
        let bad = |m: String| Err(SaitoError::InvalidDatum(name.to_string(), m));
        let n = coords.len();
        if n < 2 {
            return bad("rank must be at least 2".into());
        }
        if degrees.len() != n || invariants.len() != n {
            return bad(format!("rank {n} needs {n} degrees and {n} invariants"));
        }
        if degrees[n - 1] != 2 || degrees[0] <= degrees[1] || degrees.windows(2).any(|w| w[0] < w[1]) {
            return bad("degrees must satisfy d_1 > d_2 >= ... >= d_n = 2".into());
        }
        for i in 0..n {
            if degrees[i] + degrees[n - 1 - i] != degrees[0] + 2 {
                return bad(format!("d_{} + d_{} != d_1 + 2", i + 1, n - i));
            }
        }
        for (i, inv) in invariants.iter().enumerate() {
            if !inv.is_polynomial() || !inv.free_vars().iter().all(|v| coords.iter().any(|c| c == &**v)) {
                return bad(format!("invariant {} is not a polynomial in the coordinates", i + 1));
            }
            if !homogeneous(inv.numer(), degrees[i]) {
                return bad(format!("invariant {} is not homogeneous of degree {}", i + 1, degrees[i]));
            }
        }
        let norm: RationalExpr = coords.iter().map(|c| RationalExpr::var(c).square()).sum();
        if invariants[n - 1] != norm {
            return bad("the last invariant must be the squared norm".into());
        }
        Ok(CoxeterDatum { name: name.to_string(), coords, degrees, invariants })
    }

    /// `I2(m)`: `t^1 = Re((x + i y)^m)`, `t^2 = x^2 + y^2`.
    pub fn dihedral(m: u32) -> Result<CoxeterDatum, SaitoError> {
        if m < 3 {
            return Err(SaitoError::InvalidDatum(format!("I2({m})"), "m must be at least 3".into()));
        }
        let (x, y) = (Poly::var("x"), Poly::var("y"));
        let mut re = Poly::zero();
        for k in (0..=m).step_by(2) {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            let coeff = Rational::from_integer(binomial(m, k) * sign);
            re = re.add(&x.pow(m - k).mul(&y.pow(k)).scale(&coeff));
        }
        let norm = x.pow(2).add(&y.pow(2));
        CoxeterDatum::new(
            &format!("I2({m})"),
            vec!["x".into(), "y".into()],
            vec![m, 2],
            vec![RationalExpr::from_poly(re), RationalExpr::from_poly(norm)],
        )
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coxeter_number(&self) -> u32 {
        self.degrees[0]
    }
}

impl fmt::Display for CoxeterDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degrees: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        writeln!(f, "{} (rank {}, degrees {})", self.name, self.rank(), degrees.join(" "))?;
        for (i, p) in self.invariants.iter().enumerate() {
            writeln!(f, "  t{} = {}", i + 1, p)?;
        }
        Ok(())
    }
}

fn homogeneous(p: &Poly, deg: u32) -> bool {
    p.terms().iter().all(|(e, _)| e.iter().sum::<u32>() == deg)
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

#[derive(Debug, Clone, PartialEq)]
enum Entry {
    Group(CoxeterDatum),
    Dihedral { coords: Vec<String> },
}

/// Named Coxeter data, read from the catalog format:
///
/// ```text
/// [group.A2]
/// rank = 2
/// coords = x y
/// degrees = 3 2
/// invariants = 3*x^2*y - y^3; x^2 + y^2
///
/// [family.I2]
/// coords = x y
/// generator = dihedral
/// ```
///
/// A family entry `F` provides the groups `F(m)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    entries: BTreeMap<String, Entry>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN).expect("bundled catalog is valid")
    }

    pub fn parse(text: &str) -> Result<Catalog, SaitoError> {
        let mut catalog = Catalog::default();
        let mut current: Option<(usize, String, bool, BTreeMap<String, String>)> = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if let Some(c) = current.take() {
                    catalog.finish(c)?;
                }
                let (family, name) = match header.split_once('.') {
                    Some(("group", n)) => (false, n),
                    Some(("family", n)) => (true, n),
                    _ => return Err(SaitoError::Catalog(no + 1, format!("unknown section `{header}`"))),
                };
                current = Some((no + 1, name.trim().to_string(), family, BTreeMap::new()));
                continue;
            }
            let Some((_, _, _, fields)) = current.as_mut() else {
                return Err(SaitoError::Catalog(no + 1, "field outside a section".into()));
            };
            let (k, v) = line.split_once('=').ok_or_else(|| SaitoError::Catalog(no + 1, "expected `key = value`".into()))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        if let Some(c) = current.take() {
            catalog.finish(c)?;
        }
        Ok(catalog)
    }

    fn finish(&mut self, (line, name, family, fields): (usize, String, bool, BTreeMap<String, String>)) -> Result<(), SaitoError> {
        let field = |k: &str| fields.get(k).ok_or_else(|| SaitoError::Catalog(line, format!("`{name}` lacks `{k}`")));
        let coords: Vec<String> = field("coords")?.split_whitespace().map(str::to_string).collect();
        let entry = if family {
            if field("generator")? != "dihedral" || coords.len() != 2 {
                return Err(SaitoError::Catalog(line, format!("`{name}`: only two-dimensional dihedral families are generated")));
            }
            Entry::Dihedral { coords }
        } else {
            let rank: usize = field("rank")?.parse().map_err(|_| SaitoError::Catalog(line, "rank is not an integer".into()))?;
            if rank != coords.len() {
                return Err(SaitoError::Catalog(line, format!("`{name}`: rank {rank} but {} coordinates", coords.len())));
            }
            let degrees = field("degrees")?
                .split_whitespace()
                .map(|d| d.parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| SaitoError::Catalog(line, "degrees are not integers".into()))?;
            let symbols = Symbols::with_vars(&coords);
            let invariants = field("invariants")?
                .split(';')
                .map(|s| symbols.parse(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| SaitoError::Catalog(line, format!("`{name}`: {e}")))?;
            Entry::Group(CoxeterDatum::new(&name, coords, degrees, invariants)?)
        };
        if self.entries.insert(name.clone(), entry).is_some() {
            return Err(SaitoError::Catalog(line, format!("`{name}` defined twice")));
        }
        Ok(())
    }

    /// Entry names; families appear as `I2(m)`.
    pub fn names(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(k, e)| match e {
                Entry::Group(_) => k.clone(),
                Entry::Dihedral { .. } => format!("{k}(m)"),
            })
            .collect()
    }

    /// Looks up `A3`, or a family member such as `I2(5)`.
    pub fn get(&self, name: &str) -> Result<CoxeterDatum, SaitoError> {
        let unknown = || SaitoError::UnknownGroup(name.to_string(), self.names().join(", "));
        if let Some(Entry::Group(cd)) = self.entries.get(name) {
            return Ok(cd.clone());
        }
        let (family, arg) = name.strip_suffix(')').and_then(|s| s.split_once('(')).ok_or_else(unknown)?;
        let Some(Entry::Dihedral { coords }) = self.entries.get(family) else {
            return Err(unknown());
        };
        let m: u32 = arg.trim().parse().map_err(|_| unknown())?;
        let mut cd = CoxeterDatum::dihedral(m)?;
        if coords != &cd.coords {
            let map: BTreeMap<String, RationalExpr> =
                cd.coords.iter().cloned().zip(coords.iter().map(|c| RationalExpr::var(c))).collect();
            cd.invariants = cd.invariants.iter().map(|p| p.substitute(&map)).collect::<Result<_, _>>()?;
            cd.coords = coords.clone();
        }
        cd.name = format!("{family}({m})");
        Ok(cd)
    }

    /// Human-readable listing; families are shown with their generator.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (k, e) in &self.entries {
            match e {
                Entry::Group(cd) => out.push_str(&cd.to_string()),
                Entry::Dihedral { coords } => {
                    out.push_str(&format!("{k}(m) (rank 2, degrees m 2, m >= 3)\n"));
                    out.push_str(&format!("  t1 = Re(({} + i {})^m)\n", coords[0], coords[1]));
                    out.push_str(&format!("  t2 = {}^2 + {}^2\n", coords[0], coords[1]));
                }
            }
        }
        out
    }
}
