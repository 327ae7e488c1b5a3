use std::fmt;

use crate::expr::{RationalExpr, RuleSet};
use crate::report::{all_zero_mod, Outcome};
use crate::tensor::{Chart, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Tangent,
    Cotangent,
}

/// Structure constants of a bilinear product on coordinate (co)frames:
/// `e_a * e_b = sum_j c[a][b][j] e_j`.
#[derive(Clone, PartialEq)]
pub struct MultiplicationTable {
    chart: Chart,
    space: Space,
    c: Vec<RationalExpr>,
    rules: RuleSet,
}

impl MultiplicationTable {
    pub fn from_fn(chart: &Chart, space: Space, mut f: impl FnMut(usize, usize, usize) -> RationalExpr) -> MultiplicationTable {
        let n = chart.dim();
        let mut c = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for j in 0..n {
                    c.push(f(a, b, j));
                }
            }
        }
        MultiplicationTable { chart: chart.clone(), space, c, rules: RuleSet::empty() }
    }

    /// Relations satisfied by opaque functions in the constants, applied
    /// before every zero test.
    pub fn with_rules(mut self, rules: RuleSet) -> MultiplicationTable {
        self.rules = rules;
        self
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn get(&self, a: usize, b: usize, j: usize) -> &RationalExpr {
        let n = self.dim();
        &self.c[(a * n + b) * n + j]
    }

    pub fn constants(&self) -> &[RationalExpr] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// `u * v` for arbitrary component vectors.
    pub fn product(&self, u: &[RationalExpr], v: &[RationalExpr]) -> Vec<RationalExpr> {
        let n = self.dim();
        let mut out = vec![RationalExpr::zero(); n];
        for a in 0..n {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if v[b].is_zero() {
                    continue;
                }
                let w = u[a].mul(&v[b]);
                for (j, o) in out.iter_mut().enumerate() {
                    let c = self.get(a, b, j);
                    if !c.is_zero() {
                        *o = o.add(&c.mul(&w));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `v -> u * v`, column `b` holding `u * e_b`.
    pub fn left_multiplication(&self, u: &[RationalExpr]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            let col = self.product(u, &unit(n, b));
            for (j, x) in col.into_iter().enumerate() {
                m.set(j, b, x);
            }
        }
        m
    }

    pub fn commutativity(&self) -> Outcome {
        let n = self.dim();
        let mut items = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for j in 0..n {
                    items.push((format!("c[{0}][{1}][{2}] - c[{1}][{0}][{2}]", a + 1, b + 1, j + 1), self.get(a, b, j).sub(self.get(b, a, j))));
                }
            }
        }
        all_zero_mod(items, &self.rules)
    }

    /// `(e_a * e_b) * e_c = e_a * (e_b * e_c)`.
    pub fn associativity(&self) -> Outcome {
        let n = self.dim();
        let mut items = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.product(&self.product(&unit(n, a), &unit(n, b)), &unit(n, c));
                    let right = self.product(&unit(n, a), &self.product(&unit(n, b), &unit(n, c)));
                    for j in 0..n {
                        items.push((format!("associator({},{},{})_{}", a + 1, b + 1, c + 1, j + 1), left[j].sub(&right[j])));
                    }
                }
            }
        }
        all_zero_mod(items, &self.rules)
    }

    /// `(e_a * e_b) * e_c = (e_a * e_c) * e_b`.
    pub fn exchange_symmetry(&self) -> Outcome {
        let n = self.dim();
        let mut items = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in b + 1..n {
                    let left = self.product(&self.product(&unit(n, a), &unit(n, b)), &unit(n, c));
                    let right = self.product(&self.product(&unit(n, a), &unit(n, c)), &unit(n, b));
                    for j in 0..n {
                        items.push((format!("(e{0}*e{1})*e{2} - (e{0}*e{2})*e{1}, slot {3}", a + 1, b + 1, c + 1, j + 1), left[j].sub(&right[j])));
                    }
                }
            }
        }
        all_zero_mod(items, &self.rules)
    }

    /// `u * e_b = e_b` for every `b`.
    pub fn identity_element(&self, u: &[RationalExpr]) -> Outcome {
        let n = self.dim();
        let m = self.left_multiplication(u);
        all_zero_mod((0..n).flat_map(|j| (0..n).map(move |b| (j, b))).map(|(j, b)| {
            let id = if j == b { RationalExpr::one() } else { RationalExpr::zero() };
            (format!("(u*e{})_{}", b + 1, j + 1), m.get(j, b).sub(&id))
        }), &self.rules)
    }

    /// `B(e_a * e_b, e_c) = B(e_a, e_b * e_c)` for a bilinear form `B`.
    pub fn invariance(&self, form: &Matrix) -> Outcome {
        let n = self.dim();
        let mut items = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = self.product(&unit(n, a), &unit(n, b));
                    let bc = self.product(&unit(n, b), &unit(n, c));
                    let left: RationalExpr = (0..n).filter(|&j| !ab[j].is_zero()).map(|j| ab[j].mul(form.get(j, c))).sum();
                    let right: RationalExpr = (0..n).filter(|&j| !bc[j].is_zero()).map(|j| form.get(a, j).mul(&bc[j])).sum();
                    items.push((format!("B(e{0}*e{1}, e{2}) - B(e{0}, e{1}*e{2})", a + 1, b + 1, c + 1), left.sub(&right)));
                }
            }
        }
        all_zero_mod(items, &self.rules)
    }

    /// First differing structure constant against another table.
    pub fn compare(&self, other: &MultiplicationTable) -> Outcome {
        let n = self.dim();
        all_zero_mod((0..n * n * n).map(|x| {
            (format!("c[{}][{}][{}]", x / (n * n) + 1, (x / n) % n + 1, x % n + 1), self.c[x].sub(&other.c[x]))
        }), &self.rules)
    }

    /// The product transported through the metric-like isomorphism `phi`
    /// (columns: images of basis elements) with inverse `phi_inv`:
    /// `x *' y = phi_inv(phi(x) * phi(y))`.
    pub fn transport(&self, space: Space, phi: &Matrix, phi_inv: &Matrix) -> MultiplicationTable {
        let n = self.dim();
        let cols: Vec<Vec<RationalExpr>> = (0..n).map(|a| (0..n).map(|j| phi.get(j, a).clone()).collect()).collect();
        let mut c = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                let p = self.product(&cols[a], &cols[b]);
                c.extend(phi_inv.mul_vec(&p));
            }
        }
        MultiplicationTable { chart: self.chart.clone(), space, c, rules: self.rules.clone() }
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<RationalExpr> {
    let mut v = vec![RationalExpr::zero(); n];
    v[i] = RationalExpr::one();
    v
}

impl fmt::Display for MultiplicationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let name = |i: usize| match self.space {
            Space::Cotangent => format!("d{}", self.chart.coord(i)),
            Space::Tangent => format!("D{}", self.chart.coord(i)),
        };
        for a in 0..n {
            for b in a..n {
                let terms: Vec<String> = (0..n)
                    .filter(|&j| !self.get(a, b, j).is_zero())
                    .map(|j| {
                        let c = self.get(a, b, j);
                        if c.is_one() {
                            name(j)
                        } else {
                            format!("({c})*{}", name(j))
                        }
                    })
                    .collect();
                let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                writeln!(f, "{}*{} = {}", name(a), name(b), rhs)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiplicationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
