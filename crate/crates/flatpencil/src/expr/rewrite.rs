use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use super::{Atom, ExprError, FuncAtom, RationalExpr, Symbols};

/// `D^lhs f -> rhs`, where `rhs` is written in the formal arguments of `f`.
///
/// The rule fires on every derivative `D^beta f` with `beta >= lhs`
/// componentwise, replacing it by `D^(beta - lhs)` of the right-hand side
/// evaluated at the actual arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    func: Arc<str>,
    formal: Vec<String>,
    lhs: Vec<u32>,
    rhs: RationalExpr,
}

impl RewriteRule {
    pub fn new(func: &str, formal: &[&str], lhs: Vec<u32>, rhs: RationalExpr) -> Result<RewriteRule, ExprError> {
        if formal.len() != lhs.len() {
            return Err(ExprError::InvalidRule(format!("`{func}` has {} arguments but the pattern has {}", formal.len(), lhs.len())));
        }
        let formal_exprs: Vec<RationalExpr> = formal.iter().map(|v| RationalExpr::var(v)).collect();
        for a in rhs.atoms() {
            if let Atom::Func(fa) = &a {
                if &*fa.name == func && fa.args != formal_exprs {
                    return Err(ExprError::InvalidRule(format!("right-hand side applies `{func}` to non-formal arguments")));
                }
            }
        }
        let rule = RewriteRule { func: Arc::from(func), formal: formal.iter().map(|s| s.to_string()).collect(), lhs, rhs };
        if find_priority(&[&rule]).is_none() {
            return Err(ExprError::NonTerminatingRule(func.to_string()));
        }
        Ok(rule)
    }

    /// Parses `D[f,2,2,2] -> rhs` against declared symbols.
    pub fn parse(text: &str, symbols: &Symbols) -> Result<RewriteRule, ExprError> {
        let (lhs, rhs) = text
            .split_once("->")
            .ok_or_else(|| ExprError::Syntax { offset: 0, message: "expected `lhs -> rhs`".into() })?;
        let lhs_expr = symbols.parse(lhs)?;
        let atoms = lhs_expr.atoms();
        let fa = match (atoms.iter().next(), lhs_expr.numer().nterms(), lhs_expr.is_polynomial()) {
            (Some(Atom::Func(fa)), 1, true) if atoms.len() == 1 && lhs_expr.numer().total_degree() == 1 => fa.clone(),
            _ => return Err(ExprError::InvalidRule("left-hand side must be a single function derivative".into())),
        };
        if !lhs_expr.numer().leading_coeff().is_one() {
            return Err(ExprError::InvalidRule("left-hand side must be a single function derivative".into()));
        }
        let formal = symbols
            .function_args(&fa.name)
            .ok_or_else(|| ExprError::UnknownSymbol { name: fa.name.to_string(), offset: 0 })?;
        let formal_exprs: Vec<RationalExpr> = formal.iter().map(|v| RationalExpr::var(v)).collect();
        if fa.args != formal_exprs {
            return Err(ExprError::InvalidRule("left-hand side must use the formal arguments".into()));
        }
        let rhs = symbols.parse(rhs).map_err(|e| match e {
            ExprError::Syntax { offset, message } => ExprError::Syntax { offset: offset + lhs.len() + 2, message },
            ExprError::UnknownSymbol { name, offset } => ExprError::UnknownSymbol { name, offset: offset + lhs.len() + 2 },
            other => other,
        })?;
        let formal: Vec<&str> = formal.iter().map(|s| s.as_str()).collect();
        RewriteRule::new(&fa.name, &formal, fa.index.clone(), rhs)
    }

    pub fn function(&self) -> &str {
        &self.func
    }

    pub fn pattern(&self) -> &[u32] {
        &self.lhs
    }

    pub fn rhs(&self) -> &RationalExpr {
        &self.rhs
    }

    fn matches(&self, fa: &FuncAtom) -> bool {
        *fa.name == *self.func && fa.index.len() == self.lhs.len() && fa.index.iter().zip(&self.lhs).all(|(b, a)| b >= a)
    }
}

impl std::fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let args: Vec<RationalExpr> = self.formal.iter().map(|v| RationalExpr::var(v)).collect();
        write!(f, "{} -> {}", Atom::func(&self.func, self.lhs.clone(), args), self.rhs)
    }
}

/// Searches for an argument priority under which every right-hand side
/// derivative is lex-smaller than its pattern.
fn find_priority(rules: &[&RewriteRule]) -> Option<Vec<usize>> {
    let arity = rules.first().map(|r| r.lhs.len()).unwrap_or(0);
    let mut perm: Vec<usize> = (0..arity).collect();
    loop {
        let ok = rules.iter().all(|r| {
            r.rhs.atoms().iter().all(|a| match a {
                Atom::Func(fa) if fa.name == r.func => lex_less(&fa.index, &r.lhs, &perm),
                _ => true,
            })
        });
        if ok {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn lex_less(a: &[u32], b: &[u32], perm: &[usize]) -> bool {
    for &k in perm {
        if a[k] != b[k] {
            return a[k] < b[k];
        }
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

type Cache = HashMap<(usize, Vec<u32>), RationalExpr>;

/// A terminating set of rewrite rules, applied to a fixed point.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<RewriteRule>,
    cache: Arc<Mutex<Cache>>,
}

impl PartialEq for RuleSet {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl RuleSet {
    pub fn empty() -> RuleSet {
        RuleSet::default()
    }

    pub fn new(rules: Vec<RewriteRule>) -> Result<RuleSet, ExprError> {
        let with_rules: BTreeSet<&str> = rules.iter().map(|r| r.function()).collect();
        for r in &rules {
            for a in r.rhs.atoms() {
                if let Atom::Func(fa) = &a {
                    if *fa.name != *r.func && with_rules.contains(&*fa.name) {
                        return Err(ExprError::InvalidRule(format!(
                            "rule for `{}` mentions `{}`, which has rules of its own",
                            r.func, fa.name
                        )));
                    }
                }
            }
        }
        for f in &with_rules {
            let group: Vec<&RewriteRule> = rules.iter().filter(|r| r.function() == *f).collect();
            let arity = group[0].lhs.len();
            if group.iter().any(|r| r.lhs.len() != arity) || find_priority(&group).is_none() {
                return Err(ExprError::NonTerminatingRule(f.to_string()));
            }
        }
        Ok(RuleSet { rules, cache: Arc::default() })
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    fn derived_rhs(&self, rule_idx: usize, delta: &[u32]) -> RationalExpr {
        let key = (rule_idx, delta.to_vec());
        if let Some(v) = self.cache.lock().expect("rule cache").get(&key) {
            return v.clone();
        }
        let rule = &self.rules[rule_idx];
        let mut e = rule.rhs.clone();
        for (j, &k) in delta.iter().enumerate() {
            for _ in 0..k {
                e = e.diff(&rule.formal[j]);
            }
        }
        self.cache.lock().expect("rule cache").insert(key, e.clone());
        e
    }

    fn replacement(&self, fa: &FuncAtom) -> Result<Option<RationalExpr>, ExprError> {
        let Some(idx) = self.rules.iter().position(|r| r.matches(fa)) else {
            return Ok(None);
        };
        let rule = &self.rules[idx];
        let delta: Vec<u32> = fa.index.iter().zip(&rule.lhs).map(|(b, a)| b - a).collect();
        let body = self.derived_rhs(idx, &delta);
        let formal_exprs: Vec<RationalExpr> = rule.formal.iter().map(|v| RationalExpr::var(v)).collect();
        if fa.args == formal_exprs {
            return Ok(Some(body));
        }
        let bindings: BTreeMap<String, RationalExpr> = rule.formal.iter().cloned().zip(fa.args.iter().cloned()).collect();
        Ok(Some(body.substitute(&bindings)?))
    }

    /// Rewrites until no rule applies. Terminates because every step lowers
    /// the derivative multi-indices in a fixed well-ordering.
    pub fn apply(&self, e: &RationalExpr) -> Result<RationalExpr, ExprError> {
        if self.rules.is_empty() {
            return Ok(e.clone());
        }
        let mut cur = e.clone();
        loop {
            let mut map = BTreeMap::new();
            for a in cur.atoms() {
                if let Atom::Func(fa) = &a {
                    if let Some(r) = self.replacement(fa)? {
                        map.insert(a.clone(), r);
                    }
                }
            }
            if map.is_empty() {
                return Ok(cur);
            }
            cur = cur.substitute_atoms(&map)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols() -> Symbols {
        let mut s = Symbols::new();
        s.declare_function("f", &["t2", "t3"]);
        s
    }

    #[test]
    fn rule_fires_on_pattern_and_derivatives() {
        let s = symbols();
        let rule = RewriteRule::parse("D[f,2,2,2] -> D[f,1,1,2]^2 - D[f,1,2,2]*D[f,1,1,1]", &s).unwrap();
        let rules = RuleSet::new(vec![rule]).unwrap();
        let e = s.parse("D[f,2,2,2] - (D[f,1,1,2]^2 - D[f,1,2,2]*D[f,1,1,1])").unwrap();
        assert!(rules.apply(&e).unwrap().is_zero());
        let higher = s.parse("D[f,1,2,2,2]").unwrap();
        let expect = s.parse("2*D[f,1,1,2]*D[f,1,1,1,2] - D[f,1,1,2,2]*D[f,1,1,1] - D[f,1,2,2]*D[f,1,1,1,1]").unwrap();
        assert_eq!(rules.apply(&higher).unwrap(), expect);
    }

    #[test]
    fn non_decreasing_rule_rejected() {
        let s = symbols();
        assert!(matches!(RewriteRule::parse("D[f,1] -> D[f,1,1]", &s), Err(ExprError::NonTerminatingRule(_))));
    }

    #[test]
    fn rule_at_shifted_arguments() {
        let mut s = symbols();
        s.declare_var("u");
        let rule = RewriteRule::parse("D[f,2] -> t2*D[f,1]", &s).unwrap();
        let rules = RuleSet::new(vec![rule]).unwrap();
        let e = s.parse("D[f,2](u^2, t3)").unwrap();
        assert_eq!(rules.apply(&e).unwrap(), s.parse("u^2*D[f,1](u^2,t3)").unwrap());
    }
}
