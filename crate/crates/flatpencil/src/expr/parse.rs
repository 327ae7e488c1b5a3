use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{Atom, ExprError, Rational, RationalExpr};

/// Declared variables and opaque functions an expression may mention.
///
/// An open symbol table accepts any identifier as a variable and any call as
/// an opaque function, which is handy for quick experiments.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    vars: BTreeSet<String>,
    funcs: BTreeMap<String, Vec<String>>,
    open: bool,
}

impl Symbols {
    pub fn new() -> Symbols {
        Symbols::default()
    }

    pub fn open() -> Symbols {
        Symbols { open: true, ..Symbols::default() }
    }

    pub fn with_vars<S: AsRef<str>>(names: &[S]) -> Symbols {
        let mut s = Symbols::new();
        for n in names {
            s.declare_var(n.as_ref());
        }
        s
    }

    pub fn declare_var(&mut self, name: &str) -> &mut Self {
        self.vars.insert(name.to_string());
        self
    }

    /// Declares an opaque function with its formal arguments, which are
    /// declared as variables too.
    pub fn declare_function<S: AsRef<str>>(&mut self, name: &str, args: &[S]) -> &mut Self {
        for a in args {
            self.vars.insert(a.as_ref().to_string());
        }
        self.funcs.insert(name.to_string(), args.iter().map(|a| a.as_ref().to_string()).collect());
        self
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.open || self.vars.contains(name)
    }

    pub fn function_args(&self, name: &str) -> Option<&[String]> {
        self.funcs.get(name).map(|v| v.as_slice())
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|s| s.as_str())
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.funcs.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn parse(&self, text: &str) -> Result<RationalExpr, ExprError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, syms: self };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    syms: &'a Symbols,
}

const MAX_EXPONENT: i64 = 10_000;

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ExprError {
        ExprError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr, ExprError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalExpr, ExprError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let e = self.exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            self.pos = start;
            return Err(self.err("expected an integer exponent"));
        }
        let v: i64 = digits.parse().map_err(|_| ExprError::Syntax { offset: start, message: "exponent too large".into() })?;
        if v > MAX_EXPONENT {
            return Err(ExprError::Syntax { offset: start, message: "exponent too large".into() });
        }
        if paren {
            self.expect(b')')?;
        }
        Ok(if neg { -(v as i32) } else { v as i32 })
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn primary(&mut self) -> Result<RationalExpr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("digits");
                Ok(RationalExpr::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                if name == "D" && self.src.get(self.pos) == Some(&b'[') {
                    return self.derivative(start);
                }
                if self.peek() == Some(b'(') {
                    return self.call(&name, start, None);
                }
                if self.syms.funcs.contains_key(&name) {
                    let args = self.syms.funcs[&name].iter().map(|a| RationalExpr::var(a)).collect();
                    return Ok(RationalExpr::atom(Atom::func(&name, vec![0; self.syms.funcs[&name].len()], args)));
                }
                if self.syms.has_var(&name) {
                    Ok(RationalExpr::var(&name))
                } else {
                    Err(ExprError::UnknownSymbol { name, offset: start })
                }
            }
            _ => Err(self.err("expected an operand")),
        }
    }

    fn derivative(&mut self, start: usize) -> Result<RationalExpr, ExprError> {
        self.expect(b'[')?;
        self.skip_ws();
        let fstart = self.pos;
        let fname = self.ident();
        if fname.is_empty() {
            return Err(self.err("expected a function name"));
        }
        let mut positions = Vec::new();
        while self.eat(b',') {
            self.skip_ws();
            let s = self.pos;
            let d = self.digits();
            let k: usize = d.parse().map_err(|_| ExprError::Syntax { offset: s, message: "expected an argument position".into() })?;
            if k == 0 {
                return Err(ExprError::Syntax { offset: s, message: "argument positions start at 1".into() });
            }
            positions.push((k, s));
        }
        self.expect(b']')?;
        if self.peek() == Some(b'(') {
            return self.call(&fname, fstart, Some(positions));
        }
        match self.syms.funcs.get(&fname) {
            Some(formal) => {
                let args: Vec<RationalExpr> = formal.iter().map(|a| RationalExpr::var(a)).collect();
                build_func(&fname, args, &positions)
            }
            None if self.syms.open => Err(ExprError::Syntax { offset: start, message: "derivative of an undeclared function needs arguments".into() }),
            None => Err(ExprError::UnknownSymbol { name: fname, offset: fstart }),
        }
    }

    fn call(&mut self, name: &str, start: usize, positions: Option<Vec<(usize, usize)>>) -> Result<RationalExpr, ExprError> {
        let declared = self.syms.funcs.get(name);
        if declared.is_none() && !self.syms.open {
            return Err(ExprError::UnknownSymbol { name: name.to_string(), offset: start });
        }
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        if let Some(formal) = declared {
            if formal.len() != args.len() {
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("`{name}` takes {} arguments, got {}", formal.len(), args.len()),
                });
            }
        }
        build_func(name, args, &positions.unwrap_or_default())
    }
}

fn build_func(name: &str, args: Vec<RationalExpr>, positions: &[(usize, usize)]) -> Result<RationalExpr, ExprError> {
    let mut index = vec![0u32; args.len()];
    for &(k, offset) in positions {
        if k > args.len() {
            return Err(ExprError::Syntax { offset, message: format!("`{name}` has no argument {k}") });
        }
        index[k - 1] += 1;
    }
    Ok(RationalExpr::atom(Atom::func(name, index, args)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_offset() {
        let s = Symbols::with_vars(&["x"]);
        match s.parse("x*+") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_symbol() {
        let s = Symbols::with_vars(&["x"]);
        assert!(matches!(s.parse("x + y"), Err(ExprError::UnknownSymbol { ref name, offset: 4 }) if name == "y"));
    }

    #[test]
    fn negative_exponents() {
        let s = Symbols::with_vars(&["c", "tn", "d"]);
        let a = s.parse("(c*tn + d)^-1").unwrap();
        let b = s.parse("1/(c*tn+d)").unwrap();
        assert_eq!(a, b);
        assert_eq!(s.parse("tn^(-2)").unwrap(), s.parse("1/tn^2").unwrap());
    }

    #[test]
    fn derivative_notation() {
        let mut s = Symbols::new();
        s.declare_function("f", &["t2", "t3"]);
        let a = s.parse("D[f,2,2,2]").unwrap();
        let b = s.parse("D[f,2,2,2](t2,t3)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "D[f,2,2,2](t2,t3)");
        assert!(s.parse("D[f,3]").is_err());
        assert!(s.parse("f(t2)").is_err());
    }
}
