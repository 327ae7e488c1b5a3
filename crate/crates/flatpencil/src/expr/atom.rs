use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::RationalExpr;

/// An indeterminate of a polynomial: a plain variable or an opaque function
/// derivative applied to argument expressions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Var(Arc<str>),
    Func(Arc<FuncAtom>),
}

/// `D^index f (args)`: the derivative of the opaque symbol `name` with
/// multi-index `index`, evaluated at `args`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncAtom {
    pub name: Arc<str>,
    pub index: Vec<u32>,
    pub args: Vec<RationalExpr>,
}

impl Atom {
    pub fn var(name: &str) -> Atom {
        Atom::Var(Arc::from(name))
    }

    pub fn func(name: &str, index: Vec<u32>, args: Vec<RationalExpr>) -> Atom {
        assert_eq!(index.len(), args.len(), "multi-index length must match arity");
        Atom::Func(Arc::new(FuncAtom { name: Arc::from(name), index, args }))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Atom::Var(v) => Some(v),
            Atom::Func(_) => None,
        }
    }

    pub fn as_func(&self) -> Option<&FuncAtom> {
        match self {
            Atom::Var(_) => None,
            Atom::Func(f) => Some(f),
        }
    }

    /// Variables this atom depends on, looking through function arguments.
    pub fn free_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Atom::Var(v) => {
                out.insert(v.clone());
            }
            Atom::Func(f) => {
                for a in &f.args {
                    a.collect_free_vars(out);
                }
            }
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        match self {
            Atom::Var(v) => &**v == var,
            Atom::Func(f) => f.args.iter().any(|a| a.depends_on(var)),
        }
    }
}

impl FuncAtom {
    pub fn order(&self) -> u32 {
        self.index.iter().sum()
    }

    pub fn with_index(&self, index: Vec<u32>) -> Atom {
        Atom::Func(Arc::new(FuncAtom { name: self.name.clone(), index, args: self.args.clone() }))
    }

    pub fn with_args(&self, args: Vec<RationalExpr>) -> Atom {
        Atom::Func(Arc::new(FuncAtom { name: self.name.clone(), index: self.index.clone(), args }))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(v) => f.write_str(v),
            Atom::Func(fa) => {
                if fa.index.iter().all(|&k| k == 0) {
                    write!(f, "{}(", fa.name)?;
                } else {
                    write!(f, "D[{}", fa.name)?;
                    for (pos, &k) in fa.index.iter().enumerate() {
                        for _ in 0..k {
                            write!(f, ",{}", pos + 1)?;
                        }
                    }
                    f.write_str("](")?;
                }
                for (i, a) in fa.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
