use super::{Poly, Rational, RationalExpr};

/// Renders an expression in the input grammar. Terms appear in graded-lex
/// order, highest total degree first.
pub fn print(e: &RationalExpr) -> String {
    let num = e.numer();
    let den = e.denom();
    if den.is_one() {
        return print_poly(num);
    }
    let n = print_poly(num);
    let n = if num.nterms() > 1 { format!("({n})") } else { n };
    let d = print_poly(den);
    let simple_den = den.nterms() == 1 && {
        let (exps, c) = &den.terms()[0];
        c.is_one() && exps.iter().filter(|&&x| x > 0).count() == 1
    };
    if simple_den {
        format!("{n}/{d}")
    } else {
        format!("{n}/({d})")
    }
}

pub fn print_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let vars: Vec<String> = p.vars().iter().map(|a| a.to_string()).collect();
    let mut order: Vec<usize> = (0..p.nterms()).collect();
    order.sort_by(|&i, &j| {
        let (ei, ej) = (&p.terms()[i].0, &p.terms()[j].0);
        let di: u32 = ei.iter().sum();
        let dj: u32 = ej.iter().sum();
        dj.cmp(&di).then_with(|| ej.cmp(ei))
    });
    let mut out = String::new();
    for (pos, &t) in order.iter().enumerate() {
        let (exps, c) = &p.terms()[t];
        let negative = c.is_negative();
        if pos == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let factors: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(k, &x)| if x == 1 { vars[k].clone() } else { format!("{}^{}", vars[k], x) })
            .collect();
        let abs = c.abs();
        if factors.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&coefficient(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

fn coefficient(c: &Rational) -> String {
    c.to_string()
}
