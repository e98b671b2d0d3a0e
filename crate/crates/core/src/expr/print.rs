use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Atom, Context, Exponent, Expr, Factor, Monomial};

/// Renders an expression in the input grammar, so output re-parses.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    ctx: Option<&'a Context>,
}

impl Expr {
    pub fn display<'a>(&'a self, ctx: &'a Context) -> ExprDisplay<'a> {
        ExprDisplay {
            expr: self,
            ctx: Some(ctx),
        }
    }

    pub fn to_text(&self, ctx: &Context) -> String {
        self.display(ctx).to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, None)
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.ctx)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, ctx: Option<&Context>) -> fmt::Result {
    if e.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in e.terms().enumerate() {
        if c.is_negative() {
            f.write_str("-")?;
        } else if k > 0 {
            f.write_str("+")?;
        }
        write_term(f, m, &c.abs(), ctx)?;
    }
    Ok(())
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    c: &BigRational,
    ctx: Option<&Context>,
) -> fmt::Result {
    if m.is_one() {
        return write_rational(f, c);
    }
    if !c.is_one() {
        write_rational(f, c)?;
        f.write_str("*")?;
    }
    write_monomial(f, m, ctx)
}

pub(crate) fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    ctx: Option<&Context>,
) -> fmt::Result {
    for (k, (factor, e)) in m.factors().iter().enumerate() {
        if k > 0 {
            f.write_str("*")?;
        }
        match factor {
            Factor::Atom(a) => {
                write_atom(f, a, ctx)?;
                write_exponent(f, *e)?;
            }
            Factor::Composite(base) => {
                f.write_str("(")?;
                write_expr(f, base, ctx)?;
                f.write_str(")")?;
                write_exponent(f, *e)?;
            }
        }
    }
    Ok(())
}

fn write_exponent(f: &mut fmt::Formatter<'_>, e: Exponent) -> fmt::Result {
    if e.is_one() {
        Ok(())
    } else if e.is_integer() && e.is_positive() {
        write!(f, "^{}", e.numer())
    } else if e.is_integer() {
        write!(f, "^({})", e.numer())
    } else {
        write!(f, "^({}/{})", e.numer(), e.denom())
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom, ctx: Option<&Context>) -> fmt::Result {
    let indep = |i: usize| match ctx {
        Some(c) => c.indep_name(i),
        None => format!("x{i}"),
    };
    match a {
        Atom::Indep(i) => f.write_str(&indep(*i)),
        Atom::Jet(j) => {
            let name = match ctx {
                Some(c) => c.dep_name(j.dep),
                None => format!("u{}", j.dep),
            };
            f.write_str(&name)?;
            if !j.index.is_empty() {
                let idx: Vec<String> = j.index.indices().iter().map(|&i| indep(i)).collect();
                write!(f, "[{}]", idx.join(","))?;
            }
            Ok(())
        }
        Atom::Param(p) => f.write_str(p),
        Atom::Func(fs) => {
            f.write_str(&fs.name)?;
            for _ in 0..fs.order {
                f.write_str("'")?;
            }
            f.write_str("(")?;
            write_expr(f, &fs.arg, ctx)?;
            f.write_str(")")
        }
    }
}

/// Renders a monomial key (used for row labels of determining systems).
pub struct MonomialDisplay<'a> {
    pub(crate) m: &'a Monomial,
    pub(crate) ctx: Option<&'a Context>,
}

impl Monomial {
    pub fn display<'a>(&'a self, ctx: &'a Context) -> MonomialDisplay<'a> {
        MonomialDisplay {
            m: self,
            ctx: Some(ctx),
        }
    }
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return f.write_str("1");
        }
        write_monomial(f, self.m, self.ctx)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        MonomialDisplay { m: self, ctx: None }.fmt(f)
    }
}
