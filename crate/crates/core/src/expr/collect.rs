use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Atom, Expr, Factor, Monomial};
use crate::error::{Error, Result};

/// `constant + Σ coeffs[p]·p` over a set of unknown parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: BigRational,
    pub coeffs: BTreeMap<String, BigRational>,
}

impl LinearForm {
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    fn add(&mut self, unknown: Option<&str>, c: &BigRational) {
        match unknown {
            None => self.constant += c,
            Some(p) => {
                let slot = self
                    .coeffs
                    .entry(p.to_string())
                    .or_insert_with(BigRational::zero);
                *slot += c;
                if slot.is_zero() {
                    self.coeffs.remove(p);
                }
            }
        }
    }
}

fn mentions_unknown(e: &Expr, unknowns: &BTreeSet<String>) -> bool {
    let mut hit = false;
    e.visit_atoms(&mut |a| {
        if let Atom::Param(p) = a {
            hit |= unknowns.contains(p);
        }
    });
    hit
}

/// Splits `e` as `Σ key · (linear form in unknowns)`, keyed by the monomial
/// left after removing the unknown. Fails if any term is not of degree at
/// most one in the unknowns jointly.
pub fn collect(e: &Expr, unknowns: &BTreeSet<String>) -> Result<BTreeMap<Monomial, LinearForm>> {
    let mut out: BTreeMap<Monomial, LinearForm> = BTreeMap::new();
    for (m, c) in e.terms() {
        let mut unknown: Option<&str> = None;
        let mut rest = Vec::with_capacity(m.factors().len());
        let nonlinear = || Error::Nonlinear {
            term: Expr::term(m.clone(), c.clone()).to_string(),
        };
        for (f, exp) in m.factors() {
            match f {
                Factor::Atom(Atom::Param(p)) if unknowns.contains(p) => {
                    if unknown.is_some() || !exp.is_one() {
                        return Err(nonlinear());
                    }
                    unknown = Some(p);
                }
                Factor::Atom(Atom::Func(fs)) if mentions_unknown(&fs.arg, unknowns) => {
                    return Err(nonlinear());
                }
                Factor::Composite(base) if mentions_unknown(base, unknowns) => {
                    return Err(nonlinear());
                }
                _ => rest.push((f.clone(), *exp)),
            }
        }
        let key = Monomial::from_sorted(rest);
        let form = out.entry(key.clone()).or_default();
        form.add(unknown, c);
        if form.is_zero() {
            out.remove(&key);
        }
    }
    Ok(out)
}
