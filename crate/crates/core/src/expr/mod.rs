//! Canonical symbolic expressions over jet space.
//!
//! An [`Expr`] is a sum of terms, each an exact rational coefficient times a
//! [`Monomial`]. A monomial is a sorted list of `(factor, exponent)` pairs
//! where a factor is either an [`Atom`] or a composite polynomial base that
//! carries a negative or non-integer exponent. Positive integer powers of
//! sums are always expanded, so two expressions are equal as values of the
//! engine's expression class exactly when their normal forms are equal,
//! with one caveat: the same composite base may appear with exponents in the
//! same residue class mod 1 (for example `B^(-1/2)` next to `B^(1/2)`). Use
//! [`Expr::numerator`] before deciding zero-equivalence of such sums.

mod atom;
mod collect;
mod context;
mod parse;
mod print;

pub use atom::{Atom, FuncSym, JetCoord, MultiIndex};
pub use collect::{collect, LinearForm};
pub use context::{Context, Symbol};
pub use parse::parse;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

pub type Exponent = Rational64;

/// One multiplicative building block of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Atom(Atom),
    /// Opaque polynomial base. Never carries a positive integer exponent.
    Composite(Box<Expr>),
}

/// Product of factors raised to rational exponents, sorted by factor.
///
/// Ordering is by total degree first, then lexicographically by factor list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: Exponent,
    factors: Vec<(Factor, Exponent)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            degree: Exponent::zero(),
            factors: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Factor, Exponent)] {
        &self.factors
    }

    pub fn degree(&self) -> Exponent {
        self.degree
    }

    fn from_sorted(factors: Vec<(Factor, Exponent)>) -> Self {
        let degree = factors.iter().map(|(_, e)| *e).sum();
        Monomial { degree, factors }
    }

    fn single(factor: Factor, exp: Exponent) -> Self {
        Monomial::from_sorted(vec![(factor, exp)])
    }

    /// Exponent of `atom` in this monomial (zero when absent).
    pub fn exponent_of(&self, atom: &Atom) -> Exponent {
        self.factors
            .iter()
            .find(|(f, _)| matches!(f, Factor::Atom(a) if a == atom))
            .map(|(_, e)| *e)
            .unwrap_or_else(Exponent::zero)
    }

    /// Merges two factor lists. Composite factors whose merged exponent is a
    /// positive integer are returned separately for expansion.
    fn merge(&self, other: &Monomial) -> (Monomial, Vec<(Expr, i64)>) {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut expand = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Greater
            } else if j == b.len() {
                std::cmp::Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if !e.is_zero() {
                        match &a[i].0 {
                            Factor::Composite(base) if e.is_integer() && e.is_positive() => {
                                expand.push(((**base).clone(), e.to_integer()));
                            }
                            f => out.push((f.clone(), e)),
                        }
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        (Monomial::from_sorted(out), expand)
    }
}

/// Canonical sum of terms. See the module documentation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Expr::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(BigRational::from_integer(n.into()))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Expr::constant(BigRational::new(num.into(), den.into()))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::term(
            Monomial::single(Factor::Atom(a), Exponent::one()),
            BigRational::one(),
        )
    }

    pub fn indep(i: usize) -> Self {
        Expr::atom(Atom::Indep(i))
    }

    pub fn jet(dep: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Expr::atom(Atom::jet(dep, indices))
    }

    pub fn param(name: impl Into<String>) -> Self {
        Expr::atom(Atom::param(name))
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The constant value if this expression has no symbolic factors.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        match m.factors.as_slice() {
            [(Factor::Atom(a), e)] if e.is_one() && c.is_one() => Some(a),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += other`.
    pub fn accumulate(&mut self, other: Expr) {
        if self.terms.is_empty() {
            *self = other;
            return;
        }
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
    }

    /// `self += s * other`.
    pub fn accumulate_scaled(&mut self, other: &Expr, s: &BigRational) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Expr {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn scale_int(&self, s: i64) -> Expr {
        self.scale(&BigRational::from_integer(s.into()))
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                let (m, expand) = ma.merge(mb);
                if expand.is_empty() {
                    out.add_term(m, c);
                } else {
                    let mut part = Expr::term(m, c);
                    for (base, n) in expand {
                        part = part.mul(&base.pow_nonneg(n as u64));
                    }
                    out.accumulate(part);
                }
            }
        }
        out
    }

    fn pow_nonneg(&self, mut n: u64) -> Expr {
        let mut result = Expr::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Raises to an integer power. Negative powers of zero are a domain error.
    pub fn pow_int(&self, n: i64) -> Result<Expr> {
        if n >= 0 {
            return Ok(self.pow_nonneg(n as u64));
        }
        self.pow(Exponent::from_integer(n))
    }

    /// Raises to a rational power.
    ///
    /// Single-term bases distribute the exponent over their factors; sums
    /// become one composite factor after dividing out the absolute value of
    /// their leading coefficient.
    pub fn pow(&self, e: Exponent) -> Result<Expr> {
        if e.is_zero() {
            return Ok(Expr::one());
        }
        if e.is_integer() && e.is_positive() {
            return Ok(self.pow_nonneg(e.to_integer() as u64));
        }
        if self.is_zero() {
            return if e.is_positive() {
                Ok(Expr::zero())
            } else {
                Err(Error::Domain(
                    "zero raised to a non-positive power".to_string(),
                ))
            };
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            let mut out = rational_power(c, e);
            for (f, a) in &m.factors {
                out = out.mul(&Expr::factor_power(f.clone(), a * e));
            }
            return Ok(out);
        }
        let lead = self.terms.values().next().expect("nonempty").abs();
        let base = self.scale(&lead.recip());
        Ok(rational_power(&lead, e).mul(&Expr::term(
            Monomial::single(Factor::Composite(Box::new(base)), e),
            BigRational::one(),
        )))
    }

    /// A single factor raised to a power, expanding positive integer powers
    /// of composite bases.
    fn factor_power(f: Factor, e: Exponent) -> Expr {
        if e.is_zero() {
            return Expr::one();
        }
        match f {
            Factor::Composite(base) if e.is_integer() && e.is_positive() => {
                base.pow_nonneg(e.to_integer() as u64)
            }
            f => Expr::term(Monomial::single(f, e), BigRational::one()),
        }
    }

    /// Builds the expression for a sorted factor list, expanding any
    /// composite factor whose exponent is a positive integer.
    fn from_factors(factors: Vec<(Factor, Exponent)>, c: BigRational) -> Expr {
        let mut kept = Vec::with_capacity(factors.len());
        let mut expand = Vec::new();
        for (f, e) in factors {
            match f {
                Factor::Composite(base) if e.is_integer() && e.is_positive() => {
                    expand.push((base, e.to_integer() as u64));
                }
                f => kept.push((f, e)),
            }
        }
        let mut out = Expr::term(Monomial::from_sorted(kept), c);
        for (base, n) in expand {
            out = out.mul(&base.pow_nonneg(n));
        }
        out
    }

    /// Applies a derivation that maps each non-function atom to its
    /// derivative (`None` meaning zero), extended by the product and chain
    /// rules through function symbols and composite bases.
    pub fn derive<F>(&self, d: &F) -> Expr
    where
        F: Fn(&Atom) -> Option<Expr>,
    {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (k, (f, a)) in m.factors.iter().enumerate() {
                let df = match f {
                    Factor::Atom(Atom::Func(fs)) => {
                        let darg = fs.arg.derive(d);
                        if darg.is_zero() {
                            continue;
                        }
                        let next = Atom::Func(FuncSym {
                            name: fs.name.clone(),
                            order: fs.order + 1,
                            arg: fs.arg.clone(),
                        });
                        Expr::atom(next).mul(&darg)
                    }
                    Factor::Atom(atom) => match d(atom) {
                        Some(e) if !e.is_zero() => e,
                        _ => continue,
                    },
                    Factor::Composite(base) => {
                        let db = base.derive(d);
                        if db.is_zero() {
                            continue;
                        }
                        db
                    }
                };
                let mut rest = m.factors.clone();
                let lowered = a - Exponent::one();
                if lowered.is_zero() {
                    rest.remove(k);
                } else {
                    rest[k].1 = lowered;
                }
                let coeff = c * exponent_to_big(*a);
                out.accumulate(Expr::from_factors(rest, coeff).mul(&df));
            }
        }
        out
    }

    /// Partial derivative with respect to an atom, all other atoms held fixed.
    pub fn pdiff(&self, atom: &Atom) -> Expr {
        self.derive(&|a: &Atom| (a == atom).then(Expr::one))
    }

    /// Replaces atoms according to `map`, renormalizing the result.
    pub fn substitute_with<F>(&self, map: &F) -> Result<Expr>
    where
        F: Fn(&Atom) -> Option<Expr>,
    {
        Ok(self.subst_inner(map)?.unwrap_or_else(|| self.clone()))
    }

    fn subst_inner<F>(&self, map: &F) -> Result<Option<Expr>>
    where
        F: Fn(&Atom) -> Option<Expr>,
    {
        let mut changed_any = false;
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut replaced: Vec<Expr> = Vec::new();
            for (f, a) in &m.factors {
                let rep = match f {
                    Factor::Atom(atom @ Atom::Func(fs)) => match map(atom) {
                        Some(r) => Some(r),
                        None => fs.arg.subst_inner(map)?.map(|arg| {
                            Expr::atom(Atom::Func(FuncSym {
                                name: fs.name.clone(),
                                order: fs.order,
                                arg: Box::new(arg),
                            }))
                        }),
                    },
                    Factor::Atom(atom) => map(atom),
                    Factor::Composite(base) => base.subst_inner(map)?,
                };
                match rep {
                    Some(r) => replaced.push(r.pow(*a)?),
                    None => kept.push((f.clone(), *a)),
                }
            }
            if replaced.is_empty() {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            changed_any = true;
            let mut t = Expr::term(Monomial::from_sorted(kept), c.clone());
            for r in replaced {
                t = t.mul(&r);
                if t.is_zero() {
                    break;
                }
            }
            out.accumulate(t);
        }
        Ok(changed_any.then_some(out))
    }

    /// Replaces every occurrence of `atom` by `replacement`.
    pub fn substitute(&self, atom: &Atom, replacement: &Expr) -> Result<Expr> {
        self.substitute_with(&|a: &Atom| (a == atom).then(|| replacement.clone()))
    }

    /// Visits every atom, including those inside function arguments and
    /// composite bases.
    pub fn visit_atoms(&self, visit: &mut impl FnMut(&Atom)) {
        for m in self.terms.keys() {
            for (f, _) in &m.factors {
                match f {
                    Factor::Atom(a) => {
                        visit(a);
                        if let Atom::Func(fs) = a {
                            fs.arg.visit_atoms(visit);
                        }
                    }
                    Factor::Composite(base) => base.visit_atoms(visit),
                }
            }
        }
    }

    pub fn jets(&self) -> BTreeSet<JetCoord> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Jet(j) = a {
                out.insert(j.clone());
            }
        });
        out
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Param(p) = a {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| found |= a == atom);
        found
    }

    /// Highest derivative order of any jet coordinate (0 if none).
    pub fn differential_order(&self) -> usize {
        self.jets().iter().map(JetCoord::order).max().unwrap_or(0)
    }

    /// True when every factor is a non-function atom with a non-negative
    /// integer exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| {
            m.factors.iter().all(|(f, e)| {
                matches!(f, Factor::Atom(a) if !matches!(a, Atom::Func(_)))
                    && e.is_integer()
                    && !e.is_negative()
            })
        })
    }

    /// Multiplies through by the smallest powers of composite bases that make
    /// every composite exponent lie in `[0, 1)`, expanding integer parts.
    ///
    /// The result is zero exactly when `self` is zero for nonvanishing bases;
    /// it is the form used for zero tests and coefficient collection.
    pub fn numerator(&self) -> Expr {
        let mut lowest: BTreeMap<Expr, Exponent> = BTreeMap::new();
        for m in self.terms.keys() {
            for (f, e) in &m.factors {
                if let Factor::Composite(base) = f {
                    let slot = lowest
                        .entry((**base).clone())
                        .or_insert_with(Exponent::zero);
                    if *e < *slot {
                        *slot = *e;
                    }
                }
            }
        }
        let mut out = self.clone();
        for (base, low) in lowest {
            if low.is_negative() {
                out = out.mul(&Expr::factor_power(Factor::Composite(Box::new(base)), -low));
            }
        }
        let needs_split = out.terms.keys().any(|m| {
            m.factors
                .iter()
                .any(|(f, e)| matches!(f, Factor::Composite(_)) && *e > Exponent::one())
        });
        if !needs_split {
            return out;
        }
        let mut split = Expr::zero();
        for (m, c) in out.terms {
            let mut kept = Vec::new();
            let mut expand = Vec::new();
            for (f, e) in m.factors {
                match f {
                    Factor::Composite(base) if e > Exponent::one() => {
                        let whole = e.floor();
                        expand.push(((*base).clone(), whole.to_integer() as u64));
                        kept.push((Factor::Composite(base), e - whole));
                    }
                    f => kept.push((f, e)),
                }
            }
            let mut t = Expr::term(Monomial::from_sorted(kept), c);
            for (base, n) in expand {
                t = t.mul(&base.pow_nonneg(n));
            }
            split.accumulate(t);
        }
        split
    }

    /// Zero test that also clears composite denominators.
    pub fn vanishes(&self) -> bool {
        self.is_zero() || self.numerator().is_zero()
    }
}

/// `c^e` as an expression; irrational roots become a composite constant.
fn rational_power(c: &BigRational, e: Exponent) -> Expr {
    if e.is_integer() {
        let n = e.to_integer();
        let v = if n >= 0 {
            Pow::pow(c, n as u64)
        } else {
            Pow::pow(&c.recip(), n.unsigned_abs())
        };
        return Expr::constant(v);
    }
    let p = *e.numer();
    let q = *e.denom() as u32;
    let (sign, mag) = if c.is_negative() {
        if q.is_multiple_of(2) {
            return Expr::term(
                Monomial::single(Factor::Composite(Box::new(Expr::constant(c.clone()))), e),
                BigRational::one(),
            );
        }
        (if p % 2 == 0 { 1 } else { -1 }, c.abs())
    } else {
        (1, c.clone())
    };
    if let (Some(rn), Some(rd)) = (exact_root(mag.numer(), q), exact_root(mag.denom(), q)) {
        let root = BigRational::new(rn, rd);
        let v = rational_power(&root, Exponent::from_integer(p));
        return v.scale_int(sign);
    }
    // Keep an exponent in (0, 1) on the opaque constant.
    let whole = e.floor();
    let frac = e - whole;
    rational_power(&mag, whole).scale_int(sign).mul(&Expr::term(
        Monomial::single(Factor::Composite(Box::new(Expr::constant(mag))), frac),
        BigRational::one(),
    ))
}

fn exact_root(n: &BigInt, q: u32) -> Option<BigInt> {
    let r = n.nth_root(q);
    (Pow::pow(&r, q) == *n).then_some(r)
}

pub(crate) fn exponent_to_big(e: Exponent) -> BigRational {
    BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()))
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Self {
        Expr::atom(a)
    }
}

impl std::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Expr {
        Expr::jet(0, [])
    }
    fn ux() -> Expr {
        Expr::jet(0, [1])
    }

    fn radical() -> Expr {
        Expr::one()
            .add(&ux().mul(&ux()))
            .pow(Exponent::new(1, 2))
            .unwrap()
    }

    #[test]
    fn subtraction_cancels() {
        let e = u().mul(&ux()).add(&Expr::rational(3, 2));
        assert!(e.sub(&e).is_zero());
    }

    #[test]
    fn integer_powers_of_sums_expand() {
        let s = u().add(&Expr::one());
        let sq = s.pow_int(2).unwrap();
        assert_eq!(sq, u().mul(&u()).add(&u().scale_int(2)).add(&Expr::one()));
    }

    #[test]
    fn equal_radical_bases_merge() {
        let r = radical();
        assert_eq!(r.len(), 1);
        assert_eq!(r.mul(&r), Expr::one().add(&ux().mul(&ux())));
    }

    #[test]
    fn radical_power_rule() {
        let d = radical().pdiff(&Atom::jet(0, [1]));
        let expected = ux().mul(&radical().pow_int(-1).unwrap());
        assert_eq!(d, expected);
    }

    #[test]
    fn zero_to_negative_power_is_domain_error() {
        assert!(matches!(Expr::zero().pow_int(-1), Err(Error::Domain(_))));
        assert!(u().sub(&u()).pow(Exponent::new(-1, 2)).is_err());
    }

    #[test]
    fn monomial_negative_powers_are_laurent() {
        let rho = u();
        let inv = rho.pow_int(-1).unwrap();
        assert_eq!(inv.mul(&rho), Expr::one());
    }

    #[test]
    fn perfect_root_constants_become_rational() {
        assert_eq!(Expr::int(4).pow(Exponent::new(1, 2)).unwrap(), Expr::int(2));
        assert_eq!(
            Expr::rational(8, 27).pow(Exponent::new(-1, 3)).unwrap(),
            Expr::rational(3, 2)
        );
        let r2 = Expr::int(2).pow(Exponent::new(1, 2)).unwrap();
        assert_eq!(r2.mul(&r2), Expr::int(2));
    }

    #[test]
    fn numerator_clears_radical_denominators() {
        // u*u_x*B^(-1/2) + u*u_x^3*B^(-1/2) - u*u_x*B^(1/2) == 0 for B = 1 + u_x^2
        let inv = radical().pow_int(-1).unwrap();
        let uux = u().mul(&ux());
        let e = uux
            .mul(&inv)
            .add(&uux.mul(&ux()).mul(&ux()).mul(&inv))
            .sub(&uux.mul(&radical()));
        assert!(!e.is_zero());
        assert!(e.vanishes());
    }

    #[test]
    fn substitution_inside_function_arguments() {
        let f = Expr::atom(Atom::func("f", 0, u().mul(&Expr::indep(0))));
        let out = f.substitute(&Atom::dep(0), &Expr::int(2)).unwrap();
        assert_eq!(
            out,
            Expr::atom(Atom::func("f", 0, Expr::indep(0).scale_int(2)))
        );
    }

    #[test]
    fn chain_rule_through_function_symbol() {
        let arg = u().mul(&u());
        let f = Expr::atom(Atom::func("f", 0, arg));
        let d = f.pdiff(&Atom::dep(0));
        let expected = Expr::atom(Atom::func("f", 1, u().mul(&u()))).mul(&u().scale_int(2));
        assert_eq!(d, expected);
    }
}
