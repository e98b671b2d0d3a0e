use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{collect, Atom, Expr, JetCoord, MultiIndex};
use crate::linsolve::{solve_affine, RationalMatrix};

/// `fixed + Σ unknown_m · basis_m`, with fresh parameter names as unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    unknowns: Vec<String>,
    basis: Vec<Expr>,
    fixed: Expr,
}

impl Ansatz {
    pub fn new(unknowns: Vec<String>, basis: Vec<Expr>) -> Result<Self> {
        if unknowns.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: unknowns.len(),
                got: basis.len(),
            });
        }
        let names: BTreeSet<&String> = unknowns.iter().collect();
        if names.len() != unknowns.len() {
            return Err(Error::Ansatz("repeated unknown name".into()));
        }
        let mut seen = BTreeSet::new();
        for b in &basis {
            if b.is_zero() {
                return Err(Error::Ansatz("zero basis element".into()));
            }
            if !seen.insert(b.clone()) {
                return Err(Error::Ansatz(format!("repeated basis element {b}")));
            }
            if let Some(p) = b.params().into_iter().find(|p| names.contains(p)) {
                return Err(Error::Ansatz(format!(
                    "basis element mentions unknown `{p}`"
                )));
            }
        }
        Ok(Ansatz {
            unknowns,
            basis,
            fixed: Expr::zero(),
        })
    }

    /// Names the unknowns `{prefix}_{m}`.
    pub fn from_basis(prefix: &str, basis: Vec<Expr>) -> Result<Self> {
        let unknowns = (0..basis.len()).map(|m| format!("{prefix}_{m}")).collect();
        Self::new(unknowns, basis)
    }

    /// All monomials of total degree `<= degree` in `vars`.
    pub fn polynomial(prefix: &str, vars: &[Expr], degree: u32) -> Self {
        Self::from_basis(prefix, monomials(vars, degree)).expect("monomials are distinct")
    }

    pub fn zero() -> Self {
        Ansatz {
            unknowns: Vec::new(),
            basis: Vec::new(),
            fixed: Expr::zero(),
        }
    }

    /// A known expression with no free coefficients.
    pub fn fixed(e: Expr) -> Self {
        Ansatz {
            unknowns: Vec::new(),
            basis: Vec::new(),
            fixed: e,
        }
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn basis(&self) -> &[Expr] {
        &self.basis
    }

    pub fn fixed_part(&self) -> &Expr {
        &self.fixed
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// True when the ansatz can only represent zero.
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty() && self.fixed.is_zero()
    }

    pub fn expr(&self) -> Expr {
        let mut out = self.fixed.clone();
        for (u, b) in self.unknowns.iter().zip(&self.basis) {
            out.accumulate(b.mul(&Expr::param(u.clone())));
        }
        out
    }

    /// Substitutes numeric values for the unknowns; missing ones are zero.
    pub fn instantiate(&self, values: &BTreeMap<String, BigRational>) -> Expr {
        let mut out = self.fixed.clone();
        for (u, b) in self.unknowns.iter().zip(&self.basis) {
            if let Some(c) = values.get(u).filter(|c| !c.is_zero()) {
                out.accumulate_scaled(b, c);
            }
        }
        out
    }

    /// `Σ values_m · basis_m`, without the fixed part.
    pub fn instantiate_linear(&self, values: &BTreeMap<String, BigRational>) -> Expr {
        let mut out = Expr::zero();
        for (u, b) in self.unknowns.iter().zip(&self.basis) {
            if let Some(c) = values.get(u).filter(|c| !c.is_zero()) {
                out.accumulate_scaled(b, c);
            }
        }
        out
    }

    /// Fails unless every basis element and the fixed part are polynomial.
    pub fn check_polynomial(&self, what: &str) -> Result<()> {
        match self
            .basis
            .iter()
            .chain(Some(&self.fixed))
            .find(|b| !b.is_polynomial())
        {
            Some(b) => Err(Error::Ansatz(format!(
                "{what} element {b} is not polynomial"
            ))),
            None => Ok(()),
        }
    }

    /// Coordinates of `e` in the basis, if `e` lies in the span.
    pub fn coordinates(&self, e: &Expr) -> Result<Option<Vec<BigRational>>> {
        let residual = e.sub(&self.expr());
        let unknowns: BTreeSet<String> = self.unknowns.iter().cloned().collect();
        let forms = collect(&residual, &unknowns)?;
        let m = RationalMatrix::from_forms(
            &self.unknowns,
            forms.iter().map(|(k, f)| (k.to_string(), f)),
        )?;
        let b: Vec<BigRational> = forms.values().map(|f| f.constant.clone()).collect();
        Ok(solve_affine(&m, &b)?.map(|s| s.particular))
    }
}

/// Monomials of total degree `<= degree` in `vars`, by increasing degree.
pub fn monomials(vars: &[Expr], degree: u32) -> Vec<Expr> {
    let mut out = vec![Expr::one()];
    let mut layer: Vec<(Expr, usize)> = vec![(Expr::one(), 0)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, start) in &layer {
            for (k, v) in vars.iter().enumerate().skip(*start) {
                next.push((m.mul(v), k));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    let mut seen = BTreeSet::new();
    out.retain(|m| !m.is_zero() && seen.insert(m.clone()));
    out
}

/// Multi-indices of exactly `order` entries over `n` variables.
pub fn multi_indices(n: usize, order: usize) -> Vec<MultiIndex> {
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..order {
        let mut next = Vec::new();
        for idx in &layer {
            let start = idx.last().copied().unwrap_or(0);
            for i in start..n {
                let mut v = idx.clone();
                v.push(i);
                next.push(v);
            }
        }
        layer = next;
    }
    layer.into_iter().map(MultiIndex::new).collect()
}

/// Independent variables, dependent variables and jets up to `jet_order`.
pub fn jet_variables(n: usize, m: usize, jet_order: usize) -> Vec<Expr> {
    let mut out: Vec<Expr> = (0..n).map(Expr::indep).collect();
    for order in 0..=jet_order {
        for alpha in 0..m {
            for idx in multi_indices(n, order) {
                out.push(Expr::atom(Atom::Jet(JetCoord::new(alpha, idx))));
            }
        }
    }
    out
}
