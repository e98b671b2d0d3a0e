//! Variational calculus on jet space: total derivatives, the Euler operator,
//! divergence, reduction modulo a solved system, and Lie prolongation.

mod reduce;
mod symmetry;
mod system;

pub use reduce::{reduce_mod_system, Reducer, DEFAULT_PASS_CAP};
pub use symmetry::{apply_prolonged, prolong, symmetry_residual, Generator, Prolongation};
pub use system::{Equation, PdeSystem};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, MultiIndex};

/// `D_i e`: differentiates explicit `x^i` dependence and maps every jet
/// coordinate `u_J` to `u_{J+i}`.
pub fn total_derivative(e: &Expr, i: usize) -> Expr {
    e.derive(&|a: &Atom| match a {
        Atom::Indep(j) if *j == i => Some(Expr::one()),
        Atom::Jet(j) => Some(Expr::atom(Atom::Jet(j.derive(i)))),
        _ => None,
    })
}

/// `D_J e` for a multi-index `J`.
pub fn total_derivative_multi(e: &Expr, index: &MultiIndex) -> Expr {
    index
        .indices()
        .iter()
        .fold(e.clone(), |acc, &i| total_derivative(&acc, i))
}

/// Euler operator `δ/δu^α`.
///
/// Sums over the canonical multi-indices present in `e`; no multiplicity
/// factors are needed because `∂/∂u_J` already sees every ordering of `J`.
pub fn euler(e: &Expr, alpha: usize) -> Expr {
    let mut indices: BTreeSet<MultiIndex> = e
        .jets()
        .into_iter()
        .filter(|j| j.dep == alpha)
        .map(|j| j.index)
        .collect();
    indices.insert(MultiIndex::empty());
    let mut out = Expr::zero();
    for index in indices {
        let p = e.pdiff(&Atom::Jet(crate::expr::JetCoord::new(alpha, index.clone())));
        if p.is_zero() {
            continue;
        }
        let d = total_derivative_multi(&p, &index);
        if index.order() % 2 == 0 {
            out.accumulate(d);
        } else {
            out.accumulate(d.neg());
        }
    }
    out
}

/// `Σ_i D_i T^i`.
pub fn divergence(components: &[Expr], n: usize) -> Result<Expr> {
    if components.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: components.len(),
        });
    }
    let mut out = Expr::zero();
    for (i, t) in components.iter().enumerate() {
        out.accumulate(total_derivative(t, i));
    }
    Ok(out)
}
