use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::ansatz::{jet_variables, monomials, Ansatz};
use super::determining::{DeterminingSystem, Origin};
use crate::calculus::{total_derivative, PdeSystem, Reducer};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linsolve::solve_affine;

/// Outcome of a triviality test, with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// Every component vanishes on solutions.
    Vanishing,
    /// `T ≡ (D_x θ, -D_t θ)` on solutions.
    Curl(Expr),
    NotTrivial,
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        !matches!(self, Triviality::NotTrivial)
    }

    /// `θ` for a curl, `0` for a vanishing vector.
    pub fn witness(&self) -> Option<Expr> {
        match self {
            Triviality::Vanishing => Some(Expr::zero()),
            Triviality::Curl(theta) => Some(theta.clone()),
            Triviality::NotTrivial => None,
        }
    }
}

/// Polynomial potential ansatz over the variables and all jets below the
/// system order.
pub fn default_theta(system: &PdeSystem, degree: u32) -> Ansatz {
    let order = system.order().saturating_sub(1);
    let vars = jet_variables(system.n_indep(), system.n_dep(), order);
    Ansatz::polynomial("_th", &vars, degree)
}

/// Potential ansatz of degree `<= indep_degree` in the independent
/// variables times degree `<= jet_degree` in the jets below the system
/// order. Much smaller than [`default_theta`] for laws whose explicit
/// `t, x` dependence is low.
pub fn graded_theta(system: &PdeSystem, indep_degree: u32, jet_degree: u32) -> Ansatz {
    let order = system.order().saturating_sub(1);
    let n = system.n_indep();
    let all = jet_variables(n, system.n_dep(), order);
    let (indep, jets) = all.split_at(n);
    let mut basis = Vec::new();
    for a in monomials(indep, indep_degree) {
        for b in monomials(jets, jet_degree) {
            basis.push(a.mul(&b));
        }
    }
    Ansatz::from_basis("_th", basis).expect("products of distinct monomials are distinct")
}

/// `(D_x θ, -D_t θ)` for two independent variables.
pub fn curl(theta: &Expr) -> [Expr; 2] {
    [total_derivative(theta, 1), total_derivative(theta, 0).neg()]
}

/// Decides whether `T` vanishes on solutions, or (for two independent
/// variables) equals a curl of some `θ` in the ansatz span on solutions.
pub fn is_trivial(system: &PdeSystem, t: &[Expr], theta: &Ansatz) -> Result<Triviality> {
    let n = system.n_indep();
    if t.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: t.len(),
        });
    }
    theta.check_polynomial("potential ansatz")?;
    let mut red = Reducer::new(system);
    let reduced: Vec<Expr> = t
        .iter()
        .map(|c| Ok(red.reduce(c)?.numerator()))
        .collect::<Result<_>>()?;
    if reduced.iter().all(Expr::is_zero) {
        return Ok(Triviality::Vanishing);
    }
    if n != 2 || theta.is_zero() {
        return Ok(Triviality::NotTrivial);
    }
    let th = theta.expr();
    let [c1, c2] = curl(&th);
    let exprs = vec![
        ("T1:".to_string(), red.reduce(&t[0].sub(&c1))?),
        ("T2:".to_string(), red.reduce(&t[1].sub(&c2))?),
    ];
    let det =
        DeterminingSystem::assemble(Origin::Triviality, theta.unknowns(), &exprs, system.ctx())?;
    let b: Vec<BigRational> = det.constants.iter().map(|c| -c).collect();
    match solve_affine(&det.matrix, &b)? {
        Some(space) => {
            let values = space.assignment(&space.particular);
            Ok(Triviality::Curl(theta.instantiate(&values)))
        }
        None => Ok(Triviality::NotTrivial),
    }
}

/// Greedily subtracts curls of individual potential monomials while that
/// strictly shrinks the vector; returns the stripped vector and the total
/// potential removed. Components are reduced modulo the system first.
pub fn strip_trivial(system: &PdeSystem, t: &[Expr], theta: &Ansatz) -> Result<(Vec<Expr>, Expr)> {
    let mut red = Reducer::new(system);
    let mut cur: Vec<Expr> = t.iter().map(|c| red.reduce(c)).collect::<Result<_>>()?;
    let mut removed = Expr::zero();
    if system.n_indep() != 2 || t.len() != 2 {
        return Ok((cur, removed));
    }
    let curls: Vec<(Expr, [Expr; 2])> = theta
        .basis()
        .iter()
        .map(|b| {
            let [a, c] = curl(b);
            Ok((b.clone(), [red.reduce(&a)?, red.reduce(&c)?]))
        })
        .collect::<Result<_>>()?;
    let size = |v: &[Expr]| v.iter().map(Expr::len).sum::<usize>();
    for _ in 0..64 {
        let before = size(&cur);
        let mut best: Option<(usize, Vec<Expr>, Expr)> = None;
        for (b, cb) in &curls {
            let mut tried = BTreeSet::new();
            for (comp, target) in cur.iter().zip(cb) {
                for (m, c) in target.terms() {
                    let Some(tc) = comp.terms().find(|(tm, _)| *tm == m).map(|(_, c)| c) else {
                        continue;
                    };
                    let s = tc / c;
                    if s.is_zero() || !tried.insert(s.clone()) {
                        continue;
                    }
                    let cand: Vec<Expr> = cur
                        .iter()
                        .zip(cb)
                        .map(|(x, y)| x.sub(&y.scale(&s)))
                        .collect();
                    let k = size(&cand);
                    if k < best.as_ref().map_or(before, |b| b.0) {
                        best = Some((k, cand, b.scale(&s)));
                    }
                }
            }
        }
        match best {
            Some((_, cand, th)) => {
                cur = cand;
                removed.accumulate(th);
            }
            None => break,
        }
    }
    Ok((cur, removed))
}
