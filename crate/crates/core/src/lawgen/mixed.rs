use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ansatz::Ansatz;
use super::determining::{check_fresh, DeterminingSystem, Origin};
use super::noether::{formal_lagrangian, ibragimov_vector};
use super::trivial::{curl, default_theta, strip_trivial};
use super::verify;
use crate::calculus::{divergence, Generator, PdeSystem, Reducer};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linsolve::{nullspace, solve_affine, SolutionSpace};

pub const DEFAULT_THETA_DEGREE: u32 = 3;

#[derive(Clone, Debug)]
pub struct MixedOptions {
    /// Keep the `ξ^i L` term of the conserved vector; it vanishes on
    /// solutions either way.
    pub include_xi_l: bool,
    /// Potential ansatz for the triviality filter; `None` uses
    /// [`default_theta`] at [`DEFAULT_THETA_DEGREE`], or one above the H
    /// degree when that is larger.
    pub theta: Option<Ansatz>,
    pub strip: bool,
}

impl Default for MixedOptions {
    fn default() -> Self {
        MixedOptions {
            include_xi_l: false,
            theta: None,
            strip: true,
        }
    }
}

/// A verified conservation law and how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservedVector {
    /// Reduced modulo the system, trivial curl parts removed.
    pub components: Vec<Expr>,
    /// `C + H` exactly as instantiated from the solved coefficients.
    pub raw: Vec<Expr>,
    /// Potential whose curl was subtracted from `raw`.
    pub stripped: Expr,
    pub generator: Option<String>,
    pub psi: Vec<Expr>,
    pub h: Vec<Expr>,
    pub values: BTreeMap<String, BigRational>,
    pub residual: Expr,
}

impl ConservedVector {
    pub fn is_verified(&self) -> bool {
        self.residual.is_zero()
    }

    /// True when the law comes from the conserved-vector formula alone.
    pub fn h_is_zero(&self) -> bool {
        self.h.iter().all(Expr::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct MixedResult {
    pub determining: DeterminingSystem,
    /// Particular solution (for fixed ansatz parts) plus nullspace basis.
    pub solution: SolutionSpace,
    /// False when fixed ansatz parts admit no completion.
    pub consistent: bool,
    /// Dimension of the trivial part of the solution space.
    pub trivial_dim: usize,
    pub laws: Vec<ConservedVector>,
}

/// Solves `D_i(C^i + H^i) = 0` on solutions for the ψ and H coefficients,
/// then returns one verified law per direction of the solution space not
/// spanned by trivial laws.
pub fn mixed_method(
    system: &PdeSystem,
    g: &Generator,
    psi: &[Ansatz],
    h: &[Ansatz],
    opts: &MixedOptions,
) -> Result<MixedResult> {
    let n = system.n_indep();
    if let Some(p) = g.params().into_iter().next() {
        return Err(Error::SymbolicGenerator(format!(
            "generator `{}` has symbolic coefficient `{p}`",
            g.label
        )));
    }
    if g.xi.len() != n || g.eta.len() != system.n_dep() {
        return Err(Error::LengthMismatch {
            expected: n,
            got: g.xi.len(),
        });
    }
    if psi.len() != system.equations().len() {
        return Err(Error::LengthMismatch {
            expected: system.equations().len(),
            got: psi.len(),
        });
    }
    if h.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: h.len(),
        });
    }
    for a in psi {
        a.check_polynomial("psi ansatz")?;
    }
    for a in h {
        a.check_polynomial("H ansatz")?;
    }
    let mut unknowns: Vec<String> = h.iter().flat_map(|a| a.unknowns().to_vec()).collect();
    unknowns.extend(psi.iter().flat_map(|a| a.unknowns().to_vec()));
    {
        let mut sorted = unknowns.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != unknowns.len() {
            return Err(Error::Ansatz("ansatz unknowns are not distinct".into()));
        }
    }
    check_fresh(system, &unknowns)?;

    let psi_expr: Vec<Expr> = psi.iter().map(Ansatz::expr).collect();
    let l = formal_lagrangian(system, &psi_expr)?;
    let c = ibragimov_vector(&l, g, opts.include_xi_l)?;
    let t: Vec<Expr> = c.iter().zip(h).map(|(ci, hi)| ci.add(&hi.expr())).collect();
    let mut red = Reducer::new(system);
    let div = red.reduce(&divergence(&t, n)?)?;
    let determining = DeterminingSystem::assemble(
        Origin::Mixed,
        &unknowns,
        &[("div:".to_string(), div)],
        system.ctx(),
    )?;
    let has_fixed = psi.iter().chain(h).any(|a| !a.fixed_part().is_zero());
    let rhs: Vec<BigRational> = determining.constants.iter().map(|c| -c).collect();
    let affine = solve_affine(&determining.matrix, &rhs)?;
    let solution = match &affine {
        Some(space) => space.clone(),
        None => nullspace(&determining.matrix),
    };

    // The fixed parts contribute one candidate when the affine system is
    // consistent; every nullspace direction contributes one more.
    let mut picks: Vec<(BTreeMap<String, BigRational>, bool)> = Vec::new();
    if has_fixed && affine.is_some() {
        picks.push((solution.assignment(&solution.particular), true));
    }
    for v in &solution.basis {
        picks.push((solution.assignment(v), false));
    }
    let mut candidates = Vec::with_capacity(picks.len());
    for (values, with_fixed) in picks {
        let inst = |a: &Ansatz| {
            if with_fixed {
                a.instantiate(&values)
            } else {
                a.instantiate_linear(&values)
            }
        };
        let psi_v: Vec<Expr> = psi.iter().map(inst).collect();
        let h_v: Vec<Expr> = h.iter().map(inst).collect();
        let lv = formal_lagrangian(system, &psi_v)?;
        let cv = ibragimov_vector(&lv, g, opts.include_xi_l)?;
        let raw: Vec<Expr> = cv.iter().zip(&h_v).map(|(a, b)| a.add(b)).collect();
        let residual = verify(system, &raw)?;
        if !residual.is_zero() {
            return Err(Error::Internal(format!(
                "instantiated law fails verification: {}",
                residual.display(system.ctx())
            )));
        }
        candidates.push((values, psi_v, h_v, raw));
    }

    let theta = opts
        .theta
        .clone()
        .unwrap_or_else(|| default_theta(system, DEFAULT_THETA_DEGREE.max(max_degree(h) + 1)));
    let raws: Vec<Vec<Expr>> = candidates.iter().map(|c| c.3.clone()).collect();
    let trivial = trivial_directions(system, &raws, &theta, &mut red)?;
    let keep = complement(&trivial, raws.len());

    let mut laws = Vec::with_capacity(keep.len());
    for k in keep {
        let (values, psi_v, h_v, raw) = candidates[k].clone();
        let (components, stripped) = if opts.strip {
            strip_trivial(system, &raw, &theta)?
        } else {
            (
                raw.iter().map(|e| red.reduce(e)).collect::<Result<_>>()?,
                Expr::zero(),
            )
        };
        let residual = verify(system, &components)?;
        if !residual.is_zero() {
            return Err(Error::Internal("stripped law fails verification".into()));
        }
        laws.push(ConservedVector {
            components,
            raw,
            stripped,
            generator: Some(g.label.clone()),
            psi: psi_v,
            h: h_v,
            values,
            residual,
        });
    }
    Ok(MixedResult {
        determining,
        solution,
        consistent: affine.is_some(),
        trivial_dim: trivial.len(),
        laws,
    })
}

/// Largest total degree of any basis element or fixed part. A curl lowers
/// the degree in `t, x` by one, so the potential ansatz must go one higher.
fn max_degree(ansatz: &[Ansatz]) -> u32 {
    ansatz
        .iter()
        .flat_map(|a| a.basis().iter().chain(Some(a.fixed_part())))
        .flat_map(|e| e.terms().map(|(m, _)| m.degree().ceil().to_integer()))
        .max()
        .map_or(0, |d| d.max(0) as u32)
}

/// Basis (in candidate coordinates) of the combinations of `laws` that are
/// trivial: vanishing on solutions, or a curl of a potential in `theta`
/// when there are two independent variables.
pub fn trivial_directions(
    system: &PdeSystem,
    laws: &[Vec<Expr>],
    theta: &Ansatz,
    red: &mut Reducer,
) -> Result<Vec<Vec<BigRational>>> {
    let d = laws.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let n = system.n_indep();
    let coeffs: Vec<String> = (0..d).map(|k| format!("_c{k}")).collect();
    let mut unknowns = coeffs.clone();
    let use_curl = n == 2 && !theta.is_empty();
    if use_curl {
        unknowns.extend(theta.unknowns().iter().cloned());
    }
    let mut comps = vec![Expr::zero(); n];
    for (k, law) in laws.iter().enumerate() {
        let ck = Expr::param(coeffs[k].clone());
        for (acc, e) in comps.iter_mut().zip(law) {
            acc.accumulate(red.reduce(e)?.mul(&ck));
        }
    }
    if use_curl {
        let th = theta.expr();
        for (acc, cth) in comps.iter_mut().zip(curl(&th)) {
            acc.accumulate(red.reduce(&cth)?.neg());
        }
    }
    let exprs: Vec<(String, Expr)> = comps
        .into_iter()
        .enumerate()
        .map(|(i, e)| (format!("T{}:", i + 1), e))
        .collect();
    let det = DeterminingSystem::assemble(Origin::Triviality, &unknowns, &exprs, system.ctx())?;
    let space = nullspace(&det.matrix);
    let projected: Vec<Vec<BigRational>> = space
        .basis
        .iter()
        .map(|v| v[..d].to_vec())
        .filter(|v| v.iter().any(|c| !c.is_zero()))
        .collect();
    let m = crate::linsolve::RationalMatrix::new(projected, d)?;
    let rref = m.rref();
    Ok(rref
        .rows()
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect())
}

/// `λ` with `a - λ b` trivial, when `b` itself is nontrivial and such a
/// `λ` exists. Zero means `a` is trivial on its own.
pub fn equivalence_ratio(
    system: &PdeSystem,
    a: &[Expr],
    b: &[Expr],
    theta: &Ansatz,
) -> Result<Option<BigRational>> {
    let mut red = Reducer::new(system);
    let trivial = trivial_directions(system, &[a.to_vec(), b.to_vec()], theta, &mut red)?;
    // The trivial span is in RREF over (c_a, c_b). A row (1, -λ) means
    // a - λ b is trivial; a row (0, 1) means b alone is trivial.
    if trivial.iter().any(|r| r[0].is_zero()) {
        return Ok(None);
    }
    Ok(trivial.first().map(|r| -r[1].clone()))
}

/// Indices of unit vectors completing `span` to the whole space, greedily in
/// order.
fn complement(span: &[Vec<BigRational>], d: usize) -> Vec<usize> {
    let mut rows = span.to_vec();
    let mut rank = crate::linsolve::RationalMatrix::new(rows.clone(), d)
        .map(|m| m.rank())
        .unwrap_or(0);
    let mut keep = Vec::new();
    for k in 0..d {
        let mut e = vec![BigRational::zero(); d];
        e[k] = BigRational::one();
        rows.push(e);
        let r = crate::linsolve::RationalMatrix::new(rows.clone(), d)
            .map(|m| m.rank())
            .unwrap_or(0);
        if r > rank {
            rank = r;
            keep.push(k);
        } else {
            rows.pop();
        }
    }
    keep
}
