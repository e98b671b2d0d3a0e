use std::collections::HashMap;

use num_rational::BigRational;

use super::{total_derivative, PdeSystem, Reducer};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, JetCoord, MultiIndex};

/// `X = ξ^i ∂/∂x^i + η^α ∂/∂u^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub xi: Vec<Expr>,
    pub eta: Vec<Expr>,
    /// Set when the coefficients deliberately carry free parameters.
    pub parametrized: bool,
}

impl Generator {
    pub fn new(label: impl Into<String>, xi: Vec<Expr>, eta: Vec<Expr>) -> Result<Self> {
        let g = Generator {
            label: label.into(),
            xi,
            eta,
            parametrized: false,
        };
        if let Some(p) = g.params().into_iter().next() {
            return Err(Error::SymbolicGenerator(format!(
                "generator `{}` mentions parameter `{p}`",
                g.label
            )));
        }
        Ok(g)
    }

    /// A generator family whose coefficients may contain parameters.
    pub fn family(label: impl Into<String>, xi: Vec<Expr>, eta: Vec<Expr>) -> Self {
        Generator {
            label: label.into(),
            xi,
            eta,
            parametrized: true,
        }
    }

    fn coefficients(&self) -> impl Iterator<Item = &Expr> {
        self.xi.iter().chain(self.eta.iter())
    }

    pub fn params(&self) -> std::collections::BTreeSet<String> {
        self.coefficients().flat_map(Expr::params).collect()
    }

    /// True when no coefficient depends on derivatives of `u`.
    pub fn is_point(&self) -> bool {
        self.coefficients()
            .all(|c| c.jets().iter().all(|j| j.order() == 0))
    }

    /// `W^α = η^α - ξ^j u^α_j`.
    pub fn characteristic(&self) -> Vec<Expr> {
        self.eta
            .iter()
            .enumerate()
            .map(|(a, eta)| {
                let mut w = eta.clone();
                for (j, xi) in self.xi.iter().enumerate() {
                    w.accumulate(xi.mul(&Expr::jet(a, [j])).neg());
                }
                w
            })
            .collect()
    }

    /// `Σ c_k X_k` over generators of matching shape.
    pub fn combine(label: impl Into<String>, parts: &[(BigRational, &Generator)]) -> Result<Self> {
        let (n, m) = match parts.first() {
            Some((_, g)) => (g.xi.len(), g.eta.len()),
            None => return Err(Error::Internal("empty generator combination".into())),
        };
        let mut xi = vec![Expr::zero(); n];
        let mut eta = vec![Expr::zero(); m];
        let mut parametrized = false;
        for (c, g) in parts {
            if g.xi.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: g.xi.len(),
                });
            }
            if g.eta.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: g.eta.len(),
                });
            }
            for (acc, e) in xi.iter_mut().zip(&g.xi) {
                acc.accumulate_scaled(e, c);
            }
            for (acc, e) in eta.iter_mut().zip(&g.eta) {
                acc.accumulate_scaled(e, c);
            }
            parametrized |= g.parametrized;
        }
        Ok(Generator {
            label: label.into(),
            xi,
            eta,
            parametrized,
        })
    }
}

/// Memoized prolongation coefficients `ζ^α_J` of a point generator.
pub struct Prolongation<'g> {
    g: &'g Generator,
    dxi: HashMap<(usize, usize), Expr>,
    cache: HashMap<(usize, MultiIndex), Expr>,
}

impl<'g> Prolongation<'g> {
    pub fn new(g: &'g Generator) -> Result<Self> {
        if !g.is_point() {
            return Err(Error::NotPointSymmetry(g.label.clone()));
        }
        Ok(Prolongation {
            g,
            dxi: HashMap::new(),
            cache: HashMap::new(),
        })
    }

    fn d_xi(&mut self, k: usize, i: usize) -> Expr {
        let g = self.g;
        self.dxi
            .entry((k, i))
            .or_insert_with(|| total_derivative(&g.xi[k], i))
            .clone()
    }

    /// `ζ_{J+i} = D_i ζ_J - Σ_k u_{J+k} D_i ξ^k`, starting from `ζ = η^α`.
    pub fn coefficient(&mut self, alpha: usize, index: &MultiIndex) -> Result<Expr> {
        if alpha >= self.g.eta.len() {
            return Err(Error::LengthMismatch {
                expected: self.g.eta.len(),
                got: alpha + 1,
            });
        }
        if let Some(z) = self.cache.get(&(alpha, index.clone())) {
            return Ok(z.clone());
        }
        let z = match index.split_last() {
            None => self.g.eta[alpha].clone(),
            Some((rest, i)) => {
                let prev = self.coefficient(alpha, &rest)?;
                let mut z = total_derivative(&prev, i);
                for k in 0..self.g.xi.len() {
                    let dxi = self.d_xi(k, i);
                    if dxi.is_zero() {
                        continue;
                    }
                    let u = Expr::atom(Atom::Jet(JetCoord::new(alpha, rest.with(k))));
                    z.accumulate(u.mul(&dxi).neg());
                }
                z
            }
        };
        self.cache.insert((alpha, index.clone()), z.clone());
        Ok(z)
    }

    /// `X^(k) e`, prolonged to every jet coordinate present in `e`.
    pub fn apply(&mut self, e: &Expr) -> Result<Expr> {
        let mut out = Expr::zero();
        for (i, xi) in self.g.xi.iter().enumerate() {
            if !xi.is_zero() {
                out.accumulate(xi.mul(&e.pdiff(&Atom::Indep(i))));
            }
        }
        for jet in e.jets() {
            let d = e.pdiff(&Atom::Jet(jet.clone()));
            if d.is_zero() {
                continue;
            }
            let z = self.coefficient(jet.dep, &jet.index)?;
            out.accumulate(z.mul(&d));
        }
        Ok(out)
    }
}

/// `ζ^α_J` for a point generator.
pub fn prolong(g: &Generator, alpha: usize, index: &MultiIndex) -> Result<Expr> {
    Prolongation::new(g)?.coefficient(alpha, index)
}

/// Prolonged action of `g` on `e`.
pub fn apply_prolonged(g: &Generator, e: &Expr) -> Result<Expr> {
    Prolongation::new(g)?.apply(e)
}

/// `X^(k) F_a` reduced modulo the system, per equation, with composite
/// denominators cleared. All zero exactly when `g` is admitted.
pub fn symmetry_residual(g: &Generator, system: &PdeSystem) -> Result<Vec<Expr>> {
    if g.xi.len() != system.n_indep() {
        return Err(Error::LengthMismatch {
            expected: system.n_indep(),
            got: g.xi.len(),
        });
    }
    if g.eta.len() != system.n_dep() {
        return Err(Error::LengthMismatch {
            expected: system.n_dep(),
            got: g.eta.len(),
        });
    }
    let mut pr = Prolongation::new(g)?;
    let mut red = Reducer::new(system);
    system
        .residuals()
        .iter()
        .map(|f| Ok(red.reduce(&pr.apply(f)?)?.numerator()))
        .collect()
}
