use std::collections::HashMap;

use num_rational::BigRational;

use super::ansatz::multi_indices;
use crate::calculus::{
    apply_prolonged, divergence, euler, total_derivative, total_derivative_multi, Generator,
    PdeSystem,
};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, JetCoord, MultiIndex};

/// Highest derivative order the conserved-vector formula handles.
pub const MAX_LAGRANGIAN_ORDER: usize = 3;

/// `W^α = η^α - ξ^j u^α_j`.
pub fn characteristic(g: &Generator) -> Vec<Expr> {
    g.characteristic()
}

/// `L = Σ ψ^a F_a`.
pub fn formal_lagrangian(system: &PdeSystem, psi: &[Expr]) -> Result<Expr> {
    let f = system.residuals();
    if psi.len() != f.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            got: psi.len(),
        });
    }
    let mut l = Expr::zero();
    for (p, f) in psi.iter().zip(f) {
        l.accumulate(p.mul(f));
    }
    Ok(l)
}

/// Conserved vector `C^i` of a Lagrangian of order at most three under `g`.
///
/// Mixed partials are split evenly over their orderings, so the ordered
/// partial for a tuple `τ` is `∂L/∂u_J / m_J` with `m_J` the number of
/// orderings of the multiset `J`.
pub fn ibragimov_vector(l: &Expr, g: &Generator, include_xi_l: bool) -> Result<Vec<Expr>> {
    let order = l.differential_order();
    if order > MAX_LAGRANGIAN_ORDER {
        return Err(Error::OrderTooHigh(order));
    }
    let n = g.xi.len();
    let w = g.characteristic();
    let mut dw: HashMap<(usize, MultiIndex), Expr> = HashMap::new();
    let mut partials: HashMap<(usize, MultiIndex), Expr> = HashMap::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = if include_xi_l {
            g.xi[i].mul(l)
        } else {
            Expr::zero()
        };
        for (alpha, w_alpha) in w.iter().enumerate() {
            for a in 0..MAX_LAGRANGIAN_ORDER {
                for b in 0..MAX_LAGRANGIAN_ORDER - a {
                    for big_a in multi_indices(n, a) {
                        for big_b in multi_indices(n, b) {
                            let full = big_a.union(&big_b).with(i);
                            let p = partials
                                .entry((alpha, full.clone()))
                                .or_insert_with(|| {
                                    l.pdiff(&Atom::Jet(JetCoord::new(alpha, full.clone())))
                                })
                                .clone();
                            if p.is_zero() {
                                continue;
                            }
                            let dwa = dw
                                .entry((alpha, big_a.clone()))
                                .or_insert_with(|| total_derivative_multi(w_alpha, &big_a))
                                .clone();
                            if dwa.is_zero() {
                                continue;
                            }
                            let weight = BigRational::new(
                                (big_a.orderings() * big_b.orderings()).into(),
                                full.orderings().into(),
                            );
                            let weight = if b % 2 == 1 { -weight } else { weight };
                            let term = dwa.mul(&total_derivative_multi(&p, &big_b));
                            c.accumulate_scaled(&term, &weight);
                        }
                    }
                }
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// `X(L) + L D_i ξ^i - W^α δL/δu^α - D_i C^i`, identically zero for any
/// Lagrangian and point generator.
pub fn noether_identity_residual(l: &Expr, g: &Generator) -> Result<Expr> {
    let c = ibragimov_vector(l, g, true)?;
    let n = g.xi.len();
    let mut r = apply_prolonged(g, l)?;
    for (i, xi) in g.xi.iter().enumerate() {
        r.accumulate(l.mul(&total_derivative(xi, i)));
    }
    for (alpha, w) in g.characteristic().iter().enumerate() {
        r.accumulate(w.mul(&euler(l, alpha)).neg());
    }
    r.accumulate(divergence(&c, n)?.neg());
    Ok(r.numerator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Equation;
    use crate::expr::Context;

    fn kdv() -> PdeSystem {
        let ctx = Context::new(&["t", "x"], &["u"]).unwrap();
        let rhs = Expr::parse("u[x,x,x] + u*u[x]", &ctx).unwrap();
        let eq = Equation {
            lead: JetCoord::new(0, MultiIndex::new([0])),
            rhs,
        };
        PdeSystem::new("kdv", ctx, vec![eq]).unwrap()
    }

    fn p(s: &str, sys: &PdeSystem) -> Expr {
        Expr::parse(s, sys.ctx()).unwrap()
    }

    fn gen(s: &PdeSystem, xi: [&str; 2], eta: &str) -> Generator {
        Generator::new("g", vec![p(xi[0], s), p(xi[1], s)], vec![p(eta, s)]).unwrap()
    }

    #[test]
    fn translation_characteristic() {
        let s = kdv();
        assert_eq!(
            characteristic(&gen(&s, ["1", "0"], "0")),
            vec![p("-u[t]", &s)]
        );
    }

    #[test]
    fn identity_holds_on_kdv() {
        let s = kdv();
        let l = formal_lagrangian(&s, &[p("u", &s)]).unwrap();
        for g in [
            gen(&s, ["0", "1"], "0"),
            gen(&s, ["3*t", "x"], "-2*u"),
            gen(&s, ["0", "t"], "-1"),
        ] {
            assert!(noether_identity_residual(&l, &g).unwrap().is_zero());
        }
    }

    #[test]
    fn zero_lagrangian_gives_zero_vector() {
        let s = kdv();
        let c = ibragimov_vector(&Expr::zero(), &gen(&s, ["3*t", "x"], "-2*u"), true).unwrap();
        assert!(c.iter().all(Expr::is_zero));
    }

    #[test]
    fn order_four_is_rejected() {
        let s = kdv();
        let l = p("u[x,x,x,x]", &s);
        assert_eq!(
            ibragimov_vector(&l, &gen(&s, ["1", "0"], "0"), true),
            Err(Error::OrderTooHigh(4))
        );
    }

    #[test]
    fn translation_vector_is_conserved() {
        let s = kdv();
        let l = formal_lagrangian(&s, &[p("u", &s)]).unwrap();
        let c = ibragimov_vector(&l, &gen(&s, ["0", "1"], "0"), false).unwrap();
        let div = divergence(&c, 2).unwrap();
        assert!(crate::calculus::reduce_mod_system(&div, &s)
            .unwrap()
            .is_zero());
    }
}
