use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;

use super::ansatz::Ansatz;
use super::noether::formal_lagrangian;
use crate::calculus::{euler, PdeSystem};
use crate::error::{Error, Result};
use crate::expr::{collect, Context, Expr, LinearForm};
use crate::linsolve::{nullspace, span_equal, RationalMatrix, SolutionSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Multiplier,
    Mixed,
    Triviality,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Multiplier => "multiplier",
            Origin::Mixed => "mixed",
            Origin::Triviality => "triviality",
        })
    }
}

/// Linear equations in ansatz unknowns, one row per collected monomial.
#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    pub matrix: RationalMatrix,
    pub origin: Origin,
    /// Constant parts, for systems that are not homogeneous.
    pub constants: Vec<BigRational>,
}

impl DeterminingSystem {
    /// Collects each labelled expression against `unknowns` (in column order).
    pub fn assemble(
        origin: Origin,
        unknowns: &[String],
        exprs: &[(String, Expr)],
        ctx: &Context,
    ) -> Result<Self> {
        let set: BTreeSet<String> = unknowns.iter().cloned().collect();
        let mut rows: Vec<(String, LinearForm)> = Vec::new();
        for (label, e) in exprs {
            for (key, form) in collect(&e.numerator(), &set)? {
                rows.push((format!("{label}{}", key.display(ctx)), form));
            }
        }
        let matrix =
            RationalMatrix::from_forms(unknowns, rows.iter().map(|(k, f)| (k.clone(), f)))?;
        let constants = rows.iter().map(|(_, f)| f.constant.clone()).collect();
        Ok(DeterminingSystem {
            matrix,
            origin,
            constants,
        })
    }

    pub fn n_equations(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_unknowns(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn keys(&self) -> &[String] {
        self.matrix.row_labels()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constants.iter().all(num_traits::Zero::is_zero)
    }

    pub fn solve(&self) -> SolutionSpace {
        nullspace(&self.matrix)
    }
}

/// Multipliers `v^a` with `δ(Σ v^a F_a)/δu^α = 0` identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierSet {
    pub v: Vec<Expr>,
}

fn all_unknowns(ansatz: &[Ansatz]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for a in ansatz {
        for u in a.unknowns() {
            if !seen.insert(u.clone()) {
                return Err(Error::Ansatz(format!("unknown `{u}` used twice")));
            }
            out.push(u.clone());
        }
    }
    Ok(out)
}

pub(crate) fn check_fresh(system: &PdeSystem, unknowns: &[String]) -> Result<()> {
    let mut used = BTreeSet::new();
    for f in system.residuals() {
        used.extend(f.params());
    }
    match unknowns.iter().find(|u| used.contains(*u)) {
        Some(u) => Err(Error::Ansatz(format!(
            "unknown `{u}` clashes with a system parameter"
        ))),
        None => Ok(()),
    }
}

/// One equation per (dependent variable, monomial) of the Euler expressions
/// of `Σ v^a F_a`, with no reduction modulo the system.
pub fn multiplier_determining_system(
    system: &PdeSystem,
    ansatz: &[Ansatz],
) -> Result<DeterminingSystem> {
    if ansatz.len() != system.equations().len() {
        return Err(Error::LengthMismatch {
            expected: system.equations().len(),
            got: ansatz.len(),
        });
    }
    for a in ansatz {
        a.check_polynomial("multiplier ansatz")?;
    }
    let unknowns = all_unknowns(ansatz)?;
    check_fresh(system, &unknowns)?;
    let v: Vec<Expr> = ansatz.iter().map(Ansatz::expr).collect();
    let l = formal_lagrangian(system, &v)?;
    let ctx = system.ctx();
    let exprs: Vec<(String, Expr)> = (0..system.n_dep())
        .map(|alpha| (format!("E[{}]:", ctx.dep_names()[alpha]), euler(&l, alpha)))
        .collect();
    DeterminingSystem::assemble(Origin::Multiplier, &unknowns, &exprs, ctx)
}

/// Solves the multiplier system and instantiates a basis of multipliers,
/// rechecking each one against the Euler operator.
pub fn multipliers(
    system: &PdeSystem,
    ansatz: &[Ansatz],
) -> Result<(DeterminingSystem, SolutionSpace, Vec<MultiplierSet>)> {
    let det = multiplier_determining_system(system, ansatz)?;
    let space = det.solve();
    let mut sets = Vec::with_capacity(space.dim());
    for vec in &space.basis {
        let values: BTreeMap<String, BigRational> = space.assignment(vec);
        let v: Vec<Expr> = ansatz.iter().map(|a| a.instantiate(&values)).collect();
        let l = formal_lagrangian(system, &v)?;
        if let Some(alpha) = (0..system.n_dep()).find(|&a| !euler(&l, a).vanishes()) {
            return Err(Error::Internal(format!(
                "multiplier fails Euler check for dependent variable #{alpha}"
            )));
        }
        sets.push(MultiplierSet { v });
    }
    Ok((det, space, sets))
}

/// Whether two lists of expression vectors span the same space over the
/// rationals, comparing coefficients monomial by monomial.
pub fn expr_span_equal(a: &[Vec<Expr>], b: &[Vec<Expr>]) -> Result<bool> {
    let none = BTreeSet::new();
    let mut keys: BTreeMap<(usize, String), usize> = BTreeMap::new();
    let mut sparse = Vec::with_capacity(a.len() + b.len());
    for v in a.iter().chain(b) {
        let mut entries = Vec::new();
        for (k, e) in v.iter().enumerate() {
            for (m, form) in collect(e, &none)? {
                let next = keys.len();
                let col = *keys.entry((k, m.to_string())).or_insert(next);
                entries.push((col, form.constant));
            }
        }
        sparse.push(entries);
    }
    let dense: Vec<Vec<BigRational>> = sparse
        .into_iter()
        .map(|entries| {
            let mut row = vec![BigRational::from_integer(0.into()); keys.len()];
            for (c, x) in entries {
                row[c] = x;
            }
            row
        })
        .collect();
    let (da, db) = dense.split_at(a.len());
    Ok(span_equal(da, db))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Equation;
    use crate::expr::{JetCoord, MultiIndex};
    use crate::lawgen::ansatz::jet_variables;

    fn kdv() -> PdeSystem {
        let ctx = Context::new(&["t", "x"], &["u"]).unwrap();
        let rhs = Expr::parse("u[x,x,x] + u*u[x]", &ctx).unwrap();
        let eq = Equation {
            lead: JetCoord::new(0, MultiIndex::new([0])),
            rhs,
        };
        PdeSystem::new("kdv", ctx, vec![eq]).unwrap()
    }

    #[test]
    fn kdv_multiplier_span() {
        let s = kdv();
        let a = Ansatz::polynomial("_v0", &jet_variables(2, 1, 0), 2);
        let (_, space, sets) = multipliers(&s, std::slice::from_ref(&a)).unwrap();
        assert_eq!(space.dim(), 3);
        assert_eq!(sets.len(), 3);
        let expected: Vec<Vec<BigRational>> = ["1", "u", "x+t*u"]
            .iter()
            .map(|t| {
                let e = Expr::parse(t, s.ctx()).unwrap();
                a.coordinates(&e).unwrap().unwrap()
            })
            .collect();
        assert!(span_equal(&space.basis, &expected));
        let found: Vec<Vec<Expr>> = sets.into_iter().map(|m| m.v).collect();
        let p = |t: &str| vec![Expr::parse(t, s.ctx()).unwrap()];
        assert!(expr_span_equal(&found, &[p("1"), p("u"), p("x+t*u")]).unwrap());
        assert!(expr_span_equal(&found, &[p("1+u"), p("1-u"), p("x+t*u+3")]).unwrap());
        assert!(!expr_span_equal(&found, &[p("1"), p("u"), p("x")]).unwrap());
        assert!(!expr_span_equal(&found, &[p("1"), p("u")]).unwrap());
    }

    #[test]
    fn zero_ansatz_gives_empty_system() {
        let s = kdv();
        let det = multiplier_determining_system(&s, &[Ansatz::zero()]).unwrap();
        assert_eq!(det.n_equations(), 0);
        assert!(det.solve().is_trivial());
    }

    #[test]
    fn radical_ansatz_is_rejected() {
        let s = kdv();
        let b = Expr::parse("(1+u^2)^(1/2)", s.ctx()).unwrap();
        let a = Ansatz::from_basis("_v0", vec![b]).unwrap();
        assert!(matches!(
            multiplier_determining_system(&s, &[a]),
            Err(Error::Ansatz(_))
        ));
    }
}
