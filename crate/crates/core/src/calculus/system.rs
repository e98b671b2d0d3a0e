use crate::error::{Error, Result};
use crate::expr::{Atom, Context, Expr, JetCoord, MultiIndex};

/// One equation in solved form, `lead = rhs`; its residual is `lead - rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lead: JetCoord,
    pub rhs: Expr,
}

impl Equation {
    pub fn residual(&self) -> Expr {
        Expr::atom(Atom::Jet(self.lead.clone())).sub(&self.rhs)
    }
}

/// A PDE system `F_a = 0` together with its declared solved form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSystem {
    name: String,
    ctx: Context,
    equations: Vec<Equation>,
    residuals: Vec<Expr>,
}

impl PdeSystem {
    /// Validates the solved form: leading coordinates are distinct, none is
    /// a derivative of another, and no right-hand side mentions a leading
    /// coordinate or any of its derivatives.
    pub fn new(name: impl Into<String>, ctx: Context, equations: Vec<Equation>) -> Result<Self> {
        let n = ctx.n_indep();
        let m = ctx.n_dep();
        if equations.is_empty() {
            return Err(Error::InvalidSystem("system has no equations".into()));
        }
        for (k, eq) in equations.iter().enumerate() {
            if eq.lead.order() == 0 {
                return Err(Error::InvalidSystem(format!(
                    "equation {}: leading coordinate must be a derivative",
                    k + 1
                )));
            }
            check_ranges(&Expr::atom(Atom::Jet(eq.lead.clone())), n, m)?;
            check_ranges(&eq.rhs, n, m)?;
            for (other_k, other) in equations.iter().enumerate() {
                if other_k != k
                    && other.lead.dep == eq.lead.dep
                    && eq.lead.index.contains(&other.lead.index)
                {
                    return Err(Error::InvalidSystem(format!(
                        "leading coordinate of equation {} is a derivative of that of equation {}",
                        k + 1,
                        other_k + 1
                    )));
                }
            }
        }
        let sys = PdeSystem {
            name: name.into(),
            residuals: equations.iter().map(Equation::residual).collect(),
            ctx,
            equations,
        };
        for (k, eq) in sys.equations.iter().enumerate() {
            if let Some(j) = eq.rhs.jets().iter().find(|j| sys.leading_for(j).is_some()) {
                return Err(Error::InvalidSystem(format!(
                    "right-hand side of equation {} contains leading coordinate {}",
                    k + 1,
                    Expr::atom(Atom::Jet(j.clone())).to_text(&sys.ctx)
                )));
            }
        }
        Ok(sys)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn n_indep(&self) -> usize {
        self.ctx.n_indep()
    }

    pub fn n_dep(&self) -> usize {
        self.ctx.n_dep()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// `F_a = lead_a - rhs_a` for every equation.
    pub fn residuals(&self) -> &[Expr] {
        &self.residuals
    }

    pub fn order(&self) -> usize {
        self.residuals
            .iter()
            .map(Expr::differential_order)
            .max()
            .unwrap_or(0)
    }

    /// If `jet` is a leading coordinate or one of its derivatives, returns
    /// the equation index and the extra derivative multi-index.
    pub fn leading_for(&self, jet: &JetCoord) -> Option<(usize, MultiIndex)> {
        self.equations.iter().enumerate().find_map(|(k, eq)| {
            if eq.lead.dep != jet.dep {
                return None;
            }
            jet.index.difference(&eq.lead.index).map(|rest| (k, rest))
        })
    }
}

fn check_ranges(e: &Expr, n: usize, m: usize) -> Result<()> {
    let mut bad = None;
    e.visit_atoms(&mut |a| match a {
        Atom::Indep(i) if *i >= n => bad = Some(format!("independent variable #{i}")),
        Atom::Jet(j) if j.dep >= m || j.index.indices().iter().any(|&i| i >= n) => {
            bad = Some(format!("jet coordinate of dependent variable #{}", j.dep))
        }
        _ => {}
    });
    match bad {
        Some(what) => Err(Error::InvalidSystem(format!("{what} is out of range"))),
        None => Ok(()),
    }
}
