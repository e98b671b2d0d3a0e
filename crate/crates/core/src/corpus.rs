//! Built-in models, stored in the model-file format.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::calculus::symmetry_residual;
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::lawgen::{expr_span_equal, is_trivial, mixed_method, multipliers, verify, MixedOptions};
use crate::model::{AnsatzConfig, Model};

const SOURCES: [(&str, &str); 5] = [
    ("kdv", include_str!("../models/kdv.model")),
    ("fw", include_str!("../models/fw.model")),
    ("sp", include_str!("../models/sp.model")),
    ("gas1", include_str!("../models/gas1.model")),
    ("gas3", include_str!("../models/gas3.model")),
];

/// Raw model-file text of a built-in model.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn builtin_models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| {
        SOURCES
            .iter()
            .map(|(name, text)| {
                Model::parse(text).unwrap_or_else(|e| panic!("built-in model `{name}`: {e}"))
            })
            .collect()
    })
}

pub fn lookup(name: &str) -> Result<&'static Model> {
    builtin_models()
        .iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| Error::UnknownModel(name.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Symmetry,
    Law,
    /// A parametrized law at one numeric instance.
    Instance,
    Multipliers,
    Mixed,
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Symmetry => "symmetry",
            FixtureKind::Law => "law",
            FixtureKind::Instance => "instance",
            FixtureKind::Multipliers => "multipliers",
            FixtureKind::Mixed => "mixed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub label: String,
    /// Whether the check came out positive (residual zero, span matched, ...).
    pub holds: bool,
    /// `None` when the outcome is only recorded, as for instances of a
    /// misprinted law.
    pub expected: Option<bool>,
    /// Nonzero residuals in normal form, or a short summary.
    pub detail: Vec<String>,
}

impl Fixture {
    pub fn passed(&self) -> bool {
        self.expected.is_none_or(|e| e == self.holds)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub model: String,
    pub fixtures: Vec<Fixture>,
}

impl Report {
    pub fn is_empty(&self) -> bool {
        self.fixtures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.fixtures.iter().all(Fixture::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Fixture> {
        self.fixtures.iter().filter(|f| !f.passed())
    }

    pub fn get(&self, kind: FixtureKind, label: &str) -> Option<&Fixture> {
        self.fixtures
            .iter()
            .find(|f| f.kind == kind && f.label == label)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.fixtures {
            let tag = match (x.passed(), x.expected) {
                (true, None) => "NOTE",
                (true, _) => "PASS",
                (false, _) => "FAIL",
            };
            let verdict = if x.holds { "holds" } else { "does not hold" };
            writeln!(f, "{tag} {} {} {}: {verdict}", self.model, x.kind, x.label)?;
            for d in &x.detail {
                writeln!(f, "    {d}")?;
            }
        }
        Ok(())
    }
}

/// Instances of a law with parameters and function symbols: every parameter
/// zero with each function `≡ 1`, then each parameter at one with the
/// functions `≡ 0`, then every parameter zero with each function equal to its
/// own argument.
pub fn law_instances(law: &[Expr]) -> Vec<(String, Vec<Expr>)> {
    let mut params = BTreeSet::new();
    let mut funcs = BTreeSet::new();
    for e in law {
        params.extend(e.params());
        e.visit_atoms(&mut |a| {
            if let Atom::Func(fs) = a {
                funcs.insert(fs.name.clone());
            }
        });
    }
    if params.is_empty() && funcs.is_empty() {
        return Vec::new();
    }
    let inst = |unit: Option<&str>, func: &dyn Fn(&Expr) -> Expr| -> Vec<Expr> {
        law.iter()
            .map(|e| {
                e.substitute_with(&|a: &Atom| match a {
                    Atom::Param(p) => Some(if Some(p.as_str()) == unit {
                        Expr::one()
                    } else {
                        Expr::zero()
                    }),
                    Atom::Func(fs) if fs.order == 0 => Some(func(&fs.arg)),
                    Atom::Func(_) => Some(Expr::zero()),
                    _ => None,
                })
                .expect("integer and argument substitutions cannot fail")
            })
            .collect()
    };
    let mut out = Vec::new();
    if !funcs.is_empty() {
        out.push(("f=1".to_string(), inst(None, &|_| Expr::one())));
    }
    for p in &params {
        out.push((format!("{p}=1"), inst(Some(p), &|_| Expr::zero())));
    }
    if !funcs.is_empty() {
        out.push(("f=arg".to_string(), inst(None, &|arg| arg.clone())));
    }
    out
}

fn residual_fixture(
    model: &Model,
    kind: FixtureKind,
    label: String,
    residuals: Vec<Expr>,
    expected: Option<bool>,
) -> Fixture {
    let nonzero: Vec<String> = residuals
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.to_text(model.ctx()))
        .collect();
    Fixture {
        kind,
        label,
        holds: nonzero.is_empty(),
        expected,
        detail: nonzero,
    }
}

fn error_fixture(kind: FixtureKind, label: String, e: Error) -> Fixture {
    Fixture {
        kind,
        label,
        holds: false,
        expected: Some(true),
        detail: vec![format!("error: {e}")],
    }
}

/// Checks every stored generator and law, then runs the default multiplier
/// and mixed-method pipelines when the model has an ansatz configuration.
pub fn regression_run(model: &Model) -> Report {
    let system = &model.system;
    let mut fixtures = Vec::new();

    for g in &model.generators {
        let label = g.label.clone();
        fixtures.push(match symmetry_residual(g, system) {
            Ok(r) => residual_fixture(model, FixtureKind::Symmetry, label, r, Some(true)),
            Err(e) => error_fixture(FixtureKind::Symmetry, label, e),
        });
    }

    for law in &model.laws {
        let expects = law.status.expects_conserved();
        let label = format!("{} [{}]", law.label, law.status);
        fixtures.push(match verify(system, &law.components) {
            Ok(r) => residual_fixture(model, FixtureKind::Law, label, vec![r], Some(expects)),
            Err(e) => error_fixture(FixtureKind::Law, label, e),
        });
        for (name, comps) in law_instances(&law.components) {
            let label = format!("{} {name}", law.label);
            let expected = expects.then_some(true);
            fixtures.push(match verify(system, &comps) {
                Ok(r) => residual_fixture(model, FixtureKind::Instance, label, vec![r], expected),
                Err(e) => error_fixture(FixtureKind::Instance, label, e),
            });
        }
    }

    if let Some(cfg) = &model.ansatz {
        fixtures.push(multiplier_fixture(model, cfg));
        for label in &cfg.mixed {
            fixtures.push(mixed_fixture(model, cfg, label));
        }
    }

    Report {
        model: model.name().to_string(),
        fixtures,
    }
}

fn multiplier_fixture(model: &Model, cfg: &AnsatzConfig) -> Fixture {
    let label = format!(
        "order {} degree {}",
        cfg.multiplier_order, cfg.multiplier_degree
    );
    let sets = match multipliers(&model.system, &cfg.multipliers(&model.system)) {
        Ok((_, _, sets)) => sets,
        Err(e) => return error_fixture(FixtureKind::Multipliers, label, e),
    };
    let found: Vec<Vec<Expr>> = sets.into_iter().map(|s| s.v).collect();
    let holds = match expr_span_equal(&found, &model.multipliers) {
        Ok(h) => h,
        Err(e) => return error_fixture(FixtureKind::Multipliers, label, e),
    };
    let ctx = model.ctx();
    let detail = found
        .iter()
        .map(|v| {
            let parts: Vec<String> = v.iter().map(|e| e.to_text(ctx)).collect();
            format!("found {}", parts.join(" ; "))
        })
        .collect();
    Fixture {
        kind: FixtureKind::Multipliers,
        label,
        holds,
        expected: Some(true),
        detail,
    }
}

fn mixed_fixture(model: &Model, cfg: &AnsatzConfig, label: &str) -> Fixture {
    let system = &model.system;
    let run = || -> Result<Fixture> {
        let g = model.resolve_generator(label)?;
        let theta = cfg.theta(system);
        let opts = MixedOptions {
            theta: Some(theta.clone()),
            ..MixedOptions::default()
        };
        let r = mixed_method(system, &g, &cfg.psi(system), &cfg.h(system), &opts)?;
        let mut detail = vec![format!(
            "solution dim {}, trivial {}, laws {}",
            r.solution.dim(),
            r.trivial_dim,
            r.laws.len()
        )];
        let mut holds = !r.laws.is_empty();
        for law in &r.laws {
            let residual = verify(system, &law.components)?;
            let trivial = is_trivial(system, &law.components, &theta)?.is_trivial();
            holds &= residual.is_zero() && !trivial;
            let parts: Vec<String> = law
                .components
                .iter()
                .map(|e| e.to_text(model.ctx()))
                .collect();
            detail.push(format!("T = {}", parts.join(" ; ")));
        }
        Ok(Fixture {
            kind: FixtureKind::Mixed,
            label: label.to_string(),
            holds,
            expected: Some(true),
            detail,
        })
    };
    run().unwrap_or_else(|e| error_fixture(FixtureKind::Mixed, label.to_string(), e))
}
