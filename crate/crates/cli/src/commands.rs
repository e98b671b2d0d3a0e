use std::path::Path;

use clawforge_core::calculus::{euler as euler_op, total_derivative};
use clawforge_core::corpus;
use clawforge_core::lawgen::MixedOptions;
use clawforge_core::lawgen::{
    mixed_method, multipliers as solve_multipliers, verify as residual_of,
};
use clawforge_core::model::{generator_text, AnsatzConfig, Model, ReferenceLaw};
use clawforge_core::{Atom, Context, Error, Expr};
use serde::Serialize;

use crate::report::{
    LawReport, MixedLaw, MixedReport, ModelSummary, MultiplierReport, OperatorReport, VerifyReport,
};

/// Degree cap applied when `CLAWFORGE_MAX_DEGREE` is unset.
pub const DEFAULT_MAX_DEGREE: u32 = 6;

pub enum Failure {
    /// Ran to completion, but the answer is negative.
    Semantic,
    /// Bad input: unreadable files, parse errors, unknown names, bad flags.
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::IterationCap(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub struct Output {
    pub json: bool,
    pub verbose: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, doc: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
        if self.json {
            let s =
                serde_json::to_string_pretty(doc).map_err(|e| Failure::Internal(e.to_string()))?;
            println!("{s}");
        } else {
            print!("{}", text());
        }
        Ok(())
    }
}

pub struct MixedArgs {
    pub psi_degree: Option<u32>,
    pub h_degree: Option<u32>,
    pub jet_order: Option<usize>,
    pub theta_degree: Option<u32>,
    pub require_laws: bool,
}

fn max_degree() -> Result<u32, Failure> {
    match std::env::var("CLAWFORGE_MAX_DEGREE") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("CLAWFORGE_MAX_DEGREE: `{s}` is not a degree"))),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn check_degree(what: &str, d: u32) -> Result<(), Failure> {
    let cap = max_degree()?;
    if d > cap {
        return Err(Failure::Input(format!(
            "{what} {d} exceeds the cap of {cap} (set CLAWFORGE_MAX_DEGREE to raise it)"
        )));
    }
    Ok(())
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

/// A model file path, or the name of a built-in model.
pub fn load_model(spec: &str) -> Result<Model, Failure> {
    if Path::new(spec).is_file() {
        return Model::parse(&read(spec)?).map_err(|e| Failure::Input(format!("{spec}: {e}")));
    }
    Ok(corpus::lookup(spec)?.clone())
}

fn texts(v: &[Expr], ctx: &Context) -> Vec<String> {
    v.iter().map(|e| e.to_text(ctx)).collect()
}

fn law_report(model: &Model, law: &ReferenceLaw, expect: bool) -> Result<LawReport, Failure> {
    let residual = residual_of(&model.system, &law.components)?;
    Ok(LawReport {
        label: law.label.clone(),
        status: law.status.to_string(),
        fluxes: texts(&law.components, model.ctx()),
        residual: residual.to_text(model.ctx()),
        ok: residual.is_zero() == expect,
    })
}

pub fn verify(out: &Output, model: &str, laws: Option<&str>) -> Outcome {
    let model = load_model(model)?;
    let reports = match laws {
        Some(path) => {
            let laws = model
                .parse_laws(&read(path)?)
                .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            laws.iter()
                .map(|l| law_report(&model, l, true))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => model
            .laws
            .iter()
            .map(|l| law_report(&model, l, l.status.expects_conserved()))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let doc = VerifyReport {
        model: model.name().to_string(),
        ok: reports.iter().all(|r| r.ok),
        laws: reports,
    };
    out.emit(&doc, || {
        let mut s = String::new();
        for r in &doc.laws {
            let verdict = if r.residual == "0" {
                "conserved"
            } else {
                "NOT conserved"
            };
            let mark = if r.ok { "ok" } else { "FAIL" };
            s += &format!("{mark:4} {} [{}]: {verdict}\n", r.label, r.status);
            s += &format!("     T = ({})\n", r.fluxes.join(" ; "));
            if r.residual != "0" {
                s += &format!("     residual: {}\n", r.residual);
            }
        }
        s
    })?;
    if doc.ok {
        Ok(())
    } else {
        Err(Failure::Semantic)
    }
}

pub fn multipliers(
    out: &Output,
    model: &str,
    order: Option<usize>,
    degree: Option<u32>,
) -> Outcome {
    let model = load_model(model)?;
    let mut cfg = model.ansatz.clone().unwrap_or_default();
    if let Some(o) = order {
        cfg.multiplier_order = o;
    }
    if let Some(d) = degree {
        cfg.multiplier_degree = d;
    }
    if cfg.multiplier_order > 1 {
        return Err(Failure::Input(format!(
            "multiplier order {} is not supported; use 0 or 1",
            cfg.multiplier_order
        )));
    }
    check_degree("multiplier degree", cfg.multiplier_degree)?;
    let system = &model.system;
    let (det, space, sets) = solve_multipliers(system, &cfg.multipliers(system))?;
    let doc = MultiplierReport {
        model: model.name().to_string(),
        order: cfg.multiplier_order,
        degree: cfg.multiplier_degree,
        equations: det.n_equations(),
        unknowns: det.n_unknowns(),
        rank: det.n_unknowns() - space.dim(),
        multipliers: sets.iter().map(|s| texts(&s.v, model.ctx())).collect(),
    };
    out.emit(&doc, || {
        let mut s = format!(
            "{}: order {}, degree {}: {} equations in {} unknowns, rank {}\n",
            doc.model, doc.order, doc.degree, doc.equations, doc.unknowns, doc.rank
        );
        s += &format!("{} multiplier(s)\n", doc.multipliers.len());
        for v in &doc.multipliers {
            s += &format!("  {}\n", v.join(" ; "));
        }
        s
    })
}

pub fn mixed(out: &Output, model: &str, generator: &str, args: MixedArgs) -> Outcome {
    let model = load_model(model)?;
    let g = model.resolve_generator(generator)?;
    let mut cfg: AnsatzConfig = model.ansatz.clone().unwrap_or_default();
    if let Some(d) = args.psi_degree {
        cfg.psi_degree = d;
    }
    if let Some(d) = args.h_degree {
        cfg.h_degree = d;
    }
    if let Some(o) = args.jet_order {
        cfg.jet_order = o;
    }
    if let Some(d) = args.theta_degree {
        cfg.theta_degree = d;
    }
    check_degree("psi degree", cfg.psi_degree)?;
    check_degree("H degree", cfg.h_degree)?;
    check_degree("theta degree", cfg.theta_degree)?;
    let system = &model.system;
    if cfg.jet_order >= system.order() {
        return Err(Failure::Input(format!(
            "jet order {} must be below the system order {}",
            cfg.jet_order,
            system.order()
        )));
    }
    let opts = MixedOptions {
        theta: Some(cfg.theta(system)),
        ..MixedOptions::default()
    };
    let r = mixed_method(system, &g, &cfg.psi(system), &cfg.h(system), &opts)?;
    let ctx = model.ctx();
    let laws: Vec<MixedLaw> = r
        .laws
        .iter()
        .map(|l| MixedLaw {
            psi: texts(&l.psi, ctx),
            h: texts(&l.h, ctx),
            h_is_zero: l.h_is_zero(),
            fluxes: texts(&l.components, ctx),
            residual: l.residual.to_text(ctx),
            trivial_witness: l.stripped.to_text(ctx),
            raw: out.verbose.then(|| texts(&l.raw, ctx)),
        })
        .collect();
    let doc = MixedReport {
        model: model.name().to_string(),
        generator: g.label.clone(),
        equations: r.determining.n_equations(),
        unknowns: r.determining.n_unknowns(),
        solution_dim: r.solution.dim(),
        trivial_dim: r.trivial_dim,
        laws,
    };
    out.emit(&doc, || {
        let mut s = format!("{} {}\n", doc.model, generator_text(&g, ctx));
        s += &format!(
            "{} equations in {} unknowns; solution dim {}, trivial {}; {} law(s)\n",
            doc.equations,
            doc.unknowns,
            doc.solution_dim,
            doc.trivial_dim,
            doc.laws.len()
        );
        for (k, l) in doc.laws.iter().enumerate() {
            s += &format!("law {}\n", k + 1);
            s += &format!("  psi = {}\n", l.psi.join(" ; "));
            s += &format!("  H   = ({})", l.h.join(" ; "));
            s += if l.h_is_zero { "  [H = 0]\n" } else { "\n" };
            s += &format!("  T   = ({})\n", l.fluxes.join(" ; "));
            s += &format!("  residual: {}\n", l.residual);
            if let Some(raw) = &l.raw {
                s += &format!("  stripped potential: {}\n", l.trivial_witness);
                s += &format!("  raw T = ({})\n", raw.join(" ; "));
            }
        }
        s
    })?;
    if args.require_laws && doc.laws.is_empty() {
        return Err(Failure::Semantic);
    }
    Ok(())
}

pub fn models(out: &Output) -> Outcome {
    let docs: Vec<ModelSummary> = corpus::builtin_models()
        .iter()
        .map(|m| {
            let ctx = m.ctx();
            ModelSummary {
                name: m.name().to_string(),
                indep: ctx.indep_names().to_vec(),
                dep: ctx.dep_names().to_vec(),
                equations: m
                    .system
                    .equations()
                    .iter()
                    .map(|eq| {
                        let lead = Expr::atom(Atom::Jet(eq.lead.clone()));
                        format!("{} = {}", lead.to_text(ctx), eq.rhs.to_text(ctx))
                    })
                    .collect(),
                generators: m.generators.iter().map(|g| g.label.clone()).collect(),
                laws: m.laws.len(),
            }
        })
        .collect();
    out.emit(&docs, || {
        let mut s = String::new();
        for d in &docs {
            s += &format!(
                "{:5} ({}; {}) generators {}, {} laws\n",
                d.name,
                d.indep.join(", "),
                d.dep.join(", "),
                d.generators.join(" "),
                d.laws
            );
            for eq in &d.equations {
                s += &format!("      {eq}\n");
            }
        }
        s
    })
}

fn operator(out: &Output, model: &Model, input: &str, result: Vec<String>) -> Outcome {
    let doc = OperatorReport {
        model: model.name().to_string(),
        input: input.to_string(),
        result,
    };
    out.emit(&doc, || {
        let mut s = String::new();
        for r in &doc.result {
            s += r;
            s.push('\n');
        }
        s
    })
}

pub fn euler(out: &Output, model: &str, expr: &str, dep: Option<&str>) -> Outcome {
    let model = load_model(model)?;
    let ctx = model.ctx();
    let e = Expr::parse(expr, ctx)?;
    let deps: Vec<usize> = match dep {
        Some(name) => vec![ctx
            .dep_index(name)
            .ok_or_else(|| Failure::Input(format!("`{name}` is not a dependent variable")))?],
        None => (0..ctx.n_dep()).collect(),
    };
    let result = deps.iter().map(|&a| euler_op(&e, a).to_text(ctx)).collect();
    operator(out, &model, expr, result)
}

pub fn tderiv(out: &Output, model: &str, var: &str, expr: &str) -> Outcome {
    let model = load_model(model)?;
    let ctx = model.ctx();
    let i = ctx
        .indep_index(var)
        .ok_or_else(|| Failure::Input(format!("`{var}` is not an independent variable")))?;
    let e = Expr::parse(expr, ctx)?;
    let result = vec![total_derivative(&e, i).to_text(ctx)];
    operator(out, &model, expr, result)
}
