//! Model files: declarations, a solved-form system, generators, candidate
//! laws and ansatz defaults in one sectioned text format.
//!
//! ```text
//! [vars]
//! name = kdv
//! indep = t, x
//! dep = u
//! params = k
//! funcs = f
//!
//! [equations]
//! u[t] = u[x,x,x] + u*u[x]
//!
//! [generators]
//! X2: t = 3*t; x = x; u = -2*u
//!
//! [laws]
//! mass [exact]: u ; -(u^2/2 + u[x,x])
//!
//! [multipliers]
//! 1
//! x + t*u
//!
//! [ansatz]
//! psi_degree = 2
//! mixed = X4
//!
//! [notes]
//! free text
//! ```
//!
//! `#` starts a comment. Variables missing from a generator have a zero
//! coefficient. A law's status defaults to `exact`. Each `[multipliers]` line
//! is one expected basis element of the multiplier space, one component per
//! equation separated by `;`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::calculus::{Equation, Generator, PdeSystem};
use crate::error::{Error, Result};
use crate::expr::{Atom, Context, Expr, JetCoord, Symbol};
use crate::lawgen::{default_theta, jet_variables, Ansatz};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawStatus {
    /// Conserved exactly as printed in the source.
    Exact,
    /// Conserved after fixing a sign in the printed form.
    SignCorrected,
    /// Computed here; not printed in the source in this form.
    Derived,
    /// The printed form, which does not verify.
    PrintedTypo,
}

impl LawStatus {
    /// Whether a fresh verification should give a zero residual.
    pub fn expects_conserved(self) -> bool {
        self != LawStatus::PrintedTypo
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LawStatus::Exact => "exact",
            LawStatus::SignCorrected => "sign-corrected",
            LawStatus::Derived => "derived",
            LawStatus::PrintedTypo => "printed-typo",
        }
    }
}

impl fmt::Display for LawStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LawStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(LawStatus::Exact),
            "sign-corrected" => Ok(LawStatus::SignCorrected),
            "derived" => Ok(LawStatus::Derived),
            "printed-typo" => Ok(LawStatus::PrintedTypo),
            other => Err(format!("unknown law status `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceLaw {
    pub label: String,
    pub status: LawStatus,
    pub components: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzConfig {
    pub psi_degree: u32,
    pub h_degree: u32,
    /// Highest jet order admitted in ψ and H.
    pub jet_order: usize,
    pub theta_degree: u32,
    pub multiplier_order: usize,
    pub multiplier_degree: u32,
    /// Generators the default mixed-method pipeline runs on.
    pub mixed: Vec<String>,
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        AnsatzConfig {
            psi_degree: 2,
            h_degree: 2,
            jet_order: 0,
            theta_degree: 3,
            multiplier_order: 0,
            multiplier_degree: 2,
            mixed: Vec::new(),
        }
    }
}

impl AnsatzConfig {
    /// One polynomial ψ ansatz per equation.
    pub fn psi(&self, system: &PdeSystem) -> Vec<Ansatz> {
        let vars = jet_variables(system.n_indep(), system.n_dep(), self.jet_order);
        (0..system.equations().len())
            .map(|k| Ansatz::polynomial(&format!("_psi{k}"), &vars, self.psi_degree))
            .collect()
    }

    /// One polynomial H ansatz per independent variable.
    pub fn h(&self, system: &PdeSystem) -> Vec<Ansatz> {
        let vars = jet_variables(system.n_indep(), system.n_dep(), self.jet_order);
        (0..system.n_indep())
            .map(|i| Ansatz::polynomial(&format!("_h{i}"), &vars, self.h_degree))
            .collect()
    }

    /// Potential ansatz for the triviality filter, at least one degree above H.
    pub fn theta(&self, system: &PdeSystem) -> Ansatz {
        default_theta(system, self.theta_degree.max(self.h_degree + 1))
    }

    /// One multiplier ansatz per equation.
    pub fn multipliers(&self, system: &PdeSystem) -> Vec<Ansatz> {
        let vars = jet_variables(system.n_indep(), system.n_dep(), self.multiplier_order);
        (0..system.equations().len())
            .map(|k| Ansatz::polynomial(&format!("_v{k}"), &vars, self.multiplier_degree))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub system: PdeSystem,
    pub generators: Vec<Generator>,
    pub laws: Vec<ReferenceLaw>,
    /// Expected basis of the multiplier space at the configured ansatz.
    pub multipliers: Vec<Vec<Expr>>,
    /// Absent when the file has no `[ansatz]` section; no pipelines run then.
    pub ansatz: Option<AnsatzConfig>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Vars,
    Equations,
    Generators,
    Laws,
    Multipliers,
    Ansatz,
    Notes,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("").trim()
}

fn sections(text: &str) -> Result<Vec<(Section, Vec<Line<'_>>)>> {
    let mut out: Vec<(Section, Vec<Line<'_>>)> = vec![(Section::None, Vec::new())];
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let current = out.last().map(|s| s.0);
        let line = if current == Some(Section::Notes) {
            raw.trim()
        } else {
            strip_comment(raw)
        };
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let s = match name.trim() {
                "vars" => Section::Vars,
                "equations" => Section::Equations,
                "generators" => Section::Generators,
                "laws" => Section::Laws,
                "multipliers" => Section::Multipliers,
                "ansatz" => Section::Ansatz,
                "notes" => Section::Notes,
                other => return Err(Error::model(no, format!("unknown section `[{other}]`"))),
            };
            if out.iter().any(|(t, _)| *t == s) {
                return Err(Error::model(no, format!("section `[{name}]` repeated")));
            }
            out.push((s, Vec::new()));
            continue;
        }
        if line.is_empty() {
            continue;
        }
        out.last_mut()
            .expect("nonempty")
            .1
            .push(Line { no, text: line });
    }
    if let Some(l) = out[0].1.first() {
        return Err(Error::model(l.no, "content before the first section"));
    }
    Ok(out)
}

fn key_value<'a>(l: &Line<'a>) -> Result<(&'a str, &'a str)> {
    l.text
        .split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::model(l.no, "expected `key = value`"))
}

fn list(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn at_line<T>(no: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Model { .. } => e,
        other => Error::model(no, other.to_string()),
    })
}

fn parse_expr(text: &str, ctx: &Context, no: usize) -> Result<Expr> {
    at_line(no, Expr::parse(text, ctx))
}

fn parse_lead(text: &str, ctx: &Context, no: usize) -> Result<JetCoord> {
    let e = parse_expr(text, ctx, no)?;
    match e.as_atom() {
        Some(Atom::Jet(j))
            if e.terms()
                .next()
                .is_some_and(|(_, c)| num_traits::One::is_one(c)) =>
        {
            Ok(j.clone())
        }
        _ => Err(Error::model(
            no,
            format!("`{text}` is not a jet coordinate"),
        )),
    }
}

fn parse_generator(l: &Line<'_>, ctx: &Context) -> Result<Generator> {
    let (label, body) = l
        .text
        .split_once(':')
        .ok_or_else(|| Error::model(l.no, "expected `label: var = coeff; ...`"))?;
    let label = label.trim();
    let mut xi = vec![Expr::zero(); ctx.n_indep()];
    let mut eta = vec![Expr::zero(); ctx.n_dep()];
    for part in body.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (var, coeff) = part
            .split_once('=')
            .ok_or_else(|| Error::model(l.no, format!("expected `var = coeff` in `{part}`")))?;
        let var = var.trim();
        let c = parse_expr(coeff.trim(), ctx, l.no)?;
        let slot = match ctx.lookup(var) {
            Some(Symbol::Indep(i)) => &mut xi[i],
            Some(Symbol::Dep(a)) => &mut eta[a],
            _ => return Err(Error::model(l.no, format!("`{var}` is not a variable"))),
        };
        if !slot.is_zero() {
            return Err(Error::model(
                l.no,
                format!("coefficient of `{var}` given twice"),
            ));
        }
        *slot = c;
    }
    at_line(l.no, Generator::new(label, xi, eta))
}

fn parse_law(l: &Line<'_>, ctx: &Context) -> Result<ReferenceLaw> {
    let (head, body) = l
        .text
        .split_once(':')
        .ok_or_else(|| Error::model(l.no, "expected `label [status]: T1 ; T2 ...`"))?;
    let head = head.trim();
    let (label, status) = match head.split_once('[') {
        Some((label, rest)) => {
            let s = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::model(l.no, "unterminated status"))?;
            let status = s
                .trim()
                .parse()
                .map_err(|m: String| Error::model(l.no, m))?;
            (label.trim(), status)
        }
        None => (head, LawStatus::Exact),
    };
    if label.is_empty() {
        return Err(Error::model(l.no, "empty law label"));
    }
    let components: Vec<Expr> = body
        .split(';')
        .map(|c| parse_expr(c.trim(), ctx, l.no))
        .collect::<Result<_>>()?;
    if components.len() != ctx.n_indep() {
        return Err(Error::model(
            l.no,
            format!(
                "law `{label}` has {} components, expected {}",
                components.len(),
                ctx.n_indep()
            ),
        ));
    }
    Ok(ReferenceLaw {
        label: label.to_string(),
        status,
        components,
    })
}

impl Model {
    pub fn parse(text: &str) -> Result<Model> {
        let secs = sections(text)?;
        let find = |s: Section| {
            secs.iter()
                .find(|(t, _)| *t == s)
                .map(|(_, l)| l.as_slice())
        };
        let vars =
            find(Section::Vars).ok_or_else(|| Error::model(1, "missing `[vars]` section"))?;

        let mut kv: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for l in vars {
            let (k, v) = key_value(l)?;
            if !matches!(k, "name" | "indep" | "dep" | "params" | "funcs") {
                return Err(Error::model(l.no, format!("unknown key `{k}`")));
            }
            if kv.insert(k, (l.no, v)).is_some() {
                return Err(Error::model(l.no, format!("key `{k}` repeated")));
            }
        }
        let get = |k: &str| kv.get(k).map(|(_, v)| list(v)).unwrap_or_default();
        let line_of = |k: &str| kv.get(k).map_or(1, |(n, _)| *n);
        let name = kv
            .get("name")
            .map_or("model".to_string(), |(_, v)| v.to_string());
        let mut ctx = at_line(line_of("indep"), Context::new(&get("indep"), &get("dep")))?;
        for p in get("params") {
            at_line(line_of("params"), ctx.add_param(&p))?;
        }
        for f in get("funcs") {
            at_line(line_of("funcs"), ctx.add_func(&f))?;
        }

        let mut equations = Vec::new();
        let eq_lines = find(Section::Equations).unwrap_or(&[]);
        for l in eq_lines {
            let (lead, rhs) = l
                .text
                .split_once('=')
                .ok_or_else(|| Error::model(l.no, "expected `lead = rhs`"))?;
            equations.push(Equation {
                lead: parse_lead(lead.trim(), &ctx, l.no)?,
                rhs: parse_expr(rhs.trim(), &ctx, l.no)?,
            });
        }
        let first_eq = eq_lines.first().map_or(1, |l| l.no);
        let system = at_line(first_eq, PdeSystem::new(name, ctx, equations))?;
        let ctx = system.ctx().clone();

        let mut generators: Vec<Generator> = Vec::new();
        for l in find(Section::Generators).unwrap_or(&[]) {
            let g = parse_generator(l, &ctx)?;
            if generators.iter().any(|h| h.label == g.label) {
                return Err(Error::model(
                    l.no,
                    format!("generator `{}` repeated", g.label),
                ));
            }
            generators.push(g);
        }

        let laws = parse_law_lines(find(Section::Laws).unwrap_or(&[]), &ctx)?;

        let mut multipliers = Vec::new();
        for l in find(Section::Multipliers).unwrap_or(&[]) {
            let v: Vec<Expr> = l
                .text
                .split(';')
                .map(|c| parse_expr(c.trim(), &ctx, l.no))
                .collect::<Result<_>>()?;
            if v.len() != system.equations().len() {
                return Err(Error::model(
                    l.no,
                    format!(
                        "expected {} multiplier components",
                        system.equations().len()
                    ),
                ));
            }
            multipliers.push(v);
        }

        let ansatz = match find(Section::Ansatz) {
            Some(lines) => Some(parse_ansatz(lines, &generators)?),
            None => None,
        };

        let notes = find(Section::Notes)
            .unwrap_or(&[])
            .iter()
            .map(|l| l.text.to_string())
            .collect();

        Ok(Model {
            system,
            generators,
            laws,
            multipliers,
            ansatz,
            notes,
        })
    }

    /// Parses the `[laws]` section of `text` against this model's symbols.
    /// A full model file is accepted too; its other sections are ignored.
    pub fn parse_laws(&self, text: &str) -> Result<Vec<ReferenceLaw>> {
        let secs = sections(text)?;
        let lines = secs
            .iter()
            .find(|(s, _)| *s == Section::Laws)
            .map(|(_, l)| l.as_slice())
            .ok_or_else(|| Error::model(1, "missing `[laws]` section"))?;
        parse_law_lines(lines, self.system.ctx())
    }

    pub fn ctx(&self) -> &Context {
        self.system.ctx()
    }

    pub fn name(&self) -> &str {
        self.system.name()
    }

    pub fn generator(&self, label: &str) -> Result<&Generator> {
        self.generators
            .iter()
            .find(|g| g.label == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    /// Parses `label` or a numeric combination such as `2*X1 + X3`.
    pub fn resolve_generator(&self, spec: &str) -> Result<Generator> {
        if let Ok(g) = self.generator(spec.trim()) {
            return Ok(g.clone());
        }
        let mut ctx = Context::new(&[] as &[&str], &[] as &[&str])?;
        for g in &self.generators {
            ctx.add_param(&g.label)?;
        }
        let e = Expr::parse(spec, &ctx).map_err(|e| match e {
            Error::Undeclared { name, .. } => Error::UnknownGenerator(name),
            other => other,
        })?;
        let forms = linear_in_labels(&e, &self.generators)?;
        let parts: Vec<_> = forms
            .iter()
            .map(|(label, c)| Ok((c.clone(), self.generator(label)?)))
            .collect::<Result<_>>()?;
        if parts.is_empty() {
            return Err(Error::UnknownGenerator(spec.to_string()));
        }
        Generator::combine(spec.trim(), &parts)
    }

    /// Serializes back to the model-file format.
    pub fn to_text(&self) -> String {
        let ctx = self.ctx();
        let mut s = String::new();
        let _ = writeln!(s, "[vars]");
        let _ = writeln!(s, "name = {}", self.name());
        let _ = writeln!(s, "indep = {}", ctx.indep_names().join(", "));
        let _ = writeln!(s, "dep = {}", ctx.dep_names().join(", "));
        if !ctx.params().is_empty() {
            let _ = writeln!(s, "params = {}", ctx.params().join(", "));
        }
        if !ctx.funcs().is_empty() {
            let _ = writeln!(s, "funcs = {}", ctx.funcs().join(", "));
        }
        let _ = writeln!(s, "\n[equations]");
        for eq in self.system.equations() {
            let lead = Expr::atom(Atom::Jet(eq.lead.clone()));
            let _ = writeln!(s, "{} = {}", lead.display(ctx), eq.rhs.display(ctx));
        }
        if !self.generators.is_empty() {
            let _ = writeln!(s, "\n[generators]");
            for g in &self.generators {
                let _ = writeln!(s, "{}", generator_text(g, ctx));
            }
        }
        if !self.laws.is_empty() {
            let _ = writeln!(s, "\n[laws]");
            for law in &self.laws {
                let _ = writeln!(s, "{}", law_text(law, ctx));
            }
        }
        if !self.multipliers.is_empty() {
            let _ = writeln!(s, "\n[multipliers]");
            for v in &self.multipliers {
                let comps: Vec<String> = v.iter().map(|c| c.display(ctx).to_string()).collect();
                let _ = writeln!(s, "{}", comps.join(" ; "));
            }
        }
        if let Some(a) = &self.ansatz {
            let _ = writeln!(s, "\n[ansatz]");
            let _ = writeln!(s, "psi_degree = {}", a.psi_degree);
            let _ = writeln!(s, "h_degree = {}", a.h_degree);
            let _ = writeln!(s, "jet_order = {}", a.jet_order);
            let _ = writeln!(s, "theta_degree = {}", a.theta_degree);
            let _ = writeln!(s, "multiplier_order = {}", a.multiplier_order);
            let _ = writeln!(s, "multiplier_degree = {}", a.multiplier_degree);
            if !a.mixed.is_empty() {
                let _ = writeln!(s, "mixed = {}", a.mixed.join(", "));
            }
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s, "\n[notes]");
            for n in &self.notes {
                let _ = writeln!(s, "{n}");
            }
        }
        s
    }
}

fn parse_ansatz(lines: &[Line<'_>], generators: &[Generator]) -> Result<AnsatzConfig> {
    let mut a = AnsatzConfig::default();
    for l in lines {
        let (k, v) = key_value(l)?;
        if k == "mixed" {
            a.mixed = list(v);
            if let Some(g) = a
                .mixed
                .iter()
                .find(|g| !generators.iter().any(|h| &h.label == *g))
            {
                return Err(Error::model(l.no, format!("unknown generator `{g}`")));
            }
            continue;
        }
        let n: u32 = v
            .parse()
            .map_err(|_| Error::model(l.no, format!("`{v}` is not a nonnegative integer")))?;
        match k {
            "psi_degree" => a.psi_degree = n,
            "h_degree" => a.h_degree = n,
            "jet_order" => a.jet_order = n as usize,
            "theta_degree" => a.theta_degree = n,
            "multiplier_order" => a.multiplier_order = n as usize,
            "multiplier_degree" => a.multiplier_degree = n,
            other => return Err(Error::model(l.no, format!("unknown ansatz key `{other}`"))),
        }
    }
    Ok(a)
}

fn parse_law_lines(lines: &[Line<'_>], ctx: &Context) -> Result<Vec<ReferenceLaw>> {
    let mut laws: Vec<ReferenceLaw> = Vec::new();
    for l in lines {
        let law = parse_law(l, ctx)?;
        if laws.iter().any(|k| k.label == law.label) {
            return Err(Error::model(l.no, format!("law `{}` repeated", law.label)));
        }
        laws.push(law);
    }
    Ok(laws)
}

fn linear_in_labels(
    e: &Expr,
    generators: &[Generator],
) -> Result<BTreeMap<String, num_rational::BigRational>> {
    let labels = generators.iter().map(|g| g.label.clone()).collect();
    let forms = crate::expr::collect(e, &labels)?;
    let mut out = BTreeMap::new();
    for (key, form) in forms {
        if !key.is_one() || !num_traits::Zero::is_zero(&form.constant) {
            return Err(Error::SymbolicGenerator(format!(
                "combination `{e}` is not a numeric linear combination"
            )));
        }
        out.extend(form.coeffs);
    }
    Ok(out)
}

/// `label: var = coeff; ...` with zero coefficients omitted.
pub fn generator_text(g: &Generator, ctx: &Context) -> String {
    let mut parts = Vec::new();
    for (i, c) in g.xi.iter().enumerate() {
        if !c.is_zero() {
            parts.push(format!("{} = {}", ctx.indep_names()[i], c.display(ctx)));
        }
    }
    for (a, c) in g.eta.iter().enumerate() {
        if !c.is_zero() {
            parts.push(format!("{} = {}", ctx.dep_names()[a], c.display(ctx)));
        }
    }
    format!("{}: {}", g.label, parts.join("; "))
}

/// `label [status]: T1 ; T2 ...`.
pub fn law_text(law: &ReferenceLaw, ctx: &Context) -> String {
    let comps: Vec<String> = law
        .components
        .iter()
        .map(|c| c.display(ctx).to_string())
        .collect();
    format!("{} [{}]: {}", law.label, law.status, comps.join(" ; "))
}
