use crate::error::{Error, Result};

/// What a declared identifier names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    Indep(usize),
    Dep(usize),
    Param,
    Func,
}

/// Symbol table for parsing and printing.
///
/// Independent and dependent variables are positional: atoms refer to them by
/// index, and the context supplies their names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    indep: Vec<String>,
    dep: Vec<String>,
    params: Vec<String>,
    funcs: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Context {
    pub fn new<S: AsRef<str>>(indep: &[S], dep: &[S]) -> Result<Self> {
        let mut ctx = Context::default();
        for name in indep {
            ctx.declare(name.as_ref())?;
            ctx.indep.push(name.as_ref().to_string());
        }
        for name in dep {
            ctx.declare(name.as_ref())?;
            ctx.dep.push(name.as_ref().to_string());
        }
        Ok(ctx)
    }

    fn declare(&self, name: &str) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::InvalidSystem(format!(
                "`{name}` is not an identifier"
            )));
        }
        if self.lookup(name).is_some() {
            return Err(Error::InvalidSystem(format!("`{name}` declared twice")));
        }
        Ok(())
    }

    pub fn add_param(&mut self, name: &str) -> Result<()> {
        self.declare(name)?;
        self.params.push(name.to_string());
        Ok(())
    }

    pub fn add_func(&mut self, name: &str) -> Result<()> {
        self.declare(name)?;
        self.funcs.push(name.to_string());
        Ok(())
    }

    pub fn with_params<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        for n in names {
            self.add_param(n.as_ref())?;
        }
        Ok(self)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        if let Some(i) = self.indep.iter().position(|n| n == name) {
            return Some(Symbol::Indep(i));
        }
        if let Some(i) = self.dep.iter().position(|n| n == name) {
            return Some(Symbol::Dep(i));
        }
        if self.params.iter().any(|n| n == name) {
            return Some(Symbol::Param);
        }
        if self.funcs.iter().any(|n| n == name) {
            return Some(Symbol::Func);
        }
        None
    }

    pub fn n_indep(&self) -> usize {
        self.indep.len()
    }

    pub fn n_dep(&self) -> usize {
        self.dep.len()
    }

    pub fn indep_names(&self) -> &[String] {
        &self.indep
    }

    pub fn dep_names(&self) -> &[String] {
        &self.dep
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn funcs(&self) -> &[String] {
        &self.funcs
    }

    pub fn indep_index(&self, name: &str) -> Option<usize> {
        self.indep.iter().position(|n| n == name)
    }

    pub fn dep_index(&self, name: &str) -> Option<usize> {
        self.dep.iter().position(|n| n == name)
    }

    pub(crate) fn indep_name(&self, i: usize) -> String {
        self.indep
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("x{i}"))
    }

    pub(crate) fn dep_name(&self, a: usize) -> String {
        self.dep.get(a).cloned().unwrap_or_else(|| format!("u{a}"))
    }
}
