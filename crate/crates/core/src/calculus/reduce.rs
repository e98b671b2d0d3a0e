use std::collections::{BTreeMap, HashMap};

use super::{total_derivative, PdeSystem};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, MultiIndex};

pub const DEFAULT_PASS_CAP: usize = 50;

/// Rewrites expressions modulo a solved system, replacing every leading
/// coordinate and its derivatives by the prolonged right-hand side.
///
/// Prolonged right-hand sides are computed once per (equation, index) and
/// cached, already in reduced form.
pub struct Reducer<'a> {
    system: &'a PdeSystem,
    cache: HashMap<(usize, MultiIndex), Expr>,
    cap: usize,
}

impl<'a> Reducer<'a> {
    pub fn new(system: &'a PdeSystem) -> Self {
        Reducer {
            system,
            cache: HashMap::new(),
            cap: DEFAULT_PASS_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn system(&self) -> &PdeSystem {
        self.system
    }

    pub fn reduce(&mut self, e: &Expr) -> Result<Expr> {
        self.reduce_at(e, 0)
    }

    /// `D_K rhs` reduced, for equation `eq`.
    pub fn prolonged_rhs(&mut self, eq: usize, index: &MultiIndex) -> Result<Expr> {
        self.prolonged_at(eq, index, 0)
    }

    fn reduce_at(&mut self, e: &Expr, depth: usize) -> Result<Expr> {
        let mut cur = e.clone();
        for _ in 0..self.cap {
            let mut map: BTreeMap<Atom, Expr> = BTreeMap::new();
            for jet in cur.jets() {
                if let Some((eq, rest)) = self.system.leading_for(&jet) {
                    let r = self.prolonged_at(eq, &rest, depth + 1)?;
                    map.insert(Atom::Jet(jet), r);
                }
            }
            if map.is_empty() {
                return Ok(cur);
            }
            cur = cur.substitute_with(&|a: &Atom| map.get(a).cloned())?;
        }
        Err(Error::IterationCap(self.cap))
    }

    fn prolonged_at(&mut self, eq: usize, index: &MultiIndex, depth: usize) -> Result<Expr> {
        if let Some(r) = self.cache.get(&(eq, index.clone())) {
            return Ok(r.clone());
        }
        if depth > self.cap {
            return Err(Error::IterationCap(self.cap));
        }
        let r = match index.split_last() {
            None => self.system.equations()[eq].rhs.clone(),
            Some((rest, i)) => {
                let prev = self.prolonged_at(eq, &rest, depth + 1)?;
                self.reduce_at(&total_derivative(&prev, i), depth + 1)?
            }
        };
        self.cache.insert((eq, index.clone()), r.clone());
        Ok(r)
    }
}

/// One-shot reduction of `e` modulo `system`.
pub fn reduce_mod_system(e: &Expr, system: &PdeSystem) -> Result<Expr> {
    Reducer::new(system).reduce(e)
}
