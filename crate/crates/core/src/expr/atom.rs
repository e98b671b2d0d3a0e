use std::cmp::Ordering;

use super::Expr;

/// Multiset of independent-variable indices naming a partial derivative.
///
/// Stored as a sorted list, so `u[t,x]` and `u[x,t]` share one representation.
/// The empty index is the dependent variable itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn count(&self, i: usize) -> usize {
        self.0.iter().filter(|&&k| k == i).count()
    }

    /// `J + i`.
    pub fn with(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&k| k <= i);
        v.insert(pos, i);
        MultiIndex(v)
    }

    pub fn union(&self, other: &MultiIndex) -> Self {
        MultiIndex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Multiset difference `self - other`, if `other` is contained in `self`.
    pub fn difference(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut rest = self.0.clone();
        for &i in &other.0 {
            let pos = rest.iter().position(|&k| k == i)?;
            rest.remove(pos);
        }
        Some(MultiIndex(rest))
    }

    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.difference(other).is_some()
    }

    /// Number of distinct index tuples that sort to this multiset.
    pub fn orderings(&self) -> u64 {
        let mut result: u64 = (1..=self.0.len() as u64).product();
        let mut i = 0;
        while i < self.0.len() {
            let run = self.0[i..].iter().take_while(|&&k| k == self.0[i]).count();
            result /= (1..=run as u64).product::<u64>();
            i += run;
        }
        result
    }

    /// Splits off the largest index: `J = rest + last`.
    pub fn split_last(&self) -> Option<(MultiIndex, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((MultiIndex(rest.to_vec()), last))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A jet coordinate `u^dep_J`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetCoord {
    pub dep: usize,
    pub index: MultiIndex,
}

impl JetCoord {
    pub fn new(dep: usize, index: MultiIndex) -> Self {
        JetCoord { dep, index }
    }

    pub fn base(dep: usize) -> Self {
        JetCoord {
            dep,
            index: MultiIndex::empty(),
        }
    }

    pub fn order(&self) -> usize {
        self.index.order()
    }

    pub fn derive(&self, i: usize) -> Self {
        JetCoord {
            dep: self.dep,
            index: self.index.with(i),
        }
    }
}

/// Formal univariate function symbol `name^(order)(arg)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSym {
    pub name: String,
    pub order: u32,
    pub arg: Box<Expr>,
}

/// Indivisible symbol of the expression engine.
///
/// Variant order is the primary sort key, so independent variables always
/// precede jets, jets precede parameters, and parameters precede functions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Indep(usize),
    Jet(JetCoord),
    Param(String),
    Func(FuncSym),
}

impl Atom {
    pub fn jet(dep: usize, indices: impl IntoIterator<Item = usize>) -> Atom {
        Atom::Jet(JetCoord::new(dep, MultiIndex::new(indices)))
    }

    pub fn dep(dep: usize) -> Atom {
        Atom::Jet(JetCoord::base(dep))
    }

    pub fn param(name: impl Into<String>) -> Atom {
        Atom::Param(name.into())
    }

    pub fn func(name: impl Into<String>, order: u32, arg: Expr) -> Atom {
        Atom::Func(FuncSym {
            name: name.into(),
            order,
            arg: Box::new(arg),
        })
    }

    pub fn as_jet(&self) -> Option<&JetCoord> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_is_order_insensitive() {
        assert_eq!(MultiIndex::new([1, 0, 1]), MultiIndex::new([0, 1, 1]));
        assert_eq!(MultiIndex::new([1, 1]).with(0), MultiIndex::new([0, 1, 1]));
    }

    #[test]
    fn orderings_count_distinct_tuples() {
        assert_eq!(MultiIndex::empty().orderings(), 1);
        assert_eq!(MultiIndex::new([0, 1]).orderings(), 2);
        assert_eq!(MultiIndex::new([0, 1, 1]).orderings(), 3);
        assert_eq!(MultiIndex::new([1, 1, 1]).orderings(), 1);
        assert_eq!(MultiIndex::new([0, 1, 2]).orderings(), 6);
    }

    #[test]
    fn difference_and_containment() {
        let txx = MultiIndex::new([0, 1, 1]);
        let tx = MultiIndex::new([0, 1]);
        assert_eq!(txx.difference(&tx), Some(MultiIndex::new([1])));
        assert!(!tx.contains(&txx));
        assert!(txx.contains(&MultiIndex::empty()));
    }

    #[test]
    fn lower_order_sorts_first() {
        assert!(MultiIndex::new([1]) < MultiIndex::new([0, 0]));
        assert!(Atom::Indep(3) < Atom::dep(0));
        assert!(Atom::dep(0) < Atom::param("a"));
    }
}
