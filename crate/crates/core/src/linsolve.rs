//! Exact linear algebra over the rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::LinearForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<Vec<BigRational>>,
    cols: usize,
    col_labels: Vec<String>,
    row_labels: Vec<String>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                got: r.len(),
            });
        }
        let col_labels = (0..cols).map(|c| format!("c{c}")).collect();
        let row_labels = (0..rows.len()).map(|r| format!("r{r}")).collect();
        Ok(RationalMatrix {
            rows,
            cols,
            col_labels,
            row_labels,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        Self::new(rows, cols)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(vec![vec![BigRational::zero(); cols]; rows], cols).expect("consistent shape")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigRational::one();
        }
        m
    }

    /// Builds the coefficient matrix of `form = 0` for each labelled form;
    /// constants are ignored (see [`solve_affine`] for inhomogeneous use).
    pub fn from_forms<'a>(
        unknowns: &[String],
        forms: impl IntoIterator<Item = (String, &'a LinearForm)>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        if let Some(dup) = unknowns.iter().find(|u| !seen.insert(u.as_str())) {
            return Err(Error::Internal(format!("duplicate column label `{dup}`")));
        }
        let index: BTreeMap<&str, usize> = unknowns
            .iter()
            .enumerate()
            .map(|(k, u)| (u.as_str(), k))
            .collect();
        let mut rows = Vec::new();
        let mut row_labels = Vec::new();
        for (label, form) in forms {
            let mut row = vec![BigRational::zero(); unknowns.len()];
            for (name, c) in &form.coeffs {
                let k = *index
                    .get(name.as_str())
                    .ok_or_else(|| Error::Internal(format!("unknown column `{name}`")))?;
                row[k] = c.clone();
            }
            rows.push(row);
            row_labels.push(label);
        }
        Ok(RationalMatrix {
            rows,
            cols: unknowns.len(),
            col_labels: unknowns.to_vec(),
            row_labels,
        })
    }

    pub fn with_labels(mut self, cols: Vec<String>) -> Result<Self> {
        if cols.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: cols.len(),
            });
        }
        self.col_labels = cols;
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.rows[r][c]
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Reduced row-echelon form; zero rows are kept at the bottom so the
    /// shape is preserved.
    pub fn rref(&self) -> RationalMatrix {
        let (reduced, _) = rref_rows(&self.rows, self.cols);
        let mut rows = reduced;
        rows.resize(self.rows.len(), vec![BigRational::zero(); self.cols]);
        RationalMatrix {
            rows,
            cols: self.cols,
            col_labels: self.col_labels.clone(),
            row_labels: (0..self.rows.len()).map(|r| format!("r{r}")).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rref_rows(&self.rows, self.cols).1.len()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse integer row: strictly increasing columns, nonzero entries.
type SparseRow = Vec<(usize, BigInt)>;

/// Clears denominators and content so the row is a primitive integer row
/// with a positive leading entry.
fn integer_row(row: &[BigRational]) -> SparseRow {
    let l = row
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: SparseRow = row
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, (c * &l).to_integer()))
        .collect();
    primitive(ints)
}

fn primitive(mut row: SparseRow) -> SparseRow {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    let flip = row.first().is_some_and(|(_, v)| v.is_negative());
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

fn entry(row: &SparseRow, c: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&c, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// `a·row - b·pivot`, made primitive.
fn combine(row: &SparseRow, a: &BigInt, pivot: &SparseRow, b: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut x, mut y) = (row.iter().peekable(), pivot.iter().peekable());
    loop {
        let v = match (x.peek(), y.peek()) {
            (None, None) => break,
            (Some((i, _)), Some((j, _))) if i == j => {
                let ((i, u), (_, w)) = (x.next().unwrap(), y.next().unwrap());
                (*i, a * u - b * w)
            }
            (Some((i, _)), Some((j, _))) if i < j => {
                let (i, u) = x.next().unwrap();
                (*i, a * u)
            }
            (Some(_), None) => {
                let (i, u) = x.next().unwrap();
                (*i, a * u)
            }
            _ => {
                let (j, w) = y.next().unwrap();
                (*j, -(b * w))
            }
        };
        if !v.1.is_zero() {
            out.push(v);
        }
    }
    primitive(out)
}

/// Fraction-free elimination on sparse primitive integer rows, then
/// fraction-free back substitution. Rows stay primitive after every step,
/// which keeps entries small on the sparse systems produced by coefficient
/// collection. Returns the nonzero echelon rows and their pivot columns.
fn eliminate(rows: &[Vec<BigRational>], cols: usize) -> (Vec<SparseRow>, Vec<usize>) {
    let mut buckets: Vec<Vec<SparseRow>> = vec![Vec::new(); cols];
    let mut seen = BTreeSet::new();
    for r in rows {
        let row = integer_row(r);
        if let Some(&(lead, _)) = row.first() {
            if seen.insert(row.clone()) {
                buckets[lead].push(row);
            }
        }
    }
    let mut ech: Vec<SparseRow> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let mut bucket = std::mem::take(&mut buckets[c]);
        if bucket.is_empty() {
            continue;
        }
        let best = (0..bucket.len())
            .min_by(|&i, &j| {
                let key = |k: usize| (bucket[k].len(), bucket[k][0].1.abs());
                key(i).cmp(&key(j))
            })
            .expect("nonempty bucket");
        let pivot = bucket.swap_remove(best);
        for row in bucket {
            let next = combine(&row, &pivot[0].1, &pivot, &row[0].1);
            if let Some(&(lead, _)) = next.first() {
                buckets[lead].push(next);
            }
        }
        ech.push(pivot);
        pivots.push(c);
    }
    for k in (0..ech.len()).rev() {
        let p = pivots[k];
        let (above, rest) = ech.split_at_mut(k);
        let pivot = &rest[0];
        for row in above.iter_mut() {
            if let Some(f) = entry(row, p).cloned() {
                *row = combine(row, &pivot[0].1, pivot, &f);
            }
        }
    }
    (ech, pivots)
}

/// Nonzero RREF rows and their pivot columns.
fn rref_rows(rows: &[Vec<BigRational>], cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let (ech, pivots) = eliminate(rows, cols);
    let out = ech
        .into_iter()
        .map(|row| {
            let lead = BigRational::from_integer(row[0].1.clone());
            let mut dense = vec![BigRational::zero(); cols];
            for (j, v) in row {
                dense[j] = BigRational::from_integer(v) / &lead;
            }
            dense
        })
        .collect();
    (out, pivots)
}

/// Affine solution set `particular + span(basis)` over labelled unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub labels: Vec<String>,
    pub basis: Vec<Vec<BigRational>>,
    pub particular: Vec<BigRational>,
}

impl SolutionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Maps each label to its value in `v`.
    pub fn assignment(&self, v: &[BigRational]) -> BTreeMap<String, BigRational> {
        self.labels.iter().cloned().zip(v.iter().cloned()).collect()
    }

    /// Membership of `v` in the span of the basis.
    pub fn spans(&self, v: &[BigRational]) -> bool {
        let base = rank_of(&self.basis, self.labels.len());
        let mut with = self.basis.clone();
        with.push(v.to_vec());
        rank_of(&with, self.labels.len()) == base
    }
}

fn rank_of(rows: &[Vec<BigRational>], cols: usize) -> usize {
    rref_rows(rows, cols).1.len()
}

/// Basis of `{v : M v = 0}` read off the reduced echelon form.
pub fn nullspace(m: &RationalMatrix) -> SolutionSpace {
    let (rows, pivots) = rref_rows(&m.rows, m.cols);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let basis = (0..m.cols)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); m.cols];
            v[free] = BigRational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect();
    SolutionSpace {
        labels: m.col_labels.clone(),
        basis,
        particular: vec![BigRational::zero(); m.cols],
    }
}

pub fn rref(m: &RationalMatrix) -> RationalMatrix {
    m.rref()
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.rank()
}

/// Solves `M v = b`; `None` when inconsistent.
pub fn solve_affine(m: &RationalMatrix, b: &[BigRational]) -> Result<Option<SolutionSpace>> {
    if b.len() != m.n_rows() {
        return Err(Error::LengthMismatch {
            expected: m.n_rows(),
            got: b.len(),
        });
    }
    let aug: Vec<Vec<BigRational>> = m
        .rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (rows, pivots) = rref_rows(&aug, m.cols + 1);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut particular = vec![BigRational::zero(); m.cols];
    for (row, &p) in rows.iter().zip(&pivots) {
        particular[p] = row[m.cols].clone();
    }
    let mut space = nullspace(m);
    space.particular = particular;
    Ok(Some(space))
}

/// Equality of the row spans of two vector families of equal width.
pub fn span_equal(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> bool {
    let cols = match a.first().or(b.first()) {
        Some(r) => r.len(),
        None => return true,
    };
    let ra = rank_of(a, cols);
    let rb = rank_of(b, cols);
    if ra != rb {
        return false;
    }
    let both: Vec<Vec<BigRational>> = a.iter().chain(b).cloned().collect();
    rank_of(&both, cols) == ra
}
