//! Exact sparse linear algebra over the rationals.
//!
//! Rows are scaled to primitive integer vectors and eliminated fraction-free.
//! Pivoting is deterministic: a row is reduced on its leading column against
//! the earliest inserted row with that pivot, so every result depends only on
//! row order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Sparse vector: strictly increasing column indices, nonzero values.
pub type SparseVec = Vec<(usize, Rational)>;

type IntRow = Vec<(usize, BigInt)>;

/// Columns at or above this index are bookkeeping columns of [`SpanSolver`].
const AUG: usize = 1 << 48;

/// Converts to a sparse vector, dropping zeros and summing repeated columns.
pub fn sparse(entries: impl IntoIterator<Item = (usize, Rational)>) -> SparseVec {
    let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
    for (c, v) in entries {
        *m.entry(c).or_insert_with(Rational::zero) += v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn to_int_row(v: &[(usize, Rational)]) -> (IntRow, Rational) {
    let mut l = BigInt::one();
    for (_, q) in v {
        l = l.lcm(q.denom());
    }
    let row: IntRow = v
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(c, q)| (*c, q.numer() * (&l / q.denom())))
        .collect();
    (row, Rational::from_integer(l))
}

/// Divides by the content; returns the divisor (with sign making the
/// leading entry positive).
fn make_primitive(row: &mut IntRow) -> BigInt {
    let Some(first) = row.first() else {
        return BigInt::one();
    };
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    g
}

/// `a*x - b*y` on sparse integer rows.
fn combine(x: &IntRow, a: &BigInt, y: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn value_at(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Row echelon form built incrementally.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<IntRow>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Eliminates `row[col]` using the pivot row for `col`. Returns the
    /// factor the row was multiplied by, divided by the removed content.
    fn eliminate(&self, row: &mut IntRow, col: usize) -> Rational {
        let p = &self.rows[self.pivots[&col]];
        let r = value_at(row, col).expect("entry present").clone();
        let pv = &p[0].1;
        let g = r.gcd(pv);
        let a = pv / &g;
        let b = &r / &g;
        *row = combine(row, &a, p, &b);
        let content = make_primitive(row);
        Rational::new(a, content)
    }

    /// Reduces the leading column until it is free; returns the
    /// accumulated scale factor.
    fn reduce_leading(&self, row: &mut IntRow) -> Rational {
        let mut k = Rational::one();
        while let Some(&(c, _)) = row.first() {
            if !self.pivots.contains_key(&c) {
                break;
            }
            k *= self.eliminate(row, c);
        }
        k
    }

    /// Eliminates every pivot column below `limit`; returns the scale factor.
    fn reduce_fully(&self, row: &mut IntRow, limit: usize) -> Rational {
        let mut k = Rational::one();
        let mut cursor = 0usize;
        loop {
            let next = row
                .iter()
                .map(|e| e.0)
                .find(|&c| c >= cursor && c < limit && self.pivots.contains_key(&c));
            let Some(c) = next else { break };
            k *= self.eliminate(row, c);
            cursor = c + 1;
        }
        k
    }

    fn insert_int(&mut self, mut row: IntRow) -> Option<usize> {
        make_primitive(&mut row);
        self.reduce_leading(&mut row);
        let &(c, _) = row.first()?;
        self.pivots.insert(c, self.rows.len());
        self.rows.push(row);
        Some(c)
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> bool {
        let (row, _) = to_int_row(v);
        self.insert_int(row).is_some()
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        let (mut row, _) = to_int_row(v);
        make_primitive(&mut row);
        self.reduce_fully(&mut row, usize::MAX);
        row.is_empty()
    }

    /// Reduced row echelon form: `(pivot column, row)` with unit pivots,
    /// ascending by pivot column.
    pub fn rref(&self) -> Vec<(usize, SparseVec)> {
        let mut reduced: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (&c, &ri) in self.pivots.iter().rev() {
            let mut row = self.rows[ri].clone();
            loop {
                let next = row.iter().map(|e| e.0).find(|&k| k > c && reduced.contains_key(&k));
                let Some(k) = next else { break };
                let p = &reduced[&k];
                let r = value_at(&row, k).expect("present").clone();
                let pv = &p[0].1;
                let g = r.gcd(pv);
                row = combine(&row, &(pv / &g), p, &(&r / &g));
                make_primitive(&mut row);
            }
            reduced.insert(c, row);
        }
        reduced
            .into_iter()
            .map(|(c, row)| {
                let lead = Rational::from_integer(row[0].1.clone());
                (
                    c,
                    row.into_iter()
                        .map(|(k, v)| (k, Rational::from_integer(v) / &lead))
                        .collect(),
                )
            })
            .collect()
    }

    /// Nullspace basis of the inserted rows over columns `0..ncols`, one
    /// vector per free column in ascending order.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseVec> {
        let rref = self.rref();
        let mut by_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (c, row) in &rref {
            for (k, v) in row.iter().skip(1) {
                by_free.entry(*k).or_default().push((*c, -v.clone()));
            }
        }
        (0..ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| {
                let mut v = by_free.remove(&f).unwrap_or_default();
                v.push((f, Rational::one()));
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.nullspace(ncols)
}

/// Expresses vectors in the span of a fixed, linearly independent family.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    ech: Echelon,
    len: usize,
}

/// Outcome of [`SpanSolver::solve`].
#[derive(Debug, Clone, PartialEq)]
pub enum Solve {
    /// Coefficients on the family.
    InSpan(SparseVec),
    /// `target` minus a combination of the family; nonzero.
    Residual(SparseVec),
}

impl SpanSolver {
    /// Fails with a nontrivial dependency `sum c_i v_i = 0` when the family
    /// is linearly dependent.
    pub fn new(family: &[SparseVec]) -> Result<Self, SparseVec> {
        let mut ech = Echelon::new();
        for (i, v) in family.iter().enumerate() {
            assert!(v.iter().all(|e| e.0 < AUG), "column index too large");
            // row = l * v_i, so the bookkeeping entry is l as well
            let (mut row, l) = to_int_row(v);
            row.push((AUG + i, l.to_integer()));
            make_primitive(&mut row);
            ech.reduce_leading(&mut row);
            match row.first() {
                Some(&(c, _)) if c < AUG => {
                    ech.pivots.insert(c, ech.rows.len());
                    ech.rows.push(row);
                }
                _ => {
                    return Err(row
                        .into_iter()
                        .map(|(c, v)| (c - AUG, Rational::from_integer(v)))
                        .collect())
                }
            }
        }
        Ok(SpanSolver { ech, len: family.len() })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn solve(&self, target: &[(usize, Rational)]) -> Solve {
        let (mut row, l) = to_int_row(target);
        // row = k * target + sum(aug_i * v_i)
        let mut k = l;
        k *= self.ech.reduce_fully(&mut row, AUG);
        let split = row.partition_point(|e| e.0 < AUG);
        if split == 0 {
            Solve::InSpan(
                row.into_iter()
                    .map(|(c, v)| (c - AUG, -Rational::from_integer(v) / &k))
                    .collect(),
            )
        } else {
            row.truncate(split);
            Solve::Residual(
                row.into_iter()
                    .map(|(c, v)| (c, Rational::from_integer(v) / &k))
                    .collect(),
            )
        }
    }
}
