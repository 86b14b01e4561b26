//! Structure constants from vector-field realizations, and restriction to
//! subalgebras or new bases.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Element, LieAlgebra, Realization};
use crate::error::{Error, Result};
use crate::linalg::{sparse, Solve, SpanSolver, SparseVec};
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::scalar::Rational;
use crate::weyl::{DiffOp, VectorField};

/// Interns `(derivative index, coefficient monomial)` pairs as columns.
struct Keys {
    index: HashMap<(Monomial, Monomial), usize>,
    list: Vec<(Monomial, Monomial)>,
}

impl Keys {
    fn new() -> Self {
        Keys {
            index: HashMap::new(),
            list: Vec::new(),
        }
    }

    fn intern(&mut self, key: (Monomial, Monomial)) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        self.list.push(key.clone());
        self.index.insert(key, self.list.len() - 1);
        self.list.len() - 1
    }

    fn vector(&mut self, d: &DiffOp) -> SparseVec {
        let mut entries = Vec::new();
        for (alpha, coeff) in d.terms() {
            for (m, c) in coeff.terms() {
                entries.push((self.intern((alpha.clone(), m.clone())), c.clone()));
            }
        }
        sparse(entries)
    }

    /// Columns for `d` without growing the table; unseen keys get local
    /// indices past the end, recorded in `extra`.
    fn lookup(&self, d: &DiffOp, extra: &mut Vec<(Monomial, Monomial)>) -> SparseVec {
        let mut entries = Vec::new();
        for (alpha, coeff) in d.terms() {
            for (m, c) in coeff.terms() {
                let key = (alpha.clone(), m.clone());
                let col = match self.index.get(&key) {
                    Some(&i) => i,
                    None => {
                        extra.push(key);
                        self.list.len() + extra.len() - 1
                    }
                };
                entries.push((col, c.clone()));
            }
        }
        sparse(entries)
    }

    fn op(&self, vars: &Arc<VarSet>, v: &SparseVec, extra: &[(Monomial, Monomial)]) -> DiffOp {
        let mut out = DiffOp::zero(vars);
        for (col, c) in v {
            let (alpha, m) = if *col < self.list.len() {
                &self.list[*col]
            } else {
                &extra[*col - self.list.len()]
            };
            let coeff = Polynomial::from_terms(vars, [(m.clone(), c.clone())]).expect("valid monomial");
            out = out
                .try_add(&DiffOp::term(coeff, alpha.clone()).expect("valid index"))
                .expect("shared variables");
        }
        out
    }
}

/// Extracts structure constants by expanding every pairwise commutator in
/// the span of the given fields. The realization is attached.
pub fn from_realization(names: Vec<String>, fields: &[VectorField]) -> Result<LieAlgebra> {
    if names.len() != fields.len() {
        return Err(Error::Invalid(format!(
            "{} names for {} fields",
            names.len(),
            fields.len()
        )));
    }
    let Some(first) = fields.first() else {
        return LieAlgebra::new(names, Vec::new());
    };
    let vars = first.as_op().vars().clone();
    let ops: Vec<DiffOp> = fields.iter().map(|f| f.as_op().clone()).collect();
    let mut keys = Keys::new();
    let family: Vec<SparseVec> = ops.iter().map(|d| keys.vector(d)).collect();
    let solver = SpanSolver::new(&family).map_err(|dep| {
        let rel: Vec<String> = dep.iter().map(|(i, c)| format!("{c}*{}", names[*i])).collect();
        Error::LinearlyDependentInput(format!("{} = 0", rel.join(" + ")))
    })?;
    let n = ops.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<Option<(usize, usize, Element)>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = ops[i].commutator(&ops[j])?;
            if c.is_zero() {
                return Ok(None);
            }
            let mut extra = Vec::new();
            let v = keys.lookup(&c, &mut extra);
            match solver.solve(&v) {
                Solve::InSpan(coeffs) => Ok(Some((i, j, Element::from_coords(n, coeffs)?))),
                Solve::Residual(r) => Err(Error::NotClosedRealization {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    residual: Box::new(keys.op(&vars, &r, &extra)),
                }),
            }
        })
        .collect();
    let mut brackets = Vec::new();
    for r in results {
        if let Some(b) = r? {
            brackets.push(b);
        }
    }
    LieAlgebra::new(names, brackets)?.with_realization(Realization::new(&vars, ops)?)
}

impl LieAlgebra<Rational> {
    fn restrict(&self, basis: &[(String, Element)], full: bool) -> Result<LieAlgebra> {
        let family: Vec<SparseVec> = basis.iter().map(|(_, e)| e.to_sparse()).collect();
        if basis.iter().any(|(_, e)| e.dim() != self.dim()) {
            return Err(Error::AlgebraMismatch);
        }
        let solver = match SpanSolver::new(&family) {
            Ok(s) => s,
            Err(dep) => {
                let rel: Vec<String> = dep.iter().map(|(i, c)| format!("{c}*{}", basis[*i].0)).collect();
                let msg = format!("{} = 0", rel.join(" + "));
                return Err(if full {
                    Error::SingularBasisChange(msg)
                } else {
                    Error::LinearlyDependentInput(msg)
                });
            }
        };
        if full && basis.len() != self.dim() {
            return Err(Error::SingularBasisChange(format!(
                "{} elements for dimension {}",
                basis.len(),
                self.dim()
            )));
        }
        let n = basis.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let results: Vec<Result<Option<(usize, usize, Element)>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let b = self.bracket(&basis[i].1, &basis[j].1);
                if b.is_zero() {
                    return Ok(None);
                }
                match solver.solve(&b.to_sparse()) {
                    Solve::InSpan(c) => Ok(Some((i, j, Element::from_coords(n, c)?))),
                    Solve::Residual(r) => Err(Error::NotClosed {
                        left: basis[i].0.clone(),
                        right: basis[j].0.clone(),
                        residual: self.format(&Element::from_coords(self.dim(), r)?),
                    }),
                }
            })
            .collect();
        let mut brackets = Vec::new();
        for r in results {
            if let Some(b) = r? {
                brackets.push(b);
            }
        }
        let names = basis.iter().map(|(n, _)| n.clone()).collect();
        let mut out = LieAlgebra::new(names, brackets)?;
        if let Some(r) = self.realization() {
            let ops = basis.iter().map(|(_, e)| r.realize_element(e)).collect();
            out = out.with_realization(Realization::new(r.vars(), ops)?)?;
        }
        Ok(out)
    }

    /// The subalgebra spanned by the named elements, in that basis.
    pub fn subalgebra(&self, span: &[(String, Element)]) -> Result<LieAlgebra> {
        self.restrict(span, false)
    }

    /// The same algebra in a new basis.
    pub fn change_of_basis(&self, new_basis: &[(String, Element)]) -> Result<LieAlgebra> {
        self.restrict(new_basis, true)
    }
}
