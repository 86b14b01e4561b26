//! Finite-dimensional Lie algebras given by sparse structure constants.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{parse_with, Interpret};
use crate::poly::VarSet;
use crate::scalar::{write_term, Rational, Scalar};
use crate::weyl::DiffOp;

mod analysis;
mod extract;
mod io;

pub use analysis::*;
pub use extract::from_realization;
pub use io::{AbstractAlgebraFile, RealizedAlgebraFile, RealizedGenerator};

/// Sparse coordinate vector over an algebra's basis.
#[derive(Clone, PartialEq, Debug)]
pub struct Element<S = Rational> {
    dim: usize,
    coords: BTreeMap<usize, S>,
}

impl<S: Scalar> Element<S> {
    pub fn zero(dim: usize) -> Self {
        Element {
            dim,
            coords: BTreeMap::new(),
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index out of range");
        let mut e = Self::zero(dim);
        e.coords.insert(i, S::one());
        e
    }

    pub fn from_coords(dim: usize, coords: impl IntoIterator<Item = (usize, S)>) -> Result<Self> {
        let mut e = Self::zero(dim);
        for (i, c) in coords {
            if i >= dim {
                return Err(Error::Invalid(format!("coordinate {i} outside dimension {dim}")));
            }
            e.add_coord(i, &c);
        }
        Ok(e)
    }

    pub(crate) fn add_coord(&mut self, i: usize, c: &S) {
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(i).or_insert_with(S::zero);
        *slot += c;
        if slot.is_zero() {
            self.coords.remove(&i);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coords.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coords.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "elements of different algebras");
        let mut out = self.clone();
        for (i, c) in &other.coords {
            out.add_coord(*i, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim);
        for (i, x) in &self.coords {
            out.add_coord(*i, &(x.clone() * c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn to_sparse(&self) -> Vec<(usize, Rational)>
    where
        S: Scalar,
    {
        self.coords
            .iter()
            .map(|(i, c)| (*i, c.to_rational().expect("rational coordinates")))
            .collect()
    }
}

/// Differential-operator images of the basis, aligned with it.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    vars: Arc<VarSet>,
    ops: Vec<DiffOp>,
}

impl Realization {
    pub fn new(vars: &Arc<VarSet>, ops: Vec<DiffOp>) -> Result<Self> {
        if ops.iter().any(|d| d.vars() != vars) {
            return Err(Error::VarSetMismatch);
        }
        Ok(Realization {
            vars: vars.clone(),
            ops,
        })
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn ops(&self) -> &[DiffOp] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &DiffOp {
        &self.ops[i]
    }

    /// Realization of a rational combination of basis elements.
    pub fn realize_element(&self, e: &Element<Rational>) -> DiffOp {
        let mut out = DiffOp::zero(&self.vars);
        for (i, c) in e.coords() {
            out = out.try_add(&self.ops[i].scale(c)).expect("shared variables");
        }
        out
    }
}

/// A failing Jacobi triple.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiViolation<S = Rational> {
    pub triple: (usize, usize, usize),
    pub residual: Element<S>,
}

/// Realized bracket that disagrees with the abstract table.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationMismatch {
    pub pair: (usize, usize),
    pub realized: DiffOp,
    pub expected: DiffOp,
}

#[derive(Clone, Debug)]
pub struct LieAlgebra<S = Rational> {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// `(i, j)` with `i < j` -> `[X_i, X_j]`
    table: BTreeMap<(usize, usize), Element<S>>,
    parameters: Vec<String>,
    central_unit: Option<usize>,
    realization: Option<Realization>,
}

pub(crate) fn is_name(s: &str) -> bool {
    let b = s.as_bytes();
    let Some(&first) = b.first() else { return false };
    if !(first.is_ascii_alphabetic() || first == b'_') {
        return false;
    }
    let stem = b
        .iter()
        .take_while(|c| c.is_ascii_alphanumeric() || **c == b'_')
        .count();
    if stem == b.len() {
        return true;
    }
    let rest = &s[stem..];
    let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
        return false;
    };
    let digits = inner
        .strip_prefix('-')
        .or_else(|| inner.strip_prefix('+'))
        .unwrap_or(inner);
    !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds an algebra from brackets `[X_i, X_j]`. Pairs with `i > j` are
    /// stored antisymmetrically; each unordered pair may be given once.
    pub fn new(names: Vec<String>, brackets: impl IntoIterator<Item = (usize, usize, Element<S>)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !is_name(n) {
                return Err(Error::Invalid(format!("`{n}` is not a valid basis name")));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate basis name `{n}`")));
            }
        }
        let dim = names.len();
        let mut table = BTreeMap::new();
        for (i, j, e) in brackets {
            if i >= dim || j >= dim || e.dim() != dim {
                return Err(Error::Invalid(format!("bracket ({i},{j}) outside dimension {dim}")));
            }
            if i == j {
                if e.is_zero() {
                    continue;
                }
                return Err(Error::Invalid(format!("[{0},{0}] must vanish", names[i])));
            }
            let (key, e) = if i < j { ((i, j), e) } else { ((j, i), e.neg()) };
            if table.contains_key(&key) {
                return Err(Error::Invalid(format!(
                    "bracket [{}, {}] given twice",
                    names[key.0], names[key.1]
                )));
            }
            if !e.is_zero() {
                table.insert(key, e);
            }
        }
        Ok(LieAlgebra {
            names,
            index,
            table,
            parameters: Vec::new(),
            central_unit: None,
            realization: None,
        })
    }

    pub fn with_parameters(mut self, params: Vec<String>) -> Self {
        self.parameters = params;
        self
    }

    /// Marks a central basis element that enveloping-algebra computations
    /// identify with the scalar 1.
    pub fn with_central_unit(mut self, i: usize) -> Result<Self> {
        if i >= self.dim() {
            return Err(Error::Invalid("central unit out of range".into()));
        }
        if self.table.iter().any(|(&(a, b), _)| a == i || b == i) {
            return Err(Error::Invalid(format!("`{}` is not central", self.names[i])));
        }
        self.central_unit = Some(i);
        Ok(self)
    }

    pub fn with_realization(mut self, r: Realization) -> Result<Self> {
        if r.ops.len() != self.dim() {
            return Err(Error::Invalid(format!(
                "realization has {} operators for dimension {}",
                r.ops.len(),
                self.dim()
            )));
        }
        self.realization = Some(r);
        Ok(self)
    }

    pub fn without_realization(mut self) -> Self {
        self.realization = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn central_unit(&self) -> Option<usize> {
        self.central_unit
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    pub fn basis(&self, i: usize) -> Element<S> {
        Element::basis(self.dim(), i)
    }

    pub fn basis_named(&self, name: &str) -> Result<Element<S>> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown basis element `{name}`")))?;
        Ok(self.basis(i))
    }

    /// Nonzero brackets `[X_i, X_j]`, `i < j`, in pair order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Element<S>)> {
        self.table.iter().map(|(k, v)| (*k, v))
    }

    pub fn structure(&self, i: usize, j: usize) -> Element<S> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self
                .table
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Element::zero(self.dim())),
            std::cmp::Ordering::Greater => self
                .table
                .get(&(j, i))
                .map(Element::neg)
                .unwrap_or_else(|| Element::zero(self.dim())),
            std::cmp::Ordering::Equal => Element::zero(self.dim()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    pub fn bracket(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        assert!(
            a.dim() == self.dim() && b.dim() == self.dim(),
            "element of another algebra"
        );
        let mut out = Element::zero(self.dim());
        for (i, x) in a.coords() {
            for (j, y) in b.coords() {
                if i == j {
                    continue;
                }
                let s = self.structure(i, j);
                if s.is_zero() {
                    continue;
                }
                let xy = x.clone() * y;
                for (k, c) in s.coords() {
                    out.add_coord(k, &(xy.clone() * c));
                }
            }
        }
        out
    }

    pub fn verify_jacobi(&self) -> Vec<JacobiViolation<S>> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
                    let r = self
                        .bracket(&self.bracket(&x, &y), &z)
                        .add(&self.bracket(&self.bracket(&y, &z), &x))
                        .add(&self.bracket(&self.bracket(&z, &x), &y));
                    if !r.is_zero() {
                        out.push(JacobiViolation {
                            triple: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        out
    }

    /// Compares each realized commutator with the realized abstract bracket.
    pub fn verify_realization(&self) -> Result<Vec<RealizationMismatch>> {
        let r = self
            .realization
            .as_ref()
            .ok_or_else(|| Error::Invalid("algebra has no realization".into()))?;
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let realized = r.ops[i].commutator(&r.ops[j])?;
                let mut expected = DiffOp::zero(&r.vars);
                for (k, c) in self.structure(i, j).coords() {
                    let p = c.to_polynomial(&r.vars)?;
                    expected = expected.try_add(&r.ops[k].scale_by(&p)?)?;
                }
                if realized != expected {
                    out.push(RealizationMismatch {
                        pair: (i, j),
                        realized,
                        expected,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Renders an element as a flat sum over basis names.
    pub fn format(&self, e: &Element<S>) -> String {
        let mut s = String::new();
        let mut first = true;
        for (i, c) in e.coords() {
            for (q, sym) in c.display_terms() {
                let factor = if sym.is_empty() {
                    self.names[i].clone()
                } else {
                    format!("{sym}*{}", self.names[i])
                };
                write_term(&mut s, &q, &factor, first);
                first = false;
            }
        }
        if first {
            s.push('0');
        }
        s
    }

    /// Parses a linear combination of basis names; parameters of the
    /// algebra may appear in coefficients.
    pub fn parse_element(&self, src: &str) -> Result<Element<S>> {
        match parse_with(src, &ElementReader(self))? {
            Lin::Vector(e) => Ok(e),
            Lin::Scalar(c) if c.is_zero() => Ok(Element::zero(self.dim())),
            Lin::Scalar(_) => Err(Error::Invalid(format!("`{src}` is a scalar, not an element"))),
        }
    }
}

impl LieAlgebra<Rational> {
    pub fn realization_of(&self, e: &Element) -> Option<DiffOp> {
        self.realization.as_ref().map(|r| r.realize_element(e))
    }
}

enum Lin<S> {
    Scalar(S),
    Vector(Element<S>),
}

struct ElementReader<'a, S>(&'a LieAlgebra<S>);

impl<S: Scalar> Interpret for ElementReader<'_, S> {
    type Value = Lin<S>;
    fn number(&self, q: Rational) -> Lin<S> {
        Lin::Scalar(S::from_rational(q))
    }
    fn ident(&self, name: &str) -> Result<Lin<S>, String> {
        if let Some(i) = self.0.index_of(name) {
            return Ok(Lin::Vector(self.0.basis(i)));
        }
        if self.0.parameters.iter().any(|p| p == name) {
            if let Some(s) = S::parameter(name) {
                return Ok(Lin::Scalar(s));
            }
        }
        Err(format!("unknown basis element `{name}`"))
    }
    fn add(&self, a: Lin<S>, b: Lin<S>) -> Result<Lin<S>, String> {
        match (a, b) {
            (Lin::Vector(x), Lin::Vector(y)) => Ok(Lin::Vector(x.add(&y))),
            (Lin::Scalar(mut x), Lin::Scalar(y)) => {
                x += &y;
                Ok(Lin::Scalar(x))
            }
            (Lin::Vector(x), Lin::Scalar(c)) | (Lin::Scalar(c), Lin::Vector(x)) if c.is_zero() => Ok(Lin::Vector(x)),
            _ => Err("cannot add a scalar to an element".into()),
        }
    }
    fn neg(&self, a: Lin<S>) -> Lin<S> {
        match a {
            Lin::Scalar(x) => Lin::Scalar(-x),
            Lin::Vector(x) => Lin::Vector(x.neg()),
        }
    }
    fn mul(&self, a: Lin<S>, b: Lin<S>) -> Result<Lin<S>, String> {
        match (a, b) {
            (Lin::Scalar(x), Lin::Scalar(y)) => Ok(Lin::Scalar(x * &y)),
            (Lin::Scalar(c), Lin::Vector(x)) | (Lin::Vector(x), Lin::Scalar(c)) => Ok(Lin::Vector(x.scale(&c))),
            _ => Err("product of two elements is not linear".into()),
        }
    }
    fn pow(&self, a: Lin<S>, e: i64) -> Result<Lin<S>, String> {
        match a {
            Lin::Scalar(x) => {
                if let Some(q) = x.to_rational() {
                    let e = i32::try_from(e).map_err(|_| "exponent out of range".to_string())?;
                    if q.is_zero() && e < 0 {
                        return Err("zero to a negative power".into());
                    }
                    return Ok(Lin::Scalar(S::from_rational(num_traits::Pow::pow(&q, e))));
                }
                if e < 0 {
                    return Err("negative power of a symbolic coefficient".into());
                }
                let mut acc = S::one();
                for _ in 0..e {
                    acc = acc * &x;
                }
                Ok(Lin::Scalar(acc))
            }
            Lin::Vector(_) if e == 1 => Ok(a),
            Lin::Vector(_) => Err("power of an element is not linear".into()),
        }
    }
}

impl<S: Scalar> fmt::Display for LieAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), e) in self.entries() {
            writeln!(f, "[{},{}]={}", self.names[i], self.names[j], self.format(e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
