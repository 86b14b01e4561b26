//! Sparse multivariate polynomials with rational coefficients.
//!
//! Exponents of variables flagged as parameters may be negative, which gives
//! Laurent polynomials in those symbols. Terms are kept in graded
//! lexicographic order and printed highest first.

use std::cmp::Ordering;
use std::collections::{btree_map, BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Pow, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::expr::{parse_with, Interpret};
use crate::scalar::{write_term, Rational};


/// Ordered variable names; some are flagged as Laurent parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
    params: Vec<bool>,
    index: HashMap<String, usize>,
}

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S], params: &[S]) -> Result<Arc<VarSet>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            let ok = n.bytes().next().is_some_and(|c| c.is_ascii_alphabetic() || c == b'_')
                && n.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_');
            if !ok {
                return Err(Error::InvalidVarSet(format!("`{n}` is not an identifier")));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidVarSet(format!("duplicate variable `{n}`")));
            }
        }
        let mut flags = vec![false; names.len()];
        for p in params {
            let p = p.as_ref();
            let i = *index
                .get(p)
                .ok_or_else(|| Error::InvalidVarSet(format!("parameter `{p}` is not a variable")))?;
            flags[i] = true;
        }
        Ok(Arc::new(VarSet {
            names,
            params: flags,
            index,
        }))
    }

    /// Variables without parameters.
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarSet>> {
        Self::new::<S>(names, &[])
    }

    /// `prefix1, ..., prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Arc<VarSet> {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Self::plain(&names).expect("generated names are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn is_param(&self, i: usize) -> bool {
        self.params[i]
    }

    pub fn param_names(&self) -> Vec<&str> {
        (0..self.len())
            .filter(|&i| self.params[i])
            .map(|i| self.name(i))
            .collect()
    }
}

pub(crate) fn same_vars(a: &Arc<VarSet>, b: &Arc<VarSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector aligned with a [`VarSet`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[i32; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = i32>) -> Self {
        Monomial(exps.into_iter().collect())
    }

    /// The monomial `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| i64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn with(&self, i: usize, e: i32) -> Monomial {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }

    pub(crate) fn render(&self, vars: &VarSet) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars.name(i).to_string()),
                _ => parts.push(format!("{}^{}", vars.name(i), e)),
            }
        }
        parts.join("*")
    }
}

/// Graded lexicographic: total degree first, then exponents left to right.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct Polynomial {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::var(vars.len(), i), Rational::one());
        p
    }

    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        let i = vars
            .index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, i))
    }

    /// Builds a polynomial from terms, summing repeated monomials.
    pub fn from_terms(vars: &Arc<VarSet>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            if m.0.len() != vars.len() {
                return Err(Error::VarSetMismatch);
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && !vars.is_param(i) {
                    return Err(Error::NegativeExponent(vars.name(i).to_string()));
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest exponent of variable `i` over all terms (0 for zero).
    pub fn max_exponent(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn min_exponent(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0)
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VarSetMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = Polynomial::zero(&self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect(),
        }
    }

    /// Integer power. Negative powers are defined for single terms built
    /// only from parameters.
    pub fn pow(&self, e: i64) -> Result<Polynomial> {
        if e >= 0 {
            let mut acc = Polynomial::one(&self.vars);
            let mut base = self.clone();
            let mut k = e;
            while k > 0 {
                if k & 1 == 1 {
                    acc = &acc * &base;
                }
                k >>= 1;
                if k > 0 {
                    base = &base * &base;
                }
            }
            return Ok(acc);
        }
        let (m, c) = match self.terms.iter().next() {
            Some(t) if self.terms.len() == 1 => t,
            _ => return Err(Error::Invalid(format!("cannot invert `{self}`"))),
        };
        let k = i32::try_from(-e).map_err(|_| Error::Invalid("exponent out of range".into()))?;
        for (i, &x) in m.0.iter().enumerate() {
            if x != 0 && !self.vars.is_param(i) {
                return Err(Error::NegativeExponent(self.vars.name(i).to_string()));
            }
        }
        let inv = Monomial(m.0.iter().map(|x| -x * k).collect());
        Polynomial::from_terms(&self.vars, [(inv, Pow::pow(c, -k))])
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.vars.len() {
            return Err(Error::UnknownVariable(format!("#{i}")));
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e < 0 {
                return Err(Error::NegativeExponentDerivative(self.vars.name(i).to_string()));
            }
            if e > 0 {
                out.add_term(m.with(i, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        Ok(out)
    }

    pub fn partial_derivative_named(&self, name: &str) -> Result<Polynomial> {
        let i = self
            .vars
            .index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        self.partial_derivative(i)
    }

    /// Repeated partial derivative by a multi-index.
    pub fn derivative(&self, alpha: &Monomial) -> Result<Polynomial> {
        let mut p = self.clone();
        for (i, &k) in alpha.0.iter().enumerate() {
            for _ in 0..k {
                if p.is_zero() {
                    return Ok(p);
                }
                p = p.partial_derivative(i)?;
            }
        }
        Ok(p)
    }

    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut values = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            values.push(point.get(self.vars.name(i)));
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values[i].ok_or_else(|| Error::MissingAssignment(self.vars.name(i).to_string()))?;
                if e < 0 && v.is_zero() {
                    return Err(Error::ZeroToNegativePower(self.vars.name(i).to_string()));
                }
                t *= Pow::pow(v, e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Evaluates with positional values aligned with the variable set.
    pub fn evaluate_at(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.vars.len() {
            return Err(Error::VarSetMismatch);
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && values[i].is_zero() {
                    return Err(Error::ZeroToNegativePower(self.vars.name(i).to_string()));
                }
                t *= Pow::pow(&values[i], e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes a value for one variable, keeping the variable set.
    pub fn substitute(&self, i: usize, value: &Rational) -> Result<Polynomial> {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e < 0 && value.is_zero() {
                return Err(Error::ZeroToNegativePower(self.vars.name(i).to_string()));
            }
            let f = if e == 0 { Rational::one() } else { Pow::pow(value, e) };
            out.add_term(m.with(i, 0), c * f);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another variable set, matching
    /// variables by name.
    pub fn rebase(&self, vars: &Arc<VarSet>) -> Result<Polynomial> {
        let map: Vec<usize> = (0..self.vars.len())
            .map(|i| {
                vars.index(self.vars.name(i))
                    .ok_or_else(|| Error::UnknownVariable(self.vars.name(i).to_string()))
            })
            .collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0i32; vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    exps[map[i]] = e;
                }
            }
            terms.push((Monomial::from_exponents(exps), c.clone()));
        }
        Polynomial::from_terms(vars, terms)
    }

    pub fn parse(vars: &Arc<VarSet>, src: &str) -> Result<Polynomial> {
        Ok(parse_with(src, &PolyReader(vars))?)
    }
}

struct PolyReader<'a>(&'a Arc<VarSet>);

impl Interpret for PolyReader<'_> {
    type Value = Polynomial;
    fn number(&self, q: Rational) -> Polynomial {
        Polynomial::constant(self.0, q)
    }
    fn ident(&self, name: &str) -> Result<Polynomial, String> {
        Polynomial::var_named(self.0, name).map_err(|e| e.to_string())
    }
    fn add(&self, a: Polynomial, b: Polynomial) -> Result<Polynomial, String> {
        Ok(&a + &b)
    }
    fn neg(&self, a: Polynomial) -> Polynomial {
        -&a
    }
    fn mul(&self, a: Polynomial, b: Polynomial) -> Result<Polynomial, String> {
        Ok(&a * &b)
    }
    fn pow(&self, a: Polynomial, e: i64) -> Result<Polynomial, String> {
        a.pow(e).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            write_term(&mut s, c, &m.render(&self.vars), i == 0);
        }
        f.write_str(&s)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials over different variable sets")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials over different variable sets")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials over different variable sets")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}
