//! Lie-Poisson structure on dual coordinates: bracket, characteristic
//! fields, polynomial Casimir search, and verification of invariants with
//! a rational power of one coordinate.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::enveloping::{algebraic_independence, DEFAULT_MAX_MONOMIALS};
use crate::error::{Error, Result};
use crate::expr::{parse_with, Interpret};
use crate::lie::LieAlgebra;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::scalar::Rational;
use crate::weyl::VectorField;

pub struct PoissonStructure {
    vars: Arc<VarSet>,
    /// dense `{x_i, x_j}`
    table: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct PoissonFilters {
    /// Restrict candidate monomials to these coordinates.
    pub variables: Option<Vec<usize>>,
    pub max_monomials: usize,
}

impl Default for PoissonFilters {
    fn default() -> Self {
        PoissonFilters {
            variables: None,
            max_monomials: DEFAULT_MAX_MONOMIALS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PoissonSearch {
    pub max_degree: u32,
    /// Monomials of degree `0..=max_degree`, the constant included.
    pub candidates: usize,
    /// Distinct nonzero equations `(coordinate, output monomial)`.
    pub equations: usize,
    pub rank: usize,
    pub basis: Vec<Polynomial>,
    /// Greedy degree-ascending algebraically independent subset of the
    /// nonconstant basis elements.
    pub reduced: Vec<Polynomial>,
}

/// `numerator * x_base^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPowerCandidate {
    pub numerator: Polynomial,
    pub base: usize,
    pub exponent: Rational,
}

#[derive(Clone, Debug)]
pub struct RationalInvariantReport {
    /// `(coordinate index, cleared residual)` for every failing field.
    pub failures: Vec<(usize, Polynomial)>,
    pub checks: usize,
}

impl RationalInvariantReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
    /// Cleared residual per fractional exponent class; empty when it holds.
    pub residuals: Vec<(Rational, Polynomial)>,
}

impl PoissonStructure {
    /// Coordinates `x1..xn` in the algebra's basis order.
    pub fn new(alg: &LieAlgebra) -> Self {
        Self::with_vars(alg, VarSet::numbered("x", alg.dim())).expect("matching dimension")
    }

    pub fn with_vars(alg: &LieAlgebra, vars: Arc<VarSet>) -> Result<Self> {
        let n = alg.dim();
        if vars.len() != n || (0..n).any(|i| vars.is_param(i)) {
            return Err(Error::Invalid(format!("{} coordinates for dimension {n}", vars.len())));
        }
        let mut table = vec![Polynomial::zero(&vars); n * n];
        for ((i, j), e) in alg.entries() {
            let p = Polynomial::from_terms(&vars, e.coords().map(|(k, c)| (Monomial::var(n, k), c.clone())))?;
            table[j * n + i] = p.scale(&-Rational::one());
            table[i * n + j] = p;
        }
        Ok(PoissonStructure { vars, table })
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn coordinate_bracket(&self, i: usize, j: usize) -> &Polynomial {
        &self.table[i * self.dim() + j]
    }

    /// `{f, g} = sum_{i,j} {x_i, x_j} df/dx_i dg/dx_j`.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let n = self.dim();
        let f = f.rebase(&self.vars)?;
        let g = g.rebase(&self.vars)?;
        let df: Vec<Polynomial> = (0..n).map(|i| f.partial_derivative(i)).collect::<Result<_>>()?;
        let dg: Vec<Polynomial> = (0..n).map(|i| g.partial_derivative(i)).collect::<Result<_>>()?;
        let mut out = Polynomial::zero(&self.vars);
        for (i, dfi) in df.iter().enumerate() {
            if dfi.is_zero() {
                continue;
            }
            for (j, dgj) in dg.iter().enumerate() {
                let c = self.coordinate_bracket(i, j);
                if c.is_zero() || dgj.is_zero() {
                    continue;
                }
                out = out.try_add(&dfi.try_mul(dgj)?.try_mul(c)?)?;
            }
        }
        Ok(out)
    }

    /// `X_i = sum_j {x_i, x_j} d/dx_j`, so that `X_i(g) = {x_i, g}`.
    pub fn characteristic_fields(&self) -> Vec<VectorField> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let comps: Vec<Polynomial> = (0..n).map(|j| self.coordinate_bracket(i, j).clone()).collect();
                VectorField::from_components(&self.vars, &comps).expect("matching variables")
            })
            .collect()
    }

    /// `{x_i, g}` through the characteristic field.
    fn field_apply(&self, i: usize, g: &Polynomial) -> Result<Polynomial> {
        let n = self.dim();
        let mut out = Polynomial::zero(&self.vars);
        for j in 0..n {
            let c = self.coordinate_bracket(i, j);
            if c.is_zero() {
                continue;
            }
            let d = g.partial_derivative(j)?;
            if !d.is_zero() {
                out = out.try_add(&c.try_mul(&d)?)?;
            }
        }
        Ok(out)
    }

    /// Exact nullspace of `{x_i, K} = 0` over all monomials of degree at
    /// most `max_degree` in the allowed coordinates.
    pub fn casimir_search(&self, max_degree: u32, filters: &PoissonFilters) -> Result<PoissonSearch> {
        let n = self.dim();
        let mut allowed: Vec<usize> = match &filters.variables {
            Some(v) => {
                if let Some(&bad) = v.iter().find(|&&i| i >= n) {
                    return Err(Error::Invalid(format!("coordinate index {bad} out of range")));
                }
                v.clone()
            }
            None => (0..n).collect(),
        };
        allowed.sort_unstable();
        allowed.dedup();
        let candidates = monomials(n, &allowed, max_degree, filters.max_monomials)?;
        let vars = &self.vars;
        let columns: Vec<Result<Polynomial>> = candidates
            .par_iter()
            .flat_map_iter(|m| {
                let p = Polynomial::from_terms(vars, [(m.clone(), Rational::one())]).expect("valid monomial");
                (0..n).map(move |i| self.field_apply(i, &p)).collect::<Vec<_>>()
            })
            .collect();
        let mut row_of: HashMap<(usize, Monomial), usize> = HashMap::new();
        let mut rows: Vec<SparseVec> = Vec::new();
        for (idx, col) in columns.into_iter().enumerate() {
            let (j, i) = (idx / n, idx % n);
            for (m, c) in col?.terms() {
                let next = rows.len();
                let r = *row_of.entry((i, m.clone())).or_insert(next);
                if r == next {
                    rows.push(Vec::new());
                }
                rows[r].push((j, c.clone()));
            }
        }
        let mut ech = Echelon::new();
        for r in &rows {
            ech.insert(r);
        }
        let basis: Vec<Polynomial> = ech
            .nullspace(candidates.len())
            .into_iter()
            .map(|v| Polynomial::from_terms(vars, v.into_iter().map(|(j, c)| (candidates[j].clone(), c))))
            .collect::<Result<_>>()?;
        let mut order: Vec<&Polynomial> = basis.iter().filter(|p| p.as_constant().is_none()).collect();
        order.sort_by_key(|p| p.degree());
        let mut reduced: Vec<Polynomial> = Vec::new();
        for p in order {
            reduced.push(p.clone());
            if !algebraic_independence(&reduced)?.independent {
                reduced.pop();
            }
        }
        Ok(PoissonSearch {
            max_degree,
            candidates: candidates.len(),
            equations: rows.len(),
            rank: ech.rank(),
            basis,
            reduced,
        })
    }

    /// Checks `x_d X_i(P) + q P X_i(x_d) = 0` for every `i`, which is
    /// `x_d^(1-q) X_i(P x_d^q)` with the power cleared.
    pub fn verify_rational_invariant(&self, c: &RationalPowerCandidate) -> Result<RationalInvariantReport> {
        if c.base >= self.dim() {
            return Err(Error::MalformedCandidate(format!(
                "base coordinate {} out of range",
                c.base
            )));
        }
        let p = c
            .numerator
            .rebase(&self.vars)
            .map_err(|e| Error::MalformedCandidate(e.to_string()))?;
        if p.is_zero() {
            return Err(Error::MalformedCandidate("zero numerator".into()));
        }
        let xd = Polynomial::var(&self.vars, c.base);
        let mut failures = Vec::new();
        for i in 0..self.dim() {
            let r = xd
                .try_mul(&self.field_apply(i, &p)?)?
                .try_add(&p.try_mul(&self.field_apply(i, &xd)?)?.scale(&c.exponent))?;
            if !r.is_zero() {
                failures.push((i, r));
            }
        }
        Ok(RationalInvariantReport {
            failures,
            checks: self.dim(),
        })
    }
}

/// Monomials of degree `0..=max_degree` in the allowed variables, ascending.
fn monomials(n: usize, allowed: &[usize], max_degree: u32, cap: usize) -> Result<Vec<Monomial>> {
    let mut out = vec![Monomial::one(n)];
    let mut frontier = vec![(vec![0i32; n], 0usize)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (e, start) in &frontier {
            for (pos, &k) in allowed.iter().enumerate().skip(*start) {
                let mut f = e.clone();
                f[k] += 1;
                out.push(Monomial::from_exponents(f.iter().copied()));
                if out.len() > cap {
                    return Err(Error::TooManyMonomials { needed: out.len(), cap });
                }
                next.push((f, pos));
            }
        }
        frontier = next;
    }
    out.sort();
    Ok(out)
}

/// Sums of `P * x_d^q` over rational `q` for one fixed base coordinate.
#[derive(Clone, Debug)]
struct PowerSum {
    terms: BTreeMap<Rational, Polynomial>,
}

impl PowerSum {
    fn single(q: Rational, p: Polynomial) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(q, p);
        }
        PowerSum { terms }
    }

    fn add(mut self, other: PowerSum) -> Result<Self> {
        for (q, p) in other.terms {
            let sum = match self.terms.remove(&q) {
                Some(a) => a.try_add(&p)?,
                None => p,
            };
            if !sum.is_zero() {
                self.terms.insert(q, sum);
            }
        }
        Ok(self)
    }

    fn neg(self) -> Self {
        PowerSum {
            terms: self
                .terms
                .into_iter()
                .map(|(q, p)| (q, p.scale(&-Rational::one())))
                .collect(),
        }
    }

    fn mul(&self, other: &PowerSum) -> Result<Self> {
        let mut out = PowerSum { terms: BTreeMap::new() };
        for (q1, p1) in &self.terms {
            for (q2, p2) in &other.terms {
                out = out.add(PowerSum::single(q1 + q2, p1.try_mul(p2)?))?;
            }
        }
        Ok(out)
    }

    /// Groups terms by the fractional part of the exponent and clears each
    /// group to a polynomial; the sum vanishes iff every group does.
    fn cleared(&self, vars: &Arc<VarSet>, base: usize) -> Result<Vec<(Rational, Polynomial)>> {
        let mut groups: BTreeMap<Rational, Vec<(&Rational, &Polynomial)>> = BTreeMap::new();
        for (q, p) in &self.terms {
            groups.entry(q - q.floor()).or_default().push((q, p));
        }
        let mut out = Vec::new();
        for (frac_part, members) in groups {
            let qmin = members.iter().map(|(q, _)| (*q).clone()).min().expect("nonempty group");
            let mut sum = Polynomial::zero(vars);
            for (q, p) in members {
                let k = (q - &qmin).to_integer();
                let k = i32::try_from(k).map_err(|_| Error::Invalid("exponent out of range".into()))?;
                let mut e = vec![0i32; vars.len()];
                e[base] = k;
                sum = sum.try_add(&p.shift(&Monomial::from_exponents(e)))?;
            }
            if !sum.is_zero() {
                out.push((frac_part, sum));
            }
        }
        Ok(out)
    }
}

struct RelationReader<'a> {
    vars: &'a Arc<VarSet>,
    bindings: &'a BTreeMap<String, PowerSum>,
}

impl Interpret for RelationReader<'_> {
    type Value = PowerSum;
    fn number(&self, q: Rational) -> PowerSum {
        PowerSum::single(Rational::zero(), Polynomial::constant(self.vars, q))
    }
    fn ident(&self, name: &str) -> Result<PowerSum, String> {
        if let Some(b) = self.bindings.get(name) {
            return Ok(b.clone());
        }
        let p = Polynomial::var_named(self.vars, name).map_err(|_| format!("unknown name `{name}`"))?;
        Ok(PowerSum::single(Rational::zero(), p))
    }
    fn add(&self, a: PowerSum, b: PowerSum) -> Result<PowerSum, String> {
        a.add(b).map_err(|e| e.to_string())
    }
    fn neg(&self, a: PowerSum) -> PowerSum {
        a.neg()
    }
    fn mul(&self, a: PowerSum, b: PowerSum) -> Result<PowerSum, String> {
        a.mul(&b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: PowerSum, e: i64) -> Result<PowerSum, String> {
        if e < 0 {
            // only a single term inverts: P must itself be a constant
            let mut it = a.terms.iter();
            let (Some((q, p)), None) = (it.next(), it.next()) else {
                return Err("negative power of a sum".into());
            };
            let c = p
                .as_constant()
                .filter(|c| !c.is_zero())
                .ok_or("negative power of a polynomial")?;
            let k = -e;
            let q = -q * Rational::from_integer(k.into());
            let c = num_traits::Pow::pow(c.recip(), k as u32);
            return Ok(PowerSum::single(q, Polynomial::constant(self.vars, c)));
        }
        let mut acc = PowerSum::single(Rational::zero(), Polynomial::one(self.vars));
        for _ in 0..e {
            acc = acc.mul(&a).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    }
}

/// Verifies `lhs = rhs` relations whose sides mix polynomials and the
/// named candidates, all sharing one base coordinate. Powers of the base
/// are cleared per fractional exponent class before comparing.
pub fn verify_functional_relations(
    vars: &Arc<VarSet>,
    candidates: &[(String, RationalPowerCandidate)],
    polynomials: &[(String, Polynomial)],
    relations: &[(String, String, String)],
) -> Result<Vec<RelationCheck>> {
    let base = match candidates.first() {
        Some((_, c)) => c.base,
        None => 0,
    };
    let mut bindings = BTreeMap::new();
    for (name, c) in candidates {
        if c.base != base {
            return Err(Error::MalformedCandidate(format!(
                "`{name}` uses a different base coordinate"
            )));
        }
        bindings.insert(
            name.clone(),
            PowerSum::single(c.exponent.clone(), c.numerator.rebase(vars)?),
        );
    }
    for (name, p) in polynomials {
        bindings.insert(name.clone(), PowerSum::single(Rational::zero(), p.rebase(vars)?));
    }
    let reader = RelationReader {
        vars,
        bindings: &bindings,
    };
    let mut out = Vec::new();
    for (name, lhs, rhs) in relations {
        let l = parse_with(lhs, &reader)?;
        let r = parse_with(rhs, &reader)?;
        let residuals = l.add(r.neg())?.cleared(vars, base)?;
        out.push(RelationCheck {
            name: name.clone(),
            holds: residuals.is_empty(),
            residuals,
        });
    }
    Ok(out)
}

impl RationalPowerCandidate {
    /// Builds from text: numerator polynomial, base coordinate name and
    /// exponent literal such as `-2/3`.
    pub fn parse(vars: &Arc<VarSet>, numerator: &str, base: &str, exponent: &str) -> Result<Self> {
        let numerator = Polynomial::parse(vars, numerator)?;
        let base = vars
            .index(base)
            .ok_or_else(|| Error::MalformedCandidate(format!("unknown base coordinate `{base}`")))?;
        if vars.is_param(base) {
            return Err(Error::MalformedCandidate("base must be a coordinate".into()));
        }
        let exponent = crate::expr::parse_rational(exponent)?;
        Ok(RationalPowerCandidate {
            numerator,
            base,
            exponent,
        })
    }

    pub fn is_polynomial(&self) -> bool {
        self.exponent.is_integer() && !self.exponent.is_negative()
    }
}

#[cfg(test)]
mod tests;
