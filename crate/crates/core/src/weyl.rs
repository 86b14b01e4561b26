//! Differential operators with polynomial coefficients, kept normal ordered
//! (coefficients to the left of derivatives).

use std::collections::{btree_map, BTreeMap};
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{parse_with, Interpret};
use crate::poly::{same_vars, Monomial, Polynomial, VarSet};
use crate::scalar::{write_term, Rational};

#[derive(Clone)]
pub struct DiffOp {
    vars: Arc<VarSet>,
    /// derivative multi-index -> coefficient
    terms: BTreeMap<Monomial, Polynomial>,
}

impl PartialEq for DiffOp {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for DiffOp {}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

fn binomial(n: i32, k: i32) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    r
}

/// All multi-indices `gamma <= alpha` componentwise.
fn sub_indices(alpha: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Vec::with_capacity(alpha.exponents().len())];
    for &a in alpha.exponents() {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut v: Vec<i32> = prefix.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(Monomial::from_exponents).collect()
}

impl DiffOp {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        DiffOp {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(vars: &Arc<VarSet>) -> Self {
        Self::multiplication(&Polynomial::one(vars))
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(p: &Polynomial) -> Self {
        let mut d = Self::zero(p.vars());
        d.add_term(Monomial::one(p.vars().len()), p.clone());
        d
    }

    /// The operator `d/d(var i)`.
    pub fn derivative(vars: &Arc<VarSet>, i: usize) -> Self {
        let mut d = Self::zero(vars);
        d.add_term(Monomial::var(vars.len(), i), Polynomial::one(vars));
        d
    }

    /// `coeff * d^alpha`.
    pub fn term(coeff: Polynomial, alpha: Monomial) -> Result<Self> {
        if alpha.exponents().len() != coeff.vars().len() {
            return Err(Error::VarSetMismatch);
        }
        if alpha.exponents().iter().any(|&e| e < 0) {
            return Err(Error::Invalid("negative derivative order".into()));
        }
        let mut d = Self::zero(coeff.vars());
        d.add_term(alpha, coeff);
        Ok(d)
    }

    fn add_term(&mut self, alpha: Monomial, coeff: Polynomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// `(multi-index, coefficient)` pairs in ascending multi-index order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &Monomial) -> Polynomial {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total derivative order; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.degree() as u32).max()
    }

    fn check(&self, other: &DiffOp) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VarSetMismatch)
        }
    }

    pub fn try_add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp::zero(&self.vars);
        for (a, p) in &self.terms {
            out.add_term(a.clone(), p.scale(c));
        }
        out
    }

    /// Left multiplication by a polynomial.
    pub fn scale_by(&self, p: &Polynomial) -> Result<DiffOp> {
        if !same_vars(&self.vars, p.vars()) {
            return Err(Error::VarSetMismatch);
        }
        let mut out = DiffOp::zero(&self.vars);
        for (a, q) in &self.terms {
            out.add_term(a.clone(), p * q);
        }
        Ok(out)
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_vars(&self.vars, f.vars()) {
            return Err(Error::VarSetMismatch);
        }
        let mut out = Polynomial::zero(&self.vars);
        for (alpha, a) in &self.terms {
            let df = f.derivative(alpha)?;
            if !df.is_zero() {
                out = &out + &(a * &df);
            }
        }
        Ok(out)
    }

    /// Normal-ordered product `self * other`, from the Leibniz expansion
    /// `d^alpha b = sum_gamma C(alpha, gamma) (d^gamma b) d^(alpha - gamma)`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check(other)?;
        let mut out = DiffOp::zero(&self.vars);
        for (alpha, a) in &self.terms {
            let gammas = sub_indices(alpha);
            for (beta, b) in &other.terms {
                for gamma in &gammas {
                    let db = b.derivative(gamma)?;
                    if db.is_zero() {
                        continue;
                    }
                    let mut c = Rational::one();
                    for (&x, &g) in alpha.exponents().iter().zip(gamma.exponents()) {
                        c *= binomial(x, g);
                    }
                    let rest: Vec<i32> = alpha
                        .exponents()
                        .iter()
                        .zip(gamma.exponents())
                        .zip(beta.exponents())
                        .map(|((x, g), y)| x - g + y)
                        .collect();
                    out.add_term(Monomial::from_exponents(rest), (a * &db).scale(&c));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    pub fn pow(&self, e: u32) -> Result<DiffOp> {
        let mut acc = DiffOp::identity(&self.vars);
        for _ in 0..e {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Replaces a parameter by a value in every coefficient.
    pub fn substitute(&self, i: usize, value: &Rational) -> Result<DiffOp> {
        let mut out = DiffOp::zero(&self.vars);
        for (a, p) in &self.terms {
            out.add_term(a.clone(), p.substitute(i, value)?);
        }
        Ok(out)
    }

    /// Parses text such as `x1^2*dx6 - 1/3*m1*x1`. An identifier `dV`
    /// denotes the derivative by `V` when `dV` is not itself a variable.
    /// Products are operator products, so `dx*x` means `x*dx + 1`.
    pub fn parse(vars: &Arc<VarSet>, src: &str) -> Result<DiffOp> {
        Ok(parse_with(src, &OpReader(vars))?)
    }
}

struct OpReader<'a>(&'a Arc<VarSet>);

impl Interpret for OpReader<'_> {
    type Value = DiffOp;
    fn number(&self, q: Rational) -> DiffOp {
        DiffOp::multiplication(&Polynomial::constant(self.0, q))
    }
    fn ident(&self, name: &str) -> Result<DiffOp, String> {
        if let Some(i) = self.0.index(name) {
            return Ok(DiffOp::multiplication(&Polynomial::var(self.0, i)));
        }
        if let Some(v) = name.strip_prefix('d') {
            if let Some(i) = self.0.index(v) {
                if self.0.is_param(i) {
                    return Err(format!("cannot differentiate by parameter `{v}`"));
                }
                return Ok(DiffOp::derivative(self.0, i));
            }
        }
        Err(format!("unknown variable or derivative `{name}`"))
    }
    fn add(&self, a: DiffOp, b: DiffOp) -> Result<DiffOp, String> {
        a.try_add(&b).map_err(|e| e.to_string())
    }
    fn neg(&self, a: DiffOp) -> DiffOp {
        a.scale(&-Rational::one())
    }
    fn mul(&self, a: DiffOp, b: DiffOp) -> Result<DiffOp, String> {
        a.compose(&b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: DiffOp, e: i64) -> Result<DiffOp, String> {
        if a.order() == Some(0) {
            // pure multiplication: allow parameter inverses
            let p = a.coefficient(&Monomial::one(self.0.len()));
            return p.pow(e).map(|q| DiffOp::multiplication(&q)).map_err(|e| e.to_string());
        }
        let e = u32::try_from(e).map_err(|_| "negative power of an operator".to_string())?;
        a.pow(e).map_err(|e| e.to_string())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        let mut first = true;
        for (alpha, coeff) in self.terms.iter().rev() {
            let mut d = Vec::new();
            for (i, &e) in alpha.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => d.push(format!("d{}", self.vars.name(i))),
                    _ => d.push(format!("d{}^{}", self.vars.name(i), e)),
                }
            }
            let d = d.join("*");
            for (m, c) in coeff.terms().rev() {
                let mono = m.render(&self.vars);
                let factor = match (mono.is_empty(), d.is_empty()) {
                    (true, _) => d.clone(),
                    (false, true) => mono,
                    (false, false) => format!("{mono}*{d}"),
                };
                write_term(&mut s, c, &factor, first);
                first = false;
            }
        }
        f.write_str(&s)
    }
}

/// A first-order operator without a zero-order part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField(DiffOp);

impl VectorField {
    pub fn from_components(vars: &Arc<VarSet>, components: &[Polynomial]) -> Result<Self> {
        if components.len() != vars.len() {
            return Err(Error::VarSetMismatch);
        }
        let mut d = DiffOp::zero(vars);
        for (i, c) in components.iter().enumerate() {
            if !same_vars(c.vars(), vars) {
                return Err(Error::VarSetMismatch);
            }
            d.add_term(Monomial::var(vars.len(), i), c.clone());
        }
        VectorField::try_from(d)
    }

    pub fn as_op(&self) -> &DiffOp {
        &self.0
    }

    pub fn into_op(self) -> DiffOp {
        self.0
    }

    /// Coefficient of `d/d(var i)`.
    pub fn component(&self, i: usize) -> Polynomial {
        self.0.coefficient(&Monomial::var(self.0.vars.len(), i))
    }

    pub fn components(&self) -> Vec<Polynomial> {
        (0..self.0.vars.len()).map(|i| self.component(i)).collect()
    }

    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        VectorField::try_from(self.0.commutator(&other.0)?)
    }
}

impl TryFrom<DiffOp> for VectorField {
    type Error = Error;
    fn try_from(d: DiffOp) -> Result<Self> {
        if let Some(alpha) = d.terms.keys().find(|a| a.degree() != 1) {
            return Err(Error::Invalid(format!(
                "not a vector field: term of derivative order {} in `{d}`",
                alpha.degree()
            )));
        }
        Ok(VectorField(d))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests;
