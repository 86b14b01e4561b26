//! Coefficient rings: exact rationals, and Laurent polynomials in named
//! central parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{parse_with, Interpret, ParseError};
use crate::poly::{Monomial, Polynomial, VarSet};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Writes `c*factor` as a signed term. `first` controls whether a leading
/// `+` is suppressed; `factor` may be empty for a bare constant.
pub(crate) fn write_term(out: &mut String, c: &Rational, factor: &str, first: bool) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if factor.is_empty() {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(factor);
    } else {
        out.push_str(&a.to_string());
        out.push('*');
        out.push_str(factor);
    }
}

/// Coefficient field abstraction shared by structure constants and the
/// enveloping algebra.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_rational(q: Rational) -> Self;
    /// The value as a rational, when it is one.
    fn to_rational(&self) -> Option<Rational>;
    /// A named parameter, for rings that have them.
    fn parameter(name: &str) -> Option<Self>;
    /// Embeds the value into polynomials over `vars`, whose parameter
    /// variables must cover every symbol used.
    fn to_polynomial(&self, vars: &Arc<VarSet>) -> Result<Polynomial>;
    /// `(rational, symbolic factor)` pieces used for flat term printing.
    fn display_terms(&self) -> Vec<(Rational, String)>;
    /// Parses a coefficient literal.
    fn parse_scalar(src: &str) -> Result<Self>;
    /// Multiplicative inverse, when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn parameter(_: &str) -> Option<Self> {
        None
    }
    fn to_polynomial(&self, vars: &Arc<VarSet>) -> Result<Polynomial> {
        Ok(Polynomial::constant(vars, self.clone()))
    }
    fn display_terms(&self) -> Vec<(Rational, String)> {
        if self.is_zero() {
            Vec::new()
        } else {
            vec![(self.clone(), String::new())]
        }
    }
    fn parse_scalar(src: &str) -> Result<Self> {
        Ok(crate::expr::parse_rational(src)?)
    }
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

/// Monomial in named parameters: sorted by name, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamMonomial(Vec<(String, i32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn symbol(name: &str, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            ParamMonomial(vec![(name.to_string(), e)])
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| i64::from(*e)).sum()
    }

    pub fn factors(&self) -> &[(String, i32)] {
        &self.0
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.0.iter().find(|(n, _)| n == name).map_or(0, |(_, e)| *e)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<&str, i32> = BTreeMap::new();
        for (n, e) in self.0.iter().chain(other.0.iter()) {
            *m.entry(n.as_str()).or_default() += e;
        }
        ParamMonomial(
            m.into_iter()
                .filter(|(_, e)| *e != 0)
                .map(|(n, e)| (n.to_string(), e))
                .collect(),
        )
    }

    fn without(&self, name: &str) -> Self {
        ParamMonomial(self.0.iter().filter(|(n, _)| n != name).cloned().collect())
    }

    fn render(&self) -> String {
        self.0
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for ParamMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Laurent polynomial over the rationals in free parameter symbols.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    terms: BTreeMap<ParamMonomial, Rational>,
}

impl Laurent {
    pub fn symbol(name: &str) -> Self {
        Self::monomial(ParamMonomial::symbol(name, 1), Rational::one())
    }

    pub fn monomial(m: ParamMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut s: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect();
        s.sort();
        s.dedup();
        s
    }

    fn add_term(&mut self, m: ParamMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Integer power; negative powers exist only for single-term values.
    pub fn pow(&self, e: i64) -> Result<Laurent> {
        if e >= 0 {
            let mut acc = Laurent::one();
            for _ in 0..e {
                acc = acc * self;
            }
            return Ok(acc);
        }
        if self.terms.len() != 1 {
            return Err(Error::Invalid(format!("cannot invert `{self}`")));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        let k = i32::try_from(-e).map_err(|_| Error::Invalid("exponent out of range".into()))?;
        let inv = ParamMonomial(m.0.iter().map(|(n, x)| (n.clone(), -x * k)).collect());
        Ok(Laurent::monomial(inv, num_traits::Pow::pow(c, -k)))
    }

    /// Sets `name = value`. Fails when `value` is zero and `name` appears
    /// with a negative exponent.
    pub fn substitute(&self, name: &str, value: &Rational) -> Result<Laurent> {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(name);
            if e < 0 && value.is_zero() {
                return Err(Error::ZeroToNegativePower(name.to_string()));
            }
            let f = if e == 0 {
                Rational::one()
            } else {
                num_traits::Pow::pow(value, e)
            };
            out.add_term(m.without(name), c.clone() * f);
        }
        Ok(out)
    }

    pub fn parse(src: &str) -> Result<Laurent, ParseError> {
        struct P;
        impl Interpret for P {
            type Value = Laurent;
            fn number(&self, q: Rational) -> Laurent {
                Laurent::from_rational(q)
            }
            fn ident(&self, name: &str) -> Result<Laurent, String> {
                Ok(Laurent::symbol(name))
            }
            fn add(&self, a: Laurent, b: Laurent) -> Result<Laurent, String> {
                Ok(a + b)
            }
            fn neg(&self, a: Laurent) -> Laurent {
                -a
            }
            fn mul(&self, a: Laurent, b: Laurent) -> Result<Laurent, String> {
                Ok(a * &b)
            }
            fn pow(&self, a: Laurent, e: i64) -> Result<Laurent, String> {
                a.pow(e).map_err(|e| e.to_string())
            }
        }
        parse_with(src, &P)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            write_term(&mut s, c, &m.render(), i == 0);
        }
        f.write_str(&s)
    }
}

impl Zero for Laurent {
    fn zero() -> Self {
        Laurent::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Laurent {
    fn one() -> Self {
        Laurent::from_rational(Rational::one())
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(mut self, rhs: Laurent) -> Laurent {
        self -= &rhs;
        self
    }
}

impl<'a> AddAssign<&'a Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &'a Laurent) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &'a Laurent) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Mul<&'a Laurent> for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &'a Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x.clone() * y);
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        self * &rhs
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Scalar for Laurent {
    fn from_rational(q: Rational) -> Self {
        Laurent::monomial(ParamMonomial::one(), q)
    }
    fn to_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.0.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }
    fn parameter(name: &str) -> Option<Self> {
        Some(Laurent::symbol(name))
    }
    fn to_polynomial(&self, vars: &Arc<VarSet>) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0i32; vars.len()];
            for (n, e) in &m.0 {
                let i = vars.index(n).ok_or_else(|| Error::UnknownVariable(n.clone()))?;
                if !vars.is_param(i) {
                    return Err(Error::Invalid(format!(
                        "`{n}` is not a parameter of the target variable set"
                    )));
                }
                exps[i] = *e;
            }
            terms.push((Monomial::from_exponents(exps), c.clone()));
        }
        Polynomial::from_terms(vars, terms)
    }
    fn display_terms(&self) -> Vec<(Rational, String)> {
        self.terms.iter().rev().map(|(m, c)| (c.clone(), m.render())).collect()
    }
    fn parse_scalar(src: &str) -> Result<Self> {
        Ok(Laurent::parse(src)?)
    }
    fn try_inverse(&self) -> Option<Self> {
        (self.terms.len() == 1).then(|| self.pow(-1).ok()).flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_cancellation() {
        let m1 = Laurent::symbol("m1");
        let inv = m1.pow(-1).unwrap();
        assert_eq!(m1 * &inv, Laurent::one());
    }

    #[test]
    fn laurent_round_trip() {
        for s in ["-1/3*m1^-1*m2 + 5/2", "m1*m2", "0", "-m2^2 + m1"] {
            let l = Laurent::parse(s).unwrap();
            assert_eq!(Laurent::parse(&l.to_string()).unwrap(), l, "{s}");
        }
        assert_eq!(Laurent::parse("m1^-1*m2").unwrap().to_string(), "m1^-1*m2");
    }

    #[test]
    fn guarded_substitution() {
        let l = Laurent::parse("m1^-1 + m2").unwrap();
        assert!(l.substitute("m1", &int(0)).is_err());
        assert_eq!(l.substitute("m2", &int(0)).unwrap(), Laurent::parse("m1^-1").unwrap());
    }
}
