//! Universal enveloping algebra in PBW normal form.
//!
//! Elements are sums of ordered monomials `Y_1^a_1 * ... * Y_n^a_n` over the
//! algebra's basis order. Products are normalized by right insertion of one
//! letter at a time, using `Y_l * Y_j = Y_j * Y_l + [Y_l, Y_j]` for `l > j`.
//! A central unit of the algebra, when marked, is identified with the
//! scalar 1 and never appears as a letter.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::expr::{parse_with, Interpret};
use crate::lie::{Element, LieAlgebra, Realization};
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::scalar::{write_term, Rational, Scalar};
use crate::weyl::DiffOp;

mod search;

pub use search::*;

/// Ordered monomial stored as sorted `(letter, exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PbwMonomial(SmallVec<[(u16, u16); 4]>);

impl PbwMonomial {
    pub fn one() -> Self {
        PbwMonomial::default()
    }

    pub fn letter(i: usize) -> Self {
        PbwMonomial(SmallVec::from_slice(&[(i as u16, 1)]))
    }

    /// From `(letter, exponent)` pairs in any order; zero exponents dropped.
    pub fn from_exponents(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (i, e) in pairs {
            *acc.entry(i).or_default() += e;
        }
        PbwMonomial(
            acc.into_iter()
                .filter(|&(_, e)| e > 0)
                .map(|(i, e)| (i as u16, e as u16))
                .collect(),
        )
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e as u32))
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0
            .iter()
            .find(|(j, _)| *j as usize == i)
            .map_or(0, |&(_, e)| e as u32)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// The letters left to right, with repetition.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for &(i, e) in &self.0 {
            w.extend(std::iter::repeat_n(i as usize, e as usize));
        }
        w
    }

    fn last(&self) -> Option<u16> {
        self.0.last().map(|&(i, _)| i)
    }

    fn pop_last(&self) -> PbwMonomial {
        let mut m = self.clone();
        let top = m.0.last_mut().expect("nonempty monomial");
        if top.1 == 1 {
            m.0.pop();
        } else {
            top.1 -= 1;
        }
        m
    }

    /// Appends a letter not smaller than the last one.
    fn push_right(&self, j: u16) -> PbwMonomial {
        let mut m = self.clone();
        match m.0.last_mut() {
            Some(top) if top.0 == j => top.1 += 1,
            _ => m.0.push((j, 1)),
        }
        m
    }

    /// Concatenation, valid when every letter of `self` precedes `other`'s.
    fn concat(&self, other: &PbwMonomial) -> PbwMonomial {
        let mut m = self.clone();
        for &(j, e) in &other.0 {
            match m.0.last_mut() {
                Some(top) if top.0 == j => top.1 += e,
                _ => m.0.push((j, e)),
            }
        }
        m
    }

    /// Monomial built from the first `k` letters of the word.
    fn prefix_suffix(&self, k: usize) -> (PbwMonomial, PbwMonomial) {
        let mut pre = PbwMonomial::one();
        let mut suf = PbwMonomial::one();
        let mut seen = 0usize;
        for &(i, e) in &self.0 {
            let e = e as usize;
            let take = e.min(k.saturating_sub(seen));
            if take > 0 {
                pre.0.push((i, take as u16));
            }
            if e > take {
                suf.0.push((i, (e - take) as u16));
            }
            seen += e;
        }
        (pre, suf)
    }

    fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    names[i as usize].clone()
                } else {
                    format!("{}^{e}", names[i as usize])
                }
            })
            .collect();
        parts.join("*")
    }
}

/// Graded lexicographic on the dense exponent vector: total degree first,
/// then exponents of earlier letters weigh more.
impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(other.0.iter()) {
                if a.0 != b.0 {
                    // the side whose letter comes first has a positive entry
                    // where the other has zero
                    return b.0.cmp(&a.0);
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Terms<S> = BTreeMap<PbwMonomial, S>;

fn add_into<S: Scalar>(acc: &mut Terms<S>, m: PbwMonomial, c: &S) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Element of the enveloping algebra in normal form.
#[derive(Clone)]
pub struct NcPoly<S = Rational> {
    names: Arc<[String]>,
    terms: Terms<S>,
}

impl<S: Scalar> PartialEq for NcPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        same_names(&self.names, &other.names) && self.terms == other.terms
    }
}

fn same_names(a: &Arc<[String]>, b: &Arc<[String]>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<S: Scalar> NcPoly<S> {
    pub fn zero(names: &Arc<[String]>) -> Self {
        NcPoly {
            names: names.clone(),
            terms: Terms::new(),
        }
    }

    pub fn constant(names: &Arc<[String]>, c: S) -> Self {
        Self::from_terms(names, [(PbwMonomial::one(), c)])
    }

    pub fn from_terms(names: &Arc<[String]>, terms: impl IntoIterator<Item = (PbwMonomial, S)>) -> Self {
        let mut acc = Terms::new();
        for (m, c) in terms {
            assert!(
                m.0.iter().all(|&(i, _)| (i as usize) < names.len()),
                "letter outside the basis"
            );
            add_into(&mut acc, m, &c);
        }
        NcPoly {
            names: names.clone(),
            terms: acc,
        }
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&PbwMonomial, &S)> + ExactSizeIterator {
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

    pub fn coefficient(&self, m: &PbwMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Total degree of the highest term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(PbwMonomial::degree)
    }

    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&PbwMonomial::one()).cloned(),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_names(&self.names, &other.names) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        NcPoly {
            names: self.names.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero(&self.names);
        for (m, c) in &self.terms {
            add_into(&mut out.terms, m.clone(), &(c.clone() * k));
        }
        out
    }

    /// Image under `Y_k -> x_k`. `vars` must list at least one variable per
    /// letter, followed by any parameters used in coefficients.
    pub fn commutative_image(&self, vars: &Arc<VarSet>) -> Result<Polynomial> {
        let n = self.names.len();
        if vars.len() < n || (0..n).any(|i| vars.is_param(i)) {
            return Err(Error::Invalid(format!(
                "commutative image needs {n} leading non-parameter variables"
            )));
        }
        let mut out = Polynomial::zero(vars);
        for (m, c) in &self.terms {
            let mut exps = vec![0i32; vars.len()];
            for (i, e) in m.factors() {
                exps[i] = e as i32;
            }
            let coeff = c.to_polynomial(vars)?;
            out = out.try_add(&coeff.shift(&Monomial::from_exponents(exps)))?;
        }
        Ok(out)
    }
}

impl<S: Scalar> NcPoly<S> {
    /// Substitutes the realization's operator for each letter, composing
    /// left to right in monomial order. Coefficients must embed into the
    /// realization's variable set.
    pub fn realize(&self, r: &Realization) -> Result<DiffOp> {
        if r.ops().len() != self.names.len() {
            return Err(Error::AlgebraMismatch);
        }
        let vars = r.vars();
        let mut out = DiffOp::zero(vars);
        for (m, c) in &self.terms {
            let mut t = DiffOp::multiplication(&c.to_polynomial(vars)?);
            for k in m.word() {
                t = t.compose(r.op(k))?;
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Display for NcPoly<S> {
    /// Highest monomial first; multi-term coefficients are spread into one
    /// term per coefficient piece.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let word = m.render(&self.names);
            for (q, sym) in c.display_terms() {
                let factor = match (sym.is_empty(), word.is_empty()) {
                    (true, _) => word.clone(),
                    (false, true) => sym,
                    (false, false) => format!("{sym}*{word}"),
                };
                write_term(&mut s, &q, &factor, first);
                first = false;
            }
        }
        if first {
            s.push('0');
        }
        f.write_str(&s)
    }
}

impl<S: Scalar> fmt::Debug for NcPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

/// `[Y_a, Y_b]` split into the central-unit scalar and the letter part.
#[derive(Clone, Debug)]
struct Bracket<S> {
    scalar: S,
    letters: Vec<(u16, S)>,
}

/// Product and adjoint action for one algebra.
pub struct Enveloping<'a, S: Scalar = Rational> {
    alg: &'a LieAlgebra<S>,
    names: Arc<[String]>,
    /// dense `n * n` table of nonzero brackets
    table: Vec<Option<Bracket<S>>>,
}

impl<'a, S: Scalar> Enveloping<'a, S> {
    pub fn new(alg: &'a LieAlgebra<S>) -> Self {
        let n = alg.dim();
        let unit = alg.central_unit();
        let mut table = vec![None; n * n];
        for ((i, j), e) in alg.entries() {
            let mut scalar = S::zero();
            let mut letters = Vec::new();
            for (k, c) in e.coords() {
                if Some(k) == unit {
                    scalar = c.clone();
                } else {
                    letters.push((k as u16, c.clone()));
                }
            }
            let neg = Bracket {
                scalar: -scalar.clone(),
                letters: letters.iter().map(|(k, c)| (*k, -c.clone())).collect(),
            };
            table[i * n + j] = Some(Bracket { scalar, letters });
            table[j * n + i] = Some(neg);
        }
        Enveloping {
            alg,
            names: alg.names().to_vec().into(),
            table,
        }
    }

    pub fn algebra(&self) -> &'a LieAlgebra<S> {
        self.alg
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Indices that act as letters (everything but the central unit).
    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        let unit = self.alg.central_unit();
        (0..self.dim()).filter(move |&i| Some(i) != unit)
    }

    fn bracket(&self, a: u16, b: u16) -> Option<&Bracket<S>> {
        self.table[a as usize * self.dim() + b as usize].as_ref()
    }

    pub fn zero(&self) -> NcPoly<S> {
        NcPoly::zero(&self.names)
    }

    pub fn one(&self) -> NcPoly<S> {
        NcPoly::constant(&self.names, S::one())
    }

    /// The generator `Y_i`; the central unit maps to 1.
    pub fn generator(&self, i: usize) -> NcPoly<S> {
        assert!(i < self.dim(), "generator index out of range");
        if Some(i) == self.alg.central_unit() {
            return self.one();
        }
        NcPoly::from_terms(&self.names, [(PbwMonomial::letter(i), S::one())])
    }

    /// Linear embedding of the Lie algebra.
    pub fn element(&self, e: &Element<S>) -> NcPoly<S> {
        let mut out = self.zero();
        for (i, c) in e.coords() {
            out = out.try_add(&self.generator(i).scale(c)).expect("same algebra");
        }
        out
    }

    fn check(&self, p: &NcPoly<S>) -> Result<()> {
        if same_names(&self.names, &p.names) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn mul(&self, p: &NcPoly<S>, q: &NcPoly<S>) -> Result<NcPoly<S>> {
        self.check(p)?;
        self.check(q)?;
        let mut rw = Rewriter::new(self);
        Ok(NcPoly {
            names: self.names.clone(),
            terms: rw.mul(&p.terms, &q.terms),
        })
    }

    pub fn commutator(&self, p: &NcPoly<S>, q: &NcPoly<S>) -> Result<NcPoly<S>> {
        self.mul(p, q)?.try_sub(&self.mul(q, p)?)
    }

    pub fn pow(&self, p: &NcPoly<S>, e: u32) -> Result<NcPoly<S>> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, p)?;
        }
        Ok(acc)
    }

    /// `[Y_i, p]`.
    pub fn ad_action(&self, i: usize, p: &NcPoly<S>) -> Result<NcPoly<S>> {
        self.check(p)?;
        if i >= self.dim() {
            return Err(Error::Invalid(format!("generator index {i} out of range")));
        }
        let mut rw = Rewriter::new(self);
        let mut acc = Terms::new();
        for (m, c) in &p.terms {
            for (mm, cc) in rw.ad_monomial(i as u16, m) {
                add_into(&mut acc, mm, &(cc * c));
            }
        }
        Ok(NcPoly {
            names: self.names.clone(),
            terms: acc,
        })
    }

    /// Generators whose commutator with `p` is nonzero, with that
    /// commutator. Empty iff `p` is central.
    pub fn verify_central(&self, p: &NcPoly<S>) -> Result<Vec<(String, NcPoly<S>)>> {
        self.check(p)?;
        let letters: Vec<usize> = self.letters().collect();
        let out: Vec<Option<(String, NcPoly<S>)>> = letters
            .par_iter()
            .map(|&i| {
                let r = self.ad_action(i, p).expect("checked algebra");
                (!r.is_zero()).then(|| (self.names[i].clone(), r))
            })
            .collect();
        Ok(out.into_iter().flatten().collect())
    }

    /// Substitutes `images[k]` (elements of `target`) for each letter and
    /// multiplies out in `target`.
    pub fn map_letters<'b>(
        &self,
        p: &NcPoly<S>,
        target: &Enveloping<'b, S>,
        images: &[NcPoly<S>],
    ) -> Result<NcPoly<S>> {
        self.check(p)?;
        if images.len() != self.dim() {
            return Err(Error::Invalid(format!(
                "{} images for dimension {}",
                images.len(),
                self.dim()
            )));
        }
        let mut out = target.zero();
        for (m, c) in &p.terms {
            let mut t = target.one().scale(c);
            for k in m.word() {
                t = target.mul(&t, &images[k])?;
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Symmetrization of a commutative polynomial whose variable `k`
    /// stands for letter `k`: each monomial becomes the average of all
    /// distinct orderings of its letters. `cap` bounds the orderings per
    /// monomial.
    pub fn symmetrize(&self, f: &Polynomial, cap: usize) -> Result<NcPoly<S>> {
        let vars = f.vars();
        if vars.len() < self.dim() {
            return Err(Error::Invalid(format!(
                "polynomial has {} variables for dimension {}",
                vars.len(),
                self.dim()
            )));
        }
        let mut out = self.zero();
        for (m, c) in f.terms() {
            let mut word = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if i >= self.dim() {
                    return Err(Error::Invalid(format!("variable `{}` has no letter", vars.name(i))));
                }
                word.extend(std::iter::repeat_n(i, e as usize));
            }
            let mut sum = self.zero();
            let mut count = 0usize;
            let mut perm = word.clone();
            loop {
                count += 1;
                if count > cap {
                    return Err(Error::TooManyMonomials { needed: count, cap });
                }
                let mut t = self.one();
                for &k in &perm {
                    t = self.mul(&t, &self.generator(k))?;
                }
                sum = sum.try_add(&t)?;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let weight = S::from_rational(c.clone() / Rational::from_integer(count.into()));
            out = out.try_add(&sum.scale(&weight))?;
        }
        Ok(out)
    }

    /// Parses an expression in the basis names; products are taken in the
    /// written order and normalized. Algebra parameters may appear in
    /// coefficients.
    pub fn parse(&self, src: &str) -> Result<NcPoly<S>> {
        self.parse_with_symbols(src, &[])
    }

    /// Like [`Self::parse`], with extra names bound to scalars.
    pub fn parse_with_symbols(&self, src: &str, symbols: &[(String, S)]) -> Result<NcPoly<S>> {
        Ok(parse_with(src, &Reader(self, symbols))?)
    }
}

impl Enveloping<'_, Rational> {
    /// Inverse of [`Enveloping::symmetrize`]: the commutative polynomial
    /// whose symmetrization is `p`, found by peeling off the top degree.
    pub fn desymmetrize(&self, p: &NcPoly, vars: &Arc<VarSet>, cap: usize) -> Result<Polynomial> {
        self.check(p)?;
        let mut rest = p.clone();
        let mut out = Polynomial::zero(vars);
        while let Some(d) = rest.degree() {
            let top = NcPoly::from_terms(
                &self.names,
                rest.terms()
                    .filter(|(m, _)| m.degree() == d)
                    .map(|(m, c)| (m.clone(), c.clone())),
            );
            let t = top.commutative_image(vars)?;
            rest = rest.try_sub(&self.symmetrize(&t, cap)?)?;
            out = out.try_add(&t)?;
        }
        Ok(out)
    }
}

/// Next lexicographic permutation; false when `v` was the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

type Expansion<S> = Rc<Vec<(PbwMonomial, S)>>;

/// Memoized right-insertion rewriting. One per call or per worker.
pub(crate) struct Rewriter<'e, 'a, S: Scalar> {
    env: &'e Enveloping<'a, S>,
    cache: HashMap<(PbwMonomial, u16), Expansion<S>>,
}

impl<'e, 'a, S: Scalar> Rewriter<'e, 'a, S> {
    pub(crate) fn new(env: &'e Enveloping<'a, S>) -> Self {
        Rewriter {
            env,
            cache: HashMap::new(),
        }
    }

    /// `m * Y_j` in normal form.
    fn mul_letter(&mut self, m: &PbwMonomial, j: u16) -> Rc<Vec<(PbwMonomial, S)>> {
        match m.last() {
            Some(l) if l > j => {}
            _ => return Rc::new(vec![(m.push_right(j), S::one())]),
        }
        if let Some(hit) = self.cache.get(&(m.clone(), j)) {
            return hit.clone();
        }
        let l = m.last().expect("nonempty");
        let rest = m.pop_last();
        let mut acc = Terms::new();
        // rest * Y_j * Y_l
        let first = self.mul_letter(&rest, j);
        for (mm, c) in first.iter() {
            for (t, cc) in self.mul_letter(mm, l).iter() {
                add_into(&mut acc, t.clone(), &(cc.clone() * c));
            }
        }
        // rest * [Y_l, Y_j]
        if let Some(br) = self.env.bracket(l, j) {
            add_into(&mut acc, rest.clone(), &br.scalar);
            for (k, c) in &br.letters {
                for (t, cc) in self.mul_letter(&rest, *k).iter() {
                    add_into(&mut acc, t.clone(), &(cc.clone() * c));
                }
            }
        }
        let out = Rc::new(acc.into_iter().collect::<Vec<_>>());
        self.cache.insert((m.clone(), j), out.clone());
        out
    }

    fn mul_terms_letter(&mut self, p: &Terms<S>, j: u16) -> Terms<S> {
        let mut acc = Terms::new();
        for (m, c) in p {
            for (t, cc) in self.mul_letter(m, j).iter() {
                add_into(&mut acc, t.clone(), &(cc.clone() * c));
            }
        }
        acc
    }

    fn mul(&mut self, p: &Terms<S>, q: &Terms<S>) -> Terms<S> {
        let mut acc = Terms::new();
        for (a, ca) in p {
            for (b, cb) in q {
                let mut cur = Terms::new();
                cur.insert(a.clone(), ca.clone() * cb);
                for k in b.word() {
                    cur = self.mul_terms_letter(&cur, k as u16);
                }
                for (m, c) in cur {
                    add_into(&mut acc, m, &c);
                }
            }
        }
        acc
    }

    /// `[Y_i, m]` through the derivation rule over the letters of `m`.
    pub(crate) fn ad_monomial(&mut self, i: u16, m: &PbwMonomial) -> Terms<S> {
        let mut acc = Terms::new();
        let word = m.word();
        for (pos, &letter) in word.iter().enumerate() {
            let Some(br) = self.env.bracket(i, letter as u16) else {
                continue;
            };
            let (pre, rest) = m.prefix_suffix(pos);
            let suf = rest.pop_first();
            add_into(&mut acc, pre.concat(&suf), &br.scalar);
            for (k, c) in &br.letters {
                let mut cur: Terms<S> = self.mul_letter(&pre, *k).iter().cloned().collect();
                for s in suf.word() {
                    cur = self.mul_terms_letter(&cur, s as u16);
                }
                for (t, cc) in cur {
                    add_into(&mut acc, t, &(cc * c));
                }
            }
        }
        acc
    }
}

impl PbwMonomial {
    fn pop_first(&self) -> PbwMonomial {
        let mut m = self.clone();
        if let Some(first) = m.0.first_mut() {
            if first.1 == 1 {
                m.0.remove(0);
            } else {
                first.1 -= 1;
            }
        }
        m
    }
}

struct Reader<'r, 'a, S: Scalar>(&'r Enveloping<'a, S>, &'r [(String, S)]);

impl<S: Scalar> Interpret for Reader<'_, '_, S> {
    type Value = NcPoly<S>;
    fn number(&self, q: Rational) -> NcPoly<S> {
        NcPoly::constant(&self.0.names, S::from_rational(q))
    }
    fn ident(&self, name: &str) -> Result<NcPoly<S>, String> {
        if let Some(i) = self.0.alg.index_of(name) {
            return Ok(self.0.generator(i));
        }
        if let Some((_, c)) = self.1.iter().find(|(n, _)| n == name) {
            return Ok(NcPoly::constant(&self.0.names, c.clone()));
        }
        if self.0.alg.parameters().iter().any(|p| p == name) {
            if let Some(s) = S::parameter(name) {
                return Ok(NcPoly::constant(&self.0.names, s));
            }
        }
        Err(format!("unknown generator `{name}`"))
    }
    fn add(&self, a: NcPoly<S>, b: NcPoly<S>) -> Result<NcPoly<S>, String> {
        a.try_add(&b).map_err(|e| e.to_string())
    }
    fn neg(&self, a: NcPoly<S>) -> NcPoly<S> {
        a.neg()
    }
    fn mul(&self, a: NcPoly<S>, b: NcPoly<S>) -> Result<NcPoly<S>, String> {
        self.0.mul(&a, &b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: NcPoly<S>, e: i64) -> Result<NcPoly<S>, String> {
        if e < 0 {
            let c = a
                .as_constant()
                .and_then(|c| c.try_inverse())
                .ok_or_else(|| "negative power of a non-invertible factor".to_string())?;
            let k = u32::try_from(-e).map_err(|_| "exponent out of range".to_string())?;
            let inv = NcPoly::constant(&self.0.names, c);
            return self.0.pow(&inv, k).map_err(|e| e.to_string());
        }
        let k = u32::try_from(e).map_err(|_| "exponent out of range".to_string())?;
        self.0.pow(&a, k).map_err(|e| e.to_string())
    }
}
