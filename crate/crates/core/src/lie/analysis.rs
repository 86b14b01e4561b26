//! Gradings, central series, eigenvalue labels and sl(2) ladders.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use super::{Element, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::scalar::Rational;

/// Integer degree per basis element, drawn from a declared set.
#[derive(Clone, Debug, PartialEq)]
pub struct Grading {
    degrees: Vec<i32>,
    allowed: BTreeSet<i32>,
}

impl Grading {
    pub fn new(degrees: Vec<i32>, allowed: impl IntoIterator<Item = i32>) -> Result<Self> {
        let allowed: BTreeSet<i32> = allowed.into_iter().collect();
        if let Some(d) = degrees.iter().find(|d| !allowed.contains(d)) {
            return Err(Error::Invalid(format!("degree {d} is not in the declared set")));
        }
        Ok(Grading { degrees, allowed })
    }

    /// Degrees looked up by basis name.
    pub fn from_names(
        alg: &LieAlgebra,
        degrees: &BTreeMap<String, i32>,
        allowed: impl IntoIterator<Item = i32>,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(alg.dim());
        for n in alg.names() {
            out.push(
                *degrees
                    .get(n)
                    .ok_or_else(|| Error::Invalid(format!("no degree for `{n}`")))?,
            );
        }
        Self::new(out, allowed)
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn allowed(&self) -> &BTreeSet<i32> {
        &self.allowed
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree_of(&self, e: &Element) -> Option<i32> {
        let mut it = e.support().map(|i| self.degrees[i]);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// The induced grading on a basis of homogeneous elements.
    pub fn transport(&self, new_basis: &[(String, Element)]) -> Result<Grading> {
        let mut degrees = Vec::with_capacity(new_basis.len());
        for (name, e) in new_basis {
            degrees.push(
                self.degree_of(e)
                    .ok_or_else(|| Error::NotHomogeneous { element: name.clone() })?,
            );
        }
        Ok(Grading {
            degrees,
            allowed: self.allowed.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradingViolation {
    pub left: String,
    pub right: String,
    pub expected_degree: i32,
    /// Components of the bracket with the wrong degree.
    pub offending: Vec<(String, i32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradingReport {
    pub dims: BTreeMap<i32, usize>,
    pub violations: Vec<GradingViolation>,
    /// `(j, p, dim [U_j, U_p])` for every pair of degrees `j <= p`.
    pub product_dims: Vec<(i32, i32, usize)>,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_grading(l: &LieAlgebra, g: &Grading) -> Result<GradingReport> {
    if g.degrees.len() != l.dim() {
        return Err(Error::Invalid("grading does not match the algebra dimension".into()));
    }
    let mut dims = BTreeMap::new();
    for d in &g.allowed {
        dims.insert(*d, 0);
    }
    for d in &g.degrees {
        *dims.entry(*d).or_default() += 1;
    }
    let mut violations = Vec::new();
    for ((i, j), e) in l.entries() {
        let expected = g.degrees[i] + g.degrees[j];
        let offending: Vec<(String, i32)> = e
            .support()
            .filter(|&k| g.degrees[k] != expected)
            .map(|k| (l.name(k).to_string(), g.degrees[k]))
            .collect();
        if !offending.is_empty() {
            violations.push(GradingViolation {
                left: l.name(i).to_string(),
                right: l.name(j).to_string(),
                expected_degree: expected,
                offending,
            });
        }
    }
    let mut product_dims = Vec::new();
    let degs: Vec<i32> = g.allowed.iter().copied().collect();
    for (a, &dj) in degs.iter().enumerate() {
        for &dp in &degs[a..] {
            let mut ech = Echelon::new();
            for i in (0..l.dim()).filter(|&i| g.degrees[i] == dj) {
                for k in (0..l.dim()).filter(|&k| g.degrees[k] == dp) {
                    let b = l.structure(i, k);
                    if !b.is_zero() {
                        ech.insert(&b.to_sparse());
                    }
                }
            }
            product_dims.push((dj, dp, ech.rank()));
        }
    }
    Ok(GradingReport {
        dims,
        violations,
        product_dims,
    })
}

/// A subspace given by an echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub dim: usize,
    pub basis: Vec<Element>,
}

impl Subspace {
    pub fn contains(&self, e: &Element) -> bool {
        let mut ech = Echelon::new();
        for b in &self.basis {
            ech.insert(&b.to_sparse());
        }
        ech.contains(&e.to_sparse())
    }
}

fn span(dim: usize, ech: &Echelon) -> Subspace {
    let basis: Vec<Element> = ech
        .rref()
        .into_iter()
        .map(|(_, row)| Element::from_coords(dim, row).expect("in range"))
        .collect();
    Subspace {
        dim: basis.len(),
        basis,
    }
}

/// `L, [L, L], [L, [L, L]], ...` until the dimension stops changing. The
/// last entry repeats the stable dimension unless it reached zero.
pub fn lower_central_series(l: &LieAlgebra) -> Vec<Subspace> {
    let n = l.dim();
    let mut all = Echelon::new();
    for i in 0..n {
        all.insert(&l.basis(i).to_sparse());
    }
    let mut series = vec![span(n, &all)];
    loop {
        let prev = series.last().expect("nonempty");
        if prev.dim == 0 {
            break;
        }
        let mut ech = Echelon::new();
        for i in 0..n {
            for y in &prev.basis {
                let b = l.bracket(&l.basis(i), y);
                if !b.is_zero() {
                    ech.insert(&b.to_sparse());
                }
            }
        }
        let next = span(n, &ech);
        let stable = next.dim == prev.dim;
        series.push(next);
        if stable {
            break;
        }
    }
    series
}

/// Coefficient `c` with `y = c*t`, if any.
fn proportionality(y: &Element, t: &Element) -> Option<Rational> {
    if y.is_zero() {
        return Some(Rational::zero());
    }
    let (k, tk) = t.coords().next()?;
    let c = y.coeff(k) / tk;
    y.sub(&t.scale(&c)).is_zero().then_some(c)
}

pub fn ad_eigenvalue(l: &LieAlgebra, g: &Element, x: &Element) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::Invalid("the zero element has no eigenvalue".into()));
    }
    let y = l.bracket(g, x);
    proportionality(&y, x).ok_or_else(|| {
        let (k, xk) = x.coords().next().expect("nonzero");
        let guess = y.coeff(k) / xk;
        Error::NotEigenvector {
            operator: l.format(g),
            element: l.format(x),
            residual: l.format(&y.sub(&x.scale(&guess))),
        }
    })
}

/// Grade followed by eigenvalues of the probe elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVector {
    pub grade: i32,
    pub eigenvalues: Vec<Rational>,
}

impl fmt::Display for LabelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.grade)?;
        for e in &self.eigenvalues {
            write!(f, ", {e}")?;
        }
        f.write_str(")")
    }
}

/// Labels elements by grade and by ad-eigenvalues of commuting probes
/// (for W: `J0`, `S^-1`, `S^0_1`, `S^0_2`).
pub struct LabelContext<'a> {
    pub algebra: &'a LieAlgebra,
    pub grading: &'a Grading,
    pub probes: Vec<Element>,
}

impl LabelContext<'_> {
    pub fn label_vector(&self, x: &Element) -> Result<LabelVector> {
        let grade = self.grading.degree_of(x).ok_or_else(|| Error::NotHomogeneous {
            element: self.algebra.format(x),
        })?;
        let mut eigenvalues = Vec::with_capacity(self.probes.len());
        for p in &self.probes {
            eigenvalues.push(ad_eigenvalue(self.algebra, p, x)?);
        }
        Ok(LabelVector { grade, eigenvalues })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelFailure {
    pub element: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdditivityFailure {
    pub left: String,
    pub right: String,
    pub expected: Option<LabelVector>,
    pub bracket_label: Option<LabelVector>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelReport {
    pub labels: Vec<(String, Option<LabelVector>)>,
    pub failures: Vec<LabelFailure>,
    pub additivity_checked: usize,
    pub additivity_failures: Vec<AdditivityFailure>,
}

impl LabelReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.additivity_failures.is_empty()
    }
}

/// Labels every basis element and checks additivity on nonzero brackets of
/// labelled pairs.
pub fn label_table(ctx: &LabelContext<'_>) -> LabelReport {
    let l = ctx.algebra;
    let mut labels = Vec::with_capacity(l.dim());
    let mut failures = Vec::new();
    for i in 0..l.dim() {
        match ctx.label_vector(&l.basis(i)) {
            Ok(v) => labels.push((l.name(i).to_string(), Some(v))),
            Err(e) => {
                failures.push(LabelFailure {
                    element: l.name(i).to_string(),
                    reason: e.to_string(),
                });
                labels.push((l.name(i).to_string(), None));
            }
        }
    }
    let mut checked = 0;
    let mut additivity_failures = Vec::new();
    for ((i, j), e) in l.entries() {
        let (Some(a), Some(b)) = (&labels[i].1, &labels[j].1) else {
            continue;
        };
        checked += 1;
        let expected = LabelVector {
            grade: a.grade + b.grade,
            eigenvalues: a.eigenvalues.iter().zip(&b.eigenvalues).map(|(x, y)| x + y).collect(),
        };
        match ctx.label_vector(e) {
            Ok(got) if got == expected => {}
            Ok(got) => additivity_failures.push(AdditivityFailure {
                left: l.name(i).to_string(),
                right: l.name(j).to_string(),
                expected: Some(expected),
                bracket_label: Some(got),
                reason: "labels are not additive".into(),
            }),
            Err(err) => additivity_failures.push(AdditivityFailure {
                left: l.name(i).to_string(),
                right: l.name(j).to_string(),
                expected: Some(expected),
                bracket_label: None,
                reason: err.to_string(),
            }),
        }
    }
    LabelReport {
        labels,
        failures,
        additivity_checked: checked,
        additivity_failures,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutingReport {
    pub commuting: bool,
    /// First pair (in input order) with a nonzero bracket.
    pub witness: Option<(usize, usize, Element)>,
}

pub fn commuting_set_verify(l: &LieAlgebra, xs: &[Element]) -> CommutingReport {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let b = l.bracket(&xs[i], &xs[j]);
            if !b.is_zero() {
                return CommutingReport {
                    commuting: false,
                    witness: Some((i, j, b)),
                };
            }
        }
    }
    CommutingReport {
        commuting: true,
        witness: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultipletKind {
    S,
    D,
    T,
    Q,
}

impl MultipletKind {
    pub fn eigenvalues(self) -> &'static [i32] {
        match self {
            MultipletKind::S => &[0],
            MultipletKind::D => &[-1, 1],
            MultipletKind::T => &[-2, 0, 2],
            MultipletKind::Q => &[-3, -1, 1, 3],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "S" => Ok(MultipletKind::S),
            "D" => Ok(MultipletKind::D),
            "T" => Ok(MultipletKind::T),
            "Q" => Ok(MultipletKind::Q),
            _ => Err(Error::Invalid(format!("unknown multiplet kind `{s}`"))),
        }
    }
}

/// An sl(2) multiplet: members with their `J0` eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplet {
    pub kind: MultipletKind,
    pub grade: i32,
    pub index: u32,
    pub members: Vec<(Element, i32)>,
}

impl Multiplet {
    pub fn new(kind: MultipletKind, grade: i32, index: u32, members: Vec<(Element, i32)>) -> Result<Self> {
        let mut got: Vec<i32> = members.iter().map(|m| m.1).collect();
        got.sort_unstable();
        if got != kind.eigenvalues() {
            return Err(Error::Invalid(format!(
                "{kind:?} multiplet needs eigenvalues {:?}, got {got:?}",
                kind.eigenvalues()
            )));
        }
        Ok(Multiplet {
            kind,
            grade,
            index,
            members,
        })
    }

    pub fn member(&self, m: i32) -> Option<&Element> {
        self.members.iter().find(|x| x.1 == m).map(|x| &x.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderEntry {
    pub m: i32,
    /// `[J2, M(m)] = raise * M(m+2)`; zero at the top.
    pub raise: Rational,
    /// `[J-2, M(m)] = lower * M(m-2)`; zero at the bottom.
    pub lower: Rational,
}

pub fn ladder_coefficients(l: &LieAlgebra, mult: &Multiplet, j2: &Element, jm2: &Element) -> Result<Vec<LadderEntry>> {
    let step = |op: &Element, opname: &str, x: &Element, target: Option<&Element>| -> Result<Rational> {
        let y = l.bracket(op, x);
        let zero = Element::zero(l.dim());
        let t = target.unwrap_or(&zero);
        let c = if t.is_zero() {
            y.is_zero().then(Rational::zero)
        } else {
            proportionality(&y, t)
        };
        c.ok_or_else(|| Error::NotProportional {
            operator: opname.to_string(),
            member: l.format(x),
            target: l.format(t),
            residual: l.format(&y),
        })
    };
    let mut out = Vec::new();
    let mut members = mult.members.clone();
    members.sort_by_key(|m| -m.1);
    for (x, m) in &members {
        out.push(LadderEntry {
            m: *m,
            raise: step(j2, "J2", x, mult.member(m + 2))?,
            lower: step(jm2, "J-2", x, mult.member(m - 2))?,
        });
    }
    Ok(out)
}

/// Checks `[J0, J2] = 2 J2`, `[J0, J-2] = -2 J-2`, `[J2, J-2] = J0`.
pub fn sl2_relations(l: &LieAlgebra, j2: &Element, j0: &Element, jm2: &Element) -> Vec<(String, bool)> {
    let two = Rational::from_integer(2.into());
    vec![
        ("[J0,J2] = 2*J2".to_string(), l.bracket(j0, j2) == j2.scale(&two)),
        ("[J0,J-2] = -2*J-2".to_string(), l.bracket(j0, jm2) == jm2.scale(&-two)),
        ("[J2,J-2] = J0".to_string(), l.bracket(j2, jm2) == *j0),
    ]
}

/// Whether the span of `basis` is an ideal: `[X_i, y]` stays in it.
pub fn is_ideal(l: &LieAlgebra, basis: &[Element]) -> bool {
    let mut ech = Echelon::new();
    for b in basis {
        ech.insert(&b.to_sparse());
    }
    (0..l.dim()).all(|i| {
        basis.iter().all(|y| {
            let b = l.bracket(&l.basis(i), y);
            b.is_zero() || ech.contains(&b.to_sparse())
        })
    })
}
