//! Central extensions by Jacobi constraints, and virtual copies of sl(2)
//! in the enveloping algebra of an extension.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::enveloping::{Enveloping, NcPoly};
use crate::error::{Error, Result};
use crate::lie::{Element, LieAlgebra};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::{Laurent, Rational, Scalar};
use crate::weyl::DiffOp;

/// Unknown central coefficients on selected brackets: `[X_p, X_q] += a_r Z`.
#[derive(Clone, Debug)]
pub struct ExtensionAnsatz {
    pub base: LieAlgebra,
    pub pairs: Vec<(usize, usize)>,
    pub unknowns: Vec<String>,
    pub central: String,
}

impl ExtensionAnsatz {
    pub fn new(base: LieAlgebra, pairs: Vec<(usize, usize)>, unknowns: Vec<String>, central: String) -> Result<Self> {
        if pairs.len() != unknowns.len() {
            return Err(Error::Invalid(format!(
                "{} pairs for {} unknowns",
                pairs.len(),
                unknowns.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(p, q) in &pairs {
            if p >= q || q >= base.dim() {
                return Err(Error::Invalid(format!(
                    "pair ({p},{q}) must satisfy p < q < {}",
                    base.dim()
                )));
            }
            if !seen.insert((p, q)) {
                return Err(Error::Invalid(format!("pair ({p},{q}) given twice")));
            }
        }
        if base.index_of(&central).is_some() {
            return Err(Error::Invalid(format!("central name `{central}` already used")));
        }
        if !base.verify_jacobi().is_empty() {
            return Err(Error::Invalid("base algebra violates the Jacobi identity".into()));
        }
        Ok(ExtensionAnsatz {
            base,
            pairs,
            unknowns,
            central,
        })
    }

    /// Pairs given by basis names; unknowns are named `a1, a2, ...`.
    pub fn from_names(base: LieAlgebra, pairs: &[(String, String)], central: &str) -> Result<Self> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let i = base
                .index_of(a)
                .ok_or_else(|| Error::Invalid(format!("unknown generator `{a}`")))?;
            let j = base
                .index_of(b)
                .ok_or_else(|| Error::Invalid(format!("unknown generator `{b}`")))?;
            idx.push((i, j));
        }
        let unknowns = (1..=pairs.len()).map(|r| format!("a{r}")).collect();
        Self::new(base, idx, unknowns, central.to_string())
    }

    /// Signed unknown index of `omega(l, k)`.
    fn omega(&self, l: usize, k: usize) -> Option<(usize, bool)> {
        self.pairs.iter().enumerate().find_map(|(r, &(p, q))| {
            if (p, q) == (l, k) {
                Some((r, true))
            } else if (q, p) == (l, k) {
                Some((r, false))
            } else {
                None
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSolution {
    pub unknowns: Vec<String>,
    pub free: Vec<usize>,
    /// Each determined unknown as a combination of free ones.
    pub dependent: Vec<(usize, Vec<(usize, Rational)>)>,
    /// Jacobi triples `i < j < k` examined.
    pub triples: usize,
    pub nonzero_rows: usize,
    pub nonzero_entries: usize,
    pub rank: usize,
}

impl ExtensionSolution {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Unknown `r` as a combination of free unknowns.
    pub fn value_of(&self, r: usize) -> Vec<(usize, Rational)> {
        if self.free.contains(&r) {
            return vec![(r, Rational::one())];
        }
        self.dependent
            .iter()
            .find(|(d, _)| *d == r)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    /// Lines such as `a3 = -1/3*a4` or `a7 free`, in unknown order.
    pub fn describe(&self) -> Vec<String> {
        (0..self.unknowns.len())
            .map(|r| {
                if self.free.contains(&r) {
                    return format!("{} free", self.unknowns[r]);
                }
                let mut s = String::new();
                for (i, (f, c)) in self.value_of(r).iter().enumerate() {
                    crate::scalar::write_term(&mut s, c, &self.unknowns[*f], i == 0);
                }
                if s.is_empty() {
                    s.push('0');
                }
                format!("{} = {s}", self.unknowns[r])
            })
            .collect()
    }
}

/// Linear constraints on the unknowns from every Jacobi triple; the
/// solution is the RREF parametrization with free unknowns on non-pivot
/// columns.
pub fn solve_central_extension(a: &ExtensionAnsatz) -> Result<ExtensionSolution> {
    let n = a.base.dim();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
        .collect();
    let rows: Vec<SparseVec> = triples
        .par_iter()
        .map(|&(i, j, k)| {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                for (l, c) in a.base.structure(x, y).coords() {
                    if let Some((r, pos)) = a.omega(l, z) {
                        let e = acc.entry(r).or_insert_with(Rational::zero);
                        if pos {
                            *e += c;
                        } else {
                            *e -= c;
                        }
                    }
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    let nonzero_rows = rows.iter().filter(|r| !r.is_empty()).count();
    let nonzero_entries = rows.iter().map(Vec::len).sum();
    let mut ech = Echelon::new();
    for r in &rows {
        ech.insert(r);
    }
    let rref = ech.rref();
    let pivots: Vec<usize> = rref.iter().map(|(c, _)| *c).collect();
    let free: Vec<usize> = (0..a.unknowns.len()).filter(|c| !pivots.contains(c)).collect();
    let dependent = rref
        .into_iter()
        .map(|(c, row)| (c, row.into_iter().skip(1).map(|(k, v)| (k, -v)).collect()))
        .collect();
    Ok(ExtensionSolution {
        unknowns: a.unknowns.clone(),
        free,
        dependent,
        triples: triples.len(),
        nonzero_rows,
        nonzero_entries,
        rank: ech.rank(),
    })
}

/// The extended algebra over Laurent coefficients: free unknowns become
/// the given symbols and the central element is appended as the central
/// unit.
pub fn extended_algebra(
    a: &ExtensionAnsatz,
    sol: &ExtensionSolution,
    symbols: &[(usize, String)],
) -> Result<LieAlgebra<Laurent>> {
    let n = a.base.dim();
    let symbol_of = |f: usize| -> Result<Laurent> {
        symbols
            .iter()
            .find(|(r, _)| *r == f)
            .map(|(_, s)| Laurent::symbol(s))
            .ok_or_else(|| Error::Invalid(format!("no symbol for free unknown `{}`", sol.unknowns[f])))
    };
    let mut names = a.base.names().to_vec();
    names.push(a.central.clone());
    let mut table: BTreeMap<(usize, usize), Element<Laurent>> = BTreeMap::new();
    for ((i, j), e) in a.base.entries() {
        let coords = e.coords().map(|(k, c)| (k, Laurent::from_rational(c.clone())));
        table.insert((i, j), Element::from_coords(n + 1, coords)?);
    }
    for (r, &(p, q)) in a.pairs.iter().enumerate() {
        let mut value = Laurent::zero();
        for (f, c) in sol.value_of(r) {
            value += &(symbol_of(f)? * &Laurent::from_rational(c));
        }
        if value.is_zero() {
            continue;
        }
        let e = table.entry((p, q)).or_insert_with(|| Element::zero(n + 1));
        *e = e.add(&Element::basis(n + 1, n).scale(&value));
    }
    let params = symbols.iter().map(|(_, s)| s.clone()).collect();
    LieAlgebra::new(names, table.into_iter().map(|((i, j), e)| (i, j, e)))?
        .with_parameters(params)
        .with_central_unit(n)
}

/// Primed images of an sl(2) triple in an enveloping algebra.
#[derive(Clone, Debug)]
pub struct VirtualCopy<S: Scalar = Laurent> {
    pub j2: NcPoly<S>,
    pub j0: NcPoly<S>,
    pub jm2: NcPoly<S>,
}

#[derive(Clone, Debug)]
pub struct VirtualCopyReport<S: Scalar = Laurent> {
    /// `(primed name, radical generator, nonzero commutator)`.
    pub radical_failures: Vec<(String, String, NcPoly<S>)>,
    /// `(relation, holds, residual)` for the sl(2) relations and the
    /// nondegeneracy of the triple.
    pub sl2: Vec<(String, bool, String)>,
    /// Generators whose commutator with `K'` is nonzero.
    pub casimir_failures: Vec<(String, NcPoly<S>)>,
    pub casimir: NcPoly<S>,
}

impl<S: Scalar> VirtualCopyReport<S> {
    pub fn radical_passed(&self) -> bool {
        self.radical_failures.is_empty()
    }
    pub fn sl2_passed(&self) -> bool {
        self.sl2.iter().all(|r| r.1)
    }
    pub fn casimir_passed(&self) -> bool {
        self.casimir_failures.is_empty()
    }
    pub fn passed(&self) -> bool {
        self.radical_passed() && self.sl2_passed() && self.casimir_passed()
    }
}

impl<S: Scalar> VirtualCopy<S> {
    pub fn parse(env: &Enveloping<'_, S>, j2: &str, j0: &str, jm2: &str) -> Result<Self> {
        Ok(VirtualCopy {
            j2: env.parse(j2)?,
            j0: env.parse(j0)?,
            jm2: env.parse(jm2)?,
        })
    }

    /// The identity map onto the named triple.
    pub fn identity(env: &Enveloping<'_, S>, triple: [usize; 3]) -> Self {
        VirtualCopy {
            j2: env.generator(triple[0]),
            j0: env.generator(triple[1]),
            jm2: env.generator(triple[2]),
        }
    }

    /// `K' = J0'^2 + 2 (J2' Jm2' + Jm2' J2')`.
    pub fn casimir(&self, env: &Enveloping<'_, S>) -> Result<NcPoly<S>> {
        let two = S::from_rational(Rational::from_integer(2.into()));
        let sq = env.mul(&self.j0, &self.j0)?;
        let anti = env.mul(&self.j2, &self.jm2)?.try_add(&env.mul(&self.jm2, &self.j2)?)?;
        sq.try_add(&anti.scale(&two))
    }
}

/// Checks that the primed triple commutes with the radical, satisfies the
/// sl(2) relations and is nondegenerate, and that `K'` is central.
pub fn verify_virtual_copy<S: Scalar>(
    env: &Enveloping<'_, S>,
    map: &VirtualCopy<S>,
    radical: &[usize],
) -> Result<VirtualCopyReport<S>> {
    let primed = [("J2'", &map.j2), ("J0'", &map.j0), ("Jm2'", &map.jm2)];
    let mut radical_failures = Vec::new();
    for (name, x) in primed {
        for &c in radical {
            let r = env.commutator(x, &env.generator(c))?;
            if !r.is_zero() {
                radical_failures.push((name.to_string(), env.names()[c].clone(), r));
            }
        }
    }
    let two = S::from_rational(Rational::from_integer(2.into()));
    let rel = |lhs: NcPoly<S>, rhs: NcPoly<S>| -> Result<(bool, String)> {
        let d = lhs.try_sub(&rhs)?;
        Ok((d.is_zero(), d.to_string()))
    };
    let mut sl2 = Vec::new();
    let (ok, res) = rel(env.commutator(&map.j0, &map.j2)?, map.j2.scale(&two))?;
    sl2.push(("[J0',J2'] = 2*J2'".to_string(), ok, res));
    let (ok, res) = rel(env.commutator(&map.j0, &map.jm2)?, map.jm2.scale(&-two.clone()))?;
    sl2.push(("[J0',Jm2'] = -2*Jm2'".to_string(), ok, res));
    let (ok, res) = rel(env.commutator(&map.j2, &map.jm2)?, map.j0.clone())?;
    sl2.push(("[J2',Jm2'] = J0'".to_string(), ok, res));
    for (name, x) in primed {
        sl2.push((format!("{name} != 0"), !x.is_zero(), x.to_string()));
    }
    let casimir = map.casimir(env)?;
    let casimir_failures = env.verify_central(&casimir)?;
    Ok(VirtualCopyReport {
        radical_failures,
        sl2,
        casimir_failures,
        casimir,
    })
}

/// Term-by-term comparison of two enveloping-algebra elements.
#[derive(Clone, Debug)]
pub struct TermDiff<S = Laurent> {
    pub matched: usize,
    /// `(monomial text, computed, expected)`.
    pub mismatched: Vec<(String, S, S)>,
}

pub fn term_diff<S: Scalar>(computed: &NcPoly<S>, expected: &NcPoly<S>) -> TermDiff<S> {
    let mut keys: Vec<_> = computed.terms().map(|(m, _)| m.clone()).collect();
    keys.extend(expected.terms().map(|(m, _)| m.clone()));
    keys.sort();
    keys.dedup();
    let mut matched = 0;
    let mut mismatched = Vec::new();
    for m in keys.into_iter().rev() {
        let (a, b) = (computed.coefficient(&m), expected.coefficient(&m));
        if a == b {
            matched += 1;
        } else {
            let text = NcPoly::from_terms(computed.names(), [(m, S::one())]).to_string();
            mismatched.push((text, a, b));
        }
    }
    TermDiff { matched, mismatched }
}

#[derive(Clone, Debug)]
pub struct VirtualCasimir {
    pub casimir: NcPoly<Laurent>,
    /// Generators failing to commute with the result.
    pub failures: Vec<(String, NcPoly<Laurent>)>,
    pub diff: Option<TermDiff>,
}

/// `scale * K'` in normal form, its centrality report, and an optional
/// diff against an expected expression.
pub fn casimir_from_virtual_copy(
    env: &Enveloping<'_, Laurent>,
    map: &VirtualCopy<Laurent>,
    scale: &Laurent,
    expected: Option<&NcPoly<Laurent>>,
) -> Result<VirtualCasimir> {
    let casimir = map.casimir(env)?.scale(scale);
    let failures = env.verify_central(&casimir)?;
    let diff = expected.map(|e| term_diff(&casimir, e));
    Ok(VirtualCasimir {
        casimir,
        failures,
        diff,
    })
}

/// One realized commutator that disagrees with the abstract table.
#[derive(Clone, Debug)]
pub struct RealizedBracketMismatch {
    pub pair: (String, String),
    pub realized: DiffOp,
    pub expected: DiffOp,
}

#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub label: String,
    /// `None` when the substitution is not permitted (negative powers).
    pub value: Option<DiffOp>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct ExtendedRealizationReport {
    pub pairs_checked: usize,
    pub mismatches: Vec<RealizedBracketMismatch>,
    pub realized_casimir: DiffOp,
    /// `realized - expected` when an expected operator is supplied.
    pub casimir_residual: Option<DiffOp>,
    pub limits: Vec<LimitCheck>,
}

/// Composes the operators of a realization of the extended algebra (one
/// per basis element, the central unit included), compares every
/// commutator with the abstract table, realizes `casimir`, and evaluates
/// the parameter limits.
pub fn verify_extended_realization(
    alg: &LieAlgebra<Laurent>,
    ops: &[DiffOp],
    casimir: &NcPoly<Laurent>,
    expected: Option<&DiffOp>,
) -> Result<ExtendedRealizationReport> {
    let n = alg.dim();
    if ops.len() != n {
        return Err(Error::Invalid(format!("{} operators for dimension {n}", ops.len())));
    }
    let vars = ops[0].vars().clone();
    let realize_elem = |e: &Element<Laurent>| -> Result<DiffOp> {
        let mut out = DiffOp::zero(&vars);
        for (k, c) in e.coords() {
            out = out.try_add(&ops[k].scale_by(&c.to_polynomial(&vars)?)?)?;
        }
        Ok(out)
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<Option<RealizedBracketMismatch>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let realized = ops[i].commutator(&ops[j])?;
            let expected = realize_elem(&alg.structure(i, j))?;
            Ok((realized != expected).then(|| RealizedBracketMismatch {
                pair: (alg.name(i).to_string(), alg.name(j).to_string()),
                realized,
                expected,
            }))
        })
        .collect();
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            mismatches.push(m);
        }
    }
    let r = crate::lie::Realization::new(&vars, ops.to_vec())?;
    let realized_casimir = casimir.realize(&r)?;
    let casimir_residual = match expected {
        Some(e) => Some(realized_casimir.try_sub(e)?),
        None => None,
    };
    let mut limits = Vec::new();
    let params: Vec<String> = alg.parameters().to_vec();
    let mut subsets: Vec<Vec<&String>> = params.iter().map(|p| vec![p]).collect();
    if params.len() > 1 {
        subsets.push(params.iter().collect());
    }
    for subset in subsets {
        let label = subset
            .iter()
            .map(|p| format!("{p} -> 0"))
            .collect::<Vec<_>>()
            .join(", ");
        let mut cur = Ok(realized_casimir.clone());
        for p in &subset {
            cur = cur.and_then(|op: DiffOp| {
                let i = vars.index(p).ok_or_else(|| Error::UnknownVariable(p.to_string()))?;
                op.substitute(i, &Rational::zero())
            });
        }
        let (value, note) = match cur {
            Ok(op) => {
                let note = if op.is_zero() {
                    "vanishes identically"
                } else {
                    "nonzero"
                };
                (Some(op), note.to_string())
            }
            Err(e) => (None, format!("substitution not permitted: {e}")),
        };
        limits.push(LimitCheck { label, value, note });
    }
    Ok(ExtendedRealizationReport {
        pairs_checked: pairs.len(),
        mismatches,
        realized_casimir,
        casimir_residual,
        limits,
    })
}

/// Substitutes a rational value for one parameter symbol everywhere in
/// an element's coefficients; fails on negative powers of a vanishing
/// symbol.
pub fn specialize(p: &NcPoly<Laurent>, name: &str, value: &Rational) -> Result<NcPoly<Laurent>> {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        terms.push((m.clone(), c.substitute(name, value)?));
    }
    Ok(NcPoly::from_terms(p.names(), terms))
}

#[cfg(test)]
mod tests;
