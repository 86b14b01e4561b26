//! Machine checks of expected-invariant fixtures, realization checks and
//! the extended-algebra setup read from fixtures.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Catalog, ExtensionRealizationSpec, Fixture, InvariantMode, OpaqueText, Payload, VirtualCopyMapSpec};
use crate::enveloping::{Enveloping, NcPoly, DEFAULT_MAX_MONOMIALS};
use crate::error::{Error, Result};
use crate::extensions::{extended_algebra, solve_central_extension, ExtensionAnsatz, ExtensionSolution, VirtualCopy};
use crate::lie::{LieAlgebra, Realization};
use crate::poisson::{verify_functional_relations, PoissonStructure, RationalPowerCandidate};
use crate::poly::{Polynomial, VarSet};
use crate::scalar::{Laurent, Scalar};
use crate::weyl::DiffOp;

/// Substitutes the realization's operators for the letters of `p`,
/// composing each PBW word left to right.
pub fn realize(p: &NcPoly, r: &Realization) -> Result<DiffOp> {
    p.realize(r)
}

#[derive(Clone, Debug)]
pub struct RealizationInvariantReport {
    pub realized: DiffOp,
    /// Generators whose realized commutator with `p` is nonzero.
    pub failures: Vec<(String, DiffOp)>,
}

impl RealizationInvariantReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `[realize(Y_i), realize(p)] = 0` for every generator of an
/// algebra carrying a realization.
pub fn verify_realization_invariant(p: &NcPoly, alg: &LieAlgebra) -> Result<RealizationInvariantReport> {
    let r = alg
        .realization()
        .ok_or_else(|| Error::Invalid("algebra has no realization".into()))?;
    let realized = p.realize(r)?;
    let results: Vec<Result<Option<(String, DiffOp)>>> = (0..alg.dim())
        .into_par_iter()
        .map(|i| {
            let c = r.op(i).commutator(&realized)?;
            Ok((!c.is_zero()).then(|| (alg.name(i).to_string(), c)))
        })
        .collect();
    let mut failures = Vec::new();
    for x in results {
        if let Some(f) = x? {
            failures.push(f);
        }
    }
    Ok(RealizationInvariantReport { realized, failures })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantResult {
    pub name: String,
    pub passed: bool,
    /// `(what was checked, nonzero value)`, one per failing generator.
    pub witnesses: Vec<(String, String)>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationResult {
    pub name: String,
    pub holds: bool,
    /// Cleared residual per fractional exponent class.
    pub residuals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCheck {
    pub fixture: String,
    pub algebra: String,
    pub mode: InvariantMode,
    pub results: Vec<InvariantResult>,
    pub relations: Vec<RelationResult>,
    pub opaque: Vec<OpaqueText>,
}

impl InvariantCheck {
    pub fn pass_vector(&self) -> Vec<bool> {
        self.results.iter().map(|r| r.passed).collect()
    }

    pub fn passed_count(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed) && self.relations.iter().all(|r| r.holds)
    }
}

fn central_witnesses(env: &Enveloping<'_>, p: &NcPoly) -> Result<Vec<(String, String)>> {
    Ok(env
        .verify_central(p)?
        .into_iter()
        .map(|(g, r)| (format!("[{g}, K]"), r.to_string()))
        .collect())
}

fn poisson_polynomials(ps: &PoissonStructure, fixture: &Fixture) -> Result<Vec<(String, Polynomial)>> {
    let Payload::ExpectedInvariants(spec) = &fixture.payload else {
        return Err(Error::fixture(&fixture.name, "not an expected-invariants fixture"));
    };
    spec.invariants
        .iter()
        .map(|i| Ok((i.name.clone(), Polynomial::parse(ps.vars(), &i.expr)?)))
        .collect()
}

/// Parses every expression of an expected-invariants fixture against its
/// algebra without checking anything.
pub(crate) fn parse_invariants(cat: &Catalog, fixture: &Fixture) -> Result<()> {
    let Payload::ExpectedInvariants(spec) = &fixture.payload else {
        return Err(Error::fixture(&fixture.name, "not an expected-invariants fixture"));
    };
    let alg = cat.algebra(&spec.algebra)?;
    match spec.mode {
        InvariantMode::Central | InvariantMode::Realization => {
            let env = Enveloping::new(&alg);
            for i in &spec.invariants {
                env.parse(&i.expr)?;
            }
            if spec.mode == InvariantMode::Realization && alg.realization().is_none() {
                return Err(Error::Invalid(format!("`{}` has no realization", spec.algebra)));
            }
        }
        InvariantMode::Poisson | InvariantMode::Generalized => {
            let ps = PoissonStructure::new(&alg);
            for i in &spec.invariants {
                Polynomial::parse(ps.vars(), &i.expr)?;
            }
            for c in &spec.candidates {
                RationalPowerCandidate::parse(ps.vars(), &c.numerator, &c.base, &c.exponent)?;
            }
            if let Some(p) = &spec.polynomials {
                poisson_polynomials(&ps, &cat.load(p)?)?;
            }
        }
    }
    Ok(())
}

/// Runs the checks an expected-invariants fixture calls for.
pub fn check_invariants(cat: &Catalog, name: &str) -> Result<InvariantCheck> {
    let fixture = cat.load(name)?;
    let Payload::ExpectedInvariants(spec) = &fixture.payload else {
        return Err(Error::fixture(name, "not an expected-invariants fixture"));
    };
    let alg = cat.algebra(&spec.algebra)?;
    let env = Enveloping::new(&alg);
    let mut results = Vec::new();
    let mut relations = Vec::new();
    match spec.mode {
        InvariantMode::Central => {
            for i in &spec.invariants {
                let p = env.parse(&i.expr)?;
                let witnesses = central_witnesses(&env, &p)?;
                results.push(InvariantResult {
                    name: i.name.clone(),
                    passed: witnesses.is_empty(),
                    witnesses,
                    note: None,
                });
            }
        }
        InvariantMode::Realization => {
            for i in &spec.invariants {
                let p = env.parse(&i.expr)?;
                let r = verify_realization_invariant(&p, &alg)?;
                let central = env.verify_central(&p)?.is_empty();
                let note = match (r.realized.is_zero(), central) {
                    (true, _) => "realizes to the zero operator",
                    (false, true) => "central in the enveloping algebra",
                    (false, false) => "not central in the enveloping algebra",
                };
                results.push(InvariantResult {
                    name: i.name.clone(),
                    passed: r.passed(),
                    witnesses: r
                        .failures
                        .iter()
                        .map(|(g, c)| (format!("[{g}, K]"), c.to_string()))
                        .collect(),
                    note: Some(note.to_string()),
                });
            }
        }
        InvariantMode::Poisson => {
            let ps = PoissonStructure::new(&alg);
            for (n, f) in poisson_polynomials(&ps, &fixture)? {
                let mut witnesses = Vec::new();
                for i in 0..ps.dim() {
                    let b = ps.bracket(&Polynomial::var(ps.vars(), i), &f)?;
                    if !b.is_zero() {
                        witnesses.push((format!("{{{}, K}}", ps.vars().name(i)), b.to_string()));
                    }
                }
                let sym = env.symmetrize(&f, DEFAULT_MAX_MONOMIALS)?;
                let phi = central_witnesses(&env, &sym)?;
                let note = if phi.is_empty() {
                    "symmetrization is central"
                } else {
                    "symmetrization is not central"
                };
                witnesses.extend(phi.into_iter().map(|(g, r)| (format!("{g} for the symmetrization"), r)));
                results.push(InvariantResult {
                    name: n,
                    passed: witnesses.is_empty(),
                    witnesses,
                    note: Some(note.to_string()),
                });
            }
        }
        InvariantMode::Generalized => {
            let ps = PoissonStructure::new(&alg);
            let vars = ps.vars().clone();
            let mut candidates = Vec::new();
            for c in &spec.candidates {
                let cand = RationalPowerCandidate::parse(&vars, &c.numerator, &c.base, &c.exponent)?;
                let report = ps.verify_rational_invariant(&cand)?;
                results.push(InvariantResult {
                    name: c.name.clone(),
                    passed: report.passed(),
                    witnesses: report
                        .failures
                        .iter()
                        .map(|(i, r)| (format!("field of {} (cleared)", vars.name(*i)), r.to_string()))
                        .collect(),
                    note: None,
                });
                candidates.push((c.name.clone(), cand));
            }
            let polys = match &spec.polynomials {
                Some(p) => poisson_polynomials(&ps, &cat.load(p)?)?,
                None => Vec::new(),
            };
            let rels: Vec<(String, String, String)> = spec
                .relations
                .iter()
                .map(|r| (r.name.clone(), r.lhs.clone(), r.rhs.clone()))
                .collect();
            for r in verify_functional_relations(&vars, &candidates, &polys, &rels)? {
                relations.push(RelationResult {
                    name: r.name,
                    holds: r.holds,
                    residuals: r
                        .residuals
                        .iter()
                        .map(|(class, p)| format!("exponent class {class}: {p}"))
                        .collect(),
                });
            }
        }
    }
    Ok(InvariantCheck {
        fixture: name.to_string(),
        algebra: spec.algebra.clone(),
        mode: spec.mode,
        results,
        relations,
        opaque: spec.opaque.clone(),
    })
}

/// A virtual-copy-map fixture resolved: the extension ansatz, its
/// solution and the extended algebra over Laurent coefficients.
#[derive(Clone, Debug)]
pub struct ExtendedSetup {
    pub name: String,
    pub spec: VirtualCopyMapSpec,
    pub ansatz: ExtensionAnsatz,
    pub solution: ExtensionSolution,
    pub algebra: LieAlgebra<Laurent>,
    /// Unknown names bound to their parameter symbols.
    pub symbols: Vec<(String, Laurent)>,
}

impl ExtendedSetup {
    pub fn from_catalog(cat: &Catalog, name: &str) -> Result<Self> {
        let Payload::VirtualCopyMap(spec) = cat.load(name)?.payload else {
            return Err(Error::fixture(name, "not a virtual-copy-map fixture"));
        };
        let base = cat.algebra(&spec.base)?.without_realization();
        let ansatz = ExtensionAnsatz::from_names(base, &spec.pairs, &spec.central)?;
        let solution = solve_central_extension(&ansatz)?;
        let mut by_index = Vec::new();
        let mut symbols = Vec::new();
        for (unknown, symbol) in &spec.symbols {
            let r = ansatz
                .unknowns
                .iter()
                .position(|u| u == unknown)
                .ok_or_else(|| Error::fixture(name, format!("unknown `{unknown}` is not part of the ansatz")))?;
            by_index.push((r, symbol.clone()));
            symbols.push((unknown.clone(), Laurent::symbol(symbol)));
        }
        let algebra = extended_algebra(&ansatz, &solution, &by_index)?;
        Ok(ExtendedSetup {
            name: name.to_string(),
            spec,
            ansatz,
            solution,
            algebra,
            symbols,
        })
    }

    pub fn enveloping(&self) -> Enveloping<'_, Laurent> {
        Enveloping::new(&self.algebra)
    }

    pub fn virtual_copy(&self, env: &Enveloping<'_, Laurent>) -> Result<VirtualCopy> {
        VirtualCopy::parse(env, &self.spec.j2, &self.spec.j0, &self.spec.jm2)
    }

    pub fn radical(&self) -> Result<Vec<usize>> {
        self.spec
            .radical
            .iter()
            .map(|n| {
                self.algebra
                    .index_of(n)
                    .ok_or_else(|| Error::fixture(&self.name, format!("unknown radical element `{n}`")))
            })
            .collect()
    }

    pub fn scale(&self) -> Result<Laurent> {
        Laurent::parse_scalar(&self.spec.scale)
    }

    /// The expected Casimir, with unknown names read as their symbols.
    pub fn expected_casimir(&self, env: &Enveloping<'_, Laurent>) -> Result<Option<NcPoly<Laurent>>> {
        match &self.spec.expected_casimir {
            Some(src) => Ok(Some(env.parse_with_symbols(src, &self.symbols)?)),
            None => Ok(None),
        }
    }

    /// Operators of an extension-realization fixture in the basis order
    /// of the extended algebra.
    pub fn realization_ops(&self, spec: &ExtensionRealizationSpec) -> Result<Vec<DiffOp>> {
        let names: Vec<&str> = spec
            .variables
            .iter()
            .chain(&spec.parameters)
            .map(String::as_str)
            .collect();
        let vars: Arc<VarSet> = VarSet::new(&names, &spec.parameters.iter().map(String::as_str).collect::<Vec<_>>())?;
        let mut by_name = BTreeMap::new();
        for g in &spec.generators {
            let op = DiffOp::parse(&vars, &g.op).map_err(|e| Error::Invalid(format!("generator `{}`: {e}", g.name)))?;
            by_name.insert(g.name.as_str(), op);
        }
        self.algebra
            .names()
            .iter()
            .map(|n| {
                by_name
                    .remove(n.as_str())
                    .ok_or_else(|| Error::fixture(&self.name, format!("no operator for `{n}`")))
            })
            .collect()
    }
}
