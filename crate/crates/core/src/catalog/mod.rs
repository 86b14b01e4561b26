//! Named fixtures: algebras, basis changes, gradings, expected tables and
//! expected invariants, plus the checks that compare them with computed
//! results.
//!
//! Fixtures live in one JSON file each, listed in `manifest.json`. The
//! built-in set is compiled in; `LIEWB_FIXTURES` points at a directory
//! with the same layout to replace it.

mod checks;
mod diff;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_invariants, realize, verify_realization_invariant, ExtendedSetup, InvariantCheck, InvariantResult,
    RealizationInvariantReport, RelationResult,
};
pub use diff::{table_diff, table_lines, DiffReport, EntryMismatch, UnresolvedEntry};

use crate::error::{Error, Result};
use crate::lie::{
    AbstractAlgebraFile, Element, Grading, LieAlgebra, Multiplet, MultipletKind, RealizedAlgebraFile, RealizedGenerator,
};

/// Environment variable naming a fixture directory that replaces the
/// built-in set.
pub const FIXTURE_DIR_ENV: &str = "LIEWB_FIXTURES";

const MANIFEST: &str = "manifest.json";

static BUILTIN: &[(&str, &str)] = &[
    (MANIFEST, include_str!("../../fixtures/manifest.json")),
    ("w.json", include_str!("../../fixtures/w.json")),
    ("w-verbatim.json", include_str!("../../fixtures/w-verbatim.json")),
    ("multiplet.json", include_str!("../../fixtures/multiplet.json")),
    ("grading.json", include_str!("../../fixtures/grading.json")),
    ("multiplets.json", include_str!("../../fixtures/multiplets.json")),
    ("appendix-a.json", include_str!("../../fixtures/appendix-a.json")),
    ("appendix-b.json", include_str!("../../fixtures/appendix-b.json")),
    ("v2.json", include_str!("../../fixtures/v2.json")),
    ("v2-dual.json", include_str!("../../fixtures/v2-dual.json")),
    ("v0.json", include_str!("../../fixtures/v0.json")),
    ("vm1.json", include_str!("../../fixtures/vm1.json")),
    ("v12.json", include_str!("../../fixtures/v12.json")),
    ("sub1.json", include_str!("../../fixtures/sub1.json")),
    ("sub2.json", include_str!("../../fixtures/sub2.json")),
    ("v2-casimirs.json", include_str!("../../fixtures/v2-casimirs.json")),
    ("v2-poisson.json", include_str!("../../fixtures/v2-poisson.json")),
    (
        "v2-generalized.json",
        include_str!("../../fixtures/v2-generalized.json"),
    ),
    (
        "v2-realization.json",
        include_str!("../../fixtures/v2-realization.json"),
    ),
    ("v0-casimirs.json", include_str!("../../fixtures/v0-casimirs.json")),
    ("vm1-casimirs.json", include_str!("../../fixtures/vm1-casimirs.json")),
    ("v12-casimirs.json", include_str!("../../fixtures/v12-casimirs.json")),
    ("sub1-casimirs.json", include_str!("../../fixtures/sub1-casimirs.json")),
    ("sub2-casimirs.json", include_str!("../../fixtures/sub2-casimirs.json")),
    ("v2-ext.json", include_str!("../../fixtures/v2-ext.json")),
    (
        "v2-ext-realization.json",
        include_str!("../../fixtures/v2-ext-realization.json"),
    ),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureKind {
    RealizedAlgebra,
    AbstractAlgebra,
    BasisChange,
    Grading,
    MultipletSet,
    ExpectedTable,
    ExpectedInvariants,
    VirtualCopyMap,
    ExtensionRealization,
}

impl FixtureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FixtureKind::RealizedAlgebra => "realized-algebra",
            FixtureKind::AbstractAlgebra => "abstract-algebra",
            FixtureKind::BasisChange => "basis-change",
            FixtureKind::Grading => "grading",
            FixtureKind::MultipletSet => "multiplet-set",
            FixtureKind::ExpectedTable => "expected-table",
            FixtureKind::ExpectedInvariants => "expected-invariants",
            FixtureKind::VirtualCopyMap => "virtual-copy-map",
            FixtureKind::ExtensionRealization => "extension-realization",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub kind: FixtureKind,
    pub file: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Deserialize)]
struct Manifest {
    fixtures: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedElement {
    pub name: String,
    pub element: String,
}

/// New basis elements written in the basis of `algebra`. With `full`
/// the result is the same algebra in a new basis, otherwise the
/// subalgebra they span.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisChangeSpec {
    pub algebra: String,
    pub full: bool,
    pub basis: Vec<NamedElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingSpec {
    pub algebra: String,
    pub allowed: Vec<i32>,
    pub degrees: BTreeMap<String, i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipletSpec {
    pub kind: String,
    pub grade: i32,
    pub index: u32,
    /// `(basis name, J0 eigenvalue)`
    pub members: Vec<(String, i32)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipletSetSpec {
    pub algebra: String,
    /// `[J2, J0, J-2]`
    pub sl2: Vec<String>,
    /// Commuting elements whose ad-eigenvalues label the basis.
    pub probes: Vec<String>,
    pub multiplets: Vec<MultipletSpec>,
}

/// Table lines `[X,Y]=rhs` transcribed as printed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub algebra: String,
    pub entries: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantMode {
    /// Elements of the enveloping algebra that must commute with every
    /// generator.
    Central,
    /// Polynomials in dual coordinates `x1..xn` annihilated by the
    /// Lie-Poisson bracket; their symmetrizations must be central.
    Poisson,
    /// `numerator * base^exponent` candidates and functional relations.
    Generalized,
    /// Elements that must commute with the generators only after
    /// substituting the algebra's realization.
    Realization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedExpr {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub name: String,
    pub numerator: String,
    pub base: String,
    pub exponent: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
}

/// Text kept for the record but never parsed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpaqueText {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedInvariants {
    pub algebra: String,
    pub mode: InvariantMode,
    #[serde(default)]
    pub invariants: Vec<NamedExpr>,
    /// Poisson fixture whose polynomials relations may refer to.
    #[serde(default)]
    pub polynomials: Option<String>,
    #[serde(default)]
    pub candidates: Vec<CandidateSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    #[serde(default)]
    pub opaque: Vec<OpaqueText>,
}

/// A central extension of `base` on the listed pairs together with an
/// sl(2) copy in its enveloping algebra. `symbols` renames unknowns of
/// the free family to Laurent parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirtualCopyMapSpec {
    pub base: String,
    pub central: String,
    pub pairs: Vec<(String, String)>,
    pub symbols: BTreeMap<String, String>,
    pub j2: String,
    pub j0: String,
    pub jm2: String,
    pub radical: Vec<String>,
    pub scale: String,
    #[serde(default)]
    pub expected_casimir: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRealizationSpec {
    /// Name of the virtual-copy-map fixture defining the algebra.
    pub extension: String,
    pub variables: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub generators: Vec<RealizedGenerator>,
    #[serde(default)]
    pub casimir_display: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    RealizedAlgebra(RealizedAlgebraFile),
    AbstractAlgebra(AbstractAlgebraFile),
    BasisChange(BasisChangeSpec),
    Grading(GradingSpec),
    MultipletSet(MultipletSetSpec),
    ExpectedTable(ExpectedTable),
    ExpectedInvariants(ExpectedInvariants),
    VirtualCopyMap(VirtualCopyMapSpec),
    ExtensionRealization(ExtensionRealizationSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub kind: FixtureKind,
    pub description: String,
    pub payload: Payload,
}

/// An algebra built from fixtures, with each basis element written in
/// the basis of the realized or abstract algebra it descends from.
#[derive(Clone, Debug)]
pub struct BuiltAlgebra {
    pub algebra: LieAlgebra,
    pub root: String,
    pub in_root: Vec<Element>,
}

/// A multiplet-set fixture resolved against its algebra.
#[derive(Clone, Debug)]
pub struct MultipletSet {
    pub algebra: LieAlgebra,
    pub sl2: [Element; 3],
    pub probes: Vec<Element>,
    pub multiplets: Vec<Multiplet>,
}

enum Source {
    Builtin,
    Dir(PathBuf),
}

pub struct Catalog {
    source: Source,
    entries: Vec<ManifestEntry>,
    built: Mutex<HashMap<String, BuiltAlgebra>>,
}

impl Catalog {
    /// The compiled-in fixtures.
    pub fn builtin() -> Result<Self> {
        Self::with_source(Source::Builtin)
    }

    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        Self::with_source(Source::Dir(dir.as_ref().to_path_buf()))
    }

    /// The directory named by `LIEWB_FIXTURES` if set, else the built-in
    /// set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(FIXTURE_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::from_dir(PathBuf::from(d)),
            _ => Self::builtin(),
        }
    }

    fn with_source(source: Source) -> Result<Self> {
        let text = read_file(&source, MANIFEST)?;
        let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::fixture("manifest", e))?;
        let mut seen = std::collections::BTreeSet::new();
        for e in &m.fixtures {
            if !seen.insert(e.name.clone()) {
                return Err(Error::fixture("manifest", format!("`{}` listed twice", e.name)));
            }
        }
        Ok(Catalog {
            source,
            entries: m.fixtures,
            built: Mutex::new(HashMap::new()),
        })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    fn entry(&self, name: &str) -> Result<&ManifestEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownFixture(name.to_string()))
    }

    /// Reads and parses a fixture; syntax is checked here, references to
    /// other fixtures by [`Catalog::validate`].
    pub fn load(&self, name: &str) -> Result<Fixture> {
        let entry = self.entry(name)?;
        let text = read_file(&self.source, &entry.file)?;
        let bad = |e: serde_json::Error| Error::fixture(name, e);
        let payload = match entry.kind {
            FixtureKind::RealizedAlgebra => {
                let f: RealizedAlgebraFile = serde_json::from_str(&text).map_err(bad)?;
                f.operators().map_err(|e| Error::fixture(name, e))?;
                Payload::RealizedAlgebra(f)
            }
            FixtureKind::AbstractAlgebra => {
                let f: AbstractAlgebraFile = serde_json::from_str(&text).map_err(bad)?;
                f.to_algebra::<crate::scalar::Rational>()
                    .map_err(|e| Error::fixture(name, e))?;
                Payload::AbstractAlgebra(f)
            }
            FixtureKind::BasisChange => {
                let f: BasisChangeSpec = serde_json::from_str(&text).map_err(bad)?;
                if f.basis.is_empty() {
                    return Err(Error::fixture(name, "empty basis"));
                }
                unique(name, f.basis.iter().map(|b| b.name.as_str()))?;
                Payload::BasisChange(f)
            }
            FixtureKind::Grading => {
                let f: GradingSpec = serde_json::from_str(&text).map_err(bad)?;
                if let Some((n, d)) = f.degrees.iter().find(|(_, d)| !f.allowed.contains(d)) {
                    return Err(Error::fixture(name, format!("degree {d} of `{n}` is not declared")));
                }
                Payload::Grading(f)
            }
            FixtureKind::MultipletSet => {
                let f: MultipletSetSpec = serde_json::from_str(&text).map_err(bad)?;
                if f.sl2.len() != 3 {
                    return Err(Error::fixture(name, "sl2 needs three names"));
                }
                for m in &f.multiplets {
                    MultipletKind::parse(&m.kind).map_err(|e| Error::fixture(name, e))?;
                }
                Payload::MultipletSet(f)
            }
            FixtureKind::ExpectedTable => {
                let f: ExpectedTable = serde_json::from_str(&text).map_err(bad)?;
                for (k, line) in f.entries.iter().enumerate() {
                    if crate::expr::split_bracket_entry(line).is_none() {
                        return Err(Error::fixture(
                            name,
                            format!("entry {}: malformed line `{line}`", k + 1),
                        ));
                    }
                }
                Payload::ExpectedTable(f)
            }
            FixtureKind::ExpectedInvariants => {
                let f: ExpectedInvariants = serde_json::from_str(&text).map_err(bad)?;
                unique(name, f.invariants.iter().map(|i| i.name.as_str()))?;
                if f.mode == InvariantMode::Generalized && f.candidates.is_empty() {
                    return Err(Error::fixture(name, "generalized mode needs candidates"));
                }
                Payload::ExpectedInvariants(f)
            }
            FixtureKind::VirtualCopyMap => Payload::VirtualCopyMap(serde_json::from_str(&text).map_err(bad)?),
            FixtureKind::ExtensionRealization => {
                let f: ExtensionRealizationSpec = serde_json::from_str(&text).map_err(bad)?;
                unique(name, f.generators.iter().map(|g| g.name.as_str()))?;
                Payload::ExtensionRealization(f)
            }
        };
        Ok(Fixture {
            name: name.to_string(),
            kind: entry.kind,
            description: entry.description.clone(),
            payload,
        })
    }

    /// Loads a fixture and resolves everything it refers to: algebras are
    /// built, expressions parsed, multiplets checked.
    pub fn validate(&self, name: &str) -> Result<()> {
        let f = self.load(name)?;
        let wrap = |e: Error| match e {
            Error::Fixture { .. } | Error::UnknownFixture(_) => e,
            other => Error::fixture(name, other),
        };
        match &f.payload {
            // closure is a result, not a validity condition
            Payload::RealizedAlgebra(r) => {
                let (_, ops) = r.operators()?;
                for (n, op) in ops {
                    crate::weyl::VectorField::try_from(op)
                        .map_err(|e| Error::fixture(name, format!("generator `{n}`: {e}")))?;
                }
            }
            Payload::AbstractAlgebra(_) | Payload::BasisChange(_) => {
                self.build(name).map_err(wrap)?;
            }
            Payload::Grading(g) => {
                self.grading_on(name, &g.algebra).map_err(wrap)?;
            }
            Payload::MultipletSet(_) => {
                self.multiplet_set(name).map_err(wrap)?;
            }
            Payload::ExpectedTable(t) => {
                self.build(&t.algebra).map_err(wrap)?;
            }
            Payload::ExpectedInvariants(_) => {
                checks::parse_invariants(self, &f).map_err(wrap)?;
            }
            Payload::VirtualCopyMap(_) => {
                ExtendedSetup::from_catalog(self, name).map_err(wrap)?;
            }
            Payload::ExtensionRealization(r) => {
                let setup = ExtendedSetup::from_catalog(self, &r.extension).map_err(wrap)?;
                setup.realization_ops(r).map_err(wrap)?;
            }
        }
        Ok(())
    }

    /// The algebra of a realized, abstract or basis-change fixture.
    pub fn algebra(&self, name: &str) -> Result<LieAlgebra> {
        Ok(self.build(name)?.algebra)
    }

    pub fn build(&self, name: &str) -> Result<BuiltAlgebra> {
        if let Some(b) = self.built.lock().expect("cache lock").get(name) {
            return Ok(b.clone());
        }
        let f = self.load(name)?;
        let b = match f.payload {
            Payload::RealizedAlgebra(r) => {
                let algebra = r.to_algebra()?;
                let in_root = (0..algebra.dim()).map(|i| algebra.basis(i)).collect();
                BuiltAlgebra {
                    algebra,
                    root: name.to_string(),
                    in_root,
                }
            }
            Payload::AbstractAlgebra(a) => {
                let algebra: LieAlgebra = a.to_algebra()?;
                let in_root = (0..algebra.dim()).map(|i| algebra.basis(i)).collect();
                BuiltAlgebra {
                    algebra,
                    root: name.to_string(),
                    in_root,
                }
            }
            Payload::BasisChange(spec) => {
                let parent = self.build(&spec.algebra)?;
                let mut basis = Vec::with_capacity(spec.basis.len());
                for b in &spec.basis {
                    let e = parent
                        .algebra
                        .parse_element(&b.element)
                        .map_err(|e| Error::fixture(name, format!("`{}`: {e}", b.name)))?;
                    basis.push((b.name.clone(), e));
                }
                let algebra = if spec.full {
                    parent.algebra.change_of_basis(&basis)?
                } else {
                    parent.algebra.subalgebra(&basis)?
                };
                let in_root = basis.iter().map(|(_, e)| compose(&parent.in_root, e)).collect();
                BuiltAlgebra {
                    algebra,
                    root: parent.root,
                    in_root,
                }
            }
            _ => {
                return Err(Error::fixture(
                    name,
                    format!("a {} fixture does not define an algebra", f.kind.as_str()),
                ))
            }
        };
        self.built
            .lock()
            .expect("cache lock")
            .insert(name.to_string(), b.clone());
        Ok(b)
    }

    /// A grading fixture carried over to `algebra`, which must descend
    /// from the graded algebra through basis changes.
    pub fn grading_on(&self, grading: &str, algebra: &str) -> Result<Grading> {
        let Payload::Grading(spec) = self.load(grading)?.payload else {
            return Err(Error::fixture(grading, "not a grading fixture"));
        };
        let root = self.build(&spec.algebra)?;
        let g = Grading::from_names(&root.algebra, &spec.degrees, spec.allowed.iter().copied())?;
        let target = self.build(algebra)?;
        if target.root != root.root {
            return Err(Error::fixture(
                grading,
                format!("`{algebra}` does not descend from `{}`", spec.algebra),
            ));
        }
        let basis: Vec<(String, Element)> = target
            .algebra
            .names()
            .iter()
            .cloned()
            .zip(target.in_root.iter().cloned())
            .collect();
        g.transport(&basis)
    }

    pub fn multiplet_set(&self, name: &str) -> Result<MultipletSet> {
        let Payload::MultipletSet(spec) = self.load(name)?.payload else {
            return Err(Error::fixture(name, "not a multiplet-set fixture"));
        };
        let algebra = self.algebra(&spec.algebra)?;
        let el = |n: &str| algebra.parse_element(n);
        let sl2 = [el(&spec.sl2[0])?, el(&spec.sl2[1])?, el(&spec.sl2[2])?];
        let probes = spec.probes.iter().map(|p| el(p)).collect::<Result<Vec<_>>>()?;
        let mut multiplets = Vec::with_capacity(spec.multiplets.len());
        for m in &spec.multiplets {
            let members = m
                .members
                .iter()
                .map(|(n, ev)| Ok((el(n)?, *ev)))
                .collect::<Result<Vec<_>>>()?;
            multiplets.push(Multiplet::new(
                MultipletKind::parse(&m.kind)?,
                m.grade,
                m.index,
                members,
            )?);
        }
        Ok(MultipletSet {
            algebra,
            sl2,
            probes,
            multiplets,
        })
    }

    /// Expected table fixture contents.
    pub fn expected_table(&self, name: &str) -> Result<ExpectedTable> {
        match self.load(name)?.payload {
            Payload::ExpectedTable(t) => Ok(t),
            _ => Err(Error::fixture(name, "not an expected-table fixture")),
        }
    }

    pub fn expected_invariants(&self, name: &str) -> Result<ExpectedInvariants> {
        match self.load(name)?.payload {
            Payload::ExpectedInvariants(t) => Ok(t),
            _ => Err(Error::fixture(name, "not an expected-invariants fixture")),
        }
    }

    /// Names of fixtures of one kind, in manifest order.
    pub fn of_kind(&self, kind: FixtureKind) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.name.clone())
            .collect()
    }
}

fn read_file(source: &Source, file: &str) -> Result<String> {
    match source {
        Source::Builtin => BUILTIN
            .iter()
            .find(|(f, _)| *f == file)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| Error::fixture(file, "not among the built-in files")),
        Source::Dir(d) => std::fs::read_to_string(d.join(file)).map_err(|e| Error::fixture(file, e)),
    }
}

fn unique<'a>(fixture: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::fixture(fixture, format!("name `{n}` repeated")));
        }
    }
    Ok(())
}

/// `e` (coordinates over a parent basis) rewritten over the root basis.
fn compose(parent_in_root: &[Element], e: &Element) -> Element {
    let dim = parent_in_root.first().map_or(0, |x| x.dim());
    let mut out = Element::zero(dim);
    for (k, c) in e.coords() {
        out = out.add(&parent_in_root[k].scale(c));
    }
    out
}
