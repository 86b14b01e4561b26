//! Entry-by-entry comparison of a computed bracket table with a
//! transcribed one.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ExpectedTable;
use crate::expr::split_bracket_entry;
use crate::lie::{Element, LieAlgebra};

/// A pair whose transcribed value disagrees with the computed bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryMismatch {
    pub left: String,
    pub right: String,
    /// Transcribed values, each oriented as `[left, right]`.
    pub expected: Vec<String>,
    pub computed: String,
    /// 1-based entry numbers in the table.
    pub lines: Vec<usize>,
}

/// A table line that cannot be tied to a basis pair.
#[derive(Clone, Debug, PartialEq)]
pub struct UnresolvedEntry {
    pub line: usize,
    pub text: String,
    pub reason: String,
}

/// Comparison over every unordered basis pair. A pair absent from the
/// table asserts a vanishing bracket. `matched`, `mismatches`,
/// `missing_from_table` and `missing_from_computation` partition the
/// pairs; `unresolved` lines stay outside the partition.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffReport {
    pub pairs: usize,
    pub entries: usize,
    pub matched: usize,
    /// Matched pairs with a nonzero bracket.
    pub matched_nonzero: usize,
    pub mismatches: Vec<EntryMismatch>,
    /// Nonzero computed brackets the table does not list: `(left, right, computed)`.
    pub missing_from_table: Vec<(String, String, String)>,
    /// Listed nonzero values whose computed bracket vanishes.
    pub missing_from_computation: Vec<EntryMismatch>,
    /// Pairs listed more than once, with their entry numbers.
    pub duplicates: Vec<(String, String, Vec<usize>)>,
    pub unresolved: Vec<UnresolvedEntry>,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
            && self.missing_from_table.is_empty()
            && self.missing_from_computation.is_empty()
            && self.unresolved.is_empty()
    }

    pub fn discrepancies(&self) -> usize {
        self.mismatches.len()
            + self.missing_from_table.len()
            + self.missing_from_computation.len()
            + self.unresolved.len()
    }
}

/// Compares `computed` with a transcribed table. The computed table is
/// authoritative; disagreements are listed, never patched.
pub fn table_diff(computed: &LieAlgebra, expected: &ExpectedTable) -> DiffReport {
    let n = computed.dim();
    let mut listed: BTreeMap<(usize, usize), Vec<(usize, Element)>> = BTreeMap::new();
    let mut unresolved = Vec::new();
    for (k, text) in expected.entries.iter().enumerate() {
        let line = k + 1;
        let fail = |reason: String| UnresolvedEntry {
            line,
            text: text.clone(),
            reason,
        };
        let Some((a, b, rhs)) = split_bracket_entry(text) else {
            unresolved.push(fail("not of the form [X,Y]=rhs".into()));
            continue;
        };
        let (Some(i), Some(j)) = (computed.index_of(a), computed.index_of(b)) else {
            let unknown = if computed.index_of(a).is_none() { a } else { b };
            unresolved.push(fail(format!("unknown basis element `{unknown}`")));
            continue;
        };
        if i == j {
            unresolved.push(fail("bracket of an element with itself".into()));
            continue;
        }
        let value = match computed.parse_element(rhs) {
            Ok(v) => v,
            Err(e) => {
                unresolved.push(fail(format!("right-hand side: {e}")));
                continue;
            }
        };
        let (key, value) = if i < j { ((i, j), value) } else { ((j, i), value.neg()) };
        listed.entry(key).or_default().push((line, value));
    }

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    enum Class {
        Matched(bool),
        Mismatch(EntryMismatch),
        MissingFromTable(String, String, String),
        MissingFromComputation(EntryMismatch),
    }
    let classes: Vec<Class> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = computed.structure(i, j);
            let (left, right) = (computed.name(i).to_string(), computed.name(j).to_string());
            let Some(values) = listed.get(&(i, j)) else {
                return if c.is_zero() {
                    Class::Matched(false)
                } else {
                    Class::MissingFromTable(left, right, computed.format(&c))
                };
            };
            if values.iter().all(|(_, v)| *v == c) {
                return Class::Matched(!c.is_zero());
            }
            let m = EntryMismatch {
                expected: values.iter().map(|(_, v)| computed.format(v)).collect(),
                computed: computed.format(&c),
                lines: values.iter().map(|(l, _)| *l).collect(),
                left,
                right,
            };
            if c.is_zero() {
                Class::MissingFromComputation(m)
            } else {
                Class::Mismatch(m)
            }
        })
        .collect();

    let mut report = DiffReport {
        pairs: pairs.len(),
        entries: expected.entries.len(),
        matched: 0,
        matched_nonzero: 0,
        mismatches: Vec::new(),
        missing_from_table: Vec::new(),
        missing_from_computation: Vec::new(),
        duplicates: listed
            .iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(&(i, j), v)| {
                (
                    computed.name(i).to_string(),
                    computed.name(j).to_string(),
                    v.iter().map(|x| x.0).collect(),
                )
            })
            .collect(),
        unresolved,
    };
    for c in classes {
        match c {
            Class::Matched(nonzero) => {
                report.matched += 1;
                report.matched_nonzero += usize::from(nonzero);
            }
            Class::Mismatch(m) => report.mismatches.push(m),
            Class::MissingFromTable(a, b, v) => report.missing_from_table.push((a, b, v)),
            Class::MissingFromComputation(m) => report.missing_from_computation.push(m),
        }
    }
    report
}

/// The nonzero brackets of an algebra as table lines, in pair order.
pub fn table_lines(alg: &LieAlgebra) -> Vec<String> {
    alg.entries()
        .map(|((i, j), e)| format!("[{},{}]={}", alg.name(i), alg.name(j), alg.format(e)))
        .collect()
}
