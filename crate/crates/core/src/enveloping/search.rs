//! Casimir search by exact nullspace, and algebraic-independence probes.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Enveloping, NcPoly, PbwMonomial, Rewriter};
use crate::error::{Error, Result};
use crate::lie::{ad_eigenvalue, Element};
use crate::linalg::{rank, Echelon, SparseVec};
use crate::poly::{Polynomial, VarSet};
use crate::scalar::Rational;

pub const DEFAULT_MAX_MONOMIALS: usize = 2_000_000;

/// Seed for the evaluation points of [`algebraic_independence`].
pub const INDEPENDENCE_SEED: u64 = 0x5eed_1e5e;

#[derive(Clone, Debug)]
pub struct SearchFilters {
    /// Keep only monomials of total ad-weight zero under this element.
    pub weight_zero: Option<Element>,
    /// Restrict candidate letters to these indices.
    pub letters: Option<Vec<usize>>,
    pub max_monomials: usize,
}

impl Default for SearchFilters {
    fn default() -> Self {
        SearchFilters {
            weight_zero: None,
            letters: None,
            max_monomials: DEFAULT_MAX_MONOMIALS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CasimirSearch {
    pub max_degree: u32,
    pub candidates: usize,
    /// Distinct nonzero equations `(generator, output monomial)`.
    pub equations: usize,
    pub rank: usize,
    /// Nullspace basis, one element per free candidate column.
    pub raw: Vec<NcPoly>,
    /// Greedy degree-ascending algebraically independent subset of `raw`.
    pub reduced: Vec<NcPoly>,
}

/// PBW monomials of degree `1..=max_degree` over `letters`, ascending.
fn enumerate(letters: &[usize], weights: Option<&[Rational]>, max_degree: u32, cap: usize) -> Result<Vec<PbwMonomial>> {
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        letters: &[usize],
        weights: Option<&[Rational]>,
        start: usize,
        left: u32,
        cur: &mut Vec<(usize, u32)>,
        weight: Rational,
        out: &mut Vec<PbwMonomial>,
        cap: usize,
    ) -> Result<()> {
        if !cur.is_empty() && weight.is_zero() {
            out.push(PbwMonomial::from_exponents(cur.iter().copied()));
            if out.len() > cap {
                return Err(Error::TooManyMonomials { needed: out.len(), cap });
            }
        }
        if left == 0 {
            return Ok(());
        }
        for (pos, &k) in letters.iter().enumerate().skip(start) {
            let w = weights.map_or_else(Rational::zero, |ws| ws[pos].clone());
            for e in 1..=left {
                cur.push((k, e));
                let total = &weight + &w * Rational::from_integer(e.into());
                rec(letters, weights, pos + 1, left - e, cur, total, out, cap)?;
                cur.pop();
            }
        }
        Ok(())
    }
    let mut cur = Vec::new();
    rec(
        letters,
        weights,
        0,
        max_degree,
        &mut cur,
        Rational::zero(),
        &mut out,
        cap,
    )?;
    out.sort();
    Ok(out)
}

/// Solves `[Y_i, K] = 0` for every generator over all filtered PBW
/// monomials of degree at most `max_degree`. Constants are excluded.
pub fn casimir_search(env: &Enveloping<'_>, max_degree: u32, filters: &SearchFilters) -> Result<CasimirSearch> {
    let alg = env.algebra();
    let mut letters: Vec<usize> = match &filters.letters {
        Some(ls) => {
            if let Some(&bad) = ls.iter().find(|&&i| i >= env.dim()) {
                return Err(Error::Invalid(format!("letter index {bad} out of range")));
            }
            ls.clone()
        }
        None => env.letters().collect(),
    };
    letters.retain(|&i| Some(i) != alg.central_unit());
    letters.sort_unstable();
    letters.dedup();
    let weights = match &filters.weight_zero {
        Some(g) => Some(
            letters
                .iter()
                .map(|&k| ad_eigenvalue(alg, g, &alg.basis(k)))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let candidates = enumerate(&letters, weights.as_deref(), max_degree, filters.max_monomials)?;
    let gens: Vec<u16> = env.letters().map(|i| i as u16).collect();

    let columns: Vec<Vec<(u16, PbwMonomial, Rational)>> = candidates
        .par_iter()
        .map_init(
            || Rewriter::new(env),
            |rw, m| {
                let mut col = Vec::new();
                for &g in &gens {
                    for (t, c) in rw.ad_monomial(g, m) {
                        col.push((g, t, c));
                    }
                }
                col
            },
        )
        .collect();

    let mut row_of: HashMap<(u16, PbwMonomial), usize> = HashMap::new();
    let mut rows: Vec<SparseVec> = Vec::new();
    for (j, col) in columns.into_iter().enumerate() {
        for (g, t, c) in col {
            let next = rows.len();
            let r = *row_of.entry((g, t)).or_insert(next);
            if r == next {
                rows.push(Vec::new());
            }
            rows[r].push((j, c));
        }
    }
    let mut ech = Echelon::new();
    for r in &rows {
        ech.insert(r);
    }
    let raw: Vec<NcPoly> = ech
        .nullspace(candidates.len())
        .into_iter()
        .map(|v| NcPoly::from_terms(env.names(), v.into_iter().map(|(j, c)| (candidates[j].clone(), c))))
        .collect();
    let reduced = reduce_generating_set(env, &raw)?;
    Ok(CasimirSearch {
        max_degree,
        candidates: candidates.len(),
        equations: rows.len(),
        rank: ech.rank(),
        raw,
        reduced,
    })
}

/// Greedy selection in order of ascending top degree, keeping an element
/// when it raises the Jacobian rank of the commutative images.
pub fn reduce_generating_set(env: &Enveloping<'_>, raw: &[NcPoly]) -> Result<Vec<NcPoly>> {
    let vars = VarSet::numbered("y", env.dim());
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&i| raw[i].degree().unwrap_or(0));
    let mut kept: Vec<NcPoly> = Vec::new();
    let mut images: Vec<Polynomial> = Vec::new();
    for i in order {
        let img = raw[i].commutative_image(&vars)?;
        images.push(img);
        if algebraic_independence(&images)?.independent {
            kept.push(raw[i].clone());
        } else {
            images.pop();
        }
    }
    Ok(kept)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Independence {
    pub count: usize,
    /// Best Jacobian rank over the tested points.
    pub rank: usize,
    /// Full rank at some tested point. Lower rank everywhere only means
    /// dependent at the tested points.
    pub independent: bool,
    pub points_tested: usize,
}

/// Jacobian rank of `polys` at up to three seeded pseudo-random rational
/// points.
pub fn algebraic_independence(polys: &[Polynomial]) -> Result<Independence> {
    let Some(first) = polys.first() else {
        return Ok(Independence {
            count: 0,
            rank: 0,
            independent: true,
            points_tested: 0,
        });
    };
    let vars = first.vars().clone();
    let n = vars.len();
    let mut grads = Vec::with_capacity(polys.len());
    for p in polys {
        let p = p.rebase(&vars)?;
        grads.push((0..n).map(|k| p.partial_derivative(k)).collect::<Result<Vec<_>>>()?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(INDEPENDENCE_SEED);
    let mut best = 0;
    let mut tested = 0;
    for _ in 0..3 {
        let point: Vec<Rational> = (0..n)
            .map(|_| {
                let num: i64 = rng.gen_range(1..=97) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let den: i64 = rng.gen_range(1..=13);
                Rational::new(num.into(), den.into())
            })
            .collect();
        tested += 1;
        let mut rows = Vec::with_capacity(grads.len());
        for g in &grads {
            let mut row = Vec::new();
            for (k, d) in g.iter().enumerate() {
                let v = d.evaluate_at(&point)?;
                if !v.is_zero() {
                    row.push((k, v));
                }
            }
            rows.push(row);
        }
        best = best.max(rank(&rows));
        if best == polys.len() {
            break;
        }
    }
    Ok(Independence {
        count: polys.len(),
        rank: best,
        independent: best == polys.len(),
        points_tested: tested,
    })
}
