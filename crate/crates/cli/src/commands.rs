//! One function per subcommand, each producing a JSON report.

use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use liewb_core::catalog::{
    check_invariants, realize, table_diff, Catalog, DiffReport, ExtendedSetup, FixtureKind, InvariantCheck, Payload,
};
use liewb_core::enveloping::{casimir_search, SearchFilters};
use liewb_core::extensions::{
    casimir_from_virtual_copy, solve_central_extension, verify_extended_realization, verify_virtual_copy,
    ExtensionAnsatz,
};
use liewb_core::lie::{
    is_ideal, label_table, lower_central_series, sl2_relations, verify_grading, LabelContext, MultipletKind,
};
use liewb_core::poisson::{PoissonFilters, PoissonStructure};
use liewb_core::{DiffOp, Element, Enveloping, LieAlgebra};

use crate::{Cli, Command, Outcome};

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cat = Catalog::from_env().context("loading fixtures")?;
    match &cli.command {
        Command::VerifyTables { algebra, expected } => {
            verify_tables(&cat, algebra.as_deref(), expected.as_deref(), cli.strict)
        }
        Command::Grading {
            algebra,
            grading,
            multiplets,
        } => grading_report(&cat, algebra, grading, multiplets),
        Command::CasimirNc {
            algebra,
            max_degree,
            weight_filter,
            restrict_vars,
        } => casimir_nc(
            &cat,
            algebra,
            *max_degree,
            weight_filter.as_deref(),
            restrict_vars.as_deref(),
            cli.max_monomials,
        ),
        Command::CasimirPoisson {
            algebra,
            max_degree,
            restrict_vars,
        } => casimir_poisson(&cat, algebra, *max_degree, restrict_vars.as_deref(), cli.max_monomials),
        Command::VerifyInvariants { fixture } => verify_invariants(&cat, fixture.as_deref()),
        Command::CentralExt {
            algebra,
            pairs,
            central,
            fixture,
        } => central_ext(&cat, algebra.as_deref(), pairs.as_deref(), central, fixture.as_deref()),
        Command::VirtualCopy { fixture } => virtual_copy(&cat, fixture),
        Command::Realize { fixture, expression } => realize_cmd(&cat, fixture, expression),
        Command::Labels { algebra, grading } => labels(&cat, algebra, grading),
    }
}

fn diff_json(algebra: &str, expected: &str, r: &DiffReport) -> Value {
    json!({
        "algebra": algebra,
        "expected": expected,
        "pairs": r.pairs,
        "entries": r.entries,
        "matched": r.matched,
        "matched_nonzero": r.matched_nonzero,
        "discrepancies": r.discrepancies(),
        "mismatches": r.mismatches.iter().map(|m| json!({
            "pair": format!("[{},{}]", m.left, m.right),
            "lines": m.lines,
            "expected": m.expected,
            "computed": m.computed,
        })).collect::<Vec<_>>(),
        "missing_from_table": r.missing_from_table.iter().map(|(a, b, v)| json!({
            "pair": format!("[{a},{b}]"),
            "computed": v,
        })).collect::<Vec<_>>(),
        "missing_from_computation": r.missing_from_computation.iter().map(|m| json!({
            "pair": format!("[{},{}]", m.left, m.right),
            "lines": m.lines,
            "expected": m.expected,
        })).collect::<Vec<_>>(),
        "duplicates": r.duplicates.iter().map(|(a, b, lines)| json!({
            "pair": format!("[{a},{b}]"),
            "lines": lines,
        })).collect::<Vec<_>>(),
        "unresolved": r.unresolved.iter().map(|u| json!({
            "line": u.line,
            "text": u.text,
            "reason": u.reason,
        })).collect::<Vec<_>>(),
    })
}

fn verify_tables(cat: &Catalog, algebra: Option<&str>, expected: Option<&str>, strict: bool) -> Result<Outcome> {
    let targets: Vec<String> = match expected {
        Some(e) => vec![e.to_string()],
        None => cat.of_kind(FixtureKind::ExpectedTable),
    };
    let mut reports = Vec::new();
    let mut clean = true;
    for t in &targets {
        let table = cat.expected_table(t)?;
        let alg_name = algebra.unwrap_or(&table.algebra);
        let alg = cat.algebra(alg_name)?;
        let r = table_diff(&alg, &table);
        clean &= r.is_clean();
        reports.push(diff_json(alg_name, t, &r));
    }
    Ok(Outcome {
        report: json!({ "strict": strict, "clean": clean, "diffs": reports }),
        passed: clean || !strict,
    })
}

fn to_root(e: &Element, in_root: &[Element]) -> Element {
    let dim = in_root.first().map_or(0, Element::dim);
    e.coords()
        .fold(Element::zero(dim), |acc, (k, c)| acc.add(&in_root[k].scale(c)))
}

type Carry = Box<dyn Fn(&Element) -> Element>;

fn grading_report(cat: &Catalog, algebra: &str, grading: &str, multiplets: &str) -> Result<Outcome> {
    let built = cat.build(algebra)?;
    let alg = &built.algebra;
    let g = cat.grading_on(grading, algebra)?;
    let report = verify_grading(alg, &g)?;
    let mut passed = report.passed();

    let Payload::MultipletSet(mspec) = cat.load(multiplets)?.payload else {
        bail!("`{multiplets}` is not a multiplet-set fixture");
    };
    let ms = cat.multiplet_set(multiplets)?;
    let ms_built = cat.build(&mspec.algebra)?;
    // carry multiplet-basis elements into the requested algebra when it is
    // the multiplet algebra itself or the algebra it was built from
    let carry: Option<Carry> = if mspec.algebra == algebra {
        Some(Box::new(|e: &Element| e.clone()))
    } else if ms_built.root == algebra && built.root == algebra {
        let in_root = ms_built.in_root.clone();
        Some(Box::new(move |e: &Element| to_root(e, &in_root)))
    } else {
        None
    };

    let series = lower_central_series(alg);
    let mut levi = Value::Null;
    if let Some(carry) = &carry {
        let [j2, j0, jm2] = ms.sl2.each_ref().map(carry);
        let relations = sl2_relations(alg, &j2, &j0, &jm2);
        let radical: Vec<Element> = ms
            .multiplets
            .iter()
            .flat_map(|m| m.members.iter().map(|(e, _)| carry(e)))
            .collect();
        let ideal = is_ideal(alg, &radical);
        let derived = series.get(1);
        let singlets: Vec<Value> = ms
            .multiplets
            .iter()
            .filter(|m| m.kind == MultipletKind::S && m.grade == 0)
            .flat_map(|m| m.members.iter())
            .map(|(e, _)| {
                json!({
                    "element": ms.algebra.format(e),
                    "in_derived": derived.is_some_and(|d| d.contains(&carry(e))),
                })
            })
            .collect();
        passed &= relations.iter().all(|r| r.1) && ideal;
        levi = json!({
            "sl2": {
                "J2": alg.format(&j2),
                "J0": alg.format(&j0),
                "Jm2": alg.format(&jm2),
                "relations": relations.iter().map(|(r, ok)| json!({ "relation": r, "holds": ok })).collect::<Vec<_>>(),
            },
            "radical_dim": radical.len(),
            "radical_is_ideal": ideal,
            "degree_zero_singlets": singlets,
        });
    }
    let product_dims: Vec<Value> = report
        .product_dims
        .iter()
        .map(|(j, p, d)| json!({ "degrees": [j, p], "dim": d, "allowed": g.allowed().contains(&(j + p)) }))
        .collect();
    Ok(Outcome {
        report: json!({
            "algebra": algebra,
            "dim": alg.dim(),
            "dims": report.dims.iter().map(|(d, n)| json!({ "degree": d, "dim": n })).collect::<Vec<_>>(),
            "violations": report.violations.iter().map(|v| json!({
                "pair": format!("[{},{}]", v.left, v.right),
                "expected_degree": v.expected_degree,
                "offending": v.offending.iter().map(|(n, d)| format!("{n} (degree {d})")).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "product_dims": product_dims,
            "levi": levi,
            "lower_central_series": series.iter().map(|s| s.dim).collect::<Vec<_>>(),
            "passed": passed,
        }),
        passed,
    })
}

fn indices(alg: &LieAlgebra, list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|n| alg.index_of(n).ok_or_else(|| anyhow!("unknown basis element `{n}`")))
        .collect()
}

fn casimir_nc(
    cat: &Catalog,
    algebra: &str,
    max_degree: u32,
    weight: Option<&str>,
    restrict: Option<&str>,
    cap: usize,
) -> Result<Outcome> {
    let alg = cat.algebra(algebra)?;
    let env = Enveloping::new(&alg);
    let filters = SearchFilters {
        weight_zero: weight.map(|w| alg.parse_element(w)).transpose()?,
        letters: restrict.map(|r| indices(&alg, r)).transpose()?,
        max_monomials: cap,
    };
    let start = Instant::now();
    let s = casimir_search(&env, max_degree, &filters)?;
    eprintln!(
        "audit: {} candidate monomials, {} equations, rank {}, {:.2} s",
        s.candidates,
        s.equations,
        s.rank,
        start.elapsed().as_secs_f64()
    );
    Ok(Outcome {
        report: json!({
            "algebra": algebra,
            "max_degree": max_degree,
            "weight_filter": weight,
            "restrict_vars": restrict,
            "candidates": s.candidates,
            "equations": s.equations,
            "rank": s.rank,
            "raw": s.raw.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "reduced": s.reduced.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        passed: true,
    })
}

fn casimir_poisson(
    cat: &Catalog,
    algebra: &str,
    max_degree: u32,
    restrict: Option<&str>,
    cap: usize,
) -> Result<Outcome> {
    let alg = cat.algebra(algebra)?;
    let ps = PoissonStructure::new(&alg);
    let filters = PoissonFilters {
        variables: restrict.map(|r| indices(&alg, r)).transpose()?,
        max_monomials: cap,
    };
    let start = Instant::now();
    let s = ps.casimir_search(max_degree, &filters)?;
    eprintln!(
        "audit: {} candidate monomials, {} equations, rank {}, {:.2} s",
        s.candidates,
        s.equations,
        s.rank,
        start.elapsed().as_secs_f64()
    );
    let coordinates: Vec<Value> = (0..alg.dim())
        .map(|i| json!({ "coordinate": ps.vars().name(i), "element": alg.name(i) }))
        .collect();
    Ok(Outcome {
        report: json!({
            "algebra": algebra,
            "max_degree": max_degree,
            "restrict_vars": restrict,
            "coordinates": coordinates,
            "candidates": s.candidates,
            "equations": s.equations,
            "rank": s.rank,
            "basis": s.basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "reduced": s.reduced.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        passed: true,
    })
}

fn invariant_json(c: &InvariantCheck) -> Value {
    json!({
        "fixture": c.fixture,
        "algebra": c.algebra,
        "mode": serde_json::to_value(c.mode).expect("serializable"),
        "passed": c.all_passed(),
        "passed_count": c.passed_count(),
        "total": c.results.len(),
        "pass_vector": c.pass_vector(),
        "results": c.results.iter().map(|r| json!({
            "name": r.name,
            "passed": r.passed,
            "note": r.note,
            "witnesses": r.witnesses.iter().map(|(what, value)| json!({ "check": what, "value": value })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "relations": c.relations.iter().map(|r| json!({
            "name": r.name,
            "holds": r.holds,
            "residuals": r.residuals,
        })).collect::<Vec<_>>(),
        "opaque": c.opaque.iter().map(|o| json!({ "name": o.name, "text": o.text })).collect::<Vec<_>>(),
    })
}

fn verify_invariants(cat: &Catalog, fixture: Option<&str>) -> Result<Outcome> {
    let names = match fixture {
        Some(f) => vec![f.to_string()],
        None => cat.of_kind(FixtureKind::ExpectedInvariants),
    };
    let mut checks = Vec::new();
    let mut passed = true;
    for n in &names {
        let c = check_invariants(cat, n)?;
        passed &= c.all_passed();
        checks.push(invariant_json(&c));
    }
    Ok(Outcome {
        report: json!({ "passed": passed, "fixtures": checks }),
        passed,
    })
}

fn central_ext(
    cat: &Catalog,
    algebra: Option<&str>,
    pairs: Option<&str>,
    central: &str,
    fixture: Option<&str>,
) -> Result<Outcome> {
    let (base_name, pair_list, central) = match fixture {
        Some(f) => {
            let Payload::VirtualCopyMap(spec) = cat.load(f)?.payload else {
                bail!("`{f}` is not a virtual-copy-map fixture");
            };
            (spec.base, spec.pairs, spec.central)
        }
        None => {
            let algebra = algebra.expect("required by the argument parser");
            let pairs = pairs.expect("required by the argument parser");
            let list = pairs
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|p| {
                    p.split_once(':')
                        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                        .ok_or_else(|| anyhow!("pair `{p}` is not of the form X:Y"))
                })
                .collect::<Result<Vec<_>>>()?;
            (algebra.to_string(), list, central.to_string())
        }
    };
    let base = cat.algebra(&base_name)?.without_realization();
    let ansatz = ExtensionAnsatz::from_names(base, &pair_list, &central)?;
    let sol = solve_central_extension(&ansatz)?;
    Ok(Outcome {
        report: json!({
            "algebra": base_name,
            "central": central,
            "unknowns": ansatz.unknowns.iter().zip(&pair_list).map(|(u, (a, b))| json!({
                "unknown": u,
                "bracket": format!("[{a},{b}]"),
            })).collect::<Vec<_>>(),
            "jacobi_triples": sol.triples,
            "nonzero_constraints": sol.nonzero_rows,
            "rank": sol.rank,
            "dimension": sol.dimension(),
            "free": sol.free.iter().map(|&f| sol.unknowns[f].clone()).collect::<Vec<_>>(),
            "solution": sol.describe(),
        }),
        passed: true,
    })
}

fn virtual_copy(cat: &Catalog, fixture: &str) -> Result<Outcome> {
    let setup = ExtendedSetup::from_catalog(cat, fixture)?;
    let env = setup.enveloping();
    let map = setup.virtual_copy(&env)?;
    let report = verify_virtual_copy(&env, &map, &setup.radical()?)?;
    let expected = setup.expected_casimir(&env)?;
    let vc = casimir_from_virtual_copy(&env, &map, &setup.scale()?, expected.as_ref())?;
    let passed = report.passed() && vc.failures.is_empty();

    let mut realizations = Vec::new();
    for name in cat.of_kind(FixtureKind::ExtensionRealization) {
        let Payload::ExtensionRealization(spec) = cat.load(&name)?.payload else {
            continue;
        };
        if spec.extension != fixture {
            continue;
        }
        let ops = setup.realization_ops(&spec)?;
        let (display, display_error) = match &spec.casimir_display {
            Some(src) => match DiffOp::parse(ops[0].vars(), src) {
                Ok(op) => (Some(op), None),
                Err(e) => (None, Some(e.to_string())),
            },
            None => (None, None),
        };
        let r = verify_extended_realization(&setup.algebra, &ops, &vc.casimir, display.as_ref())?;
        realizations.push(json!({
            "fixture": name,
            "pairs_checked": r.pairs_checked,
            "bracket_mismatches": r.mismatches.iter().map(|m| json!({
                "pair": format!("[{},{}]", m.pair.0, m.pair.1),
                "realized": m.realized.to_string(),
                "expected": m.expected.to_string(),
            })).collect::<Vec<_>>(),
            "realized_casimir": r.realized_casimir.to_string(),
            "display_parse_error": display_error,
            "residual_vs_display": r.casimir_residual.map(|d| d.to_string()),
            "limits": r.limits.iter().map(|l| json!({
                "limit": l.label,
                "value": l.value.as_ref().map(ToString::to_string),
                "note": l.note,
            })).collect::<Vec<_>>(),
        }));
    }

    Ok(Outcome {
        report: json!({
            "fixture": fixture,
            "extension": setup.solution.describe(),
            "symbols": setup.symbols.iter().map(|(u, s)| json!({ "unknown": u, "symbol": s.to_string() })).collect::<Vec<_>>(),
            "radical_commutes": report.radical_passed(),
            "radical_failures": report.radical_failures.iter().map(|(p, c, v)| json!({
                "primed": p, "generator": c, "commutator": v.to_string(),
            })).collect::<Vec<_>>(),
            "sl2": report.sl2.iter().map(|(r, ok, res)| json!({ "relation": r, "holds": ok, "residual": res })).collect::<Vec<_>>(),
            "primed_casimir_central": report.casimir_passed(),
            "scale": setup.spec.scale,
            "casimir": vc.casimir.to_string(),
            "casimir_degree": vc.casimir.degree(),
            "casimir_failures": vc.failures.iter().map(|(g, v)| json!({ "generator": g, "commutator": v.to_string() })).collect::<Vec<_>>(),
            "expected_diff": vc.diff.as_ref().map(|d| json!({
                "matched_terms": d.matched,
                "mismatched_terms": d.mismatched.iter().map(|(m, a, b)| json!({
                    "monomial": m, "computed": a.to_string(), "expected": b.to_string(),
                })).collect::<Vec<_>>(),
            })),
            "realizations": realizations,
            "passed": passed,
        }),
        passed,
    })
}

fn realize_cmd(cat: &Catalog, fixture: &str, expression: &str) -> Result<Outcome> {
    let alg = cat.algebra(fixture)?;
    let r = alg
        .realization()
        .ok_or_else(|| anyhow!("`{fixture}` carries no realization"))?;
    let env = Enveloping::new(&alg);
    let p = env.parse(expression)?;
    let op = realize(&p, r)?;
    Ok(Outcome {
        report: json!({
            "fixture": fixture,
            "expression": p.to_string(),
            "operator": op.to_string(),
            "zero": op.is_zero(),
        }),
        passed: true,
    })
}

fn labels(cat: &Catalog, algebra: &str, grading: &str) -> Result<Outcome> {
    let set_name = cat
        .of_kind(FixtureKind::MultipletSet)
        .into_iter()
        .find(|n| matches!(cat.load(n).map(|f| f.payload), Ok(Payload::MultipletSet(s)) if s.algebra == algebra))
        .ok_or_else(|| anyhow!("no multiplet-set fixture on `{algebra}` provides probes"))?;
    let ms = cat.multiplet_set(&set_name)?;
    let g = cat.grading_on(grading, algebra)?;
    let ctx = LabelContext {
        algebra: &ms.algebra,
        grading: &g,
        probes: ms.probes.clone(),
    };
    let r = label_table(&ctx);
    let passed = r.passed();
    Ok(Outcome {
        report: json!({
            "algebra": algebra,
            "probes": ms.probes.iter().map(|p| ms.algebra.format(p)).collect::<Vec<_>>(),
            "labels": r.labels.iter().map(|(n, l)| json!({
                "element": n,
                "label": l.as_ref().map(ToString::to_string),
            })).collect::<Vec<_>>(),
            "failures": r.failures.iter().map(|f| json!({ "element": f.element, "reason": f.reason })).collect::<Vec<_>>(),
            "additivity_checked": r.additivity_checked,
            "additivity_failures": r.additivity_failures.iter().map(|f| json!({
                "pair": format!("[{},{}]", f.left, f.right),
                "expected": f.expected.as_ref().map(ToString::to_string),
                "bracket_label": f.bracket_label.as_ref().map(ToString::to_string),
                "reason": f.reason,
            })).collect::<Vec<_>>(),
            "passed": passed,
        }),
        passed,
    })
}
