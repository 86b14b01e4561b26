use super::*;
use crate::poly::VarSet;
use crate::scalar::int;

/// sl(2) acting on a doublet, order (J2, J0, Jm2, D1, Dm1).
fn base() -> LieAlgebra {
    let e = |i| Element::basis(5, i);
    LieAlgebra::new(
        ["J2", "J0", "Jm2", "D1", "Dm1"].map(String::from).to_vec(),
        vec![
            (1, 0, e(0).scale(&int(2))),
            (1, 2, e(2).scale(&int(-2))),
            (0, 2, e(1)),
            (1, 3, e(3)),
            (1, 4, e(4).neg()),
            (0, 4, e(3)),
            (2, 3, e(4)),
        ],
    )
    .unwrap()
}

fn extended() -> LieAlgebra<Laurent> {
    let a = ExtensionAnsatz::from_names(base(), &[("D1".into(), "Dm1".into())], "Z").unwrap();
    let sol = solve_central_extension(&a).unwrap();
    extended_algebra(&a, &sol, &[(0, "m".into())]).unwrap()
}

#[test]
fn heisenberg_from_abelian() {
    let ab: LieAlgebra = LieAlgebra::new(["p", "q", "r"].map(String::from).to_vec(), Vec::new()).unwrap();
    let a = ExtensionAnsatz::from_names(ab, &[("p".into(), "q".into())], "Z").unwrap();
    let sol = solve_central_extension(&a).unwrap();
    assert_eq!(sol.dimension(), 1);
    assert_eq!(sol.triples, 1);
    assert_eq!(sol.nonzero_rows, 0);
    assert_eq!(sol.describe(), ["a1 free"]);
    let ext = extended_algebra(&a, &sol, &[(0, "h".into())]).unwrap();
    assert_eq!(ext.to_string(), "[p,q]=h*Z\n");
    assert_eq!(ext.central_unit(), Some(3));
}

#[test]
fn constraints_fix_coefficients() {
    // [J0,D1]=D1 forces a cocycle on (J0, Dm1)-type pairs to vanish
    let a = ExtensionAnsatz::from_names(
        base(),
        &[
            ("D1".into(), "Dm1".into()),
            ("J2".into(), "D1".into()),
            ("J0".into(), "D1".into()),
        ],
        "Z",
    )
    .unwrap();
    let sol = solve_central_extension(&a).unwrap();
    assert_eq!(sol.triples, 10);
    assert_eq!(sol.free, [0]);
    assert_eq!(sol.describe(), ["a1 free", "a2 = 0", "a3 = 0"]);
    assert!(sol.nonzero_entries >= sol.nonzero_rows);
}

#[test]
fn ansatz_validation() {
    let b = base();
    assert!(ExtensionAnsatz::new(b.clone(), vec![(3, 3)], vec!["a".into()], "Z".into()).is_err());
    assert!(ExtensionAnsatz::new(b.clone(), vec![(4, 3)], vec!["a".into()], "Z".into()).is_err());
    assert!(ExtensionAnsatz::new(
        b.clone(),
        vec![(3, 4), (3, 4)],
        vec!["a".into(), "b".into()],
        "Z".into()
    )
    .is_err());
    assert!(ExtensionAnsatz::new(b, vec![(3, 4)], vec!["a".into()], "J0".into()).is_err());
}

#[test]
fn extended_algebra_is_jacobi_valid() {
    let l = extended();
    assert!(l.verify_jacobi().is_empty());
    assert_eq!(l.format(&l.structure(3, 4)), "m*Z");
}

fn primed(env: &Enveloping<'_, Laurent>) -> VirtualCopy {
    VirtualCopy::parse(
        env,
        "J2 - 1/2*m^-1*D1^2",
        "J0 + m^-1*D1*Dm1 - 1/2",
        "Jm2 + 1/2*m^-1*Dm1^2",
    )
    .unwrap()
}

#[test]
fn virtual_copy_checks() {
    let l = extended();
    let u = Enveloping::new(&l);
    let map = primed(&u);
    let r = verify_virtual_copy(&u, &map, &[3, 4]).unwrap();
    assert!(r.passed(), "{:?}", r.sl2);

    let id = VirtualCopy::identity(&u, [0, 1, 2]);
    let r = verify_virtual_copy(&u, &id, &[3, 4]).unwrap();
    assert!(!r.radical_passed());
    assert!(r.sl2_passed());

    let zero = VirtualCopy {
        j2: u.zero(),
        j0: u.zero(),
        jm2: u.zero(),
    };
    let r = verify_virtual_copy(&u, &zero, &[3, 4]).unwrap();
    assert!(!r.sl2_passed());
}

#[test]
fn casimir_from_copy_is_central() {
    let l = extended();
    let u = Enveloping::new(&l);
    let map = primed(&u);
    let scale = Laurent::symbol("m");
    let expected = u.parse("J0^2").unwrap();
    let c = casimir_from_virtual_copy(&u, &map, &scale, Some(&expected)).unwrap();
    assert!(c.failures.is_empty());
    let d = c.diff.unwrap();
    assert!(!d.mismatched.is_empty());
    let same = term_diff(&c.casimir, &c.casimir);
    assert!(same.mismatched.is_empty());
    assert_eq!(same.matched, c.casimir.len());
}

#[test]
fn schroedinger_realization() {
    let l = extended();
    let u = Enveloping::new(&l);
    let v = VarSet::new(&["x", "m"], &["m"]).unwrap();
    let ops: Vec<DiffOp> = ["1/2*m^-1*dx^2", "-x*dx - 1/2", "-1/2*m*x^2", "dx", "m*x", "1"]
        .iter()
        .map(|s| DiffOp::parse(&v, s).unwrap())
        .collect();
    let k = primed(&u).casimir(&u).unwrap();
    let r = verify_extended_realization(&l, &ops, &k, None).unwrap();
    assert_eq!(r.pairs_checked, 15);
    assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    // each primed generator realizes to zero here, so K' does too
    assert!(r.realized_casimir.is_zero());
    assert_eq!(r.limits.len(), 1);
    assert_eq!(r.limits[0].note, "vanishes identically");
    let j0 = u.parse("J0").unwrap();
    let r = verify_extended_realization(&l, &ops, &j0, Some(&DiffOp::parse(&v, "-x*dx").unwrap())).unwrap();
    assert_eq!(r.casimir_residual.unwrap(), DiffOp::parse(&v, "-1/2").unwrap());
    assert_eq!(r.limits[0].note, "nonzero");
    let inv = u.parse("m^-1*D1").unwrap();
    let r = verify_extended_realization(&l, &ops, &inv, None).unwrap();
    assert!(r.limits[0].value.is_none());

    let mut bad = ops.clone();
    bad[4] = DiffOp::parse(&v, "2*m*x").unwrap();
    let r = verify_extended_realization(&l, &bad, &k, None).unwrap();
    assert!(!r.mismatches.is_empty());
}

#[test]
fn guarded_specialization() {
    let l = extended();
    let u = Enveloping::new(&l);
    let p = u.parse("m^-1*D1 + m*Dm1").unwrap();
    assert!(specialize(&p, "m", &Rational::zero()).is_err());
    let q = u.parse("m^2*D1 + 3*Dm1").unwrap();
    assert_eq!(
        specialize(&q, "m", &Rational::zero()).unwrap(),
        u.parse("3*Dm1").unwrap()
    );
}
