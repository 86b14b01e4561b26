use super::*;
use crate::scalar::int;

fn sl2() -> LieAlgebra {
    // e, h, f with [h,e]=2e, [h,f]=-2f, [e,f]=h
    let e = |i| Element::basis(3, i);
    LieAlgebra::new(
        vec!["E".into(), "H".into(), "F".into()],
        vec![(1, 0, e(0).scale(&int(2))), (1, 2, e(2).scale(&int(-2))), (0, 2, e(1))],
    )
    .unwrap()
}

fn fields(vars: &Arc<VarSet>, ops: &[&str]) -> Vec<crate::weyl::VectorField> {
    ops.iter()
        .map(|s| crate::weyl::VectorField::try_from(DiffOp::parse(vars, s).unwrap()).unwrap())
        .collect()
}

#[test]
fn realization_of_one_translation_is_abelian() {
    let v = VarSet::plain(&["x"]).unwrap();
    let l = from_realization(vec!["P".into()], &fields(&v, &["dx"])).unwrap();
    assert_eq!(l.dim(), 1);
    assert!(l.is_abelian());
}

#[test]
fn realization_not_closed_reports_residual() {
    let v = VarSet::plain(&["x"]).unwrap();
    let err = from_realization(vec!["P".into(), "K".into()], &fields(&v, &["dx", "x^2*dx"])).unwrap_err();
    match err {
        Error::NotClosedRealization { left, right, residual } => {
            assert_eq!((left.as_str(), right.as_str()), ("P", "K"));
            assert_eq!(*residual, DiffOp::parse(&v, "2*x*dx").unwrap());
        }
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn realization_dependent_input() {
    let v = VarSet::plain(&["x"]).unwrap();
    let err = from_realization(vec!["A".into(), "B".into()], &fields(&v, &["dx", "2*dx"])).unwrap_err();
    assert!(matches!(err, Error::LinearlyDependentInput(_)));
}

#[test]
fn sl2_from_vector_fields() {
    let v = VarSet::plain(&["x"]).unwrap();
    let l = from_realization(
        vec!["E".into(), "H".into(), "F".into()],
        &fields(&v, &["dx", "-2*x*dx", "-x^2*dx"]),
    )
    .unwrap();
    assert_eq!(l.format(&l.structure(1, 0)), "2*E");
    assert_eq!(l.format(&l.structure(0, 2)), "H");
    assert!(l.verify_jacobi().is_empty());
    assert!(l.verify_realization().unwrap().is_empty());
    let series = lower_central_series(&l);
    assert_eq!(series.iter().map(|s| s.dim).collect::<Vec<_>>(), [3, 3]);
}

#[test]
fn brackets_and_parsing() {
    let l = sl2();
    let x = l.parse_element("E + 1/2*F").unwrap();
    assert!(l.bracket(&x, &x).is_zero());
    assert_eq!(l.format(&l.bracket(&l.basis(1), &x)), "2*E - F");
    assert!(l.parse_element("E*F").is_err());
    assert!(l.parse_element("G").is_err());
    assert_eq!(l.parse_element("0").unwrap(), Element::zero(3));
}

#[test]
fn jacobi_violation_detected() {
    let e = |i| Element::basis(3, i);
    // [a,b]=a, [b,c]=b, [a,c]=0 fails Jacobi
    let l: LieAlgebra = LieAlgebra::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![(0, 1, e(0)), (1, 2, e(1))],
    )
    .unwrap();
    assert_eq!(l.verify_jacobi().len(), 1);
}

#[test]
fn invalid_tables_rejected() {
    let e = |i| Element::<Rational>::basis(2, i);
    assert!(LieAlgebra::<Rational>::new(vec!["a".into(), "a".into()], Vec::new()).is_err());
    assert!(LieAlgebra::new(vec!["a".into(), "b".into()], vec![(0, 0, e(0))]).is_err());
    assert!(LieAlgebra::new(vec!["a".into(), "b".into()], vec![(0, 1, e(0)), (1, 0, e(1))]).is_err());
    assert!(LieAlgebra::new(vec!["a b".into()], Vec::<(usize, usize, Element)>::new()).is_err());
    assert!(LieAlgebra::new(vec!["Q2(-3)".into()], Vec::<(usize, usize, Element)>::new()).is_ok());
}

#[test]
fn abelian_series_and_grading() {
    let l: LieAlgebra = LieAlgebra::new(vec!["a".into(), "b".into()], Vec::new()).unwrap();
    let s = lower_central_series(&l);
    assert_eq!(s.iter().map(|s| s.dim).collect::<Vec<_>>(), [2, 0]);
    let g = Grading::new(vec![5, -3], [5, -3]).unwrap();
    assert!(verify_grading(&l, &g).unwrap().passed());
}

#[test]
fn eigenvalues_and_ladders() {
    let l = sl2();
    let h = l.basis(1);
    assert_eq!(ad_eigenvalue(&l, &h, &l.basis(0)).unwrap(), int(2));
    assert!(matches!(
        ad_eigenvalue(&l, &h, &l.parse_element("E + F").unwrap()),
        Err(Error::NotEigenvector { .. })
    ));
    // adjoint module as a triplet
    let m = Multiplet::new(
        MultipletKind::T,
        0,
        1,
        vec![(l.basis(0), 2), (l.basis(1), 0), (l.basis(2), -2)],
    )
    .unwrap();
    let lad = ladder_coefficients(&l, &m, &l.basis(0), &l.basis(2)).unwrap();
    assert_eq!(lad[1].raise, int(-2));
    assert_eq!(lad[1].lower, int(2));
    assert_eq!(lad[0].raise, int(0));
    assert!(Multiplet::new(MultipletKind::D, 0, 1, vec![(l.basis(0), 2)]).is_err());
    let rel = sl2_relations(&l, &l.basis(0), &l.basis(1), &l.basis(2));
    assert!(rel.iter().all(|r| r.1));
}

#[test]
fn commuting_sets() {
    let l = sl2();
    assert!(commuting_set_verify(&l, &[l.basis(0)]).commuting);
    let r = commuting_set_verify(&l, &[l.basis(0), l.basis(2)]);
    assert!(!r.commuting);
    assert_eq!(r.witness.unwrap().2, l.basis(1));
}

#[test]
fn basis_change_and_subalgebra() {
    let l = sl2();
    let nb = vec![
        ("X".to_string(), l.parse_element("E + F").unwrap()),
        ("Y".to_string(), l.parse_element("E - F").unwrap()),
        ("Z".to_string(), l.parse_element("H").unwrap()),
    ];
    let m = l.change_of_basis(&nb).unwrap();
    assert!(m.verify_jacobi().is_empty());
    assert_eq!(m.format(&m.structure(0, 1)), "-2*Z");
    let singular = vec![nb[0].clone(), nb[0].clone(), nb[2].clone()];
    assert!(matches!(
        l.change_of_basis(&singular),
        Err(Error::SingularBasisChange(_))
    ));
    assert!(matches!(l.subalgebra(&nb[..2]), Err(Error::NotClosed { .. })));
    let borel = l
        .subalgebra(&[("E".into(), l.basis(0)), ("H".into(), l.basis(1))])
        .unwrap();
    assert_eq!(borel.dim(), 2);
    assert_eq!(l.subalgebra(&[("H".into(), l.basis(1))]).unwrap().dim(), 1);
}

#[test]
fn json_round_trip() {
    let l = sl2();
    let text = l.to_json();
    let back: LieAlgebra = LieAlgebra::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    assert_eq!(back.to_string(), l.to_string());
}

#[test]
fn laurent_coefficients() {
    use crate::scalar::Laurent;
    let e = |i| Element::<Laurent>::basis(3, i);
    let l: LieAlgebra<Laurent> = LieAlgebra::new(
        vec!["p".into(), "q".into(), "Z".into()],
        vec![(0, 1, e(2).scale(&Laurent::parse("m1^-1 + 2*m2").unwrap()))],
    )
    .unwrap()
    .with_parameters(vec!["m1".into(), "m2".into()])
    .with_central_unit(2)
    .unwrap();
    assert_eq!(l.format(&l.structure(0, 1)), "2*m2*Z + m1^-1*Z");
    assert!(l.verify_jacobi().is_empty());
    let text = l.to_json();
    let back: LieAlgebra<Laurent> = LieAlgebra::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    assert_eq!(l.parse_element("m1*p").unwrap(), e(0).scale(&Laurent::symbol("m1")));
}
