use proptest::prelude::*;

use super::*;
use crate::lie::Element;
use crate::scalar::{frac, int};

/// sl(2) in the order (J2, J0, Jm2).
fn sl2() -> LieAlgebra {
    let e = |i| Element::basis(3, i);
    LieAlgebra::new(
        vec!["J2".into(), "J0".into(), "Jm2".into()],
        vec![(1, 0, e(0).scale(&int(2))), (1, 2, e(2).scale(&int(-2))), (0, 2, e(1))],
    )
    .unwrap()
}

/// `[a,b] = b`, `[a,c] = k c`.
fn solvable(k: Rational) -> LieAlgebra {
    let e = |i| Element::basis(3, i);
    LieAlgebra::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![(0, 1, e(1)), (0, 2, e(2).scale(&k))],
    )
    .unwrap()
}

#[test]
fn coordinate_brackets() {
    let l = sl2();
    let s = PoissonStructure::new(&l);
    let v = s.vars().clone();
    let p = |t: &str| Polynomial::parse(&v, t).unwrap();
    assert_eq!(s.bracket(&p("x2"), &p("x1")).unwrap(), p("2*x1"));
    assert_eq!(s.bracket(&p("x1"), &p("x3")).unwrap(), p("x2"));
    let f = p("x1^2*x3 - x2");
    assert!(s.bracket(&f, &f).unwrap().is_zero());
    assert!(s.bracket(&p("x2^2 + 4*x1*x3"), &p("x1")).unwrap().is_zero());
}

#[test]
fn characteristic_fields_match_bracket() {
    let l = sl2();
    let s = PoissonStructure::new(&l);
    let g = Polynomial::parse(s.vars(), "x1*x2^2 - 3*x3 + x1*x3").unwrap();
    for (i, f) in s.characteristic_fields().iter().enumerate() {
        let xi = Polynomial::var(s.vars(), i);
        assert_eq!(f.as_op().apply(&g).unwrap(), s.bracket(&xi, &g).unwrap());
    }
    let ab: LieAlgebra = LieAlgebra::new(vec!["a".into(), "b".into()], Vec::new()).unwrap();
    let s = PoissonStructure::new(&ab);
    assert!(s.characteristic_fields().iter().all(|f| f.as_op().is_zero()));
}

#[test]
fn sl2_search() {
    let l = sl2();
    let s = PoissonStructure::new(&l);
    let r = s.casimir_search(2, &PoissonFilters::default()).unwrap();
    assert_eq!(r.candidates, 10);
    assert_eq!(r.basis.len(), 2);
    let c = Polynomial::parse(s.vars(), "x2^2 + 4*x1*x3").unwrap();
    let mut ech = Echelon::new();
    let cols = |p: &Polynomial| -> SparseVec {
        let mut v: Vec<(usize, Rational)> = p
            .terms()
            .map(|(m, c)| (m.exponents().iter().fold(0usize, |a, &e| a * 8 + e as usize), c.clone()))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    };
    for b in &r.basis {
        ech.insert(&cols(b));
    }
    assert!(ech.contains(&cols(&c)));
    assert_eq!(r.reduced.len(), 1);
    for b in &r.basis {
        for i in 0..3 {
            assert!(s.bracket(&Polynomial::var(s.vars(), i), b).unwrap().is_zero());
        }
    }
    let restricted = s
        .casimir_search(
            2,
            &PoissonFilters {
                variables: Some(vec![0, 2]),
                ..Default::default()
            },
        )
        .unwrap();
    assert_eq!(restricted.candidates, 6);
    assert_eq!(restricted.basis.len(), 1);
}

#[test]
fn abelian_search_returns_coordinates() {
    let ab: LieAlgebra = LieAlgebra::new(vec!["a".into(), "b".into(), "c".into()], Vec::new()).unwrap();
    let s = PoissonStructure::new(&ab);
    let r = s.casimir_search(1, &PoissonFilters::default()).unwrap();
    assert_eq!((r.candidates, r.basis.len(), r.equations), (4, 4, 0));
    assert_eq!(r.reduced.len(), 3);
    let capped = PoissonFilters {
        max_monomials: 3,
        ..Default::default()
    };
    assert!(matches!(
        s.casimir_search(1, &capped),
        Err(Error::TooManyMonomials { .. })
    ));
}

#[test]
fn rational_power_invariants() {
    let l = solvable(frac(1, 3));
    let s = PoissonStructure::new(&l);
    let good = RationalPowerCandidate::parse(s.vars(), "x3", "x2", "-1/3").unwrap();
    let r = s.verify_rational_invariant(&good).unwrap();
    assert!(r.passed());
    assert_eq!(r.checks, 3);
    let bad = RationalPowerCandidate::parse(s.vars(), "x3", "x2", "-1/2").unwrap();
    let r = s.verify_rational_invariant(&bad).unwrap();
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].0, 0);
    assert!(RationalPowerCandidate::parse(s.vars(), "x3", "y", "1").is_err());
    let zero = RationalPowerCandidate {
        numerator: Polynomial::zero(s.vars()),
        base: 1,
        exponent: int(1),
    };
    assert!(matches!(
        s.verify_rational_invariant(&zero),
        Err(Error::MalformedCandidate(_))
    ));
}

#[test]
fn relations_are_cleared() {
    let v = VarSet::numbered("x", 3);
    let k = RationalPowerCandidate::parse(&v, "x3", "x2", "-1/3").unwrap();
    let h = RationalPowerCandidate::parse(&v, "x1*x3^2", "x2", "-2/3").unwrap();
    let cands = vec![("K".to_string(), k), ("H".to_string(), h)];
    let polys = vec![("P".to_string(), Polynomial::parse(&v, "x3^3").unwrap())];
    let rels = vec![
        ("cube".to_string(), "P".to_string(), "K^3*x2".to_string()),
        ("wrong".to_string(), "P".to_string(), "K^3".to_string()),
        (
            "mixed".to_string(),
            "x1*P + 2*H*K*x2".to_string(),
            "3*x1*K^3*x2".to_string(),
        ),
        ("mixed classes".to_string(), "K + H".to_string(), "H".to_string()),
        ("inverse".to_string(), "K*x2^(1/3)".to_string(), "x3".to_string()),
    ];
    let out = verify_functional_relations(&v, &cands, &polys, &rels);
    assert!(out.is_err(), "fractional exponents are not in the grammar");
    let rels = rels[..4].to_vec();
    let out = verify_functional_relations(&v, &cands, &polys, &rels).unwrap();
    let holds: Vec<bool> = out.iter().map(|r| r.holds).collect();
    assert_eq!(holds, [true, false, true, false]);
    assert_eq!(out[1].residuals.len(), 1);
}

fn arb(max_deg: i32) -> impl Strategy<Value = Polynomial> {
    crate::poly::tests::arb_poly(VarSet::numbered("x", 3), max_deg, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz(f in arb(2), g in arb(2), h in arb(2)) {
        let l = sl2();
        let s = PoissonStructure::new(&l);
        let lhs = s.bracket(&f, &g.try_mul(&h).unwrap()).unwrap();
        let rhs = s.bracket(&f, &g).unwrap().try_mul(&h).unwrap()
            .try_add(&g.try_mul(&s.bracket(&f, &h).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi(f in arb(2), g in arb(2), h in arb(2)) {
        let l = solvable(frac(2, 5));
        let s = PoissonStructure::new(&l);
        let b = |a: &Polynomial, c: &Polynomial| s.bracket(a, c).unwrap();
        let sum = b(&f, &b(&g, &h)).try_add(&b(&g, &b(&h, &f))).unwrap().try_add(&b(&h, &b(&f, &g))).unwrap();
        prop_assert!(sum.is_zero());
    }
}
