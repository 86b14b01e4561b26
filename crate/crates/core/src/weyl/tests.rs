use super::*;
use crate::poly::tests::arb_poly;
use proptest::prelude::*;

fn vs6() -> Arc<VarSet> {
    VarSet::numbered("x", 6)
}

fn op(vars: &Arc<VarSet>, s: &str) -> DiffOp {
    DiffOp::parse(vars, s).unwrap()
}

fn poly(vars: &Arc<VarSet>, s: &str) -> Polynomial {
    Polynomial::parse(vars, s).unwrap()
}

#[test]
fn apply_examples() {
    let v = vs6();
    assert_eq!(op(&v, "x1*dx6").apply(&poly(&v, "x6^2")).unwrap(), poly(&v, "2*x1*x6"));
    assert!(op(&v, "dx1").apply(&poly(&v, "5/3")).unwrap().is_zero());
    let l13 = op(&v, "x1*dx1 + 2*x3*dx3 + x4*dx4");
    assert_eq!(l13.apply(&poly(&v, "x3")).unwrap(), poly(&v, "2*x3"));
}

#[test]
fn compose_examples() {
    let x = VarSet::plain(&["x"]).unwrap();
    assert_eq!(op(&x, "dx").compose(&op(&x, "x")).unwrap(), op(&x, "x*dx + 1"));
    let v = vs6();
    assert_eq!(
        op(&v, "dx1").compose(&op(&v, "x1^2*dx6")).unwrap(),
        op(&v, "x1^2*dx1*dx6 + 2*x1*dx6")
    );
    assert_eq!(op(&v, "x1*dx6").compose(&op(&v, "dx1")).unwrap(), op(&v, "x1*dx1*dx6"));
}

/// Composition checked against applying the factors in turn on every
/// monomial of degree at most four in two variables.
#[test]
fn compose_matches_apply_on_monomials() {
    let v = VarSet::numbered("x", 2);
    let ops = ["dx1", "x1^2*dx2", "x2*dx1^2 + x1", "3*dx1*dx2 - x2^2*dx2"];
    for a in ops {
        for b in ops {
            let (d, e) = (op(&v, a), op(&v, b));
            let de = d.compose(&e).unwrap();
            for i in 0..=4 {
                for j in 0..=4 - i {
                    let f = Polynomial::from_terms(&v, [(Monomial::from_exponents([i, j]), Rational::one())]).unwrap();
                    assert_eq!(de.apply(&f).unwrap(), d.apply(&e.apply(&f).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn commutator_examples() {
    let v = vs6();
    let a1 = op(&v, "dx1");
    let b1 = op(&v, "x1^2*dx6");
    assert_eq!(a1.commutator(&b1).unwrap(), op(&v, "2*x1*dx6"));
    assert!(a1.commutator(&op(&v, "dx2")).unwrap().is_zero());
}

#[test]
fn order_and_vector_fields() {
    let v = vs6();
    assert_eq!(DiffOp::zero(&v).order(), None);
    assert_eq!(op(&v, "x1^2").order(), Some(0));
    assert_eq!(op(&v, "dx1*dx2 + dx3").order(), Some(2));
    assert!(VectorField::try_from(op(&v, "x1*dx1 + 1")).is_err());
    assert!(VectorField::try_from(op(&v, "dx1^2")).is_err());
    let f = VectorField::try_from(op(&v, "x2*dx1 - x1*dx2")).unwrap();
    assert_eq!(f.component(1), poly(&v, "-x1"));
}

#[test]
fn text_round_trip() {
    let v = VarSet::new(&["t", "x1", "m1"], &["m1"]).unwrap();
    for s in ["dt", "x1*dt^2 - 1/3*x1*m1", "t*m1^-1*dt*dx1 - 2*dx1", "0", "5/2"] {
        let d = op(&v, s);
        assert_eq!(d.to_string(), s);
    }
    assert_eq!(op(&v, "-1/3*m1*x1 + x1*dt^2").to_string(), "x1*dt^2 - 1/3*x1*m1");
    assert!(DiffOp::parse(&v, "dm1").is_err());
    assert!(DiffOp::parse(&v, "dq").is_err());
    // operator products normal order themselves
    assert_eq!(op(&v, "dt*t").to_string(), "t*dt + 1");
}

fn arb_op(order: i32) -> impl Strategy<Value = DiffOp> {
    let v = VarSet::numbered("x", 3);
    let vv = v.clone();
    prop::collection::vec((prop::collection::vec(0..=order, 3), arb_poly(v, 2, 3)), 0..=3).prop_map(move |terms| {
        let mut d = DiffOp::zero(&vv);
        for (alpha, c) in terms {
            if alpha.iter().sum::<i32>() <= order {
                d = d
                    .try_add(&DiffOp::term(c, Monomial::from_exponents(alpha)).unwrap())
                    .unwrap();
            }
        }
        d
    })
}

fn arb_field() -> impl Strategy<Value = VectorField> {
    let v = VarSet::numbered("x", 3);
    prop::collection::vec(arb_poly(v.clone(), 2, 2), 3)
        .prop_map(move |cs| VectorField::from_components(&v, &cs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn apply_compose_consistency(d in arb_op(2), e in arb_op(2), f in arb_poly(VarSet::numbered("x", 3), 4, 4)) {
        let lhs = d.compose(&e).unwrap().apply(&f).unwrap();
        let rhs = d.apply(&e.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_antisymmetry_and_jacobi(a in arb_op(1), b in arb_op(1), c in arb_op(1)) {
        let ab = a.commutator(&b).unwrap();
        prop_assert!(ab.try_add(&b.commutator(&a).unwrap()).unwrap().is_zero());
        let j = ab.commutator(&c).unwrap()
            .try_add(&b.commutator(&c).unwrap().commutator(&a).unwrap()).unwrap()
            .try_add(&c.commutator(&a).unwrap().commutator(&b).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn vector_fields_close(x in arb_field(), y in arb_field()) {
        prop_assert!(x.bracket(&y).is_ok());
    }
}
