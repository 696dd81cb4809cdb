use super::*;
use crate::scalar::BaseChart;

fn sl2(m: usize) -> SkewAlgebroid {
    let chart = BaseChart::standard(m);
    let mut a = SkewAlgebroid::new(&chart, 3).unwrap();
    a.set_c(0, 1, 1, ScalarField::from_int(m, 2)).unwrap();
    a.set_c(0, 2, 2, ScalarField::from_int(m, -2)).unwrap();
    a.set_c(1, 2, 0, ScalarField::one(m)).unwrap();
    a
}

fn sp(s: &SymplecticSpace2, text: &str) -> SuperPoly {
    SuperPoly::parse(text, s.table()).unwrap()
}

#[test]
fn bracket_on_generators() {
    let s = SymplecticSpace2::split(&BaseChart::standard(2), 2).unwrap();
    assert_eq!(s.poisson(&s.x(0), &s.p(0)).unwrap(), SuperPoly::one(s.table()));
    assert_eq!(s.poisson(&s.p(0), &s.x(0)).unwrap(), SuperPoly::from_int(s.table(), -1));
    assert!(s.poisson(&s.x(0), &s.p(1)).unwrap().is_zero());
    for i in 0..2 {
        for j in 0..2 {
            let v = s.poisson(&s.y(i), &s.xi(j)).unwrap();
            assert_eq!(v, SuperPoly::from_int(s.table(), (i == j) as i64));
            assert_eq!(s.poisson(&s.xi(j), &s.y(i)).unwrap(), v);
        }
    }
    assert!(s.poisson(&sp(&s, "x1^2"), &sp(&s, "x2 + x1")).unwrap().is_zero());
    assert!(s.poisson(&s.y(0), &s.y(1)).unwrap().is_zero());
}

#[test]
fn general_pairing() {
    // one odd generator with g = (2): {zeta, zeta} = 1/2
    let chart = BaseChart::standard(1);
    let s = SymplecticSpace2::new(&chart, &["z"], vec![vec![BigRational::from_integer(2.into())]]).unwrap();
    assert_eq!(
        s.poisson(&s.zeta(0), &s.zeta(0)).unwrap(),
        SuperPoly::scalar(s.table(), ScalarField::constant(1, BigRational::new(1.into(), 2.into())))
    );
    assert!(SymplecticSpace2::new(&chart, &["z"], vec![vec![BigRational::zero()]]).is_err());
}

#[test]
fn sign_pin_on_sl2() {
    let a = sl2(2);
    let h = Hamiltonian::from_algebroid(&a, None).unwrap();
    let s = h.space();
    assert!(h.square().is_zero());
    assert_eq!(h.derived_bracket(&s.xi(1), &s.xi(2)).unwrap(), s.xi(0));
    assert_eq!(h.derived_bracket(&s.xi(0), &s.xi(1)).unwrap(), s.xi(1).scale(&ScalarField::from_int(2, 2)));
    let tm = SkewAlgebroid::tangent(&BaseChart::standard(2)).unwrap();
    let h = Hamiltonian::from_algebroid(&tm, None).unwrap();
    let s = h.space();
    assert_eq!(h.anchor_apply(&s.xi(1), &s.x(1)).unwrap(), SuperPoly::one(s.table()));
    assert!(h.anchor_apply(&s.xi(1), &s.x(0)).unwrap().is_zero());
    assert!(h.anchor_apply(&s.y(1), &sp(s, "x1^2*x2")).unwrap().is_zero());
    assert!(h.anchor_apply(&s.xi(0), &sp(s, "7")).unwrap().is_zero());
    assert!(h.derived_bracket(&s.xi(0), &s.xi(0)).unwrap().is_zero());
}

#[test]
fn twisted_standard_courant() {
    let r3 = SkewAlgebroid::tangent(&BaseChart::standard(3)).unwrap();
    let phi = SuperPoly::parse("y1*y2*y3", r3.forms_table()).unwrap();
    assert!(Hamiltonian::from_algebroid(&r3, Some(&phi)).unwrap().square().is_zero());
    let r4 = SkewAlgebroid::tangent(&BaseChart::standard(4)).unwrap();
    let closed = SuperPoly::parse("y1*y2*y3 + x1*y1*y2*y4", r4.forms_table()).unwrap();
    assert!(Hamiltonian::from_algebroid(&r4, Some(&closed)).unwrap().square().is_zero());
    let open = SuperPoly::parse("x4*y1*y2*y3", r4.forms_table()).unwrap();
    let sq = Hamiltonian::from_algebroid(&r4, Some(&open)).unwrap().square();
    assert!(!sq.is_zero());
}

#[test]
fn dorfman_matches_classical_formula() {
    let chart = BaseChart::standard(2);
    let tm = SkewAlgebroid::tangent(&chart).unwrap();
    let h = Hamiltonian::from_algebroid(&tm, None).unwrap();
    let s = h.space();
    let f = |t: &str| chart.parse(t).unwrap();
    let cases = [
        (["x2", "0"], ["0", "x1"], ["x1*x2", "1"], ["0", "x2^2"]),
        (["1", "x1^2"], ["x2", "0"], ["0", "x1"], ["x1", "x2"]),
        (["0", "0"], ["x1*x2", "0"], ["x2^3", "0"], ["0", "x1"]),
    ];
    for (xv, av, yv, bv) in cases {
        let xv: Vec<_> = xv.iter().map(|t| f(t)).collect();
        let av: Vec<_> = av.iter().map(|t| f(t)).collect();
        let yv: Vec<_> = yv.iter().map(|t| f(t)).collect();
        let bv: Vec<_> = bv.iter().map(|t| f(t)).collect();
        let lhs = h
            .derived_bracket(&s.section(&xv, &av).unwrap(), &s.section(&yv, &bv).unwrap())
            .unwrap();
        let vec_part = tm.bracket_sections(&xv, &yv).unwrap();
        let alpha = tm.one_form(&av).unwrap();
        let beta = tm.one_form(&bv).unwrap();
        let form = tm
            .lie_derivative_form(&xv, &beta)
            .unwrap()
            .sub(&tm.interior_product(&yv, &tm.d(&alpha).unwrap()).unwrap());
        let rhs = s.section(&vec_part, &tm.form_coefficients(&form).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn parts_and_projection() {
    let a = sl2(1);
    let h = Hamiltonian::from_algebroid(&a, None).unwrap();
    let s = h.space().clone();
    let parts = h.split_parts().unwrap();
    assert_eq!(parts.mu, *h.value());
    assert!(parts.gamma.is_zero() && parts.phi.is_zero() && parts.psi.is_zero());
    assert_eq!(parts.mu.bidegree(), Some((1, 2)));
    assert!(h.is_projectable().unwrap());
    let proj = h.project_to_e().unwrap();
    assert!(proj.homological);
    assert_eq!(proj.field, a.de_rham_field());
    assert_eq!(h.algebroid_on_e().unwrap(), a);

    let phi = SuperPoly::parse("x1*y1*y2*y3", a.forms_table()).unwrap();
    let ht = Hamiltonian::from_algebroid(&a, Some(&phi)).unwrap();
    assert!(ht.is_projectable().unwrap());
    assert_eq!(ht.project_to_e().unwrap().field, a.de_rham_field());
    assert_eq!(ht.split_parts().unwrap().phi.bidegree(), Some((0, 3)));

    let cubic = Hamiltonian::new(&s, sp(&s, "xi1*xi2*xi3")).unwrap();
    assert!(!cubic.is_projectable().unwrap());
    assert_eq!(cubic.split_parts().unwrap().psi, *cubic.value());
    let xp = Hamiltonian::new(&s, h.value().add(&sp(&s, "x1*xi1*p1"))).unwrap();
    assert!(!xp.is_projectable().unwrap());
    assert!(matches!(xp.project_to_e(), Err(Error::NotProjectable)));
    let zero = Hamiltonian::new(&s, SuperPoly::zero(s.table())).unwrap();
    assert!(zero.project_to_e().unwrap().field.is_zero());
    assert!(Hamiltonian::new(&s, sp(&s, "y1*xi1")).is_err());
}
