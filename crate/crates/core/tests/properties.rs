use std::sync::Arc;

use proptest::prelude::*;
use supermod_core::algebroid::AlgebroidMorphism;
use supermod_core::courant::Hamiltonian;
use supermod_core::dirac::gauge_transform;
use supermod_core::random;
use supermod_core::superalg::{Generator, GeneratorTable};
use supermod_core::{BaseChart, ScalarField, SkewAlgebroid, SuperPoly};

fn table(m: usize) -> Arc<GeneratorTable> {
    let odd = (1..=3).map(|i| Generator::new(format!("t{i}"), (0, 1))).collect();
    let even = vec![Generator::new("u1", (1, 1))];
    GeneratorTable::new(BaseChart::standard(m), odd, even).unwrap()
}

fn sign(a: u8, b: u8) -> i64 {
    if a & b & 1 == 1 {
        -1
    } else {
        1
    }
}

fn signed(p: &SuperPoly, s: i64) -> SuperPoly {
    if s < 0 {
        p.neg()
    } else {
        p.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(seed in any::<u64>(), m in 1usize..=3) {
        let mut r = random::rng(seed);
        let a = random::scalar(&mut r, m, 2);
        let b = random::nonzero_scalar(&mut r, m, 2);
        let c = random::scalar(&mut r, m, 2);
        let q = a.div(&b).unwrap();
        prop_assert_eq!(a.add(&q), q.add(&a));
        prop_assert_eq!(a.mul(&q).mul(&c), a.mul(&q.mul(&c)));
        prop_assert_eq!(q.mul(&a.add(&c)), q.mul(&a).add(&q.mul(&c)));
        prop_assert_eq!(q.mul(&b), a.clone());
        prop_assert!(q.sub(&q).is_zero());
        let chart = BaseChart::standard(m);
        prop_assert_eq!(chart.parse(&q.display(&chart)).unwrap(), q.clone());
        // mixed partials commute, also on fractions
        let m2 = m.min(2);
        prop_assert_eq!(q.partial(0).unwrap().partial(m2 - 1).unwrap(), q.partial(m2 - 1).unwrap().partial(0).unwrap());
    }

    #[test]
    fn supercommutative_and_odd_partials(seed in any::<u64>(), pa in 0u8..2, pb in 0u8..2) {
        let t = table(2);
        let mut r = random::rng(seed);
        let a = random::super_poly(&mut r, &t, pa);
        let b = random::super_poly(&mut r, &t, pb);
        prop_assert_eq!(a.mul(&b), signed(&b.mul(&a), sign(pa, pb)));
        let f = a.mul(&b);
        prop_assert_eq!(f.left_partial_odd(0).left_partial_odd(1), f.left_partial_odd(1).left_partial_odd(0).neg());
        // left odd partial is an odd derivation
        let lhs = f.left_partial_odd(2);
        let rhs = a.left_partial_odd(2).mul(&b).add(&signed(&a.mul(&b.left_partial_odd(2)), sign(pa, 1)));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(SuperPoly::parse(&f.to_string(), &t).unwrap(), f);
    }

    #[test]
    fn divergence_of_commutator(seed in any::<u64>(), px in 0u8..2, py in 0u8..2) {
        let t = table(2);
        let mut r = random::rng(seed);
        let x = random::vector_field(&mut r, &t, px);
        let y = random::vector_field(&mut r, &t, py);
        let c = x.commutator(&y).unwrap();
        let rhs = x.apply(&y.divergence()).sub(&signed(&y.apply(&x.divergence()), sign(px, py)));
        prop_assert_eq!(c.divergence(), rhs);
    }

    #[test]
    fn vector_fields_are_derivations(seed in any::<u64>(), px in 0u8..2, pf in 0u8..2) {
        let t = table(2);
        let mut r = random::rng(seed);
        let x = random::vector_field(&mut r, &t, px);
        let f = random::super_poly(&mut r, &t, pf);
        let g = random::super_poly(&mut r, &t, 0);
        let lhs = x.apply(&f.mul(&g));
        let rhs = x.apply(&f).mul(&g).add(&signed(&f.mul(&x.apply(&g)), sign(px, pf)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn de_rham_differential_squares_to_zero(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let mut r = random::rng(seed);
        let a = random::lie_algebroid(&mut r, &BaseChart::standard(m), n);
        prop_assert!(a.is_lie().holds());
        for k in 0..=n.min(2) {
            let w = random::form(&mut r, &a, k, 2);
            prop_assert!(a.d(&a.d(&w).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn schouten_is_graded_antisymmetric(seed in any::<u64>(), ku in 1usize..=2, kv in 1usize..=2) {
        let mut r = random::rng(seed);
        let a = random::lie_algebroid(&mut r, &BaseChart::standard(2), 3);
        let mv = |r: &mut _, k: usize| {
            let dual = SkewAlgebroid::new(a.chart(), 3).unwrap();
            let w = random::form(r, &dual, k, 1);
            w.substitute(a.multivector_table(), &(0..3).map(|i| a.xi(i)).collect::<Vec<_>>(), &[])
        };
        let u = mv(&mut r, ku);
        let v = mv(&mut r, kv);
        let s = sign(((ku + 1) % 2) as u8, ((kv + 1) % 2) as u8);
        prop_assert_eq!(a.schouten(&u, &v).unwrap(), signed(&a.schouten(&v, &u).unwrap(), -s));
    }

    #[test]
    fn pullback_is_an_algebra_morphism(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let chart = BaseChart::standard(2);
        let src = random::skew_algebroid(&mut r, &chart, 2, 1);
        let dst = random::skew_algebroid(&mut r, &chart, 3, 1);
        let mat = (0..2).map(|_| (0..3).map(|_| random::scalar(&mut r, 2, 1)).collect()).collect();
        let phi = AlgebroidMorphism::new(src, dst.clone(), mat).unwrap();
        let a = random::form(&mut r, &dst, 1, 1);
        let b = random::form(&mut r, &dst, 2, 1);
        prop_assert_eq!(phi.pullback(&a.mul(&b)).unwrap(), phi.pullback(&a).unwrap().mul(&phi.pullback(&b).unwrap()));
    }

    #[test]
    fn poisson_bracket_axioms(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random::lie_algebroid(&mut r, &BaseChart::standard(2), 2);
        let h = Hamiltonian::from_algebroid(&a, None).unwrap();
        let s = h.space();
        let t = s.table();
        let f = random::super_poly(&mut r, t, 0);
        let g = random::super_poly(&mut r, t, 1);
        let k = random::super_poly(&mut r, t, 1);
        let (pf, pg) = (0u8, 1u8);
        prop_assert_eq!(s.poisson(&f, &g).unwrap(), signed(&s.poisson(&g, &f).unwrap(), -sign(pf, pg)));
        prop_assert_eq!(s.poisson(&g, &k).unwrap(), s.poisson(&k, &g).unwrap());
        let lhs = s.poisson(&g, &s.poisson(&k, &f).unwrap()).unwrap();
        let rhs = s
            .poisson(&s.poisson(&g, &k).unwrap(), &f)
            .unwrap()
            .add(&signed(&s.poisson(&k, &s.poisson(&g, &f).unwrap()).unwrap(), sign(pg, 1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauge_transform_is_multiplicative(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random::lie_algebroid(&mut r, &BaseChart::standard(2), 3);
        let h = Hamiltonian::from_algebroid(&a, None).unwrap();
        let t = h.space().table();
        let p = random::bivector(&mut r, h.space(), 2);
        let f = random::super_poly(&mut r, t, 1);
        let g = random::super_poly(&mut r, t, 0);
        let lhs = gauge_transform(&f.mul(&g), &p).unwrap();
        let rhs = gauge_transform(&f, &p).unwrap().mul(&gauge_transform(&g, &p).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn constant_scalars_stay_constant() {
    let q = ScalarField::from_int(2, 3).div(&ScalarField::from_int(2, 6)).unwrap();
    assert_eq!(q.display(&BaseChart::standard(2)), "1/2");
}
