//! Seeded random instances for property checks and benchmarks.
//!
//! Every generator is deterministic given the RNG state. Sizes stay at
//! desk scale: rank and base dimension at most 4, coefficient degree at
//! most 3.

use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::SkewAlgebroid;
use crate::courant::{Hamiltonian, SymplecticSpace2};
use crate::dirac::{Bivector, DiracFrame};
use crate::scalar::{BaseChart, Monomial, Poly, ScalarField};
use crate::superalg::{GeneratorTable, Key, SuperPoly, SuperVectorField};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let mut n: i64 = rng.gen_range(-3..=3);
    if n == 0 {
        n = 1;
    }
    BigRational::new(n.into(), rng.gen_range(1i64..=2).into())
}

/// A polynomial with up to `max_terms` terms of total degree `<= max_deg`.
pub fn poly<R: Rng>(rng: &mut R, m: usize, max_deg: u32, max_terms: usize) -> Poly {
    let k = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<(Monomial, BigRational)> = (0..k)
        .map(|_| {
            let deg = rng.gen_range(0..=max_deg);
            let mut e = vec![0u32; m];
            if m > 0 {
                for _ in 0..deg {
                    e[rng.gen_range(0..m)] += 1;
                }
            }
            (Monomial::from_exponents(e), small_rational(rng))
        })
        .collect();
    Poly::from_terms(m, terms)
}

pub fn scalar<R: Rng>(rng: &mut R, m: usize, max_deg: u32) -> ScalarField {
    ScalarField::from_poly(poly(rng, m, max_deg, 3))
}

/// A scalar that is zero with probability `p_zero`.
pub fn sparse_scalar<R: Rng>(rng: &mut R, m: usize, max_deg: u32, p_zero: f64) -> ScalarField {
    if rng.gen_bool(p_zero) {
        ScalarField::zero(m)
    } else {
        scalar(rng, m, max_deg)
    }
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R, m: usize, max_deg: u32) -> ScalarField {
    loop {
        let s = scalar(rng, m, max_deg);
        if !s.is_zero() {
            return s;
        }
    }
}

/// `1 + (strictly upper triangular)` with entries of degree `<= 1`.
fn unipotent<R: Rng>(rng: &mut R, m: usize, n: usize) -> Vec<Vec<ScalarField>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => ScalarField::one(m),
                    std::cmp::Ordering::Less => sparse_scalar(rng, m, 1, 0.5),
                    std::cmp::Ordering::Greater => ScalarField::zero(m),
                })
                .collect()
        })
        .collect()
}

/// Random invertible constant matrix (a shuffled unipotent one).
fn constant_basis<R: Rng>(rng: &mut R, m: usize, n: usize) -> Vec<Vec<ScalarField>> {
    let mut a = unipotent(rng, 0, n);
    a.shuffle(rng);
    a.iter()
        .map(|r| {
            r.iter()
                .map(|v| ScalarField::constant(m, v.as_constant().expect("constant")))
                .collect()
        })
        .collect()
}

/// `R x| R^{n-1}`: `[e1, e_a] = sum_b M_ba e_b` in a scrambled constant
/// basis. Always Lie.
pub fn lie_algebra<R: Rng>(rng: &mut R, chart: &BaseChart, n: usize) -> SkewAlgebroid {
    let m = chart.dim();
    let mut a = SkewAlgebroid::new(chart, n).expect("valid rank");
    for i in 1..n {
        for k in 1..n {
            if rng.gen_bool(0.6) {
                let v = ScalarField::constant(m, small_rational(rng));
                a.set_c(0, i, k, v).expect("in range");
            }
        }
    }
    a.change_frame(&constant_basis(rng, m, n)).expect("invertible")
}

/// Bundle of Lie algebras: zero anchor, `[e1, e_a] = sum_b M_ba(x) e_b`.
pub fn lie_bundle<R: Rng>(rng: &mut R, chart: &BaseChart, n: usize) -> SkewAlgebroid {
    let m = chart.dim();
    let mut a = SkewAlgebroid::new(chart, n).expect("valid rank");
    for i in 1..n {
        for k in 1..n {
            let v = sparse_scalar(rng, m, 2, 0.4);
            a.set_c(0, i, k, v).expect("in range");
        }
    }
    a
}

/// Action algebroid of a Lie algebra of dimension `m` acting linearly on
/// `R^m` by `rho(e_i) = -sum (ad_i)^a_b x^b d/dx^a`.
pub fn action_algebroid<R: Rng>(rng: &mut R, chart: &BaseChart) -> SkewAlgebroid {
    let m = chart.dim();
    let g = lie_algebra(rng, chart, m);
    let mut a = g.clone();
    for i in 0..m {
        for row in 0..m {
            let mut v = ScalarField::zero(m);
            for b in 0..m {
                // (ad_i)^row_b = c_{i b}^row
                v = v.sub(&g.c(i, b, row).mul(&chart.coordinate(b)));
            }
            a.set_rho(i, row, v).expect("in range");
        }
    }
    a
}

/// A random Lie algebroid: one of the families above, then moved to a
/// random unipotent polynomial frame.
pub fn lie_algebroid<R: Rng>(rng: &mut R, chart: &BaseChart, n: usize) -> SkewAlgebroid {
    let m = chart.dim();
    let base = match rng.gen_range(0..4) {
        0 if n == m => SkewAlgebroid::tangent(chart).expect("tangent"),
        1 if n == m => action_algebroid(rng, chart),
        2 => lie_bundle(rng, chart, n),
        _ => lie_algebra(rng, chart, n),
    };
    if n > 1 && rng.gen_bool(0.5) {
        base.change_frame(&unipotent(rng, m, n)).expect("unipotent")
    } else {
        base
    }
}

/// Arbitrary structure functions and anchor; almost never Lie.
pub fn skew_algebroid<R: Rng>(rng: &mut R, chart: &BaseChart, n: usize, max_deg: u32) -> SkewAlgebroid {
    let m = chart.dim();
    let mut a = SkewAlgebroid::new(chart, n).expect("valid rank");
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                a.set_c(i, j, k, sparse_scalar(rng, m, max_deg, 0.5)).expect("in range");
            }
        }
        for b in 0..m {
            a.set_rho(i, b, sparse_scalar(rng, m, max_deg, 0.5)).expect("in range");
        }
    }
    a
}

/// Homogeneous element of the given parity: odd part of length at most 3,
/// even part of degree at most 1.
pub fn super_poly<R: Rng>(rng: &mut R, table: &Arc<GeneratorTable>, parity: u8) -> SuperPoly {
    let m = table.n_base();
    let no = table.n_odd();
    let ne = table.n_even();
    let mut out = SuperPoly::zero(table);
    for _ in 0..rng.gen_range(1..=3) {
        let mut lens: Vec<usize> = (0..=no.min(3)).filter(|l| l % 2 == parity as usize).collect();
        if lens.is_empty() {
            continue;
        }
        lens.shuffle(rng);
        let mut idx: Vec<usize> = (0..no).collect();
        idx.shuffle(rng);
        let mut key = Key::unit(ne);
        for &i in &idx[..lens[0]] {
            key.odd |= 1 << i;
        }
        if ne > 0 && rng.gen_bool(0.3) {
            let mut e = key.even.to_vec();
            e[rng.gen_range(0..ne)] += 1;
            key.even = e.into();
        }
        out.add_term(key, scalar(rng, m, 2));
    }
    out
}

/// Vector field of homogeneous parity with random components.
pub fn vector_field<R: Rng>(rng: &mut R, table: &Arc<GeneratorTable>, parity: u8) -> SuperVectorField {
    let base = (0..table.n_base()).map(|_| super_poly(rng, table, parity)).collect();
    let odd = (0..table.n_odd()).map(|_| super_poly(rng, table, parity ^ 1)).collect();
    let even = (0..table.n_even()).map(|_| super_poly(rng, table, parity)).collect();
    SuperVectorField::new(table, parity, base, odd, even).expect("homogeneous")
}

/// A `k`-form of `a` with polynomial coefficients.
pub fn form<R: Rng>(rng: &mut R, a: &SkewAlgebroid, k: usize, max_deg: u32) -> SuperPoly {
    let n = a.rank();
    let m = a.base_dim();
    let mut out = SuperPoly::zero(a.forms_table());
    for bits in 0u64..(1 << n) {
        if bits.count_ones() as usize != k {
            continue;
        }
        let c = sparse_scalar(rng, m, max_deg, 0.4);
        let mut key = Key::unit(0);
        key.odd = bits;
        out.add_term(key, c);
    }
    out
}

/// `d^Pi beta` for a random 2-form: closed when `a` is Lie.
pub fn closed_twist<R: Rng>(rng: &mut R, a: &SkewAlgebroid) -> SuperPoly {
    a.d(&form(rng, a, 2, 1)).expect("same table")
}

pub fn bivector<R: Rng>(rng: &mut R, space: &SymplecticSpace2, max_deg: u32) -> Bivector {
    let mut p = Bivector::zero(space).expect("split space");
    let m = space.chart().dim();
    let n = p.rank();
    for i in 0..n {
        for j in i + 1..n {
            p.set(i, j, sparse_scalar(rng, m, max_deg, 0.3)).expect("in range");
        }
    }
    p
}

fn random_chart<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> BaseChart {
    BaseChart::standard(rng.gen_range(lo..=hi))
}

/// A projectable homological Hamiltonian: random Lie algebroid plus a
/// closed twist (sometimes none).
pub fn homological<R: Rng>(rng: &mut R) -> Hamiltonian {
    let chart = random_chart(rng, 1, 3);
    let n = rng.gen_range(1..=3);
    let a = lie_algebroid(rng, &chart, n);
    let twist = (n >= 3 && rng.gen_bool(0.6)).then(|| closed_twist(rng, &a));
    Hamiltonian::from_algebroid(&a, twist.as_ref()).expect("valid twist")
}

/// A quasi-Poisson pair `(P, H = mu + phi/2)` from one of three families:
/// rank 2 with any `P` and no twist, `P = 0` with a closed twist, or an
/// invertible `P` with the twist solved from `-[[P, P]]`.
pub fn quasi_poisson<R: Rng>(rng: &mut R) -> (Bivector, Hamiltonian) {
    loop {
        let chart = random_chart(rng, 1, 3);
        match rng.gen_range(0..3) {
            0 => {
                let a = lie_algebroid(rng, &chart, 2);
                let h = Hamiltonian::from_algebroid(&a, None).expect("no twist");
                let p = bivector(rng, h.space(), 2);
                return (p, h);
            }
            1 => {
                let a = lie_algebroid(rng, &chart, 3);
                let h = Hamiltonian::from_algebroid(&a, Some(&closed_twist(rng, &a))).expect("valid twist");
                let p = Bivector::zero(h.space()).expect("split space");
                return (p, h);
            }
            _ => {
                // rank 4 over a general algebroid makes the inverse of P too costly
                let a = if chart.dim() >= 2 && rng.gen_bool(0.5) {
                    lie_algebra(rng, &chart, 4)
                } else {
                    lie_algebroid(rng, &chart, 2)
                };
                let space = SymplecticSpace2::for_algebroid(&a).expect("split space");
                let p = bivector(rng, &space, 1);
                let Ok(phi) = p.solve_twist(&a) else { continue };
                let h = Hamiltonian::from_algebroid(&a, Some(&phi)).expect("valid twist");
                return (p, h);
            }
        }
    }
}

/// A Dirac structure together with its Hamiltonian: the graph of a
/// quasi-Poisson bivector, or the B-field transform
/// `xi_a + B_aj y^j` of `E` by an exact 2-form `B` (untwisted `H`).
pub fn dirac_frame<R: Rng>(rng: &mut R) -> (DiracFrame, Hamiltonian) {
    if rng.gen_bool(0.5) {
        let (p, h) = quasi_poisson(rng);
        let d = DiracFrame::graph(&p).expect("graph frame");
        return (d, h);
    }
    let chart = random_chart(rng, 1, 3);
    let n = rng.gen_range(1..=3);
    let a = lie_algebroid(rng, &chart, n);
    let h = Hamiltonian::from_algebroid(&a, None).expect("no twist");
    let b = a.d(&form(rng, &a, 1, 2)).expect("same table");
    let s = h.space();
    let sections = (0..n)
        .map(|i| {
            let iota = b.left_partial_odd(i);
            s.xi(i).add(&s.pull_from_e(&iota).expect("split space"))
        })
        .collect();
    (DiracFrame::new(s, sections).expect("isotropic frame"), h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_lie() {
        for seed in 0..40 {
            let mut r = rng(seed);
            let chart = BaseChart::standard(1 + seed as usize % 3);
            let m = chart.dim();
            assert!(lie_algebra(&mut r, &chart, 3).is_lie().holds(), "algebra {seed}");
            assert!(lie_bundle(&mut r, &chart, 3).is_lie().holds(), "bundle {seed}");
            assert!(action_algebroid(&mut r, &chart).is_lie().holds(), "action {seed}");
            assert!(lie_algebroid(&mut r, &chart, m).is_lie().holds(), "mixed {seed}");
        }
    }

    #[test]
    fn generated_pairs_are_valid() {
        for seed in 0..20 {
            let mut r = rng(seed);
            let h = homological(&mut r);
            assert!(h.square().is_zero(), "seed {seed}");
            let (p, h) = quasi_poisson(&mut r);
            assert!(crate::dirac::quasi_poisson_check(&p, &h).unwrap().holds(), "seed {seed}");
            let (d, h) = dirac_frame(&mut r);
            crate::dirac::induced_algebroid(&d, &h).unwrap();
        }
    }

    #[test]
    fn skew_algebroids_are_mostly_not_lie() {
        let chart = BaseChart::standard(2);
        let non_lie = (0..20)
            .filter(|&s| !skew_algebroid(&mut rng(s), &chart, 3, 1).is_lie().holds())
            .count();
        assert!(non_lie > 10);
    }
}
