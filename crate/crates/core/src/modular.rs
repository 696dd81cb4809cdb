//! Characteristic 1-forms and modular classes of skew algebroids.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebroid::{AlgebroidMorphism, SkewAlgebroid};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{gcd, Monomial, Poly, ScalarField};
use crate::superalg::{same_table, SuperPoly};

/// A 1-form `sum a_i(x) y^i` on an algebroid, representing a class in
/// `A^1 / d A^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle1 {
    algebroid: SkewAlgebroid,
    rep: SuperPoly,
}

impl Cocycle1 {
    /// Validates that `rep` is y-linear; when the algebroid is Lie it must
    /// also be closed.
    pub fn new(algebroid: &SkewAlgebroid, rep: SuperPoly) -> Result<Self> {
        algebroid.form_coefficients(&rep)?;
        if algebroid.is_lie().holds() && !algebroid.d(&rep)?.is_zero() {
            return Err(Error::InvalidInput(format!("1-form `{rep}` is not closed")));
        }
        Ok(Cocycle1 {
            algebroid: algebroid.clone(),
            rep,
        })
    }

    fn unchecked(algebroid: &SkewAlgebroid, rep: SuperPoly) -> Self {
        Cocycle1 {
            algebroid: algebroid.clone(),
            rep,
        }
    }

    pub fn algebroid(&self) -> &SkewAlgebroid {
        &self.algebroid
    }

    pub fn rep(&self) -> &SuperPoly {
        &self.rep
    }

    pub fn coefficients(&self) -> Vec<ScalarField> {
        self.algebroid.form_coefficients(&self.rep).expect("validated 1-form")
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// Divergence of `d^Pi` in the coordinate gauge.
pub fn divergence_path(a: &SkewAlgebroid) -> SuperPoly {
    a.de_rham_field().divergence()
}

/// `(sum_k c_ik^k + sum_a d rho_i^a / dx^a) y^i`.
pub fn closed_form(a: &SkewAlgebroid) -> SuperPoly {
    let m = a.base_dim();
    let mut r = SuperPoly::zero(a.forms_table());
    for i in 0..a.rank() {
        let mut s = ScalarField::zero(m);
        for k in 0..a.rank() {
            s = s.add(a.c(i, k, k));
        }
        for b in 0..m {
            s = s.add(&a.rho(i, b).d(b));
        }
        r = r.add(&a.y(i).scale(&s));
    }
    r
}

/// Coefficients of `nabla_{e_i} sigma = phi(e_i) sigma` for the section
/// `sigma = g e_1 ... e_n (x) dx^1 ... dx^m`, computed from the Schouten
/// bracket on the top multivector and the Lie derivative of the top form
/// along the anchor.
pub fn nabla_path(a: &SkewAlgebroid, gauge: &ScalarField) -> Result<SuperPoly> {
    if gauge.is_zero() {
        return Err(Error::ZeroGauge);
    }
    let m = a.base_dim();
    let n = a.rank();
    let mt = a.multivector_table();
    let top_idx: Vec<usize> = (0..n).collect();
    let top = SuperPoly::odd_product(mt, &top_idx);
    let gtop = top.scale(gauge);
    let top_key = top.terms().next().map(|(k, _)| k.clone());
    let tm = SkewAlgebroid::tangent(a.chart())?;
    let vol_idx: Vec<usize> = (0..m).collect();
    let vol = SuperPoly::odd_product(tm.forms_table(), &vol_idx);
    let vol_key = vol.terms().next().map(|(k, _)| k.clone()).expect("nonzero volume");
    let ginv = gauge.recip()?;
    let mut r = SuperPoly::zero(a.forms_table());
    for i in 0..n {
        let mv = a.schouten(&a.xi(i), &gtop)?;
        let lam = match &top_key {
            Some(k) => mv.coefficient(k),
            None => ScalarField::zero(m),
        };
        if mv.len() > 1 || (!mv.is_zero() && top_key.as_ref().is_some_and(|k| mv.coefficient(k).is_zero())) {
            return Err(Error::Internal("bracket with the top multivector left the top degree".into()));
        }
        let anchor: Vec<ScalarField> = (0..m).map(|b| a.rho(i, b).clone()).collect();
        let lv = tm.lie_derivative_form(&anchor, &vol)?;
        let nu = lv.coefficient(&vol_key);
        r = r.add(&a.y(i).scale(&lam.mul(&ginv).add(&nu)));
    }
    Ok(r)
}

/// The modular cocycle, checked against the closed-form expression.
pub fn modular_cocycle(a: &SkewAlgebroid) -> Result<Cocycle1> {
    let div = divergence_path(a);
    let cf = closed_form(a);
    if div != cf {
        return Err(Error::Internal(format!(
            "divergence path `{div}` differs from closed form `{cf}`"
        )));
    }
    Ok(Cocycle1::unchecked(a, div))
}

/// Characteristic form of the section `gauge * e_1...e_n (x) dx^1...dx^m`.
/// Valid on the open set where `gauge` does not vanish.
pub fn characteristic_form(a: &SkewAlgebroid, gauge: &ScalarField) -> Result<Cocycle1> {
    Ok(Cocycle1::unchecked(a, nabla_path(a, gauge)?))
}

/// Outcome of the bounded exactness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// `d f = alpha` with the given polynomial witness.
    Exact(ScalarField),
    /// No polynomial `f` of total degree at most the bound satisfies
    /// `d f = alpha`. Says nothing about higher degrees.
    NotExactUpTo(u32),
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    a.mul(b).div_exact(&g).expect("gcd divides product").monic()
}

fn monomials_up_to(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, &mut cur, &mut out);
    out
}

/// Searches for a polynomial `f` of total degree at most `bound` with
/// `d^Pi f = alpha`, by exact linear algebra on the coefficients of `f`.
pub fn is_exact(alpha: &Cocycle1, bound: u32) -> Result<Exactness> {
    let a = alpha.algebroid();
    let m = a.base_dim();
    let coeffs = alpha.coefficients();
    if let Some(bad) = coeffs.iter().find(|c| !c.is_polynomial()) {
        return Err(Error::NonPolynomial(format!(
            "coefficient `{}` of the 1-form; the polynomial ansatz needs polynomial coefficients",
            bad.display(a.chart())
        )));
    }
    if alpha.is_zero() {
        return Ok(Exactness::Exact(ScalarField::zero(m)));
    }
    let unknowns = monomials_up_to(m, bound);
    // one block of equations per frame index, cleared of anchor denominators
    let mut rows: BTreeMap<(usize, Monomial), Vec<BigRational>> = BTreeMap::new();
    let mut rhs: BTreeMap<(usize, Monomial), BigRational> = BTreeMap::new();
    for i in 0..a.rank() {
        let mut den = Poly::one(m);
        for b in 0..m {
            den = lcm(&den, a.rho(i, b).denominator());
        }
        let scaled: Vec<Poly> = (0..m)
            .map(|b| {
                let r = a.rho(i, b);
                r.numerator().mul(&den.div_exact(r.denominator()).expect("lcm"))
            })
            .collect();
        for (u, mono) in unknowns.iter().enumerate() {
            let f = Poly::from_terms(m, [(mono.clone(), BigRational::from_integer(1.into()))]);
            let mut img = Poly::zero(m);
            for (b, s) in scaled.iter().enumerate() {
                if !s.is_zero() {
                    img = img.add(&s.mul(&f.partial(b)));
                }
            }
            for (mono2, q) in img.terms() {
                rows.entry((i, mono2.clone()))
                    .or_insert_with(|| vec![BigRational::zero(); unknowns.len()])[u] = q.clone();
            }
        }
        let target = coeffs[i].numerator().mul(&den);
        for (mono2, q) in target.terms() {
            rows.entry((i, mono2.clone()))
                .or_insert_with(|| vec![BigRational::zero(); unknowns.len()]);
            rhs.insert((i, mono2.clone()), q.clone());
        }
    }
    let keys: Vec<_> = rows.keys().cloned().collect();
    let mat: Vec<Vec<BigRational>> = keys.iter().map(|k| rows[k].clone()).collect();
    let b: Vec<BigRational> = keys
        .iter()
        .map(|k| rhs.get(k).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    match linalg::solve(&mat, &b, &BigRational::zero()) {
        None => Ok(Exactness::NotExactUpTo(bound)),
        Some(x) => {
            let f = Poly::from_terms(m, unknowns.into_iter().zip(x).filter(|(_, q)| !q.is_zero()));
            let f = ScalarField::from_poly(f);
            let check = a.d(&SuperPoly::scalar(a.forms_table(), f.clone()))?;
            if check != *alpha.rep() {
                return Err(Error::Internal("exactness witness fails verification".into()));
            }
            Ok(Exactness::Exact(f))
        }
    }
}

/// `Mod(Phi) = mod(E1) - Phi^* mod(E2)`.
pub fn modular_class_of_morphism(phi: &AlgebroidMorphism) -> Result<Cocycle1> {
    if let Some(cert) = phi.is_morphism().certificate() {
        return Err(Error::NotAMorphism(format!(
            "intertwining fails at `{}` with difference `{}`",
            cert.generator, cert.difference
        )));
    }
    let m1 = modular_cocycle(phi.source())?;
    let m2 = modular_cocycle(phi.target())?;
    let rep = m1.rep().sub(&phi.pullback(m2.rep())?);
    debug_assert!(same_table(rep.table(), phi.source().forms_table()));
    Ok(Cocycle1::unchecked(phi.source(), rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseChart;

    fn aff1() -> SkewAlgebroid {
        let chart = BaseChart::standard(1);
        let mut a = SkewAlgebroid::new(&chart, 2).unwrap();
        a.set_c(0, 1, 1, ScalarField::one(1)).unwrap();
        a
    }

    #[test]
    fn fixed_instances() {
        let tm = SkewAlgebroid::tangent(&BaseChart::standard(3)).unwrap();
        assert!(modular_cocycle(&tm).unwrap().is_zero());
        let a = aff1();
        assert_eq!(modular_cocycle(&a).unwrap().rep(), &a.y(0));
        assert_eq!(nabla_path(&a, &ScalarField::one(1)).unwrap(), a.y(0));
    }

    #[test]
    fn gauge_on_line() {
        let chart = BaseChart::standard(1);
        let tm = SkewAlgebroid::tangent(&chart).unwrap();
        let g = chart.parse("1 + x1^2").unwrap();
        let phi = characteristic_form(&tm, &g).unwrap();
        assert_eq!(phi.coefficients()[0], chart.parse("2*x1/(1 + x1^2)").unwrap());
        let c = characteristic_form(&tm, &ScalarField::from_int(1, 5)).unwrap();
        assert!(c.is_zero());
        assert_eq!(nabla_path(&tm, &ScalarField::zero(1)), Err(Error::ZeroGauge));
    }

    #[test]
    fn exactness() {
        let chart = BaseChart::standard(1);
        let tm = SkewAlgebroid::tangent(&chart).unwrap();
        let y1 = Cocycle1::new(&tm, tm.y(0)).unwrap();
        assert_eq!(is_exact(&y1, 2).unwrap(), Exactness::Exact(chart.parse("x1").unwrap()));
        let a = aff1();
        let c = Cocycle1::new(&a, a.y(0)).unwrap();
        for bound in 0..4 {
            assert_eq!(is_exact(&c, bound).unwrap(), Exactness::NotExactUpTo(bound));
        }
        let zero = Cocycle1::new(&a, SuperPoly::zero(a.forms_table())).unwrap();
        assert_eq!(is_exact(&zero, 1).unwrap(), Exactness::Exact(ScalarField::zero(1)));
        let rat = Cocycle1::new(&tm, tm.y(0).scale(&chart.parse("1/(1 + x1)").unwrap())).unwrap();
        assert!(matches!(is_exact(&rat, 3), Err(Error::NonPolynomial(_))));
    }

    #[test]
    fn exactness_with_rational_anchor() {
        // frame e1 = (1 + x1) d/dx1 on the line: d f = (1 + x1) f' y1
        let chart = BaseChart::standard(1);
        let mut a = SkewAlgebroid::new(&chart, 1).unwrap();
        a.set_rho(0, 0, chart.parse("1/(1 + x1)").unwrap()).unwrap();
        let w = Cocycle1::new(&a, a.y(0).scale(&chart.parse("2*x1/(1 + x1)").unwrap()));
        assert!(w.is_ok());
        let w = Cocycle1::new(&a, a.y(0)).unwrap();
        assert_eq!(is_exact(&w, 1).unwrap(), Exactness::NotExactUpTo(1));
        assert_eq!(is_exact(&w, 2).unwrap(), Exactness::Exact(chart.parse("x1 + x1^2/2").unwrap()));
    }

    #[test]
    fn morphism_classes() {
        let a = aff1();
        let id = AlgebroidMorphism::identity(&a);
        assert!(modular_class_of_morphism(&id).unwrap().is_zero());
        let t = ScalarField::from_int(1, -4);
        let phi = AlgebroidMorphism::new(
            a.clone(),
            a.clone(),
            vec![vec![ScalarField::one(1), ScalarField::zero(1)], vec![ScalarField::zero(1), t]],
        )
        .unwrap();
        assert!(modular_class_of_morphism(&phi).unwrap().is_zero());
        let zero_alg = SkewAlgebroid::new(a.chart(), 1).unwrap();
        let inc = AlgebroidMorphism::new(
            zero_alg.clone(),
            a.clone(),
            vec![vec![ScalarField::one(1), ScalarField::zero(1)]],
        )
        .unwrap();
        assert_eq!(modular_class_of_morphism(&inc).unwrap().rep(), &zero_alg.y(0).neg());
        let tm = SkewAlgebroid::tangent(a.chart()).unwrap();
        let bad = AlgebroidMorphism::zero(&tm, &tm).unwrap();
        assert!(matches!(modular_class_of_morphism(&bad), Err(Error::NotAMorphism(_))));
    }
}
