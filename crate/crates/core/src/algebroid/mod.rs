//! Skew and Lie algebroids on a trivial bundle over one chart.
//!
//! Indices are 0-based in this API. Forms live in the table with odd
//! generators `y1..yn` (dual frame), multivectors in the table with odd
//! generators `xi1..xin` (frame `e_i <-> xi_i`).

mod morphism;
mod schouten;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{BaseChart, ScalarField};
use crate::superalg::{Generator, GeneratorTable, SuperPoly, SuperVectorField};
use crate::verdict::Verdict;

pub use morphism::{AlgebroidMorphism, MorphismFailure};

pub fn forms_table(chart: &BaseChart, n: usize) -> Result<Arc<GeneratorTable>> {
    let odd = (1..=n).map(|i| Generator::new(format!("y{i}"), (0, 1))).collect();
    GeneratorTable::new(chart.clone(), odd, Vec::new())
}

pub fn multivector_table(chart: &BaseChart, n: usize) -> Result<Arc<GeneratorTable>> {
    let odd = (1..=n).map(|i| Generator::new(format!("xi{i}"), (1, 0))).collect();
    GeneratorTable::new(chart.clone(), odd, Vec::new())
}

/// Coordinates `(x, y, xi, p)` on the cotangent of `E[1]`: odd generators
/// `y1..yn` then `xi1..xin`, even generators `p1..pm`.
pub fn split_table(chart: &BaseChart, n: usize) -> Result<Arc<GeneratorTable>> {
    let mut odd: Vec<Generator> = (1..=n).map(|i| Generator::new(format!("y{i}"), (0, 1))).collect();
    odd.extend((1..=n).map(|i| Generator::new(format!("xi{i}"), (1, 0))));
    let even = (1..=chart.dim()).map(|a| Generator::new(format!("p{a}"), (1, 1))).collect();
    GeneratorTable::new(chart.clone(), odd, even)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewAlgebroid {
    chart: BaseChart,
    rank: usize,
    c: Vec<ScalarField>,
    rho: Vec<ScalarField>,
    forms: Arc<GeneratorTable>,
    multivectors: Arc<GeneratorTable>,
}

impl SkewAlgebroid {
    /// The zero algebroid of the given rank.
    pub fn new(chart: &BaseChart, rank: usize) -> Result<Self> {
        let m = chart.dim();
        Ok(SkewAlgebroid {
            chart: chart.clone(),
            rank,
            c: vec![ScalarField::zero(m); rank * rank * rank],
            rho: vec![ScalarField::zero(m); rank * m],
            forms: forms_table(chart, rank)?,
            multivectors: multivector_table(chart, rank)?,
        })
    }

    /// Tangent algebroid in the coordinate frame.
    pub fn tangent(chart: &BaseChart) -> Result<Self> {
        let m = chart.dim();
        let mut a = Self::new(chart, m)?;
        for i in 0..m {
            a.set_rho(i, i, ScalarField::one(m))?;
        }
        Ok(a)
    }

    pub fn chart(&self) -> &BaseChart {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base_dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn forms_table(&self) -> &Arc<GeneratorTable> {
        &self.forms
    }

    pub fn multivector_table(&self) -> &Arc<GeneratorTable> {
        &self.multivectors
    }

    fn check_index(&self, i: usize, bound: usize, what: &str) -> Result<()> {
        if i >= bound {
            return Err(Error::IndexOutOfRange(format!("{what} index {} (bound {bound})", i + 1)));
        }
        Ok(())
    }

    fn check_scalar(&self, v: &ScalarField) -> Result<()> {
        if v.nvars() != self.base_dim() {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    /// `c_{ij}^k`; `c_{ji}^k` is set to the negative.
    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: ScalarField) -> Result<()> {
        let n = self.rank;
        self.check_index(i, n, "frame")?;
        self.check_index(j, n, "frame")?;
        self.check_index(k, n, "frame")?;
        self.check_scalar(&v)?;
        if i == j {
            return Err(Error::InvalidInput("c_ii^k is zero by antisymmetry".into()));
        }
        self.c[(j * n + i) * n + k] = v.neg();
        self.c[(i * n + j) * n + k] = v;
        Ok(())
    }

    pub fn set_rho(&mut self, i: usize, a: usize, v: ScalarField) -> Result<()> {
        self.check_index(i, self.rank, "frame")?;
        self.check_index(a, self.base_dim(), "coordinate")?;
        self.check_scalar(&v)?;
        let m = self.base_dim();
        self.rho[i * m + a] = v;
        Ok(())
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &ScalarField {
        let n = self.rank;
        &self.c[(i * n + j) * n + k]
    }

    pub fn rho(&self, i: usize, a: usize) -> &ScalarField {
        &self.rho[i * self.base_dim() + a]
    }

    pub fn is_polynomial(&self) -> bool {
        self.c.iter().chain(&self.rho).all(ScalarField::is_polynomial)
    }

    /// `y^i` in the forms table.
    pub fn y(&self, i: usize) -> SuperPoly {
        SuperPoly::odd_gen(&self.forms, i)
    }

    /// `e_i` in the multivector table.
    pub fn xi(&self, i: usize) -> SuperPoly {
        SuperPoly::odd_gen(&self.multivectors, i)
    }

    /// `rho(e_i)(f)`.
    pub fn anchor(&self, i: usize, f: &ScalarField) -> ScalarField {
        let mut r = ScalarField::zero(self.base_dim());
        for a in 0..self.base_dim() {
            let r_ia = self.rho(i, a);
            if !r_ia.is_zero() {
                r = r.add(&r_ia.mul(&f.d(a)));
            }
        }
        r
    }

    /// The homological-candidate field on `E[1]`:
    /// `d = 1/2 c_ij^k y^j y^i d/dy^k + rho_i^b y^i d/dx^b`.
    pub fn de_rham_field(&self) -> SuperVectorField {
        let t = &self.forms;
        let n = self.rank;
        let base = (0..self.base_dim())
            .map(|b| {
                let mut s = SuperPoly::zero(t);
                for i in 0..n {
                    s = s.add(&self.y(i).scale(self.rho(i, b)));
                }
                s
            })
            .collect();
        let odd = (0..n)
            .map(|k| {
                let mut s = SuperPoly::zero(t);
                for i in 0..n {
                    for j in i + 1..n {
                        let c = self.c(i, j, k);
                        if !c.is_zero() {
                            s = s.sub(&self.y(i).mul(&self.y(j)).scale(c));
                        }
                    }
                }
                s
            })
            .collect();
        SuperVectorField::new(t, 1, base, odd, Vec::new()).expect("well-formed de Rham field")
    }

    /// `d^Pi` applied to a form.
    pub fn d(&self, form: &SuperPoly) -> Result<SuperPoly> {
        self.de_rham_field().try_apply(form)
    }

    /// Holds iff `[d, d] = 0`; the certificate is `[d, d]`.
    pub fn is_lie(&self) -> Verdict<SuperVectorField> {
        let d = self.de_rham_field();
        let sq = d.commutator(&d).expect("same table");
        if sq.is_zero() {
            Verdict::Holds
        } else {
            Verdict::Fails(sq)
        }
    }

    fn check_section(&self, x: &[ScalarField]) -> Result<()> {
        if x.len() != self.rank {
            return Err(Error::InvalidInput(format!(
                "section has {} components, rank is {}",
                x.len(),
                self.rank
            )));
        }
        x.iter().try_for_each(|v| self.check_scalar(v))
    }

    /// `[X, Y]` for sections given by their frame coefficients.
    pub fn bracket_sections(&self, x: &[ScalarField], y: &[ScalarField]) -> Result<Vec<ScalarField>> {
        self.check_section(x)?;
        self.check_section(y)?;
        let n = self.rank;
        let mut out = vec![ScalarField::zero(self.base_dim()); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                out[j] = out[j].add(&x[i].mul(&self.anchor(i, &y[j])));
                out[i] = out[i].sub(&y[j].mul(&self.anchor(j, &x[i])));
                let fg = x[i].mul(&y[j]);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o = o.add(&fg.mul(c));
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_form(&self, w: &SuperPoly) -> Result<()> {
        if !crate::superalg::same_table(w.table(), &self.forms) {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    /// `i_X w`: left derivative in `y^i`, weighted by `X^i`.
    pub fn interior_product(&self, x: &[ScalarField], w: &SuperPoly) -> Result<SuperPoly> {
        self.check_section(x)?;
        self.check_form(w)?;
        let mut r = SuperPoly::zero(&self.forms);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                r = r.add(&w.left_partial_odd(i).scale(xi));
            }
        }
        Ok(r)
    }

    /// Cartan formula `L_X = i_X d + d i_X`.
    pub fn lie_derivative_form(&self, x: &[ScalarField], w: &SuperPoly) -> Result<SuperPoly> {
        let dw = self.d(w)?;
        let a = self.interior_product(x, &dw)?;
        let b = self.d(&self.interior_product(x, w)?)?;
        Ok(a.add(&b))
    }

    /// Coefficients of a 1-form `sum a_i y^i`; fails on other degrees.
    pub fn form_coefficients(&self, w: &SuperPoly) -> Result<Vec<ScalarField>> {
        self.check_form(w)?;
        let mut out = vec![ScalarField::zero(self.base_dim()); self.rank];
        for (k, c) in w.terms() {
            if k.odd_len() != 1 {
                return Err(Error::InvalidInput(format!("`{}` is not a 1-form", w)));
            }
            out[k.odd.trailing_zeros() as usize] = c.clone();
        }
        Ok(out)
    }

    pub fn one_form(&self, a: &[ScalarField]) -> Result<SuperPoly> {
        self.check_section(a)?;
        let mut r = SuperPoly::zero(&self.forms);
        for (i, ai) in a.iter().enumerate() {
            r = r.add(&self.y(i).scale(ai));
        }
        Ok(r)
    }

    /// Rewrites the algebroid in the frame `e'_i = sum_j a[i][j] e_j`,
    /// where `a` must be invertible over the function field.
    pub fn change_frame(&self, a: &[Vec<ScalarField>]) -> Result<Self> {
        let n = self.rank;
        let m = self.base_dim();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("frame change matrix has wrong shape".into()));
        }
        let zero = ScalarField::zero(m);
        let inv = crate::linalg::inverse(a, &zero, &ScalarField::one(m))
            .ok_or_else(|| Error::InvalidInput("frame change matrix is singular".into()))?;
        let mut out = Self::new(&self.chart, n)?;
        for i in 0..n {
            for b in 0..m {
                let mut v = zero.clone();
                for j in 0..n {
                    v = v.add(&a[i][j].mul(self.rho(j, b)));
                }
                out.set_rho(i, b, v)?;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let br = self.bracket_sections(&a[i], &a[j])?;
                // express br = sum_k w_k e'_k, i.e. w = br * inv
                for k in 0..n {
                    let mut w = zero.clone();
                    for (l, bl) in br.iter().enumerate() {
                        w = w.add(&bl.mul(&inv[l][k]));
                    }
                    out.set_c(i, j, k, w)?;
                }
            }
        }
        Ok(out)
    }
}
