//! Degree-2 symplectic graded spaces, cubic Hamiltonians and derived
//! brackets.
//!
//! In a split space the coordinates are `(x^a, y^i, xi_i, p_a)` with
//! `{x^a, p_b} = delta`, `{y^i, xi_j} = delta`. An algebroid `(c, rho)`
//! is encoded by
//!
//! ```text
//! mu = 1/2 c_ij^k y^j y^i xi_k - rho_i^b y^i p_b
//! ```
//!
//! so that `{{xi_i, mu}, xi_j} = c_ij^k xi_k`, `{{xi_i, mu}, f} = rho_i f`,
//! and the Hamiltonian field `{mu, .}` restricted to `(x, y)` is the de Rham
//! field of the algebroid. A 3-form `phi` on `E` enters the Hamiltonian as
//! `phi / 2`.
//!
//! Bidegrees are `y = (0,1)`, `xi = (1,0)`, `p = (1,1)`. The four parts of a
//! cubic Hamiltonian are classified by monomial type:
//!
//! | part  | monomials       | bidegree |
//! |-------|-----------------|----------|
//! | mu    | `yy xi`, `y p`  | (1,2)    |
//! | gamma | `xi xi y`, `xi p` | (2,1)  |
//! | phi   | `yyy`           | (0,3)    |
//! | psi   | `xi xi xi`      | (3,0)    |
//!
//! The ordered labelling "(2,1), (1,2), (0,3), (3,0)" for (mu, gamma, phi,
//! psi) found in the literature corresponds to a different weight
//! convention; only the monomial types matter here.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebroid::{forms_table, split_table, SkewAlgebroid};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{BaseChart, ScalarField};
use crate::superalg::{bits, same_table, Generator, GeneratorTable, Key, SuperPoly, SuperVectorField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace2 {
    table: Arc<GeneratorTable>,
    /// `{zeta^i, zeta^j}`, the inverse of the pairing matrix.
    ginv: Vec<Vec<BigRational>>,
    split_rank: Option<usize>,
}

impl SymplecticSpace2 {
    /// General space with odd generators `names` paired by the constant
    /// symmetric invertible matrix `g`; momenta are named `p1..pm`.
    pub fn new<S: AsRef<str>>(chart: &BaseChart, names: &[S], g: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = names.len();
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("pairing matrix has wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if g[i][j] != g[j][i] {
                    return Err(Error::InvalidInput("pairing matrix is not symmetric".into()));
                }
            }
        }
        let ginv = linalg::inverse(&g, &BigRational::zero(), &BigRational::one())
            .ok_or_else(|| Error::InvalidInput("pairing matrix is singular".into()))?;
        let odd = names.iter().map(|s| Generator::new(s.as_ref(), (0, 1))).collect();
        let even = (1..=chart.dim()).map(|a| Generator::new(format!("p{a}"), (1, 1))).collect();
        Ok(SymplecticSpace2 {
            table: GeneratorTable::new(chart.clone(), odd, even)?,
            ginv,
            split_rank: None,
        })
    }

    /// The split space `T^*[2]E[1]` for a rank-`n` bundle.
    pub fn split(chart: &BaseChart, n: usize) -> Result<Self> {
        let ginv = (0..2 * n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if (i < n && j == i + n) || (i >= n && j + n == i) {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(SymplecticSpace2 {
            table: split_table(chart, n)?,
            ginv,
            split_rank: Some(n),
        })
    }

    pub fn for_algebroid(a: &SkewAlgebroid) -> Result<Self> {
        Self::split(a.chart(), a.rank())
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn chart(&self) -> &BaseChart {
        self.table.chart()
    }

    pub fn split_rank(&self) -> Option<usize> {
        self.split_rank
    }

    fn rank(&self) -> Result<usize> {
        self.split_rank.ok_or(Error::NotSplit)
    }

    pub fn x(&self, a: usize) -> SuperPoly {
        SuperPoly::coordinate(&self.table, a)
    }

    pub fn p(&self, a: usize) -> SuperPoly {
        SuperPoly::even_gen(&self.table, a)
    }

    pub fn zeta(&self, i: usize) -> SuperPoly {
        SuperPoly::odd_gen(&self.table, i)
    }

    /// `y^i` of a split space.
    pub fn y(&self, i: usize) -> SuperPoly {
        self.zeta(i)
    }

    /// `xi_i` of a split space.
    pub fn xi(&self, i: usize) -> SuperPoly {
        self.zeta(self.split_rank.expect("split space") + i)
    }

    pub fn poisson(&self, f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
        if !same_table(f.table(), &self.table) || !same_table(g.table(), &self.table) {
            return Err(Error::TableMismatch);
        }
        let mut r = SuperPoly::zero(&self.table);
        if f.is_zero() || g.is_zero() {
            return Ok(r);
        }
        for a in 0..self.table.n_base() {
            let fx = f.partial_base(a);
            if !fx.is_zero() {
                r = r.add(&fx.mul(&g.partial_even(a)));
            }
            let fp = f.partial_even(a);
            if !fp.is_zero() {
                r = r.sub(&fp.mul(&g.partial_base(a)));
            }
        }
        let n = self.table.n_odd();
        for i in 0..n {
            let fr = f.right_partial_odd(i);
            if fr.is_zero() {
                continue;
            }
            for j in 0..n {
                let gij = &self.ginv[i][j];
                if gij.is_zero() {
                    continue;
                }
                let gl = g.left_partial_odd(j);
                if !gl.is_zero() {
                    r = r.add(&fr.mul(&gl).scale_q(gij));
                }
            }
        }
        Ok(r)
    }

    /// `X = sum_i e[i] xi_i + sum_i w[i] y^i`.
    pub fn section(&self, e: &[ScalarField], w: &[ScalarField]) -> Result<SuperPoly> {
        let n = self.rank()?;
        if e.len() != n || w.len() != n {
            return Err(Error::InvalidInput("section has wrong number of components".into()));
        }
        let mut s = SuperPoly::zero(&self.table);
        for i in 0..n {
            s = s.add(&self.xi(i).scale(&e[i])).add(&self.y(i).scale(&w[i]));
        }
        Ok(s)
    }

    /// Pullback of a function of `(x, y)` along the projection to `E[1]`.
    pub fn pull_from_e(&self, f: &SuperPoly) -> Result<SuperPoly> {
        self.rank()?;
        f.transfer(&self.table)
    }

    fn counts(&self, k: &Key) -> (u32, u32, u32) {
        let n = self.split_rank.expect("split space");
        let ymask = (1u64 << n) - 1;
        (
            (k.odd & ymask).count_ones(),
            (k.odd >> n).count_ones(),
            k.even.iter().sum(),
        )
    }

    /// Restriction of a function of `(x, y)` only to the forms table of `E`.
    pub fn restrict_to_e(&self, f: &SuperPoly) -> Result<SuperPoly> {
        let n = self.rank()?;
        let target = forms_table(self.chart(), n)?;
        let mut r = SuperPoly::zero(&target);
        for (k, c) in f.terms() {
            let (_, xi, p) = self.counts(k);
            if xi + p > 0 {
                return Err(Error::NotProjectable);
            }
            let mut key = Key::unit(0);
            key.odd = k.odd;
            r.add_term(key, c.clone());
        }
        Ok(r)
    }

    /// Restriction of a function of `(x, xi)` only, renaming `xi_i` to `y^i`
    /// (the forms table of the dual bundle).
    pub fn restrict_to_dual(&self, f: &SuperPoly) -> Result<SuperPoly> {
        let n = self.rank()?;
        let target = forms_table(self.chart(), n)?;
        let mut r = SuperPoly::zero(&target);
        for (k, c) in f.terms() {
            let (y, _, p) = self.counts(k);
            if y + p > 0 {
                return Err(Error::NotProjectable);
            }
            let mut key = Key::unit(0);
            key.odd = k.odd >> n;
            r.add_term(key, c.clone());
        }
        Ok(r)
    }

    /// Sets `y` and `p` to zero.
    pub fn restrict_to_dual_zero_section(&self, f: &SuperPoly) -> Result<SuperPoly> {
        self.rank()?;
        Ok(f.filter(|k| {
            let (y, _, p) = self.counts(k);
            y == 0 && p == 0
        }))
    }
}

/// Cubic Hamiltonian on a degree-2 symplectic space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hamiltonian {
    space: SymplecticSpace2,
    value: SuperPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianParts {
    pub mu: SuperPoly,
    pub gamma: SuperPoly,
    pub phi: SuperPoly,
    pub psi: SuperPoly,
}

/// The field `{H, .}` restricted to `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub field: SuperVectorField,
    pub homological: bool,
}

impl Hamiltonian {
    pub fn new(space: &SymplecticSpace2, value: SuperPoly) -> Result<Self> {
        if !same_table(value.table(), space.table()) {
            return Err(Error::TableMismatch);
        }
        if let Some((k, _)) = value.terms().find(|(k, _)| k.degree() != 3) {
            return Err(Error::InvalidInput(format!(
                "Hamiltonian term `{}` has degree {}, expected 3",
                value.key_display(k),
                k.degree()
            )));
        }
        Ok(Hamiltonian {
            space: space.clone(),
            value,
        })
    }

    /// `mu` of an algebroid, plus half of an optional 3-form on `E` given
    /// in the forms table.
    pub fn from_algebroid(a: &SkewAlgebroid, twist: Option<&SuperPoly>) -> Result<Self> {
        let space = SymplecticSpace2::for_algebroid(a)?;
        let mut h = algebroid_mu(&space, a)?;
        if let Some(phi) = twist {
            h = h.add(&twist_term(&space, phi)?);
        }
        Self::new(&space, h)
    }

    pub fn space(&self) -> &SymplecticSpace2 {
        &self.space
    }

    pub fn value(&self) -> &SuperPoly {
        &self.value
    }

    /// `{H, H}`; zero exactly when `H` is homological.
    pub fn square(&self) -> SuperPoly {
        self.space.poisson(&self.value, &self.value).expect("same table")
    }

    /// `{H, f}`.
    pub fn apply(&self, f: &SuperPoly) -> Result<SuperPoly> {
        self.space.poisson(&self.value, f)
    }

    /// Dorfman bracket `{{X, H}, Y}`.
    pub fn derived_bracket(&self, x: &SuperPoly, y: &SuperPoly) -> Result<SuperPoly> {
        let xh = self.space.poisson(x, &self.value)?;
        self.space.poisson(&xh, y)
    }

    /// `rho(X)(f) = {{X, H}, f}`.
    pub fn anchor_apply(&self, x: &SuperPoly, f: &SuperPoly) -> Result<SuperPoly> {
        self.derived_bracket(x, f)
    }

    pub fn split_parts(&self) -> Result<HamiltonianParts> {
        self.space.rank()?;
        let s = &self.space;
        let part = |pred: fn((u32, u32, u32)) -> bool| self.value.filter(|k| pred(s.counts(k)));
        Ok(HamiltonianParts {
            mu: part(|(y, xi, p)| (y, xi, p) == (2, 1, 0) || (y, xi, p) == (1, 0, 1)),
            gamma: part(|(y, xi, p)| (y, xi, p) == (1, 2, 0) || (y, xi, p) == (0, 1, 1)),
            phi: part(|(y, _, _)| y == 3),
            psi: part(|(_, xi, _)| xi == 3),
        })
    }

    pub fn is_projectable(&self) -> Result<bool> {
        let parts = self.split_parts()?;
        let by_parts = parts.gamma.is_zero() && parts.psi.is_zero();
        let n = self.space.rank()?;
        let mut direct = true;
        let gens = (0..self.space.chart().dim())
            .map(|a| self.space.x(a))
            .chain((0..n).map(|i| self.space.y(i)));
        for u in gens {
            let v = self.apply(&u)?;
            if v.terms().any(|(k, _)| {
                let (_, xi, p) = self.space.counts(k);
                xi + p > 0
            }) {
                direct = false;
                break;
            }
        }
        if by_parts != direct {
            return Err(Error::Internal(
                "projectability criteria disagree".into(),
            ));
        }
        Ok(by_parts)
    }

    /// Projection of `{H, .}` to `E[1]`.
    pub fn project_to_e(&self) -> Result<Projection> {
        if !self.is_projectable()? {
            return Err(Error::NotProjectable);
        }
        let n = self.space.rank()?;
        let target = forms_table(self.space.chart(), n)?;
        let base = (0..self.space.chart().dim())
            .map(|a| self.space.restrict_to_e(&self.apply(&self.space.x(a))?))
            .collect::<Result<Vec<_>>>()?;
        let odd = (0..n)
            .map(|i| self.space.restrict_to_e(&self.apply(&self.space.y(i))?))
            .collect::<Result<Vec<_>>>()?;
        let field = SuperVectorField::new(&target, 1, base, odd, Vec::new())?;
        Ok(Projection {
            field,
            homological: self.square().is_zero(),
        })
    }

    /// Algebroid structure on `E` read off the projected field.
    pub fn algebroid_on_e(&self) -> Result<SkewAlgebroid> {
        let proj = self.project_to_e()?;
        SkewAlgebroid::from_de_rham_field(&proj.field)
    }

    /// Algebroid structure on `E^*` read off `{H, x^a}` and `{H, xi_i}`,
    /// which must be functions of `(x, xi)`. The frame of `E^*` is the dual
    /// frame, its forms table uses `y^i` for `xi_i`.
    pub fn algebroid_on_dual(&self) -> Result<SkewAlgebroid> {
        let n = self.space.rank()?;
        let target = forms_table(self.space.chart(), n)?;
        let base = (0..self.space.chart().dim())
            .map(|a| self.space.restrict_to_dual(&self.apply(&self.space.x(a))?))
            .collect::<Result<Vec<_>>>()?;
        let odd = (0..n)
            .map(|i| self.space.restrict_to_dual(&self.apply(&self.space.xi(i))?))
            .collect::<Result<Vec<_>>>()?;
        let field = SuperVectorField::new(&target, 1, base, odd, Vec::new())?;
        SkewAlgebroid::from_de_rham_field(&field)
    }
}

/// `mu = 1/2 c_ij^k y^j y^i xi_k - rho_i^b y^i p_b`.
pub fn algebroid_mu(space: &SymplecticSpace2, a: &SkewAlgebroid) -> Result<SuperPoly> {
    let n = space.rank()?;
    if n != a.rank() || space.chart() != a.chart() {
        return Err(Error::TableMismatch);
    }
    let mut h = SuperPoly::zero(space.table());
    for i in 0..n {
        for j in i + 1..n {
            let yy = space.y(i).mul(&space.y(j));
            for k in 0..n {
                let c = a.c(i, j, k);
                if !c.is_zero() {
                    h = h.sub(&yy.mul(&space.xi(k)).scale(c));
                }
            }
        }
        for b in 0..a.base_dim() {
            let r = a.rho(i, b);
            if !r.is_zero() {
                h = h.sub(&space.y(i).mul(&space.p(b)).scale(r));
            }
        }
    }
    Ok(h)
}

/// Hamiltonian term of a 3-form on `E`: half the form, moved to the split
/// table.
pub fn twist_term(space: &SymplecticSpace2, phi: &SuperPoly) -> Result<SuperPoly> {
    space.rank()?;
    if phi.terms().any(|(k, _)| k.odd_len() != 3 || k.degree() != 3) {
        return Err(Error::InvalidInput(format!("`{phi}` is not a 3-form")));
    }
    let half = BigRational::new(1.into(), 2.into());
    Ok(space.pull_from_e(phi)?.scale_q(&half))
}

impl SkewAlgebroid {
    /// Reads `(c, rho)` off an odd degree-1 field on `E[1]` of the form
    /// `1/2 c y y d/dy + rho y d/dx`; fails if the field has other terms.
    pub fn from_de_rham_field(field: &SuperVectorField) -> Result<Self> {
        let t = field.table();
        let chart = t.chart();
        let n = t.n_odd();
        let m = chart.dim();
        let mut a = SkewAlgebroid::new(chart, n)?;
        if !same_table(t, a.forms_table()) {
            return Err(Error::TableMismatch);
        }
        for b in 0..m {
            for (k, c) in field.base()[b].terms() {
                if k.odd_len() == 1 {
                    a.set_rho(k.odd.trailing_zeros() as usize, b, c.clone())?;
                }
            }
        }
        for kk in 0..n {
            for (k, c) in field.odd()[kk].terms() {
                if k.odd_len() == 2 {
                    let idx: Vec<usize> = bits(k.odd).collect();
                    a.set_c(idx[0], idx[1], kk, c.neg())?;
                }
            }
        }
        if a.de_rham_field() != *field {
            return Err(Error::InvalidInput(format!(
                "vector field `{}` is not of algebroid type",
                field.display()
            )));
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests;
