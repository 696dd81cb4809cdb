use std::sync::Arc;

use super::poly::SuperPoly;
use super::table::{same_table, GeneratorTable, Slot};
use crate::error::{Error, Result};
use crate::scalar::ScalarField;

/// Homogeneous vector field `X = sum_A X^A d/du^A`, coefficients on the
/// left and derivatives acting from the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVectorField {
    table: Arc<GeneratorTable>,
    parity: u8,
    base: Vec<SuperPoly>,
    odd: Vec<SuperPoly>,
    even: Vec<SuperPoly>,
}

impl SuperVectorField {
    pub fn new(
        table: &Arc<GeneratorTable>,
        parity: u8,
        base: Vec<SuperPoly>,
        odd: Vec<SuperPoly>,
        even: Vec<SuperPoly>,
    ) -> Result<Self> {
        if base.len() != table.n_base() || odd.len() != table.n_odd() || even.len() != table.n_even() {
            return Err(Error::InvalidInput("wrong number of components".into()));
        }
        let parity = parity & 1;
        for (c, gen_parity) in base
            .iter()
            .map(|c| (c, 0))
            .chain(odd.iter().map(|c| (c, 1)))
            .chain(even.iter().map(|c| (c, 0)))
        {
            if !same_table(c.table(), table) {
                return Err(Error::TableMismatch);
            }
            if c.is_zero() {
                continue;
            }
            if c.parity() != Some(parity ^ gen_parity) {
                return Err(Error::InhomogeneousParity);
            }
        }
        Ok(SuperVectorField {
            table: table.clone(),
            parity,
            base,
            odd,
            even,
        })
    }

    pub fn zero(table: &Arc<GeneratorTable>, parity: u8) -> Self {
        let z = SuperPoly::zero(table);
        SuperVectorField {
            table: table.clone(),
            parity: parity & 1,
            base: vec![z.clone(); table.n_base()],
            odd: vec![z.clone(); table.n_odd()],
            even: vec![z; table.n_even()],
        }
    }

    /// `coef * d/du` for a single generator or coordinate `u`.
    pub fn basic(table: &Arc<GeneratorTable>, slot: Slot, coef: SuperPoly) -> Result<Self> {
        let gp = matches!(slot, Slot::Odd(_)) as u8;
        let parity = coef.parity().ok_or(Error::InhomogeneousParity)? ^ gp;
        let mut x = Self::zero(table, parity);
        *x.component_mut(slot) = coef;
        Self::new(table, parity, x.base, x.odd, x.even)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn base(&self) -> &[SuperPoly] {
        &self.base
    }

    pub fn odd(&self) -> &[SuperPoly] {
        &self.odd
    }

    pub fn even(&self) -> &[SuperPoly] {
        &self.even
    }

    pub fn component(&self, slot: Slot) -> &SuperPoly {
        match slot {
            Slot::Base(a) => &self.base[a],
            Slot::Odd(i) => &self.odd[i],
            Slot::Even(i) => &self.even[i],
        }
    }

    fn component_mut(&mut self, slot: Slot) -> &mut SuperPoly {
        match slot {
            Slot::Base(a) => &mut self.base[a],
            Slot::Odd(i) => &mut self.odd[i],
            Slot::Even(i) => &mut self.even[i],
        }
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> {
        let t = &self.table;
        (0..t.n_base())
            .map(Slot::Base)
            .chain((0..t.n_odd()).map(Slot::Odd))
            .chain((0..t.n_even()).map(Slot::Even))
    }

    pub fn is_zero(&self) -> bool {
        self.base.iter().chain(&self.odd).chain(&self.even).all(SuperPoly::is_zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&SuperPoly, &SuperPoly) -> SuperPoly) -> Result<Self> {
        if !same_table(&self.table, &o.table) {
            return Err(Error::TableMismatch);
        }
        if self.parity != o.parity && !self.is_zero() && !o.is_zero() {
            return Err(Error::InhomogeneousParity);
        }
        let parity = if self.is_zero() { o.parity } else { self.parity };
        let z = |a: &[SuperPoly], b: &[SuperPoly]| a.iter().zip(b).map(|(x, y)| f(x, y)).collect();
        Ok(SuperVectorField {
            table: self.table.clone(),
            parity,
            base: z(&self.base, &o.base),
            odd: z(&self.odd, &o.odd),
            even: z(&self.even, &o.even),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, SuperPoly::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, SuperPoly::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(SuperPoly::neg)
    }

    fn map(&self, f: impl Fn(&SuperPoly) -> SuperPoly) -> Self {
        SuperVectorField {
            table: self.table.clone(),
            parity: self.parity,
            base: self.base.iter().map(&f).collect(),
            odd: self.odd.iter().map(&f).collect(),
            even: self.even.iter().map(&f).collect(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        self.map(|c| c.scale(f))
    }

    /// Left multiplication `g X` by a homogeneous element.
    pub fn left_mul(&self, g: &SuperPoly) -> Result<Self> {
        if g.is_zero() {
            return Ok(Self::zero(&self.table, self.parity));
        }
        let p = g.parity().ok_or(Error::InhomogeneousParity)?;
        let mut r = self.map(|c| g.mul(c));
        r.parity ^= p;
        Ok(r)
    }

    /// `X(f)`.
    pub fn apply(&self, f: &SuperPoly) -> SuperPoly {
        assert!(same_table(&self.table, f.table()), "generator table mismatch");
        let mut r = SuperPoly::zero(&self.table);
        for s in self.slots() {
            let c = self.component(s);
            if c.is_zero() {
                continue;
            }
            let d = f.partial(s);
            if d.is_zero() {
                continue;
            }
            r = r.add(&c.mul(&d));
        }
        r
    }

    pub fn try_apply(&self, f: &SuperPoly) -> Result<SuperPoly> {
        if !same_table(&self.table, f.table()) {
            return Err(Error::TableMismatch);
        }
        Ok(self.apply(f))
    }

    /// Graded commutator `[X, Y] = XY - (-1)^{|X||Y|} YX`.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        if !same_table(&self.table, &o.table) {
            return Err(Error::TableMismatch);
        }
        let sign_neg = self.parity & o.parity == 0;
        let mut r = Self::zero(&self.table, self.parity ^ o.parity);
        for s in self.slots() {
            let a = self.apply(o.component(s));
            let b = o.apply(self.component(s));
            *r.component_mut(s) = if sign_neg { a.sub(&b) } else { a.add(&b) };
        }
        Ok(r)
    }

    /// Degree of `X` when every nonzero component has the same degree shift.
    pub fn degree(&self) -> Option<i64> {
        let mut out = None;
        for s in self.slots() {
            let c = self.component(s);
            if c.is_zero() {
                continue;
            }
            let g = match s {
                Slot::Base(_) => 0,
                Slot::Odd(_) => 1,
                Slot::Even(_) => 2,
            };
            let d = c.degree()? as i64 - g;
            match out {
                None => out = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        out
    }

    /// Coordinate divergence `sum_A (-1)^{|A|(|X|+1)} d_A X^A`.
    pub fn divergence(&self) -> SuperPoly {
        let mut r = SuperPoly::zero(&self.table);
        for (a, c) in self.base.iter().enumerate() {
            r = r.add(&c.partial_base(a));
        }
        let odd_neg = self.parity == 0;
        for (i, c) in self.odd.iter().enumerate() {
            let d = c.left_partial_odd(i);
            r = if odd_neg { r.sub(&d) } else { r.add(&d) };
        }
        for (i, c) in self.even.iter().enumerate() {
            r = r.add(&c.partial_even(i));
        }
        r
    }

    /// Divergence against the Berezinian volume `g * [du]`.
    pub fn gauge_divergence(&self, g: &ScalarField) -> Result<SuperPoly> {
        if g.is_zero() {
            return Err(Error::ZeroGauge);
        }
        let gp = SuperPoly::scalar(&self.table, g.clone());
        let xg = self.apply(&gp);
        Ok(self.divergence().add(&xg.scale(&g.recip()?)))
    }

    /// Display as `c1*d/du1 + ...`, one summand per nonzero component.
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for s in self.slots() {
            let c = self.component(s);
            if c.is_zero() {
                continue;
            }
            let name = match s {
                Slot::Base(a) => self.table.chart().names()[a].clone(),
                Slot::Odd(i) => self.table.odd()[i].name.clone(),
                Slot::Even(i) => self.table.even()[i].name.clone(),
            };
            parts.push(format!("({})*d/d{}", c.display(), name));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
