use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::table::{same_table, GeneratorTable, Slot};
use crate::error::{Error, Pos, Result};
use crate::expr::{self, Evaluate};
use crate::scalar::ScalarField;

/// Monomial in the odd and even generators: a bitmask of odd generators
/// (in increasing index order) and the even exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Key {
    pub odd: u64,
    pub even: Box<[u32]>,
}

impl Key {
    pub fn unit(n_even: usize) -> Self {
        Key {
            odd: 0,
            even: vec![0; n_even].into_boxed_slice(),
        }
    }

    pub fn odd_len(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        bits(self.odd).collect()
    }

    pub fn parity(&self) -> u8 {
        (self.odd.count_ones() & 1) as u8
    }

    /// Total degree: odd generators count one, even generators two.
    pub fn degree(&self) -> u32 {
        self.odd.count_ones() + 2 * self.even.iter().sum::<u32>()
    }

    pub fn bidegree(&self, table: &GeneratorTable) -> (u32, u32) {
        let mut d = (0, 0);
        for i in bits(self.odd) {
            let b = table.odd()[i].bidegree;
            d.0 += b.0;
            d.1 += b.1;
        }
        for (k, &e) in self.even.iter().enumerate() {
            let b = table.even()[k].bidegree;
            d.0 += e * b.0;
            d.1 += e * b.1;
        }
        d
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.odd_len()
            .cmp(&o.odd_len())
            .then_with(|| {
                let diff = self.odd ^ o.odd;
                if diff == 0 {
                    Ordering::Equal
                } else if self.odd & diff & diff.wrapping_neg() != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
            .then_with(|| {
                let a: u32 = self.even.iter().sum();
                let b: u32 = o.even.iter().sum();
                a.cmp(&b)
            })
            .then_with(|| o.even.cmp(&self.even))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sign `(-1)^k` of reordering `a` past `b`, where `k` counts pairs
/// `i in a`, `j in b` with `i > j`.
pub(crate) fn koszul(a: u64, b: u64) -> bool {
    let mut k = 0u32;
    for j in bits(b) {
        k += if j >= 63 { 0 } else { (a >> (j + 1)).count_ones() };
    }
    k & 1 == 1
}

/// Element of `C^inf(M)[odd, even]`, coefficients exact rational functions.
#[derive(Clone, Debug)]
pub struct SuperPoly {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Key, ScalarField>,
}

impl PartialEq for SuperPoly {
    fn eq(&self, o: &Self) -> bool {
        same_table(&self.table, &o.table) && self.terms == o.terms
    }
}

impl Eq for SuperPoly {}

impl SuperPoly {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        SuperPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::scalar(table, ScalarField::one(table.n_base()))
    }

    pub fn from_int(table: &Arc<GeneratorTable>, n: i64) -> Self {
        Self::scalar(table, ScalarField::from_int(table.n_base(), n))
    }

    pub fn scalar(table: &Arc<GeneratorTable>, f: ScalarField) -> Self {
        Self::monomial(table, Key::unit(table.n_even()), f)
    }

    pub fn monomial(table: &Arc<GeneratorTable>, key: Key, c: ScalarField) -> Self {
        let mut p = Self::zero(table);
        p.add_term(key, c);
        p
    }

    pub fn odd_gen(table: &Arc<GeneratorTable>, i: usize) -> Self {
        assert!(i < table.n_odd(), "odd generator index out of range");
        let mut k = Key::unit(table.n_even());
        k.odd = 1 << i;
        Self::monomial(table, k, ScalarField::one(table.n_base()))
    }

    pub fn even_gen(table: &Arc<GeneratorTable>, i: usize) -> Self {
        let mut k = Key::unit(table.n_even());
        k.even[i] = 1;
        Self::monomial(table, k, ScalarField::one(table.n_base()))
    }

    pub fn coordinate(table: &Arc<GeneratorTable>, a: usize) -> Self {
        Self::scalar(table, table.chart().coordinate(a))
    }

    /// Product of odd generators in the given order.
    pub fn odd_product(table: &Arc<GeneratorTable>, idx: &[usize]) -> Self {
        idx.iter()
            .fold(Self::one(table), |acc, &i| acc.mul(&Self::odd_gen(table, i)))
    }

    pub fn generator(table: &Arc<GeneratorTable>, name: &str) -> Result<Self> {
        Ok(match table.slot(name)? {
            Slot::Base(a) => Self::coordinate(table, a),
            Slot::Odd(i) => Self::odd_gen(table, i),
            Slot::Even(i) => Self::even_gen(table, i),
        })
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn nvars(&self) -> usize {
        self.table.n_base()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &ScalarField)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &Key) -> ScalarField {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| ScalarField::zero(self.nvars()))
    }

    /// Degree-zero part.
    pub fn body(&self) -> ScalarField {
        self.coefficient(&Key::unit(self.table.n_even()))
    }

    pub fn add_term(&mut self, key: Key, c: ScalarField) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, o: &Self) {
        assert!(same_table(&self.table, &o.table), "generator table mismatch");
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if !same_table(&self.table, &o.table) {
            return Err(Error::TableMismatch);
        }
        Ok(self.add(o))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        SuperPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        if f.is_zero() {
            return Self::zero(&self.table);
        }
        if f.is_one() {
            return self.clone();
        }
        let mut r = Self::zero(&self.table);
        for (k, c) in &self.terms {
            r.add_term(k.clone(), c.mul(f));
        }
        r
    }

    pub fn scale_q(&self, q: &BigRational) -> Self {
        self.scale(&ScalarField::constant(self.nvars(), q.clone()))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if !same_table(&self.table, &o.table) {
            return Err(Error::TableMismatch);
        }
        Ok(self.mul(o))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let mut r = Self::zero(&self.table);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                if ka.odd & kb.odd != 0 {
                    continue;
                }
                let even: Box<[u32]> = ka.even.iter().zip(kb.even.iter()).map(|(a, b)| a + b).collect();
                let c = ca.mul(cb);
                let c = if koszul(ka.odd, kb.odd) { c.neg() } else { c };
                r.add_term(
                    Key {
                        odd: ka.odd | kb.odd,
                        even,
                    },
                    c,
                );
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.table), |acc, _| acc.mul(self))
    }

    /// Parity if homogeneous; zero is even.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(Key::parity);
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    /// Total degree if homogeneous (`None` for zero or mixed degree).
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Key::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|k| k.bidegree(&self.table));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Terms whose key satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&Key) -> bool) -> Self {
        SuperPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| pred(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        self.filter(|k| k.degree() == degree)
    }

    pub fn map_coefficients(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        let mut r = Self::zero(&self.table);
        for (k, c) in &self.terms {
            r.add_term(k.clone(), f(c));
        }
        r
    }

    /// Left derivative with respect to the odd generator `i`.
    pub fn left_partial_odd(&self, i: usize) -> Self {
        let bit = 1u64 << i;
        let below = bit - 1;
        let mut r = Self::zero(&self.table);
        for (k, c) in &self.terms {
            if k.odd & bit == 0 {
                continue;
            }
            let neg = (k.odd & below).count_ones() & 1 == 1;
            r.add_term(
                Key {
                    odd: k.odd & !bit,
                    even: k.even.clone(),
                },
                if neg { c.neg() } else { c.clone() },
            );
        }
        r
    }

    /// Right derivative with respect to the odd generator `i`.
    pub fn right_partial_odd(&self, i: usize) -> Self {
        let bit = 1u64 << i;
        let mut r = Self::zero(&self.table);
        for (k, c) in &self.terms {
            if k.odd & bit == 0 {
                continue;
            }
            let above = if i >= 63 { 0 } else { k.odd >> (i + 1) };
            let neg = above.count_ones() & 1 == 1;
            r.add_term(
                Key {
                    odd: k.odd & !bit,
                    even: k.even.clone(),
                },
                if neg { c.neg() } else { c.clone() },
            );
        }
        r
    }

    pub fn partial_even(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.table);
        for (k, c) in &self.terms {
            let e = k.even[i];
            if e == 0 {
                continue;
            }
            let mut even = k.even.clone();
            even[i] -= 1;
            r.add_term(
                Key { odd: k.odd, even },
                c.scale(&BigRational::from_integer(e.into())),
            );
        }
        r
    }

    pub fn partial_base(&self, a: usize) -> Self {
        let mut r = Self::zero(&self.table);
        for (k, c) in &self.terms {
            r.add_term(k.clone(), c.d(a));
        }
        r
    }

    /// Left derivative with respect to any generator or coordinate.
    pub fn partial(&self, slot: Slot) -> Self {
        match slot {
            Slot::Base(a) => self.partial_base(a),
            Slot::Odd(i) => self.left_partial_odd(i),
            Slot::Even(i) => self.partial_even(i),
        }
    }

    /// Algebra morphism determined by images of the odd and even
    /// generators (coefficients are kept; base coordinates are fixed).
    pub fn substitute(&self, target: &Arc<GeneratorTable>, odd: &[SuperPoly], even: &[SuperPoly]) -> Self {
        assert_eq!(odd.len(), self.table.n_odd());
        assert_eq!(even.len(), self.table.n_even());
        let mut r = SuperPoly::zero(target);
        for (k, c) in &self.terms {
            let mut m = SuperPoly::scalar(target, c.clone());
            for i in bits(k.odd) {
                m = m.mul(&odd[i]);
            }
            for (j, &e) in k.even.iter().enumerate() {
                for _ in 0..e {
                    m = m.mul(&even[j]);
                }
            }
            r = r.add(&m);
        }
        r
    }

    /// Re-expresses the element over `target`, matching generators by name.
    pub fn transfer(&self, target: &Arc<GeneratorTable>) -> Result<Self> {
        if target.chart() != self.table.chart() {
            return Err(Error::TableMismatch);
        }
        let odd = self
            .table
            .odd()
            .iter()
            .map(|g| SuperPoly::generator(target, &g.name))
            .collect::<Result<Vec<_>>>()?;
        let even = self
            .table
            .even()
            .iter()
            .map(|g| SuperPoly::generator(target, &g.name))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.substitute(target, &odd, &even))
    }

    pub fn parse(text: &str, table: &Arc<GeneratorTable>) -> Result<Self> {
        Self::parse_at(text, table, Pos { line: 1, col: 1 })
    }

    pub fn parse_at(text: &str, table: &Arc<GeneratorTable>, origin: Pos) -> Result<Self> {
        let e = expr::parse_expr_at(text, origin)?;
        let n = table.n_base();
        expr::evaluate(
            &e,
            &|k: &BigInt| {
                SuperPoly::scalar(table, ScalarField::constant(n, BigRational::from_integer(k.clone())))
            },
            &|name, pos| {
                SuperPoly::generator(table, name).map_err(|_| Error::UnknownIdentifier {
                    name: name.to_string(),
                    pos,
                })
            },
        )
    }

    pub fn key_display(&self, k: &Key) -> String {
        let mut parts: Vec<String> = bits(k.odd).map(|i| self.table.odd()[i].name.clone()).collect();
        for (j, &e) in k.even.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.table.even()[j].name.clone()),
                _ => parts.push(format!("{}^{}", self.table.even()[j].name, e)),
            }
        }
        parts.join("*")
    }

    /// Canonical text, re-parseable over the same table.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.table.chart().names();
        let mut out = String::new();
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let mono = self.key_display(k);
            let (neg, body) = if c.is_monomial() {
                let s = c.display_with(names);
                let (neg, s) = match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                };
                let body = if mono.is_empty() {
                    s
                } else if s == "1" {
                    mono
                } else {
                    format!("{s}*{mono}")
                };
                (neg, body)
            } else {
                let s = c.display_with(names);
                let s = if c.is_polynomial() && !(mono.is_empty() && self.terms.len() == 1) {
                    format!("({s})")
                } else {
                    s
                };
                let body = if mono.is_empty() { s } else { format!("{s}*{mono}") };
                (false, body)
            };
            match (idx, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

impl Evaluate for SuperPoly {
    fn add(&self, o: &Self) -> Self {
        SuperPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        SuperPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        SuperPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        SuperPoly::neg(self)
    }
    fn divide(&self, o: &Self) -> Result<Self> {
        if o.len() == 1 && o.terms.keys().next().map(|k| k.degree()) == Some(0) {
            let inv = o.body().recip()?;
            return Ok(self.scale(&inv));
        }
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Err(Error::InvalidInput("division by an element of positive degree".into()))
    }
    fn pow(&self, e: u32) -> Self {
        SuperPoly::pow(self, e)
    }
}

impl std::fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display())
    }
}
