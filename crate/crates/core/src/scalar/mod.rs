//! Exact rational functions in the base coordinates.
//!
//! A [`ScalarField`] is a reduced fraction of two rational-coefficient
//! polynomials whose denominator is monic under graded-lex order, so two
//! values are equal exactly when their stored forms are equal.

mod gcd;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use gcd::gcd;
pub use poly::{Monomial, Poly};

use crate::error::{Error, Pos, Result};
use crate::expr::{self, Evaluate};

/// Ordered base coordinates `x^1..x^m` of the single global chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseChart {
    names: Arc<[String]>,
}

impl BaseChart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidChart("a chart needs at least one coordinate".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in names {
            let n = n.as_ref();
            if !expr::is_identifier(n) {
                return Err(Error::InvalidChart(format!("`{n}` is not an identifier")));
            }
            if !seen.insert(n) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{n}`")));
            }
        }
        Ok(BaseChart {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    /// Chart `x1..xm`.
    pub fn standard(m: usize) -> Self {
        let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        Self::new(&names).expect("standard names are valid")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coordinate(&self, a: usize) -> ScalarField {
        ScalarField::from_poly(Poly::var(self.dim(), a))
    }

    pub fn parse(&self, text: &str) -> Result<ScalarField> {
        parse_scalar(text, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarField {
    num: Poly,
    den: Poly,
}

impl ScalarField {
    pub fn zero(nvars: usize) -> Self {
        ScalarField {
            num: Poly::zero(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(n.into()))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        ScalarField {
            num: p,
            den: Poly::one(n),
        }
    }

    /// Builds `num / den`, reduced to canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        if den.is_constant() {
            let k = den.constant_term().recip();
            return ScalarField {
                num: num.scale(&k),
                den: Poly::one(n),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().recip();
        ScalarField {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.num.constant_term())
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() || o.den.is_one() {
            // coprime denominators: the sum is already reduced
            return Self::normalized(
                self.num.mul(&o.den).add(&o.num.mul(&self.den)),
                self.den.mul(&o.den),
            );
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            return Self::normalized(
                self.num.mul(&o.den).add(&o.num.mul(&self.den)),
                self.den.mul(&o.den),
            );
        }
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d).add(&o.num.mul(&b));
        if num.is_zero() {
            return Self::zero(self.nvars());
        }
        let t = gcd(&num, &g);
        if t.is_one() {
            return Self::normalized(num, b.mul(&d).mul(&g));
        }
        Self::normalized(
            num.div_exact(&t).expect("gcd divides"),
            b.mul(&d).mul(&g.div_exact(&t).expect("gcd divides")),
        )
    }

    /// `num / den` for coprime inputs: only the leading coefficient is fixed.
    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        let lc = den.leading_coefficient().recip();
        ScalarField {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ScalarField {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars());
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        let cancel = |n: &Poly, d: &Poly| {
            if d.is_one() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
            }
        };
        let (a, d) = cancel(&self.num, &o.den);
        let (c, b) = cancel(&o.num, &self.den);
        Self::normalized(a.mul(&c), b.mul(&d))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars());
        }
        ScalarField {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars()));
        }
        Ok(Self::reduce(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn pow(&self, e: u32) -> Self {
        ScalarField {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Partial derivative with respect to the `a`-th coordinate (0-based).
    pub fn partial(&self, a: usize) -> Result<Self> {
        if a >= self.nvars() {
            return Err(Error::IndexOutOfRange(format!(
                "coordinate {} of {}",
                a + 1,
                self.nvars()
            )));
        }
        if self.den.is_one() {
            return Ok(Self::from_poly(self.num.partial(a)));
        }
        let top = self
            .num
            .partial(a)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial(a)));
        Ok(Self::reduce(top, self.den.mul(&self.den)))
    }

    pub(crate) fn d(&self, a: usize) -> Self {
        self.partial(a).expect("coordinate index in range")
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Canonical text: the numerator alone when the value is a polynomial,
    /// otherwise `(num)/(den)`.
    pub fn display(&self, chart: &BaseChart) -> String {
        self.display_with(chart.names())
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            self.num.display(names)
        } else {
            format!("({})/({})", self.num.display(names), self.den.display(names))
        }
    }

    /// True when the printed form is a single signed monomial with no
    /// parentheses, so it can be glued to further factors with `*`.
    pub(crate) fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.len() == 1
    }
}

impl Evaluate for ScalarField {
    fn add(&self, o: &Self) -> Self {
        ScalarField::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ScalarField::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarField::mul(self, o)
    }
    fn neg(&self) -> Self {
        ScalarField::neg(self)
    }
    fn divide(&self, o: &Self) -> Result<Self> {
        self.div(o)
    }
    fn pow(&self, e: u32) -> Self {
        ScalarField::pow(self, e)
    }
}

/// Parses an expression over `chart` into canonical form.
pub fn parse_scalar(text: &str, chart: &BaseChart) -> Result<ScalarField> {
    parse_scalar_at(text, chart, Pos { line: 1, col: 1 })
}

pub fn parse_scalar_at(text: &str, chart: &BaseChart, origin: Pos) -> Result<ScalarField> {
    let e = expr::parse_expr_at(text, origin)?;
    scalar_from_expr(&e, chart)
}

pub fn scalar_from_expr(e: &expr::Expr, chart: &BaseChart) -> Result<ScalarField> {
    let m = chart.dim();
    expr::evaluate(
        e,
        &|n: &BigInt| ScalarField::constant(m, BigRational::from_integer(n.clone())),
        &|name, pos| match chart.index_of(name) {
            Some(i) => Ok(chart.coordinate(i)),
            None => Err(Error::UnknownIdentifier {
                name: name.to_string(),
                pos,
            }),
        },
    )
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, o: &ScalarField) -> ScalarField {
        ScalarField::add(self, o)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, o: &ScalarField) -> ScalarField {
        ScalarField::sub(self, o)
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, o: &ScalarField) -> ScalarField {
        ScalarField::mul(self, o)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField::neg(self)
    }
}

impl fmt::Display for BaseChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
