//! Exact Gaussian elimination over the rationals and over the field of
//! rational functions.

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::ScalarField;

pub trait Field: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `self / o` for nonzero `o`.
    fn div(&self, o: &Self) -> Self;
}

impl Field for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for ScalarField {
    fn is_zero(&self) -> bool {
        ScalarField::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ScalarField::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ScalarField::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarField::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        ScalarField::div(self, o).expect("nonzero pivot")
    }
}

/// Brings `rows` to reduced row echelon form in place; returns the pivot
/// columns.
pub fn rref<F: Field>(rows: &mut [Vec<F>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].clone();
        let pivot_row: Vec<F> = rows[r].iter().map(|x| x.div(&inv)).collect();
        rows[r] = pivot_row;
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            let (pr, ri) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (x, y) in ri.iter_mut().zip(pr.iter()) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// One solution of `a x = b` (free variables set to `zero`), or `None` if
/// the system is inconsistent.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], zero: &F) -> Option<Vec<F>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![zero.clone(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Field>(a: &[Vec<F>], zero: &F, one: &F) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
