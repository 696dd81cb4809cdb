//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences. Results are monic in graded-lex order.

use super::poly::Poly;

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    let Some(var) = (0..n).rev().find(|&v| a.contains_var(v) || b.contains_var(v)) else {
        return Poly::one(n);
    };
    match (a.contains_var(var), b.contains_var(var)) {
        (true, false) => return gcd(&content(a, var), b),
        (false, true) => return gcd(a, &content(b, var)),
        _ => {}
    }
    let ca = content(a, var);
    let cb = content(b, var);
    let pa = primitive_part(a, var, &ca);
    let pb = primitive_part(b, var, &cb);
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, var);
    c.mul(&g).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content(p: &Poly, var: usize) -> Poly {
    let mut acc = Poly::zero(p.nvars());
    for c in p.coefficients_in(var) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return Poly::one(p.nvars());
        }
    }
    acc
}

fn primitive_part(p: &Poly, var: usize, content: &Poly) -> Poly {
    let _ = var;
    if content.is_one() {
        return p.clone();
    }
    p.div_exact(content).expect("content divides polynomial")
}

/// Pseudo-remainder of `a` by `b` in `var`.
fn pseudo_remainder(a: &Poly, b: &Poly, var: usize) -> Poly {
    let n = a.nvars();
    let bc = b.coefficients_in(var);
    let db = bc.len() - 1;
    let lcb = bc[db].clone();
    let mut r = a.coefficients_in(var);
    while r.len() > db && !r.iter().all(Poly::is_zero) {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        if lcr.is_zero() {
            r.pop();
            continue;
        }
        let shift = dr - db;
        let mut next: Vec<Poly> = r.iter().map(|c| c.mul(&lcb)).collect();
        for (i, c) in bc.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&c.mul(&lcr));
        }
        next.pop();
        while next.last().is_some_and(Poly::is_zero) {
            next.pop();
        }
        r = next;
    }
    Poly::from_coefficients_in(n, var, &r)
}

fn primitive_prs(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&a, &b, var);
        if r.is_zero() {
            return b.monic();
        }
        if !r.contains_var(var) {
            return Poly::one(a.nvars());
        }
        let c = content(&r, var);
        a = b;
        b = primitive_part(&r, var, &c).monic();
    }
}
