use super::SkewAlgebroid;
use crate::error::{Error, Result};
use crate::superalg::{same_table, SuperPoly, SuperVectorField};

impl SkewAlgebroid {
    /// The even derivation `[[e_j, .]]` of the multivector algebra.
    fn frame_derivation(&self, j: usize) -> SuperVectorField {
        let t = &self.multivectors;
        let base = (0..self.base_dim())
            .map(|a| SuperPoly::scalar(t, self.rho(j, a).clone()))
            .collect();
        let odd = (0..self.rank)
            .map(|i| {
                let mut s = SuperPoly::zero(t);
                for k in 0..self.rank {
                    s = s.add(&self.xi(k).scale(self.c(j, i, k)));
                }
                s
            })
            .collect();
        SuperVectorField::new(t, 0, base, odd, Vec::new()).expect("well-formed derivation")
    }

    /// `[[U, .]]` for `U` homogeneous of multivector degree `k`, as a
    /// derivation of parity `k - 1`.
    fn adjoint(&self, u: &SuperPoly, k: u32) -> SuperVectorField {
        let t = &self.multivectors;
        let sign_neg = k % 2 == 0;
        let base = (0..self.base_dim())
            .map(|b| {
                let mut s = SuperPoly::zero(t);
                for i in 0..self.rank {
                    let r = self.rho(i, b);
                    if !r.is_zero() {
                        s = s.add(&u.left_partial_odd(i).scale(r));
                    }
                }
                if sign_neg {
                    s.neg()
                } else {
                    s
                }
            })
            .collect();
        let odd = (0..self.rank)
            .map(|j| self.frame_derivation(j).apply(u).neg())
            .collect();
        SuperVectorField::new(t, (k + 1) as u8 & 1, base, odd, Vec::new())
            .expect("well-formed adjoint derivation")
    }

    /// Schouten bracket of multivectors (polynomials in `xi`), extended
    /// from `[[e_i, e_j]] = c_ij^k e_k` and `[[e_i, f]] = rho(e_i) f` by the
    /// graded Leibniz rule in the second slot.
    pub fn schouten(&self, u: &SuperPoly, v: &SuperPoly) -> Result<SuperPoly> {
        if !same_table(u.table(), &self.multivectors) || !same_table(v.table(), &self.multivectors) {
            return Err(Error::TableMismatch);
        }
        let mut r = SuperPoly::zero(&self.multivectors);
        for k in 0..=self.rank as u32 {
            let uk = u.filter(|key| key.odd_len() == k);
            if uk.is_zero() {
                continue;
            }
            r = r.add(&self.adjoint(&uk, k).apply(v));
        }
        Ok(r)
    }

    /// Multivector `sum_{i<j} p[i][j] e_i e_j` from an antisymmetric matrix.
    pub fn bivector_from_matrix(&self, p: &[Vec<crate::ScalarField>]) -> SuperPoly {
        let mut s = SuperPoly::zero(&self.multivectors);
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                s = s.add(&self.xi(i).mul(&self.xi(j)).scale(&p[i][j]));
            }
        }
        s
    }

}
