use super::SkewAlgebroid;
use crate::error::{Error, Result};
use crate::scalar::ScalarField;
use crate::superalg::{same_table, SuperPoly};
use crate::verdict::Verdict;

/// Base-preserving bundle map `Phi(e_i^1) = sum_j Phi_i^j e_j^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidMorphism {
    source: SkewAlgebroid,
    target: SkewAlgebroid,
    matrix: Vec<Vec<ScalarField>>,
}

/// The generator at which the intertwining identity fails, with the
/// difference `Phi^* d2 u - d1 Phi^* u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFailure {
    pub generator: String,
    pub difference: SuperPoly,
}

impl AlgebroidMorphism {
    pub fn new(source: SkewAlgebroid, target: SkewAlgebroid, matrix: Vec<Vec<ScalarField>>) -> Result<Self> {
        if source.chart() != target.chart() {
            return Err(Error::InvalidInput("morphism between algebroids over different charts".into()));
        }
        if matrix.len() != source.rank() || matrix.iter().any(|r| r.len() != target.rank()) {
            return Err(Error::InvalidInput(format!(
                "morphism matrix must be {}x{}",
                source.rank(),
                target.rank()
            )));
        }
        if matrix.iter().flatten().any(|v| v.nvars() != source.base_dim()) {
            return Err(Error::TableMismatch);
        }
        Ok(AlgebroidMorphism { source, target, matrix })
    }

    pub fn identity(a: &SkewAlgebroid) -> Self {
        let n = a.rank();
        let m = a.base_dim();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { ScalarField::one(m) } else { ScalarField::zero(m) })
                    .collect()
            })
            .collect();
        AlgebroidMorphism {
            source: a.clone(),
            target: a.clone(),
            matrix,
        }
    }

    pub fn zero(source: &SkewAlgebroid, target: &SkewAlgebroid) -> Result<Self> {
        let m = source.base_dim();
        let matrix = vec![vec![ScalarField::zero(m); target.rank()]; source.rank()];
        Self::new(source.clone(), target.clone(), matrix)
    }

    pub fn source(&self) -> &SkewAlgebroid {
        &self.source
    }

    pub fn target(&self) -> &SkewAlgebroid {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<ScalarField>] {
        &self.matrix
    }

    /// `Phi^*`: substitutes `y2^j -> sum_i Phi_i^j y1^i`.
    pub fn pullback(&self, w: &SuperPoly) -> Result<SuperPoly> {
        if !same_table(w.table(), self.target.forms_table()) {
            return Err(Error::TableMismatch);
        }
        let images: Vec<SuperPoly> = (0..self.target.rank())
            .map(|j| {
                let mut s = SuperPoly::zero(self.source.forms_table());
                for i in 0..self.source.rank() {
                    s = s.add(&self.source.y(i).scale(&self.matrix[i][j]));
                }
                s
            })
            .collect();
        Ok(w.substitute(self.source.forms_table(), &images, &[]))
    }

    /// Checks `Phi^* d2 = d1 Phi^*` on the generators `x^a` and `y2^j`.
    pub fn is_morphism(&self) -> Verdict<MorphismFailure> {
        let d1 = self.source.de_rham_field();
        let d2 = self.target.de_rham_field();
        let t1 = self.source.forms_table();
        let t2 = self.target.forms_table();
        let names = self.target.chart().names();
        for a in 0..self.target.base_dim() {
            let x2 = SuperPoly::coordinate(t2, a);
            let x1 = SuperPoly::coordinate(t1, a);
            let lhs = self.pullback(&d2.apply(&x2)).expect("target form");
            let rhs = d1.apply(&x1);
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                return Verdict::Fails(MorphismFailure {
                    generator: names[a].clone(),
                    difference: diff,
                });
            }
        }
        for j in 0..self.target.rank() {
            let yj = self.target.y(j);
            let lhs = self.pullback(&d2.apply(&yj)).expect("target form");
            let rhs = d1.apply(&self.pullback(&yj).expect("target form"));
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                return Verdict::Fails(MorphismFailure {
                    generator: t2.odd()[j].name.clone(),
                    difference: diff,
                });
            }
        }
        Verdict::Holds
    }
}
