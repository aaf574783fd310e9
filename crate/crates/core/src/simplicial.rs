//! Truncated simplicial abelian groups given by presented levels and
//! face/degeneracy maps.

use crate::abelian::{Complex, Matrix};
use crate::error::{Error, Result};
use crate::{AbHom, ChainComplex, FpAbelianGroup};

/// Levels `G_0, …, G_top`; `faces[n][i] = dᵢ : G_n → G_{n−1}` (empty for
/// `n = 0`) and `degeneracies[n][i] = sᵢ : G_n → G_{n+1}` for `n < top`.
#[derive(Clone, Debug)]
pub struct SimplicialAbelianGroup {
    levels: Vec<FpAbelianGroup>,
    faces: Vec<Vec<AbHom>>,
    degeneracies: Vec<Vec<AbHom>>,
}

impl SimplicialAbelianGroup {
    pub fn new(levels: Vec<FpAbelianGroup>, faces: Vec<Vec<AbHom>>, degeneracies: Vec<Vec<AbHom>>) -> Result<Self> {
        let top = levels.len().checked_sub(1).ok_or_else(|| Error::Input("no levels".into()))?;
        if faces.len() != top + 1 || degeneracies.len() != top + 1 {
            return Err(Error::Input("face/degeneracy tables do not match the levels".into()));
        }
        for n in 0..=top {
            let nf = if n == 0 { 0 } else { n + 1 };
            let nd = if n == top { 0 } else { n + 1 };
            if faces[n].len() != nf || degeneracies[n].len() != nd {
                return Err(Error::Input(format!("wrong number of operators at level {n}")));
            }
        }
        Ok(SimplicialAbelianGroup {
            levels,
            faces,
            degeneracies,
        })
    }

    /// `G` in every level with identity operators.
    pub fn constant(g: &FpAbelianGroup, top: usize) -> Self {
        let id = AbHom::identity(g);
        Self::new(
            vec![g.clone(); top + 1],
            (0..=top).map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }]).collect(),
            (0..=top).map(|n| vec![id.clone(); if n == top { 0 } else { n + 1 }]).collect(),
        )
        .expect("consistent shape")
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &FpAbelianGroup {
        &self.levels[n]
    }

    pub fn face(&self, n: usize, i: usize) -> &AbHom {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &AbHom {
        &self.degeneracies[n][i]
    }

    /// All simplicial identities among the stored operators.
    pub fn check_identities(&self) -> Result<()> {
        let fail = |what: String| Err(Error::PreconditionFailed(format!("simplicial identity fails: {what}")));
        let top = self.top();
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    // dᵢ dⱼ = dⱼ₋₁ dᵢ
                    let l = self.faces[n][j].then(&self.faces[n - 1][i]);
                    let r = self.faces[n][i].then(&self.faces[n - 1][j - 1]);
                    if !l.same_as(&r) {
                        return fail(format!("d{i} d{j} on level {n}"));
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let l = self.degeneracies[n][j].then(&self.faces[n + 1][i]);
                    let ok = if i < j {
                        l.same_as(&self.faces[n][i].then(&self.degeneracies[n - 1][j - 1]))
                    } else if i == j || i == j + 1 {
                        l.same_as(&AbHom::identity(&self.levels[n]))
                    } else {
                        l.same_as(&self.faces[n][i - 1].then(&self.degeneracies[n - 1][j]))
                    };
                    if !ok {
                        return fail(format!("d{i} s{j} on level {n}"));
                    }
                }
            }
            if n + 1 < top {
                for j in 0..=n {
                    for i in 0..=j {
                        // sᵢ sⱼ = sⱼ₊₁ sᵢ
                        let l = self.degeneracies[n][j].then(&self.degeneracies[n + 1][i]);
                        let r = self.degeneracies[n][i].then(&self.degeneracies[n + 1][j + 1]);
                        if !l.same_as(&r) {
                            return fail(format!("s{i} s{j} on level {n}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `∂ = Σ (−1)ⁱ dᵢ` on the full levels.
    pub fn alternating_complex(&self) -> Result<ChainComplex> {
        let diffs = (1..=self.top())
            .map(|n| {
                let mut acc = Matrix::zeros(self.levels[n - 1].num_generators(), self.levels[n].num_generators());
                for (i, f) in self.faces[n].iter().enumerate() {
                    acc = if i % 2 == 0 { acc.add(f.matrix()) } else { acc.sub(f.matrix()) };
                }
                acc
            })
            .collect();
        Complex::new(self.levels.clone(), diffs)
    }
}
