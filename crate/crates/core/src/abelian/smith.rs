//! Smith normal form over ℤ.
//!
//! `S = U·M·V` with `U`, `V` unimodular and `S` diagonal, `s₀ | s₁ | …`,
//! all diagonal entries non-negative. Pivoting always picks the entry of
//! smallest absolute value in the active block, which keeps intermediate
//! entries small on the sparse 0/±1 matrices that boundary maps produce.

use super::matrix::Matrix;
use crate::scalar::IntScalar;

/// Which transforms to accumulate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const NONE: Track = Track {
        left: false,
        right: false,
    };
    pub const LEFT: Track = Track {
        left: true,
        right: false,
    };
    pub const RIGHT: Track = Track {
        left: false,
        right: true,
    };
    pub const BOTH: Track = Track {
        left: true,
        right: true,
    };
}

#[derive(Clone, Debug)]
pub struct Smith<T: IntScalar> {
    /// Nonzero diagonal entries `s₀ | s₁ | … | s_{r-1}`, all positive.
    pub diagonal: Vec<T>,
    pub rows: usize,
    pub cols: usize,
    pub u: Option<Matrix<T>>,
    pub u_inv: Option<Matrix<T>>,
    pub v: Option<Matrix<T>>,
    pub v_inv: Option<Matrix<T>>,
}

impl<T: IntScalar> Smith<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The full diagonal matrix `S`.
    pub fn s(&self) -> Matrix<T> {
        Matrix::diagonal(self.rows, self.cols, &self.diagonal)
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<T> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

struct Work<T: IntScalar> {
    a: Matrix<T>,
    u: Option<Matrix<T>>,
    u_inv: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
    v_inv: Option<Matrix<T>>,
}

impl<T: IntScalar> Work<T> {
    fn row_add(&mut self, target: usize, source: usize, f: &T) {
        self.a.add_row_multiple(target, source, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(target, source, f);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(source, target, &-f.clone());
        }
    }

    fn col_add(&mut self, target: usize, source: usize, f: &T) {
        self.a.add_col_multiple(target, source, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(target, source, f);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(source, target, &-f.clone());
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    /// Smallest nonzero |entry| in the block `t.., t..`.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.num_rows() {
            for (j, v) in self.a.row(i).iter().enumerate().skip(t) {
                if v.is_zero() {
                    continue;
                }
                let av = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| av < *b) {
                    let unit = av.is_one();
                    best = Some((i, j, av));
                    if unit {
                        let (bi, bj, _) = best.unwrap();
                        return Some((bi, bj));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> Smith<T> {
    smith_with(m, Track::BOTH)
}

pub fn smith_with<T: IntScalar>(m: &Matrix<T>, track: Track) -> Smith<T> {
    let (rows, cols) = (m.num_rows(), m.num_cols());
    let mut w = Work {
        a: m.clone(),
        u: track.left.then(|| Matrix::identity(rows)),
        u_inv: track.left.then(|| Matrix::identity(rows)),
        v: track.right.then(|| Matrix::identity(cols)),
        v_inv: track.right.then(|| Matrix::identity(cols)),
    };
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = w.pivot(t) else {
                break;
            };
            w.row_swap(t, pi);
            w.col_swap(t, pj);
            let p = w.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let x = w.a[(i, t)].clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&p);
                w.row_add(i, t, &-q);
                if !w.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let x = w.a[(t, j)].clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&p);
                w.col_add(j, t, &-q);
                if !w.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the remaining block; otherwise fold the
            // offending row into row t and reduce again.
            let bad = (t + 1..rows).find(|&i| {
                w.a.row(i)
                    .iter()
                    .skip(t + 1)
                    .any(|v| !v.is_zero() && !v.is_multiple_of(&p))
            });
            match bad {
                Some(i) => w.row_add(t, i, &T::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_zero() {
            break;
        }
        if w.a[(t, t)].is_negative() {
            w.row_negate(t);
        }
        diagonal.push(w.a[(t, t)].clone());
    }
    Smith {
        diagonal,
        rows,
        cols,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Rank over ℚ.
pub fn rank<T: IntScalar>(m: &Matrix<T>) -> usize {
    smith_with(m, Track::NONE).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn check<T: IntScalar>(m: &Matrix<T>) -> Smith<T> {
        let s = smith_normal_form(m);
        let (u, v) = (s.u.clone().unwrap(), s.v.clone().unwrap());
        assert_eq!(u.mul(m).mul(&v), s.s());
        assert_eq!(
            u.mul(s.u_inv.as_ref().unwrap()),
            Matrix::identity(m.num_rows())
        );
        assert_eq!(
            v.mul(s.v_inv.as_ref().unwrap()),
            Matrix::identity(m.num_cols())
        );
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn diag_two_three_becomes_one_six() {
        let m = Matrix::<BigInt>::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let s = check(&m);
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&Matrix::<i64>::identity(3));
        assert_eq!(s.diagonal, vec![1, 1, 1]);
        let z = check(&Matrix::<i64>::zeros(2, 4));
        assert!(z.diagonal.is_empty());
    }

    #[test]
    fn empty_shapes() {
        let s = check(&Matrix::<i64>::zeros(0, 3));
        assert_eq!(s.rank(), 0);
        let s = check(&Matrix::<i64>::zeros(3, 0));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn needs_divisibility_fix() {
        let m = Matrix::<i64>::from_i64_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]);
        let s = check(&m);
        assert_eq!(s.diagonal, vec![2, 2, 60]);
    }
}
