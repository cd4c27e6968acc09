//! Dense matrices over a prime field and their rank.

use crate::gf::{inv_mod_p, mul_mod_p};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> FpMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let nrows = rows.len();
        let data = rows.into_iter().flatten().map(|x| x % p).collect();
        FpMatrix {
            p,
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Rank by row reduction to echelon form.
    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut m = self.data.clone();
        let cols = self.cols;
        let mut pivot_row = 0;
        for c in 0..cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if r != pivot_row {
                for k in c..cols {
                    m.swap(r * cols + k, pivot_row * cols + k);
                }
            }
            let inv = inv_mod_p(m[pivot_row * cols + c], p);
            for k in c..cols {
                let v = &mut m[pivot_row * cols + k];
                *v = mul_mod_p(*v, inv, p);
            }
            for r in pivot_row + 1..self.rows {
                let factor = m[r * cols + c];
                if factor == 0 {
                    continue;
                }
                for k in c..cols {
                    let sub = mul_mod_p(factor, m[pivot_row * cols + k], p);
                    let v = &mut m[r * cols + k];
                    *v = (*v + p - sub) % p;
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// Rank computed on the transpose; must agree with [`FpMatrix::rank`].
    pub fn rank_transposed(&self) -> usize {
        self.transpose().rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let m = FpMatrix::from_rows(2, vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let m = FpMatrix::from_rows(3, vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 3);
        assert_eq!(FpMatrix::zeros(5, 3, 4).rank(), 0);
    }

    proptest! {
        #[test]
        fn row_and_column_rank_agree(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            rows in 1usize..7,
            cols in 1usize..9,
            seed in any::<u64>(),
        ) {
            let mut x = seed;
            let data: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| { x = crate::gf::splitmix(x); x % p }).collect())
                .collect();
            let m = FpMatrix::from_rows(p, data);
            prop_assert_eq!(m.rank(), m.rank_transposed());
            prop_assert!(m.rank() <= rows.min(cols));
        }
    }
}
