use serde::{Deserialize, Serialize};

use super::field::{Field, Symbol};
use crate::error::{Error, Result};

/// Dense row-major matrix of field elements. Arithmetic takes the field as an
/// argument; the matrix itself is just storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Symbol>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Symbol>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Symbol>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Symbol {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Symbol) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Symbol> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Symbol>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Rows picked in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            entries.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            entries,
        }
    }

    pub fn mul_vec(&self, f: &Field, x: &[Symbol]) -> Result<Vec<Symbol>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&g, &v)| acc ^ f.mul(g, v))
            })
            .collect())
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) ^ f.mul(a, other.get(k, c));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// nonzero row, in order.
    pub fn row_reduce(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = f.inv(self.get(lead, c)).expect("pivot is nonzero");
            for cc in 0..self.cols {
                let v = f.mul(self.get(lead, cc), inv);
                self.set(lead, cc, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, c);
                if r == lead || factor == 0 {
                    continue;
                }
                for cc in 0..self.cols {
                    let v = self.get(r, cc) ^ f.mul(factor, self.get(lead, cc));
                    self.set(r, cc, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().row_reduce(f).len()
    }

    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.row_reduce(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            let rank = pivots.iter().filter(|&&p| p < n).count();
            return Err(Error::RankDeficient { rank, k: n });
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf16() -> Field {
        Field::canonical(4).unwrap()
    }

    #[test]
    fn inverse_of_identity_is_identity() {
        let f = gf16();
        assert_eq!(Matrix::identity(3).inverse(&f).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let f = gf16();
        let m = Matrix::from_rows(&[vec![1, 2], vec![2, f.mul(2, 2)]]).unwrap();
        assert_eq!(m.rank(&f), 1);
        assert!(matches!(m.inverse(&f), Err(Error::RankDeficient { rank: 1, k: 2 })));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(Matrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
    }

    fn square(n: usize) -> impl Strategy<Value = Vec<Symbol>> {
        proptest::collection::vec(0u16..16, n * n)
    }

    proptest! {
        #[test]
        fn inverse_times_matrix_is_identity(entries in square(4)) {
            let f = gf16();
            let m = Matrix::from_entries(4, 4, entries).unwrap();
            match m.inverse(&f) {
                Ok(inv) => {
                    prop_assert_eq!(inv.mul(&f, &m).unwrap(), Matrix::identity(4));
                    prop_assert_eq!(m.rank(&f), 4);
                }
                Err(_) => prop_assert!(m.rank(&f) < 4),
            }
        }

        #[test]
        fn rank_is_transpose_invariant(entries in proptest::collection::vec(0u16..16, 12)) {
            let f = gf16();
            let m = Matrix::from_entries(3, 4, entries).unwrap();
            prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
        }
    }
}
