//! Small dense square integer matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense `n × n` integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    /// Permutation matrix with a 1 at `(i, sigma[i])` for every row `i`.
    pub fn permutation(sigma: &[usize]) -> Self {
        let mut m = Self::zeros(sigma.len());
        for (i, &j) in sigma.iter().enumerate() {
            m[(i, j)] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `self · diag(d)`: column `j` scaled by `d[j]`.
    pub fn scale_columns(&self, d: &[i64]) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] *= d[j];
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        let overflow = || Error::IntegerOverflow("determinant".into());
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[i * n + j].checked_mul(pivot).ok_or_else(overflow)?;
                    let rhs = a[i * n + k].checked_mul(a[k * n + j]).ok_or_else(overflow)?;
                    a[i * n + j] = lhs.checked_sub(rhs).ok_or_else(overflow)? / prev;
                }
            }
            prev = pivot;
        }
        Ok(sign * a[n * n - 1])
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(m.determinant().unwrap(), 1);
        assert_eq!(IntMatrix::zeros(2).determinant().unwrap(), 0);
        let a3 = IntMatrix::from_rows(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert_eq!(a3.determinant().unwrap(), 0);
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.determinant().unwrap(), 0);
        let m = IntMatrix::from_rows(&[vec![0, 2, 1], vec![1, 3, 2], vec![4, 1, 1]]).unwrap();
        // 0 - 2(1-8) + 1(1-12) = 3
        assert_eq!(m.determinant().unwrap(), 3);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(&[vec![0, 1], vec![0]]).is_err());
    }

    #[test]
    fn permutation_matrix_layout() {
        let p = IntMatrix::permutation(&[1, 0, 2]);
        assert_eq!(p.rows(), vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
    }
}
