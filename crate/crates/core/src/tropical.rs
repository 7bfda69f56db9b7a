//! C-matrices along a mutation sequence and the tropical signs they carry.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exchange::{mutate_matrix, pos, ExchangeData, Sign};
use crate::matrix::IntMatrix;

/// One step of the C-matrix recursion in direction `k`, reading `b_{kj}`
/// from the current exchange matrix `b`.
pub fn c_matrix_step(c: &IntMatrix, b: &IntMatrix, k: usize, d: &[usize]) -> Result<IntMatrix> {
    let n = c.dim();
    if b.dim() != n || d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "C is {n}x{n}, B is {0}x{0}, d has {1} entries",
            b.dim(),
            d.len()
        )));
    }
    if k >= n {
        return Err(Error::DirectionOutOfRange { k, n });
    }
    let dk = d[k] as i64;
    let overflow = || Error::IntegerOverflow(format!("C-matrix step in direction {}", k + 1));
    let mut out = IntMatrix::zeros(n);
    for i in 0..n {
        let cik = c[(i, k)];
        for j in 0..n {
            out[(i, j)] = if j == k {
                -cik
            } else {
                let t1 = pos(cik.checked_mul(-dk).ok_or_else(overflow)?)
                    .checked_mul(b[(k, j)])
                    .ok_or_else(overflow)?;
                let t2 = dk
                    .checked_mul(b[(k, j)])
                    .and_then(|v| cik.checked_mul(pos(v)))
                    .ok_or_else(overflow)?;
                c[(i, j)]
                    .checked_add(t1)
                    .and_then(|v| v.checked_add(t2))
                    .ok_or_else(overflow)?
            };
        }
    }
    Ok(out)
}

/// Common sign of column `j` of `c`, or `None` if it is zero or mixed.
pub fn column_sign(c: &IntMatrix, j: usize) -> Option<Sign> {
    let col = c.column(j);
    let nonneg = col.iter().all(|&x| x >= 0);
    let nonpos = col.iter().all(|&x| x <= 0);
    match (nonneg, nonpos) {
        (true, false) => Some(Sign::Plus),
        (false, true) => Some(Sign::Minus),
        _ => None,
    }
}

fn coherent_sign(c: &IntMatrix, j: usize, step: usize) -> Result<Sign> {
    column_sign(c, j).ok_or_else(|| Error::SignCoherence {
        step,
        column: j,
        kind: if c.column(j).iter().all(|&x| x == 0) {
            "zero"
        } else {
            "mixed-sign"
        },
    })
}

/// `(C, B)` at every vertex of a path from the root, with the tropical sign
/// of the mutated direction at each step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CPattern {
    directions: Vec<usize>,
    c: Vec<IntMatrix>,
    b: Vec<IntMatrix>,
    signs: Vec<Sign>,
}

impl CPattern {
    /// Runs the recursion from `C = I` along `directions`.
    pub fn along(ex: &ExchangeData, directions: &[usize]) -> Result<Self> {
        let n = ex.rank();
        let mut c = vec![IntMatrix::identity(n)];
        let mut b = vec![ex.b().clone()];
        let mut signs = Vec::with_capacity(directions.len());
        for (step, &k) in directions.iter().enumerate() {
            ex.check_direction(k)?;
            let (ct, bt) = (c.last().unwrap(), b.last().unwrap());
            let eps = coherent_sign(ct, k, step)?;
            let next_c = c_matrix_step(ct, bt, k, ex.d())?;
            let next_b = mutate_matrix(bt, k, ex.d()[k] as i64, eps)?;
            signs.push(eps);
            c.push(next_c);
            b.push(next_b);
        }
        Ok(Self {
            directions: directions.to_vec(),
            c,
            b,
            signs,
        })
    }

    pub fn directions(&self) -> &[usize] {
        &self.directions
    }

    /// C-matrix at vertex `t` (0 = root).
    pub fn c(&self, t: usize) -> &IntMatrix {
        &self.c[t]
    }

    pub fn b(&self, t: usize) -> &IntMatrix {
        &self.b[t]
    }

    /// Tropical sign `ε_ℓ` of the direction mutated at step `ℓ` (0-based).
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn final_c(&self) -> &IntMatrix {
        self.c.last().unwrap()
    }

    pub fn final_b(&self) -> &IntMatrix {
        self.b.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Checks that every c-vector at every vertex is nonzero and
    /// sign-coherent.
    pub fn check_all_coherent(&self) -> Result<()> {
        for (t, c) in self.c.iter().enumerate() {
            for j in 0..c.dim() {
                coherent_sign(c, j, t)?;
            }
        }
        Ok(())
    }

    /// If the final C-matrix is a permutation matrix, returns σ with
    /// `C[i][σ(i)] = 1`.
    pub fn final_permutation(&self) -> Option<Vec<usize>> {
        let c = self.final_c();
        let n = c.dim();
        let mut sigma = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<i64> = (0..n).map(|j| c[(i, j)]).collect();
            let ones: Vec<usize> = (0..n).filter(|&j| row[j] == 1).collect();
            if ones.len() != 1 || row.iter().filter(|&&x| x != 0).count() != 1 {
                return None;
            }
            sigma.push(ones[0]);
        }
        let mut seen = vec![false; n];
        for &j in &sigma {
            if seen[j] {
                return None;
            }
            seen[j] = true;
        }
        Some(sigma)
    }
}

/// Tropical signs `ε_ℓ` along `directions` starting from the root.
pub fn tropical_sign_sequence(ex: &ExchangeData, directions: &[usize]) -> Result<Vec<Sign>> {
    Ok(CPattern::along(ex, directions)?.signs)
}
