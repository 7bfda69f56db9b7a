//! Search for σ-periodicities by breadth-first enumeration of reduced words.
//!
//! A word is a candidate when its final C-matrix is a permutation matrix;
//! the permutation read off it is σ. Candidates are then filtered by the
//! exchange matrix, the degrees, the z-parity condition, and a numerical
//! check of the seed mutation at random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exchange::{
    check_sigma_periodicity, mutate_matrix, validate_z_parity, DegreeTable, ExchangeData,
    MutationSequence, Permutation, Seed,
};
use crate::matrix::IntMatrix;
use crate::tropical::{c_matrix_step, column_sign, tropical_sign_sequence};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    /// Maximum number of BFS nodes expanded before giving up.
    pub budget: usize,
    /// Random points used to confirm a candidate numerically.
    pub draws: usize,
    /// Relative tolerance of the numerical confirmation.
    pub tol: f64,
    pub rng_seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            draws: 3,
            tol: 1e-9,
            rng_seed: 0x5eed,
        }
    }
}

/// A random seed with `y_i` log-uniform in `[1/3, 3]` and `z_{i,s}` uniform
/// in `[0, 3]`.
pub fn random_seed(ex: &ExchangeData, rng: &mut impl Rng) -> Result<Seed> {
    let y = (0..ex.rank()).map(|_| rng.gen_range(-3f64.ln()..3f64.ln()).exp()).collect();
    let z = DegreeTable::from_fn(ex.d(), |_, _| rng.gen_range(0.0..3.0));
    Seed::new(ex.clone(), y, z)
}

/// Checks a candidate numerically at `draws` random points.
pub fn confirm_numerically(
    ex: &ExchangeData,
    seq: &MutationSequence,
    draws: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<bool> {
    let signs = tropical_sign_sequence(ex, seq.directions())?;
    for _ in 0..draws {
        let start = random_seed(ex, rng)?;
        if !check_sigma_periodicity(&start, seq, &signs, tol)?.periodic {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Node {
    word: Vec<usize>,
    c: IntMatrix,
    b: IntMatrix,
}

fn permutation_of(c: &IntMatrix) -> Option<Vec<usize>> {
    let n = c.dim();
    let mut sigma = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            match c[(i, j)] {
                0 => {}
                1 if sigma[i] == usize::MAX && !hit[j] => {
                    sigma[i] = j;
                    hit[j] = true;
                }
                _ => return None,
            }
        }
    }
    sigma.iter().all(|&j| j != usize::MAX).then_some(sigma)
}

/// All σ-periodicities of minimal length `≤ max_len` among words without
/// immediate repetitions, in lexicographic order. Empty if none exists up to
/// `max_len`.
pub fn find_period(ex: &ExchangeData, max_len: usize, opts: &SearchOptions) -> Result<Vec<MutationSequence>> {
    let n = ex.rank();
    let d = ex.d();
    let b0 = ex.b();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let mut frontier = vec![Node {
        word: vec![],
        c: IntMatrix::identity(n),
        b: b0.clone(),
    }];
    let mut explored = 0usize;
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * n.saturating_sub(1));
        let mut found = Vec::new();
        for node in &frontier {
            for k in 0..n {
                if node.word.last() == Some(&k) {
                    continue;
                }
                explored += 1;
                if explored > opts.budget {
                    return Err(Error::SearchBudget { explored: explored - 1 });
                }
                let step = node.word.len();
                let eps = column_sign(&node.c, k).ok_or(Error::SignCoherence {
                    step,
                    column: k,
                    kind: "mixed-sign",
                })?;
                let c = c_matrix_step(&node.c, &node.b, k, d)?;
                let b = mutate_matrix(&node.b, k, d[k] as i64, eps)?;
                let mut word = node.word.clone();
                word.push(k);
                if let Some(sigma) = permutation_of(&c) {
                    let matrix_ok = (0..n).all(|i| (0..n).all(|j| b[(sigma[i], sigma[j])] == b0[(i, j)]));
                    let degrees_ok = (0..n).all(|i| d[sigma[i]] == d[i]);
                    if matrix_ok && degrees_ok {
                        let seq = MutationSequence::new(word.clone(), Permutation::new(sigma)?)?;
                        if validate_z_parity(&seq, ex)
                            && confirm_numerically(ex, &seq, opts.draws, opts.tol, &mut rng)?
                        {
                            found.push(seq);
                        }
                    }
                }
                next.push(Node { word, c, b });
            }
        }
        if !found.is_empty() {
            return Ok(found);
        }
        frontier = next;
    }
    Ok(vec![])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(rows: &[Vec<i64>], r: Vec<i64>, d: Vec<usize>) -> ExchangeData {
        ExchangeData::new(IntMatrix::from_rows(rows).unwrap(), r, d).unwrap()
    }

    #[test]
    fn permutation_reading() {
        assert_eq!(permutation_of(&IntMatrix::permutation(&[2, 0, 1])), Some(vec![2, 0, 1]));
        assert_eq!(permutation_of(&IntMatrix::identity(3)), Some(vec![0, 1, 2]));
        let m = IntMatrix::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(permutation_of(&m), None);
        let m = IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]).unwrap();
        assert_eq!(permutation_of(&m), None);
    }

    #[test]
    fn a2_both_words() {
        let e = ex(&[vec![0, 1], vec![-1, 0]], vec![1, 1], vec![1, 1]);
        let found = find_period(&e, 12, &SearchOptions::default()).unwrap();
        let words: Vec<_> = found.iter().map(|s| s.directions().to_vec()).collect();
        assert_eq!(words, vec![vec![0, 1, 0, 1, 0], vec![1, 0, 1, 0, 1]]);
        assert_eq!(found[0].sigma().images(), &[1, 0]);
    }

    #[test]
    fn generalized_period_six() {
        let e = ex(&[vec![0, 1], vec![-1, 0]], vec![1, 1], vec![2, 1]);
        let found = find_period(&e, 12, &SearchOptions::default()).unwrap();
        assert_eq!(found[0].len(), 6);
        assert!(found.iter().all(|s| s.sigma().is_identity()));
    }

    #[test]
    fn budget_exhaustion() {
        let e = ex(&[vec![0, 2], vec![-2, 0]], vec![1, 1], vec![1, 1]);
        let opts = SearchOptions { budget: 10, ..SearchOptions::default() };
        assert!(matches!(find_period(&e, 20, &opts), Err(Error::SearchBudget { .. })));
    }

    #[test]
    fn affine_type_has_no_short_period() {
        let e = ex(&[vec![0, 2], vec![-2, 0]], vec![1, 1], vec![1, 1]);
        assert!(find_period(&e, 10, &SearchOptions::default()).unwrap().is_empty());
    }
}
