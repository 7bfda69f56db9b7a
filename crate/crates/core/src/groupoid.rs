//! Groupoid seeds: seeds extended by q- and a-variables, the action map β,
//! and groupoid mutation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dilog::kernel_integral;
use crate::error::{Error, Result};
use crate::exchange::{pos, rel_dev, DegreeTable, Seed, Sign};
use crate::quad::QuadratureConfig;

/// A groupoid seed `(B, y, z, q, a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidSeed {
    base: Seed,
    q: Vec<f64>,
    a: DegreeTable,
}

impl GroupoidSeed {
    pub fn new(base: Seed, q: Vec<f64>, a: DegreeTable) -> Result<Self> {
        let n = base.rank();
        if q.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} q-variables for rank {n}",
                q.len()
            )));
        }
        if let Some(i) = q.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeed(format!("q_{} is not finite", i + 1)));
        }
        let a = DegreeTable::from_vecs(base.exchange().d(), a.rows().to_vec())?;
        if a.iter().any(|(_, _, v)| !v.is_finite()) {
            return Err(Error::InvalidSeed("a-variables must be finite".into()));
        }
        Ok(Self { base, q, a })
    }

    /// Extension with `q = 0` and `a = 0`.
    pub fn trivial(base: Seed) -> Self {
        let n = base.rank();
        let a = DegreeTable::zeros(base.exchange().d());
        Self {
            base,
            q: vec![0.0; n],
            a,
        }
    }

    pub fn base(&self) -> &Seed {
        &self.base
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn a(&self) -> &DegreeTable {
        &self.a
    }

    /// Exponents `h_j = Σ_i r_i b_{ij} y_i q_i`, so that `β(y_j) = y_j e^{h_j}`.
    pub fn beta_exponents(&self) -> Vec<f64> {
        let s = &self.base;
        let (b, r, y) = (s.b(), s.exchange().r(), s.y());
        let n = s.rank();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| r[i] as f64 * b[(i, j)] as f64 * y[i] * self.q[i])
                    .sum()
            })
            .collect()
    }

    /// `β(y_j)` for every `j`.
    pub fn beta_y(&self) -> Result<Vec<f64>> {
        self.beta_exponents()
            .iter()
            .zip(self.base.y())
            .enumerate()
            .map(|(j, (h, y))| {
                let v = y * h.exp();
                if v.is_finite() && v > 0.0 {
                    Ok(v)
                } else {
                    Err(Error::NumericRange(format!("β(y_{}) = {v}", j + 1)))
                }
            })
            .collect()
    }

    /// The seed `(B, βy, z)`.
    pub fn beta_action(&self) -> Result<Seed> {
        self.base.with_y(self.beta_y()?)
    }

    /// Groupoid mutation in direction `k` with sign `eps`.
    pub fn mutate(&self, k: usize, eps: Sign, quad: &QuadratureConfig) -> Result<Self> {
        let base = self.base.mutate(k, eps)?;
        let s = &self.base;
        let n = s.rank();
        let b = s.b();
        let y = s.y();
        let e = eps.value();
        let dk = s.exchange().d()[k];
        let rk = s.exchange().r()[k] as f64;
        let pk = s.exchange_poly(k);
        let yk = y[k];
        let beta_yk = yk * self.beta_exponents()[k].exp();
        let yk_eps = yk.powi(e as i32);
        let beta_yk_eps = beta_yk.powi(e as i32);
        if !(beta_yk_eps.is_finite() && beta_yk_eps > 0.0) {
            return Err(Error::NumericRange(format!("β(y_{})^ε = {beta_yk_eps}", k + 1)));
        }

        let pcirc_y = pk.pcirc_value(eps, yk_eps);
        let log_ratio = pk.pcirc_value(eps, beta_yk_eps).ln() - pcirc_y.ln();
        let mut q = Vec::with_capacity(n);
        for i in 0..n {
            let bki = b[(k, i)];
            let v = if i == k {
                let linear: f64 = (0..n)
                    .map(|j| pos(e * dk as i64 * b[(k, j)]) as f64 * self.q[j] * y[j] * yk)
                    .sum();
                -self.q[k] * yk * yk + linear + yk / rk * log_ratio
            } else {
                self.q[i] * yk.powi(-pos(e * dk as i64 * bki) as i32) * pcirc_y.powi(bki as i32)
            };
            if !v.is_finite() {
                return Err(Error::NumericRange(format!("q_{} after mutation is {v}", i + 1)));
            }
            q.push(v);
        }

        let mut a = self.a.clone();
        for s_idx in 1..dk {
            let integral = kernel_integral(&pk, dk - s_idx, eps, yk_eps, beta_yk_eps, quad)?;
            a.set(k, s_idx, self.a.get(k, dk - s_idx) + eps.as_f64() / rk * integral);
        }
        Ok(Self { base, q, a })
    }
}

/// Result of comparing `β ∘ μ_k` with `μ_k ∘ β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityReport {
    pub direction: usize,
    pub sign: Sign,
    pub max_rel_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Applies β after groupoid mutation and compares with the seed mutation of
/// the β-acted seed, componentwise on `y`.
pub fn verify_action_commutes(
    g: &GroupoidSeed,
    k: usize,
    eps: Sign,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<CompatibilityReport> {
    let after = g.mutate(k, eps, quad)?.beta_action()?;
    let before = g.beta_action()?.mutate(k, eps)?;
    let max_rel_deviation = after
        .y()
        .iter()
        .zip(before.y())
        .map(|(a, b)| rel_dev(*a, *b))
        .fold(0.0, f64::max);
    Ok(CompatibilityReport {
        direction: k,
        sign: eps,
        max_rel_deviation,
        tolerance: tol,
        pass: max_rel_deviation <= tol,
    })
}

/// Solves `Σ_i r_i b_{ij} y_i q_i = -λ` for all `j`, i.e.
/// `-R B diag(y) q = (-λ, …, -λ)`, so that `β(y_j) = y_j e^{-λ}`.
pub fn solve_q_for_uniform_shift(seed: &Seed, lambda: f64) -> Result<Vec<f64>> {
    if !seed.exchange().is_full_rank()? {
        return Err(Error::NotFullRank);
    }
    let n = seed.rank();
    let (b, r, y) = (seed.b(), seed.exchange().r(), seed.y());
    let m = DMatrix::from_fn(n, n, |i, j| r[i] as f64 * b[(i, j)] as f64 * y[j]);
    let rhs = DVector::from_element(n, lambda);
    let q = m.lu().solve(&rhs).ok_or(Error::NotFullRank)?;
    Ok(q.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::ExchangeData;
    use crate::matrix::IntMatrix;

    fn a2_seed(y: Vec<f64>) -> Seed {
        let ex = ExchangeData::skew_symmetric(IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap(), vec![1, 1]).unwrap();
        Seed::with_zero_z(ex, y).unwrap()
    }

    fn seed21(y: Vec<f64>, z: f64) -> Seed {
        let ex = ExchangeData::skew_symmetric(IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap(), vec![2, 1]).unwrap();
        Seed::new(ex, y, DegreeTable::from_vecs(&[2, 1], vec![vec![z], vec![]]).unwrap()).unwrap()
    }

    #[test]
    fn zero_q_is_identity_action() {
        let g = GroupoidSeed::trivial(seed21(vec![2.0, 3.0], 1.0));
        assert_eq!(g.beta_y().unwrap(), vec![2.0, 3.0]);
    }

    #[test]
    fn beta_hand_evaluated() {
        let g = GroupoidSeed::new(a2_seed(vec![1.0, 1.0]), vec![-1.0, 1.0], DegreeTable::zeros(&[1, 1])).unwrap();
        let by = g.beta_y().unwrap();
        let e = (-1.0f64).exp();
        assert!((by[0] - e).abs() < 1e-15 && (by[1] - e).abs() < 1e-15);
    }

    #[test]
    fn zero_q_mutation_keeps_q_and_swaps_a() {
        let s = seed21(vec![2.0, 3.0], 1.0);
        let g = GroupoidSeed::new(s, vec![0.0, 0.0], DegreeTable::from_vecs(&[2, 1], vec![vec![0.25], vec![]]).unwrap()).unwrap();
        let q = QuadratureConfig::default();
        for eps in [Sign::Plus, Sign::Minus] {
            let m = g.mutate(0, eps, &q).unwrap();
            assert_eq!(m.q(), &[0.0, 0.0]);
            assert_eq!(m.a().get(0, 1), 0.25);
        }
    }

    #[test]
    fn a_update_is_a_quadrature_of_the_kernel() {
        // ∫_2^{2e^{0.6}} du / (1 + u + u²) in closed form:
        // (2/√3) [atan((2u+1)/√3)] between the bounds
        let s = seed21(vec![2.0, 3.0], 1.0);
        let g = GroupoidSeed::new(s, vec![0.1, -0.2], DegreeTable::zeros(&[2, 1])).unwrap();
        let m = g.mutate(0, Sign::Plus, &QuadratureConfig::default()).unwrap();
        let upper = 2.0 * 0.6f64.exp();
        let r3 = 3f64.sqrt();
        let anti = |u: f64| 2.0 / r3 * ((2.0 * u + 1.0) / r3).atan();
        let expected = anti(upper) - anti(2.0);
        assert!((m.a().get(0, 1) - expected).abs() < 1e-12);
    }

    #[test]
    fn uniform_shift_hand_solved() {
        let q = solve_q_for_uniform_shift(&a2_seed(vec![1.0, 1.0]), 1.0).unwrap();
        assert!((q[0] + 1.0).abs() < 1e-15 && (q[1] - 1.0).abs() < 1e-15);
        let q = solve_q_for_uniform_shift(&a2_seed(vec![1.0, 1.0]), 1e-9).unwrap();
        assert!(q.iter().all(|v| v.abs() < 1e-8));
    }

    #[test]
    fn uniform_shift_rejects_singular() {
        let ex = ExchangeData::skew_symmetric(IntMatrix::zeros(2), vec![1, 1]).unwrap();
        let s = Seed::with_zero_z(ex, vec![1.0, 2.0]).unwrap();
        assert_eq!(solve_q_for_uniform_shift(&s, 1.0), Err(Error::NotFullRank));
    }

    #[test]
    fn commutes_with_zero_q() {
        let g = GroupoidSeed::trivial(seed21(vec![0.4, 2.5], 0.3));
        for eps in [Sign::Plus, Sign::Minus] {
            let rep = verify_action_commutes(&g, 1, eps, &QuadratureConfig::default(), 1e-12).unwrap();
            assert!(rep.pass);
        }
    }
}
