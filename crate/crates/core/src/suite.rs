//! Runs every applicable check on a periodicity at seeded random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dilog::DilogConfig;
use crate::error::Result;
use crate::exchange::{check_sigma_periodicity, DegreeTable, Sign};
use crate::groupoid::{verify_action_commutes, GroupoidSeed};
use crate::identities::{
    verify_a_periodicity_sum, verify_analogues_sum, verify_companion_dilog,
    verify_constancy_derivative, verify_dilog_identity_eps, verify_dilog_identity_no_eps,
    verify_groupoid_periodicity, verify_wedge_symmetry, verify_z_derivative_theorem,
    PeriodicityInstance, VerificationReport,
};
use crate::quad::QuadratureConfig;
use crate::search::random_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance of the identity checks.
    pub tol: f64,
    /// Absolute tolerance requested from every quadrature.
    pub quad_tol: f64,
    /// Number of extra random initial `y` for spread checks.
    pub spread_draws: usize,
    /// Step of the finite differences in `z`.
    pub fd_step: f64,
    /// Tolerance of the finite-difference comparisons.
    pub fd_tol: f64,
    pub rng_seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            quad_tol: 1e-11,
            spread_draws: 10,
            fd_step: 1e-4,
            fd_tol: 1e-6,
            rng_seed: 2024,
        }
    }
}

impl VerifyOptions {
    pub fn quad(&self) -> QuadratureConfig {
        QuadratureConfig::with_tol(self.quad_tol)
    }

    pub fn dilog(&self) -> DilogConfig {
        DilogConfig::with_quad(self.quad())
    }
}

/// `q_i` uniform in `[-0.3, 0.3]`.
pub fn random_q(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect()
}

/// `y_i` log-uniform in `[1/3, 3]`.
pub fn random_y(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-3f64.ln()..3f64.ln()).exp()).collect()
}

/// All checks on `inst`, starting from its own initial seed; random data
/// (extra `y`, `q`, `a`) is drawn from a generator seeded by `opts`.
pub fn verify_all(inst: &PeriodicityInstance, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let quad = opts.quad();
    let cfg = opts.dilog();
    let tol = opts.tol;
    let start = inst.start();
    let n = start.rank();
    let ex = start.exchange();
    let mut out = Vec::new();

    let p = check_sigma_periodicity(start, inst.sequence(), inst.signs(), tol)?;
    let dev = p.max_y_deviation.max(p.max_z_deviation);
    let report = VerificationReport::new("sigma-periodicity", vec![p.max_y_deviation], vec![p.max_z_deviation], dev, tol);
    out.push(if p.matrix_matches { report } else { report.failed("exchange matrix does not return") });

    out.push(verify_dilog_identity_eps(inst, &cfg, tol)?);
    let alternatives: Vec<Vec<f64>> = (0..opts.spread_draws).map(|_| random_y(n, &mut rng)).collect();
    out.push(verify_dilog_identity_no_eps(inst, &alternatives, &cfg, tol)?);
    out.push(verify_companion_dilog(inst, tol)?);

    let q = random_q(n, &mut rng);
    let a = DegreeTable::from_fn(ex.d(), |_, _| rng.gen_range(-1.0..1.0));
    out.push(verify_groupoid_periodicity(inst, &q, &a, &quad, tol)?);
    let g = GroupoidSeed::new(start.clone(), q.clone(), a)?;
    for k in 0..n {
        for eps in [Sign::Plus, Sign::Minus] {
            let c = verify_action_commutes(&g, k, eps, &quad, tol)?;
            out.push(VerificationReport::new(
                format!("action-commutes[k={},{}]", k + 1, eps),
                vec![],
                vec![],
                c.max_rel_deviation,
                tol,
            ));
        }
    }

    for (j, &dj) in ex.d().iter().enumerate() {
        for s in 1..dj {
            out.push(verify_a_periodicity_sum(inst, &q, j, s, &quad, tol)?);
            out.push(verify_analogues_sum(inst, j, s, &quad, tol)?);
            let z0 = start.z().get(j, s);
            out.push(verify_wedge_symmetry(inst, j, s, z0, z0 + 0.75, tol)?);
            if z0 > 2.0 * opts.fd_step {
                out.push(verify_z_derivative_theorem(inst, j, s, opts.fd_step, &cfg, opts.fd_tol)?);
                out.push(verify_constancy_derivative(inst, j, s, opts.fd_step, &cfg, opts.fd_tol)?);
            }
        }
    }
    Ok(out)
}

/// [`verify_all`] at a random initial seed of `inst`'s exchange data.
pub fn verify_all_random(inst: &PeriodicityInstance, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed ^ 0x9e37_79b9);
    let start = random_seed(inst.start().exchange(), &mut rng)?;
    verify_all(&inst.with_start(start)?, opts)
}
