//! Numerical verification of the dilogarithm and integral identities
//! attached to a proper periodicity of seed mutations.
//!
//! Every verifier returns a [`VerificationReport`]; only genuine failures of
//! the engine (quadrature, overflow, shape errors) surface as `Err`.

use serde::{Deserialize, Serialize};

use crate::dilog::{
    kernel_integral, pcirc_transform, rogers_dilog, rogers_dilog_higher, rogers_dilog_infinity,
    DilogConfig,
};
use crate::error::{Error, Result};
use crate::exchange::{seeds_along, DegreeTable, MutationSequence, Seed, Sign};
use crate::groupoid::GroupoidSeed;
use crate::quad::QuadratureConfig;
use crate::tropical::tropical_sign_sequence;

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, lhs: Vec<f64>, rhs: Vec<f64>, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
            note: None,
        }
    }

    /// A check with nothing to test; passes with zero deviation.
    pub fn vacuous(name: impl Into<String>, why: impl Into<String>, tolerance: f64) -> Self {
        Self {
            note: Some(format!("vacuous: {}", why.into())),
            ..Self::new(name, vec![], vec![], 0.0, tolerance)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Marks the report failed regardless of the deviation.
    pub fn failed(mut self, why: impl Into<String>) -> Self {
        self.pass = false;
        self.note = Some(why.into());
        self
    }
}

/// A periodicity candidate with its tropical signs `ε_ℓ` from the root.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityInstance {
    start: Seed,
    seq: MutationSequence,
    signs: Vec<Sign>,
}

impl PeriodicityInstance {
    pub fn new(start: Seed, seq: MutationSequence) -> Result<Self> {
        if seq.sigma().len() != start.rank() {
            return Err(Error::DimensionMismatch(format!(
                "permutation on {} points for rank {}",
                seq.sigma().len(),
                start.rank()
            )));
        }
        let signs = tropical_sign_sequence(start.exchange(), seq.directions())?;
        Ok(Self { start, seq, signs })
    }

    /// Same exchange data and sequence, different initial `y` and `z`.
    pub fn with_start(&self, start: Seed) -> Result<Self> {
        if start.exchange() != self.start.exchange() {
            return Err(Error::InvalidSeed(
                "replacement start has different exchange data".into(),
            ));
        }
        Ok(Self {
            start,
            seq: self.seq.clone(),
            signs: self.signs.clone(),
        })
    }

    pub fn with_y(&self, y: Vec<f64>) -> Result<Self> {
        self.with_start(self.start.with_y(y)?)
    }

    pub fn with_z(&self, z: DegreeTable) -> Result<Self> {
        self.with_start(self.start.with_z(z)?)
    }

    pub fn start(&self) -> &Seed {
        &self.start
    }

    pub fn sequence(&self) -> &MutationSequence {
        &self.seq
    }

    pub fn directions(&self) -> &[usize] {
        self.seq.directions()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// `seed[1], …, seed[M+1]` mutated with the tropical signs.
    pub fn seeds(&self) -> Result<Vec<Seed>> {
        seeds_along(&self.start, self.seq.directions(), &self.signs)
    }

    /// `s°_ℓ` for the occurrences of direction `j`.
    pub fn s_circ(&self, j: usize, s: usize) -> Vec<usize> {
        s_circ_sequence(self.seq.directions(), j, s, self.start.exchange().d()[j])
    }

    fn r(&self, k: usize) -> f64 {
        self.start.exchange().r()[k] as f64
    }

    fn check_index(&self, j: usize, s: usize) -> Result<()> {
        let d = self.start.exchange().d();
        if j >= d.len() {
            return Err(Error::DirectionOutOfRange { k: j, n: d.len() });
        }
        if s < 1 || s >= d[j] {
            return Err(Error::Domain(format!(
                "index s = {s} outside 1..={} for direction {}",
                d[j] - 1,
                j + 1
            )));
        }
        Ok(())
    }

    fn full_rank_note(&self) -> Result<Option<String>> {
        Ok(if self.start.exchange().is_full_rank()? {
            None
        } else {
            Some("B[1] is not of full rank; identity checked regardless".into())
        })
    }
}

/// `s°_ℓ` over the occurrences `ℓ` of `j` in `directions`: `s` after an even
/// number of earlier occurrences, `d_j - s` after an odd number.
pub fn s_circ_sequence(directions: &[usize], j: usize, s: usize, dj: usize) -> Vec<usize> {
    directions
        .iter()
        .filter(|&&k| k == j)
        .enumerate()
        .map(|(prior, _)| if prior % 2 == 0 { s } else { dj - s })
        .collect()
}

/// Runs the groupoid mutation chain with the tropical signs; returns
/// `M + 1` groupoid seeds.
pub fn groupoid_chain(
    inst: &PeriodicityInstance,
    q0: &[f64],
    a0: &DegreeTable,
    quad: &QuadratureConfig,
) -> Result<Vec<GroupoidSeed>> {
    let mut chain = vec![GroupoidSeed::new(inst.start.clone(), q0.to_vec(), a0.clone())?];
    for (&k, &eps) in inst.directions().iter().zip(inst.signs()) {
        let next = chain.last().unwrap().mutate(k, eps, quad)?;
        chain.push(next);
    }
    Ok(chain)
}

/// σ-periodicity of the groupoid chain: `q_{σ(i)}[M+1] = q_i[1]` and
/// `a_{σ(i),s}[M+1] = a_{i,s}[1]`, absolute deviation.
pub fn verify_groupoid_periodicity(
    inst: &PeriodicityInstance,
    q0: &[f64],
    a0: &DegreeTable,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let chain = groupoid_chain(inst, q0, a0, quad)?;
    let end = chain.last().unwrap();
    let sigma = inst.seq.sigma();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (i, &q) in q0.iter().enumerate() {
        lhs.push(end.q()[sigma.apply(i)]);
        rhs.push(q);
    }
    for (i, s, a) in a0.iter() {
        lhs.push(end.a().get(sigma.apply(i), s));
        rhs.push(a);
    }
    let dev = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(VerificationReport::new("groupoid-periodicity", lhs, rhs, dev, tol))
}

/// `Σ_{ℓ: k_ℓ = j} (ε_ℓ / r_j) ∫_{y_j[ℓ]^ε}^{β(y_j[ℓ])^ε} u^{ε s°_ℓ - 1} / P_ℓ(u^ε) du = 0`
/// along the groupoid chain started at `q0`.
pub fn verify_a_periodicity_sum(
    inst: &PeriodicityInstance,
    q0: &[f64],
    j: usize,
    s: usize,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<VerificationReport> {
    inst.check_index(j, s)?;
    let a0 = DegreeTable::zeros(inst.start.exchange().d());
    let chain = groupoid_chain(inst, q0, &a0, quad)?;
    let s_circ = inst.s_circ(j, s);
    let mut terms = Vec::new();
    let occurrences = inst.directions().iter().enumerate().filter(|(_, &k)| k == j);
    for ((l, _), &sc) in occurrences.zip(&s_circ) {
        let g = &chain[l];
        let eps = inst.signs[l];
        let e = eps.value() as i32;
        let y = g.base().y()[j];
        let by = g.beta_y()?[j];
        let p = g.base().exchange_poly(j);
        let integral = kernel_integral(&p, sc, eps, y.powi(e), by.powi(e), quad)?;
        terms.push(eps.as_f64() / inst.r(j) * integral);
    }
    let sum: f64 = terms.iter().sum();
    Ok(VerificationReport::new(
        format!("a-periodicity-sum[j={},s={s}]", j + 1),
        vec![sum],
        vec![0.0],
        sum.abs(),
        tol,
    ))
}

/// The `(ε_ℓ / r_j) ∫_0^{y_j[ℓ]^ε} u^{ε s°_ℓ - 1} / P_ℓ(u^ε) du` terms.
fn analogue_terms(inst: &PeriodicityInstance, seeds: &[Seed], j: usize, s: usize, quad: &QuadratureConfig) -> Result<Vec<f64>> {
    let s_circ = inst.s_circ(j, s);
    let occurrences = inst.directions().iter().enumerate().filter(|(_, &k)| k == j);
    occurrences
        .zip(&s_circ)
        .map(|((l, _), &sc)| {
            let eps = inst.signs[l];
            let y = seeds[l].y()[j].powi(eps.value() as i32);
            let p = seeds[l].exchange_poly(j);
            Ok(eps.as_f64() / inst.r(j) * kernel_integral(&p, sc, eps, 0.0, y, quad)?)
        })
        .collect()
}

/// `Σ_{ℓ: k_ℓ = j} (ε_ℓ / r_j) ∫_0^{y_j[ℓ]^ε} u^{ε s°_ℓ - 1} / P_ℓ(u^ε) du = 0`.
pub fn verify_analogues_sum(
    inst: &PeriodicityInstance,
    j: usize,
    s: usize,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<VerificationReport> {
    inst.check_index(j, s)?;
    let seeds = inst.seeds()?;
    let sum: f64 = analogue_terms(inst, &seeds, j, s, quad)?.iter().sum();
    let report = VerificationReport::new(
        format!("analogues-sum[j={},s={s}]", j + 1),
        vec![sum],
        vec![0.0],
        sum.abs(),
        tol,
    );
    Ok(match inst.full_rank_note()? {
        Some(note) => report.with_note(note),
        None => report,
    })
}

/// `Σ_ℓ (ε_ℓ / r_{k_ℓ}) L̃_{P°_ℓ}(y_{k_ℓ}[ℓ]^{ε_ℓ})`.
pub fn dilog_sum_eps(inst: &PeriodicityInstance, cfg: &DilogConfig) -> Result<f64> {
    let seeds = inst.seeds()?;
    let mut sum = 0.0;
    for (l, (&k, &eps)) in inst.directions().iter().zip(inst.signs()).enumerate() {
        let p = pcirc_transform(&seeds[l].exchange_poly(k), eps);
        let x = seeds[l].y()[k].powi(eps.value() as i32);
        sum += eps.as_f64() / inst.r(k) * rogers_dilog_higher(&p, x, cfg)?;
    }
    Ok(sum)
}

/// `Σ_ℓ (1 / r_{k_ℓ}) L̃_{P_ℓ}(y_{k_ℓ}[ℓ])`.
pub fn dilog_sum_plain(inst: &PeriodicityInstance, cfg: &DilogConfig) -> Result<f64> {
    let seeds = inst.seeds()?;
    let mut sum = 0.0;
    for (l, &k) in inst.directions().iter().enumerate() {
        let p = seeds[l].exchange_poly(k);
        sum += rogers_dilog_higher(&p, seeds[l].y()[k], cfg)? / inst.r(k);
    }
    Ok(sum)
}

/// `Σ_ℓ (1 / r_{k_ℓ}) ((1 - ε_ℓ)/2) L̃_{P_ℓ}(∞)`.
pub fn dilog_sum_infinity(inst: &PeriodicityInstance, cfg: &DilogConfig) -> Result<f64> {
    let seeds = inst.seeds()?;
    let mut sum = 0.0;
    for (l, (&k, &eps)) in inst.directions().iter().zip(inst.signs()).enumerate() {
        if eps == Sign::Minus {
            sum += rogers_dilog_infinity(&seeds[l].exchange_poly(k), cfg)? / inst.r(k);
        }
    }
    Ok(sum)
}

/// `Σ_ℓ (ε_ℓ / r_{k_ℓ}) L̃_{P°_ℓ}(y_{k_ℓ}[ℓ]^{ε_ℓ}) = 0`.
pub fn verify_dilog_identity_eps(inst: &PeriodicityInstance, cfg: &DilogConfig, tol: f64) -> Result<VerificationReport> {
    let sum = dilog_sum_eps(inst, cfg)?;
    let report = VerificationReport::new("dilog-identity-eps", vec![sum], vec![0.0], sum.abs(), tol);
    Ok(match inst.full_rank_note()? {
        Some(note) => report.with_note(note),
        None => report,
    })
}

/// `Σ (1/r) L̃_{P_ℓ}(y_{k_ℓ}[ℓ]) = Σ (1/r) ((1-ε_ℓ)/2) L̃_{P_ℓ}(∞)`, plus the
/// spread of the left side over the alternative initial `y` tuples.
pub fn verify_dilog_identity_no_eps(
    inst: &PeriodicityInstance,
    alternative_y: &[Vec<f64>],
    cfg: &DilogConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let lhs = dilog_sum_plain(inst, cfg)?;
    let rhs = dilog_sum_infinity(inst, cfg)?;
    let mut values = vec![lhs];
    for y in alternative_y {
        values.push(dilog_sum_plain(&inst.with_y(y.clone())?, cfg)?);
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    let dev = (lhs - rhs).abs().max(spread);
    Ok(VerificationReport::new("dilog-identity-no-eps", vec![lhs], vec![rhs], dev, tol)
        .with_note(format!("lhs spread over {} initial y: {spread:e}", values.len())))
}

/// `Σ_ℓ (ε_ℓ / (d_{k_ℓ} r_{k_ℓ})) L̃((ᴿy_{k_ℓ}[ℓ])^{ε_ℓ}) = 0` along the
/// right-companion pattern.
pub fn verify_companion_dilog(inst: &PeriodicityInstance, tol: f64) -> Result<VerificationReport> {
    let companion = inst.start.right_companion();
    let seeds = seeds_along(&companion, inst.directions(), &inst.signs)?;
    let ex = inst.start.exchange();
    let mut sum = 0.0;
    for (l, (&k, &eps)) in inst.directions().iter().zip(inst.signs()).enumerate() {
        let weight = eps.as_f64() / (ex.d()[k] as f64 * ex.r()[k] as f64);
        sum += weight * rogers_dilog(seeds[l].y()[k].powi(eps.value() as i32))?;
    }
    Ok(VerificationReport::new("companion-dilog", vec![sum], vec![0.0], sum.abs(), tol))
}

fn with_z_value(inst: &PeriodicityInstance, j: usize, s: usize, value: f64) -> Result<PeriodicityInstance> {
    let mut z = inst.start.z().clone();
    z.set(j, s, value);
    inst.with_z(z)
}

/// Bilinear symmetry
/// `Σ (1/r) log y_ℓ(z_a) log p_ℓ(z_b) = Σ (1/r) log y_ℓ(z_b) log p_ℓ(z_a)`,
/// where `y_ℓ = y_{k_ℓ}[ℓ]`, `p_ℓ = P_ℓ(y_ℓ)`, as functions of the initial
/// `z_{j,s}`.
pub fn verify_wedge_symmetry(
    inst: &PeriodicityInstance,
    j: usize,
    s: usize,
    z_a: f64,
    z_b: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let name = format!("wedge-symmetry[j={},s={s}]", j + 1);
    let d = inst.start.exchange().d();
    if j >= d.len() || d[j] == 1 {
        return Ok(VerificationReport::vacuous(name, "no z-variable at this index", tol));
    }
    inst.check_index(j, s)?;
    if !(z_a >= 0.0 && z_b >= 0.0) {
        return Err(Error::Domain(format!("z values {z_a}, {z_b} must be nonnegative")));
    }
    let logs = |z: f64| -> Result<Vec<(f64, f64, f64)>> {
        let run = with_z_value(inst, j, s, z)?;
        let seeds = run.seeds()?;
        Ok(run
            .directions()
            .iter()
            .enumerate()
            .map(|(l, &k)| {
                let y = seeds[l].y()[k];
                let p = seeds[l].exchange_poly(k).eval(y);
                (1.0 / run.r(k), y.ln(), p.ln())
            })
            .collect())
    };
    let (la, lb) = (logs(z_a)?, logs(z_b)?);
    let ab: f64 = la.iter().zip(&lb).map(|((c, ya, _), (_, _, pb))| c * ya * pb).sum();
    let ba: f64 = la.iter().zip(&lb).map(|((c, _, pa), (_, yb, _))| c * yb * pa).sum();
    Ok(VerificationReport::new(name, vec![ab], vec![ba], (ab - ba).abs(), tol))
}

/// Central difference of `f` at `z` with steps `h` and `h/2`, combined by
/// Richardson extrapolation. Returns `(extrapolated, |D(h) - D(h/2)|)`.
fn richardson_derivative(f: impl Fn(f64) -> Result<f64>, z: f64, h: f64) -> Result<(f64, f64)> {
    let central = |h: f64| -> Result<f64> { Ok((f(z + h)? - f(z - h)?) / (2.0 * h)) };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok(((4.0 * d2 - d1) / 3.0, (d1 - d2).abs()))
}

/// `∂/∂z_{j,s} Σ (1/r) L̃_{P_ℓ}(y_{k_ℓ}[ℓ]) = Σ_{ℓ: k_ℓ = j} ((1-ε_ℓ)/(2 r_j)) ∫_0^∞ u^{s°_ℓ - 1} / P_ℓ(u) du`,
/// the left side by Richardson-extrapolated central differences.
pub fn verify_z_derivative_theorem(
    inst: &PeriodicityInstance,
    j: usize,
    s: usize,
    h: f64,
    cfg: &DilogConfig,
    tol: f64,
) -> Result<VerificationReport> {
    inst.check_index(j, s)?;
    let name = format!("z-derivative[j={},s={s}]", j + 1);
    let z0 = inst.start.z().get(j, s);
    if z0 - h <= 0.0 {
        return Err(Error::Domain(format!(
            "z_{{{},{s}}} = {z0} must exceed the step {h}",
            j + 1
        )));
    }
    let f = |z: f64| dilog_sum_plain(&with_z_value(inst, j, s, z)?, cfg);
    let (fd, disagreement) = richardson_derivative(f, z0, h)?;

    let seeds = inst.seeds()?;
    let s_circ = inst.s_circ(j, s);
    let mut rhs = 0.0;
    let occurrences = inst.directions().iter().enumerate().filter(|(_, &k)| k == j);
    for ((l, _), &sc) in occurrences.zip(&s_circ) {
        if inst.signs[l] == Sign::Minus {
            let p = seeds[l].exchange_poly(j);
            rhs += kernel_integral(&p, sc, Sign::Plus, 0.0, f64::INFINITY, &cfg.quad)? / inst.r(j);
        }
    }
    let report = VerificationReport::new(name, vec![fd], vec![rhs], (fd - rhs).abs(), tol);
    Ok(if disagreement > 10.0 * tol {
        report.failed(format!("finite-difference steps disagree by {disagreement:e}"))
    } else {
        report
    })
}

/// Finite-difference derivative of the ε-form sum with respect to `z_{j,s}`
/// against `Σ_{ℓ: k_ℓ = j} (ε_ℓ / r_j) ∫_0^{y_j[ℓ]^ε} u^{ε s°_ℓ - 1} / P_ℓ(u^ε) du`.
pub fn verify_constancy_derivative(
    inst: &PeriodicityInstance,
    j: usize,
    s: usize,
    h: f64,
    cfg: &DilogConfig,
    tol: f64,
) -> Result<VerificationReport> {
    inst.check_index(j, s)?;
    let name = format!("constancy-derivative[j={},s={s}]", j + 1);
    let z0 = inst.start.z().get(j, s);
    if z0 - h <= 0.0 {
        return Err(Error::Domain(format!(
            "z_{{{},{s}}} = {z0} must exceed the step {h}",
            j + 1
        )));
    }
    let f = |z: f64| dilog_sum_eps(&with_z_value(inst, j, s, z)?, cfg);
    let (fd, disagreement) = richardson_derivative(f, z0, h)?;
    let seeds = inst.seeds()?;
    let kernel: f64 = analogue_terms(inst, &seeds, j, s, &cfg.quad)?.iter().sum();
    let report = VerificationReport::new(name, vec![fd], vec![kernel], (fd - kernel).abs(), tol);
    Ok(if disagreement > 10.0 * tol {
        report.failed(format!("finite-difference steps disagree by {disagreement:e}"))
    } else {
        report
    })
}
