//! Euler and Rogers dilogarithms, their higher-degree versions attached to a
//! monic polynomial `P` with `P(0) = 1`, and the rational kernels
//! `u^{εs-1} / P(u^ε)` that appear in a-variable mutations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::Sign;
use crate::quad::{integrate, QuadratureConfig};

/// `π² / 6`, the value of `L̃(∞)` and of `Li₂(1)`.
pub const PI2_6: f64 = PI * PI / 6.0;

/// Polynomial `1 + p_1 x + … + p_{d-1} x^{d-1} + x^d` with `p_s >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyP {
    coeffs: Vec<f64>,
}

impl PolyP {
    /// From the full coefficient list `(p_0, …, p_d)`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain("P needs degree at least 1".into()));
        }
        if coeffs[0] != 1.0 || *coeffs.last().unwrap() != 1.0 {
            return Err(Error::Domain(format!(
                "P must satisfy p_0 = p_d = 1, got {coeffs:?}"
            )));
        }
        if coeffs.iter().any(|&c| !(c >= 0.0 && c.is_finite())) {
            return Err(Error::Domain(format!(
                "P must have finite nonnegative coefficients, got {coeffs:?}"
            )));
        }
        Ok(Self { coeffs })
    }

    /// `1 + Σ inner[s-1] x^s + x^{len+1}`; `inner` must be nonnegative.
    pub(crate) fn from_inner(inner: &[f64]) -> Self {
        let mut coeffs = Vec::with_capacity(inner.len() + 2);
        coeffs.push(1.0);
        coeffs.extend_from_slice(inner);
        coeffs.push(1.0);
        Self { coeffs }
    }

    /// `1 + x^d`.
    pub fn binomial(d: usize) -> Self {
        Self::from_inner(&vec![0.0; d.saturating_sub(1)])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (s, &c)| acc * x + s as f64 * c)
    }

    /// `P(x) - 1`, evaluated without forming `1 + …`.
    fn eval_minus_one(&self, x: f64) -> f64 {
        self.coeffs[1..].iter().rev().fold(0.0, |acc, &c| acc * x + c) * x
    }

    /// `log P(x)` for `x >= 0`, accurate both near 0 and for large `x`.
    pub fn ln_eval(&self, x: f64) -> f64 {
        if x <= 1.0 {
            self.eval_minus_one(x).ln_1p()
        } else {
            let w = 1.0 / x;
            self.degree() as f64 * x.ln() + self.reversed().eval_minus_one(w).ln_1p()
        }
    }

    /// `P*(x) = x^d P(1/x)`: the coefficient reversal.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { coeffs }
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// `P°(α) = P(α^ε) α^{((1-ε)/2) d}`, evaluated literally.
    pub fn pcirc_value(&self, eps: Sign, alpha: f64) -> f64 {
        let inner = match eps {
            Sign::Plus => alpha,
            Sign::Minus => 1.0 / alpha,
        };
        self.eval(inner) * alpha.powi((eps.half_defect() as usize * self.degree()) as i32)
    }

    /// Taylor coefficients `c_1, …, c_terms` of `log P(y) = Σ c_m y^m`,
    /// from `m c_m = m p_m - Σ_{j<m} j c_j p_{m-j}`.
    pub fn log_series(&self, terms: usize) -> Vec<f64> {
        let p = |i: usize| self.coeffs.get(i).copied().unwrap_or(0.0);
        let mut c = vec![0.0; terms + 1];
        for m in 1..=terms {
            let mut acc = m as f64 * p(m);
            for (j, cj) in c.iter().enumerate().take(m).skip(1) {
                acc -= j as f64 * cj * p(m - j);
            }
            c[m] = acc / m as f64;
        }
        c.remove(0);
        c
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs.iter().copied().fold(0.0, f64::max)
    }
}

/// `P°` as a polynomial: `P` for `ε = +1`, the reversal `P*` for `ε = -1`.
pub fn pcirc_transform(p: &PolyP, eps: Sign) -> PolyP {
    match eps {
        Sign::Plus => p.clone(),
        Sign::Minus => p.reversed(),
    }
}

/// Numerical settings for the higher-degree dilogarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilogConfig {
    /// Width of the interval `[0, δ]` handled by the log-series expansion.
    pub series_delta: f64,
    /// Number of terms of the log-series.
    pub series_terms: usize,
    pub quad: QuadratureConfig,
}

impl Default for DilogConfig {
    fn default() -> Self {
        Self {
            series_delta: 1e-3,
            series_terms: 12,
            quad: QuadratureConfig::default(),
        }
    }
}

impl DilogConfig {
    pub fn with_quad(quad: QuadratureConfig) -> Self {
        Self {
            quad,
            ..Self::default()
        }
    }
}

// B_{2k} / (2k+1)! for k = 1..=10.
const LI2_BERNOULLI: [f64; 10] = [
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211_680.0,
    -1.0 / 10_886_400.0,
    1.0 / 526_901_760.0,
    -4.064_761_645_144_225_5e-11,
    8.921_691_020_456_453e-13,
    -1.993_929_586_072_107_6e-14,
    4.518_980_029_619_918e-16,
    -1.035_651_761_218_124_7e-17,
];

/// Euler dilogarithm `Li₂(t)` for real `t <= 1`.
pub fn li2(t: f64) -> f64 {
    if t.is_nan() || t > 1.0 {
        return f64::NAN;
    }
    if t == 1.0 {
        return PI2_6;
    }
    if t == 0.0 {
        return 0.0;
    }
    if t < -1.0 {
        let l = (-t).ln();
        return -PI2_6 - 0.5 * l * l - li2(1.0 / t);
    }
    if t > 0.5 {
        return PI2_6 - t.ln() * (-t).ln_1p() - li2(1.0 - t);
    }
    // Bernoulli series in u = -log(1 - t), |u| <= log 2
    let u = -(-t).ln_1p();
    let u2 = u * u;
    let mut sum = 0.0;
    let mut pow = u * u2;
    for b in LI2_BERNOULLI {
        sum += b * pow;
        pow *= u2;
    }
    u - 0.25 * u2 + sum
}

/// Rogers dilogarithm `L̃(x) = -Li₂(-x) - ½ log(x) log(1+x)` for `x >= 0`
/// (`L̃(0) = 0`, `L̃(∞) = π²/6`).
pub fn rogers_dilog(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("Rogers dilogarithm at {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(PI2_6);
    }
    Ok(-li2(-x) - 0.5 * x.ln() * x.ln_1p())
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        Err(Error::Domain(format!("higher-degree dilogarithm at {x}")))
    } else {
        Ok(())
    }
}

/// Higher-degree Rogers dilogarithm
/// `L̃_P(x) = ½ ∫_0^x (log P(y)/y - log(y) P'(y)/P(y)) dy`.
///
/// The logarithmic endpoint singularity at 0 is integrated analytically on
/// `[0, δ]` from the Taylor series of `log P`; `[δ, 1]` is integrated in `y`
/// and `[1, x]` in `t = log y`, where the integrand becomes
/// `½ (log P*(e^{-t}) + t e^{-t} P*'(e^{-t}) / P*(e^{-t}))`.
pub fn rogers_dilog_higher(p: &PolyP, x: f64, cfg: &DilogConfig) -> Result<f64> {
    check_arg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return rogers_dilog_infinity(p, cfg);
    }
    // keep δ well inside the disc of convergence of log P
    let radius = 1.0 / (1.0 + p.max_coeff());
    let delta = cfg.series_delta.min(0.1 * radius).min(x);
    let ln_delta = delta.ln();
    let mut head = 0.0;
    let mut pow = 1.0;
    for (m, c) in p.log_series(cfg.series_terms).iter().enumerate() {
        let m = (m + 1) as f64;
        pow *= delta;
        head += c * pow * (2.0 / m - ln_delta);
    }
    head *= 0.5;

    let body_end = x.min(1.0);
    let body = integrate(
        |y| 0.5 * (p.ln_eval(y) / y - y.ln() * p.eval_derivative(y) / p.eval(y)),
        delta,
        body_end,
        &cfg.quad,
    )?;

    let tail = if x > 1.0 {
        let rev = p.reversed();
        integrate(
            |t: f64| {
                let w = (-t).exp();
                let pw = rev.eval(w);
                0.5 * (rev.ln_eval(w) + t * w * rev.eval_derivative(w) / pw)
            },
            0.0,
            x.ln(),
            &cfg.quad,
        )?
    } else {
        0.0
    };
    Ok(head + body + tail)
}

/// `-Li_{2,P}(-x) = ∫_0^x log P(y)/y dy`.
pub fn neg_li2_higher(p: &PolyP, x: f64, cfg: &DilogConfig) -> Result<f64> {
    check_arg(x)?;
    let lower = integrate(|y| p.ln_eval(y) / y, 0.0, x.min(1.0), &cfg.quad)?;
    if x <= 1.0 {
        return Ok(lower);
    }
    let lx = x.ln();
    let rev = p.reversed();
    let upper = integrate(|t: f64| rev.ln_eval((-t).exp()), 0.0, lx, &cfg.quad)?;
    Ok(lower + 0.5 * p.degree() as f64 * lx * lx + upper)
}

/// Euler form `L̃_P(x) = -Li_{2,P}(-x) - ½ log(x) log P(x)`, arranged so the
/// `(log x)²` growth cancels analytically for `x > 1`.
pub fn rogers_dilog_higher_euler(p: &PolyP, x: f64, cfg: &DilogConfig) -> Result<f64> {
    check_arg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= 1.0 {
        let e = integrate(|y| p.ln_eval(y) / y, 0.0, x, &cfg.quad)?;
        return Ok(e - 0.5 * x.ln() * p.ln_eval(x));
    }
    let lx = x.ln();
    let rev = p.reversed();
    let e1 = integrate(|y| p.ln_eval(y) / y, 0.0, 1.0, &cfg.quad)?;
    let upper = integrate(|t: f64| rev.ln_eval((-t).exp()), 0.0, lx, &cfg.quad)?;
    Ok(e1 + upper - 0.5 * lx * rev.ln_eval(1.0 / x))
}

/// `L̃_P(∞) = L̃_P(1) + L̃_{P*}(1)`.
pub fn rogers_dilog_infinity(p: &PolyP, cfg: &DilogConfig) -> Result<f64> {
    Ok(rogers_dilog_higher(p, 1.0, cfg)? + rogers_dilog_higher(&p.reversed(), 1.0, cfg)?)
}

/// `L̃_P(∞)` estimated from `L̃_P(X)` plus the leading asymptotic term
/// `½ p_{d-1} w (2 - log w)`, `w = 1/X`. Cross-check only.
pub fn rogers_dilog_infinity_cutoff(p: &PolyP, cutoff: f64, cfg: &DilogConfig) -> Result<f64> {
    let w = 1.0 / cutoff;
    let p_top = p.coeffs()[p.degree() - 1];
    Ok(rogers_dilog_higher(p, cutoff, cfg)? + 0.5 * p_top * w * (2.0 - w.ln()))
}

/// Oriented integral `∫_lower^upper u^{εm-1} / P(u^ε) du` for
/// `1 <= m <= d-1`, `0 <= lower`, `upper` possibly `+∞`.
///
/// For `ε = -1` the integrand equals `u^{d-m-1} / P*(u)`, so both branches
/// reduce to `u^{a-1} / Q(u)` with `1 <= a <= d-1`, which is bounded at 0
/// and decays like `u^{a-1-d}`. The part above 1 is integrated after
/// `v = 1/u` as `v^{d-a-1} / Q*(v)` on `[1/upper, 1]`.
pub fn kernel_integral(
    p: &PolyP,
    m: usize,
    eps: Sign,
    lower: f64,
    upper: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let d = p.degree();
    if m < 1 || m >= d {
        return Err(Error::Domain(format!(
            "kernel exponent index {m} outside 1..={}",
            d.saturating_sub(1)
        )));
    }
    if lower.is_nan() || upper.is_nan() || lower < 0.0 || upper < 0.0 {
        return Err(Error::Domain(format!(
            "kernel bounds [{lower}, {upper}] must be nonnegative"
        )));
    }
    if lower == upper {
        return Ok(0.0);
    }
    if lower > upper {
        return kernel_integral(p, m, eps, upper, lower, quad).map(|v| -v);
    }
    if lower == f64::INFINITY {
        return Err(Error::Domain("kernel lower bound is infinite".into()));
    }
    let (q, a) = match eps {
        Sign::Plus => (p.clone(), m),
        Sign::Minus => (p.reversed(), d - m),
    };
    let mut total = 0.0;
    if lower < 1.0 {
        let hi = upper.min(1.0);
        total += integrate(|u| u.powi(a as i32 - 1) / q.eval(u), lower, hi, quad)?;
    }
    if upper > 1.0 {
        let qr = q.reversed();
        let v_lo = if upper == f64::INFINITY { 0.0 } else { 1.0 / upper };
        let v_hi = 1.0 / lower.max(1.0);
        total += integrate(|v| v.powi((d - a) as i32 - 1) / qr.eval(v), v_lo, v_hi, quad)?;
    }
    Ok(total)
}
