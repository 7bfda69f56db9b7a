//! Exchange data, seeds over the positive reals, and seed mutation.
//!
//! All indices are 0-based in this API. Direction `k` refers to row/column
//! `k` of the exchange matrix; z-variables are stored per direction as a
//! vector of length `d_k - 1`, so `z[k][s - 1]` is `z_{k,s}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dilog::PolyP;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Largest rank accepted by the constructors.
pub const MAX_RANK: usize = 12;
/// Longest mutation sequence accepted by [`MutationSequence::new`].
pub const MAX_SEQUENCE_LEN: usize = 10_000;

/// Mutation sign `ε ∈ {+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `(1 - ε) / 2`: 0 for `+`, 1 for `-`.
    pub fn half_defect(self) -> i64 {
        (1 - self.value()) / 2
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[inline]
pub(crate) fn pos(x: i64) -> i64 {
    x.max(0)
}

/// The fixed combinatorial frame: exchange matrix `B`, skew-symmetrizer
/// `R = diag(r)` and mutation degrees `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeData {
    b: IntMatrix,
    r: Vec<i64>,
    d: Vec<usize>,
}

impl ExchangeData {
    pub fn new(b: IntMatrix, r: Vec<i64>, d: Vec<usize>) -> Result<Self> {
        let n = b.dim();
        if n == 0 || n > MAX_RANK {
            return Err(Error::InvalidExchange(format!(
                "rank {n} outside 1..={MAX_RANK}"
            )));
        }
        if r.len() != n || d.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "B is {n}x{n} but R has {} and d has {} entries",
                r.len(),
                d.len()
            )));
        }
        if let Some(i) = r.iter().position(|&x| x < 1) {
            return Err(Error::InvalidExchange(format!("r_{} must be >= 1", i + 1)));
        }
        if let Some(i) = d.iter().position(|&x| x < 1) {
            return Err(Error::InvalidExchange(format!("d_{} must be >= 1", i + 1)));
        }
        for i in 0..n {
            for j in 0..n {
                if r[i] * b[(i, j)] != -r[j] * b[(j, i)] {
                    return Err(Error::InvalidExchange(format!(
                        "diag(R)B is not skew-symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { b, r, d })
    }

    /// Skew-symmetric `B` with trivial symmetrizer.
    pub fn skew_symmetric(b: IntMatrix, d: Vec<usize>) -> Result<Self> {
        let n = b.dim();
        Self::new(b, vec![1; n], d)
    }

    pub fn rank(&self) -> usize {
        self.b.dim()
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn r(&self) -> &[i64] {
        &self.r
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    pub fn is_ordinary(&self) -> bool {
        self.d.iter().all(|&x| x == 1)
    }

    pub fn is_full_rank(&self) -> Result<bool> {
        Ok(self.b.determinant()? != 0)
    }

    pub(crate) fn check_direction(&self, k: usize) -> Result<()> {
        if k >= self.rank() {
            Err(Error::DirectionOutOfRange { k, n: self.rank() })
        } else {
            Ok(())
        }
    }

    /// Matrix mutation in direction `k`. The result does not depend on `eps`.
    pub fn mutate(&self, k: usize, eps: Sign) -> Result<Self> {
        self.check_direction(k)?;
        Ok(Self {
            b: mutate_matrix(&self.b, k, self.d[k] as i64, eps)?,
            r: self.r.clone(),
            d: self.d.clone(),
        })
    }

    /// Exchange data of the right companion: `B·D`, symmetrizer `r_i d_i`,
    /// all degrees 1.
    pub fn right_companion(&self) -> Self {
        let d: Vec<i64> = self.d.iter().map(|&x| x as i64).collect();
        Self {
            b: self.b.scale_columns(&d),
            r: self.r.iter().zip(&d).map(|(r, d)| r * d).collect(),
            d: vec![1; self.rank()],
        }
    }

    /// Number of z-variables, `Σ (d_i - 1)`.
    pub fn z_count(&self) -> usize {
        self.d.iter().map(|&x| x - 1).sum()
    }
}

/// `b'_{ij}` for mutation in direction `k` with degree `dk`.
pub(crate) fn mutate_matrix(b: &IntMatrix, k: usize, dk: i64, eps: Sign) -> Result<IntMatrix> {
    let n = b.dim();
    let e = eps.value();
    let overflow = || Error::IntegerOverflow(format!("matrix mutation in direction {}", k + 1));
    let mut out = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = if i == k || j == k {
                -b[(i, j)]
            } else {
                let (bik, bkj) = (b[(i, k)], b[(k, j)]);
                let t1 = bik
                    .checked_mul(-e * dk)
                    .map(pos)
                    .and_then(|v| v.checked_mul(bkj));
                let t2 = bkj
                    .checked_mul(e * dk)
                    .map(pos)
                    .and_then(|v| v.checked_mul(bik));
                t1.zip(t2)
                    .and_then(|(t1, t2)| b[(i, j)].checked_add(t1)?.checked_add(t2))
                    .ok_or_else(overflow)?
            };
        }
    }
    Ok(out)
}

/// Values indexed by `(i, s)` with `1 <= s <= d_i - 1`: the shape of both
/// z-variables and a-variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeTable {
    values: Vec<Vec<f64>>,
}

impl DegreeTable {
    pub fn zeros(d: &[usize]) -> Self {
        Self {
            values: d.iter().map(|&di| vec![0.0; di - 1]).collect(),
        }
    }

    pub fn from_fn(d: &[usize], mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self {
            values: d
                .iter()
                .enumerate()
                .map(|(i, &di)| (1..di).map(|s| f(i, s)).collect())
                .collect(),
        }
    }

    /// Builds a table from per-direction vectors, checking the shape
    /// against `d`.
    pub fn from_vecs(d: &[usize], values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != d.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows of (i,s)-values for rank {}",
                values.len(),
                d.len()
            )));
        }
        for (i, (row, &di)) in values.iter().zip(d).enumerate() {
            if row.len() != di - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "direction {} has {} values but d_{} - 1 = {}",
                    i + 1,
                    row.len(),
                    i + 1,
                    di - 1
                )));
            }
        }
        Ok(Self { values })
    }

    /// Value at `(i, s)` with `s` 1-based.
    pub fn get(&self, i: usize, s: usize) -> f64 {
        self.values[i][s - 1]
    }

    pub fn set(&mut self, i: usize, s: usize, v: f64) {
        self.values[i][s - 1] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut Vec<f64> {
        &mut self.values[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Iterates `(i, s, value)` with `s` 1-based.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(s, &v)| (i, s + 1, v)))
    }
}

/// A seed `(B, y, z)` over `ℝ_{>0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    exchange: ExchangeData,
    y: Vec<f64>,
    z: DegreeTable,
}

impl Seed {
    pub fn new(exchange: ExchangeData, y: Vec<f64>, z: DegreeTable) -> Result<Self> {
        let n = exchange.rank();
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} y-variables for rank {n}",
                y.len()
            )));
        }
        if let Some(i) = y.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidSeed(format!(
                "y_{} = {} is not a positive real",
                i + 1,
                y[i]
            )));
        }
        let z = DegreeTable::from_vecs(exchange.d(), z.values)?;
        if let Some((i, s, v)) = z.iter().find(|&(_, _, v)| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidSeed(format!(
                "z_{{{},{s}}} = {v} is not a nonnegative real",
                i + 1
            )));
        }
        Ok(Self { exchange, y, z })
    }

    /// Seed with all z-variables zero.
    pub fn with_zero_z(exchange: ExchangeData, y: Vec<f64>) -> Result<Self> {
        let z = DegreeTable::zeros(exchange.d());
        Self::new(exchange, y, z)
    }

    pub fn exchange(&self) -> &ExchangeData {
        &self.exchange
    }

    pub fn rank(&self) -> usize {
        self.exchange.rank()
    }

    pub fn b(&self) -> &IntMatrix {
        self.exchange.b()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn z(&self) -> &DegreeTable {
        &self.z
    }

    /// Exchange polynomial `P_k(α) = 1 + Σ z_{k,s} α^s + α^{d_k}`.
    pub fn exchange_poly(&self, k: usize) -> PolyP {
        PolyP::from_inner(self.z.row(k))
    }

    /// Returns a copy with `y` replaced (same exchange data and z).
    pub fn with_y(&self, y: Vec<f64>) -> Result<Self> {
        Self::new(self.exchange.clone(), y, self.z.clone())
    }

    pub fn with_z(&self, z: DegreeTable) -> Result<Self> {
        Self::new(self.exchange.clone(), self.y.clone(), z)
    }

    /// Seed mutation in direction `k` with sign `eps`.
    pub fn mutate(&self, k: usize, eps: Sign) -> Result<Self> {
        self.exchange.check_direction(k)?;
        let n = self.rank();
        let b = self.b();
        let dk = self.exchange.d()[k] as i64;
        let e = eps.value();
        let yk = self.y[k];
        let pk = self.exchange_poly(k);
        // ln P°_k(y_k^ε) = ln P_k(y_k) + ((1-ε)/2) d_k ln y_k^ε, evaluated in
        // log space so that large exponents do not overflow intermediates
        let ln_yk = yk.ln();
        let ln_pcirc = pk.ln_eval(yk) - (eps.half_defect() * dk) as f64 * ln_yk;
        if !ln_pcirc.is_finite() {
            return Err(Error::NumericRange(format!(
                "P°_{}(y_{}^ε) is not finite",
                k + 1,
                k + 1
            )));
        }
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let v = if i == k {
                1.0 / yk
            } else {
                let bki = b[(k, i)];
                let ln_v = self.y[i].ln() + pos(e * dk * bki) as f64 * ln_yk - bki as f64 * ln_pcirc;
                ln_v.exp()
            };
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NumericRange(format!(
                    "y_{} after mutation at {} is {v}",
                    i + 1,
                    k + 1
                )));
            }
            y.push(v);
        }
        let mut z = self.z.clone();
        z.row_mut(k).reverse();
        Ok(Self {
            exchange: self.exchange.mutate(k, eps)?,
            y,
            z,
        })
    }

    /// Right companion seed `(B·D, (y_i^{d_i}))` with no z-variables.
    pub fn right_companion(&self) -> Self {
        let exchange = self.exchange.right_companion();
        let y = self
            .y
            .iter()
            .zip(self.exchange.d())
            .map(|(&y, &d)| y.powi(d as i32))
            .collect();
        Self {
            z: DegreeTable::zeros(exchange.d()),
            exchange,
            y,
        }
    }

    /// Largest relative difference between the y- and z-variables of two
    /// seeds with the same shape.
    pub fn max_rel_deviation(&self, other: &Seed) -> f64 {
        let dy = self
            .y
            .iter()
            .zip(&other.y)
            .map(|(a, b)| rel_dev(*a, *b))
            .fold(0.0, f64::max);
        let dz = self
            .z
            .iter()
            .zip(other.z.iter())
            .map(|((_, _, a), (_, _, b))| rel_dev(a, b))
            .fold(0.0, f64::max);
        dy.max(dz)
    }
}

/// `|a - b| / max(|a|, |b|)`, with 0 for two zeros.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// A bijection of `{0, …, n-1}`; `images[i] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Domain(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The transposition of `i` and `j` on `n` points.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Self { images }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Mutation directions `(k_1, …, k_M)` together with the permutation
/// expected at the end of a periodicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MutationSequence {
    directions: Vec<usize>,
    sigma: Permutation,
}

impl MutationSequence {
    pub fn new(directions: Vec<usize>, sigma: Permutation) -> Result<Self> {
        if directions.len() > MAX_SEQUENCE_LEN {
            return Err(Error::Domain(format!(
                "sequence length {} exceeds {MAX_SEQUENCE_LEN}",
                directions.len()
            )));
        }
        if let Some(&k) = directions.iter().find(|&&k| k >= sigma.len()) {
            return Err(Error::DirectionOutOfRange { k, n: sigma.len() });
        }
        Ok(Self { directions, sigma })
    }

    pub fn directions(&self) -> &[usize] {
        &self.directions
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Number of occurrences of direction `j`.
    pub fn count(&self, j: usize) -> usize {
        self.directions.iter().filter(|&&k| k == j).count()
    }
}

impl fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.directions.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "({}) σ={}", parts.join(","), self.sigma)
    }
}

/// Seeds `seed[1], …, seed[M+1]` along a sequence with the given signs.
pub fn seeds_along(start: &Seed, directions: &[usize], signs: &[Sign]) -> Result<Vec<Seed>> {
    if signs.len() != directions.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} signs for {} directions",
            signs.len(),
            directions.len()
        )));
    }
    let mut out = Vec::with_capacity(directions.len() + 1);
    out.push(start.clone());
    for (&k, &eps) in directions.iter().zip(signs) {
        let next = out.last().unwrap().mutate(k, eps)?;
        out.push(next);
    }
    Ok(out)
}

/// Outcome of a σ-periodicity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityReport {
    pub matrix_matches: bool,
    pub max_y_deviation: f64,
    pub max_z_deviation: f64,
    pub tolerance: f64,
    pub periodic: bool,
}

/// Applies `seq` to `start` and checks
/// `b_{σ(i)σ(j)}[M+1] = b_{ij}[1]`, `y_{σ(i)}[M+1] = y_i[1]` and
/// `z_{σ(i),s}[M+1] = z_{i,s}[1]`, the last two to relative tolerance `tol`.
pub fn check_sigma_periodicity(
    start: &Seed,
    seq: &MutationSequence,
    signs: &[Sign],
    tol: f64,
) -> Result<PeriodicityReport> {
    let n = start.rank();
    if seq.sigma().len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation on {} points for rank {n}",
            seq.sigma().len()
        )));
    }
    let end = seeds_along(start, seq.directions(), signs)?.pop().unwrap();
    let sigma = seq.sigma();
    let (b0, b1) = (start.b(), end.b());
    let matrix_matches =
        (0..n).all(|i| (0..n).all(|j| b1[(sigma.apply(i), sigma.apply(j))] == b0[(i, j)]));
    let d = start.exchange().d();
    let degrees_match = (0..n).all(|i| d[sigma.apply(i)] == d[i]);
    let max_y_deviation = (0..n)
        .map(|i| rel_dev(end.y()[sigma.apply(i)], start.y()[i]))
        .fold(0.0, f64::max);
    let max_z_deviation = if degrees_match {
        start
            .z()
            .iter()
            .map(|(i, s, v)| rel_dev(end.z().get(sigma.apply(i), s), v))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(PeriodicityReport {
        matrix_matches,
        max_y_deviation,
        max_z_deviation,
        tolerance: tol,
        periodic: matrix_matches && max_y_deviation <= tol && max_z_deviation <= tol,
    })
}

/// Necessary condition for a proper periodicity coming from the z-variables:
/// every direction `i` with `d_i > 1` is fixed by σ, and the reversal
/// `s ↦ d_i - s` applied once per occurrence of `i` composes to the
/// identity. The latter means an even number of occurrences, except for
/// `d_i = 2` where the reversal is trivial.
pub fn validate_z_parity(seq: &MutationSequence, ex: &ExchangeData) -> bool {
    ex.d().iter().enumerate().all(|(i, &di)| {
        di == 1 || (seq.sigma().apply(i) == i && (di == 2 || seq.count(i).is_multiple_of(2)))
    })
}
