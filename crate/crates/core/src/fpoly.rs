//! Sparse multivariate integer polynomials and the F-polynomial recursion.
//!
//! Variables are ordered `y_1, …, y_n` followed by `z_{i,s}` in `(i, s)`
//! order. Monomials are compared in graded lexicographic order with
//! `y_1 > y_2 > … > z_{1,1} > …`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exchange::{DegreeTable, ExchangeData};
use crate::tropical::CPattern;

/// Exponent vector with its total degree cached for ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            degree: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, v: usize, e: u16) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = e;
        Self {
            degree: e as u32,
            exps,
        }
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Self {
            degree: exps.iter().map(|&e| e as u32).sum(),
            exps,
        }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn checked_mul(&self, other: &Self) -> Result<Self> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<u16>>>()
            .ok_or_else(|| Error::IntegerOverflow("monomial exponent".into()))?;
        Ok(Self {
            degree: self.degree + other.degree,
            exps,
        })
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u16>>>()?;
        Some(Self {
            degree: self.degree - other.degree,
            exps,
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with `i128` coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, i128>,
}

fn overflow() -> Error {
    Error::IntegerOverflow("polynomial coefficient".into())
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i128) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(Monomial::var(nvars, v, 1), 1)
    }

    pub fn monomial(m: Monomial, c: i128) -> Self {
        let nvars = m.exps.len();
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u16>, i128)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "monomial with {} exponents in {nvars} variables",
                    exps.len()
                )));
            }
            p.add_term(Monomial::from_exponents(exps), c)?;
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, &c)| m.degree == 0 && c == 1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exps: &[u16]) -> i128 {
        self.terms
            .get(&Monomial::from_exponents(exps.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, i128)> {
        self.terms.last_key_value().map(|(m, &c)| (m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.leading_term().map_or(0, |(m, _)| m.degree)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::DimensionMismatch(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )))
        } else {
            Ok(())
        }
    }

    fn add_term(&mut self, m: Monomial, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().checked_add(c).ok_or_else(overflow)?;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c.checked_neg().ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.is_one() {
            return Ok(other.clone());
        }
        if other.is_one() {
            return Ok(self.clone());
        }
        let mut out = Self::zero(self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.checked_mul(mb)?, ca.checked_mul(cb).ok_or_else(overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact quotient `self / divisor`; fails unless the remainder is zero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_vars(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lm = lm.clone();
        if divisor.is_one() {
            return Ok(self.clone());
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(&lm).ok_or(Error::InexactDivision)?;
            if c % lc != 0 {
                return Err(Error::InexactDivision);
            }
            let qc = c / lc;
            for (dm, &dc) in &divisor.terms {
                let prod = dc.checked_mul(qc).ok_or_else(overflow)?;
                rem.add_term(dm.checked_mul(&qm)?, prod.checked_neg().ok_or_else(overflow)?)?;
            }
            quot.add_term(qm, qc)?;
        }
        Ok(quot)
    }

    /// Evaluates at real `values` (one per variable) with compensated
    /// summation.
    pub fn evaluate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} variables",
                values.len(),
                self.nvars
            )));
        }
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (m, &c) in &self.terms {
            let mut t = c as f64;
            for (&v, &e) in values.iter().zip(&m.exps) {
                if e > 0 {
                    t *= v.powi(e as i32);
                }
            }
            let y = t - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        Ok(sum)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Terms whose first `n_y` exponents vanish: the polynomial at `y = 0`.
    pub fn at_zero_y(&self, n_y: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps[..n_y].iter().all(|&e| e == 0))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Canonical text: ascending total degree, lexicographically
    /// descending (y before z) within a degree.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

struct PolyDisplay<'a> {
    poly: &'a SparsePoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, i128)> = self.poly.terms().collect();
        terms.sort_by(|(a, _), (b, _)| a.degree.cmp(&b.degree).then_with(|| b.exps.cmp(&a.exps)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c < 0;
            let abs = c.unsigned_abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let factors: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        self.names[v].clone()
                    } else {
                        format!("{}^{e}", self.names[v])
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Placement of `y_i` and `z_{i,s}` among the polynomial variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarLayout {
    n: usize,
    z_offsets: Vec<usize>,
    nvars: usize,
}

impl VarLayout {
    pub fn new(d: &[usize]) -> Self {
        let n = d.len();
        let mut z_offsets = Vec::with_capacity(n);
        let mut next = n;
        for &di in d {
            z_offsets.push(next);
            next += di - 1;
        }
        Self {
            n,
            z_offsets,
            nvars: next,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn n_y(&self) -> usize {
        self.n
    }

    pub fn y(&self, i: usize) -> usize {
        i
    }

    /// Variable index of `z_{i,s}`, `s` 1-based.
    pub fn z(&self, i: usize, s: usize) -> usize {
        self.z_offsets[i] + s - 1
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.n).map(|i| format!("y{i}")).collect();
        for i in 0..self.n {
            let next = self.z_offsets.get(i + 1).copied().unwrap_or(self.nvars);
            for s in 1..=(next - self.z_offsets[i]) {
                names.push(format!("z[{},{s}]", i + 1));
            }
        }
        names
    }

    /// Concatenates `y` and the z-table into one evaluation point.
    pub fn point(&self, y: &[f64], z: &DegreeTable) -> Vec<f64> {
        let mut v = y.to_vec();
        for (_, _, val) in z.iter() {
            v.push(val);
        }
        v
    }
}

/// F-polynomials at every vertex of a path from the root, together with the
/// C-pattern used to build them.
#[derive(Debug, Clone)]
pub struct FPattern {
    layout: VarLayout,
    pattern: CPattern,
    polys: Vec<Vec<SparsePoly>>,
}

impl FPattern {
    /// Runs the F-polynomial recursion along `directions`. The z-coefficients
    /// of each exchange polynomial stay symbolic.
    pub fn along(ex: &ExchangeData, directions: &[usize]) -> Result<Self> {
        let pattern = CPattern::along(ex, directions)?;
        let n = ex.rank();
        let layout = VarLayout::new(ex.d());
        let nv = layout.nvars();
        // zperm[i][s-1] = initial s' such that z_{i,s;t} = z_{i,s'}
        let mut zperm: Vec<Vec<usize>> = ex.d().iter().map(|&di| (1..di).collect()).collect();
        let mut polys = vec![vec![SparsePoly::one(nv); n]];
        for (t, &k) in directions.iter().enumerate() {
            let f = &polys[t];
            let (c, b) = (pattern.c(t), pattern.b(t));
            let dk = ex.d()[k];
            let mut num = SparsePoly::one(nv);
            let mut den = SparsePoly::one(nv);
            for j in 0..n {
                let cj = c[(j, k)];
                let e = u16::try_from(cj.unsigned_abs())
                    .map_err(|_| Error::IntegerOverflow("c-vector exponent".into()))?;
                let yj = Monomial::var(nv, layout.y(j), e);
                if cj > 0 {
                    num = num.mul(&SparsePoly::monomial(yj, 1))?;
                } else if cj < 0 {
                    den = den.mul(&SparsePoly::monomial(yj, 1))?;
                }
                let bj = b[(j, k)];
                if bj > 0 {
                    num = num.mul(&f[j].pow(bj as u32)?)?;
                } else if bj < 0 {
                    den = den.mul(&f[j].pow((-bj) as u32)?)?;
                }
            }
            let mut num_pows = vec![SparsePoly::one(nv)];
            let mut den_pows = vec![SparsePoly::one(nv)];
            for s in 1..=dk {
                num_pows.push(num_pows[s - 1].mul(&num)?);
                den_pows.push(den_pows[s - 1].mul(&den)?);
            }
            let mut total = den_pows[dk].add(&num_pows[dk])?;
            for s in 1..dk {
                let zvar = SparsePoly::var(nv, layout.z(k, zperm[k][s - 1]));
                let term = zvar.mul(&num_pows[s])?.mul(&den_pows[dk - s])?;
                total = total.add(&term)?;
            }
            let new_fk = total.exact_div(&f[k])?;
            let mut next = f.clone();
            next[k] = new_fk;
            polys.push(next);
            zperm[k].reverse();
        }
        Ok(Self {
            layout,
            pattern,
            polys,
        })
    }

    pub fn layout(&self) -> &VarLayout {
        &self.layout
    }

    pub fn pattern(&self) -> &CPattern {
        &self.pattern
    }

    /// F-polynomials `F_{1;t}, …, F_{n;t}` at vertex `t` (0 = root).
    pub fn at(&self, t: usize) -> &[SparsePoly] {
        &self.polys[t]
    }

    pub fn vertices(&self) -> usize {
        self.polys.len()
    }

    /// Separation of additions:
    /// `y_{j;t} = Π_i y_{i}^{c_{ij;t}} F_{i;t}(y, z)^{b_{ij;t}}`.
    pub fn separation_evaluate(&self, t: usize, j: usize, y0: &[f64], z0: &DegreeTable) -> Result<f64> {
        let point = self.layout.point(y0, z0);
        let (c, b) = (self.pattern.c(t), self.pattern.b(t));
        let mut value = 1.0;
        for (i, f) in self.polys[t].iter().enumerate() {
            let fv = f.evaluate(&point)?;
            if !(fv > 0.0 && fv.is_finite()) {
                return Err(Error::NumericRange(format!(
                    "F_{} evaluates to {fv}",
                    i + 1
                )));
            }
            value *= y0[i].powi(c[(i, j)] as i32) * fv.powi(b[(i, j)] as i32);
        }
        Ok(value)
    }
}
