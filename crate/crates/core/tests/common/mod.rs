//! Helpers shared by the integration tests: random exchange data and
//! independent oracles for mutation.
#![allow(dead_code)]

use gencluster::{DegreeTable, ExchangeData, IntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Skew-symmetrizable exchange data from a symmetrizer `r`, multipliers
/// `m_{ij}` for `i < j` (row-major over the upper triangle) and degrees `d`:
/// `r_i b_ij = m_ij lcm(r_i, r_j)`.
pub fn exchange_from_parts(r: &[i64], m: &[i64], d: &[usize]) -> ExchangeData {
    let n = r.len();
    let mut rows = vec![vec![0i64; n]; n];
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            let l = r[i] / gcd(r[i], r[j]) * r[j];
            let s = m[idx] * l;
            rows[i][j] = s / r[i];
            rows[j][i] = -s / r[j];
            idx += 1;
        }
    }
    ExchangeData::new(IntMatrix::from_rows(&rows).unwrap(), r.to_vec(), d.to_vec()).unwrap()
}

pub fn random_exchange(n: usize, max_r: i64, max_m: i64, max_d: usize, rng: &mut impl Rng) -> ExchangeData {
    let r: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_r)).collect();
    let m: Vec<i64> = (0..n * (n - 1) / 2).map(|_| rng.gen_range(-max_m..=max_m)).collect();
    let d: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_d)).collect();
    exchange_from_parts(&r, &m, &d)
}

/// Random word of length `len` over `0..n` without immediate repetitions.
pub fn random_word(n: usize, len: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut w: Vec<usize> = Vec::with_capacity(len);
    while w.len() < len {
        let k = rng.gen_range(0..n);
        if w.last() != Some(&k) {
            w.push(k);
        }
    }
    w
}

/// Matrix mutation with the plain `+` convention, written out independently.
pub fn oracle_mutate_b(b: &[Vec<i64>], k: usize, dk: i64) -> Vec<Vec<i64>> {
    let n = b.len();
    let p = |x: i64| x.max(0);
    let mut out = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + p(-b[i][k] * dk) * b[k][j] + b[i][k] * p(dk * b[k][j])
            };
        }
    }
    out
}

/// Tropical y-variables as exponent vectors over `Trop(y_1, …, y_n)`:
/// `g_j[t]` for every vertex `t` along `word`, mutating with the `+` formula
/// where `1 ⊕ y^g` is the componentwise minimum with zero.
pub fn tropical_oracle(ex: &ExchangeData, word: &[usize]) -> Vec<Vec<Vec<i64>>> {
    let n = ex.rank();
    let mut b = ex.b().rows();
    let mut g: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| (i == j) as i64).collect()).collect();
    let mut out = vec![g.clone()];
    for &k in word {
        let dk = ex.d()[k] as i64;
        let gk = g[k].clone();
        let low: Vec<i64> = gk.iter().map(|&e| (dk * e).min(0)).collect();
        for i in 0..n {
            if i == k {
                g[i] = gk.iter().map(|e| -e).collect();
            } else {
                let bki = b[k][i];
                for c in 0..n {
                    g[i][c] += (dk * bki).max(0) * gk[c] - bki * low[c];
                }
            }
        }
        b = oracle_mutate_b(&b, k, dk);
        out.push(g.clone());
    }
    out
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.abs() {
        acc *= x;
    }
    if e < 0 { acc.recip() } else { acc }
}

/// Exact `+` seed mutation over the rationals; returns y at every vertex.
pub fn rational_y_along(ex: &ExchangeData, y0: &[BigRational], z0: &[Vec<BigRational>], word: &[usize]) -> Vec<Vec<BigRational>> {
    let n = ex.rank();
    let mut b = ex.b().rows();
    let mut y = y0.to_vec();
    let mut z = z0.to_vec();
    let mut out = vec![y.clone()];
    for &k in word {
        let dk = ex.d()[k];
        let yk = y[k].clone();
        let mut p = BigRational::one() + rat_pow(&yk, dk as i64);
        for s in 1..dk {
            p += &z[k][s - 1] * rat_pow(&yk, s as i64);
        }
        for i in 0..n {
            if i == k {
                y[i] = yk.recip();
            } else {
                let bki = b[k][i];
                y[i] = &y[i] * rat_pow(&yk, (dk as i64 * bki).max(0)) * rat_pow(&p, -bki);
            }
        }
        z[k].reverse();
        b = oracle_mutate_b(&b, k, dk as i64);
        out.push(y.clone());
    }
    out
}

/// Exact value of an integer polynomial at a rational point.
pub fn rational_eval(poly: &gencluster::fpoly::SparsePoly, point: &[BigRational]) -> BigRational {
    let mut total = BigRational::zero();
    for (m, c) in poly.terms() {
        let mut term = BigRational::from_integer(BigInt::from(c));
        for (v, &e) in m.exponents().iter().enumerate() {
            term *= rat_pow(&point[v], e as i64);
        }
        total += term;
    }
    total
}

pub fn table(d: &[usize], rows: &[Vec<f64>]) -> DegreeTable {
    DegreeTable::from_vecs(d, rows.to_vec()).unwrap()
}


type Family = (Vec<Vec<i64>>, Vec<i64>, Vec<usize>);

/// Exchange data of rank at most 3 whose right companion is of finite type
/// (A1xA1, A2, B2, G2, A3, B3/C3), in both orientations.
pub fn finite_type_family() -> Vec<ExchangeData> {
    let a2 = vec![vec![0, 1], vec![-1, 0]];
    let a3 = vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]];
    let a3_cyclic = vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]];
    let b3 = vec![vec![0, 1, 0], vec![-2, 0, 1], vec![0, -1, 0]];
    let base: Vec<Family> = vec![
        (vec![vec![0, 0], vec![0, 0]], vec![1, 1], vec![1, 2]),
        (a2.clone(), vec![1, 1], vec![1, 1]),
        (a2.clone(), vec![1, 1], vec![2, 1]),
        (a2.clone(), vec![1, 1], vec![1, 3]),
        (vec![vec![0, 1], vec![-2, 0]], vec![2, 1], vec![1, 1]),
        (a3.clone(), vec![1, 1, 1], vec![1, 1, 1]),
        (a3.clone(), vec![1, 1, 1], vec![2, 1, 1]),
        (a3, vec![1, 1, 1], vec![1, 1, 2]),
        (a3_cyclic, vec![1, 1, 1], vec![1, 1, 1]),
        (b3, vec![2, 1, 1], vec![1, 1, 1]),
    ];
    let mut out = Vec::new();
    for (rows, r, d) in base {
        let neg: Vec<Vec<i64>> = rows.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        for m in [rows, neg] {
            out.push(ExchangeData::new(IntMatrix::from_rows(&m).unwrap(), r.clone(), d.clone()).unwrap());
        }
    }
    out
}

/// One step of [`oracle_mutate_b`] and [`tropical_oracle`] in arbitrary
/// precision: returns the mutated `B` and tropical exponent vectors `g`.
pub fn big_tropical_step(b: &[Vec<BigInt>], g: &[Vec<BigInt>], k: usize, dk: i64) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = b.len();
    let dk = BigInt::from(dk);
    let zero = BigInt::zero();
    let p = |x: BigInt| if x > BigInt::zero() { x } else { BigInt::zero() };
    let mut nb = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            nb[i][j] = if i == k || j == k {
                -&b[i][j]
            } else {
                &b[i][j] + p(-&b[i][k] * &dk) * &b[k][j] + &b[i][k] * p(&dk * &b[k][j])
            };
        }
    }
    let gk = g[k].clone();
    let low: Vec<BigInt> = gk.iter().map(|e| (&dk * e).min(zero.clone())).collect();
    let mut ng = g.to_vec();
    for i in 0..n {
        if i == k {
            ng[i] = gk.iter().map(|e| -e).collect();
        } else {
            let bki = &b[k][i];
            for c in 0..n {
                ng[i][c] = &g[i][c] + p(&dk * bki) * &gk[c] - bki * &low[c];
            }
        }
    }
    (nb, ng)
}
