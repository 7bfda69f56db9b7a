//! Built-in periodicities of finite type in rank two.
//!
//! Each entry is re-checked on demand by [`CatalogEntry::admit`]: its final
//! C-matrix must be the permutation matrix of σ, it must satisfy the z-parity
//! condition, and the seed mutation must return to the start at random points.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exchange::{
    check_sigma_periodicity, validate_z_parity, DegreeTable, ExchangeData, MutationSequence,
    Permutation, Seed,
};
use crate::identities::PeriodicityInstance;
use crate::matrix::IntMatrix;
use crate::search::random_seed;
use crate::tropical::CPattern;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub exchange: ExchangeData,
    pub sequence: MutationSequence,
}

fn alternating(len: usize) -> Vec<usize> {
    (0..len).map(|l| l % 2).collect()
}

fn entry(
    name: &'static str,
    description: &'static str,
    b: [[i64; 2]; 2],
    r: [i64; 2],
    d: [usize; 2],
    len: usize,
    sigma: [usize; 2],
) -> CatalogEntry {
    let b = IntMatrix::from_rows(&[b[0].to_vec(), b[1].to_vec()]).expect("2x2 matrix");
    let exchange = ExchangeData::new(b, r.to_vec(), d.to_vec()).expect("valid exchange data");
    let sequence = MutationSequence::new(alternating(len), Permutation::new(sigma.to_vec()).expect("permutation"))
        .expect("valid sequence");
    CatalogEntry {
        name,
        description,
        exchange,
        sequence,
    }
}

/// All built-in entries.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry("a1xa1", "type A1 x A1, B = 0", [[0, 0], [0, 0]], [1, 1], [1, 1], 4, [0, 1]),
        entry("a2", "type A2, the pentagon", [[0, 1], [-1, 0]], [1, 1], [1, 1], 5, [1, 0]),
        entry("b2", "type B2", [[0, 1], [-2, 0]], [2, 1], [1, 1], 6, [0, 1]),
        entry("g2", "type G2", [[0, 1], [-3, 0]], [3, 1], [1, 1], 8, [0, 1]),
        entry(
            "gen21",
            "generalized, B of type A2 with d = (2, 1); companion of type B2",
            [[0, 1], [-1, 0]],
            [1, 1],
            [2, 1],
            6,
            [0, 1],
        ),
        entry(
            "gen31",
            "generalized, B of type A2 with d = (3, 1); companion of type G2",
            [[0, 1], [-1, 0]],
            [1, 1],
            [3, 1],
            8,
            [0, 1],
        ),
    ]
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

impl CatalogEntry {
    pub fn instance(&self, y: Vec<f64>, z: DegreeTable) -> Result<PeriodicityInstance> {
        PeriodicityInstance::new(Seed::new(self.exchange.clone(), y, z)?, self.sequence.clone())
    }

    pub fn random_instance(&self, rng: &mut impl Rng) -> Result<PeriodicityInstance> {
        PeriodicityInstance::new(random_seed(&self.exchange, rng)?, self.sequence.clone())
    }

    /// Re-derives the entry: C-matrix criterion, z-parity, and numerical
    /// return at `draws` random points to relative tolerance `tol`.
    pub fn admit(&self, draws: usize, tol: f64, rng: &mut impl Rng) -> Result<bool> {
        let pattern = CPattern::along(&self.exchange, self.sequence.directions())?;
        if pattern.final_permutation().as_deref() != Some(self.sequence.sigma().images()) {
            return Ok(false);
        }
        if !validate_z_parity(&self.sequence, &self.exchange) {
            return Ok(false);
        }
        for _ in 0..draws {
            let start = random_seed(&self.exchange, rng)?;
            if !check_sigma_periodicity(&start, &self.sequence, pattern.signs(), tol)?.periodic {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
