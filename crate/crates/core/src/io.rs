//! JSON file format for seeds and groupoid seeds.
//!
//! ```json
//! {"n": 2, "B": [[0, 1], [-1, 0]], "R": [1, 1], "d": [2, 1],
//!  "y": [2.0, 3.0], "z": {"1,1": 0.5},
//!  "q": [0.1, -0.2], "a": {"1,1": 0.0}}
//! ```
//!
//! Indices in the `"i,s"` keys are 1-based. `q` and `a` are only read for
//! groupoid seeds; a missing `a` means all zeros.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::{DegreeTable, ExchangeData, Seed};
use crate::groupoid::GroupoidSeed;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "R")]
    pub r: Vec<i64>,
    pub d: Vec<usize>,
    pub y: Vec<f64>,
    #[serde(default)]
    pub z: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<BTreeMap<String, f64>>,
}

fn parse_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Format(format!("index key {key:?} is not of the form \"i,s\""));
    let (i, s) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let s: usize = s.trim().parse().map_err(|_| bad())?;
    if i == 0 || s == 0 {
        return Err(bad());
    }
    Ok((i - 1, s))
}

fn table_from_map(d: &[usize], map: &BTreeMap<String, f64>, what: &str) -> Result<DegreeTable> {
    let mut table = DegreeTable::zeros(d);
    let mut seen = DegreeTable::zeros(d);
    for (key, &v) in map {
        let (i, s) = parse_key(key)?;
        if i >= d.len() || s >= d[i] {
            return Err(Error::Format(format!("{what} index {key} does not exist for d = {d:?}")));
        }
        table.set(i, s, v);
        seen.set(i, s, 1.0);
    }
    if let Some((i, s, _)) = seen.iter().find(|&(_, _, v)| v == 0.0) {
        return Err(Error::Format(format!("missing {what} value \"{},{s}\"", i + 1)));
    }
    Ok(table)
}

fn map_from_table(t: &DegreeTable) -> BTreeMap<String, f64> {
    t.iter().map(|(i, s, v)| (format!("{},{s}", i + 1), v)).collect()
}

impl SeedFile {
    fn exchange(&self) -> Result<ExchangeData> {
        if self.b.len() != self.n {
            return Err(Error::Format(format!("n = {} but B has {} rows", self.n, self.b.len())));
        }
        ExchangeData::new(IntMatrix::from_rows(&self.b)?, self.r.clone(), self.d.clone())
    }

    pub fn to_seed(&self) -> Result<Seed> {
        let ex = self.exchange()?;
        let z = table_from_map(ex.d(), &self.z, "z")?;
        Seed::new(ex, self.y.clone(), z)
    }

    pub fn to_groupoid_seed(&self) -> Result<GroupoidSeed> {
        let seed = self.to_seed()?;
        let q = self
            .q
            .clone()
            .ok_or_else(|| Error::Format("groupoid seed needs \"q\"".into()))?;
        let a = match &self.a {
            Some(map) => table_from_map(seed.exchange().d(), map, "a")?,
            None => DegreeTable::zeros(seed.exchange().d()),
        };
        GroupoidSeed::new(seed, q, a)
    }

    pub fn from_seed(seed: &Seed) -> Self {
        let ex = seed.exchange();
        Self {
            n: seed.rank(),
            b: ex.b().rows(),
            r: ex.r().to_vec(),
            d: ex.d().to_vec(),
            y: seed.y().to_vec(),
            z: map_from_table(seed.z()),
            q: None,
            a: None,
        }
    }

    pub fn from_groupoid_seed(g: &GroupoidSeed) -> Self {
        Self {
            q: Some(g.q().to_vec()),
            a: Some(map_from_table(g.a())),
            ..Self::from_seed(g.base())
        }
    }
}

pub fn parse_seed_file(text: &str) -> Result<SeedFile> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn seed_from_json(text: &str) -> Result<Seed> {
    parse_seed_file(text)?.to_seed()
}

pub fn groupoid_seed_from_json(text: &str) -> Result<GroupoidSeed> {
    parse_seed_file(text)?.to_groupoid_seed()
}

pub fn seed_to_json(seed: &Seed) -> String {
    serde_json::to_string_pretty(&SeedFile::from_seed(seed)).expect("seed serializes")
}

pub fn groupoid_seed_to_json(g: &GroupoidSeed) -> String {
    serde_json::to_string_pretty(&SeedFile::from_groupoid_seed(g)).expect("seed serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"n": 2, "B": [[0, 1], [-1, 0]], "R": [1, 1], "d": [2, 1],
        "y": [2.0, 3.0], "z": {"1,1": 0.5}, "q": [0.1, -0.2]}"#;

    #[test]
    fn parses_sample() {
        let s = seed_from_json(SAMPLE).unwrap();
        assert_eq!(s.z().get(0, 1), 0.5);
        assert_eq!(s.y(), &[2.0, 3.0]);
        let g = groupoid_seed_from_json(SAMPLE).unwrap();
        assert_eq!(g.q(), &[0.1, -0.2]);
        assert_eq!(g.a().get(0, 1), 0.0);
    }

    #[test]
    fn round_trip() {
        let g = groupoid_seed_from_json(SAMPLE).unwrap();
        assert_eq!(groupoid_seed_from_json(&groupoid_seed_to_json(&g)).unwrap(), g);
        let s = seed_from_json(SAMPLE).unwrap();
        assert_eq!(seed_from_json(&seed_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        let missing_z = SAMPLE.replace(r#""z": {"1,1": 0.5}, "#, "");
        assert!(seed_from_json(&missing_z).is_err());
        let extra = SAMPLE.replace(r#""1,1": 0.5"#, r#""1,1": 0.5, "2,1": 1.0"#);
        assert!(seed_from_json(&extra).is_err());
        let bad_key = SAMPLE.replace(r#""1,1""#, r#""0,1""#);
        assert!(seed_from_json(&bad_key).is_err());
        assert!(seed_from_json("{").is_err());
        let wrong_n = SAMPLE.replace(r#""n": 2"#, r#""n": 3"#);
        assert!(seed_from_json(&wrong_n).is_err());
    }
}
