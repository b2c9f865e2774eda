//! Document format for large T4 data and the embedded reference dataset.
//!
//! All rationals travel as strings (`"-7/15"`); permutations are 1-based
//! 4-element arrays. Field names: `states`, `perms`, `p`, `c`, `k`, `nodes`.

use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, parse_rational, ParseRationalError};
use crate::t4::{LargeT4Data, Permutation, T4Error};
use crate::{QVector, Rational};

/// The four states in `R^3`, orderings, staircases and frequency nodes of the
/// reference configuration.
pub const PAPER_PRESET_JSON: &str = include_str!("../data/paper_preset.json");

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error(transparent)]
    T4(#[from] T4Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LargeT4Document {
    pub states: Vec<Vec<String>>,
    pub perms: Vec<Vec<usize>>,
    pub p: Vec<Vec<String>>,
    pub c: Vec<Vec<Vec<String>>>,
    pub k: Vec<Vec<String>>,
    pub nodes: Vec<Vec<String>>,
}

fn vector(raw: &[String], len: usize, what: &str) -> Result<QVector, DataError> {
    if raw.len() != len {
        return Err(DataError::Shape(format!("{what}: expected {len} entries, got {}", raw.len())));
    }
    raw.iter().map(|s| parse_rational(s).map_err(DataError::from)).collect()
}

fn exact<T, const N: usize>(items: Vec<T>, what: &str) -> Result<[T; N], DataError> {
    let len = items.len();
    items.try_into().map_err(|_| DataError::Shape(format!("{what}: expected {N} items, got {len}")))
}

impl LargeT4Document {
    pub fn parse(text: &str) -> Result<Self, DataError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_data(&self) -> Result<LargeT4Data, DataError> {
        let states =
            exact::<_, 4>(self.states.iter().map(|s| vector(s, 3, "state")).collect::<Result<_, _>>()?, "states")?;
        let perms = exact::<_, 3>(
            self.perms
                .iter()
                .map(|p| {
                    let arr: [usize; 4] = exact(p.clone(), "perm")?;
                    Ok(Permutation::from_one_based(arr)?)
                })
                .collect::<Result<Vec<_>, DataError>>()?,
            "perms",
        )?;
        let p = exact::<_, 3>(self.p.iter().map(|v| vector(v, 3, "p")).collect::<Result<_, _>>()?, "p")?;
        let c = exact::<_, 3>(
            self.c
                .iter()
                .map(|legs| {
                    let legs: Vec<QVector> = legs.iter().map(|v| vector(v, 3, "c")).collect::<Result<_, _>>()?;
                    exact::<_, 4>(legs, "c per ordering")
                })
                .collect::<Result<Vec<_>, DataError>>()?,
            "c",
        )?;
        let k = exact::<_, 3>(
            self.k
                .iter()
                .map(|ks| exact::<Rational, 4>(vector(ks, 4, "k")?, "k"))
                .collect::<Result<Vec<_>, DataError>>()?,
            "k",
        )?;
        let nodes: Vec<QVector> = self.nodes.iter().map(|n| vector(n, 2, "node")).collect::<Result<_, _>>()?;
        if nodes.len() != 12 {
            return Err(DataError::Shape(format!("nodes: expected 12, got {}", nodes.len())));
        }
        Ok(LargeT4Data::new(states, perms, p, c, k, nodes)?)
    }

    pub fn from_data(data: &LargeT4Data) -> Self {
        let strs = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        Self {
            states: data.states.iter().map(|s| strs(s)).collect(),
            perms: data.perms.iter().map(|p| p.one_based().to_vec()).collect(),
            p: data.configs.iter().map(|cfg| strs(&cfg.p)).collect(),
            c: data.configs.iter().map(|cfg| cfg.c.iter().map(|v| strs(v)).collect()).collect(),
            k: data.configs.iter().map(|cfg| strs(&cfg.k)).collect(),
            nodes: data.nodes.iter().map(|n| strs(n)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

pub fn parse_large_t4(text: &str) -> Result<LargeT4Data, DataError> {
    LargeT4Document::parse(text)?.to_data()
}

pub fn paper_preset() -> LargeT4Data {
    parse_large_t4(PAPER_PRESET_JSON).expect("embedded preset is well formed")
}

/// First three nodes of the first ordering; their symbols are three legs of
/// one staircase and span `R^3`.
pub fn paper_potential_basis(data: &LargeT4Data) -> [QVector; 3] {
    [data.node(0, 0).clone(), data.node(0, 1).clone(), data.node(0, 2).clone()]
}

/// Parses `"a,b,c"` into a vector of rationals.
pub fn parse_vector(text: &str) -> Result<QVector, ParseRationalError> {
    text.split(',').map(parse_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn preset_parses() {
        let data = paper_preset();
        assert_eq!(data.configs[0].p, vec![q(2, 15), q(4, 15), q(8, 15)]);
        assert_eq!(data.perms[1].one_based(), [4, 1, 2, 3]);
        assert_eq!(data.configs[1].points[0], data.states[3]);
        assert_eq!(data.node(2, 3), &vec![q(-20, 1), q(-9, 1)]);
    }

    #[test]
    fn document_round_trip() {
        let data = paper_preset();
        let doc = LargeT4Document::from_data(&data);
        assert_eq!(parse_large_t4(&doc.to_json()).unwrap(), data);
    }

    #[test]
    fn malformed_documents_rejected() {
        assert!(matches!(parse_large_t4(&PAPER_PRESET_JSON[..200]), Err(DataError::Json(_))));
        let bad = PAPER_PRESET_JSON.replacen("\"2/15\"", "\"2/0\"", 1);
        assert!(matches!(parse_large_t4(&bad), Err(DataError::Rational(_))));
        let bad = PAPER_PRESET_JSON.replacen("[1, 2, 3, 4]", "[1, 2, 2, 4]", 1);
        assert!(matches!(parse_large_t4(&bad), Err(DataError::T4(_))));
        let bad = PAPER_PRESET_JSON.replacen("[\"-14\", \"5\"], ", "", 1);
        assert!(matches!(parse_large_t4(&bad), Err(DataError::Shape(_))));
    }

    #[test]
    fn vector_literal() {
        assert_eq!(parse_vector("7/15,-1/15,-2/15").unwrap(), vec![q(7, 15), q(-1, 15), q(-2, 15)]);
        assert!(parse_vector("1,,2").is_err());
    }
}
