//! Built-in games, constructed as dual XOR/XOR* pairs from closed-form
//! task functions and input distributions, together with their reference
//! values and comparison tolerances.

use crate::game::{GameKind, GameSpec};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog key '{0}'")]
    UnknownKey(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

/// Comparison tolerance for exact fractional values stored as doubles.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance against closed-form reference values.
pub const CLOSED_FORM_TOL: f64 = 1e-4;
/// Tolerance against reference values quoted to 2-3 digits.
pub const QUOTED_TOL: f64 = 5e-3;

/// A reference value with its comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedValue {
    pub value: f64,
    pub tol: f64,
}

impl ExpectedValue {
    fn exact(value: f64) -> Self {
        ExpectedValue {
            value,
            tol: EXACT_TOL,
        }
    }

    fn closed_form(value: f64) -> Self {
        ExpectedValue {
            value,
            tol: CLOSED_FORM_TOL,
        }
    }

    fn quoted(value: f64) -> Self {
        ExpectedValue {
            value,
            tol: QUOTED_TOL,
        }
    }

    pub fn matches(&self, got: f64) -> bool {
        (got - self.value).abs() <= self.tol
    }
}

/// Reference values for the reset-augmented constraint class. The quantum
/// entry is a best-found bound: solvers must reach at least
/// `quantum_at_least`, with no claim of global optimality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrreversibleBounds {
    pub classical: ExpectedValue,
    pub quantum_at_least: f64,
}

/// The four reference values of a dual pair, plus reset-augmented bounds
/// where known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedBounds {
    pub classical_xor: ExpectedValue,
    pub quantum_xor: ExpectedValue,
    pub classical_xorstar_rev: ExpectedValue,
    pub quantum_xorstar_rev: ExpectedValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreversible: Option<IrreversibleBounds>,
}

impl ExpectedBounds {
    fn symmetric(classical: ExpectedValue, quantum: ExpectedValue) -> Self {
        ExpectedBounds {
            classical_xor: classical,
            quantum_xor: quantum,
            classical_xorstar_rev: classical,
            quantum_xorstar_rev: quantum,
            irreversible: None,
        }
    }
}

/// Both sides of a built dual pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    pub key: String,
    pub xor: GameSpec,
    pub xor_star: GameSpec,
    /// The kind the game is usually presented in; the CLI solves this side
    /// by default.
    pub native_kind: GameKind,
}

/// One row of the catalog listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub key: String,
    pub s_card: usize,
    pub t_card: usize,
    pub native_kind: GameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_n: Option<u32>,
    pub expected: ExpectedBounds,
}

pub const KEYS: [&str; 7] = [
    "chsh",
    "odd_cycle",
    "eaos",
    "qrac21",
    "bit_torpedo",
    "gbha_i3",
    "ra",
];

pub fn is_known_key(key: &str) -> bool {
    KEYS.contains(&key)
}

const DEFAULT_ODD_CYCLE_N: u32 = 3;

fn pair_from_tables(
    key: &str,
    xor_name: String,
    star_name: String,
    native_kind: GameKind,
    dist: Vec<Vec<f64>>,
    task: Vec<Vec<u8>>,
    encoding: Option<String>,
) -> DualPair {
    let xor = GameSpec::new(xor_name, GameKind::Xor, dist.clone(), task.clone(), encoding.clone())
        .expect("catalog tables are valid");
    let xor_star = GameSpec::new(star_name, GameKind::XorStar, dist, task, encoding)
        .expect("catalog tables are valid");
    DualPair {
        key: key.to_string(),
        xor,
        xor_star,
        native_kind,
    }
}

fn odd_cycle_n(params: Option<u32>) -> Result<u32, CatalogError> {
    let n = params.unwrap_or(DEFAULT_ODD_CYCLE_N);
    if n < 3 || n.is_multiple_of(2) {
        return Err(CatalogError::InvalidParam(format!(
            "odd_cycle needs odd n >= 3, got {n}"
        )));
    }
    Ok(n)
}

/// Construct the dual pair for `key`. `params` carries the cycle length
/// for `odd_cycle` (odd, >= 3; default 3) and is rejected elsewhere.
pub fn build(key: &str, params: Option<u32>) -> Result<DualPair, CatalogError> {
    if key != "odd_cycle" && params.is_some() {
        return Err(CatalogError::InvalidParam(format!(
            "key '{key}' takes no parameter"
        )));
    }
    match key {
        "chsh" => {
            let dist = vec![vec![0.25; 2]; 2];
            let task = (0..2)
                .map(|s| (0..2).map(|t| (s * t) as u8).collect())
                .collect();
            Ok(pair_from_tables(
                key,
                "chsh".into(),
                "chsh_star".into(),
                GameKind::Xor,
                dist,
                task,
                None,
            ))
        }
        "odd_cycle" => {
            let n = odd_cycle_n(params)? as usize;
            let w = 1.0 / (2 * n) as f64;
            let dist: Vec<Vec<f64>> = (0..n)
                .map(|s| {
                    (0..n)
                        .map(|t| if t == s || t == (s + 1) % n { w } else { 0.0 })
                        .collect()
                })
                .collect();
            let task: Vec<Vec<u8>> = (0..n)
                .map(|s| (0..n).map(|t| u8::from((s + 1) % n == t)).collect())
                .collect();
            Ok(pair_from_tables(
                key,
                format!("odd_cycle_{n}"),
                format!("odd_cycle_{n}_star"),
                GameKind::Xor,
                dist,
                task,
                None,
            ))
        }
        "eaos" => {
            let dist = vec![vec![1.0 / 9.0; 3]; 3];
            let task = (0..3)
                .map(|s| (0..3).map(|t| u8::from(s != t)).collect())
                .collect();
            Ok(pair_from_tables(
                key,
                "eaos".into(),
                "eaos_star".into(),
                GameKind::Xor,
                dist,
                task,
                None,
            ))
        }
        "qrac21" => {
            let dist = vec![vec![0.125; 2]; 4];
            let task = (0..4u8)
                .map(|s| {
                    let (s0, s1) = (s >> 1, s & 1);
                    (0..2u8).map(|t| if t == 0 { s0 } else { s1 }).collect()
                })
                .collect();
            Ok(pair_from_tables(
                key,
                "qrac21_xor".into(),
                "qrac21".into(),
                GameKind::XorStar,
                dist,
                task,
                Some("s = (s0, s1) -> 2*s0 + s1".into()),
            ))
        }
        "bit_torpedo" => {
            let dist = vec![vec![1.0 / 12.0; 3]; 4];
            let task = (0..4u8)
                .map(|s| {
                    let (s0, s1) = (s >> 1, s & 1);
                    (0..3u8)
                        .map(|t| {
                            let term0 = (s0 * ((t + 1) % 3)) % 2;
                            let term1 = (s1 * t) % 2;
                            let term2 = ((s0 ^ s1) * ((t + 2) % 3)) % 2;
                            term0 ^ term1 ^ term2
                        })
                        .collect()
                })
                .collect();
            Ok(pair_from_tables(
                key,
                "bit_torpedo_xor".into(),
                "bit_torpedo".into(),
                GameKind::XorStar,
                dist,
                task,
                Some("s = (s0, s1) -> 2*s0 + s1".into()),
            ))
        }
        "gbha_i3" => {
            let dist: Vec<Vec<f64>> = (0..3)
                .map(|s| {
                    (0..2)
                        .map(|t| if s == 2 && t == 1 { 0.0 } else { 0.2 })
                        .collect()
                })
                .collect();
            let task = (0..3)
                .map(|s| (0..2).map(|t| u8::from(s + t >= 2)).collect())
                .collect();
            Ok(pair_from_tables(
                key,
                "gbha_i3_xor".into(),
                "gbha_i3".into(),
                GameKind::XorStar,
                dist,
                task,
                None,
            ))
        }
        "ra" => {
            let dist = vec![vec![1.0 / 16.0; 4]; 4];
            let task = (0..4usize)
                .map(|s| {
                    (0..4usize)
                        .map(|t| u8::from(s * t == 0) ^ u8::from(s * t == 3))
                        .collect()
                })
                .collect();
            Ok(pair_from_tables(
                key,
                "ra_xor".into(),
                "ra".into(),
                GameKind::XorStar,
                dist,
                task,
                None,
            ))
        }
        other => Err(CatalogError::UnknownKey(other.to_string())),
    }
}

/// Reference values for `key` with per-value tolerances.
pub fn expected_bounds(key: &str, params: Option<u32>) -> Result<ExpectedBounds, CatalogError> {
    if key != "odd_cycle" && params.is_some() {
        return Err(CatalogError::InvalidParam(format!(
            "key '{key}' takes no parameter"
        )));
    }
    let cos2 = |x: f64| x.cos().powi(2);
    match key {
        "chsh" => Ok(ExpectedBounds::symmetric(
            ExpectedValue::exact(0.75),
            ExpectedValue::closed_form(cos2(PI / 8.0)),
        )),
        "odd_cycle" => {
            let n = odd_cycle_n(params)? as f64;
            Ok(ExpectedBounds::symmetric(
                ExpectedValue::exact(1.0 - 1.0 / (2.0 * n)),
                ExpectedValue::closed_form(cos2(PI / (4.0 * n))),
            ))
        }
        "eaos" => Ok(ExpectedBounds::symmetric(
            ExpectedValue::exact(7.0 / 9.0),
            ExpectedValue::closed_form(5.0 / 6.0),
        )),
        "qrac21" => Ok(ExpectedBounds::symmetric(
            ExpectedValue::exact(0.75),
            ExpectedValue::closed_form(cos2(PI / 8.0)),
        )),
        "bit_torpedo" => Ok(ExpectedBounds::symmetric(
            ExpectedValue::exact(0.75),
            ExpectedValue::quoted(0.789),
        )),
        "gbha_i3" => Ok(ExpectedBounds::symmetric(
            ExpectedValue::exact(0.8),
            ExpectedValue::quoted(0.88),
        )),
        "ra" => Ok(ExpectedBounds {
            irreversible: Some(IrreversibleBounds {
                classical: ExpectedValue::exact(0.875),
                quantum_at_least: 0.885 - QUOTED_TOL,
            }),
            ..ExpectedBounds::symmetric(
                ExpectedValue::exact(0.8125),
                ExpectedValue::closed_form(0.8125),
            )
        }),
        other => Err(CatalogError::UnknownKey(other.to_string())),
    }
}

/// The full catalog listing, with `odd_cycle` at its default length.
pub fn entries() -> Vec<CatalogEntry> {
    KEYS.iter()
        .map(|key| {
            let pair = build(key, None).expect("catalog keys build");
            let expected = expected_bounds(key, None).expect("catalog keys have bounds");
            CatalogEntry {
                key: (*key).to_string(),
                s_card: pair.xor.s_card,
                t_card: pair.xor.t_card,
                native_kind: pair.native_kind,
                param_n: (*key == "odd_cycle").then_some(DEFAULT_ODD_CYCLE_N),
                expected,
            }
        })
        .collect()
}
