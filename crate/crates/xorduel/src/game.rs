//! Game definitions: input sets, joint input distribution, binary task
//! table, and the winning predicate.
//!
//! A game is pure data. An XOR game is won when the parity of the two
//! players' output bits equals the task bit `f(s, t)`; an XOR* game is won
//! when the single measured output bit equals it. All solvers consume the
//! same [`GameSpec`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for the distribution normalization check.
pub const DIST_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("distribution sums to {sum}, expected 1 within {DIST_SUM_TOL}")]
    NonNormalizedDistribution { sum: f64 },
    #[error("negative probability {value} at (s={s}, t={t})")]
    NegativeProbability { s: usize, t: usize, value: f64 },
    #[error("task entry {value} at (s={s}, t={t}) is not a bit")]
    NonBinaryTask { s: usize, t: usize, value: u8 },
    #[error("{what} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        what: &'static str,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("input pair (s={s}, t={t}) out of range for a {s_card}x{t_card} game")]
    IndexOutOfRange {
        s: usize,
        t: usize,
        s_card: usize,
        t_card: usize,
    },
}

/// Which winning predicate the game uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    /// Two spatially separated players output bits `a`, `b`; win iff
    /// `a XOR b = f(s, t)`.
    Xor,
    /// One resource system passes through Alice's then Bob's controlled
    /// operation and a fixed final measurement with outcome `m`; win iff
    /// `m = f(s, t)`.
    XorStar,
}

impl GameKind {
    /// The winning predicate: does `outcome_bit` win against task bit `f`?
    /// For XOR games `outcome_bit` is read as the parity `a XOR b`.
    pub fn wins(&self, f: u8, outcome_bit: u8) -> bool {
        f == outcome_bit
    }
}

/// A two-player binary-output game: cardinalities, joint input
/// distribution `p(s, t)`, and task table `f(s, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub name: String,
    pub kind: GameKind,
    pub s_card: usize,
    pub t_card: usize,
    pub dist: Vec<Vec<f64>>,
    pub task: Vec<Vec<u8>>,
    /// Optional note recording how tuple-valued inputs were flattened to
    /// indices, e.g. `s = (s0, s1) -> 2*s0 + s1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_encoding: Option<String>,
}

impl GameSpec {
    /// Build a spec from matrices, deriving the cardinalities, and validate.
    pub fn new(
        name: impl Into<String>,
        kind: GameKind,
        dist: Vec<Vec<f64>>,
        task: Vec<Vec<u8>>,
        input_encoding: Option<String>,
    ) -> Result<Self, GameError> {
        let s_card = dist.len();
        let t_card = dist.first().map_or(0, Vec::len);
        let spec = GameSpec {
            name: name.into(),
            kind,
            s_card,
            t_card,
            dist,
            task,
            input_encoding,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Check every structural invariant, reporting the first violation:
    /// matrix shapes, probability nonnegativity, normalization, and
    /// binary task entries. Pure; safe to call repeatedly.
    pub fn validate(&self) -> Result<(), GameError> {
        self.check_shape("dist", self.dist.len(), self.dist.iter().map(Vec::len))?;
        self.check_shape("task", self.task.len(), self.task.iter().map(Vec::len))?;
        for (s, row) in self.dist.iter().enumerate() {
            for (t, &p) in row.iter().enumerate() {
                if p < 0.0 || !p.is_finite() {
                    return Err(GameError::NegativeProbability { s, t, value: p });
                }
            }
        }
        let sum: f64 = self.dist.iter().flatten().sum();
        if (sum - 1.0).abs() > DIST_SUM_TOL {
            return Err(GameError::NonNormalizedDistribution { sum });
        }
        for (s, row) in self.task.iter().enumerate() {
            for (t, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(GameError::NonBinaryTask { s, t, value: v });
                }
            }
        }
        Ok(())
    }

    fn check_shape(
        &self,
        what: &'static str,
        rows: usize,
        cols: impl Iterator<Item = usize>,
    ) -> Result<(), GameError> {
        let mismatch = |r: usize, c: usize| GameError::ShapeMismatch {
            what,
            rows: r,
            cols: c,
            expected_rows: self.s_card,
            expected_cols: self.t_card,
        };
        if rows != self.s_card || self.s_card == 0 || self.t_card == 0 {
            return Err(mismatch(rows, 0));
        }
        for c in cols {
            if c != self.t_card {
                return Err(mismatch(rows, c));
            }
        }
        Ok(())
    }

    /// Probability mass the pair `(s, t)` contributes when the outcome bit
    /// is `outcome_bit`: `p(s, t)` if the predicate is satisfied, else 0.
    pub fn win_weight(&self, s: usize, t: usize, outcome_bit: u8) -> Result<f64, GameError> {
        if s >= self.s_card || t >= self.t_card {
            return Err(GameError::IndexOutOfRange {
                s,
                t,
                s_card: self.s_card,
                t_card: self.t_card,
            });
        }
        if self.kind.wins(self.task[s][t], outcome_bit & 1) {
            Ok(self.dist[s][t])
        } else {
            Ok(0.0)
        }
    }

    /// Input pairs with nonzero probability, in row-major order.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, f64, u8)> + '_ {
        (0..self.s_card).flat_map(move |s| {
            (0..self.t_card).filter_map(move |t| {
                let p = self.dist[s][t];
                (p > 0.0).then_some((s, t, p, self.task[s][t]))
            })
        })
    }

    /// Winning probability of always outputting `bit`, the best value any
    /// strategy that ignores the inputs can reach.
    pub fn constant_output_value(&self, bit: u8) -> f64 {
        let mut acc = 0.0;
        for s in 0..self.s_card {
            for t in 0..self.t_card {
                if self.task[s][t] == bit {
                    acc += self.dist[s][t];
                }
            }
        }
        acc
    }

    /// Same dist and task, other kind; used to build dual pairs.
    pub fn with_kind(&self, kind: GameKind, name: impl Into<String>) -> GameSpec {
        GameSpec {
            name: name.into(),
            kind,
            ..self.clone()
        }
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spec(s_card: usize, t_card: usize, seed: u64) -> GameSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Vec<f64>> = (0..s_card)
            .map(|_| (0..t_card).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let total: f64 = raw.iter().flatten().sum();
        let dist = raw
            .iter()
            .map(|row| row.iter().map(|p| p / total).collect())
            .collect();
        let task = (0..s_card)
            .map(|_| (0..t_card).map(|_| rng.gen_range(0..=1)).collect())
            .collect();
        GameSpec::new("prop", GameKind::Xor, dist, task, None).unwrap()
    }

    proptest! {
        #[test]
        fn win_weights_partition_the_distribution(
            s_card in 1usize..6,
            t_card in 1usize..6,
            seed in any::<u64>(),
        ) {
            let spec = random_spec(s_card, t_card, seed);
            let mut total = 0.0;
            for s in 0..s_card {
                for t in 0..t_card {
                    let w0 = spec.win_weight(s, t, 0).unwrap();
                    let w1 = spec.win_weight(s, t, 1).unwrap();
                    prop_assert_eq!(w0 + w1, spec.dist[s][t]);
                    prop_assert!(w0 == 0.0 || w1 == 0.0);
                    total += w0 + w1;
                }
            }
            prop_assert!((total - 1.0).abs() < 1e-9);
        }

        #[test]
        fn spec_json_round_trip(
            s_card in 1usize..5,
            t_card in 1usize..5,
            seed in any::<u64>(),
        ) {
            let spec = random_spec(s_card, t_card, seed);
            let json = serde_json::to_string(&spec).unwrap();
            let back: GameSpec = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
