//! Types shared by the classical and quantum solvers: constraint modes,
//! optimizer configuration, solve results, and the strategy envelope used
//! for serialization.

use crate::classical::{DeterministicXorStarStrategy, DeterministicXorStrategy};
use crate::game::{GameError, GameKind};
use crate::quantum::{QuantumXorStarStrategy, QuantumXorStrategy, VectorStrategy};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on `|S| + |T|` for exhaustive classical enumeration.
pub const ENUMERATION_CARD_LIMIT: usize = 26;

/// Constraint class a game is solved under.
///
/// `Xor` applies to XOR games; the two star modes apply to XOR* games and
/// differ in whether Bob may use reset gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Xor,
    XorStarReversible,
    XorStarIrreversible,
}

impl SolveMode {
    pub fn compatible_with(&self, kind: GameKind) -> bool {
        match self {
            SolveMode::Xor => kind == GameKind::Xor,
            _ => kind == GameKind::XorStar,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMode::Xor => "xor",
            SolveMode::XorStarReversible => "xor_star_reversible",
            SolveMode::XorStarIrreversible => "xor_star_irreversible",
        }
    }
}

impl std::fmt::Display for SolveMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("strategy {what} has length {got}, game expects {expected}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("reset gate present in a reversible-only context")]
    ReversibilityViolation,
    #[error("|S| + |T| = {total} exceeds the enumeration limit {ENUMERATION_CARD_LIMIT}")]
    CardinalityTooLarge { total: usize },
    #[error("mode {mode} is incompatible with a {kind:?} game")]
    IncompatibleMode { kind: GameKind, mode: SolveMode },
    #[error("optimizer failed to reach the constant-output floor {floor} (best {best})")]
    NonConvergence { best: f64, floor: f64 },
    #[error("dual pair specs disagree on dist or task tables")]
    SpecMismatch,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Knobs for the multi-start derivative-free optimizers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: u32,
    pub seed: u64,
    pub inner_tol: f64,
    pub max_iters: u32,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 64,
            seed: 0,
            inner_tol: 1e-9,
            max_iters: 2000,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimizerConfig {
            seed,
            ..Default::default()
        }
    }
}

/// Any strategy the solvers produce or the serialization layer accepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Strategy {
    DetXor(DeterministicXorStrategy),
    DetXorstar(DeterministicXorStarStrategy),
    QXor(QuantumXorStrategy),
    QXorstar(QuantumXorStarStrategy),
    Vector(VectorStrategy),
}

/// Outcome of one solver run: the best value found, the strategy achieving
/// it, and convergence metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: f64,
    pub strategy: Strategy,
    pub restarts_used: u32,
    pub converged: bool,
    pub elapsed_ms: u64,
}

impl SolveResult {
    /// Zero the wall-clock field so outputs are byte-reproducible.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = 0;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_matches_documented_values() {
        let cfg = OptimizerConfig::default();
        assert_eq!(cfg.restarts, 64);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.inner_tol, 1e-9);
        assert_eq!(cfg.max_iters, 2000);
    }

    #[test]
    fn mode_kind_compatibility() {
        assert!(SolveMode::Xor.compatible_with(GameKind::Xor));
        assert!(!SolveMode::Xor.compatible_with(GameKind::XorStar));
        assert!(SolveMode::XorStarReversible.compatible_with(GameKind::XorStar));
        assert!(SolveMode::XorStarIrreversible.compatible_with(GameKind::XorStar));
        assert!(!SolveMode::XorStarIrreversible.compatible_with(GameKind::Xor));
    }

    #[test]
    fn strategy_tag_names() {
        let s = Strategy::DetXor(DeterministicXorStrategy {
            a_map: vec![0, 1],
            b_map: vec![1, 0],
        });
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"type\":\"det_xor\""));
        assert!(json.contains("\"a\":[0,1]"));
        assert!(json.contains("\"b\":[1,0]"));
    }
}
