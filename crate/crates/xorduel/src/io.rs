//! Loading and saving games, strategies, and result envelopes.
//!
//! JSON throughout, one document per file. Doubles are written in the
//! shortest form that parses back to the identical bit pattern, so a
//! load -> save -> load cycle is a fixed point and reruns with the same
//! inputs and seed produce byte-identical files.

use crate::duality::DualPairReport;
use crate::game::{GameError, GameSpec};
use crate::solve::{OptimizerConfig, SolveResult, Strategy};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoResultError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation error: {0}")]
    Validation(#[from] GameError),
}

/// Either payload an envelope can carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvelopeResult {
    Solve(SolveResult),
    Dual(Box<DualPairReport>),
}

impl From<DualPairReport> for EnvelopeResult {
    fn from(report: DualPairReport) -> Self {
        EnvelopeResult::Dual(Box::new(report))
    }
}

impl From<SolveResult> for EnvelopeResult {
    fn from(result: SolveResult) -> Self {
        EnvelopeResult::Solve(result)
    }
}

/// Everything a run needs to be reproduced and consumed downstream: the
/// game and configuration echoed back, the result, and run metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub tool_version: String,
    pub game: GameSpec,
    pub mode: String,
    pub config: OptimizerConfig,
    pub result: EnvelopeResult,
    pub timestamp: String,
}

impl ResultEnvelope {
    pub fn new(
        game: GameSpec,
        mode: impl Into<String>,
        config: OptimizerConfig,
        result: EnvelopeResult,
        timestamp: String,
    ) -> Self {
        ResultEnvelope {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            game,
            mode: mode.into(),
            config,
            result,
            timestamp,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}

/// Parse and validate a game file.
pub fn load_game(path: impl AsRef<Path>) -> Result<GameSpec, IoResultError> {
    let text = fs::read_to_string(path)?;
    let spec: GameSpec = serde_json::from_str(&text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn save_game(spec: &GameSpec, path: impl AsRef<Path>) -> Result<(), IoResultError> {
    let mut s = serde_json::to_string_pretty(spec)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

pub fn load_strategy(path: impl AsRef<Path>) -> Result<Strategy, IoResultError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save_strategy(strategy: &Strategy, path: impl AsRef<Path>) -> Result<(), IoResultError> {
    let mut s = serde_json::to_string_pretty(strategy)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

pub fn load_envelope(path: impl AsRef<Path>) -> Result<ResultEnvelope, IoResultError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save_result(envelope: &ResultEnvelope, path: impl AsRef<Path>) -> Result<(), IoResultError> {
    fs::write(path, envelope.to_json())?;
    Ok(())
}

/// Format seconds since the Unix epoch as an ISO-8601 UTC timestamp.
pub fn iso8601_utc(secs_since_epoch: u64) -> String {
    let secs_of_day = secs_since_epoch % 86_400;
    let days = secs_since_epoch / 86_400;
    let (h, m, s) = (secs_of_day / 3600, (secs_of_day / 60) % 60, secs_of_day % 60);

    // Civil-from-days, Gregorian calendar.
    let z = days as i64 + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let mo = if mp < 10 { mp + 3 } else { mp - 9 };
    let y = if mo <= 2 { y + 1 } else { y };

    format!("{y:04}-{mo:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameKind;
    use crate::solve::SolveMode;

    fn tmpdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "xorduel-io-{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_nanos()
        ));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn chsh() -> GameSpec {
        GameSpec::new(
            "chsh",
            GameKind::Xor,
            vec![vec![0.25, 0.25], vec![0.25, 0.25]],
            vec![vec![0, 0], vec![0, 1]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn game_round_trip_is_a_fixed_point() {
        let dir = tmpdir();
        let path = dir.join("chsh.json");
        save_game(&chsh(), &path).unwrap();
        let loaded = load_game(&path).unwrap();
        assert_eq!(loaded, chsh());
        let again = dir.join("chsh2.json");
        save_game(&loaded, &again).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
    }

    #[test]
    fn malformed_kind_is_a_parse_error() {
        let dir = tmpdir();
        let path = dir.join("bad.json");
        fs::write(
            &path,
            r#"{"name":"x","kind":"xor3","s_card":1,"t_card":1,"dist":[[1.0]],"task":[[0]]}"#,
        )
        .unwrap();
        assert!(matches!(load_game(&path), Err(IoResultError::Parse(_))));
    }

    #[test]
    fn non_normalized_file_is_a_validation_error() {
        let dir = tmpdir();
        let path = dir.join("bad.json");
        fs::write(
            &path,
            r#"{"name":"x","kind":"xor","s_card":1,"t_card":2,"dist":[[0.5,0.4]],"task":[[0,1]]}"#,
        )
        .unwrap();
        assert!(matches!(
            load_game(&path),
            Err(IoResultError::Validation(
                GameError::NonNormalizedDistribution { .. }
            ))
        ));
    }

    #[test]
    fn unwritable_path_reports_io_error() {
        let env = ResultEnvelope::new(
            chsh(),
            SolveMode::Xor.as_str(),
            OptimizerConfig::default(),
            EnvelopeResult::Solve(crate::classical::classical_value(&chsh(), SolveMode::Xor).unwrap()),
            iso8601_utc(0),
        );
        assert!(matches!(
            save_result(&env, "/nonexistent-dir/xorduel.json"),
            Err(IoResultError::Io(_))
        ));
    }

    #[test]
    fn envelope_round_trip_preserves_reals_bit_exactly() {
        let dir = tmpdir();
        let path = dir.join("env.json");
        let result = crate::classical::classical_value(&chsh(), SolveMode::Xor).unwrap();
        let env = ResultEnvelope::new(
            chsh(),
            SolveMode::Xor.as_str(),
            OptimizerConfig::default(),
            EnvelopeResult::Solve(result),
            iso8601_utc(1_700_000_000),
        );
        save_result(&env, &path).unwrap();
        let loaded = load_envelope(&path).unwrap();
        assert_eq!(loaded, env);
        let path2 = dir.join("env2.json");
        save_result(&loaded, &path2).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
        assert!(env.to_json().contains("\"value\": 0.75"));
    }

    #[test]
    fn timestamp_formatting() {
        assert_eq!(iso8601_utc(0), "1970-01-01T00:00:00Z");
        assert_eq!(iso8601_utc(951_782_400), "2000-02-29T00:00:00Z");
        assert_eq!(iso8601_utc(1_700_000_000), "2023-11-14T22:13:20Z");
    }

    #[test]
    fn round_trip_identity_on_randomized_envelopes() {
        use crate::classical::{ClassicalGate, DeterministicXorStarStrategy};
        use crate::quantum::{BobOp, QuantumXorStrategy};
        use crate::qubit::{MeasurementBasisParams, QubitUnitaryParams};
        use crate::solve::{SolveResult, Strategy};
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for i in 0..1000 {
            let s_card = rng.gen_range(1..4);
            let t_card = rng.gen_range(1..4);
            let raw: Vec<Vec<f64>> = (0..s_card)
                .map(|_| (0..t_card).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let total: f64 = raw.iter().flatten().sum();
            let dist: Vec<Vec<f64>> = raw
                .iter()
                .map(|row| row.iter().map(|p| p / total).collect())
                .collect();
            let task: Vec<Vec<u8>> = (0..s_card)
                .map(|_| (0..t_card).map(|_| rng.gen_range(0..=1)).collect())
                .collect();
            let game = GameSpec::new(format!("rand_{i}"), GameKind::Xor, dist, task, None).unwrap();

            let strategy = if rng.gen_bool(0.5) {
                Strategy::QXor(QuantumXorStrategy {
                    alice: (0..s_card)
                        .map(|_| MeasurementBasisParams::new(rng.gen_range(0.0..3.0), rng.gen()))
                        .collect(),
                    bob: (0..t_card)
                        .map(|_| MeasurementBasisParams::new(rng.gen_range(0.0..3.0), rng.gen()))
                        .collect(),
                })
            } else if rng.gen_bool(0.5) {
                Strategy::DetXorstar(DeterministicXorStarStrategy {
                    init_bit: rng.gen_range(0..=1),
                    alice_gates: (0..s_card).map(|_| ClassicalGate::Id).collect(),
                    bob_gates: (0..t_card).map(|_| ClassicalGate::R1).collect(),
                })
            } else {
                Strategy::QXorstar(crate::quantum::QuantumXorStarStrategy {
                    alice: (0..s_card)
                        .map(|_| QubitUnitaryParams::new(rng.gen(), rng.gen(), rng.gen()))
                        .collect(),
                    bob: (0..t_card)
                        .map(|_| BobOp::ResetThenUnitary(QubitUnitaryParams::new(rng.gen(), rng.gen(), rng.gen())))
                        .collect(),
                })
            };
            let env = ResultEnvelope::new(
                game,
                "xor",
                OptimizerConfig {
                    restarts: rng.gen_range(1..100),
                    seed: rng.gen(),
                    inner_tol: rng.gen_range(1e-12..1e-6),
                    max_iters: rng.gen_range(1..5000),
                },
                EnvelopeResult::Solve(SolveResult {
                    value: rng.gen_range(0.0..1.0),
                    strategy,
                    restarts_used: rng.gen_range(1..100),
                    converged: rng.gen_bool(0.5),
                    elapsed_ms: rng.gen_range(0..100_000),
                }),
                iso8601_utc(rng.gen_range(0..4_000_000_000)),
            );
            let json = serde_json::to_string(&env).unwrap();
            let back: ResultEnvelope = serde_json::from_str(&json).unwrap();
            assert_eq!(back, env, "round trip {i} drifted");
            let json2 = serde_json::to_string(&back).unwrap();
            assert_eq!(json, json2, "re-serialization {i} not byte-stable");
        }
    }
}
