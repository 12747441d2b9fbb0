//! Exact classical values by exhaustive enumeration of deterministic
//! strategies.
//!
//! XOR games range over output-bit assignments; XOR* games range over
//! per-input classical gates acting on a single bit, either the reversible
//! subset {identity, NOT} or the full set including the two constant reset
//! maps. Deterministic strategies suffice for optimality, so enumeration
//! returns the exact maximum.

use crate::game::{GameKind, GameSpec};
use crate::solve::{SolveMode, SolveResult, SolverError, Strategy, ENUMERATION_CARD_LIMIT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// One-bit classical gate. Identity and NOT are reversible; the two reset
/// gates are the constant maps. The declaration order is the tie-break
/// order used by the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClassicalGate {
    Id,
    Not,
    R0,
    R1,
}

impl ClassicalGate {
    pub fn apply(&self, bit: u8) -> u8 {
        match self {
            ClassicalGate::Id => bit,
            ClassicalGate::Not => bit ^ 1,
            ClassicalGate::R0 => 0,
            ClassicalGate::R1 => 1,
        }
    }

    pub fn is_reversible(&self) -> bool {
        matches!(self, ClassicalGate::Id | ClassicalGate::Not)
    }

    fn from_index(i: usize) -> ClassicalGate {
        match i {
            0 => ClassicalGate::Id,
            1 => ClassicalGate::Not,
            2 => ClassicalGate::R0,
            _ => ClassicalGate::R1,
        }
    }
}

/// Deterministic XOR-game strategy: an output bit per input on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicXorStrategy {
    #[serde(rename = "a")]
    pub a_map: Vec<u8>,
    #[serde(rename = "b")]
    pub b_map: Vec<u8>,
}

/// Deterministic XOR*-game strategy: an initial bit and a classical gate
/// per input for each player, applied Alice first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicXorStarStrategy {
    #[serde(rename = "init")]
    pub init_bit: u8,
    #[serde(rename = "alice")]
    pub alice_gates: Vec<ClassicalGate>,
    #[serde(rename = "bob")]
    pub bob_gates: Vec<ClassicalGate>,
}

impl DeterministicXorStarStrategy {
    pub fn is_reversible(&self) -> bool {
        self.alice_gates
            .iter()
            .chain(self.bob_gates.iter())
            .all(ClassicalGate::is_reversible)
    }
}

fn check_len(what: &'static str, got: usize, expected: usize) -> Result<(), SolverError> {
    if got != expected {
        return Err(SolverError::ShapeMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

/// Winning probability of a deterministic strategy in an XOR game.
pub fn eval_xor(spec: &GameSpec, strat: &DeterministicXorStrategy) -> Result<f64, SolverError> {
    if spec.kind != GameKind::Xor {
        return Err(SolverError::IncompatibleMode {
            kind: spec.kind,
            mode: SolveMode::Xor,
        });
    }
    check_len("a_map", strat.a_map.len(), spec.s_card)?;
    check_len("b_map", strat.b_map.len(), spec.t_card)?;
    let mut acc = 0.0;
    for s in 0..spec.s_card {
        for t in 0..spec.t_card {
            if strat.a_map[s] ^ strat.b_map[t] == spec.task[s][t] {
                acc += spec.dist[s][t];
            }
        }
    }
    Ok(acc)
}

/// Winning probability of a deterministic strategy in an XOR* game. With
/// `reversible_only`, reset gates are rejected.
pub fn eval_xorstar(
    spec: &GameSpec,
    strat: &DeterministicXorStarStrategy,
    reversible_only: bool,
) -> Result<f64, SolverError> {
    if spec.kind != GameKind::XorStar {
        return Err(SolverError::IncompatibleMode {
            kind: spec.kind,
            mode: SolveMode::XorStarReversible,
        });
    }
    check_len("alice_gates", strat.alice_gates.len(), spec.s_card)?;
    check_len("bob_gates", strat.bob_gates.len(), spec.t_card)?;
    if reversible_only && !strat.is_reversible() {
        return Err(SolverError::ReversibilityViolation);
    }
    let mut acc = 0.0;
    for s in 0..spec.s_card {
        let mid = strat.alice_gates[s].apply(strat.init_bit & 1);
        for t in 0..spec.t_card {
            let m = strat.bob_gates[t].apply(mid);
            if m == spec.task[s][t] {
                acc += spec.dist[s][t];
            }
        }
    }
    Ok(acc)
}

/// Decode enumeration index `idx` into a strategy and evaluate it. The
/// index orders strategies lexicographically: XOR and reversible XOR*
/// read one bit per input, most significant first, Alice before Bob;
/// the irreversible space reads the initial bit first, then base-4 gate
/// digits in the order Id < Not < R0 < R1.
fn decode_eval(spec: &GameSpec, mode: SolveMode, idx: u64) -> (f64, Strategy) {
    let (s_card, t_card) = (spec.s_card, spec.t_card);
    let n = s_card + t_card;
    match mode {
        SolveMode::Xor => {
            let bit = |k: usize| ((idx >> (n - 1 - k)) & 1) as u8;
            let strat = DeterministicXorStrategy {
                a_map: (0..s_card).map(bit).collect(),
                b_map: (s_card..n).map(bit).collect(),
            };
            let v = eval_xor(spec, &strat).expect("decoded strategy matches spec shape");
            (v, Strategy::DetXor(strat))
        }
        SolveMode::XorStarReversible => {
            let gate = |k: usize| ClassicalGate::from_index(((idx >> (n - 1 - k)) & 1) as usize);
            let strat = DeterministicXorStarStrategy {
                init_bit: 0,
                alice_gates: (0..s_card).map(gate).collect(),
                bob_gates: (s_card..n).map(gate).collect(),
            };
            let v = eval_xorstar(spec, &strat, true).expect("reversible decode");
            (v, Strategy::DetXorstar(strat))
        }
        SolveMode::XorStarIrreversible => {
            let gate_space = 4u64.pow(n as u32);
            let init_bit = (idx / gate_space) as u8;
            let rest = idx % gate_space;
            let gate = |k: usize| {
                ClassicalGate::from_index(((rest / 4u64.pow((n - 1 - k) as u32)) % 4) as usize)
            };
            let strat = DeterministicXorStarStrategy {
                init_bit,
                alice_gates: (0..s_card).map(gate).collect(),
                bob_gates: (s_card..n).map(gate).collect(),
            };
            let v = eval_xorstar(spec, &strat, false).expect("irreversible decode");
            (v, Strategy::DetXorstar(strat))
        }
    }
}

/// Exact classical value of a game by exhaustive enumeration.
///
/// Returns the maximum winning probability together with the
/// lexicographically first strategy achieving it. Enumeration is
/// partitioned across worker threads; the reduction tie-breaks on the
/// enumeration index, so the result is identical to a sequential scan
/// regardless of worker count.
pub fn classical_value(spec: &GameSpec, mode: SolveMode) -> Result<SolveResult, SolverError> {
    let started = Instant::now();
    spec.validate()?;
    if !mode.compatible_with(spec.kind) {
        return Err(SolverError::IncompatibleMode {
            kind: spec.kind,
            mode,
        });
    }
    let n = spec.s_card + spec.t_card;
    if n > ENUMERATION_CARD_LIMIT {
        return Err(SolverError::CardinalityTooLarge { total: n });
    }
    let total: u64 = match mode {
        SolveMode::Xor | SolveMode::XorStarReversible => 1 << n,
        SolveMode::XorStarIrreversible => 2 * 4u64.pow(n as u32),
    };

    let chunk = total.div_ceil(256).max(1);
    let chunk_bests: Vec<(f64, u64)> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut best = (f64::NEG_INFINITY, lo);
            for idx in lo..hi {
                let (v, _) = decode_eval(spec, mode, idx);
                if v > best.0 {
                    best = (v, idx);
                }
            }
            best
        })
        .collect();

    let mut best = (f64::NEG_INFINITY, 0u64);
    for &(v, idx) in &chunk_bests {
        if v > best.0 {
            best = (v, idx);
        }
    }
    let (value, strategy) = decode_eval(spec, mode, best.1);
    Ok(SolveResult {
        value,
        strategy,
        restarts_used: 1,
        converged: true,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameKind;

    fn chsh_pair() -> (GameSpec, GameSpec) {
        let xor = GameSpec::new(
            "chsh",
            GameKind::Xor,
            vec![vec![0.25, 0.25], vec![0.25, 0.25]],
            vec![vec![0, 0], vec![0, 1]],
            None,
        )
        .unwrap();
        let star = xor.with_kind(GameKind::XorStar, "chsh_star");
        (xor, star)
    }

    #[test]
    fn chsh_constant_zero_strategy_scores_three_quarters() {
        let (xor, _) = chsh_pair();
        let v = eval_xor(
            &xor,
            &DeterministicXorStrategy {
                a_map: vec![0, 0],
                b_map: vec![0, 0],
            },
        )
        .unwrap();
        assert_eq!(v, 0.75);
    }

    #[test]
    fn chsh_identity_maps_score_one_quarter() {
        let (xor, _) = chsh_pair();
        let v = eval_xor(
            &xor,
            &DeterministicXorStrategy {
                a_map: vec![0, 1],
                b_map: vec![0, 1],
            },
        )
        .unwrap();
        assert_eq!(v, 0.25);
    }

    #[test]
    fn eaos_all_different_outputs_score_two_thirds() {
        let dist = vec![vec![1.0 / 9.0; 3]; 3];
        let task: Vec<Vec<u8>> = (0..3)
            .map(|s| (0..3).map(|t| u8::from(s != t)).collect())
            .collect();
        let spec = GameSpec::new("eaos", GameKind::Xor, dist, task, None).unwrap();
        let v = eval_xor(
            &spec,
            &DeterministicXorStrategy {
                a_map: vec![0, 0, 0],
                b_map: vec![1, 1, 1],
            },
        )
        .unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn xorstar_all_identity_matches_constant_zero() {
        let (_, star) = chsh_pair();
        let v = eval_xorstar(
            &star,
            &DeterministicXorStarStrategy {
                init_bit: 0,
                alice_gates: vec![ClassicalGate::Id; 2],
                bob_gates: vec![ClassicalGate::Id; 2],
            },
            true,
        )
        .unwrap();
        assert_eq!(v, 0.75);
    }

    #[test]
    fn xorstar_bob_all_reset_zero_scores_f_zero_mass() {
        let (_, star) = chsh_pair();
        let v = eval_xorstar(
            &star,
            &DeterministicXorStarStrategy {
                init_bit: 0,
                alice_gates: vec![ClassicalGate::Not, ClassicalGate::Id],
                bob_gates: vec![ClassicalGate::R0; 2],
            },
            false,
        )
        .unwrap();
        assert_eq!(v, star.constant_output_value(0));
    }

    #[test]
    fn reversible_mode_rejects_reset_gates() {
        let (_, star) = chsh_pair();
        let err = eval_xorstar(
            &star,
            &DeterministicXorStarStrategy {
                init_bit: 0,
                alice_gates: vec![ClassicalGate::Id; 2],
                bob_gates: vec![ClassicalGate::R1, ClassicalGate::Id],
            },
            true,
        )
        .unwrap_err();
        assert_eq!(err, SolverError::ReversibilityViolation);
    }

    #[test]
    fn shape_mismatch_reported() {
        let (xor, _) = chsh_pair();
        let err = eval_xor(
            &xor,
            &DeterministicXorStrategy {
                a_map: vec![0],
                b_map: vec![0, 0],
            },
        )
        .unwrap_err();
        assert!(matches!(err, SolverError::ShapeMismatch { what: "a_map", .. }));
    }

    #[test]
    fn chsh_classical_value_is_three_quarters() {
        let (xor, star) = chsh_pair();
        assert_eq!(classical_value(&xor, SolveMode::Xor).unwrap().value, 0.75);
        assert_eq!(
            classical_value(&star, SolveMode::XorStarReversible)
                .unwrap()
                .value,
            0.75
        );
    }

    #[test]
    fn chsh_star_with_resets_reaches_one() {
        let (_, star) = chsh_pair();
        let r = classical_value(&star, SolveMode::XorStarIrreversible).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn ra_reset_on_first_question_scores_fourteen_sixteenths() {
        // The task bit at t = 0 is 1 for every s, so resetting to 1 there
        // wins the whole column; routing the remaining questions through
        // identity gates with Alice signaling s = 0 wins 10 of 12.
        let star = crate::catalog::build("ra", None).unwrap().xor_star;
        let strat = DeterministicXorStarStrategy {
            init_bit: 0,
            alice_gates: vec![
                ClassicalGate::Not,
                ClassicalGate::Id,
                ClassicalGate::Id,
                ClassicalGate::Id,
            ],
            bob_gates: vec![
                ClassicalGate::R1,
                ClassicalGate::Id,
                ClassicalGate::Id,
                ClassicalGate::Id,
            ],
        };
        let v = eval_xorstar(&star, &strat, false).unwrap();
        assert_eq!(v, 0.875);
        let best = classical_value(&star, SolveMode::XorStarIrreversible).unwrap();
        assert_eq!(best.value, 0.875);
    }

    #[test]
    fn lexicographic_tie_break_is_first_argmax() {
        // f == 0 everywhere: every parity-0 strategy ties at value 1; the
        // lexicographically first is all-zeros.
        let spec = GameSpec::new(
            "const0",
            GameKind::Xor,
            vec![vec![0.5, 0.5]],
            vec![vec![0, 0]],
            None,
        )
        .unwrap();
        let r = classical_value(&spec, SolveMode::Xor).unwrap();
        assert_eq!(r.value, 1.0);
        match r.strategy {
            Strategy::DetXor(s) => {
                assert_eq!(s.a_map, vec![0]);
                assert_eq!(s.b_map, vec![0, 0]);
            }
            _ => panic!("expected a deterministic XOR strategy"),
        }
    }

    #[test]
    fn irreversible_at_least_reversible_on_random_games() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let raw: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let total: f64 = raw.iter().flatten().sum();
            let dist: Vec<Vec<f64>> = raw
                .iter()
                .map(|row| row.iter().map(|p| p / total).collect())
                .collect();
            let task: Vec<Vec<u8>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(0..=1u8)).collect())
                .collect();
            let spec = GameSpec::new("rand", GameKind::XorStar, dist, task, None).unwrap();
            let rev = classical_value(&spec, SolveMode::XorStarReversible)
                .unwrap()
                .value;
            let irr = classical_value(&spec, SolveMode::XorStarIrreversible)
                .unwrap()
                .value;
            assert!(irr >= rev);
        }
    }

    #[test]
    fn cardinality_guard_triggers() {
        let dist = vec![vec![1.0 / 196.0; 14]; 14];
        let task = vec![vec![0u8; 14]; 14];
        let spec = GameSpec::new("big", GameKind::Xor, dist, task, None).unwrap();
        assert!(matches!(
            classical_value(&spec, SolveMode::Xor),
            Err(SolverError::CardinalityTooLarge { total: 28 })
        ));
    }

    #[test]
    fn mixture_value_is_convex_combination() {
        // Randomizing between two deterministic strategies wins with the
        // mixed probability, so mixtures never beat the enumerated maximum.
        let (xor, _) = chsh_pair();
        let s1 = DeterministicXorStrategy {
            a_map: vec![0, 0],
            b_map: vec![0, 0],
        };
        let s2 = DeterministicXorStrategy {
            a_map: vec![0, 1],
            b_map: vec![0, 1],
        };
        let (v1, v2) = (eval_xor(&xor, &s1).unwrap(), eval_xor(&xor, &s2).unwrap());
        let best = classical_value(&xor, SolveMode::Xor).unwrap().value;
        for k in 0..=10 {
            let lambda = k as f64 / 10.0;
            let mut mixed = 0.0;
            for s in 0..xor.s_card {
                for t in 0..xor.t_card {
                    let w1 = u8::from(s1.a_map[s] ^ s1.b_map[t] == xor.task[s][t]) as f64;
                    let w2 = u8::from(s2.a_map[s] ^ s2.b_map[t] == xor.task[s][t]) as f64;
                    mixed += xor.dist[s][t] * (lambda * w1 + (1.0 - lambda) * w2);
                }
            }
            assert!((mixed - (lambda * v1 + (1.0 - lambda) * v2)).abs() < 1e-12);
            assert!(mixed <= best + 1e-12);
        }
    }
}
