//! Quantum values via multi-start derivative-free optimization, plus an
//! independent unit-vector see-saw oracle for XOR games.
//!
//! XOR games are played with projective single-qubit measurements on a
//! shared Bell state; XOR* games with per-input qubit unitaries acting on
//! |0>, optionally preceded (for Bob) by a reset of the resource qubit.
//! The see-saw maximizes the bilinear correlator form over real unit
//! vectors and serves as a cross-check on the qubit optimizer.

use crate::classical::{classical_value, ClassicalGate};
use crate::game::{GameKind, GameSpec};
use crate::optim::{multistart_max, polish_max, restart_rng, MultistartOutcome};
use crate::qubit::{
    born_joint_vectors, realize_unitary, Mat2, MeasurementBasisParams, QubitUnitaryParams, Vec2,
};
use crate::solve::{OptimizerConfig, SolveMode, SolveResult, SolverError, Strategy};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::time::Instant;

/// Restart agreement threshold for the `converged` flag.
const CONVERGENCE_AGREEMENT: f64 = 1e-6;

/// Bell-state strategy for an XOR game: one measurement basis per input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumXorStrategy {
    pub alice: Vec<MeasurementBasisParams>,
    pub bob: Vec<MeasurementBasisParams>,
}

/// Bob's controlled operation in an XOR* game: a plain unitary, or a reset
/// of the resource qubit to |0> followed by a unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "BobOpRepr", into = "BobOpRepr")]
pub enum BobOp {
    Unitary(QubitUnitaryParams),
    ResetThenUnitary(QubitUnitaryParams),
}

impl BobOp {
    pub fn is_reset(&self) -> bool {
        matches!(self, BobOp::ResetThenUnitary(_))
    }

    pub fn params(&self) -> &QubitUnitaryParams {
        match self {
            BobOp::Unitary(p) | BobOp::ResetThenUnitary(p) => p,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BobOpRepr {
    reset: bool,
    theta: f64,
    phi: f64,
    lam: f64,
}

impl From<BobOpRepr> for BobOp {
    fn from(r: BobOpRepr) -> Self {
        let p = QubitUnitaryParams::new(r.theta, r.phi, r.lam);
        if r.reset {
            BobOp::ResetThenUnitary(p)
        } else {
            BobOp::Unitary(p)
        }
    }
}

impl From<BobOp> for BobOpRepr {
    fn from(op: BobOp) -> Self {
        let reset = op.is_reset();
        let p = *op.params();
        BobOpRepr {
            reset,
            theta: p.theta,
            phi: p.phi,
            lam: p.lam,
        }
    }
}

/// Sequential qubit strategy for an XOR* game: the resource starts in |0>,
/// Alice applies a unitary chosen by `s`, Bob an operation chosen by `t`,
/// and the final measurement is computational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumXorStarStrategy {
    pub alice: Vec<QubitUnitaryParams>,
    pub bob: Vec<BobOp>,
}

impl QuantumXorStarStrategy {
    pub fn is_reversible(&self) -> bool {
        self.bob.iter().all(|op| !op.is_reset())
    }
}

/// Real unit vectors realizing XOR-game correlators; the see-saw oracle's
/// strategy representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorStrategy {
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
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

fn require_kind(spec: &GameSpec, kind: GameKind, mode: SolveMode) -> Result<(), SolverError> {
    if spec.kind != kind {
        return Err(SolverError::IncompatibleMode {
            kind: spec.kind,
            mode,
        });
    }
    Ok(())
}

/// Nonzero-probability input pairs in row-major order.
fn support_of(spec: &GameSpec) -> Vec<(usize, usize, f64, u8)> {
    spec.support().collect()
}

fn xor_win(
    support: &[(usize, usize, f64, u8)],
    alice: &[(Vec2, Vec2)],
    bob: &[(Vec2, Vec2)],
) -> f64 {
    let mut acc = 0.0;
    for &(s, t, p, f) in support {
        let table = born_joint_vectors(&alice[s].0, &alice[s].1, &bob[t].0, &bob[t].1);
        let f = f as usize;
        acc += p * (table[0][f] + table[1][1 - f]);
    }
    acc
}

fn star_win(
    support: &[(usize, usize, f64, u8)],
    alice_out: &[Vec2],
    bob_ops: &[(bool, Mat2)],
) -> f64 {
    let mut acc = 0.0;
    for &(s, t, p, f) in support {
        let (reset, ref v) = bob_ops[t];
        let out = if reset {
            v.column(0)
        } else {
            v.mul_vec(&alice_out[s])
        };
        acc += p * out.0[f as usize].norm_sqr();
    }
    acc
}

/// Winning probability of a Bell-state measurement strategy in an XOR game.
pub fn eval_quantum_xor(spec: &GameSpec, strat: &QuantumXorStrategy) -> Result<f64, SolverError> {
    require_kind(spec, GameKind::Xor, SolveMode::Xor)?;
    check_len("alice", strat.alice.len(), spec.s_card)?;
    check_len("bob", strat.bob.len(), spec.t_card)?;
    let alice: Vec<_> = strat.alice.iter().map(|p| p.basis_vectors()).collect();
    let bob: Vec<_> = strat.bob.iter().map(|p| p.basis_vectors()).collect();
    Ok(xor_win(&support_of(spec), &alice, &bob))
}

/// Winning probability of realized operators in an XOR* game: Alice's
/// unitaries and Bob's `(reset, unitary)` pairs.
pub fn eval_xorstar_ops(
    spec: &GameSpec,
    alice_ops: &[Mat2],
    bob_ops: &[(bool, Mat2)],
) -> Result<f64, SolverError> {
    require_kind(spec, GameKind::XorStar, SolveMode::XorStarReversible)?;
    check_len("alice", alice_ops.len(), spec.s_card)?;
    check_len("bob", bob_ops.len(), spec.t_card)?;
    let alice_out: Vec<Vec2> = alice_ops.iter().map(|u| u.column(0)).collect();
    Ok(star_win(&support_of(spec), &alice_out, bob_ops))
}

/// Winning probability of a sequential qubit strategy in an XOR* game.
/// With `reversible_only`, reset operations are rejected.
pub fn eval_quantum_xorstar(
    spec: &GameSpec,
    strat: &QuantumXorStarStrategy,
    reversible_only: bool,
) -> Result<f64, SolverError> {
    if reversible_only && !strat.is_reversible() {
        return Err(SolverError::ReversibilityViolation);
    }
    let alice: Vec<Mat2> = strat.alice.iter().map(realize_unitary).collect();
    let bob: Vec<(bool, Mat2)> = strat
        .bob
        .iter()
        .map(|op| (op.is_reset(), realize_unitary(op.params())))
        .collect();
    eval_xorstar_ops(spec, &alice, &bob)
}

// ---------------------------------------------------------------------------
// Angle-vector layouts for the optimizer
// ---------------------------------------------------------------------------

fn xor_strategy_from_angles(spec: &GameSpec, x: &[f64]) -> QuantumXorStrategy {
    let alice = (0..spec.s_card)
        .map(|s| MeasurementBasisParams::new(x[2 * s], x[2 * s + 1]))
        .collect();
    let base = 2 * spec.s_card;
    let bob = (0..spec.t_card)
        .map(|t| MeasurementBasisParams::new(x[base + 2 * t], x[base + 2 * t + 1]))
        .collect();
    QuantumXorStrategy { alice, bob }
}

fn star_strategy_from_angles(spec: &GameSpec, x: &[f64], reset_mask: u64) -> QuantumXorStarStrategy {
    let alice = (0..spec.s_card)
        .map(|s| QubitUnitaryParams::new(x[3 * s], x[3 * s + 1], x[3 * s + 2]))
        .collect();
    let base = 3 * spec.s_card;
    let bob = (0..spec.t_card)
        .map(|t| {
            let p = QubitUnitaryParams::new(x[base + 3 * t], x[base + 3 * t + 1], x[base + 3 * t + 2]);
            if reset_mask >> t & 1 == 1 {
                BobOp::ResetThenUnitary(p)
            } else {
                BobOp::Unitary(p)
            }
        })
        .collect();
    QuantumXorStarStrategy { alice, bob }
}

fn sample_xor_angles(spec: &GameSpec) -> impl Fn(&mut ChaCha8Rng) -> Vec<f64> + '_ {
    let dim = 2 * (spec.s_card + spec.t_card);
    move |rng| {
        (0..dim)
            .map(|i| {
                if i % 2 == 0 {
                    rng.gen_range(0.0..PI)
                } else {
                    rng.gen_range(0.0..TAU)
                }
            })
            .collect()
    }
}

fn sample_star_angles(spec: &GameSpec) -> impl Fn(&mut ChaCha8Rng) -> Vec<f64> + '_ {
    let dim = 3 * (spec.s_card + spec.t_card);
    move |rng| {
        (0..dim)
            .map(|i| {
                if i % 3 == 0 {
                    rng.gen_range(0.0..PI)
                } else {
                    rng.gen_range(0.0..TAU)
                }
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Warm starts from the exact classical solution
// ---------------------------------------------------------------------------

/// Above this total cardinality, skip the classical warm start and fall
/// back to the best constant-output embedding.
const WARM_START_CARD_LIMIT: usize = 20;

fn gate_angles(output_bit: u8) -> [f64; 3] {
    if output_bit == 1 {
        [PI, 0.0, PI]
    } else {
        [0.0, 0.0, 0.0]
    }
}

/// Measurement angles realizing a deterministic XOR strategy on the Bell
/// state: computational bases with outcomes relabeled per assignment, so
/// the parity a^b is deterministic.
fn warm_xor(spec: &GameSpec) -> Vec<f64> {
    let mut bits: Vec<u8> = Vec::with_capacity(spec.s_card + spec.t_card);
    if spec.s_card + spec.t_card <= WARM_START_CARD_LIMIT {
        if let Ok(r) = classical_value(spec, SolveMode::Xor) {
            if let Strategy::DetXor(s) = r.strategy {
                bits.extend(&s.a_map);
                bits.extend(&s.b_map);
            }
        }
    }
    if bits.is_empty() {
        let best_bit = u8::from(spec.constant_output_value(1) > spec.constant_output_value(0));
        bits = vec![0; spec.s_card];
        bits.extend(std::iter::repeat_n(best_bit, spec.t_card));
    }
    bits.iter()
        .flat_map(|&b| [if b == 1 { PI } else { 0.0 }, 0.0])
        .collect()
}

/// Unitary angles (and Bob reset mask) realizing a deterministic XOR*
/// strategy: identity/NOT gates become I/X, resets keep their target.
fn warm_star(spec: &GameSpec, mode: SolveMode) -> (Vec<f64>, u64) {
    if spec.s_card + spec.t_card <= WARM_START_CARD_LIMIT {
        if let Ok(r) = classical_value(spec, mode) {
            if let Strategy::DetXorstar(strat) = r.strategy {
                let mut angles = Vec::with_capacity(3 * (spec.s_card + spec.t_card));
                for g in &strat.alice_gates {
                    angles.extend(gate_angles(g.apply(strat.init_bit)));
                }
                let mut mask = 0u64;
                for (t, g) in strat.bob_gates.iter().enumerate() {
                    match g {
                        ClassicalGate::Id => angles.extend(gate_angles(0)),
                        ClassicalGate::Not => angles.extend(gate_angles(1)),
                        ClassicalGate::R0 => {
                            angles.extend(gate_angles(0));
                            mask |= 1 << t;
                        }
                        ClassicalGate::R1 => {
                            angles.extend(gate_angles(1));
                            mask |= 1 << t;
                        }
                    }
                }
                return (angles, mask);
            }
        }
    }
    let best_bit = u8::from(spec.constant_output_value(1) > spec.constant_output_value(0));
    let mut angles: Vec<f64> = Vec::new();
    for _ in 0..spec.s_card {
        angles.extend(gate_angles(0));
    }
    for _ in 0..spec.t_card {
        angles.extend(gate_angles(best_bit));
    }
    (angles, 0)
}

// ---------------------------------------------------------------------------
// quantum_value
// ---------------------------------------------------------------------------

fn finish(
    spec: &GameSpec,
    value: f64,
    strategy: Strategy,
    restarts: u32,
    converged: bool,
    started: Instant,
) -> Result<SolveResult, SolverError> {
    let floor = spec
        .constant_output_value(0)
        .max(spec.constant_output_value(1));
    if value < floor - 1e-9 {
        return Err(SolverError::NonConvergence { best: value, floor });
    }
    Ok(SolveResult {
        value,
        strategy,
        restarts_used: restarts,
        converged,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

/// Best quantum value found by multi-start local optimization over the
/// strategy class selected by `mode`.
///
/// Restart 0 warm-starts from the embedded exact classical optimum (when
/// enumeration is affordable), so the returned value never falls below the
/// classical one. The irreversible mode additionally enumerates all
/// `2^|T|` reset patterns for Bob, optimizing angles within each pattern.
/// Identical `(spec, mode, cfg.seed)` inputs yield bit-identical values
/// regardless of worker count.
pub fn quantum_value(
    spec: &GameSpec,
    mode: SolveMode,
    cfg: &OptimizerConfig,
) -> Result<SolveResult, SolverError> {
    let started = Instant::now();
    spec.validate()?;
    if !mode.compatible_with(spec.kind) {
        return Err(SolverError::IncompatibleMode {
            kind: spec.kind,
            mode,
        });
    }
    match mode {
        SolveMode::Xor => {
            let support = support_of(spec);
            let objective = |x: &[f64]| {
                let strat = xor_strategy_from_angles(spec, x);
                let alice: Vec<_> = strat.alice.iter().map(|p| p.basis_vectors()).collect();
                let bob: Vec<_> = strat.bob.iter().map(|p| p.basis_vectors()).collect();
                xor_win(&support, &alice, &bob)
            };
            let outcome = multistart_max(cfg, Some(warm_xor(spec)), sample_xor_angles(spec), objective);
            let strategy = xor_strategy_from_angles(spec, &outcome.best_x);
            let value = eval_quantum_xor(spec, &strategy)?;
            finish(
                spec,
                value,
                Strategy::QXor(strategy),
                cfg.restarts,
                outcome.converged(CONVERGENCE_AGREEMENT),
                started,
            )
        }
        SolveMode::XorStarReversible => {
            let support = support_of(spec);
            let objective = |x: &[f64]| {
                let strat = star_strategy_from_angles(spec, x, 0);
                let alice_out: Vec<Vec2> = strat
                    .alice
                    .iter()
                    .map(|p| realize_unitary(p).column(0))
                    .collect();
                let bob: Vec<(bool, Mat2)> = strat
                    .bob
                    .iter()
                    .map(|op| (false, realize_unitary(op.params())))
                    .collect();
                star_win(&support, &alice_out, &bob)
            };
            let (warm, _) = warm_star(spec, mode);
            let outcome = multistart_max(cfg, Some(warm), sample_star_angles(spec), objective);
            let strategy = star_strategy_from_angles(spec, &outcome.best_x, 0);
            let value = eval_quantum_xorstar(spec, &strategy, true)?;
            finish(
                spec,
                value,
                Strategy::QXorstar(strategy),
                cfg.restarts,
                outcome.converged(CONVERGENCE_AGREEMENT),
                started,
            )
        }
        SolveMode::XorStarIrreversible => quantum_value_star_irreversible(spec, cfg, started),
    }
}

fn quantum_value_star_irreversible(
    spec: &GameSpec,
    cfg: &OptimizerConfig,
    started: Instant,
) -> Result<SolveResult, SolverError> {
    let support = support_of(spec);
    let patterns: u64 = 1 << spec.t_card;
    let (warm_angles, warm_mask) = warm_star(spec, SolveMode::XorStarIrreversible);
    let sample = sample_star_angles(spec);

    let eval_pattern = |x: &[f64], mask: u64| {
        let strat = star_strategy_from_angles(spec, x, mask);
        let alice_out: Vec<Vec2> = strat
            .alice
            .iter()
            .map(|p| realize_unitary(p).column(0))
            .collect();
        let bob: Vec<(bool, Mat2)> = strat
            .bob
            .iter()
            .map(|op| (op.is_reset(), realize_unitary(op.params())))
            .collect();
        star_win(&support, &alice_out, &bob)
    };

    let restarts = cfg.restarts.max(1);
    let runs: Vec<(f64, Vec<f64>, u64)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.seed, r);
            let mut best: Option<(f64, Vec<f64>, u64)> = None;
            for mask in 0..patterns {
                let objective = |x: &[f64]| eval_pattern(x, mask);
                let x0 = if r == 0 && mask == warm_mask {
                    warm_angles.clone()
                } else {
                    sample(&mut rng)
                };
                let (x, v) = polish_max(&objective, x0, cfg);
                if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                    best = Some((v, x, mask));
                }
            }
            best.expect("at least one reset pattern")
        })
        .collect();

    let restart_values: Vec<f64> = runs.iter().map(|(v, _, _)| *v).collect();
    let mut best = 0;
    for (i, v) in restart_values.iter().enumerate().skip(1) {
        if *v > restart_values[best] {
            best = i;
        }
    }
    let outcome = MultistartOutcome {
        best_x: runs[best].1.clone(),
        best_value: runs[best].0,
        restart_values,
    };
    let strategy = star_strategy_from_angles(spec, &outcome.best_x, runs[best].2);
    let value = eval_quantum_xorstar(spec, &strategy, false)?;
    finish(
        spec,
        value,
        Strategy::QXorstar(strategy),
        cfg.restarts,
        outcome.converged(CONVERGENCE_AGREEMENT),
        started,
    )
}

// ---------------------------------------------------------------------------
// See-saw oracle
// ---------------------------------------------------------------------------

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Alternating maximization of `E = sum_{s,t} p(s,t) (-1)^{f(s,t)} <u_s, v_t>`
/// over real unit vectors in dimension `min(|S|, |T|)`; the quantum value
/// is `(1 + E*) / 2`. Independent of the qubit strategy path.
pub fn seesaw_xor_value(spec: &GameSpec, cfg: &OptimizerConfig) -> Result<SolveResult, SolverError> {
    seesaw_xor_value_with_dim(spec, spec.s_card.min(spec.t_card), cfg)
}

/// See-saw with an explicit vector dimension (>= 1).
pub fn seesaw_xor_value_with_dim(
    spec: &GameSpec,
    d: usize,
    cfg: &OptimizerConfig,
) -> Result<SolveResult, SolverError> {
    let started = Instant::now();
    spec.validate()?;
    require_kind(spec, GameKind::Xor, SolveMode::Xor)?;
    let d = d.max(1);
    let (s_card, t_card) = (spec.s_card, spec.t_card);

    // Signed weights p(s,t) (-1)^f.
    let w: Vec<Vec<f64>> = (0..s_card)
        .map(|s| {
            (0..t_card)
                .map(|t| {
                    let sign = if spec.task[s][t] == 1 { -1.0 } else { 1.0 };
                    spec.dist[s][t] * sign
                })
                .collect()
        })
        .collect();

    let correlator = |u: &[Vec<f64>], v: &[Vec<f64>]| -> f64 {
        let mut e = 0.0;
        for s in 0..s_card {
            for t in 0..t_card {
                if w[s][t] != 0.0 {
                    let dot: f64 = u[s].iter().zip(&v[t]).map(|(a, b)| a * b).sum();
                    e += w[s][t] * dot;
                }
            }
        }
        e
    };

    let restarts = cfg.restarts.max(1);
    type SeesawRun = (f64, Vec<Vec<f64>>, Vec<Vec<f64>>);
    let runs: Vec<SeesawRun> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.seed, r);
            let mut u: Vec<Vec<f64>> = (0..s_card).map(|_| random_unit(&mut rng, d)).collect();
            let mut v: Vec<Vec<f64>> = (0..t_card).map(|_| random_unit(&mut rng, d)).collect();
            let mut prev = correlator(&u, &v);
            for _ in 0..cfg.max_iters {
                for (s, us) in u.iter_mut().enumerate() {
                    let mut g = vec![0.0; d];
                    for (t, vt) in v.iter().enumerate() {
                        for (gk, vk) in g.iter_mut().zip(vt) {
                            *gk += w[s][t] * vk;
                        }
                    }
                    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                    *us = if norm < 1e-14 {
                        random_unit(&mut rng, d)
                    } else {
                        g.iter().map(|x| x / norm).collect()
                    };
                }
                for (t, vt) in v.iter_mut().enumerate() {
                    let mut g = vec![0.0; d];
                    for (s, us) in u.iter().enumerate() {
                        for (gk, uk) in g.iter_mut().zip(us) {
                            *gk += w[s][t] * uk;
                        }
                    }
                    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                    *vt = if norm < 1e-14 {
                        random_unit(&mut rng, d)
                    } else {
                        g.iter().map(|x| x / norm).collect()
                    };
                }
                let e = correlator(&u, &v);
                if (e - prev).abs() < cfg.inner_tol {
                    prev = e;
                    break;
                }
                prev = e;
            }
            (prev, u, v)
        })
        .collect();

    let restart_values: Vec<f64> = runs.iter().map(|(e, _, _)| (1.0 + e) / 2.0).collect();
    let mut best = 0;
    for (i, v) in restart_values.iter().enumerate().skip(1) {
        if *v > restart_values[best] {
            best = i;
        }
    }
    let value = restart_values[best];
    let converged = {
        let mut sorted = restart_values.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sorted.len() >= 2 && (sorted[0] - sorted[1]).abs() < CONVERGENCE_AGREEMENT
    };
    let (_, u, v) = runs.into_iter().nth(best).unwrap();
    Ok(SolveResult {
        value,
        strategy: Strategy::Vector(VectorStrategy { u, v }),
        restarts_used: cfg.restarts,
        converged,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameKind;

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

    fn chsh_star() -> GameSpec {
        chsh().with_kind(GameKind::XorStar, "chsh_star")
    }

    fn tsirelson() -> f64 {
        (PI / 8.0).cos().powi(2)
    }

    #[test]
    fn computational_bases_score_three_quarters_on_chsh() {
        let strat = QuantumXorStrategy {
            alice: vec![MeasurementBasisParams::computational(); 2],
            bob: vec![MeasurementBasisParams::computational(); 2],
        };
        let v = eval_quantum_xor(&chsh(), &strat).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
    }

    #[test]
    fn optimal_chsh_angles_hit_the_quantum_bound() {
        let strat = QuantumXorStrategy {
            alice: vec![
                MeasurementBasisParams::new(0.0, 0.0),
                MeasurementBasisParams::new(PI / 2.0, 0.0),
            ],
            bob: vec![
                MeasurementBasisParams::new(PI / 4.0, 0.0),
                MeasurementBasisParams::new(-PI / 4.0, 0.0),
            ],
        };
        let v = eval_quantum_xor(&chsh(), &strat).unwrap();
        assert!((v - tsirelson()).abs() < 1e-12);
    }

    #[test]
    fn identity_star_strategy_scores_three_quarters() {
        let strat = QuantumXorStarStrategy {
            alice: vec![QubitUnitaryParams::identity(); 2],
            bob: vec![BobOp::Unitary(QubitUnitaryParams::identity()); 2],
        };
        let v = eval_quantum_xorstar(&chsh_star(), &strat, true).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
    }

    #[test]
    fn reset_discards_alice_action() {
        let spec = chsh_star();
        let bob: Vec<BobOp> = vec![
            BobOp::ResetThenUnitary(QubitUnitaryParams::new(1.1, 0.4, 2.2)),
            BobOp::ResetThenUnitary(QubitUnitaryParams::new(0.3, 5.1, 0.9)),
        ];
        let a = QuantumXorStarStrategy {
            alice: vec![QubitUnitaryParams::identity(); 2],
            bob: bob.clone(),
        };
        let b = QuantumXorStarStrategy {
            alice: vec![
                QubitUnitaryParams::new(2.0, 1.0, 0.5),
                QubitUnitaryParams::new(0.7, 4.0, 3.1),
            ],
            bob,
        };
        let va = eval_quantum_xorstar(&spec, &a, false).unwrap();
        let vb = eval_quantum_xorstar(&spec, &b, false).unwrap();
        assert!((va - vb).abs() < 1e-15);
    }

    #[test]
    fn reversible_eval_rejects_resets() {
        let strat = QuantumXorStarStrategy {
            alice: vec![QubitUnitaryParams::identity(); 2],
            bob: vec![
                BobOp::ResetThenUnitary(QubitUnitaryParams::identity()),
                BobOp::Unitary(QubitUnitaryParams::identity()),
            ],
        };
        assert_eq!(
            eval_quantum_xorstar(&chsh_star(), &strat, true).unwrap_err(),
            SolverError::ReversibilityViolation
        );
    }

    #[test]
    fn global_phase_leaves_star_value_unchanged() {
        use num_complex::Complex64;
        let spec = chsh_star();
        let alice: Vec<Mat2> = vec![
            realize_unitary(&QubitUnitaryParams::new(1.3, 0.2, 4.4)),
            realize_unitary(&QubitUnitaryParams::new(2.1, 3.0, 0.8)),
        ];
        let bob: Vec<(bool, Mat2)> = vec![
            (false, realize_unitary(&QubitUnitaryParams::new(0.5, 1.0, 2.0))),
            (true, realize_unitary(&QubitUnitaryParams::new(2.9, 0.1, 1.7))),
        ];
        let v1 = eval_xorstar_ops(&spec, &alice, &bob).unwrap();
        let phase = Complex64::new(0.6f64.cos(), 0.6f64.sin());
        let shifted: Vec<Mat2> = alice.iter().map(|m| m.scale(phase)).collect();
        let v2 = eval_xorstar_ops(&spec, &shifted, &bob).unwrap();
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn seesaw_reaches_the_chsh_bound() {
        let cfg = OptimizerConfig {
            restarts: 16,
            seed: 3,
            ..Default::default()
        };
        let r = seesaw_xor_value(&chsh(), &cfg).unwrap();
        assert!((r.value - tsirelson()).abs() < 1e-6);
    }

    #[test]
    fn seesaw_reaches_the_three_cycle_bound() {
        let xor = crate::catalog::build("odd_cycle", Some(3)).unwrap().xor;
        let cfg = OptimizerConfig {
            restarts: 16,
            seed: 5,
            ..Default::default()
        };
        let r = seesaw_xor_value(&xor, &cfg).unwrap();
        assert!((r.value - (PI / 12.0).cos().powi(2)).abs() < 1e-6, "got {}", r.value);
    }

    #[test]
    fn seesaw_on_constant_task_reaches_one() {
        let spec = GameSpec::new(
            "const0",
            GameKind::Xor,
            vec![vec![0.5], vec![0.5]],
            vec![vec![0], vec![0]],
            None,
        )
        .unwrap();
        let cfg = OptimizerConfig {
            restarts: 4,
            seed: 0,
            ..Default::default()
        };
        let r = seesaw_xor_value(&spec, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qubit_optimizer_reaches_the_chsh_bound() {
        let cfg = OptimizerConfig {
            restarts: 16,
            seed: 1,
            ..Default::default()
        };
        let r = quantum_value(&chsh(), SolveMode::Xor, &cfg).unwrap();
        assert!((r.value - tsirelson()).abs() < 1e-5, "got {}", r.value);
    }

    #[test]
    fn star_reversible_matches_xor_bound_on_chsh() {
        let cfg = OptimizerConfig {
            restarts: 16,
            seed: 2,
            ..Default::default()
        };
        let r = quantum_value(&chsh_star(), SolveMode::XorStarReversible, &cfg).unwrap();
        assert!((r.value - tsirelson()).abs() < 1e-5, "got {}", r.value);
    }

    #[test]
    fn quantum_value_is_deterministic_per_seed() {
        let cfg = OptimizerConfig {
            restarts: 6,
            seed: 9,
            ..Default::default()
        };
        let a = quantum_value(&chsh(), SolveMode::Xor, &cfg).unwrap();
        let b = quantum_value(&chsh(), SolveMode::Xor, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.strategy, b.strategy);
    }

    #[test]
    fn reset_augmented_value_dominates_reversible() {
        let cfg = OptimizerConfig {
            restarts: 8,
            seed: 4,
            ..Default::default()
        };
        let spec = chsh_star();
        let rev = quantum_value(&spec, SolveMode::XorStarReversible, &cfg).unwrap();
        let irr = quantum_value(&spec, SolveMode::XorStarIrreversible, &cfg).unwrap();
        assert!(irr.value >= rev.value - 1e-9);
        // Resets trivialize this game outright.
        assert!((irr.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bob_op_serialization_shape() {
        let op = BobOp::ResetThenUnitary(QubitUnitaryParams::new(1.0, 2.0, 3.0));
        let json = serde_json::to_string(&op).unwrap();
        assert!(json.contains("\"reset\":true"));
        assert!(json.contains("\"theta\":1.0"));
        let back: BobOp = serde_json::from_str(&json).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn incompatible_mode_rejected() {
        let cfg = OptimizerConfig::with_seed(0);
        assert!(matches!(
            quantum_value(&chsh(), SolveMode::XorStarReversible, &cfg),
            Err(SolverError::IncompatibleMode { .. })
        ));
        assert!(matches!(
            quantum_value(&chsh_star(), SolveMode::Xor, &cfg),
            Err(SolverError::IncompatibleMode { .. })
        ));
    }
}
