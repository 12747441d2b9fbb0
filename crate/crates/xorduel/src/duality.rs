//! The two-way mapping between reversible qubit strategies for XOR* games
//! and Bell-state measurement strategies for XOR games, plus the dual-pair
//! comparison report.
//!
//! Sliding an operator through the Bell state transposes it:
//! `(M ⊗ I)|phi+> = (I ⊗ M^T)|phi+>`. Applied to a sequential strategy
//! `m = measure(V_t U_s |0>)`, this turns Alice's unitary into the
//! measurement basis `{conj(U_s)|a>}` on her half of a Bell pair while Bob
//! applies `V_t` and measures computationally, giving
//! `p(a=0, b=m | s,t) = 1/2 |<m| V_t U_s |0>|^2` and hence, by the outcome
//! symmetry of Bell-state measurements, `p(a xor b = m) = p_star(m)`
//! exactly. Both directions preserve every win probability.

use crate::classical::classical_value;
use crate::game::{GameKind, GameSpec};
use crate::quantum::{quantum_value, BobOp, QuantumXorStarStrategy, QuantumXorStrategy};
use crate::qubit::{
    basis_params_from_vector, realize_unitary, unitary_params_from_matrix, Mat2, Vec2,
};
use crate::solve::{OptimizerConfig, SolveMode, SolverError, Strategy};
use serde::{Deserialize, Serialize};

/// Quantum-side agreement threshold for a PASS verdict; the classical
/// values must agree exactly.
pub const DUAL_QUANTUM_TOL: f64 = 1e-3;

/// Map a reversible XOR* strategy to the Bell-state XOR strategy with the
/// same win probabilities: Alice measures in `{conj(U_s)|a>}`, Bob in
/// `{V_t^dag |b>}`.
pub fn map_xorstar_to_xor(
    strat: &QuantumXorStarStrategy,
) -> Result<QuantumXorStrategy, SolverError> {
    if !strat.is_reversible() {
        return Err(SolverError::ReversibilityViolation);
    }
    let alice = strat
        .alice
        .iter()
        .map(|p| {
            let u = realize_unitary(p);
            // conj(U)|0> is the conjugate of U's first column.
            let v0 = Vec2([u.0[0][0].conj(), u.0[1][0].conj()]);
            basis_params_from_vector(&v0)
        })
        .collect();
    let bob = strat
        .bob
        .iter()
        .map(|op| {
            let v = realize_unitary(op.params());
            // V^dag |0> is the conjugate of V's first row.
            let w0 = Vec2([v.0[0][0].conj(), v.0[0][1].conj()]);
            basis_params_from_vector(&w0)
        })
        .collect();
    Ok(QuantumXorStrategy { alice, bob })
}

/// Map a Bell-state XOR strategy to the reversible XOR* strategy with the
/// same win probabilities: `U_s = conj(M_s)` and `V_t = N_t^dag`, where
/// `M_s`, `N_t` rotate the computational basis onto the measurement bases.
pub fn map_xor_to_xorstar(strat: &QuantumXorStrategy) -> QuantumXorStarStrategy {
    let alice = strat
        .alice
        .iter()
        .map(|p| {
            let (v0, v1) = p.basis_vectors();
            let u = Mat2([
                [v0.0[0].conj(), v1.0[0].conj()],
                [v0.0[1].conj(), v1.0[1].conj()],
            ]);
            unitary_params_from_matrix(&u)
        })
        .collect();
    let bob = strat
        .bob
        .iter()
        .map(|p| {
            let (w0, w1) = p.basis_vectors();
            let v = Mat2([
                [w0.0[0].conj(), w0.0[1].conj()],
                [w1.0[0].conj(), w1.0[1].conj()],
            ]);
            BobOp::Unitary(unitary_params_from_matrix(&v))
        })
        .collect();
    QuantumXorStarStrategy { alice, bob }
}

/// Paired solve of an XOR game and its XOR* twin under reversible
/// strategies: the four values, the per-side quantum-over-classical gaps,
/// and the cross-side discrepancies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPairReport {
    pub game_name: String,
    pub omega_c_xor: f64,
    pub omega_q_xor: f64,
    pub omega_c_xorstar_rev: f64,
    pub omega_q_xorstar_rev: f64,
    pub gap_xor: f64,
    pub gap_xorstar: f64,
    pub max_abs_discrepancy: f64,
    pub pass: bool,
    pub classical_xor_strategy: Strategy,
    pub quantum_xor_strategy: Strategy,
    pub classical_xorstar_strategy: Strategy,
    pub quantum_xorstar_strategy: Strategy,
}

/// Solve both sides of a dual pair and compare. The two specs must share
/// dist and task tables and differ only in kind. PASS requires the
/// classical values to agree exactly and the quantum values to agree
/// within [`DUAL_QUANTUM_TOL`].
pub fn compare_dual_pair(
    xor_spec: &GameSpec,
    star_spec: &GameSpec,
    cfg: &OptimizerConfig,
) -> Result<DualPairReport, SolverError> {
    xor_spec.validate()?;
    star_spec.validate()?;
    if xor_spec.kind != GameKind::Xor {
        return Err(SolverError::IncompatibleMode {
            kind: xor_spec.kind,
            mode: SolveMode::Xor,
        });
    }
    if star_spec.kind != GameKind::XorStar {
        return Err(SolverError::IncompatibleMode {
            kind: star_spec.kind,
            mode: SolveMode::XorStarReversible,
        });
    }
    if xor_spec.dist != star_spec.dist || xor_spec.task != star_spec.task {
        return Err(SolverError::SpecMismatch);
    }

    let c_xor = classical_value(xor_spec, SolveMode::Xor)?;
    let c_star = classical_value(star_spec, SolveMode::XorStarReversible)?;
    let q_xor = quantum_value(xor_spec, SolveMode::Xor, cfg)?;
    let q_star = quantum_value(star_spec, SolveMode::XorStarReversible, cfg)?;

    let classical_discrepancy = (c_xor.value - c_star.value).abs();
    let quantum_discrepancy = (q_xor.value - q_star.value).abs();
    let game_name = if xor_spec.name == star_spec.name {
        xor_spec.name.clone()
    } else {
        format!("{}/{}", xor_spec.name, star_spec.name)
    };
    Ok(DualPairReport {
        game_name,
        omega_c_xor: c_xor.value,
        omega_q_xor: q_xor.value,
        omega_c_xorstar_rev: c_star.value,
        omega_q_xorstar_rev: q_star.value,
        gap_xor: q_xor.value - c_xor.value,
        gap_xorstar: q_star.value - c_star.value,
        max_abs_discrepancy: classical_discrepancy.max(quantum_discrepancy),
        pass: classical_discrepancy == 0.0 && quantum_discrepancy < DUAL_QUANTUM_TOL,
        classical_xor_strategy: c_xor.strategy,
        quantum_xor_strategy: q_xor.strategy,
        classical_xorstar_strategy: c_star.strategy,
        quantum_xorstar_strategy: q_star.strategy,
    })
}
