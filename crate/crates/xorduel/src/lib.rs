//! Solvers for the classical and quantum values of two families of
//! binary-output games.
//!
//! An **XOR game** is a two-player nonlocal game: Alice and Bob receive
//! inputs `(s, t)` drawn from a joint distribution and, without
//! communicating, output bits `a` and `b`; they win when the parity
//! `a ^ b` equals a task bit `f(s, t)`. An **XOR\* game** is the
//! sequential, single-system counterpart: one two-level resource passes
//! through Alice's operation, then Bob's, then a fixed measurement with
//! outcome `m`; the players win when `m = f(s, t)`.
//!
//! The library computes, for either family:
//!
//! - exact classical values by exhaustive enumeration of deterministic
//!   strategies ([`classical::classical_value`]), including strategy sets
//!   augmented with irreversible reset gates;
//! - quantum values by seeded multi-start derivative-free optimization
//!   over qubit strategies ([`quantum::quantum_value`]), with an
//!   independent unit-vector see-saw oracle for XOR games
//!   ([`quantum::seesaw_xor_value`]);
//! - the exact mapping between reversible qubit XOR\* strategies and
//!   Bell-state XOR strategies, in both directions ([`duality`]), and a
//!   paired comparison report ([`duality::compare_dual_pair`]);
//! - a catalog of standard games with reference values ([`catalog`]).
//!
//! ```
//! use xorduel::{catalog, classical, quantum, solve};
//!
//! let pair = catalog::build("chsh", None)?;
//! let classical = classical::classical_value(&pair.xor, solve::SolveMode::Xor)?;
//! assert_eq!(classical.value, 0.75);
//!
//! let cfg = solve::OptimizerConfig { restarts: 8, ..Default::default() };
//! let quantum = quantum::quantum_value(&pair.xor, solve::SolveMode::Xor, &cfg)?;
//! assert!(quantum.value > 0.85);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod catalog;
pub mod classical;
pub mod duality;
pub mod game;
pub mod io;
pub mod optim;
pub mod quantum;
pub mod qubit;
pub mod solve;

pub use catalog::{CatalogEntry, DualPair, ExpectedBounds};
pub use classical::{classical_value, DeterministicXorStarStrategy, DeterministicXorStrategy};
pub use duality::{compare_dual_pair, map_xor_to_xorstar, map_xorstar_to_xor, DualPairReport};
pub use game::{GameError, GameKind, GameSpec};
pub use quantum::{
    eval_quantum_xor, eval_quantum_xorstar, quantum_value, seesaw_xor_value, BobOp,
    QuantumXorStarStrategy, QuantumXorStrategy, VectorStrategy,
};
pub use qubit::{MeasurementBasisParams, QubitUnitaryParams};
pub use solve::{OptimizerConfig, SolveMode, SolveResult, SolverError, Strategy};

// The README and the guide chapters under book/src/ double as doc-tests
// so their code stays compilable and correct.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/classical-values.md")]
    mod classical_values {}
    #[doc = include_str!("../../../book/src/quantum-values.md")]
    mod quantum_values {}
    #[doc = include_str!("../../../book/src/duality.md")]
    mod duality {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/reset-gates.md")]
    mod reset_gates {}
}
