//! Derivative-free maximization: Nelder-Mead simplex descent plus a
//! seeded multi-start harness.
//!
//! Restarts are the unit of parallelism. Each restart derives its own
//! generator from `(master seed, restart index)` and runs fully
//! sequentially, so the harness returns bit-identical results for a given
//! seed no matter how many worker threads execute it.

use crate::solve::OptimizerConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Derive a per-restart seed from the master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn restart_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

/// One Nelder-Mead run maximizing `f` from `x0` with initial simplex edge
/// `step`. Stops when the simplex value spread falls below `tol` or after
/// `max_iters` iterations. Returns the best vertex, which is never worse
/// than `f(x0)`.
pub fn nelder_mead_max<F>(f: &F, x0: &[f64], step: f64, max_iters: u32, tol: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let dim = x0.len();
    if dim == 0 {
        return (Vec::new(), f(x0));
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..max_iters {
        // Order vertices best first (maximization).
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if values[best] - values[worst] < tol {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |towards: &[f64], coeff: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(towards)
                .map(|(c, w)| c + coeff * (c - w))
                .collect()
        };

        let reflected = blend(&simplex[worst], ALPHA);
        let v_reflected = f(&reflected);

        if v_reflected > values[best] {
            let expanded = blend(&simplex[worst], GAMMA);
            let v_expanded = f(&expanded);
            if v_expanded > v_reflected {
                simplex[worst] = expanded;
                values[worst] = v_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = v_reflected;
            }
            continue;
        }
        if v_reflected > values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = v_reflected;
            continue;
        }

        let contracted = blend(&simplex[worst], -RHO);
        let v_contracted = f(&contracted);
        if v_contracted > values[worst] {
            simplex[worst] = contracted;
            values[worst] = v_contracted;
            continue;
        }

        // Shrink toward the best vertex; the best vertex itself is kept.
        let anchor = simplex[best].clone();
        for &i in order.iter().skip(1) {
            let shrunk: Vec<f64> = anchor
                .iter()
                .zip(&simplex[i])
                .map(|(a, x)| a + SIGMA * (x - a))
                .collect();
            values[i] = f(&shrunk);
            simplex[i] = shrunk;
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if values[i] > values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}

/// Polished local search: repeated Nelder-Mead rounds around the incumbent
/// with shrinking simplex edges, stopping once a round stops paying.
pub fn polish_max<F>(f: &F, x0: Vec<f64>, cfg: &OptimizerConfig) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    const STEPS: [f64; 5] = [0.9, 0.25, 0.07, 0.02, 0.005];
    let mut x = x0;
    let mut value = f(&x);
    for (round, &step) in STEPS.iter().enumerate() {
        let (nx, nv) = nelder_mead_max(f, &x, step, cfg.max_iters, cfg.inner_tol);
        let gain = nv - value;
        if nv > value {
            x = nx;
            value = nv;
        }
        if round >= 1 && gain < cfg.inner_tol {
            break;
        }
    }
    (x, value)
}

/// Result of a multi-start run.
pub struct MultistartOutcome {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    /// Per-restart best values, in restart order.
    pub restart_values: Vec<f64>,
}

impl MultistartOutcome {
    /// Top two restarts agree within `tol`; false with a single restart.
    pub fn converged(&self, tol: f64) -> bool {
        if self.restart_values.len() < 2 {
            return false;
        }
        let mut sorted = self.restart_values.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        (sorted[0] - sorted[1]).abs() < tol
    }
}

/// Maximize `objective` from `cfg.restarts` starting points. Restart 0 may
/// be warm-started; the rest draw from `sample` with a per-restart seeded
/// generator. Ties between restarts resolve to the lowest index.
pub fn multistart_max<F, S>(
    cfg: &OptimizerConfig,
    warm: Option<Vec<f64>>,
    sample: S,
    objective: F,
) -> MultistartOutcome
where
    F: Fn(&[f64]) -> f64 + Sync,
    S: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    let restarts = cfg.restarts.max(1);
    let runs: Vec<(Vec<f64>, f64)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.seed, r);
            let x0 = match (&warm, r) {
                (Some(w), 0) => w.clone(),
                _ => sample(&mut rng),
            };
            polish_max(&objective, x0, cfg)
        })
        .collect();

    let restart_values: Vec<f64> = runs.iter().map(|(_, v)| *v).collect();
    let mut best = 0;
    for (i, v) in restart_values.iter().enumerate().skip(1) {
        if *v > restart_values[best] {
            best = i;
        }
    }
    let (best_x, best_value) = runs.into_iter().nth(best).unwrap();
    MultistartOutcome {
        best_x,
        best_value,
        restart_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_peak() {
        let f = |x: &[f64]| -((x[0] - 1.5).powi(2) + (x[1] + 0.5).powi(2));
        let (x, v) = nelder_mead_max(&f, &[0.0, 0.0], 0.5, 2000, 1e-12);
        assert!((x[0] - 1.5).abs() < 1e-5);
        assert!((x[1] + 0.5).abs() < 1e-5);
        assert!(v > -1e-9);
    }

    #[test]
    fn best_never_drops_below_start() {
        let f = |x: &[f64]| -(x[0].powi(2));
        let (_, v) = nelder_mead_max(&f, &[0.0], 0.3, 5, 1e-12);
        assert!(v >= 0.0 - 1e-15);
    }

    #[test]
    fn multistart_is_deterministic_for_a_seed() {
        let cfg = OptimizerConfig {
            restarts: 8,
            seed: 42,
            ..Default::default()
        };
        let objective =
            |x: &[f64]| -((x[0] - 2.0).powi(2)) - (x[1].powi(2)) + (3.0 * x[0]).sin() * 0.05;
        let sample = |rng: &mut ChaCha8Rng| {
            use rand::Rng;
            vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)]
        };
        let a = multistart_max(&cfg, None, sample, objective);
        let b = multistart_max(&cfg, None, sample, objective);
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.best_x, b.best_x);
        assert!(a.converged(1e-6));
    }

    #[test]
    fn warm_start_value_is_a_floor() {
        let cfg = OptimizerConfig {
            restarts: 2,
            seed: 1,
            max_iters: 3,
            ..Default::default()
        };
        let objective = |x: &[f64]| -(x[0] - 7.0).powi(2);
        let sample = |rng: &mut ChaCha8Rng| {
            use rand::Rng;
            vec![rng.gen_range(-100.0..-90.0)]
        };
        let out = multistart_max(&cfg, Some(vec![7.0]), sample, objective);
        assert!(out.best_value >= -1e-12);
    }

    #[test]
    fn derived_seeds_spread() {
        let a = derive_seed(0, 0);
        let b = derive_seed(0, 1);
        let c = derive_seed(1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
