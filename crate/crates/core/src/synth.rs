//! Seeded random scalar instances used by the probes and the test suites.
//!
//! Every generated problem is pre-translated so that `(x⋆, z⋆) = (0, 0)` and
//! `b = 0` with a known multiplier `λ⋆`, which is the normalization the
//! certificate checks require. `f` carries an explicit relative
//! strong-convexity modulus `c1`; `g` is only assumed convex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admm::AdmmConfig;
use crate::plq::{OptimalPair, PlqFunction, SeparableProblem};

/// Deterministic RNG with a fixed cross-platform stream.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.gen()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.0.gen()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1: f64 = self.0.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = self.0.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// A random scalar instance with its certified optimum.
#[derive(Debug, Clone)]
pub struct SynthInstance {
    pub problem: SeparableProblem,
    pub opt: OptimalPair,
    /// Relative strong-convexity modulus of `f` (with `A = 1`).
    pub c1: f64,
    /// Width of the dual domain around `λ⋆`: `D` is finite on
    /// `[λ⋆ − width, λ⋆ + width]` at least.
    pub dual_width: f64,
}

/// Builds a scalar problem (`A = B = 1`, `b = 0`) whose optimum is `(0, 0)`
/// with multiplier `λ⋆`, where `f` is `c1`-strongly convex relative to `|·|`.
pub fn random_scalar_instance(seed: u64) -> SynthInstance {
    let mut rng = SeededRng::new(seed);
    let c1 = rng.uniform(0.5, 2.0);
    let lambda_star = rng.uniform(-1.0, 1.0);

    // f: quadratic weight ≥ c1 keeps the claimed modulus valid; the two
    // active pieces bracket −λ⋆ so that 0 ∈ ∂f(0) + λ⋆.
    let qf = c1 + rng.uniform(0.0, 0.5);
    let mut f_pieces = vec![
        (-lambda_star - rng.uniform(0.1, 1.0), 0.0),
        (-lambda_star + rng.uniform(0.1, 1.0), 0.0),
    ];
    if rng.next_u64() % 2 == 0 {
        // inactive extra piece strictly below the max at 0
        f_pieces.push((rng.uniform(-2.0, 2.0), -rng.uniform(0.3, 1.5)));
    }
    let f = PlqFunction::new(qf, f_pieces).expect("valid synthetic f");

    // g: convex only; wide slopes keep a usable dual domain around λ⋆.
    let qg = if rng.next_u64() % 2 == 0 { 0.0 } else { rng.uniform(0.2, 1.0) };
    let v1 = rng.uniform(0.5, 3.0);
    let v2 = rng.uniform(0.5, 3.0);
    let mut g_pieces = vec![(-lambda_star - v1, 0.0), (-lambda_star + v2, 0.0)];
    if rng.next_u64() % 2 == 0 {
        g_pieces.push((rng.uniform(-2.0, 2.0), -rng.uniform(0.3, 1.5)));
    }
    let g = PlqFunction::new(qg, g_pieces).expect("valid synthetic g");

    let problem = SeparableProblem::scalar(f, g);
    let opt = OptimalPair {
        x_star: vec![0.0],
        z_star: vec![0.0],
        lambda_star: vec![lambda_star],
        f_star: 0.0,
        g_star: 0.0,
    };
    SynthInstance {
        problem,
        opt,
        c1,
        dual_width: v1.min(v2),
    }
}

/// Random start for a scalar instance.
pub fn random_scalar_config(seed: u64, t: f64, iterations: usize) -> AdmmConfig {
    let mut rng = SeededRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    AdmmConfig {
        t,
        iterations,
        lambda0: vec![rng.uniform(-2.0, 2.0)],
        z0: vec![rng.uniform(-2.0, 2.0)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_certify_their_optimum() {
        for seed in 0..50 {
            let inst = random_scalar_instance(seed);
            inst.opt.validate(&inst.problem, 1e-12).unwrap();
            assert_eq!(inst.problem.f_value(&[0.0]), 0.0);
            assert_eq!(inst.problem.g_value(&[0.0]), 0.0);
        }
    }

    #[test]
    fn rng_is_deterministic() {
        let a: Vec<u64> = {
            let mut r = SeededRng::new(3);
            (0..4).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = SeededRng::new(3);
            (0..4).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
    }
}
