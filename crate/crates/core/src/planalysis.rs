//! Empirical Polyak–Łojasiewicz and error-bound diagnostics on concrete
//! instances.
//!
//! The PŁ modulus estimated here is tied to one specific subgradient
//! selection: the leftmost-minimizer witnesses of the dual evaluation. The
//! inequality quantifies over all selections, so the estimate is an upper
//! bound for the best constant admissible with this selection rule.

use serde::Serialize;

use crate::admm::{admm_run, dual_value, AdmmConfig, DualEval};
use crate::error::{Error, Result};
use crate::numkit::norm2;
use crate::plq::{OptimalPair, SeparableProblem};
use crate::synth::SeededRng;

/// One dual sample: the gap to the optimal dual value and the squared norm
/// of the produced subgradient witness.
#[derive(Debug, Clone, Serialize)]
pub struct PlSample {
    pub lambda: Vec<f64>,
    pub gap: f64,
    pub xi_norm_sq: f64,
}

/// Estimates the largest PŁ modulus consistent with the samples:
/// `Lp_hat = min over samples with gap > 1e−12 of ‖ξ‖²/(2·gap)`.
///
/// Every λ must lie in the dual domain; at least one sample must have a
/// positive gap.
pub fn estimate_pl_constant(
    p: &SeparableProblem,
    opt: &OptimalPair,
    lambdas: &[Vec<f64>],
) -> Result<(f64, Vec<PlSample>)> {
    let d_star = opt.f_star + opt.g_star;
    let mut samples = Vec::with_capacity(lambdas.len());
    for lam in lambdas {
        let ev = dual_value(p, lam)?;
        match ev {
            DualEval::Finite { value, .. } => {
                let xi = ev.xi(p).expect("finite dual has witnesses");
                samples.push(PlSample {
                    lambda: lam.clone(),
                    gap: d_star - value,
                    xi_norm_sq: norm2(&xi).powi(2),
                });
            }
            DualEval::Unbounded => {
                return Err(Error::invalid(format!(
                    "estimate_pl_constant: λ = {lam:?} lies outside the dual domain"
                )))
            }
        }
    }
    let lp_hat = samples
        .iter()
        .filter(|s| s.gap > 1e-12)
        .map(|s| s.xi_norm_sq / (2.0 * s.gap))
        .fold(f64::INFINITY, f64::min);
    if !lp_hat.is_finite() {
        return Err(Error::DegenerateSamples(
            "estimate_pl_constant: all sampled gaps are zero".to_string(),
        ));
    }
    Ok((lp_hat, samples))
}

/// Draws `count` sample multipliers around `λ⋆`: Gaussian at three radius
/// scales, deterministically from the seed.
pub fn sample_lambdas(opt: &OptimalPair, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SeededRng::new(seed);
    let scales = [0.25, 1.0, 4.0];
    (0..count)
        .map(|i| {
            let s = scales[i % scales.len()];
            opt.lambda_star
                .iter()
                .map(|&l| l + s * rng.normal())
                .collect()
        })
        .collect()
}

/// Checks the one-step alignment inequality
/// `⟨Ax̂¹ + Bz¹ − b, Ax² + Bz² − b⟩ ≤ ‖Ax̂¹ + Bz¹ − b‖²`, where `(x̂¹, z¹)`
/// jointly minimize the Lagrangian at `λ¹` and `(x², z²)` is one ADMM step
/// from `(λ¹, z¹)`. Returns `(lhs, rhs)`; the caller asserts
/// `lhs ≤ rhs + 1e−9`.
pub fn lemma_inner_product_check(
    p: &SeparableProblem,
    lambda1: &[f64],
    z1_choice: &[f64],
    t: f64,
) -> Result<(f64, f64)> {
    if z1_choice.len() != p.z_dim() {
        return Err(Error::invalid("lemma check: z¹ has the wrong dimension"));
    }
    let ev = dual_value(p, lambda1)?;
    let (x_hat, z_hat, _value) = match ev {
        DualEval::Finite { ref x_hat, ref z_hat, value } => (x_hat.clone(), z_hat.clone(), value),
        DualEval::Unbounded => {
            return Err(Error::Unbounded("lemma check: dual unbounded at λ¹".to_string()))
        }
    };
    // z¹ must be a Lagrangian minimizer at λ¹: compare section values
    let lin_g = p.b.t_matvec(lambda1);
    let val_choice = p.g_value(z1_choice) + crate::numkit::dot(&lin_g, z1_choice);
    let val_witness = p.g_value(&z_hat) + crate::numkit::dot(&lin_g, &z_hat);
    if val_choice > val_witness + 1e-9 * (1.0 + val_witness.abs()) {
        return Err(Error::invalid(
            "lemma check: supplied z¹ does not minimize the Lagrangian at λ¹",
        ));
    }

    let cfg = AdmmConfig {
        t,
        iterations: 1,
        lambda0: lambda1.to_vec(),
        z0: z1_choice.to_vec(),
    };
    let trace = admm_run(p, &cfg)?;
    let ax2 = p.a.matvec(&trace.xs[0]);
    let bz2 = p.b.matvec(&trace.zs[1]);
    let r2: Vec<f64> = ax2
        .iter()
        .zip(bz2.iter().zip(&p.rhs))
        .map(|(a, (b, r))| a + b - r)
        .collect();
    let ax1 = p.a.matvec(&x_hat);
    let bz1 = p.b.matvec(z1_choice);
    let r1: Vec<f64> = ax1
        .iter()
        .zip(bz1.iter().zip(&p.rhs))
        .map(|(a, (b, r))| a + b - r)
        .collect();
    Ok((crate::numkit::dot(&r1, &r2), norm2(&r1).powi(2)))
}

/// Outcome of the necessity probe: the PŁ inequality implied by an observed
/// one-step contraction factor.
#[derive(Debug, Clone, Serialize)]
pub struct NecessityReport {
    /// `1/(2Lp)` implied by the contraction: `t/(1−γ)`.
    pub implied_coefficient: f64,
    /// Implied modulus `Lp = (1−γ)/(2t)`.
    pub implied_lp: f64,
    /// Worst `gap / (t/(1−γ)·‖ξ‖²)` over the samples (0 when vacuous).
    pub worst_ratio: f64,
    pub n_samples: usize,
    pub pass: bool,
}

/// Checks `D(λ⋆) − D(λ) ≤ (t/(1−γ))‖ξ‖²` on each sample, given an observed
/// per-step dual contraction factor `γ ∈ [0, 1)`.
pub fn necessity_probe(
    p: &SeparableProblem,
    opt: &OptimalPair,
    gamma: f64,
    t: f64,
    lambdas: &[Vec<f64>],
) -> Result<NecessityReport> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::invalid(format!("necessity probe: γ = {gamma} must lie in [0, 1)")));
    }
    if !(t > 0.0) {
        return Err(Error::invalid("necessity probe: t must be positive"));
    }
    let coeff = t / (1.0 - gamma);
    let d_star = opt.f_star + opt.g_star;
    let mut worst: f64 = 0.0;
    for lam in lambdas {
        let ev = dual_value(p, lam)?;
        let value = match ev {
            DualEval::Finite { value, .. } => value,
            DualEval::Unbounded => {
                return Err(Error::invalid("necessity probe: λ outside the dual domain"))
            }
        };
        let gap = d_star - value;
        let xi_sq = norm2(&ev.xi(p).expect("finite dual")).powi(2);
        if gap <= 1e-12 {
            continue; // vacuous sample
        }
        if xi_sq == 0.0 {
            worst = f64::INFINITY;
        } else {
            worst = worst.max(gap / (coeff * xi_sq));
        }
    }
    Ok(NecessityReport {
        implied_coefficient: coeff,
        implied_lp: (1.0 - gamma) / (2.0 * t),
        worst_ratio: worst,
        n_samples: lambdas.len(),
        pass: worst <= 1.0 + 1e-9,
    })
}

/// JSON report of a PŁ estimation run.
#[derive(Debug, Clone, Serialize)]
pub struct PlReport {
    pub lp_hat: f64,
    pub n_samples: usize,
    pub worst_sample: PlSample,
}

/// Runs [`estimate_pl_constant`] and packages the binding sample.
pub fn pl_report(p: &SeparableProblem, opt: &OptimalPair, lambdas: &[Vec<f64>]) -> Result<PlReport> {
    let (lp_hat, samples) = estimate_pl_constant(p, opt, lambdas)?;
    let worst = samples
        .iter()
        .filter(|s| s.gap > 1e-12)
        .min_by(|a, b| {
            let ra = a.xi_norm_sq / (2.0 * a.gap);
            let rb = b.xi_norm_sq / (2.0 * b.gap);
            ra.partial_cmp(&rb).unwrap()
        })
        .cloned()
        .expect("estimate succeeded, so a positive-gap sample exists");
    Ok(PlReport { lp_hat, n_samples: lambdas.len(), worst_sample: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_instance, GalleryKind};
    use crate::plq::PlqFunction;

    fn pl_instance(n: usize) -> (SeparableProblem, OptimalPair) {
        let (p, _, opt) = make_instance(GalleryKind::PlL1Quadratic, 1, 1.0, 1.0, n).unwrap();
        (p, opt)
    }

    #[test]
    fn closed_form_lp_hat() {
        let (p, opt) = pl_instance(1);
        let lambdas = vec![vec![1.5], vec![2.0], vec![3.0]];
        let (lp_hat, samples) = estimate_pl_constant(&p, &opt, &lambdas).unwrap();
        // gap = (λ−1)², ‖ξ‖² = 4(λ−1)² on these branches, so every ratio is 2
        assert!((lp_hat - 2.0).abs() < 1e-12);
        for s in &samples {
            let lam = s.lambda[0];
            assert!((s.gap - (lam - 1.0) * (lam - 1.0)).abs() < 1e-12);
            assert!((s.xi_norm_sq - 4.0 * (lam - 1.0) * (lam - 1.0)).abs() < 1e-12);
        }
        // the closed-form modulus ½ is admissible
        assert!(0.5 <= lp_hat);
    }

    #[test]
    fn degenerate_samples_error() {
        let (p, opt) = pl_instance(1);
        let err = estimate_pl_constant(&p, &opt, &[vec![0.0], vec![0.5]]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSamples(_)));
    }

    #[test]
    fn lp_hat_invariant_under_sampling_batch() {
        let (p, opt) = pl_instance(2);
        let lambdas = sample_lambdas(&opt, 100, 5);
        let (lp_hat, samples) = estimate_pl_constant(&p, &opt, &lambdas).unwrap();
        assert_eq!(samples.len(), 100);
        assert!(lp_hat <= 2.0 + 1e-9);
        // every sample satisfies the estimated inequality by construction
        for s in &samples {
            assert!(s.gap <= s.xi_norm_sq / (2.0 * lp_hat) + 1e-12);
        }
    }

    #[test]
    fn lemma_check_fixed_point() {
        let (p, opt) = pl_instance(1);
        let ev = dual_value(&p, &opt.lambda_star).unwrap();
        let z1 = match ev {
            DualEval::Finite { z_hat, .. } => z_hat,
            _ => unreachable!(),
        };
        let (lhs, rhs) = lemma_inner_product_check(&p, &opt.lambda_star, &z1, 1.0).unwrap();
        assert!(lhs.abs() < 1e-12);
        assert!(rhs.abs() < 1e-12);
    }

    #[test]
    fn lemma_check_quadratic_instance() {
        let p = SeparableProblem::scalar(
            PlqFunction::quadratic(1.0).unwrap(),
            PlqFunction::quadratic(1.0).unwrap(),
        );
        // witnesses at λ¹ = 1: x̂¹ = ẑ¹ = −1
        let (lhs, rhs) = lemma_inner_product_check(&p, &[1.0], &[-1.0], 0.5).unwrap();
        assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn lemma_check_batch_on_pl_instance() {
        let (p, opt) = pl_instance(2);
        let lambdas = sample_lambdas(&opt, 100, 11);
        for lam in &lambdas {
            let z1 = match dual_value(&p, lam).unwrap() {
                DualEval::Finite { z_hat, .. } => z_hat,
                _ => unreachable!("pl instance dual is finite everywhere"),
            };
            for &t in &[0.5, 1.0] {
                let (lhs, rhs) = lemma_inner_product_check(&p, lam, &z1, t).unwrap();
                assert!(lhs <= rhs + 1e-9, "λ = {lam:?}, t = {t}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn lemma_check_rejects_bad_z1() {
        let (p, opt) = pl_instance(1);
        let bad = vec![10.0];
        assert!(lemma_inner_product_check(&p, &opt.lambda_star, &bad, 1.0).is_err());
    }

    #[test]
    fn necessity_constants() {
        let (p, opt) = pl_instance(1);
        let rep = necessity_probe(&p, &opt, 0.5, 1.0, &[vec![2.0]]).unwrap();
        assert_eq!(rep.implied_coefficient, 2.0);
        assert_eq!(rep.implied_lp, 0.25);
        assert!(rep.pass, "worst ratio {}", rep.worst_ratio);

        // fixed-point samples pass vacuously
        let rep0 = necessity_probe(&p, &opt, 0.9, 1.0, &[vec![0.0], vec![0.3]]).unwrap();
        assert_eq!(rep0.worst_ratio, 0.0);
        assert!(rep0.pass);
    }

    #[test]
    fn necessity_with_measured_contraction() {
        // measure the per-step dual contraction on the ℓ1 instance, then
        // check the implied PŁ inequality on fresh samples
        let (p, opt) = pl_instance(1);
        let mut gamma: f64 = 0.0;
        for start in [1.5, 2.0, 4.0] {
            let z1 = match dual_value(&p, &[start]).unwrap() {
                DualEval::Finite { z_hat, .. } => z_hat,
                _ => unreachable!(),
            };
            let cfg = AdmmConfig { t: 1.0, iterations: 2, lambda0: vec![start], z0: z1 };
            let trace = admm_run(&p, &cfg).unwrap();
            let d_star = opt.f_star + opt.g_star;
            let g1 = d_star - trace.dual_values[1].value().unwrap();
            let g2 = d_star - trace.dual_values[2].value().unwrap();
            if g1 > 1e-12 {
                gamma = gamma.max(g2 / g1);
            }
        }
        assert!(gamma < 1.0);
        let lambdas = sample_lambdas(&opt, 60, 23);
        let rep = necessity_probe(&p, &opt, gamma, 1.0, &lambdas).unwrap();
        assert!(rep.pass, "worst ratio {}", rep.worst_ratio);
    }
}
