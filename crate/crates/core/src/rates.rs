//! Closed-form convergence-rate formulas and parameter conversions, each
//! behind its precondition gate. Out-of-regime parameter combinations are
//! rejected rather than extrapolated.

use crate::error::{Error, Result};

/// Parameter bag for the rate formulas; only the fields a formula needs must
/// be present.
#[derive(Debug, Clone, Default)]
pub struct RateParams {
    /// Relative strong-convexity modulus of `f`.
    pub c1: Option<f64>,
    /// Relative strong-convexity modulus of `g`.
    pub c2: Option<f64>,
    /// Step length.
    pub t: Option<f64>,
    pub n_iters: Option<usize>,
    /// Dual-objective Polyak–Łojasiewicz modulus.
    pub lp: Option<f64>,
    /// Smoothness constant `L`.
    pub smoothness: Option<f64>,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub lam_max_ata: Option<f64>,
    pub lam_max_btb: Option<f64>,
    pub lam_min_aat: Option<f64>,
    pub lam_min_bbt: Option<f64>,
}

impl RateParams {
    fn need(&self, field: Option<f64>, name: &str) -> Result<f64> {
        field.ok_or_else(|| Error::invalid(format!("rate parameter `{name}` is required here")))
    }
}

/// Augmented-dual error-bound constants: `L_a · a = 1`.
#[derive(Debug, Clone)]
pub struct ErrorBoundParams {
    /// Error-bound constant `τ > 0`.
    pub tau: f64,
    /// Augmentation parameter `a > 0`.
    pub a: f64,
    /// Smoothness of the augmented dual, `L_a = 1/a`.
    pub la: f64,
}

impl ErrorBoundParams {
    pub fn new(tau: f64, a: f64) -> Result<Self> {
        if !(tau > 0.0) || !(a > 0.0) {
            return Err(Error::invalid(format!("error-bound parameters must be positive: τ = {tau}, a = {a}")));
        }
        Ok(ErrorBoundParams { tau, a, la: 1.0 / a })
    }
}

fn check_sublinear_regime(t: f64, n_iters: usize, c1: f64, what: &str) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::OutOfRegime(format!("{what}: requires t > 0, got t = {t}")));
    }
    if !(t <= c1) {
        return Err(Error::OutOfRegime(format!("{what}: requires t ≤ c1, got t = {t}, c1 = {c1}")));
    }
    if n_iters < 4 {
        return Err(Error::OutOfRegime(format!("{what}: requires N ≥ 4, got N = {n_iters}")));
    }
    Ok(())
}

/// Dual-gap bound `Δ/(4Nt)` for `t ≤ c1`, `N ≥ 4`.
pub fn bound_dual_gap(delta: f64, t: f64, n_iters: usize, c1: f64) -> Result<f64> {
    check_sublinear_regime(t, n_iters, c1, "dual-gap bound")?;
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("dual-gap bound: Δ = {delta} must be ≥ 0")));
    }
    Ok(delta / (4.0 * n_iters as f64 * t))
}

/// Primal-residual bound `√Δ/(tN)` for `t ≤ c1`, `N ≥ 4`.
pub fn bound_primal_residual(delta: f64, t: f64, n_iters: usize, c1: f64) -> Result<f64> {
    check_sublinear_regime(t, n_iters, c1, "primal-residual bound")?;
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("primal-residual bound: Δ = {delta} must be ≥ 0")));
    }
    Ok(delta.sqrt() / (t * n_iters as f64))
}

/// Dual-residual bound `√Δ/((N−1)t)` for `t ≤ c1`, `N ≥ 4`.
pub fn bound_dual_residual(delta: f64, t: f64, n_iters: usize, c1: f64) -> Result<f64> {
    check_sublinear_regime(t, n_iters, c1, "dual-residual bound")?;
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("dual-residual bound: Δ = {delta} must be ≥ 0")));
    }
    Ok(delta.sqrt() / ((n_iters as f64 - 1.0) * t))
}

/// Strongly-convex dual-gap bound `‖λ¹−λ⋆‖²/(2t(N−1))`, gated on the step
/// cap `t ≤ ∛(μ₁μ₂²/(λmax(AᵀA)·λmax²(BᵀB)))` and `N ≥ 2`.
///
/// The bound needs one ADMM step before it applies, so the squared distance
/// `‖λ¹ − λ⋆‖²` is taken as an input.
pub fn goldstein_bound(params: &RateParams, lambda1_dist_sq: f64) -> Result<f64> {
    let t = params.need(params.t, "t")?;
    let mu1 = params.need(params.mu1, "mu1")?;
    let mu2 = params.need(params.mu2, "mu2")?;
    let la = params.need(params.lam_max_ata, "lam_max_ata")?;
    let lb = params.need(params.lam_max_btb, "lam_max_btb")?;
    let n_iters = params
        .n_iters
        .ok_or_else(|| Error::invalid("rate parameter `n_iters` is required here"))?;
    if !(mu1 > 0.0 && mu2 > 0.0 && la > 0.0 && lb > 0.0) {
        return Err(Error::invalid("goldstein bound: moduli and spectral bounds must be positive"));
    }
    if !(lambda1_dist_sq >= 0.0) {
        return Err(Error::invalid("goldstein bound: distance squared must be ≥ 0"));
    }
    let cap = (mu1 * mu2 * mu2 / (la * lb * lb)).cbrt();
    if !(t > 0.0 && t <= cap) {
        return Err(Error::OutOfRegime(format!(
            "goldstein bound: requires 0 < t ≤ ∛(μ₁μ₂²/(λmaxAᵀA·λmax²BᵀB)) = {cap}, got t = {t}"
        )));
    }
    if n_iters < 2 {
        return Err(Error::OutOfRegime(format!("goldstein bound: requires N ≥ 2, got N = {n_iters}")));
    }
    Ok(lambda1_dist_sq / (2.0 * t * (n_iters as f64 - 1.0)))
}

/// Two-iteration dual-gap contraction factor under the PŁ inequality, for
/// `0 < t ≤ √(c1c2)`. Case split on `c1 ≥ c2` versus `c1 < c2`.
pub fn pl_linear_rate(c1: f64, c2: f64, t: f64, lp: f64) -> Result<f64> {
    if !(c1 > 0.0 && c2 > 0.0 && lp > 0.0) {
        return Err(Error::invalid(format!(
            "pl_linear_rate: requires c1, c2, Lp > 0, got c1 = {c1}, c2 = {c2}, Lp = {lp}"
        )));
    }
    let cap = (c1 * c2).sqrt();
    if !(t > 0.0 && t <= cap) {
        return Err(Error::OutOfRegime(format!(
            "pl_linear_rate: requires 0 < t ≤ √(c1c2) = {cap}, got t = {t}"
        )));
    }
    let rate = if c1 >= c2 {
        let base = 2.0 * c1 * c2 - t * t;
        base / (base + lp * t * (4.0 * c1 * c2 - c2 * t - 2.0 * t * t))
    } else {
        let s = (c1 * c2).sqrt();
        let base = 4.0 * c2 * c2 - 2.0 * c2 * s - t * t;
        base / (base
            + lp * t * (8.0 * c2 * c2 + 5.0 * c2 * t - 2.0 * s * (1.0 + t / c1) * (2.0 * c2 + t)))
    };
    Ok(rate)
}

/// The two R-linear scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// `f` smooth and strongly convex relative to `A`, `A` full row rank.
    S1,
    /// `f` strongly convex relative to `A`, `g` smooth, `B` full row rank.
    S2,
}

/// Per-step Lyapunov contraction factor and the R-linear multiplier.
///
/// Returns `(factor, rho_coefficient)` where the bound reads
/// `D(λ⋆) − D(λ^N) ≤ rho_coefficient · V⁰ · factor^N`. For S1 the factor is
/// `1 − 2c1t/(c1d + 2c1t + t²)` with `d = L/λmin(AAᵀ)` and
/// `rho_coefficient = factor⁻⁴/(16t)`; for S2 the factor is the *squared*
/// ratio `(L/(L + tλmin(BBᵀ)))²` and `rho_coefficient = factor⁻⁵/(16t)`
/// (equivalently exponent −10 on the unsquared ratio).
pub fn rlinear_contraction(scenario: Scenario, params: &RateParams) -> Result<(f64, f64)> {
    let t = params.need(params.t, "t")?;
    let c1 = params.need(params.c1, "c1")?;
    let l = params.need(params.smoothness, "smoothness")?;
    if !(t > 0.0 && c1 > 0.0 && l > 0.0) {
        return Err(Error::invalid("rlinear_contraction: t, c1, L must be positive"));
    }
    match scenario {
        Scenario::S1 => {
            let lam_min = params.need(params.lam_min_aat, "lam_min_aat")?;
            if !(lam_min > 0.0) {
                return Err(Error::invalid("S1 requires λmin(AAᵀ) > 0 (full row rank)"));
            }
            let cap = c1.min((c1 * l / lam_min).sqrt());
            if !(t < cap) {
                return Err(Error::OutOfRegime(format!(
                    "S1: requires t < min(c1, √(c1·L/λmin(AAᵀ))) = {cap}, got t = {t}"
                )));
            }
            let d = l / lam_min;
            let factor = 1.0 - 2.0 * c1 * t / (c1 * d + 2.0 * c1 * t + t * t);
            Ok((factor, factor.powi(-4) / (16.0 * t)))
        }
        Scenario::S2 => {
            let lam_min = params.need(params.lam_min_bbt, "lam_min_bbt")?;
            if !(lam_min > 0.0) {
                return Err(Error::invalid("S2 requires λmin(BBᵀ) > 0 (full row rank)"));
            }
            let cap = (0.5 * c1).min(l / (2.0 * lam_min));
            if !(t < cap) {
                return Err(Error::OutOfRegime(format!(
                    "S2: requires t < min(c1/2, L/(2λmin(BBᵀ))) = {cap}, got t = {t}"
                )));
            }
            let ratio = l / (l + t * lam_min);
            let factor = ratio * ratio;
            Ok((factor, factor.powi(-5) / (16.0 * t)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertDirection {
    /// Error bound ⇒ PŁ: `L_p = 1/(L_a τ²)`.
    EbToPl,
    /// PŁ ⇒ error bound: `τ = L_p/(1 + a L_p)`.
    PlToEb,
}

/// Converts between the augmented-dual error-bound constant and the PŁ
/// modulus. `lp` is required only for the `PlToEb` direction.
pub fn pl_error_bound_convert(
    direction: ConvertDirection,
    eb: &ErrorBoundParams,
    lp: Option<f64>,
) -> Result<f64> {
    match direction {
        ConvertDirection::EbToPl => Ok(1.0 / (eb.la * eb.tau * eb.tau)),
        ConvertDirection::PlToEb => {
            let lp = lp.ok_or_else(|| Error::invalid("pl_to_eb conversion requires Lp"))?;
            if !(lp > 0.0) {
                return Err(Error::invalid(format!("pl_to_eb conversion: Lp = {lp} must be positive")));
            }
            Ok(lp / (1.0 + eb.a * lp))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::SeededRng;

    #[test]
    fn sublinear_bounds() {
        assert_eq!(bound_dual_gap(1.0, 1.0, 4, 1.0).unwrap(), 0.0625);
        assert_eq!(bound_dual_gap(0.0, 1.0, 10, 1.0).unwrap(), 0.0);
        assert_eq!(bound_primal_residual(1.0, 1.0, 5, 1.0).unwrap(), 0.2);
        assert_eq!(bound_dual_residual(1.0, 1.0, 5, 1.0).unwrap(), 0.25);
        assert!(matches!(bound_dual_gap(1.0, 2.0, 4, 1.0), Err(Error::OutOfRegime(_))));
        assert!(matches!(bound_dual_gap(1.0, 1.0, 3, 1.0), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn goldstein_cases() {
        let params = RateParams {
            t: Some(1.0),
            n_iters: Some(5),
            mu1: Some(1.0),
            mu2: Some(1.0),
            lam_max_ata: Some(1.0),
            lam_max_btb: Some(1.0),
            ..Default::default()
        };
        assert_eq!(goldstein_bound(&params, 1.0).unwrap(), 0.125);
        assert_eq!(goldstein_bound(&params, 0.0).unwrap(), 0.0);
        let over = RateParams { t: Some(1.01), ..params };
        assert!(matches!(goldstein_bound(&over, 1.0), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn pl_rate_values() {
        let r = pl_linear_rate(1.0, 1.0, 1.0, 0.5).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
        // the t = √(c1c2) specialization 1/(1 + Lp(2√(c1c2) − c2))
        let special = 1.0 / (1.0 + 0.5 * (2.0 - 1.0));
        assert!((r - special).abs() < 1e-15);

        let r2 = pl_linear_rate(0.25, 1.0, 0.5, 1.0).unwrap();
        assert!((r2 - 11.0 / 17.0).abs() < 1e-15);

        let nearly_one = pl_linear_rate(1.0, 1.0, 1.0, 1e-12).unwrap();
        assert!(nearly_one < 1.0 && nearly_one > 1.0 - 1e-10);

        assert!(matches!(pl_linear_rate(1.0, 1.0, 1.5, 0.5), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn pl_rate_stays_inside_unit_interval() {
        let mut rng = SeededRng::new(71);
        for _ in 0..1000 {
            let c1 = rng.uniform(0.05, 4.0);
            let c2 = rng.uniform(0.05, 4.0);
            let t = rng.uniform(1e-3, 1.0) * (c1 * c2).sqrt();
            let lp = rng.uniform(1e-3, 5.0);
            let r = pl_linear_rate(c1, c2, t, lp).unwrap();
            assert!(r > 0.0 && r < 1.0, "rate {r} for c1={c1} c2={c2} t={t} Lp={lp}");
            if c1 >= c2 && (t - (c1 * c2).sqrt()).abs() < 1e-12 {
                let special = 1.0 / (1.0 + lp * (2.0 * (c1 * c2).sqrt() - c2));
                assert!((r - special).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rlinear_factors() {
        let s1 = RateParams {
            t: Some(0.5),
            c1: Some(1.0),
            smoothness: Some(1.0),
            lam_min_aat: Some(1.0),
            ..Default::default()
        };
        let (factor, rho) = rlinear_contraction(Scenario::S1, &s1).unwrap();
        assert!((factor - 5.0 / 9.0).abs() < 1e-15);
        assert!((rho - (5.0f64 / 9.0).powi(-4) / 8.0).abs() < 1e-12);

        let s2 = RateParams {
            t: Some(0.25),
            c1: Some(1.0),
            smoothness: Some(1.0),
            lam_min_bbt: Some(1.0),
            ..Default::default()
        };
        let (factor, _) = rlinear_contraction(Scenario::S2, &s2).unwrap();
        assert!((factor - 0.64).abs() < 1e-15);

        let too_big = RateParams { t: Some(0.5), ..s2 };
        assert!(matches!(
            rlinear_contraction(Scenario::S2, &too_big),
            Err(Error::OutOfRegime(_))
        ));
    }

    #[test]
    fn conversions() {
        let eb = ErrorBoundParams::new(1.0, 0.5).unwrap();
        assert_eq!(eb.la, 2.0);
        assert_eq!(
            pl_error_bound_convert(ConvertDirection::EbToPl, &eb, None).unwrap(),
            0.5
        );
        let eb2 = ErrorBoundParams::new(1.0, 1.0).unwrap();
        assert_eq!(
            pl_error_bound_convert(ConvertDirection::PlToEb, &eb2, Some(1.0)).unwrap(),
            0.5
        );
        // round trip eb → pl → eb is not the identity; just report it
        let lp = pl_error_bound_convert(ConvertDirection::EbToPl, &eb2, None).unwrap();
        let tau_back = pl_error_bound_convert(ConvertDirection::PlToEb, &eb2, Some(lp)).unwrap();
        assert!((tau_back - (1.0 / eb2.la) / (1.0 + 1.0 / eb2.la)).abs() < 1e-15);
        assert!(ErrorBoundParams::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn monotonicity_grids() {
        let mut rng = SeededRng::new(13);
        for _ in 0..200 {
            let t = rng.uniform(0.1, 1.0);
            let c1 = t + rng.uniform(0.0, 1.0);
            let d1 = rng.uniform(0.0, 2.0);
            let d2 = d1 + rng.uniform(0.0, 2.0);
            let n1 = 4 + (rng.next_u64() % 10) as usize;
            let n2 = n1 + 1 + (rng.next_u64() % 5) as usize;
            // monotone in Δ
            assert!(
                bound_dual_gap(d1, t, n1, c1).unwrap() <= bound_dual_gap(d2, t, n1, c1).unwrap()
            );
            // antitone in N
            assert!(
                bound_dual_gap(d2, t, n2, c1).unwrap() <= bound_dual_gap(d2, t, n1, c1).unwrap()
            );
            assert!(
                bound_primal_residual(d2, t, n2, c1).unwrap()
                    <= bound_primal_residual(d2, t, n1, c1).unwrap()
            );
            assert!(
                bound_dual_residual(d2, t, n2, c1).unwrap()
                    <= bound_dual_residual(d2, t, n1, c1).unwrap()
            );
        }
    }
}
