//! The built-in worst-case gallery: three scalar instances whose traces
//! attain the dual-gap, primal-residual, and dual-residual bounds with
//! equality, plus the ℓ1-plus-quadratic instance whose dual objective has an
//! explicit closed form.
//!
//! Slopes and intercepts are assembled from exact rational expressions in
//! `(N, t)` at construction time so the traces reproduce the closed forms
//! bit-for-bit at machine precision.

use serde::{Deserialize, Serialize};

use crate::admm::AdmmConfig;
use crate::error::{Error, Result};
use crate::numkit::Mat;
use crate::plq::{OptimalPair, PlqFunction, SeparableProblem, SideSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalleryKind {
    /// `D(λ⋆) − D(λ^N) = Δ/(4Nt)` attained.
    DualGapTight,
    /// `‖Ax^N + Bz^N‖ = √Δ/(tN)` attained.
    PrimalResidualTight,
    /// `‖B(z^N − z^{N−1})‖ = √Δ/((N−1)t)` attained.
    DualResidualTight,
    /// `f(x) = ½‖x‖² + ‖x‖₁`, `g` identical; dual is a closed-form sum.
    PlL1Quadratic,
}

impl GalleryKind {
    pub const ALL: [GalleryKind; 4] = [
        GalleryKind::DualGapTight,
        GalleryKind::PrimalResidualTight,
        GalleryKind::DualResidualTight,
        GalleryKind::PlL1Quadratic,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            GalleryKind::DualGapTight => "dual_gap_tight",
            GalleryKind::PrimalResidualTight => "primal_residual_tight",
            GalleryKind::DualResidualTight => "dual_residual_tight",
            GalleryKind::PlL1Quadratic => "pl_l1_quadratic",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.tag() == tag)
            .ok_or_else(|| Error::invalid(format!("unknown gallery tag `{tag}`")))
    }
}

impl std::str::FromStr for GalleryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Closed-form iterate sequences in `(N, t)` with the attained metric value.
#[derive(Debug, Clone)]
pub struct ExpectedTrace {
    /// `x¹ … x^N`.
    pub xs: Vec<f64>,
    /// `z⁰ … z^N`.
    pub zs: Vec<f64>,
    /// `λ⁰ … λ^N`.
    pub lambdas: Vec<f64>,
    /// The metric the instance makes tight: dual gap `1/(4Nt)`, primal
    /// residual `1/(tN)`, or dual residual `1/((N−1)t)`.
    pub target: f64,
}

fn check_tight_params(kind: GalleryKind, n_iters: usize, t: f64, c1: f64) -> Result<()> {
    if n_iters < 4 {
        return Err(Error::invalid(format!(
            "{}: requires N ≥ 4, got N = {n_iters}",
            kind.tag()
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("{}: requires t > 0, got t = {t}", kind.tag())));
    }
    if !(t <= c1) {
        return Err(Error::invalid(format!(
            "{}: requires t ≤ c1, got t = {t}, c1 = {c1}",
            kind.tag()
        )));
    }
    Ok(())
}

/// Builds a gallery instance together with its start and certified optimum.
///
/// For the three tight kinds the instance is scalar with `A = B = 1`,
/// `b = 0`, start `λ⁰ = −½`, `z⁰ = 0`, multiplier `λ⋆ = ½`, and `n` is
/// ignored. `pl_l1_quadratic` uses `n ≥ 1` coordinates, `λ⋆ = 0`, and a zero
/// start; `c1` is ignored there (both functions carry unit curvature).
pub fn make_instance(
    kind: GalleryKind,
    n_iters: usize,
    t: f64,
    c1: f64,
    n: usize,
) -> Result<(SeparableProblem, AdmmConfig, OptimalPair)> {
    match kind {
        GalleryKind::PlL1Quadratic => {
            if n == 0 {
                return Err(Error::invalid("pl_l1_quadratic: requires n ≥ 1"));
            }
            if !(t > 0.0) || n_iters == 0 {
                return Err(Error::invalid("pl_l1_quadratic: requires t > 0 and N ≥ 1"));
            }
            let coord = PlqFunction::weighted_abs(1.0, 1.0)?;
            let side = vec![coord; n];
            let p = SeparableProblem::new(
                SideSpec::Plq(side.clone()),
                SideSpec::Plq(side),
                Mat::identity(n),
                Mat::identity(n),
                vec![0.0; n],
            )?;
            let cfg = AdmmConfig {
                t,
                iterations: n_iters,
                lambda0: vec![0.0; n],
                z0: vec![0.0; n],
            };
            let opt = OptimalPair {
                x_star: vec![0.0; n],
                z_star: vec![0.0; n],
                lambda_star: vec![0.0; n],
                f_star: 0.0,
                g_star: 0.0,
            };
            Ok((p, cfg, opt))
        }
        _ => {
            check_tight_params(kind, n_iters, t, c1)?;
            let nn = n_iters as f64;
            let (f, g) = match kind {
                GalleryKind::DualGapTight => {
                    // f = ½|x| + (c1/2)x²
                    // g = ½ max{ (N−1)/N (z − 1/(2Nt)) − 1/(2Nt), −z }
                    let f = PlqFunction::weighted_abs(0.5, c1)?;
                    let g = PlqFunction::new(
                        0.0,
                        vec![
                            ((nn - 1.0) / (2.0 * nn), -(2.0 * nn - 1.0) / (4.0 * nn * nn * t)),
                            (-0.5, 0.0),
                        ],
                    )?;
                    (f, g)
                }
                GalleryKind::PrimalResidualTight => {
                    // f = ½|x| + (c1/2)x²
                    // g = max{ (½ − 1/N)(z − 1/(Nt)), ½(1/(Nt) − z) }
                    let f = PlqFunction::weighted_abs(0.5, c1)?;
                    let g = PlqFunction::new(
                        0.0,
                        vec![
                            ((nn - 2.0) / (2.0 * nn), -(nn - 2.0) / (2.0 * nn * nn * t)),
                            (-0.5, 1.0 / (2.0 * nn * t)),
                        ],
                    )?;
                    (f, g)
                }
                GalleryKind::DualResidualTight => {
                    // f = ½ max{ −(N+1)/(N−1) x, x } + (c1/2)x²
                    // g = ½ max{ 1/(t(N−1)) − z, (N−3)/(N−1)(z − 1/(t(N−1))) }
                    let f = PlqFunction::new(
                        c1,
                        vec![(-(nn + 1.0) / (2.0 * (nn - 1.0)), 0.0), (0.5, 0.0)],
                    )?;
                    let g = PlqFunction::new(
                        0.0,
                        vec![
                            (-0.5, 1.0 / (2.0 * t * (nn - 1.0))),
                            (
                                (nn - 3.0) / (2.0 * (nn - 1.0)),
                                -(nn - 3.0) / (2.0 * t * (nn - 1.0) * (nn - 1.0)),
                            ),
                        ],
                    )?;
                    (f, g)
                }
                GalleryKind::PlL1Quadratic => unreachable!(),
            };
            let g_star = g.value(0.0);
            let p = SeparableProblem::scalar(f, g);
            let cfg = AdmmConfig {
                t,
                iterations: n_iters,
                lambda0: vec![-0.5],
                z0: vec![0.0],
            };
            let opt = OptimalPair {
                x_star: vec![0.0],
                z_star: vec![0.0],
                lambda_star: vec![0.5],
                f_star: 0.0,
                g_star,
            };
            Ok((p, cfg, opt))
        }
    }
}

/// Closed-form iterates and the attained metric for the three tight kinds.
pub fn expected_trace(kind: GalleryKind, n_iters: usize, t: f64) -> Result<ExpectedTrace> {
    if kind == GalleryKind::PlL1Quadratic {
        return Err(Error::UnsupportedKind(
            "pl_l1_quadratic has no closed-form trace".to_string(),
        ));
    }
    check_tight_params(kind, n_iters, t, f64::INFINITY)?;
    let nn = n_iters as f64;
    let mut xs = vec![0.0; n_iters];
    let (zs, lambdas, target): (Vec<f64>, Vec<f64>, f64) = match kind {
        GalleryKind::DualGapTight => {
            let z = 1.0 / (2.0 * nn * t);
            let zs = std::iter::once(0.0).chain((1..=n_iters).map(|_| z)).collect();
            let lambdas = (0..=n_iters).map(|k| -0.5 + k as f64 / (2.0 * nn)).collect();
            (zs, lambdas, 1.0 / (4.0 * nn * t))
        }
        GalleryKind::PrimalResidualTight => {
            let z = 1.0 / (nn * t);
            let zs = std::iter::once(0.0).chain((1..=n_iters).map(|_| z)).collect();
            let lambdas = (0..=n_iters)
                .map(|k| (2.0 * k as f64 - nn) / (2.0 * nn))
                .collect();
            (zs, lambdas, 1.0 / (t * nn))
        }
        GalleryKind::DualResidualTight => {
            let z = 1.0 / (t * (nn - 1.0));
            let zs = std::iter::once(0.0)
                .chain((1..=n_iters).map(|k| if k < n_iters { z } else { 0.0 }))
                .collect();
            let lambdas = (0..=n_iters)
                .map(|k| {
                    if k < n_iters {
                        (2.0 * k as f64 + 1.0 - nn) / (2.0 * (nn - 1.0))
                    } else {
                        0.5
                    }
                })
                .collect();
            (zs, lambdas, 1.0 / ((nn - 1.0) * t))
        }
        GalleryKind::PlL1Quadratic => unreachable!(),
    };
    xs.iter_mut().for_each(|x| *x = 0.0);
    Ok(ExpectedTrace { xs, zs, lambdas, target })
}

/// Closed form of the ℓ1-plus-quadratic dual: `D(λ) = Σᵢ h(λᵢ)` with
/// `h(s) = −(s−1)²` for `s > 1`, `0` on `|s| ≤ 1`, `−(s+1)²` for `s < −1`.
pub fn pl_dual_closed_form(lambda: &[f64]) -> f64 {
    lambda
        .iter()
        .map(|&s| {
            if s > 1.0 {
                -(s - 1.0) * (s - 1.0)
            } else if s < -1.0 {
                -(s + 1.0) * (s + 1.0)
            } else {
                0.0
            }
        })
        .sum()
}
