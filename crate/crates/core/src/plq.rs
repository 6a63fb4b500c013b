//! Scalar piecewise-linear-plus-quadratic (PLQ) convex functions and the
//! separable problems assembled from them.
//!
//! A [`PlqFunction`] is `h(x) = (q/2)x² + maxᵢ(sᵢx + cᵢ)` with `q ≥ 0`. The
//! class is closed and convex by construction, exact minimization reduces to
//! candidate enumeration, and subdifferentials are explicit intervals — which
//! is what lets traces reproduce closed forms at machine precision.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::Mat;

/// `(q/2)x² + max over affine pieces (slope·x + intercept)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlqFunction {
    /// Coefficient `q ≥ 0` of the quadratic term `(q/2)x²`.
    pub q: f64,
    /// `(slope, intercept)` of each affine piece; nonempty.
    pub pieces: Vec<(f64, f64)>,
}

impl PlqFunction {
    pub fn new(q: f64, pieces: Vec<(f64, f64)>) -> Result<Self> {
        if !(q >= 0.0) || !q.is_finite() {
            return Err(Error::invalid(format!("plq: quadratic coefficient {q} must be finite and ≥ 0")));
        }
        if pieces.is_empty() {
            return Err(Error::invalid("plq: at least one affine piece required"));
        }
        if pieces.iter().any(|(s, c)| !s.is_finite() || !c.is_finite()) {
            return Err(Error::invalid("plq: pieces must be finite"));
        }
        Ok(PlqFunction { q, pieces })
    }

    /// `(q/2)x²` alone.
    pub fn quadratic(q: f64) -> Result<Self> {
        Self::new(q, vec![(0.0, 0.0)])
    }

    /// `w·|x| + (q/2)x²` for `w ≥ 0`.
    pub fn weighted_abs(w: f64, q: f64) -> Result<Self> {
        if !(w >= 0.0) {
            return Err(Error::invalid("plq: |x| weight must be ≥ 0"));
        }
        Self::new(q, vec![(w, 0.0), (-w, 0.0)])
    }

    pub fn value(&self, x: f64) -> f64 {
        let m = self
            .pieces
            .iter()
            .map(|(s, c)| s * x + c)
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * self.q * x * x + m
    }

    /// Subdifferential at `x` as a closed interval `[lo, hi]`:
    /// `qx + [min, max]` over slopes of the pieces attaining the max.
    pub fn subdiff(&self, x: f64) -> (f64, f64) {
        let vals: Vec<f64> = self.pieces.iter().map(|(s, c)| s * x + c).collect();
        let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-12 * (1.0 + m.abs());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for ((s, _), v) in self.pieces.iter().zip(&vals) {
            if *v >= m - tol {
                lo = lo.min(*s);
                hi = hi.max(*s);
            }
        }
        (self.q * x + lo, self.q * x + hi)
    }

    fn slope_range(&self) -> (f64, f64) {
        let lo = self.pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = self.pieces.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Function value; see [`PlqFunction::value`].
pub fn plq_value(h: &PlqFunction, x: f64) -> f64 {
    h.value(x)
}

/// Subdifferential interval; see [`PlqFunction::subdiff`].
pub fn plq_subdiff(h: &PlqFunction, x: f64) -> (f64, f64) {
    h.subdiff(x)
}

/// Unique (leftmost on flats) minimizer of `h(x) + lin·x + (quad/2)x²`.
///
/// The minimizer is found by enumerating the per-piece stationary points and
/// all pairwise piece intersections; with a strictly convex total quadratic
/// the true minimizer is always among these, and on flat pieces the leftmost
/// candidate attaining the minimum value is returned.
pub fn plq_argmin_quadratic(h: &PlqFunction, lin: f64, quad: f64) -> Result<f64> {
    if !(quad >= 0.0) || !quad.is_finite() || !lin.is_finite() {
        return Err(Error::invalid(format!(
            "plq_argmin_quadratic: need finite lin and quad ≥ 0, got lin={lin} quad={quad}"
        )));
    }
    let total_quad = h.q + quad;
    if total_quad == 0.0 {
        let (lo, hi) = h.slope_range();
        if !(-lin >= lo && -lin <= hi) {
            return Err(Error::Unbounded(format!(
                "plq_argmin_quadratic: flat objective with slope range [{}, {}] and linear term {lin}",
                lo + lin,
                hi + lin
            )));
        }
    }

    let mut candidates: Vec<f64> = Vec::with_capacity(h.pieces.len() * (h.pieces.len() + 1));
    if total_quad > 0.0 {
        for &(s, _) in &h.pieces {
            candidates.push(-(lin + s) / total_quad);
        }
    }
    for i in 0..h.pieces.len() {
        for j in (i + 1)..h.pieces.len() {
            let (si, ci) = h.pieces[i];
            let (sj, cj) = h.pieces[j];
            if si != sj {
                candidates.push((cj - ci) / (si - sj));
            }
        }
    }
    if candidates.is_empty() {
        // single flat piece cancelling the linear term: every x minimizes
        return Ok(0.0);
    }
    candidates.retain(|x| x.is_finite());
    if candidates.is_empty() {
        return Err(Error::invalid("plq_argmin_quadratic: no finite candidate minimizer"));
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let phi = |x: f64| h.value(x) + lin * x + 0.5 * quad * x * x;
    let mut best_x = candidates[0];
    let mut best_v = phi(best_x);
    for &x in &candidates[1..] {
        let v = phi(x);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    Ok(best_x)
}

/// Coordinate-wise [`plq_argmin_quadratic`].
pub fn separable_argmin(fs: &[PlqFunction], lin: &[f64], quad_diag: &[f64]) -> Result<Vec<f64>> {
    if fs.len() != lin.len() || fs.len() != quad_diag.len() {
        return Err(Error::invalid(format!(
            "separable_argmin: got {} functions, {} linear terms, {} quadratic terms",
            fs.len(),
            lin.len(),
            quad_diag.len()
        )));
    }
    fs.iter()
        .zip(lin)
        .zip(quad_diag)
        .enumerate()
        .map(|(i, ((h, &l), &d))| {
            plq_argmin_quadratic(h, l, d).map_err(|e| match e {
                Error::Unbounded(msg) => Error::Unbounded(format!("coordinate {i}: {msg}")),
                other => other,
            })
        })
        .collect()
}

/// Oracle interface for a non-PLQ side of a separable problem.
pub trait SideOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// `argmin f(x) + lin·x + (t/2)‖Cx + shift‖²`; must attain its minimum.
    fn prox_argmin(&self, lin: &[f64], coupling: &Mat, shift: &[f64], t: f64) -> Result<Vec<f64>>;

    /// `min f(x) + lin·x`; `None` when unbounded below.
    fn linear_min(&self, lin: &[f64]) -> Result<Option<(Vec<f64>, f64)>>;
}

/// One side (f or g) of a separable problem.
#[derive(Clone)]
pub enum SideSpec {
    /// Coordinate-separable sum of scalar PLQ functions.
    Plq(Vec<PlqFunction>),
    /// Black-box value/argmin oracle.
    Oracle(Arc<dyn SideOracle>),
}

impl std::fmt::Debug for SideSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SideSpec::Plq(v) => f.debug_tuple("Plq").field(v).finish(),
            SideSpec::Oracle(o) => f.debug_tuple("Oracle").field(&o.dim()).finish(),
        }
    }
}

impl SideSpec {
    pub fn dim(&self) -> usize {
        match self {
            SideSpec::Plq(v) => v.len(),
            SideSpec::Oracle(o) => o.dim(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            SideSpec::Plq(v) => v.iter().zip(x).map(|(h, &xi)| h.value(xi)).sum(),
            SideSpec::Oracle(o) => o.value(x),
        }
    }

    pub fn as_plq(&self) -> Option<&[PlqFunction]> {
        match self {
            SideSpec::Plq(v) => Some(v),
            SideSpec::Oracle(_) => None,
        }
    }
}

/// `min f(x) + g(z)  s.t.  A x + B z = b`.
#[derive(Debug, Clone)]
pub struct SeparableProblem {
    pub f: SideSpec,
    pub g: SideSpec,
    pub a: Mat,
    pub b: Mat,
    pub rhs: Vec<f64>,
}

impl SeparableProblem {
    pub fn new(f: SideSpec, g: SideSpec, a: Mat, b: Mat, rhs: Vec<f64>) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::invalid("separable problem: A and B must be nonzero"));
        }
        if a.rows() != b.rows() || a.rows() != rhs.len() {
            return Err(Error::invalid(format!(
                "separable problem: A is {}×{}, B is {}×{}, b has length {}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                rhs.len()
            )));
        }
        if f.dim() != a.cols() {
            return Err(Error::invalid(format!(
                "separable problem: f has dimension {} but A has {} columns",
                f.dim(),
                a.cols()
            )));
        }
        if g.dim() != b.cols() {
            return Err(Error::invalid(format!(
                "separable problem: g has dimension {} but B has {} columns",
                g.dim(),
                b.cols()
            )));
        }
        Ok(SeparableProblem { f, g, a, b, rhs })
    }

    /// Convenience constructor for scalar instances with `A = B = 1`, `b = 0`.
    pub fn scalar(f: PlqFunction, g: PlqFunction) -> Self {
        SeparableProblem {
            f: SideSpec::Plq(vec![f]),
            g: SideSpec::Plq(vec![g]),
            a: Mat::scalar(1.0),
            b: Mat::scalar(1.0),
            rhs: vec![0.0],
        }
    }

    pub fn x_dim(&self) -> usize {
        self.a.cols()
    }

    pub fn z_dim(&self) -> usize {
        self.b.cols()
    }

    pub fn r_dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn f_value(&self, x: &[f64]) -> f64 {
        self.f.value(x)
    }

    pub fn g_value(&self, z: &[f64]) -> f64 {
        self.g.value(z)
    }

    pub fn to_json(&self) -> Result<String> {
        let spec = ProblemJson::try_from(self)?;
        serde_json::to_string_pretty(&spec).map_err(|e| Error::invalid(format!("serialize: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProblemJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("instance json: {e}")))?;
        spec.try_into()
    }
}

/// On-disk instance schema:
/// `{"f":[{"q":…,"pieces":[[slope,intercept],…]},…], "g":[…], "A":[[…]], "B":[[…]], "b":[…]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    pub f: Vec<PlqFunction>,
    pub g: Vec<PlqFunction>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "b")]
    pub rhs: Vec<f64>,
}

impl TryFrom<&SeparableProblem> for ProblemJson {
    type Error = Error;

    fn try_from(p: &SeparableProblem) -> Result<ProblemJson> {
        let f = p
            .f
            .as_plq()
            .ok_or_else(|| Error::invalid("oracle-backed f cannot be serialized"))?
            .to_vec();
        let g = p
            .g
            .as_plq()
            .ok_or_else(|| Error::invalid("oracle-backed g cannot be serialized"))?
            .to_vec();
        Ok(ProblemJson {
            f,
            g,
            a: p.a.to_rows(),
            b: p.b.to_rows(),
            rhs: p.rhs.clone(),
        })
    }
}

impl TryFrom<ProblemJson> for SeparableProblem {
    type Error = Error;

    fn try_from(spec: ProblemJson) -> Result<SeparableProblem> {
        for h in spec.f.iter().chain(&spec.g) {
            PlqFunction::new(h.q, h.pieces.clone())?;
        }
        SeparableProblem::new(
            SideSpec::Plq(spec.f),
            SideSpec::Plq(spec.g),
            Mat::from_rows(&spec.a)?,
            Mat::from_rows(&spec.b)?,
            spec.rhs,
        )
    }
}

/// A primal-dual optimal triple with the corresponding function values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimalPair {
    pub x_star: Vec<f64>,
    pub z_star: Vec<f64>,
    pub lambda_star: Vec<f64>,
    pub f_star: f64,
    pub g_star: f64,
}

impl OptimalPair {
    /// Checks feasibility `Ax⋆ + Bz⋆ = b` and, for PLQ sides, the saddle
    /// inclusions `−Aᵀλ⋆ ∈ ∂f(x⋆)` and `−Bᵀλ⋆ ∈ ∂g(z⋆)`.
    pub fn validate(&self, p: &SeparableProblem, tol: f64) -> Result<()> {
        let ax = p.a.matvec(&self.x_star);
        let bz = p.b.matvec(&self.z_star);
        let feas: f64 = ax
            .iter()
            .zip(&bz)
            .zip(&p.rhs)
            .map(|((a, b), r)| (a + b - r).powi(2))
            .sum::<f64>()
            .sqrt();
        if feas > tol {
            return Err(Error::invalid(format!("optimal pair infeasible: ‖Ax⋆+Bz⋆−b‖ = {feas}")));
        }
        let at_lam = p.a.t_matvec(&self.lambda_star);
        let bt_lam = p.b.t_matvec(&self.lambda_star);
        if let Some(fs) = p.f.as_plq() {
            check_inclusion(fs, &self.x_star, &at_lam, tol, "f")?;
        }
        if let Some(gs) = p.g.as_plq() {
            check_inclusion(gs, &self.z_star, &bt_lam, tol, "g")?;
        }
        Ok(())
    }
}

fn check_inclusion(hs: &[PlqFunction], x: &[f64], grad: &[f64], tol: f64, side: &str) -> Result<()> {
    for (i, h) in hs.iter().enumerate() {
        let (lo, hi) = h.subdiff(x[i]);
        let target = -grad[i];
        if target < lo - tol || target > hi + tol {
            return Err(Error::invalid(format!(
                "{side} coordinate {i}: −λ-gradient {target} outside subdifferential [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}
