//! The alternating direction method of multipliers and its diagnostics:
//! iterate traces, dual objective values, primal/dual residuals, and the
//! Lyapunov sequence.

use std::io::Write;

use crate::error::{Error, Result};
use crate::numkit::{dot, norm2, solve_lu, Mat, SymMatrix};
use crate::plq::{separable_argmin, OptimalPair, PlqFunction, SeparableProblem, SideSpec};

/// Step length, iteration count, and starting point.
#[derive(Debug, Clone)]
pub struct AdmmConfig {
    /// Step length `t > 0`.
    pub t: f64,
    /// Number of iterations `N ≥ 1`.
    pub iterations: usize,
    pub lambda0: Vec<f64>,
    pub z0: Vec<f64>,
}

/// Dual objective value: either finite with its minimizing witnesses, or the
/// unbounded marker (a valid value, not an error).
#[derive(Debug, Clone)]
pub enum DualEval {
    Finite {
        value: f64,
        x_hat: Vec<f64>,
        z_hat: Vec<f64>,
    },
    Unbounded,
}

impl DualEval {
    pub fn value(&self) -> Option<f64> {
        match self {
            DualEval::Finite { value, .. } => Some(*value),
            DualEval::Unbounded => None,
        }
    }

    /// The subgradient witness `ξ = b − A x̂ − B ẑ`.
    pub fn xi(&self, p: &SeparableProblem) -> Option<Vec<f64>> {
        match self {
            DualEval::Finite { x_hat, z_hat, .. } => {
                let ax = p.a.matvec(x_hat);
                let bz = p.b.matvec(z_hat);
                Some(
                    p.rhs
                        .iter()
                        .zip(ax.iter().zip(&bz))
                        .map(|(r, (a, b))| r - a - b)
                        .collect(),
                )
            }
            DualEval::Unbounded => None,
        }
    }
}

/// Full iterate history of one run.
#[derive(Debug, Clone)]
pub struct AdmmTrace {
    pub t: f64,
    /// `x¹ … x^N`.
    pub xs: Vec<Vec<f64>>,
    /// `z⁰ … z^N`.
    pub zs: Vec<Vec<f64>>,
    /// `λ⁰ … λ^N`.
    pub lambdas: Vec<Vec<f64>>,
    /// `‖Ax^k + Bz^k − b‖` for `k = 1 … N`.
    pub primal_residuals: Vec<f64>,
    /// `AᵀB(z^{k−1} − z^k)` for `k = 1 … N`.
    pub dual_residual_vecs: Vec<Vec<f64>>,
    /// `D(λ^k)` for `k = 0 … N`.
    pub dual_values: Vec<DualEval>,
}

impl AdmmTrace {
    pub fn iterations(&self) -> usize {
        self.xs.len()
    }

    /// Largest violation of `λ^k − λ^{k−1} − t(Ax^k + Bz^k − b) = 0`.
    pub fn multiplier_recursion_violation(&self, p: &SeparableProblem) -> f64 {
        let mut worst = 0.0f64;
        for k in 1..self.lambdas.len() {
            let ax = p.a.matvec(&self.xs[k - 1]);
            let bz = p.b.matvec(&self.zs[k]);
            for i in 0..p.r_dim() {
                let v = self.lambdas[k][i]
                    - self.lambdas[k - 1][i]
                    - self.t * (ax[i] + bz[i] - p.rhs[i]);
                worst = worst.max(v.abs());
            }
        }
        worst
    }
}

fn x_update(p: &SeparableProblem, lambda: &[f64], z_prev: &[f64], t: f64, k: usize) -> Result<Vec<f64>> {
    // argmin f(x) + ⟨λ, Ax⟩ + (t/2)‖Ax + Bz_prev − b‖²
    let bz = p.b.matvec(z_prev);
    let w: Vec<f64> = bz.iter().zip(&p.rhs).map(|(v, r)| v - r).collect();
    side_update(&p.f, &p.a, lambda, &w, t, k, "x")
}

fn z_update(p: &SeparableProblem, lambda: &[f64], x_new: &[f64], t: f64, k: usize) -> Result<Vec<f64>> {
    let ax = p.a.matvec(x_new);
    let w: Vec<f64> = ax.iter().zip(&p.rhs).map(|(v, r)| v - r).collect();
    side_update(&p.g, &p.b, lambda, &w, t, k, "z")
}

/// `argmin h(u) + ⟨λ, Cu⟩ + (t/2)‖Cu + w‖²` for one side.
fn side_update(
    side: &SideSpec,
    coupling: &Mat,
    lambda: &[f64],
    w: &[f64],
    t: f64,
    k: usize,
    what: &str,
) -> Result<Vec<f64>> {
    let ct_lam = coupling.t_matvec(lambda);
    let ct_w = coupling.t_matvec(w);
    let lin: Vec<f64> = ct_lam.iter().zip(&ct_w).map(|(l, v)| l + t * v).collect();
    match side {
        SideSpec::Plq(hs) => {
            let ctc = coupling.gram_self();
            if is_diagonal(&ctc) {
                let quad: Vec<f64> = (0..ctc.dim()).map(|i| t * ctc.get(i, i)).collect();
                separable_argmin(hs, &lin, &quad).map_err(|e| tag_iteration(e, k, what))
            } else if hs.iter().all(|h| h.pieces.len() == 1) {
                // pure quadratic side: (diag(q) + t CᵀC) u = −(slopes + lin)
                let n = hs.len();
                let mut a = Mat::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let mut v = t * ctc.get(i, j);
                        if i == j {
                            v += hs[i].q;
                        }
                        a.set(i, j, v);
                    }
                }
                let rhs: Vec<f64> = hs
                    .iter()
                    .zip(&lin)
                    .map(|(h, l)| -(h.pieces[0].0 + l))
                    .collect();
                solve_lu(&a, &rhs)
            } else {
                Err(Error::invalid(format!(
                    "{what}-update at iteration {k}: non-diagonal coupling requires a purely \
                     quadratic PLQ side or an oracle"
                )))
            }
        }
        SideSpec::Oracle(o) => o
            .prox_argmin(&ct_lam, coupling, w, t)
            .map_err(|e| tag_iteration(e, k, what)),
    }
}

fn tag_iteration(e: Error, k: usize, what: &str) -> Error {
    match e {
        Error::Unbounded(msg) => Error::Unbounded(format!("{what}-subproblem at iteration {k}: {msg}")),
        other => other,
    }
}

fn is_diagonal(m: &SymMatrix) -> bool {
    let n = m.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            if m.get(i, j) != 0.0 {
                return false;
            }
        }
    }
    true
}

/// Runs Algorithm 1 and records the full trace.
pub fn admm_run(p: &SeparableProblem, cfg: &AdmmConfig) -> Result<AdmmTrace> {
    if !(cfg.t > 0.0) || !cfg.t.is_finite() {
        return Err(Error::invalid(format!("admm: step length t = {} must be positive", cfg.t)));
    }
    if cfg.iterations == 0 {
        return Err(Error::invalid("admm: iteration count must be at least 1"));
    }
    if cfg.lambda0.len() != p.r_dim() || cfg.z0.len() != p.z_dim() {
        return Err(Error::invalid(format!(
            "admm: start has λ⁰ length {} and z⁰ length {}, problem wants {} and {}",
            cfg.lambda0.len(),
            cfg.z0.len(),
            p.r_dim(),
            p.z_dim()
        )));
    }
    let t = cfg.t;
    let n_iter = cfg.iterations;
    let mut lambdas = Vec::with_capacity(n_iter + 1);
    let mut zs = Vec::with_capacity(n_iter + 1);
    let mut xs = Vec::with_capacity(n_iter);
    let mut primal_residuals = Vec::with_capacity(n_iter);
    let mut dual_residual_vecs = Vec::with_capacity(n_iter);
    lambdas.push(cfg.lambda0.clone());
    zs.push(cfg.z0.clone());

    for k in 1..=n_iter {
        let lambda_prev = lambdas.last().unwrap().clone();
        let z_prev = zs.last().unwrap().clone();
        let x = x_update(p, &lambda_prev, &z_prev, t, k)?;
        let z = z_update(p, &lambda_prev, &x, t, k)?;
        let ax = p.a.matvec(&x);
        let bz = p.b.matvec(&z);
        let residual: Vec<f64> = ax
            .iter()
            .zip(bz.iter().zip(&p.rhs))
            .map(|(a, (b, r))| a + b - r)
            .collect();
        let lambda: Vec<f64> = lambda_prev
            .iter()
            .zip(&residual)
            .map(|(l, r)| l + t * r)
            .collect();
        primal_residuals.push(norm2(&residual));
        let dz: Vec<f64> = z_prev.iter().zip(&z).map(|(a, b)| a - b).collect();
        dual_residual_vecs.push(p.a.t_matvec(&p.b.matvec(&dz)));
        xs.push(x);
        zs.push(z);
        lambdas.push(lambda);
    }

    let dual_values = lambdas
        .iter()
        .map(|lam| dual_value(p, lam))
        .collect::<Result<Vec<_>>>()?;

    Ok(AdmmTrace {
        t,
        xs,
        zs,
        lambdas,
        primal_residuals,
        dual_residual_vecs,
        dual_values,
    })
}

/// `D(λ) = min over (x, z) of f + g + ⟨λ, Ax + Bz − b⟩`, with a minimizing
/// witness pair. Unboundedness is reported as a marker value.
pub fn dual_value(p: &SeparableProblem, lambda: &[f64]) -> Result<DualEval> {
    if lambda.len() != p.r_dim() {
        return Err(Error::invalid(format!(
            "dual_value: λ has length {}, problem wants {}",
            lambda.len(),
            p.r_dim()
        )));
    }
    let lin_f = p.a.t_matvec(lambda);
    let lin_g = p.b.t_matvec(lambda);
    let fx = side_linear_min(&p.f, &lin_f)?;
    let gz = side_linear_min(&p.g, &lin_g)?;
    match (fx, gz) {
        (Some((x_hat, fval)), Some((z_hat, gval))) => Ok(DualEval::Finite {
            value: fval + gval - dot(lambda, &p.rhs),
            x_hat,
            z_hat,
        }),
        _ => Ok(DualEval::Unbounded),
    }
}

/// `min h(u) + lin·u` with leftmost tie-breaking; `None` when unbounded.
fn side_linear_min(side: &SideSpec, lin: &[f64]) -> Result<Option<(Vec<f64>, f64)>> {
    match side {
        SideSpec::Plq(hs) => {
            let mut u = Vec::with_capacity(hs.len());
            let mut total = 0.0;
            for (h, &l) in hs.iter().zip(lin) {
                match crate::plq::plq_argmin_quadratic(h, l, 0.0) {
                    Ok(xi) => {
                        total += h.value(xi) + l * xi;
                        u.push(xi);
                    }
                    Err(Error::Unbounded(_)) => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
            Ok(Some((u, total)))
        }
        SideSpec::Oracle(o) => o.linear_min(lin),
    }
}

/// Primal and dual residuals at iteration `k ∈ {1, …, N}`.
pub fn residuals(p: &SeparableProblem, trace: &AdmmTrace, k: usize) -> Result<(f64, Vec<f64>)> {
    let n = trace.iterations();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("residuals: k = {k} outside 1..={n}")));
    }
    let ax = p.a.matvec(&trace.xs[k - 1]);
    let bz = p.b.matvec(&trace.zs[k]);
    let res: Vec<f64> = ax
        .iter()
        .zip(bz.iter().zip(&p.rhs))
        .map(|(a, (b, r))| a + b - r)
        .collect();
    let dz: Vec<f64> = trace.zs[k - 1].iter().zip(&trace.zs[k]).map(|(a, b)| a - b).collect();
    let dual = p.a.t_matvec(&p.b.matvec(&dz));
    Ok((norm2(&res), dual))
}

/// `V^k = ‖λ^k − λ⋆‖² + t²‖B(z^k − z⋆)‖²` for `k = 0 … N`.
pub fn lyapunov_sequence(
    p: &SeparableProblem,
    trace: &AdmmTrace,
    opt: &OptimalPair,
    t: f64,
) -> Vec<f64> {
    trace
        .lambdas
        .iter()
        .zip(&trace.zs)
        .map(|(lam, z)| {
            let dl: Vec<f64> = lam.iter().zip(&opt.lambda_star).map(|(a, b)| a - b).collect();
            let dz: Vec<f64> = z.iter().zip(&opt.z_star).map(|(a, b)| a - b).collect();
            let bdz = p.b.matvec(&dz);
            norm2(&dl).powi(2) + t * t * norm2(&bdz).powi(2)
        })
        .collect()
}

/// Largest violation of the stationarity inclusions
/// `0 ∈ ∂f(x^k) + Aᵀλ^k + tAᵀB(z^{k−1} − z^k)` and `0 ∈ ∂g(z^k) + Bᵀλ^k`
/// over the whole trace. PLQ sides only.
pub fn optimality_violation(p: &SeparableProblem, trace: &AdmmTrace) -> Result<f64> {
    let fs = p
        .f
        .as_plq()
        .ok_or_else(|| Error::invalid("optimality check requires PLQ f"))?;
    let gs = p
        .g
        .as_plq()
        .ok_or_else(|| Error::invalid("optimality check requires PLQ g"))?;
    let mut worst = 0.0f64;
    for k in 1..=trace.iterations() {
        let lam = &trace.lambdas[k];
        let at_lam = p.a.t_matvec(lam);
        let bt_lam = p.b.t_matvec(lam);
        let dz: Vec<f64> = trace.zs[k - 1].iter().zip(&trace.zs[k]).map(|(a, b)| a - b).collect();
        let atb_dz = p.a.t_matvec(&p.b.matvec(&dz));
        for (i, h) in fs.iter().enumerate() {
            let target = -(at_lam[i] + trace.t * atb_dz[i]);
            worst = worst.max(interval_violation(h, trace.xs[k - 1][i], target));
        }
        for (j, h) in gs.iter().enumerate() {
            let target = -bt_lam[j];
            worst = worst.max(interval_violation(h, trace.zs[k][j], target));
        }
    }
    Ok(worst)
}

fn interval_violation(h: &PlqFunction, x: f64, target: f64) -> f64 {
    let (lo, hi) = h.subdiff(x);
    (lo - target).max(target - hi).max(0.0)
}

fn fmt17(v: f64) -> String {
    format!("{:.16e}", v)
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(";")
}

/// CSV export: one row per iteration with columns
/// `k,x,z,lambda,primal_residual,dual_residual_norm,dual_value,lyapunov`.
///
/// The `k = 0` row carries the starting point; its `x` and residual cells are
/// empty. Vector-valued cells join coordinates with `;`. The `lyapunov`
/// column is filled only when an optimal pair is supplied; an unbounded dual
/// value prints as `unbounded`.
pub fn write_trace_csv<W: Write>(
    w: &mut W,
    p: &SeparableProblem,
    trace: &AdmmTrace,
    opt: Option<&OptimalPair>,
) -> std::io::Result<()> {
    let lyap = opt.map(|o| lyapunov_sequence(p, trace, o, trace.t));
    writeln!(w, "k,x,z,lambda,primal_residual,dual_residual_norm,dual_value,lyapunov")?;
    for k in 0..=trace.iterations() {
        let x = if k == 0 { String::new() } else { fmt_vec(&trace.xs[k - 1]) };
        let (pr, dr) = if k == 0 {
            (String::new(), String::new())
        } else {
            (
                fmt17(trace.primal_residuals[k - 1]),
                fmt17(norm2(&trace.dual_residual_vecs[k - 1])),
            )
        };
        let dv = match trace.dual_values[k].value() {
            Some(v) => fmt17(v),
            None => "unbounded".to_string(),
        };
        let ly = lyap.as_ref().map(|l| fmt17(l[k])).unwrap_or_default();
        writeln!(
            w,
            "{k},{x},{},{},{pr},{dr},{dv},{ly}",
            fmt_vec(&trace.zs[k]),
            fmt_vec(&trace.lambdas[k]),
        )?;
    }
    Ok(())
}
