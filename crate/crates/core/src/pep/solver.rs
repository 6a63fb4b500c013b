//! Dense primal-dual path-following SDP solver.
//!
//! Solves `max ⟨C, X⟩ + c·u  s.t.  ⟨Aᵢ, X⟩ + dᵢ·u {≤,=} bᵢ, X ⪰ 0` with
//! unrestricted scalars `u` handled natively in the KKT system and
//! inequality rows carried as nonnegative slacks. The search direction is
//! the symmetrized `XZ` linearization with a Mehrotra predictor-corrector
//! step. Instance sizes here are tiny (Gram dimension ≤ 64), so everything
//! is dense.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{eig_sym, SymMatrix};
use crate::pep::{Relation, SdpProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

/// Primal-dual solution; `status == Optimal` guarantees
/// `duality_gap ≤ tol·(1 + |value| + |dual|)` and a PSD `y`.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Primal objective value at `y` (a maximization).
    pub value: f64,
    pub y: SymMatrix,
    pub free_values: Vec<f64>,
    pub duality_gap: f64,
    pub status: SolveStatus,
    pub iterations: usize,
}

const MAX_ITER: usize = 150;
const STEP_FRACTION: f64 = 0.98;

pub fn sdp_solve(sdp: &SdpProblem, tol: f64) -> Result<SdpSolution> {
    if sdp.gram_dim == 0 || sdp.gram_dim > 64 {
        return Err(Error::invalid(format!(
            "sdp_solve: gram dimension {} outside 1..=64",
            sdp.gram_dim
        )));
    }
    if sdp.constraints.is_empty() || sdp.constraints.len() > 2000 {
        return Err(Error::invalid(format!(
            "sdp_solve: constraint count {} outside 1..=2000",
            sdp.constraints.len()
        )));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid("sdp_solve: tolerance must be positive"));
    }
    let n = sdp.gram_dim;
    let m = sdp.constraints.len();
    let q = sdp.num_free;
    for (i, c) in sdp.constraints.iter().enumerate() {
        if c.gram.dim() != n || c.free.len() != q {
            return Err(Error::invalid(format!("sdp_solve: constraint {i} has inconsistent shape")));
        }
    }

    // row scaling; the feasible set and objective are unchanged
    let mut a_mats: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut d_rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut ineq = Vec::with_capacity(m);
    for c in &sdp.constraints {
        let scale = c
            .gram
            .frobenius_norm()
            .max(c.free.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
            .max(1.0);
        a_mats.push(c.gram.as_slice().iter().map(|v| v / scale).collect());
        d_rows.push(c.free.iter().map(|v| v / scale).collect());
        b.push(c.rhs / scale);
        ineq.push(c.rel == Relation::Le);
    }
    let c_mat: Vec<f64> = sdp.objective_gram.as_slice().to_vec();
    let c_free = sdp.objective_free.clone();
    let m_in = ineq.iter().filter(|&&v| v).count();

    let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cnorm = frob(&c_mat) + c_free.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let x0 = 10.0 * (1.0 + bmax);
    let z0 = 10.0 * (1.0 + cnorm);

    let mut x = scaled_identity(n, x0);
    let mut z = scaled_identity(n, z0);
    let mut sx: Vec<f64> = ineq.iter().map(|&b| if b { x0 } else { 0.0 }).collect();
    let mut zs: Vec<f64> = ineq.iter().map(|&b| if b { z0 } else { 0.0 }).collect();
    let mut y = vec![0.0; m];
    let mut u = vec![0.0; q];

    let mut status = SolveStatus::MaxIter;
    let mut iterations = MAX_ITER;
    // best near-feasible iterate, returned when the tolerance is not reached
    let mut best_score = f64::INFINITY;
    let mut best: Option<(Vec<f64>, Vec<f64>, Vec<f64>)> = None;

    for iter in 0..MAX_ITER {
        // residuals
        let mut r_p = vec![0.0; m];
        for i in 0..m {
            r_p[i] = b[i] - dot(&a_mats[i], &x) - vdot(&d_rows[i], &u) - if ineq[i] { sx[i] } else { 0.0 };
        }
        let mut rd = vec![0.0; n * n];
        for i in 0..m {
            axpy(&mut rd, y[i], &a_mats[i]);
        }
        axpy(&mut rd, -1.0, &c_mat);
        axpy(&mut rd, -1.0, &z);
        let mut r_f = vec![0.0; q];
        for j in 0..q {
            let mut acc = c_free[j];
            for i in 0..m {
                acc -= d_rows[i][j] * y[i];
            }
            r_f[j] = acc;
        }
        let r_ds: Vec<f64> = (0..m).map(|i| if ineq[i] { y[i] - zs[i] } else { 0.0 }).collect();

        let pobj = dot(&c_mat, &x) + vdot(&c_free, &u);
        let dobj = vdot(&b, &y);
        let comp = dot(&x, &z) + (0..m).map(|i| sx[i] * zs[i]).sum::<f64>();
        let mu = comp / (n + m_in) as f64;

        let relgap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let prim_inf = r_p.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) / (1.0 + bmax);
        let dual_inf = frob(&rd) / (1.0 + cnorm)
            + r_f.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) / (1.0 + cnorm);
        if std::env::var_os("SDP_TRACE").is_some() {
            eprintln!(
                "it {iter:3} pobj {pobj:+.6e} dobj {dobj:+.6e} gap {relgap:.2e} pinf {prim_inf:.2e} dinf {dual_inf:.2e} mu {mu:.2e}"
            );
        }
        let score = relgap.max(prim_inf).max(dual_inf);
        if score < best_score {
            best_score = score;
            best = Some((x.clone(), u.clone(), y.clone()));
        }
        if relgap <= tol && prim_inf <= tol && dual_inf <= tol {
            status = SolveStatus::Optimal;
            iterations = iter;
            break;
        }
        if dobj < -1e8 * (1.0 + pobj.abs()) && dual_inf <= 1e-6 {
            status = SolveStatus::Infeasible;
            iterations = iter;
            break;
        }

        // factorizations of the current iterates
        let lz = match chol(&z, n) {
            Some(l) => l,
            None => break,
        };
        let lx = match chol(&x, n) {
            Some(l) => l,
            None => break,
        };
        let zinv = inv_from_chol(&lz, n);

        // Schur complement G = M + diag(sx/zs) with M_ij = ⟨Aᵢ, X Aⱼ Z⁻¹⟩
        let mut g = vec![0.0; m * m];
        for j in 0..m {
            let vj = matmul(&matmul(&x, &a_mats[j], n), &zinv, n);
            for i in 0..m {
                g[i * m + j] = dot(&a_mats[i], &vj);
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let s = 0.5 * (g[i * m + j] + g[j * m + i]);
                g[i * m + j] = s;
                g[j * m + i] = s;
            }
        }
        for i in 0..m {
            if ineq[i] {
                g[i * m + i] += sx[i] / zs[i];
            }
        }
        let g_exact = g.clone();
        let gmax = (0..m).fold(0.0f64, |acc, i| acc.max(g[i * m + i]));
        let mut reg = 1e-13 * (1.0 + gmax);
        for i in 0..m {
            g[i * m + i] += reg;
        }
        let lg = loop {
            match chol(&g, m) {
                Some(l) => break l,
                None => {
                    reg *= 100.0;
                    if reg > 1.0 {
                        return Err(Error::invalid("sdp_solve: Schur complement not factorizable"));
                    }
                    for i in 0..m {
                        g[i * m + i] += reg;
                    }
                }
            }
        };
        // the factored matrix is a perturbation of g_exact; refine against the
        // exact one so the regularization does not pollute the directions
        let g_solve = |b: &[f64]| -> Vec<f64> {
            let mut x = b.to_vec();
            chol_solve(&lg, m, &mut x);
            for _ in 0..2 {
                let mut r = b.to_vec();
                for i in 0..m {
                    let mut acc = 0.0;
                    for j in 0..m {
                        acc += g_exact[i * m + j] * x[j];
                    }
                    r[i] -= acc;
                }
                chol_solve(&lg, m, &mut r);
                for i in 0..m {
                    x[i] += r[i];
                }
            }
            x
        };

        // free-variable block: W2 = G⁻¹D and S = DᵀW2, reused by both passes
        let (w2, ls) = if q > 0 {
            let mut w2 = vec![0.0; m * q];
            for j in 0..q {
                let rhs: Vec<f64> = (0..m).map(|i| d_rows[i][j]).collect();
                let col = g_solve(&rhs);
                for i in 0..m {
                    w2[i * q + j] = col[i];
                }
            }
            let mut s = vec![0.0; q * q];
            for a in 0..q {
                for bb in 0..q {
                    let mut acc = 0.0;
                    for i in 0..m {
                        acc += d_rows[i][a] * w2[i * q + bb];
                    }
                    s[a * q + bb] = acc;
                }
            }
            for a in 0..q {
                for bb in (a + 1)..q {
                    let v = 0.5 * (s[a * q + bb] + s[bb * q + a]);
                    s[a * q + bb] = v;
                    s[bb * q + a] = v;
                }
                s[a * q + a] += 1e-13 * (1.0 + s[a * q + a].abs());
            }
            let ls = chol(&s, q)
                .ok_or_else(|| Error::invalid("sdp_solve: free-variable block is singular"))?;
            (w2, ls)
        } else {
            (Vec::new(), Vec::new())
        };

        let newton = |sigma_mu: f64, corr_y: Option<&Vec<f64>>, corr_s: Option<&Vec<f64>>| {
            // T = σμZ⁻¹ − X − X·Rd·Z⁻¹ − CorrY·Z⁻¹, symmetrized
            let mut t_mat = matmul(&matmul(&x, &rd, n), &zinv, n);
            scale_inplace(&mut t_mat, -1.0);
            axpy(&mut t_mat, -1.0, &x);
            axpy_scaled_identity(&mut t_mat, sigma_mu, &zinv);
            if let Some(cy) = corr_y {
                let c_term = matmul(cy, &zinv, n);
                axpy(&mut t_mat, -1.0, &c_term);
            }
            let tsym = symmetrize(&t_mat, n);

            let mut rhs = vec![0.0; m];
            for i in 0..m {
                let mut v = dot(&a_mats[i], &tsym) - r_p[i];
                if ineq[i] {
                    let corr = corr_s.map(|c| c[i]).unwrap_or(0.0);
                    v += (sigma_mu - sx[i] * zs[i] - corr) / zs[i] - (sx[i] / zs[i]) * r_ds[i];
                }
                rhs[i] = v;
            }
            let w1 = g_solve(&rhs);

            let du: Vec<f64> = if q > 0 {
                let mut rhs_u = vec![0.0; q];
                for j in 0..q {
                    let mut acc = r_f[j];
                    for i in 0..m {
                        acc -= d_rows[i][j] * w1[i];
                    }
                    rhs_u[j] = acc;
                }
                chol_solve(&ls, q, &mut rhs_u);
                rhs_u
            } else {
                Vec::new()
            };
            let mut dy = w1;
            for i in 0..m {
                for j in 0..q {
                    dy[i] += w2[i * q + j] * du[j];
                }
            }

            // ΔZ = A*(Δy) + Rd restores dual feasibility at a full step
            let mut dz = vec![0.0; n * n];
            for i in 0..m {
                axpy(&mut dz, dy[i], &a_mats[i]);
            }
            axpy(&mut dz, 1.0, &rd);

            // ΔX = σμZ⁻¹ − X − X·ΔZ·Z⁻¹ − CorrY·Z⁻¹, symmetrized
            let mut dx = matmul(&matmul(&x, &dz, n), &zinv, n);
            scale_inplace(&mut dx, -1.0);
            axpy(&mut dx, -1.0, &x);
            axpy_scaled_identity(&mut dx, sigma_mu, &zinv);
            if let Some(cy) = corr_y {
                let c_term = matmul(cy, &zinv, n);
                axpy(&mut dx, -1.0, &c_term);
            }
            let dx = symmetrize(&dx, n);

            let mut dzs = vec![0.0; m];
            let mut dsx = vec![0.0; m];
            for i in 0..m {
                if ineq[i] {
                    dzs[i] = dy[i] + r_ds[i];
                    let corr = corr_s.map(|c| c[i]).unwrap_or(0.0);
                    dsx[i] = (sigma_mu - sx[i] * zs[i] - corr) / zs[i] - (sx[i] / zs[i]) * dzs[i];
                }
            }
            (dx, dsx, du, dy, dz, dzs)
        };

        // predictor
        let (dx_a, dsx_a, _du_a, _dy_a, dz_a, dzs_a) = newton(0.0, None, None);
        let ap_aff = step_length(&lx, &dx_a, n, &sx, &dsx_a, &ineq);
        let ad_aff = step_length(&lz, &dz_a, n, &zs, &dzs_a, &ineq);
        let mut comp_aff = 0.0;
        {
            let mut xz = 0.0;
            for i in 0..n * n {
                xz += (x[i] + ap_aff * dx_a[i]) * (z[i] + ad_aff * dz_a[i]);
            }
            comp_aff += xz;
            for i in 0..m {
                comp_aff += (sx[i] + ap_aff * dsx_a[i]) * (zs[i] + ad_aff * dzs_a[i]);
            }
        }
        let mu_aff = (comp_aff / (n + m_in) as f64).max(0.0);
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-8, 1.0);

        // corrector
        let corr_y = matmul(&dx_a, &dz_a, n);
        let corr_s: Vec<f64> = (0..m).map(|i| dsx_a[i] * dzs_a[i]).collect();
        let (dx, dsx, du, dy, dz, dzs) = newton(sigma * mu, Some(&corr_y), Some(&corr_s));

        let mut ap = step_length(&lx, &dx, n, &sx, &dsx, &ineq);
        let mut ad = step_length(&lz, &dz, n, &zs, &dzs, &ineq);
        if std::env::var_os("SDP_TRACE").is_some() {
            eprintln!("      sigma {sigma:.2e} ap {ap:.3} ad {ad:.3} (aff {ap_aff:.3}/{ad_aff:.3})");
        }

        // apply with independent positive-definiteness guards
        for _ in 0..40 {
            let mut x_new = x.clone();
            axpy(&mut x_new, ap, &dx);
            let x_new = symmetrize(&x_new, n);
            let ok_sx = (0..m).all(|i| !ineq[i] || sx[i] + ap * dsx[i] > 0.0);
            if ok_sx && chol(&x_new, n).is_some() {
                x = x_new;
                for i in 0..m {
                    if ineq[i] {
                        sx[i] += ap * dsx[i];
                    }
                }
                for j in 0..q {
                    u[j] += ap * du[j];
                }
                break;
            }
            ap *= 0.7;
        }
        for _ in 0..40 {
            let mut z_new = z.clone();
            axpy(&mut z_new, ad, &dz);
            let z_new = symmetrize(&z_new, n);
            let ok_zs = (0..m).all(|i| !ineq[i] || zs[i] + ad * dzs[i] > 0.0);
            if ok_zs && chol(&z_new, n).is_some() {
                z = z_new;
                for i in 0..m {
                    if ineq[i] {
                        zs[i] += ad * dzs[i];
                    }
                }
                for i in 0..m {
                    y[i] += ad * dy[i];
                }
                break;
            }
            ad *= 0.7;
        }
    }

    if status == SolveStatus::MaxIter {
        if let Some((bx, bu, by)) = best {
            x = bx;
            u = bu;
            y = by;
        }
    }
    let pobj = dot(&c_mat, &x) + vdot(&c_free, &u);
    let dobj = vdot(&b, &y);
    let mut y_out = SymMatrix::zeros(n)?;
    for i in 0..n {
        for j in i..n {
            y_out.set(i, j, 0.5 * (x[i * n + j] + x[j * n + i]));
        }
    }
    Ok(SdpSolution {
        value: pobj,
        y: y_out,
        free_values: u,
        duality_gap: (dobj - pobj).abs(),
        status,
        iterations,
    })
}

/// Largest step `α ≤ 1` keeping `S + αΔS ≻ 0` and the slacks positive,
/// shrunk by the step fraction.
fn step_length(l_chol: &[f64], ds: &[f64], n: usize, s: &[f64], d: &[f64], ineq: &[bool]) -> f64 {
    let mut alpha: f64 = 1.0 / STEP_FRACTION;
    // λmin of L⁻¹ ΔS L⁻ᵀ
    let mut p = ds.to_vec();
    solve_lower_cols(l_chol, n, &mut p); // P = L⁻¹ ΔS
    let mut pt = transpose(&p, n);
    solve_lower_cols(l_chol, n, &mut pt); // Q = L⁻¹ Pᵀ; W = Qᵀ
    let w = transpose(&pt, n);
    let mut sym = SymMatrix::zeros(n).expect("n > 0");
    for i in 0..n {
        for j in i..n {
            sym.set(i, j, 0.5 * (w[i * n + j] + w[j * n + i]));
        }
    }
    if let Ok(vals) = eig_sym(&sym) {
        if vals[0] < -1e-14 {
            alpha = alpha.min(-1.0 / vals[0]);
        }
    }
    for i in 0..s.len() {
        if ineq[i] && d[i] < 0.0 {
            alpha = alpha.min(-s[i] / d[i]);
        }
    }
    (alpha * STEP_FRACTION).min(1.0)
}

fn scaled_identity(n: usize, v: f64) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = v;
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn vdot(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}

fn frob(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(dst: &mut [f64], s: f64, src: &[f64]) {
    for (d, v) in dst.iter_mut().zip(src) {
        *d += s * v;
    }
}

fn scale_inplace(a: &mut [f64], s: f64) {
    for v in a.iter_mut() {
        *v *= s;
    }
}

/// `dst += σ · M` (used with `M = Z⁻¹`).
fn axpy_scaled_identity(dst: &mut [f64], sigma: f64, m: &[f64]) {
    axpy(dst, sigma, m);
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn transpose(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
    out
}

fn symmetrize(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
        }
    }
    out
}

fn chol(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves `L Lᵀ x = b` in place.
fn chol_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= l[i * n + j] * b[j];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in (i + 1)..n {
            s -= l[j * n + i] * b[j];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solves `L · Out = M` columnwise in place (`Out = L⁻¹M`).
fn solve_lower_cols(l: &[f64], n: usize, m: &mut [f64]) {
    for c in 0..n {
        for i in 0..n {
            let mut s = m[i * n + c];
            for j in 0..i {
                s -= l[i * n + j] * m[j * n + c];
            }
            m[i * n + c] = s / l[i * n + i];
        }
    }
}

/// `S⁻¹` from the Cholesky factor: `S⁻¹ = L⁻ᵀL⁻¹`.
fn inv_from_chol(l: &[f64], n: usize) -> Vec<f64> {
    let mut w = scaled_identity(n, 1.0);
    solve_lower_cols(l, n, &mut w); // W = L⁻¹
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in i.max(j)..n {
                s += w[k * n + i] * w[k * n + j];
            }
            out[i * n + j] = s;
        }
    }
    out
}
