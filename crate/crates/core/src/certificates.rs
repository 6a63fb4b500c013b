//! Proof-certificate matrices and checks.
//!
//! Three symmetric band-plus-arrowhead matrices — `E(t, c)` of dimension
//! `N+1` and `D(t, c1)`, `F(t, c1)` of dimension `N` — certify the sublinear
//! worst-case bounds: each pairs nonnegatively with a Gram matrix of iterate
//! columns. This module builds them entry-for-entry, sweeps their PSD range
//! over `t ∈ [0, c]`, replays the row-reduction argument behind the PSD proof
//! in exact rational arithmetic, and evaluates the master inequality that all
//! three bound proofs start from.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{default_psd_tol, dot, norm2, psd_check, PsdReport, SymMatrix};
use crate::plq::{OptimalPair, SeparableProblem};
use crate::admm::AdmmTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    /// `(N+1)×(N+1)`, closes the dual-gap bound.
    E,
    /// `N×N`, closes the primal-residual bound.
    D,
    /// `N×N`, closes the dual-residual bound. Its PSD range is checked
    /// numerically here; the written proof only exercises it inline.
    F,
}

impl CertificateKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CertificateKind::E => "E",
            CertificateKind::D => "D",
            CertificateKind::F => "F",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "E" | "e" => Ok(CertificateKind::E),
            "D" | "d" => Ok(CertificateKind::D),
            "F" | "f" => Ok(CertificateKind::F),
            _ => Err(Error::invalid(format!("unknown certificate kind `{tag}`"))),
        }
    }
}

/// A certificate matrix with the parameters it was built from.
#[derive(Debug, Clone)]
pub struct CertificateMatrix {
    pub kind: CertificateKind,
    pub n_iters: usize,
    pub t: f64,
    pub c: f64,
    pub matrix: SymMatrix,
}

/// Builds the certificate matrix for `N ≥ 4`.
///
/// Band structure (1-indexed): diagonal `α_k`, first off-diagonal `β_k`,
/// last column `(t−c, −t, t, …, t, β, α_last)`, zeros elsewhere.
pub fn build_certificate(kind: CertificateKind, n_iters: usize, t: f64, c: f64) -> Result<CertificateMatrix> {
    if n_iters < 4 {
        return Err(Error::invalid(format!(
            "certificate {}: requires N ≥ 4, got N = {n_iters}",
            kind.tag()
        )));
    }
    if !t.is_finite() || !c.is_finite() {
        return Err(Error::invalid("certificate: t and c must be finite"));
    }
    let nn = n_iters as f64;
    let dim = match kind {
        CertificateKind::E => n_iters + 1,
        CertificateKind::D | CertificateKind::F => n_iters,
    };
    let mut m = SymMatrix::zeros(dim)?;

    // diagonal α_k, 1-indexed k = 1..dim
    m.set(0, 0, 2.0 * c);
    for k in 2..=dim {
        let kk = k as f64;
        let alpha = match kind {
            CertificateKind::E => {
                if k == 2 {
                    6.0 * c - 5.0 * t
                } else if k <= n_iters - 1 {
                    2.0 * (2.0 * kk * kk - 3.0 * kk + 1.0) * c - (4.0 * kk - 1.0) * t
                } else if k == n_iters {
                    2.0 * nn * (nn - 1.0) * c - (2.0 * nn + 1.0) * t
                } else {
                    2.0 * nn * c - (nn + 1.0) * t
                }
            }
            CertificateKind::D => {
                if k == 2 {
                    6.0 * c - 5.0 * t
                } else if k <= n_iters - 1 {
                    2.0 * (2.0 * kk * kk - 3.0 * kk + 1.0) * c - (4.0 * kk - 1.0) * t
                } else {
                    (2.0 * nn * nn - 4.0 * nn + 4.0) * c
                        - (3.0 * nn - 5.0 + nn * nn / ((nn - 1.0) * (nn - 1.0))) * t
                }
            }
            CertificateKind::F => {
                if k == 2 {
                    6.0 * c - 5.0 * t
                } else if k <= n_iters - 1 {
                    2.0 * (2.0 * kk * kk - 3.0 * kk + 1.0) * c - (4.0 * kk - 1.0) * t
                } else {
                    (2.0 * nn * nn - 6.0 * nn + 4.0) * c
                        - 2.0 * (nn + 1.0 / ((nn - 2.0) * (nn - 2.0)) - 2.0 / (nn + 1.0) - 3.0) * t
                }
            }
        };
        m.set(k - 1, k - 1, alpha);
    }

    // first off-diagonal β_k at (k, k+1), 1-indexed k = 2..dim−1
    for k in 2..dim {
        let kk = k as f64;
        let beta = match kind {
            CertificateKind::E => {
                if k <= n_iters - 1 {
                    2.0 * kk * t - (2.0 * kk * kk - kk - 1.0) * c
                } else {
                    3.0 * t - 2.0 * (nn - 1.0) * c
                }
            }
            CertificateKind::D => 2.0 * kk * t - (2.0 * kk * kk - kk - 1.0) * c,
            CertificateKind::F => {
                if k <= n_iters - 2 {
                    2.0 * kk * t - (2.0 * kk * kk - kk - 1.0) * c
                } else {
                    (nn + 1.0 / (2.0 - nn) - 1.0) * t - (2.0 * nn * nn - 6.0 * nn + 3.0) * c
                }
            }
        };
        m.set(k - 1, k, beta);
    }

    // last column corners and fill: (1, dim) = t−c, (2, dim) = −t, then t
    // down to row dim−2; (dim−1, dim) is the β entry set above.
    m.set(0, dim - 1, t - c);
    m.set(1, dim - 1, -t);
    for k in 3..=dim.saturating_sub(2) {
        m.set(k - 1, dim - 1, t);
    }

    Ok(CertificateMatrix { kind, n_iters, t, c, matrix: m })
}

/// One PSD report per grid point `t ∈ [0, c]` (uniform, endpoints included),
/// at the default relative tolerance.
pub fn psd_sweep(
    kind: CertificateKind,
    n_iters: usize,
    c: f64,
    grid_points: usize,
) -> Result<Vec<PsdReport>> {
    if !(c > 0.0) {
        return Err(Error::invalid(format!("psd_sweep: requires c > 0, got {c}")));
    }
    if grid_points < 2 {
        return Err(Error::invalid("psd_sweep: requires at least 2 grid points"));
    }
    (0..grid_points)
        .map(|i| {
            let t = c * i as f64 / (grid_points - 1) as f64;
            let cert = build_certificate(kind, n_iters, t, c)?;
            psd_check(&cert.matrix, default_psd_tol(&cert.matrix))
        })
        .collect()
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `kind(1, 1)` in exact rational arithmetic.
fn unit_certificate_exact(kind: CertificateKind, n_iters: usize) -> Result<Vec<Vec<BigRational>>> {
    let n = n_iters as i64;
    let dim = match kind {
        CertificateKind::E => n_iters + 1,
        CertificateKind::D | CertificateKind::F => n_iters,
    };
    let mut m = vec![vec![BigRational::zero(); dim]; dim];
    let mut set = |i: usize, j: usize, v: BigRational| {
        m[i][j] = v.clone();
        m[j][i] = v;
    };
    set(0, 0, rat(2));
    for k in 2..=dim as i64 {
        let alpha = match kind {
            CertificateKind::E => {
                if k == 2 {
                    rat(1)
                } else if k <= n - 1 {
                    rat(2 * (2 * k * k - 3 * k + 1) - (4 * k - 1))
                } else if k == n {
                    rat(2 * n * (n - 1) - (2 * n + 1))
                } else {
                    rat(2 * n - (n + 1))
                }
            }
            CertificateKind::D => {
                if k == 2 {
                    rat(1)
                } else if k <= n - 1 {
                    rat(2 * (2 * k * k - 3 * k + 1) - (4 * k - 1))
                } else {
                    rat(2 * n * n - 4 * n + 4 - (3 * n - 5)) - rat_frac(n * n, (n - 1) * (n - 1))
                }
            }
            CertificateKind::F => {
                if k == 2 {
                    rat(1)
                } else if k <= n - 1 {
                    rat(2 * (2 * k * k - 3 * k + 1) - (4 * k - 1))
                } else {
                    rat(2 * n * n - 6 * n + 4 - 2 * (n - 3)) - rat_frac(2, (n - 2) * (n - 2))
                        + rat_frac(4, n + 1)
                }
            }
        };
        set((k - 1) as usize, (k - 1) as usize, alpha);
    }
    for k in 2..dim as i64 {
        let beta = match kind {
            CertificateKind::E => {
                if k <= n - 1 {
                    rat(2 * k - (2 * k * k - k - 1))
                } else {
                    rat(3 - 2 * (n - 1))
                }
            }
            CertificateKind::D => rat(2 * k - (2 * k * k - k - 1)),
            CertificateKind::F => {
                if k <= n - 2 {
                    rat(2 * k - (2 * k * k - k - 1))
                } else {
                    rat(n - 1 - (2 * n * n - 6 * n + 3)) + rat_frac(1, 2 - n)
                }
            }
        };
        set((k - 1) as usize, k as usize, beta);
    }
    set(0, dim - 1, rat(0)); // t − c at t = c = 1
    set(1, dim - 1, rat(-1));
    for k in 3..=dim.saturating_sub(2) {
        set(k - 1, dim - 1, rat(1));
    }
    Ok(m)
}

fn add_scaled_row(m: &mut [Vec<BigRational>], src: usize, dst: usize, factor: &BigRational) {
    let row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(&row) {
        *d += factor * s;
    }
}

/// Replays the PSD proof's elementary row operations on `K = kind(1, 1)` and
/// returns the resulting upper-triangular diagonal, exactly.
///
/// Defined for `E` with `N ≥ 4` and `D` with `N ≥ 5` (the `N = 4` case of
/// `D` is settled by a direct eigenvalue check instead); `F` has no written
/// reduction.
pub fn row_reduction_diagonal_exact(kind: CertificateKind, n_iters: usize) -> Result<Vec<BigRational>> {
    match kind {
        CertificateKind::F => {
            return Err(Error::UnsupportedKind(
                "row reduction is defined for kinds E and D only".to_string(),
            ))
        }
        CertificateKind::E if n_iters < 4 => {
            return Err(Error::invalid("row reduction for E requires N ≥ 4"))
        }
        CertificateKind::D if n_iters < 5 => {
            return Err(Error::invalid(
                "row reduction for D requires N ≥ 5 (N = 4 is verified by direct eigenvalue check)",
            ))
        }
        _ => {}
    }
    let n = n_iters as i64;
    let mut m = unit_certificate_exact(kind, n_iters)?;
    let dim = m.len();
    let last = dim - 1; // 0-indexed last row
    let one = BigRational::one();

    // steps i–iii are shared: r3 += r2, r_last += r2, r4 += r3
    add_scaled_row(&mut m, 1, 2, &one);
    add_scaled_row(&mut m, 1, last, &one);
    add_scaled_row(&mut m, 2, 3, &one);
    match kind {
        CertificateKind::E => {
            for i in 4..=(n - 1) {
                add_scaled_row(&mut m, (i - 1) as usize, i as usize, &one);
                let f = rat_frac(3 - i, 2 * i * i - 3 * i - 1);
                add_scaled_row(&mut m, (i - 1) as usize, last, &f);
            }
            let f = rat_frac(n - 1, 3 * n - 5);
            add_scaled_row(&mut m, (n - 1) as usize, last, &f);
        }
        CertificateKind::D => {
            for i in 4..=(n - 2) {
                add_scaled_row(&mut m, (i - 1) as usize, i as usize, &one);
                let f = rat_frac(3 - i, 2 * i * i - 3 * i - 1);
                add_scaled_row(&mut m, (i - 1) as usize, last, &f);
            }
            let f = rat_frac(2 * n * n - 8 * n + 9, 2 * n * n - 7 * n + 4);
            add_scaled_row(&mut m, (n - 2) as usize, last, &f);
        }
        CertificateKind::F => unreachable!(),
    }

    for i in 0..dim {
        for j in 0..i {
            if !m[i][j].is_zero() {
                return Err(Error::invalid(format!(
                    "row reduction did not triangularize: residue at ({i}, {j})"
                )));
            }
        }
    }
    Ok((0..dim).map(|i| m[i][i].clone()).collect())
}

/// [`row_reduction_diagonal_exact`] converted to floats.
pub fn row_reduction_diagonal(kind: CertificateKind, n_iters: usize) -> Result<Vec<f64>> {
    Ok(row_reduction_diagonal_exact(kind, n_iters)?
        .iter()
        .map(rational_to_f64)
        .collect())
}

/// The closed-form diagonal the proofs state for the reduced matrix `J`.
pub fn closed_form_j_diagonal_exact(kind: CertificateKind, n_iters: usize) -> Result<Vec<BigRational>> {
    let n = n_iters as i64;
    match kind {
        CertificateKind::E => {
            if n_iters < 4 {
                return Err(Error::invalid("closed-form J for E requires N ≥ 4"));
            }
            let mut d = vec![rat(2)];
            for k in 2..=(n - 1) {
                d.push(rat(2 * k * k - 3 * k - 1));
            }
            d.push(rat(3 * n - 5));
            let mut tail = rat(n - 2) - rat_frac((n - 1) * (n - 1), 3 * n - 5);
            for i in 4..=(n - 1) {
                tail -= rat_frac((i - 3) * (i - 3), 2 * i * i - 3 * i - 1);
            }
            d.push(tail);
            Ok(d)
        }
        CertificateKind::D => {
            if n_iters < 5 {
                return Err(Error::invalid("closed-form J for D requires N ≥ 5"));
            }
            let mut d = vec![rat(2)];
            for k in 2..=(n - 1) {
                d.push(rat(2 * k * k - 3 * k - 1));
            }
            let mut tail = rat(2 * n * n - 7 * n + 8)
                - rat_frac(n * n, (n - 1) * (n - 1))
                - rat_frac((2 * n * n - 8 * n + 9) * (2 * n * n - 8 * n + 9), 2 * n * n - 7 * n + 4);
            for i in 4..=(n - 2) {
                tail -= rat_frac((i - 3) * (i - 3), 2 * i * i - 3 * i - 1);
            }
            d.push(tail);
            Ok(d)
        }
        CertificateKind::F => Err(Error::UnsupportedKind(
            "no closed-form J diagonal is stated for kind F".to_string(),
        )),
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // exact when representable; otherwise best-effort via string
    num.to_string().parse::<f64>().unwrap_or(f64::NAN) / den.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Exactness check that the `Σ |λᵢ|` of a rational is positive.
pub fn all_positive(diag: &[BigRational]) -> bool {
    diag.iter().all(|v| v.is_positive())
}

/// Master-inequality evaluation: the left-hand side and a magnitude scale
/// (the sum of the absolute values of its terms).
#[derive(Debug, Clone, Copy)]
pub struct MasterIneq {
    pub lhs: f64,
    pub scale: f64,
}

/// Evaluates, term by term, the valid inequality every sublinear bound proof
/// starts from, for a trace on an instance translated so `x⋆ = 0`, `z⋆ = 0`,
/// `b = 0`. `v` is the free vector of the inequality and `c1` the relative
/// strong-convexity modulus of `f`. The caller asserts
/// `lhs ≥ −tol·(1 + scale)`.
pub fn master_inequality_check(
    p: &SeparableProblem,
    trace: &AdmmTrace,
    opt: &OptimalPair,
    v: &[f64],
    c1: f64,
) -> Result<MasterIneq> {
    let n = trace.iterations();
    if n < 4 {
        return Err(Error::invalid(format!("master inequality: requires N ≥ 4, got N = {n}")));
    }
    if v.len() != p.r_dim() {
        return Err(Error::invalid("master inequality: v must have the residual dimension"));
    }
    let translated = norm2(&opt.x_star) <= 1e-10
        && norm2(&opt.z_star) <= 1e-10
        && norm2(&p.rhs) <= 1e-10;
    if !translated {
        return Err(Error::invalid(
            "master inequality: instance must be translated so x⋆ = 0, z⋆ = 0, b = 0",
        ));
    }
    let t = trace.t;
    let ax: Vec<Vec<f64>> = trace.xs.iter().map(|x| p.a.matvec(x)).collect(); // Ax¹..Ax^N at ax[0..]
    let bz: Vec<Vec<f64>> = trace.zs.iter().map(|z| p.b.matvec(z)).collect(); // Bz⁰..Bz^N
    let lam = &trace.lambdas;
    let lam_star = &opt.lambda_star;
    let nn = n as f64;

    let alpha = |k: usize| -> f64 {
        let kk = k as f64;
        if k < n {
            (4.0 * kk - 1.0) * t - 2.0 * (2.0 * kk * kk - 3.0 * kk + 1.0) * c1
        } else {
            (4.0 * nn + 1.0) * t - (2.0 * nn * nn - 5.0 * nn + 3.0) * c1
        }
    };
    let beta = |k: usize| -> f64 {
        let kk = k as f64;
        (2.0 * kk * kk - kk - 1.0) * c1 - 2.0 * kk * t
    };

    let sub = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let add3 = |a: &[f64], sb: f64, b: &[f64], sc: f64, c: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(b.iter().zip(c))
            .map(|(x, (y, z))| x + sb * y + sc * z)
            .collect()
    };

    let ax_n = &ax[n - 1];
    let bz_n = &bz[n];
    let bz_nm1 = &bz[n - 1];

    let mut terms: Vec<f64> = Vec::with_capacity(24);
    // N⟨λ^N, Ax^N + Bz^N⟩
    let axbz_n: Vec<f64> = ax_n.iter().zip(bz_n).map(|(a, b)| a + b).collect();
    terms.push(nn * dot(&lam[n], &axbz_n));
    // −⟨λ^N + tAx^N + tBz^{N−1}, Ax^N − v⟩
    terms.push(-dot(&add3(&lam[n], t, ax_n, t, bz_nm1), &sub(ax_n, v)));
    // +⟨λ⁰ + tAx¹ + tBz⁰, Ax¹ − v⟩
    terms.push(dot(&add3(&lam[0], t, &ax[0], t, &bz[0]), &sub(&ax[0], v)));
    // +(1/2t)‖λ⁰ − λ⋆‖² − (1/2t)‖λ^N − λ⋆‖²
    terms.push(norm2(&sub(&lam[0], lam_star)).powi(2) / (2.0 * t));
    terms.push(-norm2(&sub(&lam[n], lam_star)).powi(2) / (2.0 * t));
    // +(t/2)‖z⁰‖²_B
    terms.push(0.5 * t * norm2(&bz[0]).powi(2));
    // −t⟨Ax¹ − Ax² + (N+1)Ax^N + Bz^N, v⟩
    let mix: Vec<f64> = (0..p.r_dim())
        .map(|i| ax[0][i] - ax[1][i] + (nn + 1.0) * ax_n[i] + bz_n[i])
        .collect();
    terms.push(-t * dot(&mix, v));
    // −t Σ_{k=3}^{N} ⟨Ax^k, v⟩
    let mut s = 0.0;
    for k in 3..=n {
        s += dot(&ax[k - 1], v);
    }
    terms.push(-t * s);
    // +(t(N−1)/2)‖v‖²
    terms.push(0.5 * t * (nn - 1.0) * norm2(v).powi(2));
    // −(c1/2)‖x¹‖²_A
    terms.push(-0.5 * c1 * norm2(&ax[0]).powi(2));
    // +Σ_{k=2}^{N} (α_k/2)‖x^k‖²_A
    let mut s = 0.0;
    for k in 2..=n {
        s += 0.5 * alpha(k) * norm2(&ax[k - 1]).powi(2);
    }
    terms.push(s);
    // +Σ_{k=2}^{N−1} β_k ⟨Ax^k, Ax^{k+1}⟩
    let mut s = 0.0;
    for k in 2..=(n - 1) {
        s += beta(k) * dot(&ax[k - 1], &ax[k]);
    }
    terms.push(s);
    // +tN⟨Bz^{N−1}, Ax^N − v⟩
    terms.push(t * nn * dot(bz_nm1, &sub(ax_n, v)));
    // +t⟨Ax^N, Bz^N⟩
    terms.push(t * dot(ax_n, bz_n));
    // −(t(N−1)²/2)‖z^N − z^{N−1}‖²_B
    terms.push(-0.5 * t * (nn - 1.0) * (nn - 1.0) * norm2(&sub(bz_n, bz_nm1)).powi(2));
    // −(tN²/2)‖Ax^N + Bz^N‖²
    terms.push(-0.5 * t * nn * nn * norm2(&axbz_n).powi(2));
    // −t‖x²‖²_A
    terms.push(-t * norm2(&ax[1]).powi(2));
    // +f(x¹) − f(x^N) + N(f(x^N) − f⋆ + g(z^N) − g⋆)
    let f1 = p.f_value(&trace.xs[0]);
    let fn_ = p.f_value(&trace.xs[n - 1]);
    let gn = p.g_value(&trace.zs[n]);
    terms.push(f1 - fn_);
    terms.push(nn * (fn_ - opt.f_star + gn - opt.g_star));

    let lhs = terms.iter().sum();
    let scale = terms.iter().map(|x| x.abs()).sum();
    Ok(MasterIneq { lhs, scale })
}

/// JSON report for a PSD sweep, consumed by the command-line front end.
#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub kind: &'static str,
    #[serde(rename = "N")]
    pub n_iters: usize,
    pub c: f64,
    pub grid: usize,
    pub min_eig_per_t: Vec<f64>,
    pub pass: bool,
}

pub fn sweep_report(kind: CertificateKind, n_iters: usize, c: f64, grid: usize) -> Result<SweepReport> {
    let reports = psd_sweep(kind, n_iters, c, grid)?;
    Ok(SweepReport {
        kind: kind.tag(),
        n_iters,
        c,
        grid,
        min_eig_per_t: reports.iter().map(|r| r.min_eigenvalue).collect(),
        pass: reports.iter().all(|r| r.is_psd),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admm::{admm_run, dual_value, DualEval};
    use crate::gallery::{make_instance, GalleryKind};
    use crate::synth::{random_scalar_config, random_scalar_instance, SeededRng};

    #[test]
    fn e_matrix_at_unit_parameters() {
        let cert = build_certificate(CertificateKind::E, 4, 1.0, 1.0).unwrap();
        let m = &cert.matrix;
        for (i, want) in [2.0, 1.0, 9.0, 15.0, 3.0].iter().enumerate() {
            assert_eq!(m.get(i, i), *want, "diagonal {i}");
        }
        assert_eq!(m.get(1, 2), -1.0);
        assert_eq!(m.get(2, 3), -8.0);
        assert_eq!(m.get(3, 4), -3.0);
        assert_eq!(m.get(0, 4), 0.0);
        assert_eq!(m.get(1, 4), -1.0);
        assert_eq!(m.get(2, 4), 1.0);
    }

    #[test]
    fn e_matrix_at_t_zero_is_diagonally_dominant() {
        let cert = build_certificate(CertificateKind::E, 4, 0.0, 1.0).unwrap();
        let m = &cert.matrix;
        assert_eq!(m.get(0, 4), -1.0);
        assert_eq!(m.get(1, 4), 0.0);
        assert_eq!(m.get(2, 4), 0.0);
        for i in 0..5 {
            let off: f64 = (0..5).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
            assert!(m.get(i, i) >= off, "row {i} not dominant");
        }
        let rep = psd_check(m, default_psd_tol(m)).unwrap();
        assert!(rep.is_psd);
    }

    #[test]
    fn f_matrix_corner_beta() {
        let cert = build_certificate(CertificateKind::F, 5, 1.0, 1.0).unwrap();
        assert!((cert.matrix.get(3, 4) - (-58.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn builder_random_consistency() {
        let mut rng = SeededRng::new(3);
        for _ in 0..50 {
            let n = 4 + (rng.next_u64() % 12) as usize;
            let c = rng.uniform(0.2, 3.0);
            let t = rng.uniform(0.0, 1.0) * c;
            for kind in [CertificateKind::E, CertificateKind::D, CertificateKind::F] {
                let cert = build_certificate(kind, n, t, c).unwrap();
                let m = &cert.matrix;
                let dim = m.dim();
                for i in 0..dim {
                    for j in 0..dim {
                        assert_eq!(m.get(i, j), m.get(j, i));
                    }
                }
                assert_eq!(m.get(0, dim - 1), t - c);
                assert_eq!(m.get(1, dim - 1), -t);
            }
        }
    }

    #[test]
    fn sweep_examples() {
        for kind in [CertificateKind::E, CertificateKind::D] {
            let reports = psd_sweep(kind, 10, 1.0, 101).unwrap();
            assert_eq!(reports.len(), 101);
            assert!(reports.iter().all(|r| r.is_psd), "{} sweep failed", kind.tag());
        }
        let ends = psd_sweep(CertificateKind::E, 4, 1.0, 2).unwrap();
        assert!(ends[0].is_psd && ends[1].is_psd);
        // t = c endpoint is strictly positive definite
        assert!(ends[1].min_eigenvalue > 0.0);
    }

    #[test]
    fn row_reduction_small_cases() {
        let d5 = row_reduction_diagonal(CertificateKind::E, 5).unwrap();
        let want = [2.0, 1.0, 8.0, 19.0, 10.0, 3.0 - 1.6 - 1.0 / 19.0];
        for (a, b) in d5.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let d4 = row_reduction_diagonal(CertificateKind::E, 4).unwrap();
        let want4 = [2.0, 1.0, 8.0, 7.0, 2.0 - 9.0 / 7.0];
        for (a, b) in d4.iter().zip(&want4) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(
            row_reduction_diagonal(CertificateKind::F, 6),
            Err(Error::UnsupportedKind(_))
        ));
        assert!(row_reduction_diagonal(CertificateKind::D, 4).is_err());
    }

    #[test]
    fn row_reduction_matches_closed_forms_exactly() {
        for n in 4..=20usize {
            let got = row_reduction_diagonal_exact(CertificateKind::E, n).unwrap();
            let want = closed_form_j_diagonal_exact(CertificateKind::E, n).unwrap();
            assert_eq!(got, want, "E at N = {n}");
            assert!(all_positive(&got));
        }
        for n in 5..=20usize {
            let got = row_reduction_diagonal_exact(CertificateKind::D, n).unwrap();
            let want = closed_form_j_diagonal_exact(CertificateKind::D, n).unwrap();
            assert_eq!(got, want, "D at N = {n}");
            assert!(all_positive(&got));
        }
        // D(1, 1) at N = 4 is positive definite by direct eigenvalue check
        let cert = build_certificate(CertificateKind::D, 4, 1.0, 1.0).unwrap();
        let rep = psd_check(&cert.matrix, 0.0).unwrap();
        assert!(rep.min_eigenvalue > 0.0);
    }

    #[test]
    fn master_inequality_zero_trace() {
        let (p, _, opt) = make_instance(GalleryKind::DualGapTight, 5, 1.0, 1.0, 1).unwrap();
        let mut cfg = random_scalar_config(0, 1.0, 5);
        cfg.lambda0 = vec![0.5];
        cfg.z0 = vec![0.0];
        // from the saddle the iterates sit at the fixed point only for the
        // quadratic pair; use that instead
        let p0 = SeparableProblem::scalar(
            crate::plq::PlqFunction::quadratic(1.0).unwrap(),
            crate::plq::PlqFunction::quadratic(1.0).unwrap(),
        );
        let opt0 = OptimalPair {
            x_star: vec![0.0],
            z_star: vec![0.0],
            lambda_star: vec![0.0],
            f_star: 0.0,
            g_star: 0.0,
        };
        let trace0 = admm_run(
            &p0,
            &crate::admm::AdmmConfig {
                t: 1.0,
                iterations: 5,
                lambda0: vec![0.0],
                z0: vec![0.0],
            },
        )
        .unwrap();
        let out = master_inequality_check(&p0, &trace0, &opt0, &[0.0], 1.0).unwrap();
        assert_eq!(out.lhs, 0.0);
        drop((p, opt, cfg));
    }

    #[test]
    fn master_inequality_on_gallery_and_random() {
        // dual-gap instance with v = A x̂^N
        let (p, cfg, opt) = make_instance(GalleryKind::DualGapTight, 6, 1.0, 1.0, 1).unwrap();
        let trace = admm_run(&p, &cfg).unwrap();
        let v = match dual_value(&p, &trace.lambdas[6]).unwrap() {
            DualEval::Finite { x_hat, .. } => p.a.matvec(&x_hat),
            DualEval::Unbounded => panic!("gallery dual is finite"),
        };
        let out = master_inequality_check(&p, &trace, &opt, &v, 1.0).unwrap();
        assert!(out.lhs >= -1e-8 * (1.0 + out.scale), "lhs = {}", out.lhs);

        let mut rng = SeededRng::new(8);
        for seed in 0..30u64 {
            let inst = random_scalar_instance(seed);
            let t = rng.uniform(0.1, 1.0) * inst.c1.min(1.0);
            let n = 5;
            let cfg = random_scalar_config(seed, t, n);
            let trace = admm_run(&inst.problem, &cfg).unwrap();
            let v = inst.problem.a.matvec(&trace.xs[n - 1]);
            let out = master_inequality_check(&inst.problem, &trace, &inst.opt, &v, inst.c1).unwrap();
            assert!(
                out.lhs >= -1e-8 * (1.0 + out.scale),
                "seed {seed}: lhs = {}, scale = {}",
                out.lhs,
                out.scale
            );
        }
    }

    #[test]
    fn master_inequality_rejects_untranslated() {
        let (p, cfg, mut opt) = make_instance(GalleryKind::DualGapTight, 5, 1.0, 1.0, 1).unwrap();
        let trace = admm_run(&p, &cfg).unwrap();
        opt.x_star = vec![1.0];
        assert!(master_inequality_check(&p, &trace, &opt, &[0.0], 1.0).is_err());
    }
}
