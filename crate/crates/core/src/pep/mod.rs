//! Finite-dimensional performance-estimation problems and their SDP
//! relaxations.
//!
//! The worst case of ADMM over a function class is relaxed to a semidefinite
//! program over the Gram matrix `Y` of the mapped iterate columns
//! `(Ax†, Ax¹, …, Ax^{N+1}, Ax̄ | Bz†, Bz⁰, …, Bz^N, Bz̄)` together with the
//! scalar function values. Subgradients never appear as their own columns:
//! the stationarity conditions of the algorithm substitute each one by a
//! linear combination of mapped columns, so every constraint is linear in
//! `(Y, values)`.
//!
//! The two-iteration linear-rate problem is a fractional program; it is
//! normalized by fixing its denominator to 1, which is lossless because the
//! whole constraint system is jointly positively homogeneous: scaling the
//! underlying vectors by `√s` scales `Y` by `s`, and scaling all function
//! values by `s` scales both sides of every interpolation and PŁ constraint
//! by `s`.

mod sdpa;
mod solver;

pub use sdpa::{export_sdpa, read_sdpa};
pub use solver::{sdp_solve, SdpSolution, SolveStatus};

use serde::Serialize;

use crate::admm::{dual_value, AdmmTrace, DualEval};
use crate::error::{Error, Result};
use crate::numkit::{gram, SymMatrix};
use crate::plq::{OptimalPair, SeparableProblem};

/// Which worst-case metric the PEP maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PepObjective {
    /// `D(λ⋆) − D(λ^N)`.
    DualGap,
    /// `‖Ax^N + Bz^N‖²`.
    PrimalResidualSq,
    /// `‖B(z^N − z^{N−1})‖²`.
    DualResidualSq,
}

impl PepObjective {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "dual_gap" => Ok(PepObjective::DualGap),
            "primal_residual_sq" | "primal_residual" => Ok(PepObjective::PrimalResidualSq),
            "dual_residual_sq" | "dual_residual" => Ok(PepObjective::DualResidualSq),
            _ => Err(Error::invalid(format!("unknown PEP objective `{tag}`"))),
        }
    }
}

/// Parameters of the sublinear-rate PEP.
#[derive(Debug, Clone)]
pub struct PepParams {
    pub n_iters: usize,
    pub t: f64,
    pub c1: f64,
    pub c2: f64,
    /// Initial-distance budget `Δ = ‖λ⁰−λ⋆‖² + t²‖z⁰−z⋆‖²_B`.
    pub delta: f64,
    pub objective: PepObjective,
    /// Also label `z⁰` with a function value and emit its evaluation-side
    /// interpolation constraints (a strictly tighter relaxation). Off by
    /// default: the baseline formulation leaves `z⁰` unlabeled.
    pub strict: bool,
}

impl PepParams {
    pub fn new(n_iters: usize, t: f64, c1: f64, c2: f64, delta: f64, objective: PepObjective) -> Self {
        PepParams { n_iters, t, c1, c2, delta, objective, strict: false }
    }

    fn validate(&self) -> Result<()> {
        if self.n_iters < 1 {
            return Err(Error::invalid("pep: N ≥ 1 required"));
        }
        if !(self.t > 0.0) {
            return Err(Error::invalid(format!("pep: t = {} must be positive", self.t)));
        }
        if !(self.c1 >= 0.0) || !(self.c2 >= 0.0) {
            return Err(Error::invalid("pep: moduli must be ≥ 0"));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::invalid(format!("pep: Δ = {} must be ≥ 0", self.delta)));
        }
        Ok(())
    }
}

/// Parameters of the two-iteration linear-rate PEP.
#[derive(Debug, Clone)]
pub struct RatePepParams {
    pub t: f64,
    pub c1: f64,
    pub c2: f64,
    /// PŁ modulus of the dual objective.
    pub lp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// One linear constraint `⟨gram, Y⟩ + free·values {≤,=} rhs`.
#[derive(Debug, Clone)]
pub struct SdpConstraint {
    pub gram: SymMatrix,
    pub free: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

/// A linear SDP over one PSD Gram block and unrestricted scalars:
/// maximize `⟨objective_gram, Y⟩ + objective_free·values` subject to the
/// constraints and `Y ⪰ 0`.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub gram_dim: usize,
    pub num_free: usize,
    pub objective_gram: SymMatrix,
    pub objective_free: Vec<f64>,
    pub constraints: Vec<SdpConstraint>,
    /// Human-readable names of the Gram columns, in index order.
    pub column_labels: Vec<String>,
    /// Human-readable names of the free scalars, in index order.
    pub free_labels: Vec<String>,
}

impl SdpProblem {
    fn empty(gram_dim: usize, num_free: usize) -> Result<Self> {
        Ok(SdpProblem {
            gram_dim,
            num_free,
            objective_gram: SymMatrix::zeros(gram_dim)?,
            objective_free: vec![0.0; num_free],
            constraints: Vec::new(),
            column_labels: (0..gram_dim).map(|i| format!("col{i}")).collect(),
            free_labels: (0..num_free).map(|i| format!("val{i}")).collect(),
        })
    }
}

/// One labeled point of an interpolation family.
///
/// `point` holds the coefficients of the mapped point (`Ax` or `Bz`) in the
/// Gram basis; `witness` holds coefficients of the vector `w` with
/// subgradient `ξ = −Mᵀw` (`M` the same map); `value` indexes the point's
/// function value among the free scalars.
#[derive(Debug, Clone)]
pub struct InterpPoint {
    pub point: Vec<f64>,
    pub witness: Vec<f64>,
    pub value: usize,
}

/// Emits the interpolation constraints of one function class over the given
/// labeled points: for every ordered pair `(i, j)` with `i ≠ j`,
/// `(modulus/2)‖pᵢ−pⱼ‖²_Y ≤ vᵢ − vⱼ + ⟨wⱼ, pᵢ−pⱼ⟩_Y`
/// (the witness term is `−⟨ξⱼ, xᵢ−xⱼ⟩` with `ξⱼ = −Mᵀwⱼ`). Identical
/// indices would degenerate to `0 ≤ 0` and are omitted.
pub fn interpolation_block(
    points: &[InterpPoint],
    modulus: f64,
    gram_dim: usize,
    num_free: usize,
) -> Result<Vec<SdpConstraint>> {
    if points.len() < 2 {
        return Err(Error::invalid("interpolation_block: at least two points required"));
    }
    if !(modulus >= 0.0) {
        return Err(Error::invalid(format!("interpolation_block: modulus {modulus} must be ≥ 0")));
    }
    let mut out = Vec::with_capacity(points.len() * (points.len() - 1));
    for (i, pi) in points.iter().enumerate() {
        for (j, pj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d: Vec<f64> = pi.point.iter().zip(&pj.point).map(|(a, b)| a - b).collect();
            let mut g = SymMatrix::zeros(gram_dim)?;
            g.add_outer(0.5 * modulus, &d);
            g.add_sym_outer(-1.0, &pj.witness, &d);
            let mut free = vec![0.0; num_free];
            free[pi.value] -= 1.0;
            free[pj.value] += 1.0;
            out.push(SdpConstraint { gram: g, free, rel: Relation::Le, rhs: 0.0 });
        }
    }
    Ok(out)
}

struct GramBasis {
    n_iters: usize,
    t: f64,
    dim: usize,
}

impl GramBasis {
    fn col_x_dag(&self) -> usize {
        0
    }
    fn col_x(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.n_iters + 1);
        k
    }
    fn col_x_bar(&self) -> usize {
        self.n_iters + 2
    }
    fn col_z_dag(&self) -> usize {
        self.n_iters + 3
    }
    fn col_z(&self, k: usize) -> usize {
        debug_assert!(k <= self.n_iters);
        self.n_iters + 4 + k
    }
    fn col_z_bar(&self) -> usize {
        2 * self.n_iters + 5
    }

    fn unit(&self, col: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[col] = 1.0;
        v
    }

    /// `λ^k = (Ax† + Bz†) + Σ_{i=1}^{k} t(Ax^i + Bz^i)` in the Gram basis.
    fn lambda(&self, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[self.col_x_dag()] = 1.0;
        v[self.col_z_dag()] = 1.0;
        for i in 1..=k {
            v[self.col_x(i)] += self.t;
            v[self.col_z(i)] += self.t;
        }
        v
    }

    fn lambda_star(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[self.col_x_bar()] = 1.0;
        v[self.col_z_bar()] = 1.0;
        v
    }
}

/// Builds the sublinear-rate PEP.
///
/// Gram columns (dimension `2N+6`):
/// `x†, x¹…x^{N+1}, x̄ | z†, z⁰…z^N, z̄`, all through `A` resp. `B`.
/// Free scalars (count `2N+3`, or `2N+4` in strict mode):
/// `f¹…f^{N+1}, f⋆, g¹…g^N, g⋆` (strict mode appends `g⁰`); `z⁰` carries no
/// label in the baseline formulation, so it never enters an interpolation
/// pair, only the budget constraint and the subgradient substitutions.
pub fn build_pep(params: &PepParams) -> Result<SdpProblem> {
    params.validate()?;
    let n = params.n_iters;
    let t = params.t;
    let basis = GramBasis { n_iters: n, t, dim: 2 * n + 6 };
    let num_free = if params.strict { 2 * n + 4 } else { 2 * n + 3 };
    let f_val = |k: usize| k - 1; // f^k, k = 1..N+1
    let f_star = n + 1;
    let g_val = |k: usize| n + 1 + k; // g^k, k = 1..N
    let g_star = 2 * n + 2;

    let mut sdp = SdpProblem::empty(basis.dim, num_free)?;
    sdp.column_labels = {
        let mut l = vec!["x_dag".to_string()];
        l.extend((1..=n + 1).map(|k| format!("x{k}")));
        l.push("x_bar".to_string());
        l.push("z_dag".to_string());
        l.extend((0..=n).map(|k| format!("z{k}")));
        l.push("z_bar".to_string());
        l
    };
    sdp.free_labels = {
        let mut l: Vec<String> = (1..=n + 1).map(|k| format!("f{k}")).collect();
        l.push("f_star".to_string());
        l.extend((1..=n).map(|k| format!("g{k}")));
        l.push("g_star".to_string());
        if params.strict {
            l.push("g0".to_string());
        }
        l
    };

    // f-side labeled points: iterates with their stationarity witnesses, the
    // extra dual witness x^{N+1}, and the optimum.
    let mut f_points = Vec::with_capacity(n + 2);
    for k in 1..=n {
        let mut w = basis.lambda(k - 1);
        w[basis.col_x(k)] += t;
        w[basis.col_z(k - 1)] += t;
        f_points.push(InterpPoint { point: basis.unit(basis.col_x(k)), witness: w, value: f_val(k) });
    }
    f_points.push(InterpPoint {
        point: basis.unit(basis.col_x(n + 1)),
        witness: basis.lambda(n),
        value: f_val(n + 1),
    });
    f_points.push(InterpPoint {
        point: vec![0.0; basis.dim],
        witness: basis.lambda_star(),
        value: f_star,
    });

    // g-side labeled points: `η^k = −Bᵀλ^k` and the optimum.
    let mut g_points = Vec::with_capacity(n + 1);
    for k in 1..=n {
        g_points.push(InterpPoint {
            point: basis.unit(basis.col_z(k)),
            witness: basis.lambda(k),
            value: g_val(k),
        });
    }
    g_points.push(InterpPoint {
        point: vec![0.0; basis.dim],
        witness: basis.lambda_star(),
        value: g_star,
    });

    sdp.constraints = interpolation_block(&f_points, params.c1, basis.dim, num_free)?;
    sdp.constraints
        .extend(interpolation_block(&g_points, params.c2, basis.dim, num_free)?);

    if params.strict {
        // z⁰ as evaluation point only: (c2/2)‖z⁰−zʲ‖² ≤ g⁰ − gʲ + ⟨wⱼ, z⁰−zʲ⟩
        let g0 = 2 * n + 3;
        let p0 = basis.unit(basis.col_z(0));
        for pj in &g_points {
            let d: Vec<f64> = p0.iter().zip(&pj.point).map(|(a, b)| a - b).collect();
            let mut g = SymMatrix::zeros(basis.dim)?;
            g.add_outer(0.5 * params.c2, &d);
            g.add_sym_outer(-1.0, &pj.witness, &d);
            let mut free = vec![0.0; num_free];
            free[g0] -= 1.0;
            free[pj.value] += 1.0;
            sdp.constraints.push(SdpConstraint { gram: g, free, rel: Relation::Le, rhs: 0.0 });
        }
    }

    // budget: ‖λ⁰ − λ⋆‖² + t²‖z⁰‖²_B = Δ
    let diff: Vec<f64> = basis
        .lambda(0)
        .iter()
        .zip(&basis.lambda_star())
        .map(|(a, b)| a - b)
        .collect();
    let mut budget = SymMatrix::zeros(basis.dim)?;
    budget.add_outer(1.0, &diff);
    budget.add_outer(t * t, &basis.unit(basis.col_z(0)));
    sdp.constraints.push(SdpConstraint {
        gram: budget,
        free: vec![0.0; num_free],
        rel: Relation::Eq,
        rhs: params.delta,
    });

    match params.objective {
        PepObjective::DualGap => {
            // f⋆ + g⋆ − f^{N+1} − g^N − ⟨λ^N, Ax^{N+1} + Bz^N⟩
            sdp.objective_free[f_star] = 1.0;
            sdp.objective_free[g_star] = 1.0;
            sdp.objective_free[f_val(n + 1)] = -1.0;
            sdp.objective_free[g_val(n)] = -1.0;
            let sum: Vec<f64> = basis
                .unit(basis.col_x(n + 1))
                .iter()
                .zip(&basis.unit(basis.col_z(n)))
                .map(|(a, b)| a + b)
                .collect();
            sdp.objective_gram.add_sym_outer(-1.0, &basis.lambda(n), &sum);
        }
        PepObjective::PrimalResidualSq => {
            let sum: Vec<f64> = basis
                .unit(basis.col_x(n))
                .iter()
                .zip(&basis.unit(basis.col_z(n)))
                .map(|(a, b)| a + b)
                .collect();
            sdp.objective_gram.add_outer(1.0, &sum);
        }
        PepObjective::DualResidualSq => {
            let diff: Vec<f64> = basis
                .unit(basis.col_z(n))
                .iter()
                .zip(&basis.unit(basis.col_z(n - 1)))
                .map(|(a, b)| a - b)
                .collect();
            sdp.objective_gram.add_outer(1.0, &diff);
        }
    }

    Ok(sdp)
}

/// Expected constraint count of [`build_pep`] without strict mode: all
/// ordered pairs over the `N+2` labeled f-points and the `N+1` labeled
/// g-points, plus the budget equality.
pub fn expected_constraint_count(n_iters: usize) -> usize {
    (n_iters + 2) * (n_iters + 1) + (n_iters + 1) * n_iters + 1
}

/// The two-iteration linear-rate PEP with its ratio threshold.
#[derive(Debug, Clone)]
pub struct RatePep {
    pub sdp: SdpProblem,
    /// The contraction factor the ratio is tested against.
    pub alpha: f64,
}

impl RatePep {
    /// Whether a solved relaxation shows the ratio can exceed `alpha`.
    pub fn ratio_exceeds_alpha(&self, sol: &SdpSolution) -> bool {
        sol.value > self.alpha
    }
}

/// Builds the two-iteration dual-gap ratio PEP in normalized form:
/// maximize `D(λ⋆) − D(λ²)` subject to the interpolation and PŁ constraints
/// and to the denominator pin `D(λ⋆) − D(λ¹) = 1`.
///
/// Gram columns: `Ax̂¹, Ax², Ax̂², Ax†, Ax̄ | Bz¹, Bz², Bz†, Bz̄`;
/// free scalars: `f̂¹, f², f̂², f⋆, g¹, g², g⋆`.
pub fn build_rate_pep(params: &RatePepParams, alpha: f64) -> Result<RatePep> {
    if !(params.t > 0.0 && params.c1 > 0.0 && params.c2 > 0.0 && params.lp > 0.0) {
        return Err(Error::invalid("rate pep: t, c1, c2, Lp must be positive"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("rate pep: alpha = {alpha} must lie in (0, 1)")));
    }
    let dim = 9;
    let num_free = 7;
    let t = params.t;
    let (xhat1, x2, xhat2, x_dag, x_bar, z1, z2, z_dag, z_bar) = (0, 1, 2, 3, 4, 5, 6, 7, 8);
    let (fhat1, f2, fhat2, f_star, g1, g2, g_star) = (0, 1, 2, 3, 4, 5, 6);
    let unit = |c: usize| {
        let mut v = vec![0.0; dim];
        v[c] = 1.0;
        v
    };
    let mut lam1 = vec![0.0; dim];
    lam1[x_dag] = 1.0;
    lam1[z_dag] = 1.0;
    let mut lam2 = lam1.clone();
    lam2[x2] += t;
    lam2[z2] += t;
    let mut lam_star = vec![0.0; dim];
    lam_star[x_bar] = 1.0;
    lam_star[z_bar] = 1.0;

    let mut w_x2 = lam1.clone();
    w_x2[x2] += t;
    w_x2[z1] += t;

    let f_points = vec![
        InterpPoint { point: unit(xhat1), witness: lam1.clone(), value: fhat1 },
        InterpPoint { point: unit(x2), witness: w_x2, value: f2 },
        InterpPoint { point: unit(xhat2), witness: lam2.clone(), value: fhat2 },
        InterpPoint { point: vec![0.0; dim], witness: lam_star.clone(), value: f_star },
    ];
    let g_points = vec![
        InterpPoint { point: unit(z1), witness: lam1.clone(), value: g1 },
        InterpPoint { point: unit(z2), witness: lam2.clone(), value: g2 },
        InterpPoint { point: vec![0.0; dim], witness: lam_star, value: g_star },
    ];

    let mut sdp = SdpProblem::empty(dim, num_free)?;
    sdp.column_labels = ["xhat1", "x2", "xhat2", "x_dag", "x_bar", "z1", "z2", "z_dag", "z_bar"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    sdp.free_labels = ["fhat1", "f2", "fhat2", "f_star", "g1", "g2", "g_star"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    sdp.constraints = interpolation_block(&f_points, params.c1, dim, num_free)?;
    sdp.constraints
        .extend(interpolation_block(&g_points, params.c2, dim, num_free)?);

    // gap(λ) = f⋆ + g⋆ − f̂ − g − ⟨λ, Ax̂ + Bz⟩ as (gram, free) pieces
    let gap = |lam: &[f64], xh: usize, z: usize, fh: usize, g: usize| -> (SymMatrix, Vec<f64>) {
        let mut gm = SymMatrix::zeros(dim).expect("dim > 0");
        let sum: Vec<f64> = unit(xh).iter().zip(&unit(z)).map(|(a, b)| a + b).collect();
        gm.add_sym_outer(-1.0, lam, &sum);
        let mut fr = vec![0.0; num_free];
        fr[f_star] = 1.0;
        fr[g_star] = 1.0;
        fr[fh] = -1.0;
        fr[g] = -1.0;
        (gm, fr)
    };

    // PŁ at λ¹ and λ²: gap ≤ (1/(2Lp))‖Ax̂ + Bz‖²
    for (lam, xh, z, fh, g) in [(&lam1, xhat1, z1, fhat1, g1), (&lam2, xhat2, z2, fhat2, g2)] {
        let (mut gm, fr) = gap(lam, xh, z, fh, g);
        let sum: Vec<f64> = unit(xh).iter().zip(&unit(z)).map(|(a, b)| a + b).collect();
        gm.add_outer(-1.0 / (2.0 * params.lp), &sum);
        sdp.constraints.push(SdpConstraint { gram: gm, free: fr, rel: Relation::Le, rhs: 0.0 });
    }

    // denominator pin: gap(λ¹) = 1
    let (gm, fr) = gap(&lam1, xhat1, z1, fhat1, g1);
    sdp.constraints.push(SdpConstraint { gram: gm, free: fr, rel: Relation::Eq, rhs: 1.0 });

    // objective: gap(λ²)
    let (gm, fr) = gap(&lam2, xhat2, z2, fhat2, g2);
    sdp.objective_gram = gm;
    sdp.objective_free = fr;

    Ok(RatePep { sdp, alpha })
}

/// `⟨gram, Y⟩ + free·values − rhs` for one constraint.
pub fn constraint_violation(c: &SdpConstraint, y: &SymMatrix, free: &[f64]) -> f64 {
    c.gram.dot(y) + crate::numkit::dot(&c.free, free) - c.rhs
}

/// Objective value of a candidate `(Y, values)` pair.
pub fn objective_value(sdp: &SdpProblem, y: &SymMatrix, free: &[f64]) -> f64 {
    sdp.objective_gram.dot(y) + crate::numkit::dot(&sdp.objective_free, free)
}

/// Lifts an actual ADMM trace into the PEP's `(Y, values)` coordinates.
///
/// Requires `A = B = I` (the gallery's normal form): then `λ⁰` and `λ⋆` can
/// be represented as `x† = λ⁰, z† = 0` and `x̄ = λ⋆, z̄ = 0`. The dual
/// witness at `λ^N` provides the `x^{N+1}` column.
pub fn gram_image_of_trace(
    p: &SeparableProblem,
    trace: &AdmmTrace,
    opt: &OptimalPair,
) -> Result<(SymMatrix, Vec<f64>)> {
    let n = trace.iterations();
    let r = p.r_dim();
    let is_identity = |m: &crate::numkit::Mat| {
        m.rows() == m.cols()
            && (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    };
    if !is_identity(&p.a) || !is_identity(&p.b) {
        return Err(Error::invalid("gram_image_of_trace: requires A = B = I"));
    }
    let x_next = match dual_value(p, &trace.lambdas[n])? {
        DualEval::Finite { x_hat, .. } => x_hat,
        DualEval::Unbounded => {
            return Err(Error::Unbounded("dual value at λ^N must be finite".to_string()))
        }
    };
    let zero = vec![0.0; r];
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(2 * n + 6);
    cols.push(trace.lambdas[0].clone()); // x†
    for k in 1..=n {
        cols.push(trace.xs[k - 1].clone());
    }
    cols.push(x_next.clone()); // x^{N+1}
    cols.push(opt.lambda_star.clone()); // x̄
    cols.push(zero.clone()); // z†
    for k in 0..=n {
        cols.push(trace.zs[k].clone());
    }
    cols.push(zero); // z̄
    let y = gram(&cols)?;

    let mut values = Vec::with_capacity(2 * n + 3);
    for k in 1..=n {
        values.push(p.f_value(&trace.xs[k - 1]));
    }
    values.push(p.f_value(&x_next));
    values.push(opt.f_star);
    for k in 1..=n {
        values.push(p.g_value(&trace.zs[k]));
    }
    values.push(opt.g_star);
    Ok((y, values))
}

/// Non-asserting comparison of SDP optima against the conjectured
/// two-modulus rate formulas.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    #[serde(rename = "N")]
    pub n_iters: usize,
    pub t: f64,
    pub c1: f64,
    pub c2: f64,
    pub delta: f64,
    /// SDP optimum of the dual-gap PEP.
    pub dual_gap_sdp: f64,
    /// Conjectured `Δ/(4Nt + 2c1c2/(c1+c2))`.
    pub dual_gap_conjectured: f64,
    /// `sdp − conjectured` (positive would contradict the upper bound).
    pub dual_gap_excess: f64,
    /// `√(SDP optimum)` of the squared-primal-residual PEP.
    pub primal_residual_sdp: f64,
    /// Conjectured `√Δ/(Nt + c1c2/(c1+c2))`.
    pub primal_residual_conjectured: f64,
    pub primal_residual_excess: f64,
    pub dual_gap_status: SolveStatus,
    pub primal_residual_status: SolveStatus,
}

/// Solves the dual-gap and primal-residual PEPs with both moduli active and
/// reports the gaps to the conjectured closed forms. Exploratory output:
/// nothing is asserted here.
pub fn check_conjecture(n_iters: usize, t: f64, c1: f64, c2: f64) -> Result<ConjectureReport> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::invalid("check_conjecture: c1, c2 must be positive"));
    }
    if !(t > 0.0 && t <= c1) {
        return Err(Error::invalid(format!("check_conjecture: requires 0 < t ≤ c1, got t = {t}")));
    }
    if n_iters < 4 {
        return Err(Error::invalid("check_conjecture: requires N ≥ 4"));
    }
    let delta = 1.0;
    let harmonic = c1 * c2 / (c1 + c2);
    let gap_sdp = sdp_solve(
        &build_pep(&PepParams::new(n_iters, t, c1, c2, delta, PepObjective::DualGap))?,
        1e-7,
    )?;
    let pr_sdp = sdp_solve(
        &build_pep(&PepParams::new(n_iters, t, c1, c2, delta, PepObjective::PrimalResidualSq))?,
        1e-7,
    )?;
    let dual_gap_conjectured = delta / (4.0 * n_iters as f64 * t + 2.0 * harmonic);
    let primal_residual_conjectured = delta.sqrt() / (n_iters as f64 * t + harmonic);
    let primal_residual_sdp = pr_sdp.value.max(0.0).sqrt();
    Ok(ConjectureReport {
        n_iters,
        t,
        c1,
        c2,
        delta,
        dual_gap_sdp: gap_sdp.value,
        dual_gap_conjectured,
        dual_gap_excess: gap_sdp.value - dual_gap_conjectured,
        primal_residual_sdp,
        primal_residual_conjectured,
        primal_residual_excess: primal_residual_sdp - primal_residual_conjectured,
        dual_gap_status: gap_sdp.status,
        primal_residual_status: pr_sdp.status,
    })
}

#[cfg(test)]
mod tests;
