//! Dense symmetric linear algebra: eigenvalues, PSD tests, Gram matrices,
//! linear solves.
//!
//! Everything here is sized for desk-scale verification work (matrices up to
//! 512×512, usually far smaller). The eigenvalue routine is a cyclic Jacobi
//! iteration: deterministic, dependency-free, and accurate enough that
//! `‖M − QΛQᵀ‖_F ≤ 1e−10·(1+‖M‖_F)` holds with a wide margin.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 512;

/// Dense symmetric matrix. Writes through [`SymMatrix::set`] mirror the entry
/// so `get(i, j) == get(j, i)` holds exactly at all times.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("symmetric matrix dimension must be at least 1"));
        }
        Ok(SymMatrix { n, a: vec![0.0; n * n] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        Ok(m)
    }

    /// Builds from full rows; the rows must be exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has length {} in a {n}-dimensional symmetric matrix",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.a[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if m.a[i * n + j] != m.a[j * n + i] {
                    return Err(Error::invalid(format!(
                        "entries ({i},{j}) and ({j},{i}) differ: {} vs {}",
                        m.a[i * n + j],
                        m.a[j * n + i]
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Sets entry (i, j) and its mirror (j, i).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    /// Adds `coeff · (p qᵀ + q pᵀ)/2` in place.
    pub fn add_sym_outer(&mut self, coeff: f64, p: &[f64], q: &[f64]) {
        debug_assert_eq!(p.len(), self.n);
        debug_assert_eq!(q.len(), self.n);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.a[i * n + j] += 0.5 * coeff * (p[i] * q[j] + q[i] * p[j]);
            }
        }
    }

    /// Adds `coeff · p pᵀ` in place.
    pub fn add_outer(&mut self, coeff: f64, p: &[f64]) {
        debug_assert_eq!(p.len(), self.n);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.a[i * n + j] += coeff * p[i] * p[j];
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.a {
            *v *= s;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `⟨A, B⟩ = Σ aᵢⱼ bᵢⱼ`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    /// Quadratic form `pᵀ M p`.
    pub fn quad_form(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.n);
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += self.a[i * n + j] * p[j];
            }
            acc += p[i] * row;
        }
        acc
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.a[i * n + j] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|v| v.is_finite())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Attempted Cholesky factorization; returns the lower factor (row major)
    /// or `None` when a pivot is not strictly positive.
    pub fn cholesky(&self) -> Option<Vec<f64>> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.a[i * n + j];
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
}

/// Outcome of a PSD test: `is_psd ⇔ min_eigenvalue ≥ −tolerance_used`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub is_psd: bool,
    pub tolerance_used: f64,
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
pub fn eig_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    check_eig_input(m)?;
    let mut a = m.a.clone();
    jacobi(&mut a, m.n, None);
    let mut vals: Vec<f64> = (0..m.n).map(|i| a[i * m.n + i]).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(vals)
}

/// Eigenvalues (ascending) together with the orthogonal matrix of
/// eigenvectors, returned as one column per eigenvalue.
pub fn eig_sym_with_vectors(m: &SymMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    check_eig_input(m)?;
    let n = m.n;
    let mut a = m.a.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    jacobi(&mut a, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let vals = order.iter().map(|&i| a[i * n + i]).collect();
    let vecs = order
        .iter()
        .map(|&c| (0..n).map(|r| v[r * n + c]).collect())
        .collect();
    Ok((vals, vecs))
}

fn check_eig_input(m: &SymMatrix) -> Result<()> {
    if m.n > MAX_DIM {
        return Err(Error::invalid(format!(
            "dimension {} exceeds the supported maximum {MAX_DIM}",
            m.n
        )));
    }
    if !m.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    Ok(())
}

/// Cyclic Jacobi rotations in place. `a` holds the matrix row major; on exit
/// its diagonal carries the eigenvalues. `v`, when given, must start as the
/// identity and accumulates the rotations (columns become eigenvectors).
fn jacobi(a: &mut [f64], n: usize, mut v: Option<&mut [f64]>) {
    if n == 1 {
        return;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = 1e-15 * (1.0 + frob);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if let Some(vv) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = vv[k * n + p];
                        let vkq = vv[k * n + q];
                        vv[k * n + p] = c * vkp - s * vkq;
                        vv[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
}

/// Default PSD slack: certificate matrices are exactly singular at parameter
/// endpoints, so a relative margin on the smallest eigenvalue is required.
pub fn default_psd_tol(m: &SymMatrix) -> f64 {
    1e-8 * (1.0 + m.frobenius_norm())
}

/// PSD test via the smallest eigenvalue.
pub fn psd_check(m: &SymMatrix, tol: f64) -> Result<PsdReport> {
    if !m.is_finite() {
        return Err(Error::invalid("psd_check: matrix has non-finite entries"));
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("psd_check: tolerance must be nonnegative"));
    }
    let vals = eig_sym(m)?;
    let min_eigenvalue = vals[0];
    Ok(PsdReport {
        min_eigenvalue,
        is_psd: min_eigenvalue >= -tol,
        tolerance_used: tol,
    })
}

/// Gram matrix of a list of equal-length vectors: `out(i,j) = ⟨vᵢ, vⱼ⟩`.
pub fn gram(columns: &[Vec<f64>]) -> Result<SymMatrix> {
    if columns.is_empty() {
        return Err(Error::invalid("gram: empty column list"));
    }
    let len = columns[0].len();
    for (i, c) in columns.iter().enumerate() {
        if c.len() != len {
            return Err(Error::invalid(format!(
                "gram: column {i} has length {} but column 0 has length {len}",
                c.len()
            )));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("gram: column {i} has non-finite entries")));
        }
    }
    let n = columns.len();
    let mut m = SymMatrix::zeros(n)?;
    for i in 0..n {
        for j in i..n {
            let v = columns[i].iter().zip(&columns[j]).map(|(x, y)| x * y).sum();
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Dense rectangular matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    r: usize,
    c: usize,
    a: Vec<f64>,
}

impl Mat {
    pub fn zeros(r: usize, c: usize) -> Self {
        Mat { r, c, a: vec![0.0; r * c] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn scalar(v: f64) -> Self {
        Mat { r: 1, c: 1, a: vec![v] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("matrix must have at least one row"));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::invalid("matrix must have at least one column"));
        }
        let mut a = Vec::with_capacity(rows.len() * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::invalid(format!("row {i} has inconsistent length")));
            }
            a.extend_from_slice(row);
        }
        Ok(Mat { r: rows.len(), c, a })
    }

    pub fn rows(&self) -> usize {
        self.r
    }

    pub fn cols(&self) -> usize {
        self.c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.c + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.c + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.r)
            .map(|i| self.a[i * self.c..(i + 1) * self.c].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&v| v == 0.0)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.c);
        let mut y = vec![0.0; self.r];
        for i in 0..self.r {
            let mut acc = 0.0;
            for j in 0..self.c {
                acc += self.a[i * self.c + j] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// `Aᵀ x`.
    pub fn t_matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.r);
        let mut y = vec![0.0; self.c];
        for i in 0..self.r {
            let xi = x[i];
            for j in 0..self.c {
                y[j] += self.a[i * self.c + j] * xi;
            }
        }
        y
    }

    /// `AᵀA` as a symmetric matrix.
    pub fn gram_self(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.c).expect("column count is positive");
        for j in 0..self.c {
            for k in j..self.c {
                let mut acc = 0.0;
                for i in 0..self.r {
                    acc += self.a[i * self.c + j] * self.a[i * self.c + k];
                }
                m.set(j, k, acc);
            }
        }
        m
    }

    /// `AᵀB` as a general matrix.
    pub fn t_mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.r, other.r);
        let mut out = Mat::zeros(self.c, other.c);
        for i in 0..self.r {
            for j in 0..self.c {
                let aij = self.a[i * self.c + j];
                for k in 0..other.c {
                    out.a[j * other.c + k] += aij * other.a[i * other.c + k];
                }
            }
        }
        out
    }
}

/// Solves the square system `A x = b` by LU with partial pivoting.
pub fn solve_lu(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() != a.cols() {
        return Err(Error::invalid("solve_lu: matrix must be square"));
    }
    let n = a.rows();
    if b.len() != n {
        return Err(Error::invalid("solve_lu: right-hand side length mismatch"));
    }
    let mut lu = a.a.clone();
    let mut x = b.to_vec();
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = lu[piv[k] * n + k].abs();
        for i in (k + 1)..n {
            let v = lu[piv[i] * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return Err(Error::invalid("solve_lu: singular matrix"));
        }
        piv.swap(k, p);
        let pk = piv[k];
        for i in (k + 1)..n {
            let pi = piv[i];
            let f = lu[pi * n + k] / lu[pk * n + k];
            lu[pi * n + k] = f;
            for j in (k + 1)..n {
                lu[pi * n + j] -= f * lu[pk * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = x[piv[i]];
        for j in 0..i {
            s -= lu[piv[i] * n + j] * y[j];
        }
        y[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in (i + 1)..n {
            s -= lu[piv[i] * n + j] * x[j];
        }
        x[i] = s / lu[piv[i] * n + i];
    }
    Ok(x)
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones_psd_tol() -> f64 {
        1e-10
    }

    #[test]
    fn eig_identity() {
        let m = SymMatrix::identity(3).unwrap();
        let vals = eig_sym(&m).unwrap();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eig_diagonal() {
        let mut m = SymMatrix::zeros(2).unwrap();
        m.set(0, 0, -2.0);
        m.set(1, 1, 5.0);
        let vals = eig_sym(&m).unwrap();
        assert_eq!(vals, vec![-2.0, 5.0]);
    }

    #[test]
    fn eig_offdiagonal_pair() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let vals = eig_sym(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_dimension_zero() {
        assert!(SymMatrix::zeros(0).is_err());
    }

    #[test]
    fn eig_reconstruction_and_trace() {
        let mut rng = crate::synth::SeededRng::new(7);
        for _ in 0..20 {
            let n = 1 + (rng.next_u64() % 12) as usize;
            let mut m = SymMatrix::zeros(n).unwrap();
            for i in 0..n {
                for j in i..n {
                    m.set(i, j, rng.next_f64() * 4.0 - 2.0);
                }
            }
            let (vals, vecs) = eig_sym_with_vectors(&m).unwrap();
            // reconstruction ‖M − QΛQᵀ‖_F
            let mut err = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    let mut r = 0.0;
                    for k in 0..n {
                        r += vecs[k][i] * vals[k] * vecs[k][j];
                    }
                    err += (m.get(i, j) - r).powi(2);
                }
            }
            let frob = m.frobenius_norm();
            assert!(err.sqrt() <= 1e-10 * (1.0 + frob), "reconstruction error too large");
            let sum: f64 = vals.iter().sum();
            assert!(
                (sum - m.trace()).abs() <= 1e-10 * (1.0 + m.trace().abs()),
                "eigenvalue sum {} vs trace {}",
                sum,
                m.trace()
            );
        }
    }

    #[test]
    fn psd_check_zero_matrix() {
        let m = SymMatrix::zeros(3).unwrap();
        let rep = psd_check(&m, 1e-8).unwrap();
        assert!(rep.is_psd);
        assert_eq!(rep.min_eigenvalue, 0.0);
    }

    #[test]
    fn psd_check_small_negative() {
        let mut m = SymMatrix::zeros(2).unwrap();
        m.set(0, 0, 1.0);
        m.set(1, 1, -1e-3);
        let rep = psd_check(&m, 1e-8).unwrap();
        assert!(!rep.is_psd);
    }

    #[test]
    fn psd_check_rejects_nan() {
        let mut m = SymMatrix::zeros(2).unwrap();
        m.set(0, 1, f64::NAN);
        assert!(psd_check(&m, 1e-8).is_err());
    }

    #[test]
    fn gram_examples() {
        let id = gram(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(id, SymMatrix::identity(2).unwrap());

        let one = gram(&[vec![1.0, 1.0]]).unwrap();
        assert_eq!(one.get(0, 0), 2.0);

        let rank_deficient = gram(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(rank_deficient.rows(), vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let rep = psd_check(&rank_deficient, ones_psd_tol()).unwrap();
        assert!(rep.min_eigenvalue.abs() < 1e-12);
        assert!(gram(&[]).is_err());
    }

    #[test]
    fn gram_output_is_psd() {
        let mut rng = crate::synth::SeededRng::new(11);
        for _ in 0..50 {
            let cols = 1 + (rng.next_u64() % 6) as usize;
            let len = 1 + (rng.next_u64() % 6) as usize;
            let columns: Vec<Vec<f64>> = (0..cols)
                .map(|_| (0..len).map(|_| rng.next_f64() * 2.0 - 1.0).collect())
                .collect();
            let g = gram(&columns).unwrap();
            let rep = psd_check(&g, 1e-10).unwrap();
            assert!(rep.is_psd);
        }
    }

    /// Pivoted Cholesky used purely as an independent oracle for psd_check.
    fn pivoted_cholesky_succeeds(m: &SymMatrix, tol: f64) -> bool {
        let n = m.dim();
        let mut a = m.rows();
        let scale = 1.0 + (0..n).map(|i| a[i][i].abs()).fold(0.0, f64::max);
        for k in 0..n {
            let mut p = k;
            for i in (k + 1)..n {
                if a[i][i] > a[p][p] {
                    p = i;
                }
            }
            a.swap(k, p);
            for row in a.iter_mut() {
                row.swap(k, p);
            }
            let piv = a[k][k];
            if piv <= tol * scale {
                // remaining block must be negligible
                return (k..n).all(|i| (k..n).all(|j| a[i][j].abs() <= 1e-7 * scale));
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    a[i][j] -= a[i][k] * a[k][j] / piv;
                }
            }
        }
        true
    }

    #[test]
    fn psd_check_agrees_with_pivoted_cholesky() {
        let mut rng = crate::synth::SeededRng::new(23);
        for _ in 0..100 {
            let n = 1 + (rng.next_u64() % 8) as usize;
            // random PSD: Gram of random columns, occasionally rank-deficient
            let cols = 1 + (rng.next_u64() % (n as u64 + 1)) as usize;
            let columns: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..cols).map(|_| rng.next_f64() * 2.0 - 1.0).collect())
                .collect();
            let g = gram(&columns).unwrap();
            let rep = psd_check(&g, default_psd_tol(&g)).unwrap();
            assert!(pivoted_cholesky_succeeds(&g, 1e-12), "oracle rejected a Gram matrix");
            assert!(rep.is_psd, "psd_check rejected a Gram matrix");
        }
    }

    #[test]
    fn lu_solves_random_systems() {
        let mut rng = crate::synth::SeededRng::new(5);
        for _ in 0..20 {
            let n = 1 + (rng.next_u64() % 6) as usize;
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| rng.next_f64() * 2.0 - 1.0 + if i == j { 3.0 } else { 0.0 })
                        .collect()
                })
                .collect();
            let a = Mat::from_rows(&rows).unwrap();
            let xtrue: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let b = a.matvec(&xtrue);
            let x = solve_lu(&a, &b).unwrap();
            for (u, v) in x.iter().zip(&xtrue) {
                assert!((u - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_roundtrip() {
        let m = SymMatrix::from_rows(&[
            vec![4.0, 2.0, 0.4],
            vec![2.0, 5.0, 1.0],
            vec![0.4, 1.0, 3.0],
        ])
        .unwrap();
        let l = m.cholesky().unwrap();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += l[i * n + k] * l[j * n + k];
                }
                assert!((s - m.get(i, j)).abs() < 1e-12);
            }
        }
        let mut indef = m.clone();
        indef.set(0, 0, -1.0);
        assert!(indef.cholesky().is_none());
    }
}
