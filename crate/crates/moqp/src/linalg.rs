//! Dense symmetric matrix arithmetic, spectral decomposition, and the three
//! projections (PSD cone, nonnegative orthant, affine subspace) the splitting
//! solver composes.
//!
//! Everything here targets small orders (the largest lifted matrix in the
//! bundled fixtures is 11x11), so storage is a plain dense `Vec<f64>` and the
//! eigensolver is a cyclic Jacobi sweep, which is unconditionally robust for
//! real symmetric matrices at these sizes.

use crate::error::{Error, Result};

/// Relative off-diagonal tolerance for the Jacobi eigensolver.
const JACOBI_TOL: f64 = 1e-12;

/// A real symmetric matrix with dense storage.
///
/// Constructors symmetrize their input via `(S + S^T) / 2` and record the
/// largest absolute asymmetry seen, so callers can surface a warning when a
/// nominally symmetric data set is not.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
    asymmetry: f64,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        SymMatrix {
            order,
            data: vec![0.0; order * order],
            asymmetry: 0.0,
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.data[i * order + i] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = v;
        }
        m
    }

    /// Rank-1 outer product `v v^T`.
    pub fn outer(v: &[f64]) -> Self {
        let d = v.len();
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.data[i * d + j] = v[i] * v[j];
            }
        }
        m
    }

    /// Builds from nested rows, symmetrizing and recording the asymmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Input("matrix must have at least one row".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Input(format!(
                    "row {i}: expected {d} entries, found {}",
                    row.len()
                )));
            }
        }
        let mut data = vec![0.0; d * d];
        let mut asym: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                asym = asym.max((rows[i][j] - rows[j][i]).abs());
                data[i * d + j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        Ok(SymMatrix {
            order: d,
            data,
            asymmetry: asym,
        })
    }

    /// Builds from a flat row-major buffer of length `order * order`.
    pub fn from_flat(order: usize, data: &[f64]) -> Result<Self> {
        if order == 0 || data.len() != order * order {
            return Err(Error::Input(format!(
                "expected {}x{} entries, found {}",
                order,
                order,
                data.len()
            )));
        }
        let mut out = vec![0.0; order * order];
        let mut asym: f64 = 0.0;
        for i in 0..order {
            for j in 0..order {
                let a = data[i * order + j];
                let b = data[j * order + i];
                asym = asym.max((a - b).abs());
                out[i * order + j] = 0.5 * (a + b);
            }
        }
        Ok(SymMatrix {
            order,
            data: out,
            asymmetry: asym,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Largest `|S_ij - S_ji|` observed when this matrix was constructed.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.order + j] = v;
        self.data[j * self.order + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| self.data[i * self.order..(i + 1) * self.order].to_vec())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Trace inner product `A . B = trace(A B)`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.order, other.order);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `self += alpha * other`, entrywise.
    pub fn add_scaled(&mut self, alpha: f64, other: &SymMatrix) {
        debug_assert_eq!(self.order, other.order);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn scaled(&self, alpha: f64) -> SymMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= alpha;
        }
        out.asymmetry = 0.0;
        out
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        debug_assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out.asymmetry = 0.0;
        out
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.order, other.order);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues and an
/// orthonormal set of column eigenvectors satisfying `S = V diag(w) V^T`.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    order: usize,
    eigenvalues: Vec<f64>,
    /// Row-major `order x order`; column `j` is the eigenvector for
    /// `eigenvalues[j]`.
    vectors: Vec<f64>,
}

impl SpectralDecomp {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.order)
            .map(|i| self.vectors[i * self.order + j])
            .collect()
    }

    /// `V diag(f(w)) V^T` for a per-eigenvalue map `f`.
    pub fn reconstruct_mapped<F: Fn(f64) -> f64>(&self, f: F) -> SymMatrix {
        let d = self.order;
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&w| f(w)).collect();
        let mut out = SymMatrix::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += mapped[k] * self.vectors[i * d + k] * self.vectors[j * d + k];
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_mapped(|w| w)
    }

    /// Max-abs deviation of `V^T V` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.order;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in a..d {
                let mut s = 0.0;
                for i in 0..d {
                    s += self.vectors[i * d + a] * self.vectors[i * d + b];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

/// Eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `1e-12 * (1 + ||S||_F)`, with a hard cap of `100 * d^2` sweeps.
pub fn sym_eig(s: &SymMatrix) -> Result<SpectralDecomp> {
    if !s.is_finite() {
        return Err(Error::Input("matrix has a non-finite entry".into()));
    }
    let d = s.order;
    let mut a = s.data.clone();
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }

    let threshold = JACOBI_TOL * (1.0 + s.frob_norm());
    let max_sweeps = 100 * d * d;
    let mut converged = d < 2;

    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let mut off = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                off += 2.0 * a[i * d + j] * a[i * d + j];
            }
        }
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..d - 1 {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                let theta = 0.5 * (aqq - app) / apq;
                // Stable tangent of the rotation angle.
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;

                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - sn * akq;
                    a[k * d + q] = sn * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - sn * aqk;
                    a[q * d + k] = sn * apk + c * aqk;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - sn * vkq;
                    v[k * d + q] = sn * vkp + c * vkq;
                }
            }
        }
    }

    if !converged {
        return Err(Error::Convergence(format!(
            "Jacobi eigensolver did not reach tolerance in {max_sweeps} sweeps"
        )));
    }

    // Sort ascending, permuting the eigenvector columns along.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[i * d + i].partial_cmp(&a[j * d + j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k * d + k]).collect();
    let mut vectors = vec![0.0; d * d];
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..d {
            vectors[i * d + new_col] = v[i * d + old_col];
        }
    }

    Ok(SpectralDecomp {
        order: d,
        eigenvalues,
        vectors,
    })
}

/// Frobenius-nearest positive semidefinite matrix: eigenvalues clamped at 0.
pub fn project_psd(s: &SymMatrix) -> Result<SymMatrix> {
    let dec = sym_eig(s)?;
    Ok(dec.reconstruct_mapped(|w| w.max(0.0)))
}

/// Entrywise `max(S, 0)`.
pub fn project_nonneg(s: &SymMatrix) -> SymMatrix {
    let mut out = s.clone();
    for v in &mut out.data {
        *v = v.max(0.0);
    }
    out
}

/// Smallest eigenvalue of `S`.
pub fn min_eigenvalue(s: &SymMatrix) -> Result<f64> {
    Ok(sym_eig(s)?.eigenvalues[0])
}

/// Dense Cholesky factor of a symmetric positive definite system, kept as the
/// lower triangle.
#[derive(Debug, Clone)]
pub struct CholFactor {
    n: usize,
    l: Vec<f64>,
}

impl CholFactor {
    /// Factorizes `g` (row-major `n x n`). On a non-positive pivot, returns
    /// the index of the failing row.
    pub fn new(g: &[f64], n: usize) -> std::result::Result<Self, usize> {
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = g[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(i);
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(CholFactor { n, l })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        debug_assert_eq!(rhs.len(), n);
        let mut y = rhs.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l[i * n + k] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                y[i] -= self.l[k * n + i] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }
}

/// A set of trace-form equality constraints `B_k . Y = beta_k` over symmetric
/// matrices of one shared order, with the Gram matrix `G_kl = B_k . B_l`
/// factorized once so projections are cheap.
#[derive(Debug, Clone)]
pub struct AffineConstraintSet {
    order: usize,
    mats: Vec<SymMatrix>,
    rhs: Vec<f64>,
    gram_factor: CholFactor,
}

impl AffineConstraintSet {
    pub fn new(constraints: Vec<(SymMatrix, f64)>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::Input("constraint set must be nonempty".into()));
        }
        let order = constraints[0].0.order();
        for (k, (b, _)) in constraints.iter().enumerate() {
            if b.order() != order {
                return Err(Error::Input(format!(
                    "constraint {k} has order {} but constraint 0 has order {order}",
                    b.order()
                )));
            }
        }
        let k = constraints.len();
        let mut gram = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                gram[i * k + j] = constraints[i].0.dot(&constraints[j].0);
            }
        }
        // Lifted constraints built from nearly parallel rows of A make the
        // Gram matrix nearly singular; a tiny trace-scaled ridge keeps the
        // factorization alive without visibly moving the projection.
        let trace: f64 = (0..k).map(|i| gram[i * k + i]).sum();
        let reg = 1e-12 * trace / k as f64;
        for i in 0..k {
            gram[i * k + i] += reg;
        }
        let gram_factor = CholFactor::new(&gram, k).map_err(|pivot| Error::RankDeficient {
            indices: vec![pivot],
        })?;
        let (mats, rhs) = constraints.into_iter().unzip();
        Ok(AffineConstraintSet {
            order,
            mats,
            rhs,
            gram_factor,
        })
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrices(&self) -> &[SymMatrix] {
        &self.mats
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Largest `|B_k . Y - beta_k|` over the set.
    pub fn residual(&self, y: &SymMatrix) -> f64 {
        self.mats
            .iter()
            .zip(&self.rhs)
            .map(|(b, &beta)| (b.dot(y) - beta).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius-nearest matrix satisfying every constraint:
    /// `Y = V - sum_k mu_k B_k` with `G mu = (B . V - beta)`.
    pub fn project(&self, v: &SymMatrix) -> Result<SymMatrix> {
        if v.order() != self.order {
            return Err(Error::Input(format!(
                "matrix order {} does not match constraint order {}",
                v.order(),
                self.order
            )));
        }
        let r: Vec<f64> = self
            .mats
            .iter()
            .zip(&self.rhs)
            .map(|(b, &beta)| b.dot(v) - beta)
            .collect();
        let mu = self.gram_factor.solve(&r);
        let mut out = v.clone();
        for (m, b) in mu.iter().zip(&self.mats) {
            out.add_scaled(-m, b);
        }
        Ok(out)
    }
}

/// `A x` for a rectangular row-list matrix.
pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

/// `A^T y`.
pub fn mat_t_vec(a: &[Vec<f64>], y: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (row, &yi) in a.iter().zip(y) {
        for (o, &r) in out.iter_mut().zip(row) {
            *o += yi * r;
        }
    }
    out
}

/// `A A^T` as a symmetric matrix (rows of `A` against rows of `A`).
pub fn row_gram(a: &[Vec<f64>]) -> SymMatrix {
    let m = a.len();
    let mut g = SymMatrix::zeros(m.max(1));
    for i in 0..m {
        for j in i..m {
            let s: f64 = a[i].iter().zip(&a[j]).map(|(x, y)| x * y).sum();
            g.set(i, j, s);
        }
    }
    g
}

/// `A^T A` as a symmetric matrix of order `n`.
pub fn col_gram(a: &[Vec<f64>], n: usize) -> SymMatrix {
    let mut g = SymMatrix::zeros(n);
    for row in a {
        for i in 0..n {
            for j in i..n {
                let v = g.get(i, j) + row[i] * row[j];
                g.set(i, j, v);
            }
        }
    }
    g
}

/// Minimum-norm solution of `A x = b` through the eigendecomposition of
/// `A A^T`, tolerating rank-deficient `A`. Returns an error when the system
/// is inconsistent.
pub fn least_norm_solution(a: &[Vec<f64>], b: &[f64], n: usize) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(vec![0.0; n]);
    }
    let gram = row_gram(a);
    let dec = sym_eig(&gram)?;
    let wmax = dec
        .eigenvalues()
        .iter()
        .cloned()
        .fold(0.0f64, |acc, w| acc.max(w.abs()));
    let cut = 1e-12 * (1.0 + wmax);
    let m = a.len();
    // mu = pinv(A A^T) b
    let mut mu = vec![0.0; m];
    for j in 0..m {
        let w = dec.eigenvalues()[j];
        if w <= cut {
            continue;
        }
        let col = dec.eigenvector(j);
        let proj: f64 = col.iter().zip(b).map(|(v, bi)| v * bi).sum();
        for (mu_i, &v) in mu.iter_mut().zip(&col) {
            *mu_i += proj / w * v;
        }
    }
    let x = mat_t_vec(a, &mu, n);
    let ax = mat_vec(a, &x);
    let bnorm = b.iter().cloned().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let res = ax
        .iter()
        .zip(b)
        .map(|(l, r)| (l - r).abs())
        .fold(0.0, f64::max);
    if res > 1e-8 * (1.0 + bnorm) {
        return Err(Error::Infeasible(format!(
            "Ax = b has no solution (best residual {res:.3e})"
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent eigensolver for cross-checks: classical Jacobi, which
    /// pivots on the single largest off-diagonal entry instead of sweeping
    /// cyclically. Only used as a test oracle.
    fn classical_jacobi(s: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
        let d = s.order();
        let mut a: Vec<f64> = (0..d * d).map(|k| s.get(k / d, k % d)).collect();
        let mut v = vec![0.0; d * d];
        for i in 0..d {
            v[i * d + i] = 1.0;
        }
        for _ in 0..20_000 {
            let (mut p, mut q, mut big) = (0, 0, 0.0f64);
            for i in 0..d {
                for j in (i + 1)..d {
                    if a[i * d + j].abs() > big {
                        big = a[i * d + j].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if big < 1e-14 {
                break;
            }
            let theta = 0.5 * (a[q * d + q] - a[p * d + p]) / a[p * d + q];
            let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let sn = t * c;
            for k in 0..d {
                let akp = a[k * d + p];
                let akq = a[k * d + q];
                a[k * d + p] = c * akp - sn * akq;
                a[k * d + q] = sn * akp + c * akq;
            }
            for k in 0..d {
                let apk = a[p * d + k];
                let aqk = a[q * d + k];
                a[p * d + k] = c * apk - sn * aqk;
                a[q * d + k] = sn * apk + c * aqk;
            }
            for k in 0..d {
                let vkp = v[k * d + p];
                let vkq = v[k * d + q];
                v[k * d + p] = c * vkp - sn * vkq;
                v[k * d + q] = sn * vkp + c * vkq;
            }
        }
        let vals: Vec<f64> = (0..d).map(|i| a[i * d + i]).collect();
        (vals, v)
    }

    /// Deterministic pseudo-random symmetric matrix for seeding tests.
    pub(crate) fn seeded_sym(order: usize, seed: u64) -> SymMatrix {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        let mut m = SymMatrix::zeros(order);
        for i in 0..order {
            for j in i..order {
                m.set(i, j, next());
            }
        }
        m
    }

    #[test]
    fn identity_eigenvalues_are_ones() {
        let dec = sym_eig(&SymMatrix::identity(3)).unwrap();
        for &w in dec.eigenvalues() {
            assert_abs_diff_eq!(w, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn diagonal_eigenvalues_sorted_ascending() {
        let dec = sym_eig(&SymMatrix::diag(&[2.0, -2.0])).unwrap();
        assert_abs_diff_eq!(dec.eigenvalues()[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.eigenvalues()[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn eig_reconstruction_and_orthonormality() {
        for seed in 0..20 {
            let s = seeded_sym(5, seed);
            let dec = sym_eig(&s).unwrap();
            let rebuilt = dec.reconstruct();
            let gap = rebuilt.sub(&s).frob_norm();
            assert!(
                gap <= 1e-10 * (1.0 + s.frob_norm()),
                "seed {seed}: reconstruction gap {gap:e}"
            );
            assert!(dec.orthonormality_defect() <= 1e-10);
            for w in dec.eigenvalues().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn eig_rejects_non_finite() {
        let mut s = SymMatrix::zeros(2);
        s.set(0, 1, f64::NAN);
        assert!(matches!(sym_eig(&s), Err(Error::Input(_))));
    }

    #[test]
    fn psd_projection_fixes_psd_input() {
        let p = {
            let b = seeded_sym(4, 9);
            let dec = sym_eig(&b).unwrap();
            dec.reconstruct_mapped(|w| w.abs())
        };
        let q = project_psd(&p).unwrap();
        assert!(q.sub(&p).frob_norm() <= 1e-10 * (1.0 + p.frob_norm()));
    }

    #[test]
    fn psd_projection_clamps_diag() {
        let s = SymMatrix::diag(&[1.0, -1.0]);
        let p = project_psd(&s).unwrap();
        assert_abs_diff_eq!(p.get(0, 0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.get(1, 1), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.get(0, 1), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn psd_projection_matches_independent_jacobi_oracle() {
        // Oracle route: classical (pivot-based) Jacobi, clamp, reconstruct.
        for seed in [7u64, 21, 98] {
            let s = seeded_sym(3, seed);
            let got = project_psd(&s).unwrap();

            let (vals, v) = classical_jacobi(&s);
            let d = 3;
            let mut want = SymMatrix::zeros(d);
            for i in 0..d {
                for j in i..d {
                    let mut acc = 0.0;
                    for k in 0..d {
                        acc += vals[k].max(0.0) * v[i * d + k] * v[j * d + k];
                    }
                    want.set(i, j, acc);
                }
            }
            assert!(
                got.max_abs_diff(&want) <= 1e-10,
                "seed {seed}: projections disagree by {:e}",
                got.max_abs_diff(&want)
            );
        }
    }

    #[test]
    fn nonneg_projection_clamps() {
        let s = SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let p = project_nonneg(&s);
        assert_eq!(p.get(0, 0), 1.0);
        assert_eq!(p.get(0, 1), 0.0);
        assert_eq!(p.get(1, 1), 1.0);
    }

    #[test]
    fn min_eigenvalue_cases() {
        assert_abs_diff_eq!(
            min_eigenvalue(&SymMatrix::identity(4)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            min_eigenvalue(&SymMatrix::diag(&[2.0, -2.0])).unwrap(),
            -2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn affine_projection_single_corner_constraint() {
        let mut b0 = SymMatrix::zeros(3);
        b0.set(0, 0, 1.0);
        let cs = AffineConstraintSet::new(vec![(b0, 1.0)]).unwrap();
        let v = SymMatrix::zeros(3);
        let y = cs.project(&v).unwrap();
        assert_abs_diff_eq!(y.get(0, 0), 1.0, epsilon = 1e-9);
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) != (0, 0) {
                    assert_abs_diff_eq!(y.get(i, j), 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn affine_projection_is_idempotent_and_feasible() {
        let cs = example_51_constraints();
        let v = seeded_sym(3, 3);
        let y = cs.project(&v).unwrap();
        assert!(cs.residual(&y) <= 1e-9 * 2.0);
        let y2 = cs.project(&y).unwrap();
        assert!(y2.max_abs_diff(&y) <= 1e-9);
    }

    #[test]
    fn affine_projection_fixed_point_for_feasible_input() {
        let cs = example_51_constraints();
        let feasible = {
            // lift of x = (0.25, 0.75)
            let x = [1.0, 0.25, 0.75];
            SymMatrix::outer(&x)
        };
        let y = cs.project(&feasible).unwrap();
        assert!(y.max_abs_diff(&feasible) <= 1e-10);
    }

    /// The three lifted constraints of the two-variable fixture with
    /// A = [1 1], b = 1.
    fn example_51_constraints() -> AffineConstraintSet {
        let mut b0 = SymMatrix::zeros(3);
        b0.set(0, 0, 1.0);
        let mut b1 = SymMatrix::zeros(3);
        b1.set(0, 1, 0.5);
        b1.set(0, 2, 0.5);
        let mut b2 = SymMatrix::zeros(3);
        b2.set(1, 1, 1.0);
        b2.set(2, 2, 1.0);
        b2.set(1, 2, 1.0);
        AffineConstraintSet::new(vec![(b0, 1.0), (b1, 1.0), (b2, 1.0)]).unwrap()
    }

    #[test]
    fn affine_projection_matches_normal_equations_oracle() {
        // Oracle route: assemble the Gram system explicitly and solve it by
        // Gaussian elimination with partial pivoting, then subtract.
        let cs = example_51_constraints();
        let mut ones = SymMatrix::zeros(3);
        for i in 0..3 {
            for j in i..3 {
                ones.set(i, j, 1.0);
            }
        }
        let got = cs.project(&ones).unwrap();

        let k = cs.len();
        let mats = cs.matrices();
        let mut g = vec![vec![0.0; k + 1]; k];
        for i in 0..k {
            for j in 0..k {
                g[i][j] = mats[i].dot(&mats[j]);
            }
            g[i][k] = mats[i].dot(&ones) - cs.rhs()[i];
        }
        for col in 0..k {
            let piv = (col..k)
                .max_by(|&a, &b| g[a][col].abs().partial_cmp(&g[b][col].abs()).unwrap())
                .unwrap();
            g.swap(col, piv);
            for row in 0..k {
                if row == col {
                    continue;
                }
                let f = g[row][col] / g[col][col];
                for c in col..=k {
                    g[row][c] -= f * g[col][c];
                }
            }
        }
        let mu: Vec<f64> = (0..k).map(|i| g[i][k] / g[i][i]).collect();
        let mut want = ones.clone();
        for (m, b) in mu.iter().zip(mats) {
            want.add_scaled(-m, b);
        }

        assert!(
            got.max_abs_diff(&want) <= 1e-8,
            "projection disagrees with normal-equations oracle by {:e}",
            got.max_abs_diff(&want)
        );
        assert!(cs.residual(&got) <= 1e-9 * 2.0);
    }

    #[test]
    fn affine_projection_residual_lies_in_constraint_span() {
        let cs = example_51_constraints();
        let v = seeded_sym(3, 11);
        let y = cs.project(&v).unwrap();
        let resid = v.sub(&y);
        // V - Y lies in span{B_k}, so it must be orthogonal to any matrix
        // that is orthogonal to every B_k.
        let mut probe = SymMatrix::zeros(3);
        probe.set(0, 1, 0.5);
        probe.set(0, 2, -0.5);
        for b in cs.matrices() {
            assert!(probe.dot(b).abs() <= 1e-12);
        }
        assert!(resid.dot(&probe).abs() <= 1e-9);
    }

    #[test]
    fn duplicate_constraints_are_rank_deficient() {
        let mut b = SymMatrix::zeros(2);
        b.set(0, 0, 1.0);
        let err = AffineConstraintSet::new(vec![(b.clone(), 1.0), (b, 2.0)]).unwrap_err();
        match err {
            Error::RankDeficient { indices } => assert_eq!(indices, vec![1]),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn gram_solve_residual_is_small() {
        let cs = example_51_constraints();
        let k = cs.len();
        let mut g = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                g[i * k + j] = cs.matrices()[i].dot(&cs.matrices()[j]);
            }
        }
        let rhs = vec![1.0, -2.0, 0.5];
        let factor = CholFactor::new(
            &{
                let tr: f64 = (0..k).map(|i| g[i * k + i]).sum();
                let mut gr = g.clone();
                for i in 0..k {
                    gr[i * k + i] += 1e-12 * tr / k as f64;
                }
                gr
            },
            k,
        )
        .unwrap();
        let mu = factor.solve(&rhs);
        for i in 0..k {
            let mut back = 0.0;
            for j in 0..k {
                back += g[i * k + j] * mu[j];
            }
            assert!((back - rhs[i]).abs() <= 1e-10 * (1.0 + rhs[i].abs()));
        }
    }

    #[test]
    fn least_norm_solution_solves_and_detects_inconsistency() {
        let a = vec![vec![1.0, 1.0]];
        let x = least_norm_solution(&a, &[1.0], 2).unwrap();
        assert_abs_diff_eq!(x[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(x[1], 0.5, epsilon = 1e-10);

        let bad = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(matches!(
            least_norm_solution(&bad, &[1.0, 2.0], 2),
            Err(Error::Infeasible(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn sym_strategy(order: usize) -> impl Strategy<Value = SymMatrix> {
            proptest::collection::vec(-10.0f64..10.0, order * order).prop_map(move |v| {
                let mut m = SymMatrix::zeros(order);
                for i in 0..order {
                    for j in i..order {
                        m.set(i, j, v[i * order + j]);
                    }
                }
                m
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn psd_projection_idempotent_and_nonexpansive(s in sym_strategy(4), t in sym_strategy(4)) {
                let p = project_psd(&s).unwrap();
                let pp = project_psd(&p).unwrap();
                prop_assert!(pp.sub(&p).frob_norm() <= 1e-9 * (1.0 + p.frob_norm()));
                let pt = project_psd(&t).unwrap();
                prop_assert!(pt.sub(&p).frob_norm() <= t.sub(&s).frob_norm() + 1e-9);
                prop_assert!(min_eigenvalue(&p).unwrap() >= -1e-9 * (1.0 + s.frob_norm()));
            }

            #[test]
            fn nonneg_projection_idempotent_and_nonexpansive(s in sym_strategy(4), t in sym_strategy(4)) {
                let p = project_nonneg(&s);
                prop_assert!(project_nonneg(&p).max_abs_diff(&p) == 0.0);
                let pt = project_nonneg(&t);
                prop_assert!(pt.sub(&p).frob_norm() <= t.sub(&s).frob_norm() + 1e-12);
                prop_assert!(p.min_entry() >= 0.0);
            }

            #[test]
            fn psd_projection_is_nearest_among_sampled_psd(s in sym_strategy(3), r in sym_strategy(3)) {
                let p = project_psd(&s).unwrap();
                // r^T r style PSD sample via eigenvalue folding
                let sample = sym_eig(&r).unwrap().reconstruct_mapped(|w| w.abs());
                prop_assert!(p.sub(&s).frob_norm() <= sample.sub(&s).frob_norm() + 1e-9);
            }
        }
    }
}
