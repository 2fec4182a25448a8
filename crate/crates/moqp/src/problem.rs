//! Problem instances, weight vectors, weighted-sum aggregation, objective
//! evaluation, and the convexity audit.

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, min_eigenvalue, SymMatrix};

/// Simplex-sum violations up to this size are renormalized with a warning;
/// anything larger is rejected. Printed weight tables carry four decimals,
/// so exact unit sums cannot be expected from data files.
const WEIGHT_RENORM_TOL: f64 = 1e-9;
/// Violations below this size are accepted as-is.
const WEIGHT_EXACT_TOL: f64 = 1e-12;

/// A multi-objective quadratic program
/// `min (F_1(x), ..., F_p(x))  s.t.  A x = b, x >= 0`
/// with every objective in the canonical form `F_i(x) = x^T Q_i x + 2 c_i^T x`.
#[derive(Debug, Clone)]
pub struct MoqpInstance {
    pub name: Option<String>,
    pub objective_labels: Option<Vec<String>>,
    /// Decision dimension.
    pub n: usize,
    /// Equality-constraint count.
    pub m: usize,
    /// Objective count.
    pub p: usize,
    pub q: Vec<SymMatrix>,
    pub c: Vec<Vec<f64>>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    /// Non-fatal findings recorded while validating, e.g. an objective
    /// matrix that had to be symmetrized.
    pub warnings: Vec<String>,
}

impl MoqpInstance {
    /// Validates dimensions, finiteness, and the no-zero-row rule on `A`;
    /// symmetrizes each `Q_i` and records the asymmetry as a warning when it
    /// exceeds 1e-8.
    pub fn new(
        name: Option<String>,
        objective_labels: Option<Vec<String>>,
        n: usize,
        m: usize,
        p: usize,
        q_rows: Vec<Vec<Vec<f64>>>,
        c: Vec<Vec<f64>>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("n: must be at least 1".into()));
        }
        if p == 0 {
            return Err(Error::Input("p: must be at least 1".into()));
        }
        if q_rows.len() != p {
            return Err(Error::Input(format!(
                "Q: expected {p} matrices, found {}",
                q_rows.len()
            )));
        }
        if c.len() != p {
            return Err(Error::Input(format!(
                "c: expected {p} vectors, found {}",
                c.len()
            )));
        }
        if a.len() != m {
            return Err(Error::Input(format!(
                "A: expected {m} rows, found {}",
                a.len()
            )));
        }
        if b.len() != m {
            return Err(Error::Input(format!(
                "b: expected {m} values, found {}",
                b.len()
            )));
        }
        if let Some(labels) = &objective_labels {
            if labels.len() != p {
                return Err(Error::Input(format!(
                    "objective_labels: expected {p} labels, found {}",
                    labels.len()
                )));
            }
        }

        let mut warnings = Vec::new();
        let mut q = Vec::with_capacity(p);
        for (i, rows) in q_rows.iter().enumerate() {
            if rows.len() != n {
                return Err(Error::Input(format!(
                    "Q[{i}]: expected {n} rows, found {}",
                    rows.len()
                )));
            }
            for (r, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Input(format!(
                        "Q[{i}][{r}]: expected {n} entries, found {}",
                        row.len()
                    )));
                }
                for (col, v) in row.iter().enumerate() {
                    if !v.is_finite() {
                        return Err(Error::Input(format!("Q[{i}][{r}][{col}]: non-finite value")));
                    }
                }
            }
            let sym = SymMatrix::from_rows(rows)?;
            if sym.asymmetry() > 1e-8 {
                warnings.push(format!(
                    "Q[{i}] was asymmetric by up to {:.3e} and has been symmetrized",
                    sym.asymmetry()
                ));
            }
            q.push(sym);
        }
        for (i, v) in c.iter().enumerate() {
            if v.len() != n {
                return Err(Error::Input(format!(
                    "c[{i}]: expected {n} entries, found {}",
                    v.len()
                )));
            }
            if let Some(j) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::Input(format!("c[{i}][{j}]: non-finite value")));
            }
        }
        for (j, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "A[{j}]: expected {n} entries, found {}",
                    row.len()
                )));
            }
            if let Some(k) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::Input(format!("A[{j}][{k}]: non-finite value")));
            }
            if row.iter().all(|&x| x == 0.0) {
                return Err(Error::Input(format!("A[{j}]: all-zero constraint row")));
            }
        }
        if let Some(j) = b.iter().position(|x| !x.is_finite()) {
            return Err(Error::Input(format!("b[{j}]: non-finite value")));
        }

        Ok(MoqpInstance {
            name,
            objective_labels,
            n,
            m,
            p,
            q,
            c,
            a,
            b,
            warnings,
        })
    }

    /// Evaluates every objective at `x`: component `i` is
    /// `x^T Q_i x + 2 c_i^T x`.
    pub fn evaluate_objectives(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Input(format!(
                "x: expected {} entries, found {}",
                self.n,
                x.len()
            )));
        }
        Ok((0..self.p)
            .map(|i| quadratic_value(&self.q[i], &self.c[i], x))
            .collect())
    }

    /// `(||Ax - b||_inf, max(0, -min_i x_i))`.
    pub fn feasibility_residual(&self, x: &[f64]) -> Result<(f64, f64)> {
        if x.len() != self.n {
            return Err(Error::Input(format!(
                "x: expected {} entries, found {}",
                self.n,
                x.len()
            )));
        }
        let ax = mat_vec(&self.a, x);
        let eq = ax
            .iter()
            .zip(&self.b)
            .map(|(l, r)| (l - r).abs())
            .fold(0.0, f64::max);
        let neg = x.iter().cloned().fold(0.0f64, |acc, v| acc.max(-v));
        Ok((eq, neg))
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        match self.feasibility_residual(x) {
            Ok((eq, neg)) => eq <= tol && neg <= tol,
            Err(_) => false,
        }
    }
}

/// `x^T Q x + 2 c^T x`.
pub fn quadratic_value(q: &SymMatrix, c: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += q.get(i, j) * x[j];
        }
        acc += x[i] * (row + 2.0 * c[i]);
    }
    acc
}

/// A point on the probability simplex selecting one scalarization.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    renormalized: bool,
}

impl WeightVector {
    /// Accepts weights that are nonnegative and sum to 1. Sums off by at
    /// most 1e-9 are renormalized (flagged via [`WeightVector::renormalized`]);
    /// larger violations and negative entries are rejected.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("weight vector must be nonempty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("weights[{i}]: non-finite value")));
        }
        let mut values = values;
        for (i, v) in values.iter_mut().enumerate() {
            if *v < 0.0 {
                if *v >= -WEIGHT_RENORM_TOL {
                    *v = 0.0;
                } else {
                    return Err(Error::Input(format!("weights[{i}]: negative weight {v}")));
                }
            }
        }
        let sum: f64 = values.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Input("weights: must not all be zero".into()));
        }
        let dev = (sum - 1.0).abs();
        let mut renormalized = false;
        if dev > WEIGHT_EXACT_TOL {
            if dev > WEIGHT_RENORM_TOL {
                return Err(Error::Input(format!(
                    "weights: sum {sum} is not 1 (off by {dev:.3e})"
                )));
            }
            for v in &mut values {
                *v /= sum;
            }
            renormalized = true;
        }
        Ok(WeightVector {
            values,
            renormalized,
        })
    }

    /// The unit weight `e_i` of length `p`.
    pub fn unit(p: usize, i: usize) -> Result<Self> {
        if i >= p {
            return Err(Error::Input(format!(
                "unit weight index {i} out of range for p = {p}"
            )));
        }
        let mut values = vec![0.0; p];
        values[i] = 1.0;
        Ok(WeightVector {
            values,
            renormalized: false,
        })
    }

    pub fn uniform(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::Input("p: must be at least 1".into()));
        }
        WeightVector::new(vec![1.0 / p as f64; p])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Whether construction had to rescale the input to restore a unit sum.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn all_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }

    /// `sum_i lambda_i * f_i`.
    pub fn combine(&self, f: &[f64]) -> f64 {
        self.values.iter().zip(f).map(|(l, v)| l * v).sum()
    }
}

/// The scalarized quadratic data `Q_lambda = sum_i lambda_i Q_i`,
/// `c_lambda = sum_i lambda_i c_i`.
#[derive(Debug, Clone)]
pub struct AggregatedQp {
    pub q: SymMatrix,
    pub c: Vec<f64>,
}

impl AggregatedQp {
    pub fn value(&self, x: &[f64]) -> f64 {
        quadratic_value(&self.q, &self.c, x)
    }
}

/// Forms the weighted-sum objective for one weight vector.
pub fn aggregate(inst: &MoqpInstance, w: &WeightVector) -> Result<AggregatedQp> {
    if w.len() != inst.p {
        return Err(Error::Input(format!(
            "weights: expected {} entries, found {}",
            inst.p,
            w.len()
        )));
    }
    let mut q = SymMatrix::zeros(inst.n);
    let mut c = vec![0.0; inst.n];
    for (i, &lambda) in w.values().iter().enumerate() {
        q.add_scaled(lambda, &inst.q[i]);
        for (cj, &src) in c.iter_mut().zip(&inst.c[i]) {
            *cj += lambda * src;
        }
    }
    Ok(AggregatedQp { q, c })
}

/// Whether `Q` is positive semidefinite up to `tol`, i.e. whether the
/// quadratic form it defines is convex.
pub fn is_convex(q: &SymMatrix, tol: f64) -> Result<bool> {
    if tol < 0.0 {
        return Err(Error::Input("tol: must be nonnegative".into()));
    }
    Ok(min_eigenvalue(q)? >= -tol)
}

/// Scale-aware default tolerance for [`is_convex`], consistent with the
/// eigensolver's accuracy.
pub fn default_convexity_tol(q: &SymMatrix) -> f64 {
    1e-9 * (1.0 + q.frob_norm())
}
