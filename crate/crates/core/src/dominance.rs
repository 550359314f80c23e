//! First-order stochastic dominance and the deviation-from-independence
//! ("theta") machinery for dependent couplings.
//!
//! For a square coupling `P(x_i, x_j)` with marginals `p`, `q` the theta
//! matrix is `θ_ij = P(x_i, x_j) - p_i q_j`. Its rows and columns sum to
//! zero, so it lives in an `(n-1)^2` dimensional space spanned by the basis
//! matrices `M_ij` (`+1` at `(i,j)` and `(n,n)`, `-1` at `(i,n)` and `(n,j)`),
//! with coordinates equal to the top-left `(n-1) x (n-1)` block of `θ`.
//!
//! Note that zero row and column sums force the antisymmetric part
//! `θ_ij - θ_ji` to have zero row sums too, so requiring `θ_ij >= θ_ji` for
//! every `i > j` already forces `θ` to be symmetric.

use alloc::format;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lottery::{align, canonicalize, JointLottery, Lottery};
use crate::matrix::Matrix;
use crate::utility::Utility;
use crate::PROB_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DominanceRelation {
    FirstDominates,
    SecondDominates,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceVerdict {
    pub relation: DominanceRelation,
    /// First grid index where the first lottery's cumulative exceeds the second's.
    pub first_fails_at: Option<usize>,
    /// First grid index where the second lottery's cumulative exceeds the first's.
    pub second_fails_at: Option<usize>,
    /// The common ascending grid the cumulatives were taken on.
    pub grid: Vec<f64>,
}

/// `x` dominates `y` iff `sum_{i<=k} p_i <= sum_{i<=k} q_i` for every `k`
/// on the common ascending grid (ties within `1e-12` count as satisfied).
pub fn stochastic_dominance(x: &Lottery, y: &Lottery) -> DominanceVerdict {
    let (a, b) = align(&canonicalize(x), &canonicalize(y));
    let (ca, cb) = (a.cumulative(), b.cumulative());
    let first_fails_at = ca.iter().zip(&cb).position(|(p, q)| *p > q + PROB_TOL);
    let second_fails_at = ca.iter().zip(&cb).position(|(p, q)| *q > p + PROB_TOL);
    let relation = match (first_fails_at, second_fails_at) {
        (None, None) => DominanceRelation::Equal,
        (None, Some(_)) => DominanceRelation::FirstDominates,
        (Some(_), None) => DominanceRelation::SecondDominates,
        (Some(_), Some(_)) => DominanceRelation::Incomparable,
    };
    DominanceVerdict {
        relation,
        first_fails_at,
        second_fails_at,
        grid: a.outcomes().to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub holds: bool,
    /// First `k` (0-based) at which the partial-sum inequality fails.
    pub first_failing: Option<usize>,
}

/// For `p` cumulatively dominated by `q` and a nondecreasing sequence of
/// nonpositive `g`, checks `sum_{i<=k} p_i g_i >= sum_{i<=k} q_i g_i` for all `k`.
pub fn cumulative_lemma_check(p: &[f64], q: &[f64], g: &[f64]) -> Result<LemmaCheck> {
    if p.len() != q.len() || p.len() != g.len() {
        return Err(Error::PreconditionViolation(format!(
            "sequence lengths differ ({}, {}, {})",
            p.len(),
            q.len(),
            g.len()
        )));
    }
    if let Some(k) = g.iter().position(|&v| !(v <= 0.0)) {
        return Err(Error::PreconditionViolation(format!(
            "g[{k}] = {} is positive",
            g[k]
        )));
    }
    if let Some(k) = g.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::PreconditionViolation(format!(
            "g decreases at index {}",
            k + 1
        )));
    }
    let (mut cp, mut cq) = (0.0, 0.0);
    for k in 0..p.len() {
        cp += p[k];
        cq += q[k];
        if cp > cq + PROB_TOL {
            return Err(Error::PreconditionViolation(format!(
                "first sequence is not cumulatively dominated at index {k}"
            )));
        }
    }
    let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..p.len() {
        sp += p[k] * g[k];
        sq += q[k] * g[k];
        if sp < sq - PROB_TOL * scale {
            return Ok(LemmaCheck {
                holds: false,
                first_failing: Some(k),
            });
        }
    }
    Ok(LemmaCheck {
        holds: true,
        first_failing: None,
    })
}

/// Deviation of a square coupling from the product of its marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    theta: Matrix,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl ThetaMatrix {
    pub fn theta(&self) -> &Matrix {
        &self.theta
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.theta[(i, j)]
    }
}

/// `θ_ij = P(x_i, x_j) - p_i q_j`, with zero row/column sums and
/// `|θ_ij| <= p_i q_j` verified.
pub fn theta_matrix(j: &JointLottery) -> Result<ThetaMatrix> {
    if j.grid_x() != j.grid_y() {
        return Err(Error::NonSquareGrid);
    }
    let p = j.row_marginal();
    let q = j.col_marginal();
    let n = p.len();
    let theta = Matrix::from_fn(n, n, |a, b| j.get(a, b) - p[a] * q[b]);
    for a in 0..n {
        let row: f64 = theta.row(a).iter().sum();
        if row.abs() > PROB_TOL {
            return Err(Error::InvariantViolation {
                row: a,
                col: n,
                reason: "row sum is not zero",
            });
        }
        let col: f64 = (0..n).map(|b| theta[(b, a)]).sum();
        if col.abs() > PROB_TOL {
            return Err(Error::InvariantViolation {
                row: n,
                col: a,
                reason: "column sum is not zero",
            });
        }
        for b in 0..n {
            if theta[(a, b)].abs() > p[a] * q[b] + PROB_TOL {
                return Err(Error::InvariantViolation {
                    row: a,
                    col: b,
                    reason: "|theta| exceeds p_i q_j",
                });
            }
        }
    }
    Ok(ThetaMatrix { theta, p, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrianglePair {
    /// Lower-triangle index, `i > j`.
    pub i: usize,
    pub j: usize,
    pub theta_ij: f64,
    pub theta_ji: f64,
    pub holds: bool,
}

/// `θ_ij >= θ_ji - 1e-12` for each pair with `i > j`.
pub fn triangle_pairs(t: &ThetaMatrix) -> Vec<TrianglePair> {
    let n = t.n();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for i in j + 1..n {
            let (tij, tji) = (t.get(i, j), t.get(j, i));
            out.push(TrianglePair {
                i,
                j,
                theta_ij: tij,
                theta_ji: tji,
                holds: tij >= tji - PROB_TOL,
            });
        }
    }
    out
}

pub fn check_triangle_order(t: &ThetaMatrix) -> bool {
    triangle_pairs(t).iter().all(|pair| pair.holds)
}

/// Basis matrix `M_ij` (0-based, `i, j < n - 1`).
pub fn basis_matrix(n: usize, i: usize, j: usize) -> Matrix {
    assert!(n >= 2 && i < n - 1 && j < n - 1, "basis index out of range");
    let last = n - 1;
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] += 1.0;
    m[(last, last)] += 1.0;
    m[(i, last)] -= 1.0;
    m[(last, j)] -= 1.0;
    m
}

/// Coordinates of `θ` in the `M_ij` basis: its top-left `(n-1) x (n-1)` block.
pub fn basis_decompose(t: &ThetaMatrix) -> Matrix {
    let n = t.n();
    Matrix::from_fn(n - 1, n - 1, |i, j| t.get(i, j))
}

/// `sum_ij c_ij M_ij`.
pub fn basis_reconstruct(coeffs: &Matrix) -> Matrix {
    let n = coeffs.rows() + 1;
    let mut out = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            out.add_scaled(coeffs[(i, j)], &basis_matrix(n, i, j));
        }
    }
    out
}

/// Sum of all entries of the element-wise product.
pub fn hadamard_norm(a: &Matrix, g: &Matrix) -> Result<f64> {
    if (a.rows(), a.cols()) != (g.rows(), g.cols()) {
        return Err(Error::MatrixShapeMismatch {
            left: (a.rows(), a.cols()),
            right: (g.rows(), g.cols()),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(g.as_slice())
        .map(|(x, y)| x * y)
        .sum())
}

/// `G_ij = g(u(x_j) - u(x_i))` on a grid.
pub fn g_matrix<K, U>(kernel: &K, u: &U, grid: &[f64]) -> Result<Matrix>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let ut: Vec<f64> = grid
        .iter()
        .map(|&x| u.relative_utile(x))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_fn(ut.len(), ut.len(), |i, j| {
        kernel.g(ut[j] - ut[i])
    }))
}

/// `||M_ij ⊙ G|| = G_ij + G_nn - G_in - G_nj`, i.e.
/// `g(u_j - u_i) - g(u_n - u_i) - g(u_j - u_n)` for a `G` built by [`g_matrix`].
pub fn basis_hadamard(g: &Matrix, i: usize, j: usize) -> f64 {
    let last = g.rows() - 1;
    g[(i, j)] + g[(last, last)] - g[(i, last)] - g[(last, j)]
}
