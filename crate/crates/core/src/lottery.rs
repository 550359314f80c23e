//! Finite lotteries, their canonical form, common-grid alignment and joint couplings.

use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::matrix::Matrix;
use crate::utility::Utility;
use crate::PROB_TOL;

/// A finite probability table over monetary outcomes.
///
/// Construction validates probabilities but keeps the input order; zero
/// probability entries and repeated outcomes are allowed until
/// [`canonicalize`] is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLottery")]
pub struct Lottery {
    outcomes: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawLottery {
    outcomes: Vec<f64>,
    probs: Vec<f64>,
}

impl TryFrom<RawLottery> for Lottery {
    type Error = Error;

    fn try_from(raw: RawLottery) -> Result<Self> {
        Lottery::new(raw.outcomes, raw.probs)
    }
}

fn check_probs(probs: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (index, &p) in probs.iter().enumerate() {
        check_finite("probability", p)?;
        if p < 0.0 {
            return Err(Error::NegativeProbability { index, value: p });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::ProbabilitySumMismatch { sum });
    }
    Ok(())
}

impl Lottery {
    pub fn new(outcomes: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probs.len() {
            return Err(Error::LengthMismatch {
                outcomes: outcomes.len(),
                probs: probs.len(),
            });
        }
        if outcomes.is_empty() {
            return Err(Error::EmptyLottery);
        }
        for &x in &outcomes {
            check_finite("outcome", x)?;
        }
        check_probs(&probs)?;
        Ok(Self { outcomes, probs })
    }

    /// The degenerate lottery paying `x` with certainty.
    pub fn sure(x: f64) -> Result<Self> {
        Self::new(alloc::vec![x], alloc::vec![1.0])
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.outcomes
            .iter()
            .copied()
            .zip(self.probs.iter().copied())
    }

    /// Outcomes strictly increasing and every probability positive.
    pub fn is_canonical(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0) && self.outcomes.windows(2).all(|w| w[0] < w[1])
    }

    /// Expected utility `sum_i u(x_i) p_i`.
    pub fn expected_utility<U: Utility + ?Sized>(&self, u: &U) -> Result<f64> {
        let mut v = 0.0;
        for (x, p) in self.iter() {
            v += u.utile(x)? * p;
        }
        Ok(v)
    }

    /// Component-wise probability mixture `alpha * self + (1 - alpha) * other`.
    ///
    /// Both lotteries must share the same outcome sequence (see [`align`]).
    pub fn mix(&self, other: &Lottery, alpha: f64) -> Result<Lottery> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "mixing weight must lie in [0, 1]",
            });
        }
        if self.outcomes != other.outcomes {
            return Err(Error::PreconditionViolation(
                "mixture requires a common outcome grid".into(),
            ));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(&p, &r)| alpha * p + (1.0 - alpha) * r)
            .collect();
        Lottery::new(self.outcomes.clone(), probs)
    }

    /// Cumulative probabilities in the stored order.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect()
    }

    /// Total order used to fix summation order independently of argument order.
    pub(crate) fn total_cmp(&self, other: &Lottery) -> Ordering {
        let by_len = self.len().cmp(&other.len());
        if by_len != Ordering::Equal {
            return by_len;
        }
        for (a, b) in self.outcomes.iter().zip(&other.outcomes) {
            let o = a.total_cmp(b);
            if o != Ordering::Equal {
                return o;
            }
        }
        for (a, b) in self.probs.iter().zip(&other.probs) {
            let o = a.total_cmp(b);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

/// Sort ascending, merge equal outcomes and drop zero-probability entries.
///
/// Duplicates are merged by summing their probabilities in input order, so
/// the induced distribution over money is unchanged.
pub fn canonicalize(l: &Lottery) -> Lottery {
    let mut idx: Vec<usize> = (0..l.len()).collect();
    idx.sort_by(|&a, &b| l.outcomes[a].total_cmp(&l.outcomes[b]));
    let mut outcomes: Vec<f64> = Vec::with_capacity(l.len());
    let mut probs: Vec<f64> = Vec::with_capacity(l.len());
    for i in idx {
        let (x, p) = (l.outcomes[i], l.probs[i]);
        if p == 0.0 {
            continue;
        }
        match outcomes.last() {
            // -0.0 and 0.0 are the same amount of money
            Some(&last) if last == x => *probs.last_mut().unwrap() += p,
            _ => {
                outcomes.push(x);
                probs.push(p);
            }
        }
    }
    Lottery { outcomes, probs }
}

/// Union of the canonical outcome sets of `lotteries`, ascending.
pub fn union_grid(lotteries: &[&Lottery]) -> Vec<f64> {
    let mut grid: Vec<f64> = lotteries
        .iter()
        .flat_map(|l| canonicalize(l).outcomes)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| a == b);
    grid
}

fn on_grid(l: &Lottery, grid: &[f64]) -> Lottery {
    let c = canonicalize(l);
    let mut probs = alloc::vec![0.0; grid.len()];
    let mut k = 0;
    for (x, p) in c.iter() {
        while grid[k] != x {
            k += 1;
        }
        probs[k] = p;
    }
    Lottery {
        outcomes: grid.to_vec(),
        probs,
    }
}

/// Express both lotteries on their common ascending outcome grid,
/// padding with zero-probability entries.
pub fn align(a: &Lottery, b: &Lottery) -> (Lottery, Lottery) {
    let grid = union_grid(&[a, b]);
    (on_grid(a, &grid), on_grid(b, &grid))
}

/// [`align`] for any number of lotteries.
pub fn align_all(lotteries: &[&Lottery]) -> Vec<Lottery> {
    let grid = union_grid(lotteries);
    lotteries.iter().map(|l| on_grid(l, &grid)).collect()
}

/// Largest absolute probability difference between two lotteries viewed as
/// distributions over money.
pub fn distribution_distance(a: &Lottery, b: &Lottery) -> f64 {
    let (a, b) = align(a, b);
    a.probs
        .iter()
        .zip(&b.probs)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

/// Two outcome grids and a joint probability matrix `P(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint", into = "RawJoint")]
pub struct JointLottery {
    grid_x: Vec<f64>,
    grid_y: Vec<f64>,
    joint: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RawJoint {
    grid_x: Vec<f64>,
    grid_y: Vec<f64>,
    joint: Vec<Vec<f64>>,
}

impl TryFrom<RawJoint> for JointLottery {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        let joint = Matrix::from_rows(&raw.joint).ok_or(Error::ShapeMismatch {
            rows: raw.joint.len(),
            cols: raw.joint.first().map_or(0, Vec::len),
            grid_x: raw.grid_x.len(),
            grid_y: raw.grid_y.len(),
        })?;
        JointLottery::new(raw.grid_x, raw.grid_y, joint)
    }
}

impl From<JointLottery> for RawJoint {
    fn from(j: JointLottery) -> Self {
        RawJoint {
            joint: j.joint.to_rows(),
            grid_x: j.grid_x,
            grid_y: j.grid_y,
        }
    }
}

impl JointLottery {
    pub fn new(grid_x: Vec<f64>, grid_y: Vec<f64>, joint: Matrix) -> Result<Self> {
        if joint.rows() != grid_x.len() || joint.cols() != grid_y.len() {
            return Err(Error::ShapeMismatch {
                rows: joint.rows(),
                cols: joint.cols(),
                grid_x: grid_x.len(),
                grid_y: grid_y.len(),
            });
        }
        if grid_x.is_empty() || grid_y.is_empty() {
            return Err(Error::EmptyLottery);
        }
        for &x in grid_x.iter().chain(&grid_y) {
            check_finite("outcome", x)?;
        }
        let mut sum = 0.0;
        for (index, &p) in joint.as_slice().iter().enumerate() {
            check_finite("joint probability", p)?;
            if p < 0.0 {
                return Err(Error::NegativeProbability { index, value: p });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::TotalMassMismatch { sum });
        }
        Ok(Self {
            grid_x,
            grid_y,
            joint,
        })
    }

    /// Diagnostic constructor that also checks the marginals against
    /// expected lotteries.
    pub fn with_marginals(
        grid_x: Vec<f64>,
        grid_y: Vec<f64>,
        joint: Matrix,
        expected_x: &Lottery,
        expected_y: &Lottery,
    ) -> Result<Self> {
        let j = Self::new(grid_x, grid_y, joint)?;
        j.check_marginals(expected_x, expected_y)?;
        Ok(j)
    }

    /// Independent coupling `P(x_i, y_j) = p_i q_j`.
    pub fn product(x: &Lottery, y: &Lottery) -> Result<Self> {
        let joint = Matrix::from_fn(x.len(), y.len(), |i, j| x.probs[i] * y.probs[j]);
        Self::new(x.outcomes.clone(), y.outcomes.clone(), joint)
    }

    pub fn grid_x(&self) -> &[f64] {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &[f64] {
        &self.grid_y
    }

    pub fn joint(&self) -> &Matrix {
        &self.joint
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.joint[(i, j)]
    }

    /// Row sums `p_i`.
    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.joint.rows())
            .map(|i| self.joint.row(i).iter().sum())
            .collect()
    }

    /// Column sums `q_j`.
    pub fn col_marginal(&self) -> Vec<f64> {
        let mut q = alloc::vec![0.0; self.joint.cols()];
        for i in 0..self.joint.rows() {
            for (qj, &v) in q.iter_mut().zip(self.joint.row(i)) {
                *qj += v;
            }
        }
        q
    }

    pub fn marginal_x(&self) -> Lottery {
        Lottery {
            outcomes: self.grid_x.clone(),
            probs: self.row_marginal(),
        }
    }

    pub fn marginal_y(&self) -> Lottery {
        Lottery {
            outcomes: self.grid_y.clone(),
            probs: self.col_marginal(),
        }
    }

    /// Check that the marginals reproduce `x` and `y` as distributions over money.
    pub fn check_marginals(&self, x: &Lottery, y: &Lottery) -> Result<()> {
        let dx = distribution_distance(&self.marginal_x(), x);
        if dx > PROB_TOL {
            return Err(Error::MarginalMismatch {
                which: "row",
                deviation: dx,
            });
        }
        let dy = distribution_distance(&self.marginal_y(), y);
        if dy > PROB_TOL {
            return Err(Error::MarginalMismatch {
                which: "column",
                deviation: dy,
            });
        }
        Ok(())
    }

    /// Swap the roles of the two lotteries.
    pub fn transpose(&self) -> JointLottery {
        JointLottery {
            grid_x: self.grid_y.clone(),
            grid_y: self.grid_x.clone(),
            joint: self.joint.transpose(),
        }
    }
}

/// Coupling of a lottery with itself through shared states: `P(x_i, x_j) = p_i δ_ij`
/// on the canonical grid.
pub fn diagonal_coupling(l: &Lottery) -> JointLottery {
    let c = canonicalize(l);
    let n = c.len();
    let joint = Matrix::from_fn(n, n, |i, j| if i == j { c.probs[i] } else { 0.0 });
    JointLottery {
        grid_x: c.outcomes.clone(),
        grid_y: c.outcomes,
        joint,
    }
}

/// State-wise coupling of two acts over the same states of nature: outcome
/// `x_k` is paired with `y_k`, each state carrying probability `p_k = q_k`.
pub fn statewise_coupling(x: &Lottery, y: &Lottery) -> Result<JointLottery> {
    if x.len() != y.len() {
        return Err(Error::StateMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if let Some(d) = x
        .probs
        .iter()
        .zip(&y.probs)
        .map(|(p, q)| (p - q).abs())
        .find(|&d| d > PROB_TOL)
    {
        return Err(Error::MarginalMismatch {
            which: "state",
            deviation: d,
        });
    }
    let n = x.len();
    let joint = Matrix::from_fn(n, n, |i, j| if i == j { x.probs[i] } else { 0.0 });
    JointLottery::new(x.outcomes.clone(), y.outcomes.clone(), joint)
}
