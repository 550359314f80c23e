//! Seeded instance generators. Every generator is a pure function of its
//! seed; audits derive one ChaCha stream per trial.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dominance::{
    basis_reconstruct, check_triangle_order, stochastic_dominance, theta_matrix, DominanceRelation,
};
use crate::error::{Error, Result};
use crate::lottery::{JointLottery, Lottery};
use crate::math;
use crate::matrix::Matrix;

/// Outcome grid `0, 0.5, ..., 10`.
pub const GRID_POINTS: usize = 21;
pub const GRID_STEP: f64 = 0.5;
/// Rejection-sampling budget of [`gen_joint_triangle`].
pub const JOINT_ATTEMPTS: u32 = 64;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` distinct ascending grid points.
pub fn sample_outcomes<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    assert!((1..=GRID_POINTS).contains(&n), "outcome count out of range");
    let mut idx: Vec<usize> = (0..GRID_POINTS).collect();
    let (chosen, _) = idx.partial_shuffle(rng, n);
    let mut out: Vec<f64> = chosen.iter().map(|&i| i as f64 * GRID_STEP).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Uniform point of the open `(n-1)`-simplex.
pub fn sample_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| -math::ln(rng.gen_range(f64::MIN_POSITIVE..1.0)))
        .collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    w
}

pub fn lottery_from_rng<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Lottery {
    let outcomes = sample_outcomes(rng, n);
    let probs = sample_simplex(rng, n);
    Lottery::new(outcomes, probs).expect("simplex sample is a valid lottery")
}

/// Canonical lottery on `n` distinct grid outcomes with flat-simplex probabilities.
pub fn gen_lottery(seed: u64, n: usize) -> Lottery {
    lottery_from_rng(&mut rng_for(seed, 0), n)
}

/// Moves mass from lower to higher outcomes of `q`; the result dominates `q`.
pub fn dominating_from_rng<R: Rng + ?Sized>(rng: &mut R, q: &Lottery, transfers: usize) -> Lottery {
    let n = q.len();
    let mut p = q.probs().to_vec();
    if n >= 2 {
        for _ in 0..transfers {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            let moved = p[i] * rng.gen_range(0.05..0.95);
            p[i] -= moved;
            p[j] += moved;
        }
    }
    Lottery::new(q.outcomes().to_vec(), p).expect("mass transfer preserves validity")
}

/// `(p, q)` on a common grid with `p` first-order dominating `q`.
pub fn gen_sd_pair(seed: u64, n: usize, transfers: usize) -> (Lottery, Lottery) {
    let mut rng = rng_for(seed, 0);
    let q = lottery_from_rng(&mut rng, n);
    let p = dominating_from_rng(&mut rng, &q, transfers);
    (p, q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSample {
    pub joint: JointLottery,
    /// Candidates drawn, including the accepted one.
    pub attempts: u32,
}

/// Square coupling whose marginals are a dominance pair and whose theta
/// matrix passes the lower-triangle order check, by rejection sampling.
///
/// Each candidate is `p qᵀ + θ` with `θ` a symmetric combination of basis
/// matrices, plus, half the time, nonnegative lower-triangle coefficients,
/// scaled so that `|θ_ij| <= p_i q_j / 2`.
pub fn joint_from_rng<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<JointSample> {
    assert!((2..=4).contains(&n), "joint size must be 2..=4");
    for attempt in 1..=JOINT_ATTEMPTS {
        let q = lottery_from_rng(rng, n);
        let transfers = rng.gen_range(0..=3);
        let p = dominating_from_rng(rng, &q, transfers);
        let m = n - 1;
        let mut coeffs = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let c = rng.gen_range(-1.0..1.0);
                coeffs[(i, j)] = c;
                coeffs[(j, i)] = c;
            }
        }
        if rng.gen_bool(0.5) {
            for i in 1..m {
                for j in 0..i {
                    coeffs[(i, j)] += rng.gen_range(0.0..0.5);
                }
            }
        }
        let mut theta = basis_reconstruct(&coeffs);
        let (pp, qq) = (p.probs(), q.probs());
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max(theta[(i, j)].abs() / (pp[i] * qq[j]));
            }
        }
        if worst > 0.0 {
            theta.scale(rng.gen_range(0.01..=1.0) * 0.5 / worst);
        }
        let joint = Matrix::from_fn(n, n, |i, j| pp[i] * qq[j] + theta[(i, j)]);
        let grid = p.outcomes().to_vec();
        let Ok(joint) = JointLottery::new(grid.clone(), grid, joint) else {
            continue;
        };
        let Ok(t) = theta_matrix(&joint) else {
            continue;
        };
        if !check_triangle_order(&t) {
            continue;
        }
        let relation = stochastic_dominance(&joint.marginal_x(), &joint.marginal_y()).relation;
        if !matches!(
            relation,
            DominanceRelation::FirstDominates | DominanceRelation::Equal
        ) {
            continue;
        }
        return Ok(JointSample {
            joint,
            attempts: attempt,
        });
    }
    Err(Error::GenerationExhausted {
        attempts: JOINT_ATTEMPTS,
    })
}

pub fn gen_joint_triangle(seed: u64, n: usize) -> Result<JointSample> {
    joint_from_rng(&mut rng_for(seed, 0), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::{theta_matrix, DominanceRelation};

    #[test]
    fn lottery_generator() {
        let l = gen_lottery(1, 1);
        assert_eq!(l.len(), 1);
        assert_eq!(l.probs(), &[1.0]);
        assert_eq!(gen_lottery(9, 5), gen_lottery(9, 5));
        let l = gen_lottery(2, 4);
        assert_eq!(l.len(), 4);
        assert!((l.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(l.is_canonical());
        assert!(l.outcomes().iter().all(|x| (0.0..=10.0).contains(x)));
    }

    #[test]
    fn sd_pair_generator() {
        for seed in 0..200 {
            let (p, q) = gen_sd_pair(seed, 2 + (seed % 5) as usize, 1 + (seed % 4) as usize);
            let rel = stochastic_dominance(&p, &q).relation;
            assert!(matches!(
                rel,
                DominanceRelation::FirstDominates | DominanceRelation::Equal
            ));
            assert!(p.probs().iter().all(|&v| v > 0.0));
        }
        let (p, q) = gen_sd_pair(3, 4, 0);
        assert_eq!(
            stochastic_dominance(&p, &q).relation,
            DominanceRelation::Equal
        );
        assert_eq!(gen_sd_pair(11, 4, 3), gen_sd_pair(11, 4, 3));
    }

    #[test]
    fn joint_generator() {
        for seed in 0..100 {
            let n = 2 + (seed % 3) as usize;
            let s = gen_joint_triangle(seed, n).unwrap();
            let t = theta_matrix(&s.joint).unwrap();
            for i in 0..n {
                assert!(t.theta().row(i).iter().sum::<f64>().abs() < 1e-12);
            }
            assert!(check_triangle_order(&t));
        }
        assert_eq!(gen_joint_triangle(5, 4), gen_joint_triangle(5, 4));
    }
}
