//! Regret functionals and preference verdicts.
//!
//! For lotteries `(x, p)` and `(y, q)` the signed regret difference is
//!
//! ```text
//!   D = sum_ij g(u(y_j) - u(x_i)) * w_ij
//! ```
//!
//! with `w_ij = p_i q_j` for independent lotteries and `w_ij = P(x_i, y_j)`
//! for an explicit coupling. `D <= 0` means `(x, p)` carries the smaller
//! average regret and is preferred.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lottery::{align_all, JointLottery, Lottery};
use crate::math;
use crate::utility::Utility;
use crate::INDIFFERENCE_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preference {
    FirstPreferred,
    SecondPreferred,
    Indifferent,
}

/// Outcome of a pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub direction: Preference,
    /// Signed difference; negative means the first alternative is preferred.
    pub regret_difference: f64,
    /// `max(1, largest |g| term)`; the indifference band is `1e-12 * scale`.
    pub scale: f64,
}

impl Verdict {
    pub fn from_difference(regret_difference: f64, scale: f64) -> Self {
        let band = INDIFFERENCE_TOL * scale.max(1.0);
        let direction = if regret_difference.abs() <= band {
            Preference::Indifferent
        } else if regret_difference < 0.0 {
            Preference::FirstPreferred
        } else {
            Preference::SecondPreferred
        };
        Self {
            direction,
            regret_difference,
            scale: scale.max(1.0),
        }
    }

    /// First alternative weakly preferred.
    pub fn first_weakly_preferred(&self) -> bool {
        self.direction != Preference::SecondPreferred
    }
}

/// How the two lotteries' outcomes are jointly distributed.
#[derive(Debug, Clone, Copy)]
pub enum Coupling<'a> {
    Independent,
    Joint(&'a JointLottery),
}

/// A regret sum together with the magnitude of its largest `g` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegretSum {
    pub value: f64,
    pub scale: f64,
}

impl RegretSum {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_difference(self.value, self.scale)
    }
}

fn relative_utiles<U: Utility + ?Sized>(u: &U, xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter().map(|&x| u.relative_utile(x)).collect()
}

/// Accumulates `g(d) * w` terms, tracking the scale and overflow.
struct Accumulator {
    sum: f64,
    scale: f64,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            sum: 0.0,
            scale: 1.0,
        }
    }

    fn add<K: Kernel + ?Sized>(&mut self, kernel: &K, d: f64, w: f64) -> Result<()> {
        if w == 0.0 {
            return Ok(());
        }
        let g = kernel.g(d);
        if !g.is_finite() {
            return Err(Error::Overflow {
                what: "regret comparator g",
                exponent: d,
            });
        }
        self.scale = self.scale.max(g.abs());
        self.sum += g * w;
        Ok(())
    }

    fn finish(self) -> RegretSum {
        RegretSum {
            value: self.sum,
            scale: self.scale,
        }
    }
}

/// Sums `term(i, j)` over an `n x m` index set, row-major unless `swap`.
///
/// Swapping the arguments of a comparison negates every term; walking the
/// terms in the same order for both argument orders makes the two sums exact
/// negatives of each other.
fn double_sum(
    n: usize,
    m: usize,
    swap: bool,
    mut term: impl FnMut(usize, usize) -> Result<()>,
) -> Result<()> {
    if swap {
        for j in 0..m {
            for i in 0..n {
                term(i, j)?;
            }
        }
    } else {
        for i in 0..n {
            for j in 0..m {
                term(i, j)?;
            }
        }
    }
    Ok(())
}

fn joint_self_order(j: &JointLottery) -> Ordering {
    let t = j.joint().transpose();
    for (a, b) in j.joint().as_slice().iter().zip(t.as_slice()) {
        let o = a.total_cmp(b);
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// `sum_i f(u(x_i) - realized) p_i`: regret about the counterfactual lottery
/// `cf` once an outcome of utility `realized_utile` has been obtained.
pub fn regret_given_outcome<K, U>(cf: &Lottery, realized_utile: f64, f: &K, u: &U) -> Result<f64>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let mut r = 0.0;
    for (x, p) in cf.iter() {
        r += f.f(u.utile(x)? - realized_utile) * p;
    }
    Ok(r)
}

/// Signed regret difference with its scale.
pub fn regret_sum<K, U>(
    x: &Lottery,
    y: &Lottery,
    kernel: &K,
    u: &U,
    coupling: Coupling<'_>,
) -> Result<RegretSum>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let mut acc = Accumulator::new();
    match coupling {
        Coupling::Independent => {
            let ux = relative_utiles(u, x.outcomes())?;
            let uy = relative_utiles(u, y.outcomes())?;
            let (p, q) = (x.probs(), y.probs());
            let swap = x.total_cmp(y) == Ordering::Greater;
            double_sum(x.len(), y.len(), swap, |i, j| {
                acc.add(kernel, uy[j] - ux[i], p[i] * q[j])
            })?;
        }
        Coupling::Joint(joint) => {
            joint.check_marginals(x, y)?;
            let ux = relative_utiles(u, joint.grid_x())?;
            let uy = relative_utiles(u, joint.grid_y())?;
            let order = x.total_cmp(y).then_with(|| joint_self_order(joint));
            double_sum(ux.len(), uy.len(), order == Ordering::Greater, |i, j| {
                acc.add(kernel, uy[j] - ux[i], joint.get(i, j))
            })?;
        }
    }
    Ok(acc.finish())
}

/// `sum_ij g(u(y_j) - u(x_i)) w_ij`; negative means `x` is preferred.
pub fn regret_difference<K, U>(
    x: &Lottery,
    y: &Lottery,
    kernel: &K,
    u: &U,
    coupling: Coupling<'_>,
) -> Result<f64>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    regret_sum(x, y, kernel, u, coupling).map(|s| s.value)
}

/// Compare `x` against `y`.
pub fn prefer<K, U>(
    x: &Lottery,
    y: &Lottery,
    kernel: &K,
    u: &U,
    coupling: Coupling<'_>,
) -> Result<Verdict>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    regret_sum(x, y, kernel, u, coupling).map(|s| s.verdict())
}

/// The two positive scores of the factorized (transitive) form:
/// `v = sum a^u(x_i) p_i` and `w = sum a^-u(x_i) p_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FishburnScores {
    pub v: f64,
    pub w: f64,
}

pub fn fishburn_scores<U: Utility + ?Sized>(l: &Lottery, a: f64, u: &U) -> Result<FishburnScores> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "base must be positive and finite",
        });
    }
    let ln_a = math::ln(a);
    let (mut v, mut w) = (0.0, 0.0);
    for (x, p) in l.iter() {
        let exponent = u.utile(x)? * ln_a;
        let up = math::exp(exponent);
        let down = math::exp(-exponent);
        if !(up.is_finite() && down.is_finite() && up > 0.0 && down > 0.0) {
            return Err(Error::Overflow {
                what: "a^u(x)",
                exponent,
            });
        }
        v += up * p;
        w += down * p;
    }
    Ok(FishburnScores { v, w })
}

/// Verdict through the factorized form for `f(d) = b (a^d - 1)`.
///
/// The reported difference is `-b (v(x) w(y) - v(y) w(x))`, which equals the
/// regret difference of the kernel `g(d) = b (a^d - a^-d)`.
pub fn prefer_transitive<U: Utility + ?Sized>(
    x: &Lottery,
    y: &Lottery,
    a: f64,
    b: f64,
    u: &U,
) -> Result<Verdict> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "b",
            value: b,
            reason: "scale must be positive and finite",
        });
    }
    let sx = fishburn_scores(x, a, u)?;
    let sy = fishburn_scores(y, a, u)?;
    let (xy, yx) = (sx.v * sy.w, sy.v * sx.w);
    Ok(Verdict::from_difference(-b * (xy - yx), b * xy.max(yx)))
}

/// Mixing weight making `alpha p + (1 - alpha) r` regret-indifferent to `q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndifferenceResult {
    pub alpha: f64,
    /// `sum_ij p_i q_j g(u(x_i) - u(x_j))`
    pub a: f64,
    /// `sum_ij r_i q_j g(u(x_j) - u(x_i))`
    pub b: f64,
    /// All three lotteries indifferent; `alpha` is set to 1/2 by convention.
    pub degenerate: bool,
    /// The mixture on the common grid of `p`, `q`, `r`.
    pub mixture: Lottery,
    pub scale: f64,
}

/// Continuity: given `p ⪰ q ⪰ r`, find `alpha` with `q ~ alpha p + (1 - alpha) r`.
///
/// Only independent coupling is supported.
pub fn indifference_alpha<K, U>(
    p: &Lottery,
    q: &Lottery,
    r: &Lottery,
    kernel: &K,
    u: &U,
) -> Result<IndifferenceResult>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let aligned = align_all(&[p, q, r]);
    let (p, q, r) = (&aligned[0], &aligned[1], &aligned[2]);
    let pq = regret_sum(p, q, kernel, u, Coupling::Independent)?;
    let rq = regret_sum(r, q, kernel, u, Coupling::Independent)?;
    let (a, b) = (-pq.value, rq.value);
    let scale = pq.scale.max(rq.scale);
    let tol = INDIFFERENCE_TOL * scale;
    if a < -tol {
        return Err(Error::OrderingViolation(format!(
            "first lottery is not weakly preferred to the second (A = {a})"
        )));
    }
    if b < -tol {
        return Err(Error::OrderingViolation(format!(
            "second lottery is not weakly preferred to the third (B = {b})"
        )));
    }
    let (a, b) = (a.max(0.0), b.max(0.0));
    let degenerate = a + b <= 1e-15;
    let alpha = if degenerate {
        0.5
    } else {
        (b / (a + b)).clamp(0.0, 1.0)
    };
    let mixture = p.mix(r, alpha)?;
    Ok(IndifferenceResult {
        alpha,
        a,
        b,
        degenerate,
        mixture,
        scale,
    })
}

/// The three readings of a composite lottery `(1 - alpha) L + alpha (z, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompositeVariant {
    /// Same `z` lottery in both options, independent switches.
    SharedZIndependentSwitches,
    /// One switch shared by both options.
    SharedSwitch,
    /// Independent copies of `z` in each option, independent switches.
    IndependentZ,
}

impl CompositeVariant {
    pub const ALL: [CompositeVariant; 3] = [
        Self::SharedZIndependentSwitches,
        Self::SharedSwitch,
        Self::IndependentZ,
    ];
}

/// Regret difference between `A = (1-alpha) x + alpha z` and
/// `B = (1-alpha) y + alpha z` under the chosen reading; `A ⪰ B` iff `<= 0`.
pub fn composite_regret<K, U>(
    variant: CompositeVariant,
    x: &Lottery,
    y: &Lottery,
    z: &Lottery,
    alpha: f64,
    kernel: &K,
    u: &U,
) -> Result<RegretSum>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "mixing weight must lie in [0, 1]",
        });
    }
    let ind = Coupling::Independent;
    let w = 1.0 - alpha;
    let xy = regret_sum(x, y, kernel, u, ind)?;
    if variant == CompositeVariant::SharedSwitch {
        return Ok(RegretSum {
            value: w * w * xy.value,
            scale: xy.scale,
        });
    }
    let xz = regret_sum(x, z, kernel, u, ind)?;
    let zy = regret_sum(z, y, kernel, u, ind)?;
    let mut value = w * w * xy.value + w * alpha * xz.value + w * alpha * zy.value;
    let mut scale = xy.scale.max(xz.scale).max(zy.scale);
    if variant == CompositeVariant::IndependentZ {
        let zz = regret_sum(z, z, kernel, u, ind)?;
        value += alpha * alpha * zz.value;
        scale = scale.max(zz.scale);
    }
    Ok(RegretSum { value, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RegretKernel;
    use crate::lottery::{diagonal_coupling, statewise_coupling};
    use crate::utility::UtilityCurve;

    fn lot(x: &[f64], p: &[f64]) -> Lottery {
        Lottery::new(x.to_vec(), p.to_vec()).unwrap()
    }

    fn lin() -> UtilityCurve {
        UtilityCurve::linear()
    }

    #[test]
    fn regret_given_outcome_examples() {
        let f = RegretKernel::linear(2.0).unwrap();
        let cf = lot(&[0.0, 1.0], &[0.5, 0.5]);
        assert_eq!(regret_given_outcome(&cf, 0.5, &f, &lin()).unwrap(), 0.0);

        let s = RegretKernel::sinh(1.0).unwrap();
        let u = UtilityCurve::log(0.3).unwrap();
        let sure = lot(&[1.0], &[1.0]);
        let r = regret_given_outcome(&sure, u.utile(1.0).unwrap(), &s, &u).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn regret_difference_examples() {
        let g = RegretKernel::linear(1.0).unwrap();
        let x = lot(&[0.0, 1.0], &[0.5, 0.5]);
        let y = lot(&[0.0, 1.0], &[0.25, 0.75]);
        let d = regret_difference(&x, &y, &g, &lin(), Coupling::Independent).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        assert_eq!(
            regret_difference(&x, &x, &g, &lin(), Coupling::Independent).unwrap(),
            0.0
        );
    }

    #[test]
    fn prefer_examples() {
        let s = RegretKernel::sinh(1.0).unwrap();
        let u = UtilityCurve::log(0.01).unwrap();
        let x = lot(&[0.0, 3.0], &[0.3, 0.7]);
        assert_eq!(
            prefer(&x, &x, &s, &u, Coupling::Independent)
                .unwrap()
                .direction,
            Preference::Indifferent
        );
        let v = prefer(
            &lot(&[1.0], &[1.0]),
            &lot(&[0.0], &[1.0]),
            &s,
            &u,
            Coupling::Independent,
        )
        .unwrap();
        assert_eq!(v.direction, Preference::FirstPreferred);
    }

    #[test]
    fn exact_antisymmetry_independent() {
        let k = RegretKernel::sinh(0.7).unwrap();
        let u = UtilityCurve::log(0.5).unwrap();
        let x = lot(&[0.0, 1.3, 4.0], &[0.2, 0.5, 0.3]);
        let y = lot(&[0.5, 2.0], &[0.61, 0.39]);
        let a = regret_difference(&x, &y, &k, &u, Coupling::Independent).unwrap();
        let b = regret_difference(&y, &x, &k, &u, Coupling::Independent).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn exact_antisymmetry_joint() {
        let k = RegretKernel::Tanh;
        let x = lot(&[-5.0, 6.0], &[0.1, 0.9]);
        let y = lot(&[5.0, 4.0], &[0.1, 0.9]);
        let j = statewise_coupling(&x, &y).unwrap();
        let a = regret_difference(&x, &y, &k, &lin(), Coupling::Joint(&j)).unwrap();
        let b = regret_difference(&y, &x, &k, &lin(), Coupling::Joint(&j.transpose())).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn joint_marginal_mismatch() {
        let x = lot(&[0.0, 1.0], &[0.5, 0.5]);
        let y = lot(&[0.0, 1.0], &[0.4, 0.6]);
        let j = diagonal_coupling(&x);
        let k = RegretKernel::linear(1.0).unwrap();
        assert!(matches!(
            regret_difference(&x, &y, &k, &lin(), Coupling::Joint(&j)),
            Err(Error::MarginalMismatch { .. })
        ));
    }

    #[test]
    fn diagonal_self_coupling_is_zero() {
        let x = lot(&[0.0, 1.0, 3.0], &[0.2, 0.3, 0.5]);
        let j = diagonal_coupling(&x);
        let k = RegretKernel::sinh(1.0).unwrap();
        assert_eq!(
            regret_difference(&x, &x, &k, &lin(), Coupling::Joint(&j)).unwrap(),
            0.0
        );
    }

    #[test]
    fn fishburn_examples() {
        let e = core::f64::consts::E;
        let l = lot(&[0.0, 1.0], &[0.5, 0.5]);
        let s = fishburn_scores(&l, e, &lin()).unwrap();
        assert!((s.v - 1.859_140_914_229_522_6).abs() < 1e-12);
        assert!((s.w - 0.683_939_720_585_721_2).abs() < 1e-12);
        let s = fishburn_scores(&lot(&[0.0], &[1.0]), e, &lin()).unwrap();
        assert_eq!((s.v, s.w), (1.0, 1.0));
        let s = fishburn_scores(&l, 1.0, &lin()).unwrap();
        assert_eq!((s.v, s.w), (1.0, 1.0));
        assert!(matches!(
            fishburn_scores(&lot(&[1000.0], &[1.0]), e, &lin()),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn prefer_transitive_example() {
        let e = core::f64::consts::E;
        let p = lot(&[0.0, 1.0], &[0.5, 0.5]);
        let q = lot(&[1.0], &[1.0]);
        let v = prefer_transitive(&p, &q, e, 1.0, &lin()).unwrap();
        // v(p)w(q) - v(q)w(p) = -sinh(1)
        assert!((v.regret_difference - libm::sinh(1.0)).abs() < 1e-12);
        assert_eq!(v.direction, Preference::SecondPreferred);
        let k = RegretKernel::Exponential { a: e, b: 1.0 };
        let direct = regret_difference(&p, &q, &k, &lin(), Coupling::Independent).unwrap();
        assert!((direct - v.regret_difference).abs() < 1e-12);
        let same = prefer_transitive(&p, &p, e, 1.0, &lin()).unwrap();
        assert_eq!(same.direction, Preference::Indifferent);
    }

    #[test]
    fn indifference_alpha_examples() {
        let g = RegretKernel::linear(1.0).unwrap();
        let p = lot(&[1.0], &[1.0]);
        let q = lot(&[0.0, 1.0], &[0.5, 0.5]);
        let r = lot(&[0.0], &[1.0]);
        let res = indifference_alpha(&p, &q, &r, &g, &lin()).unwrap();
        assert_eq!((res.a, res.b, res.alpha), (0.5, 0.5, 0.5));
        assert_eq!(res.mixture.probs(), &[0.5, 0.5]);

        let res = indifference_alpha(&p, &q, &q, &g, &lin()).unwrap();
        assert_eq!(res.b, 0.0);
        assert_eq!(res.alpha, 0.0);
        assert_eq!(res.mixture.probs(), &[0.5, 0.5]);

        let res = indifference_alpha(&q, &q, &q, &g, &lin()).unwrap();
        assert!(res.degenerate);
        assert_eq!(res.alpha, 0.5);
    }

    #[test]
    fn indifference_alpha_rejects_misordered() {
        let g = RegretKernel::linear(1.0).unwrap();
        let p = lot(&[1.0], &[1.0]);
        let r = lot(&[0.0], &[1.0]);
        let q = lot(&[0.0, 1.0], &[0.5, 0.5]);
        assert!(matches!(
            indifference_alpha(&r, &q, &p, &g, &lin()),
            Err(Error::OrderingViolation(_))
        ));
    }

    #[test]
    fn composite_linear_reduces_to_expected_utility() {
        let g = RegretKernel::linear(1.0).unwrap();
        let x = lot(&[0.0, 2.0], &[0.4, 0.6]);
        let y = lot(&[1.0, 3.0], &[0.7, 0.3]);
        let z = lot(&[0.5, 5.0], &[0.5, 0.5]);
        let vx = x.expected_utility(&lin()).unwrap();
        let vy = y.expected_utility(&lin()).unwrap();
        let alpha = 0.5;
        let c1 = composite_regret(
            CompositeVariant::SharedZIndependentSwitches,
            &x,
            &y,
            &z,
            alpha,
            &g,
            &lin(),
        )
        .unwrap();
        assert!((c1.value - 0.5 * (vy - vx)).abs() < 1e-14);
        let c2 = composite_regret(
            CompositeVariant::SharedSwitch,
            &x,
            &y,
            &z,
            alpha,
            &g,
            &lin(),
        )
        .unwrap();
        assert!((c2.value - 0.25 * (vy - vx)).abs() < 1e-14);
        let c3 = composite_regret(
            CompositeVariant::IndependentZ,
            &x,
            &y,
            &z,
            alpha,
            &g,
            &lin(),
        )
        .unwrap();
        assert!((c3.value - c1.value).abs() < 1e-14);
    }

    #[test]
    fn composite_rejects_bad_alpha() {
        let g = RegretKernel::linear(1.0).unwrap();
        let x = lot(&[0.0], &[1.0]);
        assert!(
            composite_regret(CompositeVariant::SharedSwitch, &x, &x, &x, 1.5, &g, &lin()).is_err()
        );
    }

    #[test]
    fn verdict_band_scales_with_terms() {
        let v = Verdict::from_difference(1e-9, 1e4);
        assert_eq!(v.direction, Preference::Indifferent);
        let v = Verdict::from_difference(-1e-9, 1.0);
        assert_eq!(v.direction, Preference::FirstPreferred);
    }
}
