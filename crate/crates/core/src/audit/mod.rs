//! Seeded brute-force property audits.
//!
//! Trial `t` of an audit with seed `s` draws its instance from ChaCha8
//! seeded with `s` on stream `t`, so any single trial can be regenerated
//! without replaying the ones before it. Each property has a `check_*`
//! function that evaluates one instance; audits loop over trials and
//! kernels, and [`replay`] re-evaluates a stored violation.

pub mod gen;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dominance::{
    basis_decompose, basis_hadamard, basis_reconstruct, cumulative_lemma_check, g_matrix,
    hadamard_norm, theta_matrix,
};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, RegretKernel};
use crate::lottery::{JointLottery, Lottery};
use crate::regret::{
    composite_regret, indifference_alpha, regret_sum, CompositeVariant, Coupling, RegretSum,
};
use crate::utility::{Utility, UtilityCurve};
use crate::INDIFFERENCE_TOL;

use self::gen::{dominating_from_rng, joint_from_rng, lottery_from_rng, rng_for};

/// Snapshots kept per report; the count is always complete.
pub const MAX_SNAPSHOTS: usize = 32;

/// Tolerance of the mixture-indifference check, relative to the term scale.
pub const CONTINUITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// No strict preference cycles among independent triples.
    Transitivity,
    /// A dominating lottery is never regret-dispreferred (independent coupling).
    Dominance,
    /// The same for dependent couplings whose theta matrix is lower-triangle ordered.
    JointDominance,
    /// Identities among the three composite-lottery readings.
    Composite,
    /// Mixture indifference for ordered triples.
    Continuity,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Self::Transitivity,
        Self::Dominance,
        Self::JointDominance,
        Self::Composite,
        Self::Continuity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Transitivity => "transitivity",
            Self::Dominance => "dominance",
            Self::JointDominance => "joint-dominance",
            Self::Composite => "composite",
            Self::Continuity => "continuity",
        }
    }

    /// Kernels audited when none are requested.
    pub fn default_kernels(&self) -> Vec<RegretKernel> {
        let sinh = |b| RegretKernel::sinh(b).expect("valid");
        let exp2 = RegretKernel::exponential(2.0, 1.0).expect("valid");
        match self {
            Self::Transitivity => vec![
                sinh(0.5),
                sinh(1.0),
                sinh(2.0),
                exp2,
                RegretKernel::linear(1.0).expect("valid"),
            ],
            Self::Dominance => vec![
                RegretKernel::linear(1.0).expect("valid"),
                sinh(0.5),
                sinh(1.0),
                sinh(2.0),
                RegretKernel::pure_regret(1.0).expect("valid"),
                exp2,
            ],
            Self::JointDominance => vec![sinh(1.0), exp2],
            Self::Composite | Self::Continuity => vec![sinh(1.0)],
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSpec(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditStatus {
    Pass,
    Fail,
    /// No violation found, but the property is not expected to hold.
    Inconclusive,
}

/// The data needed to re-evaluate one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub lotteries: Vec<Lottery>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointLottery>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl Instance {
    fn lotteries(lotteries: Vec<Lottery>) -> Self {
        Self {
            lotteries,
            joint: None,
            alpha: None,
        }
    }
}

/// Outcome of evaluating one instance under one kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub violated: bool,
    /// Excluded from the verdict (degenerate instance).
    pub flagged: bool,
    /// Property-specific normalized margin; larger is closer to failing.
    pub deviation: f64,
    pub detail: String,
}

impl Check {
    fn ok(deviation: f64) -> Self {
        Self {
            violated: false,
            flagged: false,
            deviation,
            detail: String::new(),
        }
    }

    fn fail(deviation: f64, detail: impl Into<String>) -> Self {
        Self {
            violated: true,
            flagged: false,
            deviation,
            detail: detail.into(),
        }
    }

    fn fail_if(self, cond: bool, detail: &str) -> Self {
        if self.violated || !cond {
            self
        } else {
            Self::fail(self.deviation, detail)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: u64,
    pub kernel: String,
    pub deviation: f64,
    pub detail: String,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub property: Property,
    pub seed: u64,
    pub trials: u64,
    pub kernels: Vec<String>,
    pub utility: String,
    pub status: AuditStatus,
    pub violation_count: u64,
    /// The first [`MAX_SNAPSHOTS`] violations in trial order.
    pub violations: Vec<Violation>,
    /// Largest [`Check::deviation`] over all evaluated instances.
    pub max_deviation: Option<f64>,
    pub flagged: u64,
    /// Joint candidates drawn by the rejection sampler, if one was used.
    pub generator_attempts: u64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.status == AuditStatus::Pass
    }
}

struct Collector {
    report: AuditReport,
}

impl Collector {
    fn new(
        property: Property,
        seed: u64,
        trials: u64,
        kernels: &[RegretKernel],
        u: &UtilityCurve,
    ) -> Self {
        Self {
            report: AuditReport {
                property,
                seed,
                trials,
                kernels: kernels.iter().map(ToString::to_string).collect(),
                utility: u.to_string(),
                status: AuditStatus::Pass,
                violation_count: 0,
                violations: Vec::new(),
                max_deviation: None,
                flagged: 0,
                generator_attempts: 0,
            },
        }
    }

    fn record(
        &mut self,
        trial: u64,
        kernel: &RegretKernel,
        instance: &Instance,
        check: Result<Check>,
    ) {
        let check = check.unwrap_or_else(|e| Check::fail(f64::INFINITY, e.to_string()));
        let r = &mut self.report;
        if check.deviation.is_finite() {
            r.max_deviation = Some(
                r.max_deviation
                    .map_or(check.deviation, |m| m.max(check.deviation)),
            );
        }
        if check.flagged {
            r.flagged += 1;
        }
        if check.violated {
            r.violation_count += 1;
            if r.violations.len() < MAX_SNAPSHOTS {
                r.violations.push(Violation {
                    trial,
                    kernel: kernel.to_string(),
                    deviation: check.deviation,
                    detail: check.detail,
                    instance: instance.clone(),
                });
            }
        }
    }

    fn finish(mut self, inconclusive_if_clean: bool) -> AuditReport {
        self.report.status = if self.report.violation_count > 0 {
            AuditStatus::Fail
        } else if inconclusive_if_clean {
            AuditStatus::Inconclusive
        } else {
            AuditStatus::Pass
        };
        self.report
    }
}

fn band(scale: f64) -> f64 {
    INDIFFERENCE_TOL * scale
}

fn instance_lotteries(instance: &Instance, n: usize) -> Result<&[Lottery]> {
    if instance.lotteries.len() == n {
        Ok(&instance.lotteries)
    } else {
        Err(Error::InvalidSpec(format!(
            "instance carries {} lotteries, expected {n}",
            instance.lotteries.len()
        )))
    }
}

/// Strict cycle `x ⪰ y ⪰ z ≻ x` in either orientation.
pub fn check_transitivity<K, U>(kernel: &K, u: &U, triple: &[Lottery]) -> Result<Check>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let [x, y, z] = triple else {
        return Err(Error::InvalidSpec(
            "transitivity needs three lotteries".into(),
        ));
    };
    let ind = Coupling::Independent;
    let xy = regret_sum(x, y, kernel, u, ind)?;
    let yz = regret_sum(y, z, kernel, u, ind)?;
    let zx = regret_sum(z, x, kernel, u, ind)?;
    let scale = xy.scale.max(yz.scale).max(zx.scale);
    let b = band(scale);
    let (a, c, e) = (xy.value, yz.value, zx.value);
    let forward = a <= b && c <= b && e < -b;
    let backward = -a < -b && -c <= b && -e <= b;
    let deviation = (-a).min(-c).min(-e).max(a.min(c).min(e)) / scale;
    Ok(if forward || backward {
        Check::fail(deviation, "strict preference cycle")
    } else {
        Check::ok(deviation)
    })
}

/// For `p` dominating `q`: `D(p, q) <= 1e-12 scale`, plus the partial-sum
/// lemma with `g_i = g(u_i - u_n)` on the common grid.
pub fn check_dominance<K, U>(kernel: &K, u: &U, pair: &[Lottery]) -> Result<Check>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let [p, q] = pair else {
        return Err(Error::InvalidSpec("dominance needs two lotteries".into()));
    };
    let d = regret_sum(p, q, kernel, u, Coupling::Independent)?;
    let deviation = d.value / d.scale;
    let check = Check::ok(deviation).fail_if(
        d.value > band(d.scale),
        "dominating lottery is regret-dispreferred",
    );
    if p.outcomes() != q.outcomes() {
        return Ok(check);
    }
    let grid = p.outcomes();
    let top = u.relative_utile(grid[grid.len() - 1])?;
    let gs: Vec<f64> = grid
        .iter()
        .map(|&x| Ok(kernel.g(u.relative_utile(x)? - top)))
        .collect::<Result<_>>()?;
    Ok(match cumulative_lemma_check(p.probs(), q.probs(), &gs) {
        Ok(l) => check.fail_if(!l.holds, "partial-sum lemma fails"),
        Err(e) => check.fail_if(true, &e.to_string()),
    })
}

/// Dominance under a dependent coupling, together with the basis
/// decomposition identities of its theta matrix.
pub fn check_joint_dominance<K, U>(kernel: &K, u: &U, joint: &JointLottery) -> Result<Check>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let (x, y) = (joint.marginal_x(), joint.marginal_y());
    let dj = regret_sum(&x, &y, kernel, u, Coupling::Joint(joint))?;
    let di = regret_sum(&x, &y, kernel, u, Coupling::Independent)?;
    let deviation = dj.value / dj.scale;
    let mut check = Check::ok(deviation).fail_if(
        dj.value > band(dj.scale),
        "dominating marginal is regret-dispreferred",
    );

    let t = theta_matrix(joint)?;
    let n = t.n();
    let coeffs = basis_decompose(&t);
    let rebuilt = basis_reconstruct(&coeffs);
    let recon_err = rebuilt
        .as_slice()
        .iter()
        .zip(t.theta().as_slice())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    check = check.fail_if(recon_err > 1e-14, "basis reconstruction error above 1e-14");

    let g = g_matrix(kernel, u, joint.grid_x())?;
    let norm = hadamard_norm(t.theta(), &g)?;
    let last = n - 1;
    let mut split = 0.0;
    for i in 0..last {
        for j in 0..last {
            split += coeffs[(i, j)] * basis_hadamard(&g, i, j);
        }
    }
    // theta inherits the rounding of the joint entries, so the identity is
    // measured on the engine's usual scale max(1, max |g|)
    let rel = 1e-12 * g.max_abs().max(1.0);
    check = check.fail_if(
        (norm - split).abs() > rel,
        "basis split of the Hadamard norm",
    );
    let both = 1e-12 * dj.scale.max(di.scale);
    check = check.fail_if(
        (dj.value - (di.value + norm)).abs() > both,
        "joint regret is not independent regret plus Hadamard norm",
    );

    let ut: Vec<f64> = joint
        .grid_x()
        .iter()
        .map(|&v| u.relative_utile(v))
        .collect::<Result<_>>()?;
    for i in 0..n {
        for j in 0..i {
            let bracket =
                kernel.g(ut[i] - ut[j]) + kernel.g(ut[last] - ut[i]) - kernel.g(ut[last] - ut[j]);
            let term = (t.get(i, j) - t.get(j, i)) * bracket;
            if term > 1e-12 * bracket.abs().max(1.0) {
                check = check.fail_if(true, "pairwise term is positive");
            }
        }
    }
    Ok(check)
}

/// Composite-lottery identities for `(x, y, z, alpha)`: the independent-z
/// reading equals the shared-z one, the shared-switch reading is exactly
/// `(1 - alpha)^2 D(x, y)`, and with a linear comparator every reading has
/// the sign of `(1 - alpha)(V(y) - V(x))`.
pub fn check_composite<K, U>(kernel: &K, u: &U, triple: &[Lottery], alpha: f64) -> Result<Check>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let [x, y, z] = triple else {
        return Err(Error::InvalidSpec("composite needs three lotteries".into()));
    };
    let [v1, v2, v3] = readings(kernel, u, x, y, z, alpha)?;
    let d = regret_sum(x, y, kernel, u, Coupling::Independent)?;
    let scale = v1.scale.max(v3.scale);
    let deviation = (v3.value - v1.value).abs() / scale;
    let w = 1.0 - alpha;
    let mut check = Check::ok(deviation)
        .fail_if(
            (v3.value - v1.value).abs() > band(scale),
            "independent-z reading differs",
        )
        .fail_if(
            v2.value != w * w * d.value,
            "shared-switch reading is not (1-alpha)^2 D",
        );

    let lin = RegretKernel::linear(1.0)?;
    let target = w * (y.expected_utility(u)? - x.expected_utility(u)?);
    let umax = x
        .iter()
        .chain(y.iter())
        .chain(z.iter())
        .map(|(o, _)| u.utile(o).map(f64::abs))
        .try_fold(1.0f64, |m, v| v.map(|v| m.max(v)))?;
    if target.abs() > 1e-9 * umax {
        for l in readings(&lin, u, x, y, z, alpha)? {
            if l.value * target <= 0.0 {
                check = check.fail_if(true, "linear reading disagrees with expected utility");
            }
        }
    }
    Ok(check)
}

/// Orders the three lotteries so that `p ⪰ q ⪰ r` and checks that the
/// mixture `alpha p + (1 - alpha) r` is indifferent to `q`.
pub fn check_continuity<K, U>(kernel: &K, u: &U, triple: &[Lottery]) -> Result<Check>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let [a, b, c] = triple else {
        return Err(Error::InvalidSpec(
            "continuity needs three lotteries".into(),
        ));
    };
    let ls = [a, b, c];
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let weakly = |i: usize, j: usize| -> Result<bool> {
        let s = regret_sum(ls[i], ls[j], kernel, u, Coupling::Independent)?;
        Ok(s.value <= band(s.scale))
    };
    let mut order = None;
    for perm in PERMS {
        if weakly(perm[0], perm[1])? && weakly(perm[1], perm[2])? {
            order = Some(perm);
            break;
        }
    }
    let Some([i, j, k]) = order else {
        return Ok(Check::fail(f64::INFINITY, "no weakly ordered arrangement"));
    };
    let res = indifference_alpha(ls[i], ls[j], ls[k], kernel, u)?;
    let mix = regret_sum(&res.mixture, ls[j], kernel, u, Coupling::Independent)?;
    let scale = res.scale.max(mix.scale);
    let deviation = mix.value.abs() / scale;
    if res.degenerate {
        return Ok(Check {
            violated: false,
            flagged: true,
            deviation,
            detail: "all three lotteries indifferent".into(),
        });
    }
    Ok(Check::ok(deviation)
        .fail_if(!(0.0..=1.0).contains(&res.alpha), "alpha outside [0, 1]")
        .fail_if(
            mix.value.abs() > CONTINUITY_TOL * scale,
            "mixture is not indifferent",
        ))
}

fn readings<K, U>(
    kernel: &K,
    u: &U,
    x: &Lottery,
    y: &Lottery,
    z: &Lottery,
    alpha: f64,
) -> Result<[RegretSum; 3]>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let run = |v| composite_regret(v, x, y, z, alpha, kernel, u);
    Ok([
        run(CompositeVariant::SharedZIndependentSwitches)?,
        run(CompositeVariant::SharedSwitch)?,
        run(CompositeVariant::IndependentZ)?,
    ])
}

/// Re-evaluates a stored instance.
pub fn replay(
    property: Property,
    kernel: &RegretKernel,
    u: &UtilityCurve,
    instance: &Instance,
) -> Result<Check> {
    match property {
        Property::Transitivity => check_transitivity(kernel, u, instance_lotteries(instance, 3)?),
        Property::Dominance => check_dominance(kernel, u, instance_lotteries(instance, 2)?),
        Property::JointDominance => match &instance.joint {
            Some(j) => check_joint_dominance(kernel, u, j),
            None => Err(Error::InvalidSpec(
                "joint-dominance instance carries no joint".into(),
            )),
        },
        Property::Composite => {
            let alpha = instance
                .alpha
                .ok_or_else(|| Error::InvalidSpec("composite instance carries no alpha".into()))?;
            check_composite(kernel, u, instance_lotteries(instance, 3)?, alpha)
        }
        Property::Continuity => check_continuity(kernel, u, instance_lotteries(instance, 3)?),
    }
}

/// Outcome counts drawn by [`audit_transitivity`].
pub const TRANSITIVITY_SIZES: (usize, usize) = (2, 4);

/// Triples on a common grid of 2 to 4 outcomes.
pub fn audit_transitivity(
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
) -> AuditReport {
    audit_transitivity_sized(kernels, u, trials, seed, TRANSITIVITY_SIZES)
}

pub fn audit_transitivity_sized(
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
    sizes: (usize, usize),
) -> AuditReport {
    let mut c = Collector::new(Property::Transitivity, seed, trials, kernels, u);
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let n = rng.gen_range(sizes.0..=sizes.1);
        let x = lottery_from_rng(&mut rng, n);
        let grid = x.outcomes().to_vec();
        let mut on_grid = || {
            Lottery::new(grid.clone(), gen::sample_simplex(&mut rng, n))
                .expect("simplex sample is valid")
        };
        let (y, z) = (on_grid(), on_grid());
        let inst = Instance::lotteries(vec![x, y, z]);
        for k in kernels {
            c.record(trial, k, &inst, check_transitivity(k, u, &inst.lotteries));
        }
    }
    let expect_clean = kernels.iter().all(RegretKernel::is_transitive);
    c.finish(!expect_clean)
}

/// Dominance pairs of 2 to 6 outcomes built by 1 to 5 upward mass transfers.
pub fn audit_dominance(
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
) -> AuditReport {
    let mut c = Collector::new(Property::Dominance, seed, trials, kernels, u);
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let n = rng.gen_range(2..=6);
        let transfers = rng.gen_range(1..=5);
        let q = lottery_from_rng(&mut rng, n);
        let p = dominating_from_rng(&mut rng, &q, transfers);
        let inst = Instance::lotteries(vec![p, q]);
        for k in kernels {
            c.record(trial, k, &inst, check_dominance(k, u, &inst.lotteries));
        }
    }
    c.finish(false)
}

/// Rejection-sampled couplings of 2 to 4 outcomes.
pub fn audit_joint_dominance(
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
) -> AuditReport {
    let mut c = Collector::new(Property::JointDominance, seed, trials, kernels, u);
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let n = rng.gen_range(2..=4);
        let sample = match joint_from_rng(&mut rng, n) {
            Ok(s) => s,
            Err(e) => {
                c.report.generator_attempts += u64::from(gen::JOINT_ATTEMPTS);
                let inst = Instance::lotteries(Vec::new());
                for k in kernels {
                    c.record(trial, k, &inst, Err(e.clone()));
                }
                continue;
            }
        };
        c.report.generator_attempts += u64::from(sample.attempts);
        let inst = Instance {
            lotteries: vec![sample.joint.marginal_x(), sample.joint.marginal_y()],
            joint: Some(sample.joint),
            alpha: None,
        };
        for k in kernels {
            let j = inst.joint.as_ref().expect("set above");
            c.record(trial, k, &inst, check_joint_dominance(k, u, j));
        }
    }
    c.finish(false)
}

/// Independent `x, y, z` of 1 to 4 outcomes and `alpha` uniform on `[0, 1]`.
pub fn audit_composite(
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
) -> AuditReport {
    let mut c = Collector::new(Property::Composite, seed, trials, kernels, u);
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let mut draw = || {
            let n = rng.gen_range(1..=4);
            lottery_from_rng(&mut rng, n)
        };
        let ls = vec![draw(), draw(), draw()];
        let alpha = rng.gen_range(0.0..=1.0);
        let inst = Instance {
            lotteries: ls,
            joint: None,
            alpha: Some(alpha),
        };
        for k in kernels {
            c.record(
                trial,
                k,
                &inst,
                check_composite(k, u, &inst.lotteries, alpha),
            );
        }
    }
    c.finish(false)
}

/// Independent triples of 1 to 4 outcomes each, in any order.
pub fn audit_continuity(
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
) -> AuditReport {
    let mut c = Collector::new(Property::Continuity, seed, trials, kernels, u);
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let mut draw = || {
            let n = rng.gen_range(1..=4);
            lottery_from_rng(&mut rng, n)
        };
        let inst = Instance::lotteries(vec![draw(), draw(), draw()]);
        for k in kernels {
            c.record(trial, k, &inst, check_continuity(k, u, &inst.lotteries));
        }
    }
    c.finish(false)
}

pub fn run(
    property: Property,
    kernels: &[RegretKernel],
    u: &UtilityCurve,
    trials: u64,
    seed: u64,
) -> AuditReport {
    match property {
        Property::Transitivity => audit_transitivity(kernels, u, trials, seed),
        Property::Dominance => audit_dominance(kernels, u, trials, seed),
        Property::JointDominance => audit_joint_dominance(kernels, u, trials, seed),
        Property::Composite => audit_composite(kernels, u, trials, seed),
        Property::Continuity => audit_continuity(kernels, u, trials, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lottery::diagonal_coupling;

    fn lin_u() -> UtilityCurve {
        UtilityCurve::linear()
    }

    fn lot(x: &[f64], p: &[f64]) -> Lottery {
        Lottery::new(x.to_vec(), p.to_vec()).unwrap()
    }

    #[test]
    fn small_audits_pass() {
        let u = lin_u();
        for p in [
            Property::Dominance,
            Property::JointDominance,
            Property::Composite,
            Property::Continuity,
        ] {
            let r = run(p, &p.default_kernels(), &u, 200, 1);
            assert_eq!(
                r.status,
                AuditStatus::Pass,
                "{p}: {:?}",
                r.violations.first()
            );
        }
        let r = run(
            Property::Transitivity,
            &Property::Transitivity.default_kernels(),
            &u,
            200,
            1,
        );
        assert!(r.passed());
    }

    #[test]
    fn audits_are_deterministic() {
        let k = [RegretKernel::sinh(1.0).unwrap()];
        let a = audit_continuity(&k, &lin_u(), 50, 9);
        let b = audit_continuity(&k, &lin_u(), 50, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn equal_pair_has_zero_difference() {
        let k = RegretKernel::sinh(1.0).unwrap();
        let x = lot(&[0.0, 2.0], &[0.3, 0.7]);
        let c = check_dominance(&k, &lin_u(), &[x.clone(), x]).unwrap();
        assert!(!c.violated);
        assert_eq!(c.deviation, 0.0);
    }

    #[test]
    fn self_diagonal_coupling_is_neutral() {
        let k = RegretKernel::sinh(1.0).unwrap();
        let j = diagonal_coupling(&lot(&[0.0, 1.0, 3.0], &[0.2, 0.5, 0.3]));
        let d = regret_sum(
            &j.marginal_x(),
            &j.marginal_y(),
            &k,
            &lin_u(),
            Coupling::Joint(&j),
        )
        .unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn continuity_edge_cases() {
        let k = RegretKernel::linear(2.0).unwrap();
        let x = lot(&[0.0, 1.0], &[0.5, 0.5]);
        let c = check_continuity(&k, &lin_u(), &[x.clone(), x.clone(), x.clone()]).unwrap();
        assert!(c.flagged && !c.violated);
        let p = lot(&[1.0], &[1.0]);
        let res = indifference_alpha(&p, &x, &x, &k, &lin_u()).unwrap();
        assert_eq!(res.alpha, 0.0);
    }

    #[test]
    fn transitive_kernels_with_no_violation_pass() {
        let r = audit_transitivity(&[RegretKernel::linear(1.0).unwrap()], &lin_u(), 100, 3);
        assert_eq!(r.status, AuditStatus::Pass);
        let r = audit_transitivity(&[RegretKernel::Tanh], &lin_u(), 1, 3);
        assert_ne!(r.status, AuditStatus::Pass);
    }

    #[test]
    fn replay_reproduces_checks() {
        let k = RegretKernel::sinh(1.0).unwrap();
        let r = audit_composite(&[k], &lin_u(), 1, 4);
        assert!(r.passed());
        let mut rng = rng_for(4, 0);
        let mut draw = || {
            let n = rng.gen_range(1..=4);
            lottery_from_rng(&mut rng, n)
        };
        let ls = vec![draw(), draw(), draw()];
        let alpha = rng.gen_range(0.0..=1.0);
        let inst = Instance {
            lotteries: ls.clone(),
            joint: None,
            alpha: Some(alpha),
        };
        assert_eq!(
            replay(Property::Composite, &k, &lin_u(), &inst).unwrap(),
            check_composite(&k, &lin_u(), &ls, alpha).unwrap()
        );
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }
}
