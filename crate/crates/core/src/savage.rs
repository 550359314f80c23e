//! Savage's omelet: five good eggs in a bowl, a sixth of unknown quality.
//!
//! State 0 is "the sixth egg is rotten" (probability `p`), state 1 is "it is
//! good". The acts are
//!
//! * A1: break it into the bowl, giving `(u_-5, u_6)`; the state is revealed.
//! * A2: throw it away, giving `u_5` either way. The state is never revealed,
//!   and in the good state the loss of a good egg `z < 0` is part of the
//!   act's full consequence `u_5 + z` without ever being experienced.
//! * A3: break it into a saucer, giving `(u_5 + w, u_6 + w)`; revealed.

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{check_finite, Error, Result};
use crate::kernel::Kernel;
use crate::regret::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmeletParams {
    /// Probability that the sixth egg is rotten.
    pub p: f64,
    pub u6: f64,
    pub u5: f64,
    pub u_minus5: f64,
    /// Utility of a good egg thrown away.
    pub z: f64,
    /// Utility of washing the saucer.
    pub w: f64,
}

impl OmeletParams {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("p", self.p),
            ("u6", self.u6),
            ("u5", self.u5),
            ("u_minus5", self.u_minus5),
            ("z", self.z),
            ("w", self.w),
        ] {
            check_finite(what, v)?;
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: self.p,
                reason: "probability must lie in [0, 1]",
            });
        }
        let fail = |m: &str| Err(Error::OrderingViolation(m.into()));
        if !(self.u6 > self.u5 && self.u5 > self.u_minus5) {
            return fail("u6 > u5 > u_minus5 is required");
        }
        if !(self.u_minus5 < 0.0) {
            return fail("u_minus5 must be negative");
        }
        if !(self.z < 0.0) {
            return fail("z must be negative");
        }
        if self.w > 0.0 {
            return fail("w must not be positive");
        }
        Ok(())
    }

    pub fn states(&self) -> [f64; 2] {
        [self.p, 1.0 - self.p]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Act {
    /// Utility of the act's full consequence in each state.
    pub full: Vec<f64>,
    /// Utility actually experienced in each state.
    pub obtained: Vec<f64>,
    /// Whether taking the act reveals the state.
    pub resolves: bool,
}

impl Act {
    pub fn resolving(full: Vec<f64>) -> Self {
        Self {
            obtained: full.clone(),
            full,
            resolves: true,
        }
    }

    pub fn unresolving(full: Vec<f64>, obtained: f64) -> Self {
        let n = full.len();
        Self {
            full,
            obtained: vec![obtained; n],
            resolves: false,
        }
    }

    pub fn states(&self) -> usize {
        self.full.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Omelet {
    pub a1: Act,
    pub a2: Act,
    pub a3: Act,
    /// Set when `w = 0`, which makes A3 weakly dominate A1 statewise.
    pub zero_washing_cost: bool,
}

pub fn omelet_acts(params: &OmeletParams) -> Result<Omelet> {
    params.validate()?;
    let OmeletParams {
        u6,
        u5,
        u_minus5,
        z,
        w,
        ..
    } = *params;
    Ok(Omelet {
        a1: Act::resolving(vec![u_minus5, u6]),
        a2: Act::unresolving(vec![u5, u5 + z], u5),
        a3: Act::resolving(vec![u5 + w, u6 + w]),
        zero_washing_cost: w == 0.0,
    })
}

/// `sum_s π_s f(cf.full[s] - taken.obtained[s])`: regret about not having
/// taken `cf` after taking `taken`.
pub fn regret_of_not<K: Kernel + ?Sized>(
    cf: &Act,
    taken: &Act,
    f: &K,
    probs: &[f64],
) -> Result<f64> {
    if cf.states() != taken.states() || taken.obtained.len() != taken.states() {
        return Err(Error::StateMismatch {
            left: cf.states(),
            right: taken.states(),
        });
    }
    if probs.len() != cf.states() {
        return Err(Error::StateMismatch {
            left: cf.states(),
            right: probs.len(),
        });
    }
    let mut total = 0.0;
    for ((pi, c), t) in probs.iter().zip(&cf.full).zip(&taken.obtained) {
        if *pi != 0.0 {
            total += pi * f.f(c - t);
        }
    }
    check_finite("act regret", total)
}

/// Pairwise act comparison: the difference is `R(b | a) - R(a | b)`, and
/// `a` is preferred when it is not positive.
pub fn prefer_act<K: Kernel + ?Sized>(a: &Act, b: &Act, f: &K, probs: &[f64]) -> Result<Verdict> {
    let b_given_a = regret_of_not(b, a, f, probs)?;
    let a_given_b = regret_of_not(a, b, f, probs)?;
    let scale = 1.0f64.max(b_given_a.abs()).max(a_given_b.abs());
    Ok(Verdict::from_difference(b_given_a - a_given_b, scale))
}

/// `(1 - p)(u6 - u5 - z/2) - p(u5 - u_-5)`: positive iff A1 is preferred to
/// A2 under a linear kernel.
pub fn break_egg_margin(params: &OmeletParams) -> f64 {
    let p = params.p;
    (1.0 - p) * (params.u6 - params.u5 - params.z / 2.0) - p * (params.u5 - params.u_minus5)
}

/// `p(u5 - u_-5) < (1 - p)(u6 - u5 - z/2)`.
pub fn break_egg_closed_form(params: &OmeletParams) -> bool {
    let p = params.p;
    p * (params.u5 - params.u_minus5) < (1.0 - p) * (params.u6 - params.u5 - params.z / 2.0)
}

/// Formal expected-utility rule that counts the unexperienced loss `z` in
/// full: A1 iff `p(u5 - u_-5) < (1 - p)(u6 - u5 - z)`. Kept only as a foil.
pub fn naive_eu_prefers_a1(params: &OmeletParams) -> bool {
    let p = params.p;
    p * (params.u5 - params.u_minus5) < (1.0 - p) * (params.u6 - params.u5 - params.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RegretKernel;
    use crate::regret::Preference;

    fn base() -> OmeletParams {
        OmeletParams {
            p: 0.1,
            u6: 6.0,
            u5: 5.0,
            u_minus5: -5.0,
            z: -1.0,
            w: -0.1,
        }
    }

    fn identity_f() -> RegretKernel {
        // f(x) = a x / 2 with a = 2
        RegretKernel::linear(2.0).unwrap()
    }

    #[test]
    fn acts_examples() {
        let o = omelet_acts(&base()).unwrap();
        assert_eq!(o.a1.full, vec![-5.0, 6.0]);
        assert_eq!(o.a2.full, vec![5.0, 4.0]);
        assert_eq!(o.a2.obtained, vec![5.0, 5.0]);
        assert!(!o.a2.resolves);
        assert_eq!(o.a3.full, vec![4.9, 5.9]);
        assert!(!o.zero_washing_cost);

        let bad = OmeletParams { z: 1.0, ..base() };
        assert!(matches!(
            omelet_acts(&bad),
            Err(Error::OrderingViolation(_))
        ));
        let free = OmeletParams { w: 0.0, ..base() };
        assert!(omelet_acts(&free).unwrap().zero_washing_cost);
    }

    #[test]
    fn regret_of_not_examples() {
        let params = base();
        let o = omelet_acts(&params).unwrap();
        let f = identity_f();
        let pi = params.states();
        let r12 = regret_of_not(&o.a1, &o.a2, &f, &pi).unwrap();
        assert!((r12 + 0.1).abs() < 1e-12, "{r12}");
        let r21 = regret_of_not(&o.a2, &o.a1, &f, &pi).unwrap();
        assert!((r21 + 0.8).abs() < 1e-12, "{r21}");
        assert_eq!(regret_of_not(&o.a1, &o.a1, &f, &pi).unwrap(), 0.0);
        let three = Act::resolving(vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            regret_of_not(&three, &o.a1, &f, &pi),
            Err(Error::StateMismatch { .. })
        ));
    }

    #[test]
    fn prefer_act_examples() {
        let params = base();
        let o = omelet_acts(&params).unwrap();
        let v = prefer_act(&o.a1, &o.a2, &identity_f(), &params.states()).unwrap();
        assert_eq!(v.direction, Preference::FirstPreferred);
        assert!(break_egg_closed_form(&params));

        let fixture = OmeletParams {
            p: 0.2,
            z: -2.0,
            ..base()
        };
        let o = omelet_acts(&fixture).unwrap();
        let v = prefer_act(&o.a1, &o.a2, &identity_f(), &fixture.states()).unwrap();
        assert_eq!(v.direction, Preference::SecondPreferred);
        assert!(!break_egg_closed_form(&fixture));
        assert!(naive_eu_prefers_a1(&fixture));

        let v = prefer_act(&o.a1, &o.a1, &identity_f(), &fixture.states()).unwrap();
        assert_eq!(v.direction, Preference::Indifferent);
    }

    #[test]
    fn certain_good_egg_always_breaks() {
        for z in [-3.0, -1.0, -1e-6] {
            assert!(break_egg_closed_form(&OmeletParams {
                p: 0.0,
                z,
                ..base()
            }));
        }
    }

    #[test]
    fn regret_after_discarding_ignores_z() {
        let params = base();
        let pi = params.states();
        let f = RegretKernel::sinh(1.0).unwrap();
        let o = omelet_acts(&params).unwrap();
        let o2 = omelet_acts(&OmeletParams { z: -2.5, ..params }).unwrap();
        for cf in [&o.a1, &o.a3] {
            assert_eq!(
                regret_of_not(cf, &o.a2, &f, &pi).unwrap(),
                regret_of_not(cf, &o2.a2, &f, &pi).unwrap()
            );
        }
    }

    #[test]
    fn washing_free_saucer_beats_breaking_into_bowl() {
        let params = OmeletParams { w: 0.0, ..base() };
        let o = omelet_acts(&params).unwrap();
        for k in [
            identity_f(),
            RegretKernel::sinh(0.5).unwrap(),
            RegretKernel::pure_regret(1.0).unwrap(),
        ] {
            let v = prefer_act(&o.a3, &o.a1, &k, &params.states()).unwrap();
            assert_eq!(v.direction, Preference::FirstPreferred);
        }
    }
}
