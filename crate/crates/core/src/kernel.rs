//! Regret kernels `f` and their net comparators `g(d) = f(d) - f(-d)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math;
use crate::utility::{UtilityCurve, UtilityFamily};

/// A regret kernel. Implementors must satisfy `f(d >= 0) >= 0`,
/// `f(d <= 0) <= 0` and `f(0) = 0`; `g` must be odd and nondecreasing.
pub trait Kernel {
    fn f(&self, d: f64) -> f64;

    fn g(&self, d: f64) -> f64 {
        self.f(d) - self.f(-d)
    }
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn f(&self, d: f64) -> f64 {
        (**self).f(d)
    }

    fn g(&self, d: f64) -> f64 {
        (**self).g(d)
    }
}

/// The parametric kernel families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegretKernel {
    /// `f(d) = a d / 2`, so `g(d) = a d`: expected utility.
    Linear { a: f64 },
    /// `f(d) = b (a^d - 1)`, `g(d) = b (a^d - a^-d)`: the transitive family.
    Exponential { a: f64, b: f64 },
    /// `g(d) = sinh(d / beta)`, the exponential family with `a = e^(1/beta)`, `b = 1/2`.
    Sinh { beta: f64 },
    /// `f(d) = a max(d, 0)`.
    PureRegret { a: f64 },
    /// `f(d) = a min(d, 0)`.
    PureAppreciation { a: f64 },
    /// `g(d) = tanh(d)`. Odd and increasing but neither super-additive nor transitive.
    Tanh,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

impl RegretKernel {
    pub fn linear(a: f64) -> Result<Self> {
        Ok(Self::Linear {
            a: positive("a", a)?,
        })
    }

    pub fn exponential(a: f64, b: f64) -> Result<Self> {
        let a = positive("a", a)?;
        if a <= 1.0 {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "base must exceed 1 for f to keep the sign of its argument",
            });
        }
        Ok(Self::Exponential {
            a,
            b: positive("b", b)?,
        })
    }

    pub fn sinh(beta: f64) -> Result<Self> {
        Ok(Self::Sinh {
            beta: positive("beta", beta)?,
        })
    }

    pub fn pure_regret(a: f64) -> Result<Self> {
        Ok(Self::PureRegret {
            a: positive("a", a)?,
        })
    }

    pub fn pure_appreciation(a: f64) -> Result<Self> {
        Ok(Self::PureAppreciation {
            a: positive("a", a)?,
        })
    }

    /// Whether regret preference under this kernel is transitive for
    /// independent lotteries (the exponential family and its linear limit).
    pub fn is_transitive(&self) -> bool {
        !matches!(self, Self::Tanh)
    }

    /// `g(d)` with an overflow check.
    pub fn eval_g(&self, d: f64) -> Result<f64> {
        crate::error::check_finite("utility difference", d)?;
        let v = self.g(d);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow {
                what: "regret comparator g",
                exponent: self.log_magnitude(d),
            })
        }
    }

    fn log_magnitude(&self, d: f64) -> f64 {
        match *self {
            Self::Sinh { beta } => math::ln_sinh((d / beta).abs()),
            Self::Exponential { a, b } => (d * math::ln(a)).abs() + math::ln(b),
            _ => math::ln(d.abs()),
        }
    }
}

impl Kernel for RegretKernel {
    fn f(&self, d: f64) -> f64 {
        match *self {
            Self::Linear { a } => a * d / 2.0,
            Self::Exponential { a, b } => b * (math::powf(a, d) - 1.0),
            Self::Sinh { beta } => libm::expm1(d / beta) / 2.0,
            Self::PureRegret { a } => a * d.max(0.0),
            Self::PureAppreciation { a } => a * d.min(0.0),
            Self::Tanh => math::tanh(d) / 2.0,
        }
    }

    fn g(&self, d: f64) -> f64 {
        match *self {
            Self::Linear { a } | Self::PureRegret { a } | Self::PureAppreciation { a } => a * d,
            Self::Exponential { a, b } => b * (math::powf(a, d) - math::powf(a, -d)),
            Self::Sinh { beta } => math::sinh(d / beta),
            Self::Tanh => math::tanh(d),
        }
    }
}

impl fmt::Display for RegretKernel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Linear { a } => write!(out, "linear:a={a}"),
            Self::Exponential { a, b } => write!(out, "exp:a={a},b={b}"),
            Self::Sinh { beta } => write!(out, "sinh:beta={beta}"),
            Self::PureRegret { a } => write!(out, "regret:a={a}"),
            Self::PureAppreciation { a } => write!(out, "appreciation:a={a}"),
            Self::Tanh => out.write_str("tanh"),
        }
    }
}

/// Parsed `family:key=value,...` string.
struct SpecParts<'a> {
    src: &'a str,
    family: &'a str,
    params: Vec<(&'a str, f64)>,
}

impl<'a> SpecParts<'a> {
    fn parse(src: &'a str) -> Result<Self> {
        let bad = || Error::InvalidSpec(src.to_string());
        let src = src.trim();
        let (family, rest) = match src.split_once(':') {
            Some((f, r)) => (f.trim(), Some(r)),
            None => (src, None),
        };
        if family.is_empty() {
            return Err(bad());
        }
        let mut params = Vec::new();
        if let Some(rest) = rest {
            for item in rest.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(bad)?;
                let v: f64 = v.trim().parse().map_err(|_| bad())?;
                let k = k.trim();
                if params.iter().any(|&(seen, _)| seen == k) {
                    return Err(bad());
                }
                params.push((k, v));
            }
        }
        Ok(Self {
            src,
            family,
            params,
        })
    }

    fn take(&mut self, key: &str) -> Option<f64> {
        let pos = self.params.iter().position(|&(k, _)| k == key)?;
        Some(self.params.remove(pos).1)
    }

    fn require(&mut self, key: &str) -> Result<f64> {
        self.take(key)
            .ok_or_else(|| Error::InvalidSpec(format!("{}: missing `{key}`", self.src)))
    }

    fn finish(self) -> Result<()> {
        match self.params.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::InvalidSpec(format!(
                "{}: unknown key `{k}`",
                self.src
            ))),
        }
    }
}

impl FromStr for RegretKernel {
    type Err = Error;

    /// `linear[:a=..]`, `exp:a=..,b=..`, `sinh:beta=..`, `regret[:a=..]`,
    /// `appreciation[:a=..]`, `tanh`.
    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SpecParts::parse(s)?;
        let kernel = match spec.family {
            "linear" => Self::linear(spec.take("a").unwrap_or(1.0))?,
            "exp" | "exponential" => {
                let a = spec.require("a")?;
                let b = spec.take("b").unwrap_or(1.0);
                Self::exponential(a, b)?
            }
            "sinh" => Self::sinh(spec.require("beta")?)?,
            "regret" => Self::pure_regret(spec.take("a").unwrap_or(1.0))?,
            "appreciation" => Self::pure_appreciation(spec.take("a").unwrap_or(1.0))?,
            "tanh" => Self::Tanh,
            _ => return Err(Error::InvalidSpec(String::from(s))),
        };
        spec.finish()?;
        Ok(kernel)
    }
}

impl FromStr for UtilityCurve {
    type Err = Error;

    /// `linear` or `log:gamma=..`, each optionally with `scale=..` and `shift=..`.
    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SpecParts::parse(s)?;
        let mut u = match spec.family {
            "linear" => UtilityCurve::linear(),
            "log" => UtilityCurve::log(spec.require("gamma")?)?,
            _ => return Err(Error::InvalidSpec(String::from(s))),
        };
        if let Some(b) = spec.take("scale") {
            u = u.scaled(b)?;
        }
        if let Some(a) = spec.take("shift") {
            u = u.shifted(a)?;
        }
        spec.finish()?;
        Ok(u)
    }
}

impl fmt::Display for UtilityCurve {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            UtilityFamily::Linear => out.write_str("linear")?,
            UtilityFamily::Log { gamma } => write!(out, "log:gamma={gamma}")?,
        }
        let mut sep = if matches!(self.family(), UtilityFamily::Linear) {
            ':'
        } else {
            ','
        };
        if self.scale() != 1.0 {
            write!(out, "{sep}scale={}", self.scale())?;
            sep = ',';
        }
        let shift = crate::utility::Utility::shift(self);
        if shift != 0.0 {
            write!(out, "{sep}shift={shift}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn families() -> Vec<RegretKernel> {
        vec![
            RegretKernel::linear(2.0).unwrap(),
            RegretKernel::exponential(2.0, 0.7).unwrap(),
            RegretKernel::sinh(0.5).unwrap(),
            RegretKernel::sinh(1.0).unwrap(),
            RegretKernel::pure_regret(1.5).unwrap(),
            RegretKernel::pure_appreciation(1.5).unwrap(),
            RegretKernel::Tanh,
        ]
    }

    fn grid() -> impl Iterator<Item = f64> {
        (-5000..=5000).map(|k| k as f64 * 0.01)
    }

    #[test]
    fn eval_g_examples() {
        let s = RegretKernel::sinh(1.0).unwrap();
        assert_eq!(s.eval_g(0.0).unwrap(), 0.0);
        // sinh(1.593) = 2.3570...
        assert!((s.eval_g(1.593).unwrap() - 2.357).abs() < 1e-3);
        let l = RegretKernel::linear(2.0).unwrap();
        assert_eq!(l.eval_g(-3.0).unwrap(), -6.0);
    }

    #[test]
    fn eval_g_large_arguments() {
        let s = RegretKernel::sinh(0.01).unwrap();
        assert!(s.eval_g(7.0).unwrap().is_finite()); // t = 700
        assert!(matches!(s.eval_g(8.0), Err(Error::Overflow { .. })));
    }

    #[test]
    fn antisymmetric_and_monotone_on_grid() {
        for k in families() {
            let mut prev = f64::NEG_INFINITY;
            for d in grid() {
                let gd = k.g(d);
                assert!(
                    (gd + k.g(-d)).abs() <= 1e-12 * gd.abs().max(1.0),
                    "{k} at {d}"
                );
                assert!(gd >= prev, "{k} not monotone at {d}");
                prev = gd;
            }
        }
    }

    #[test]
    fn f_sign_property() {
        for k in families() {
            assert_eq!(k.f(0.0), 0.0, "{k}");
            for d in grid() {
                if d >= 0.0 {
                    assert!(k.f(d) >= 0.0, "{k} at {d}");
                }
                if d <= 0.0 {
                    assert!(k.f(d) <= 0.0, "{k} at {d}");
                }
            }
        }
    }

    #[test]
    fn g_matches_f_difference() {
        for k in families() {
            for d in grid().step_by(37) {
                let via_f = k.f(d) - k.f(-d);
                assert!(
                    (k.g(d) - via_f).abs() <= 1e-9 * via_f.abs().max(1.0),
                    "{k} {d}"
                );
            }
        }
    }

    #[test]
    fn sinh_is_exponential_family() {
        for &beta in &[0.25, 0.5, 1.0, 2.0, 7.0] {
            let s = RegretKernel::sinh(beta).unwrap();
            let e = RegretKernel::Exponential {
                a: libm::exp(1.0 / beta),
                b: 0.5,
            };
            let mut d = -30.0 * beta;
            while d <= 30.0 * beta {
                let want = s.g(d);
                assert!(
                    (e.g(d) - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "beta={beta} d={d}"
                );
                d += beta * 0.013;
            }
        }
    }

    #[test]
    fn construction_validates_parameters() {
        assert!(RegretKernel::sinh(0.0).is_err());
        assert!(RegretKernel::linear(-1.0).is_err());
        assert!(RegretKernel::exponential(0.5, 1.0).is_err());
        assert!(RegretKernel::exponential(2.0, 0.0).is_err());
        assert!(RegretKernel::pure_regret(f64::NAN).is_err());
    }

    #[test]
    fn spec_strings() {
        assert_eq!(
            "sinh:beta=1.0".parse::<RegretKernel>().unwrap(),
            RegretKernel::Sinh { beta: 1.0 }
        );
        assert_eq!(
            "exp:a=2.5,b=0.5".parse::<RegretKernel>().unwrap(),
            RegretKernel::Exponential { a: 2.5, b: 0.5 }
        );
        assert_eq!(
            "linear:a=1".parse::<RegretKernel>().unwrap(),
            RegretKernel::Linear { a: 1.0 }
        );
        assert_eq!("tanh".parse::<RegretKernel>().unwrap(), RegretKernel::Tanh);
        assert!("sinh".parse::<RegretKernel>().is_err());
        assert!("sinh:beta=1,gamma=2".parse::<RegretKernel>().is_err());
        assert!("cosh:beta=1".parse::<RegretKernel>().is_err());
        assert!("sinh:beta=abc".parse::<RegretKernel>().is_err());

        let u: UtilityCurve = "log:gamma=0.021".parse().unwrap();
        assert_eq!(u, UtilityCurve::log(0.021).unwrap());
        assert_eq!(
            "linear".parse::<UtilityCurve>().unwrap(),
            UtilityCurve::linear()
        );
        assert!("log".parse::<UtilityCurve>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for k in families() {
            let s = alloc::format!("{k}");
            assert_eq!(s.parse::<RegretKernel>().unwrap(), k);
        }
        for s in [
            "linear",
            "log:gamma=0.021",
            "log:gamma=2,scale=3,shift=0.5",
            "linear:shift=-1",
        ] {
            let u: UtilityCurve = s.parse().unwrap();
            let again: UtilityCurve = alloc::format!("{u}").parse().unwrap();
            assert_eq!(u, again, "{s}");
        }
    }
}
