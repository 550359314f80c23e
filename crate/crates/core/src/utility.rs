//! Utility curves `u(x)`.

use crate::error::{check_finite, Error, Result};
use crate::math;

/// A strictly increasing utility of money.
///
/// Regret only ever looks at utility differences, so implementors report the
/// curve relative to an additive constant ([`Utility::relative_utile`]) and
/// expose that constant separately. The engine forms differences from the
/// relative values, which makes results exactly invariant under shifts.
pub trait Utility {
    /// `u(x) - shift()`.
    fn relative_utile(&self, x: f64) -> Result<f64>;

    fn shift(&self) -> f64 {
        0.0
    }

    fn utile(&self, x: f64) -> Result<f64> {
        Ok(self.relative_utile(x)? + self.shift())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFamily {
    /// `u(x) = x`
    Linear,
    /// `u(x) = ln(x / gamma + 1)`, defined for `x > -gamma`.
    Log { gamma: f64 },
}

/// `u(x) = scale * base(x) + shift` for one of the supported base families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityCurve {
    family: UtilityFamily,
    scale: f64,
    shift: f64,
}

impl UtilityCurve {
    pub fn linear() -> Self {
        Self {
            family: UtilityFamily::Linear,
            scale: 1.0,
            shift: 0.0,
        }
    }

    pub fn log(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "log utility threshold must be positive and finite",
            });
        }
        Ok(Self {
            family: UtilityFamily::Log { gamma },
            scale: 1.0,
            shift: 0.0,
        })
    }

    /// Same curve plus a constant.
    pub fn shifted(self, a: f64) -> Result<Self> {
        check_finite("utility shift", a)?;
        Ok(Self {
            shift: self.shift + a,
            ..self
        })
    }

    /// Same curve multiplied by `b > 0`.
    pub fn scaled(self, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: b,
                reason: "utility scale must be positive and finite",
            });
        }
        Ok(Self {
            scale: self.scale * b,
            shift: self.shift * b,
            ..self
        })
    }

    pub fn family(&self) -> UtilityFamily {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn base(&self, x: f64) -> Result<f64> {
        check_finite("money", x)?;
        match self.family {
            UtilityFamily::Linear => Ok(x),
            UtilityFamily::Log { gamma } => {
                let r = x / gamma;
                if r + 1.0 <= 0.0 {
                    return Err(Error::DomainError {
                        x,
                        reason: "log utility requires x / gamma + 1 > 0",
                    });
                }
                Ok(math::ln(r + 1.0))
            }
        }
    }
}

impl Utility for UtilityCurve {
    fn relative_utile(&self, x: f64) -> Result<f64> {
        Ok(self.scale * self.base(x)?)
    }

    fn shift(&self) -> f64 {
        self.shift
    }
}

impl<U: Utility + ?Sized> Utility for &U {
    fn relative_utile(&self, x: f64) -> Result<f64> {
        (**self).relative_utile(x)
    }

    fn shift(&self) -> f64 {
        (**self).shift()
    }
}
