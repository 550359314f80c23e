//! Scalar helpers that stay finite where the naive formulas overflow.

use core::f64::consts::LN_2;

/// Beyond this argument `sinh` is evaluated through its exponential tail.
pub const SINH_TAIL: f64 = 30.0;

/// `sinh(t)` with the large-argument branch evaluated in log domain.
///
/// Finite for `|t| <= 709`; returns a signed infinity beyond the representable range.
pub fn sinh(t: f64) -> f64 {
    let a = t.abs();
    if a < SINH_TAIL {
        libm::sinh(t)
    } else {
        let mag = libm::exp(a + libm::log1p(-libm::exp(-2.0 * a)) - LN_2);
        if t < 0.0 {
            -mag
        } else {
            mag
        }
    }
}

/// `ln(sinh(t))` for `t >= 0`; `-inf` at zero. Never overflows.
pub fn ln_sinh(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t == 0.0 {
        f64::NEG_INFINITY
    } else if t < SINH_TAIL {
        libm::log(libm::sinh(t))
    } else {
        t - LN_2 + libm::log1p(-libm::exp(-2.0 * t))
    }
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

pub fn powf(base: f64, e: f64) -> f64 {
    libm::pow(base, e)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Sign as -1, 0 or +1.
pub fn signum0(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}
