//! The Allais menu, the regret conditions for each of its two choices, and
//! the threshold `ζ(β)` below which a sinh-kernel, log-utility agent shows
//! the (I, IV) pattern.
//!
//! Base outcomes are `0, 1, 5` (millions), mapped to `o = s * x + t`:
//!
//! ```text
//!   I   = sure(o1)
//!   II  = (o0, o1, o5) with (0.01, 0.89, 0.10)
//!   III = (o0, o1)     with (0.89, 0.11)
//!   IV  = (o0, o5)     with (0.90, 0.10)
//! ```

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{check_finite, Error, Result};
use crate::kernel::Kernel;
use crate::lottery::Lottery;
use crate::math;
use crate::utility::Utility;
use crate::INDIFFERENCE_TOL;

/// Lower end of the `ζ` search bracket.
pub const ZETA_LO: f64 = 1e-12;
/// Upper end of the `ζ` search bracket, just above the small-β limit 1/3.
pub const ZETA_HI: f64 = 0.34;
/// Gap above which super-additivity counts as strict.
pub const STRICT_GAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AllaisMenu {
    pub scale: f64,
    pub shift: f64,
    pub o0: f64,
    pub o1: f64,
    pub o5: f64,
    pub i: Lottery,
    pub ii: Lottery,
    pub iii: Lottery,
    pub iv: Lottery,
}

impl AllaisMenu {
    /// The same four lotteries written over three columns each, with the
    /// shared column last. They canonicalize to the standard menu.
    pub fn reformulated(&self) -> [Lottery; 4] {
        let (o0, o1, o5) = (self.o0, self.o1, self.o5);
        let p = vec![0.01, 0.1, 0.89];
        let mk = |xs: [f64; 3]| Lottery::new(xs.to_vec(), p.clone()).expect("fixed menu is valid");
        [
            mk([o1, o1, o1]),
            mk([o0, o5, o1]),
            mk([o1, o1, o0]),
            mk([o0, o5, o0]),
        ]
    }
}

pub fn allais_menu(scale: f64, shift: f64) -> Result<AllaisMenu> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "scale",
            value: scale,
            reason: "menu scale must be positive and finite",
        });
    }
    check_finite("menu shift", shift)?;
    let (o0, o1, o5) = (shift, scale + shift, 5.0 * scale + shift);
    if !(o0 < o1 && o1 < o5) {
        return Err(Error::InvalidParameter {
            name: "scale",
            value: scale,
            reason: "menu outcomes collapse at this shift",
        });
    }
    Ok(AllaisMenu {
        scale,
        shift,
        o0,
        o1,
        o5,
        i: Lottery::sure(o1)?,
        ii: Lottery::new(vec![o0, o1, o5], vec![0.01, 0.89, 0.10])?,
        iii: Lottery::new(vec![o0, o1], vec![0.89, 0.11])?,
        iv: Lottery::new(vec![o0, o5], vec![0.90, 0.10])?,
    })
}

/// Signed condition value together with the largest `|g|` that entered it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub value: f64,
    pub scale: f64,
}

impl Condition {
    pub fn in_band(&self) -> bool {
        self.value.abs() <= INDIFFERENCE_TOL * self.scale
    }
}

fn menu_utiles<U: Utility + ?Sized>(menu: &AllaisMenu, u: &U) -> Result<(f64, f64, f64)> {
    Ok((
        u.relative_utile(menu.o0)?,
        u.relative_utile(menu.o1)?,
        u.relative_utile(menu.o5)?,
    ))
}

fn weighted<K: Kernel + ?Sized>(kernel: &K, terms: &[(f64, f64)]) -> Result<Condition> {
    let mut value = 0.0;
    let mut scale = 1.0f64;
    for &(w, d) in terms {
        let g = kernel.g(d);
        if !g.is_finite() {
            return Err(Error::Overflow {
                what: "regret comparator g",
                exponent: d,
            });
        }
        scale = scale.max(g.abs());
        value += w * g;
    }
    Ok(Condition { value, scale })
}

/// `0.01 g(u0 - u1) + 0.1 g(u5 - u1)`; negative iff I is preferred to II.
pub fn first_choice_condition<K, U>(menu: &AllaisMenu, kernel: &K, u: &U) -> Result<Condition>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let (u0, u1, u5) = menu_utiles(menu, u)?;
    weighted(kernel, &[(0.01, u0 - u1), (0.1, u5 - u1)])
}

/// `0.089 g(u5 - u0) - 0.099 g(u1 - u0) + 0.011 g(u5 - u1)`; positive iff IV
/// is preferred to III.
pub fn second_choice_condition<K, U>(menu: &AllaisMenu, kernel: &K, u: &U) -> Result<Condition>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let (u0, u1, u5) = menu_utiles(menu, u)?;
    weighted(
        kernel,
        &[(0.089, u5 - u0), (-0.099, u1 - u0), (0.011, u5 - u1)],
    )
}

/// `g(x + y) - g(x) - g(y)`.
pub fn superadditivity_gap<K: Kernel + ?Sized>(kernel: &K, x: f64, y: f64) -> f64 {
    kernel.g(x + y) - kernel.g(x) - kernel.g(y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperadditivityReport {
    pub holds_everywhere: bool,
    pub strict_somewhere: bool,
    pub min_gap: f64,
    pub max_gap: f64,
    /// `(x, y, gap)` for every pair with a negative gap.
    pub witnesses: Vec<(f64, f64, f64)>,
}

pub fn check_superadditive<K: Kernel + ?Sized>(
    kernel: &K,
    pairs: &[(f64, f64)],
) -> SuperadditivityReport {
    let mut report = SuperadditivityReport {
        holds_everywhere: true,
        strict_somewhere: false,
        min_gap: f64::INFINITY,
        max_gap: f64::NEG_INFINITY,
        witnesses: Vec::new(),
    };
    for &(x, y) in pairs {
        let gap = superadditivity_gap(kernel, x, y);
        report.min_gap = report.min_gap.min(gap);
        report.max_gap = report.max_gap.max(gap);
        if gap > STRICT_GAP {
            report.strict_somewhere = true;
        }
        let tol = STRICT_GAP * kernel.g(x + y).abs().max(1.0);
        if gap < -tol {
            report.holds_everywhere = false;
            report.witnesses.push((x, y, gap));
        }
    }
    report
}

/// All pairs `(i h, j h)` for `0 <= i, j <= steps`, `h = max / steps`.
pub fn square_grid(max: f64, steps: usize) -> Vec<(f64, f64)> {
    let h = max / steps as f64;
    let mut out = Vec::with_capacity((steps + 1) * (steps + 1));
    for i in 0..=steps {
        for j in 0..=steps {
            out.push((i as f64 * h, j as f64 * h));
        }
    }
    out
}

/// Utile gaps `A = u(o1) - u(o0)` and `B = u(o5) - u(o1)` under
/// `u(x) = ln(x / γ + 1)`, each computed as a single `ln1p`.
fn log_gaps(gamma: f64, menu: &AllaisMenu) -> Result<(f64, f64)> {
    let base = menu.o0 + gamma;
    if !(base > 0.0) {
        return Err(Error::DomainError {
            x: menu.o0,
            reason: "log utility requires x / gamma + 1 > 0",
        });
    }
    let a = libm::log1p((menu.o1 - menu.o0) / base);
    let b = libm::log1p((menu.o5 - menu.o1) / (menu.o1 + gamma));
    Ok((a, b))
}

/// `ln(0.1 sinh(B/β)) - ln(0.01 sinh(A/β))`; its sign is the sign of the
/// I-vs-II condition for the sinh kernel with log utility.
pub fn first_choice_log_residual(beta: f64, gamma: f64, menu: &AllaisMenu) -> Result<f64> {
    param_positive("beta", beta)?;
    param_positive("gamma", gamma)?;
    let (a, b) = log_gaps(gamma, menu)?;
    Ok((math::ln(0.1) + math::ln_sinh(b / beta)) - (math::ln(0.01) + math::ln_sinh(a / beta)))
}

/// Sign of `0.1 sinh(B/β) - 0.01 sinh(A/β)` without materializing either term.
pub fn first_choice_sign_logdomain(beta: f64, gamma: f64, menu: &AllaisMenu) -> Result<i8> {
    Ok(math::signum0(first_choice_log_residual(beta, gamma, menu)?))
}

fn param_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must be positive and finite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaResult {
    pub beta: f64,
    pub gamma_star: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: u32,
    /// [`first_choice_log_residual`] at `gamma_star`.
    pub log_residual: f64,
}

impl ZetaResult {
    /// `γ⋆` expressed in currency units (menu outcomes are in millions).
    pub fn gamma_star_currency(&self) -> f64 {
        self.gamma_star * 1e6
    }
}

/// Bisection in `ln γ` over `[1e-12, 0.34]` for the sign change of the I-vs-II
/// condition on the base menu, stopping once the bracket is narrower than
/// `tol * γ`.
pub fn zeta(beta: f64, tol: f64) -> Result<ZetaResult> {
    param_positive("beta", beta)?;
    if !(1e-12..1.0).contains(&tol) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "relative tolerance must lie in [1e-12, 1)",
        });
    }
    let menu = allais_menu(1.0, 0.0)?;
    let sign = |g: f64| first_choice_sign_logdomain(beta, g, &menu);
    let (mut lo, mut hi) = (ZETA_LO, ZETA_HI);
    if !(sign(lo)? < 0 && sign(hi)? > 0) {
        return Err(Error::BracketError { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > tol * lo {
        let mid = math::sqrt(lo * hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        iterations += 1;
        match sign(mid)? {
            s if s < 0 => lo = mid,
            s if s > 0 => hi = mid,
            _ => {
                lo = mid;
                hi = mid;
            }
        }
    }
    let gamma_star = if lo == hi { lo } else { 0.5 * (lo + hi) };
    Ok(ZetaResult {
        beta,
        gamma_star,
        bracket_lo: lo,
        bracket_hi: hi,
        iterations,
        log_residual: first_choice_log_residual(beta, gamma_star, &menu)?,
    })
}

/// One [`zeta`] per β, in ascending β order.
pub fn zeta_scan(betas: &[f64], tol: f64) -> Result<Vec<ZetaResult>> {
    let mut sorted = betas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.into_iter().map(|b| zeta(b, tol)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AllaisPattern {
    #[serde(rename = "(I,III)")]
    IAndIII,
    #[serde(rename = "(I,IV)")]
    IAndIV,
    #[serde(rename = "(II,III)")]
    IIAndIII,
    #[serde(rename = "(II,IV)")]
    IIAndIV,
}

impl AllaisPattern {
    pub fn label(&self) -> &'static str {
        match self {
            Self::IAndIII => "(I,III)",
            Self::IAndIV => "(I,IV)",
            Self::IIAndIII => "(II,III)",
            Self::IIAndIV => "(II,IV)",
        }
    }

    /// The pattern expected utility cannot produce with any utility.
    pub fn is_paradoxical(&self) -> bool {
        matches!(self, Self::IAndIV | Self::IIAndIII)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChoicePattern {
    /// `None` when either condition falls inside the indifference band.
    pub pattern: Option<AllaisPattern>,
    pub first: Condition,
    pub second: Condition,
    pub boundary: bool,
}

pub fn classify<K, U>(menu: &AllaisMenu, kernel: &K, u: &U) -> Result<ChoicePattern>
where
    K: Kernel + ?Sized,
    U: Utility + ?Sized,
{
    let first = first_choice_condition(menu, kernel, u)?;
    let second = second_choice_condition(menu, kernel, u)?;
    let boundary = first.in_band() || second.in_band();
    let pattern = (!boundary).then_some(match (first.value < 0.0, second.value > 0.0) {
        (true, false) => AllaisPattern::IAndIII,
        (true, true) => AllaisPattern::IAndIV,
        (false, false) => AllaisPattern::IIAndIII,
        (false, true) => AllaisPattern::IIAndIV,
    });
    Ok(ChoicePattern {
        pattern,
        first,
        second,
        boundary,
    })
}
