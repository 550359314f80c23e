//! Regret-theoretic comparison of finite monetary lotteries.
//!
//! The crate is `no_std` (with `alloc`) and purely computational. File
//! formats, the command line front end and any other IO live in the
//! `regret-cli` companion crate.
//!
//! The central quantity is the signed regret difference
//!
//! ```text
//!   D(x, y) = sum_ij g(u(y_j) - u(x_i)) * w_ij
//! ```
//!
//! where `g(d) = f(d) - f(-d)` is the net comparator derived from a regret
//! kernel `f`, `u` is a utility curve, and `w` is the coupling of the two
//! lotteries (product of marginals for independent lotteries, or an explicit
//! joint matrix). `D <= 0` means the first lottery is regret-preferred.

#![no_std]
#![deny(unsafe_code)]
#![warn(missing_debug_implementations, rust_2018_idioms)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod allais;
pub mod audit;
pub mod dominance;
mod error;
pub mod kernel;
pub mod lottery;
pub mod math;
pub mod matrix;
pub mod regret;
pub mod savage;
pub mod utility;

pub use error::{Error, Result};
pub use kernel::{Kernel, RegretKernel};
pub use lottery::{
    align, canonicalize, diagonal_coupling, statewise_coupling, JointLottery, Lottery,
};
pub use matrix::Matrix;
pub use regret::{Coupling, Preference, Verdict};
pub use utility::{Utility, UtilityCurve};

/// Absolute tolerance on probability sums and marginal checks.
pub const PROB_TOL: f64 = 1e-12;

/// Relative width of the indifference band, multiplied by `max(1, max |g|)`.
pub const INDIFFERENCE_TOL: f64 = 1e-12;
