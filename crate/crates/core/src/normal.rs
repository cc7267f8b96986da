//! Standard normal distribution function.
//!
//! `libm`'s `erf`/`erfc` are rational minimax approximations accurate to a
//! few ulps; every normal probability in the crate goes through these
//! functions. Tail probabilities use `erfc` directly to avoid cancellation.

use std::f64::consts::FRAC_1_SQRT_2;

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `1 − Φ(x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// `P(|Z| ≤ r) = 2Φ(r) − 1` for `r ≥ 0`, zero otherwise.
pub fn half_normal_cdf(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        libm::erf(r * FRAC_1_SQRT_2)
    }
}

/// `P(|Z| ≥ r) = 2(1 − Φ(r))` for `r ≥ 0`, one otherwise.
pub fn half_normal_sf(r: f64) -> f64 {
    if r <= 0.0 {
        1.0
    } else {
        libm::erfc(r * FRAC_1_SQRT_2)
    }
}
