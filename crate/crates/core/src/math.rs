//! Thin wrappers over `libm` so the numerics read like ordinary float code.

pub use core::f64::consts::{LN_2, PI};

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `ln(1 − e^{−t})` for `t ≥ 0`.
///
/// Split at `t = ln 2`: below it `1 − e^{−t}` is small and `expm1` keeps the
/// digits, above it `e^{−t}` is small and `log1p` does.
#[inline]
pub fn ln1mexp(t: f64) -> f64 {
    if t <= LN_2 {
        ln(-expm1(-t))
    } else {
        ln1p(-exp(-t))
    }
}

/// `H e^{−λH} / (1 − e^{−λH})`, i.e. `H / (e^{t} − 1)` with `t = λH`.
#[inline]
pub fn h_over_expm1(h: f64, t: f64) -> f64 {
    h / expm1(t)
}
