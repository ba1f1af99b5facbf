//! Zeroth-order Boys function.

use super::IntegralError;
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float as _;

/// Below this argument the three-term series is used.
pub const BOYS_SERIES_THRESHOLD: f64 = 1e-7;

/// `F0(x) = \int_0^1 exp(-x t^2) dt`.
pub fn boys_f0(x: f64) -> Result<f64, IntegralError> {
    if x < 0.0 || x.is_nan() {
        return Err(IntegralError::NegativeBoysArgument(x));
    }
    Ok(f0(x))
}

#[inline]
pub(crate) fn f0(x: f64) -> f64 {
    if x < BOYS_SERIES_THRESHOLD {
        1.0 - x / 3.0 + x * x / 10.0
    } else {
        let r = x.sqrt();
        0.5 * (core::f64::consts::PI / x).sqrt() * libm::erf(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn zero_and_negative() {
        assert_eq!(boys_f0(0.0).unwrap(), 1.0);
        assert!(matches!(boys_f0(-1e-3), Err(IntegralError::NegativeBoysArgument(_))));
    }

    #[test]
    fn large_argument_asymptote() {
        assert!((boys_f0(30.0).unwrap() - 0.5 * (PI / 30.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn continuous_across_threshold() {
        let below = f0(BOYS_SERIES_THRESHOLD * (1.0 - 1e-9));
        let above = f0(BOYS_SERIES_THRESHOLD);
        assert!((below - above).abs() < 1e-13);
    }

    #[test]
    fn known_value_at_one() {
        assert!((boys_f0(1.0).unwrap() - 0.746_824_132_812_427).abs() < 1e-12);
    }
}
