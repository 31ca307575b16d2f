//! Integer-order Bessel functions of the first kind.
//!
//! Power series evaluation, accurate to machine precision for the small
//! arguments that occur here (|x| = 2η ≤ 2 since amplitudes are capped
//! below 1). Resonance weights multiply many J₀ factors, so these are kept
//! exact rather than linearized.

use crate::scalar::{real, Scalar};

/// J_n(x) for integer n.
///
/// Uses J_{-n}(x) = (-1)^n J_n(x) and the ascending series
/// J_n(x) = Σ_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!).
pub fn bessel_j<T: Scalar>(n: i32, x: T) -> T {
    let (n_abs, refl) = if n < 0 {
        (u32::try_from(-i64::from(n)).unwrap(), n % 2 != 0)
    } else {
        (n as u32, false)
    };
    let sign = if refl { -T::one() } else { T::one() };
    let half = x * real::<T>(0.5);

    // leading term (x/2)^n / n!
    let mut term = T::one();
    for k in 1..=n_abs {
        term = term * half / real::<T>(f64::from(k));
    }
    let mut sum = term;
    let eps = real::<T>(1e-30);
    let neg_half_sq = -(half * half);
    for k in 1..200u32 {
        term = term * neg_half_sq / (real::<T>(f64::from(k)) * real::<T>(f64::from(n_abs + k)));
        sum += term;
        if term.abs() < eps * sum.abs().max(T::one()) {
            break;
        }
    }
    sign * sum
}
