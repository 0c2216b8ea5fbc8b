//! Exact integer combinatorics with floating-point fallbacks.
//!
//! Exact values are returned while they fit in 64 bits; the `ln_*` and
//! `*_f64` helpers switch to log-gamma beyond that range.

use crate::error::{Error, Result};

/// `n choose k`, exact, or `Error::Overflow` when the result leaves `u64`.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) / i is binomial(n - k + i, i), always integral.
        acc = acc
            .checked_mul(n as u128 - k as u128 + i)
            .ok_or(Error::Overflow("binomial"))?
            / i;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow("binomial"));
        }
    }
    Ok(acc as u64)
}

pub fn factorial(n: u64) -> Result<u64> {
    (1..=n).try_fold(1u64, |acc, i| acc.checked_mul(i).ok_or(Error::Overflow("factorial")))
}

/// `(sum counts)! / prod(counts_i!)`, exact.
pub fn multinomial(counts: &[u32]) -> Result<u64> {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &c in counts {
        total += c as u64;
        acc = acc
            .checked_mul(binomial(total, c as u64)?)
            .ok_or(Error::Overflow("multinomial"))?;
    }
    Ok(acc)
}

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 20 {
        // 20! < 2^63; exact product then a single rounding.
        return libm::log(factorial(n).unwrap_or(0) as f64);
    }
    libm::lgamma(n as f64 + 1.0)
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    match binomial(n, k) {
        Ok(b) if b < (1u64 << 53) => libm::log(b as f64),
        _ => ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k),
    }
}

/// Binomial coefficient as a float: exact below 2^53, log-gamma above.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    match binomial(n, k) {
        Ok(b) if b < (1u64 << 53) => b as f64,
        _ => libm::exp(ln_binomial(n, k)),
    }
}

/// Ratio `binomial(a, r) / binomial(b, r)` evaluated as a product of
/// `r` factors, which stays accurate when both coefficients overflow.
pub fn binomial_ratio(a: u64, b: u64, r: u64) -> f64 {
    if r > a {
        return 0.0;
    }
    if r > 4096 {
        return libm::exp(ln_binomial(a, r) - ln_binomial(b, r));
    }
    (0..r).fold(1.0, |acc, j| acc * (a - j) as f64 / (b - j) as f64)
}

/// `(n + k)! / n!` as a float (rising factorial `(n+1)(n+2)...(n+k)`).
pub fn rising_ratio(n: u64, k: u64) -> f64 {
    if k <= 170 {
        (1..=k).fold(1.0, |acc, j| acc * (n + j) as f64)
    } else {
        libm::exp(ln_factorial(n + k) - ln_factorial(n))
    }
}

/// Dimension of the symmetric space of `n_modes` modes at level `level`:
/// `binomial(level + n_modes - 1, n_modes - 1)`.
pub fn dimension(n_modes: usize, level: usize) -> Result<u64> {
    if n_modes == 0 {
        return Err(Error::Invalid("number of modes must be at least 1"));
    }
    let n = (level as u64)
        .checked_add(n_modes as u64 - 1)
        .ok_or(Error::Overflow("dimension"))?;
    binomial(n, n_modes as u64 - 1)
}

/// Floating-point dimension, valid far beyond the `u64` range.
pub fn dimension_f64(n_modes: usize, level: u64) -> f64 {
    binomial_f64(level + n_modes as u64 - 1, n_modes as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), Ok(10));
        assert_eq!(binomial(4, 0), Ok(1));
        assert_eq!(binomial(3, 5), Ok(0));
        assert_eq!(binomial(64, 32), Ok(1_832_624_140_942_590_534));
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert_eq!(binomial(200, 100), Err(Error::Overflow("binomial")));
    }

    #[test]
    fn multinomial_matches_factorials() {
        assert_eq!(multinomial(&[2, 1, 1]), Ok(12));
        assert_eq!(multinomial(&[0, 0]), Ok(1));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(2, 3), Ok(4));
        assert_eq!(dimension(5, 0), Ok(1));
        assert_eq!(dimension(3, 2), Ok(6));
        assert!(dimension(0, 3).is_err());
        assert!(matches!(dimension(200, usize::MAX / 2), Err(Error::Overflow(_))));
    }

    #[test]
    fn log_paths_agree_with_exact() {
        let exact = binomial(60, 30).unwrap() as f64;
        let via_log = libm::exp(ln_factorial(60) - 2.0 * ln_factorial(30));
        assert!((via_log / exact - 1.0).abs() < 1e-12);
        assert!((binomial_ratio(10, 12, 3) - 120.0 / 220.0).abs() < 1e-15);
        assert!((rising_ratio(3, 2) - 20.0).abs() < 1e-15);
    }
}
