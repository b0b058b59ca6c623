//! Thin wrappers over `libm` so the rest of the crate reads like std code.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `x^n` by repeated squaring.
#[inline]
pub fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut e = n;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_multiplication() {
        assert_eq!(powi(1.5, 0), 1.0);
        assert_eq!(powi(1.5, 1), 1.5);
        assert_eq!(powi(-2.0, 3), -8.0);
        assert_eq!(powi(2.0, 10), 1024.0);
    }

    #[test]
    fn trapezoid_is_exact_on_linear_data() {
        let v: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(trapezoid(&v, 0.5), 4.0);
        assert_eq!(trapezoid(&v[..1], 0.5), 0.0);
    }
}
