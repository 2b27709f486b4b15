use crate::scalar::Real;

/// Standard normal c.d.f. Φ(t).
pub fn normal_cdf<T: Real>(t: T) -> T {
    T::c(0.5) * (-t / T::SQRT_2()).erfc()
}

/// Standard normal density φ(t).
pub fn normal_pdf<T: Real>(t: T) -> T {
    (-(t * t) * T::c(0.5)).exp() / (T::c(2.0) * T::PI()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Φ at selected points, computed with 40-digit arithmetic (mpmath) before
    // the implementation existed.
    const ORACLE: [(f64, f64); 7] = [
        (1.0, 0.841_344_746_068_542_9),
        (0.5, 0.691_462_461_274_013_1),
        (2.0, 0.977_249_868_051_820_8),
        (-1.5, 0.066_807_201_268_858_06),
        (3.0, 0.998_650_101_968_369_9),
        (-6.0, 9.865_876_450_377_0e-10),
        (-10.0, 7.619_853_024_160_527e-24),
    ];

    #[test]
    fn symmetry_and_centre() {
        assert_eq!(normal_cdf(0.0f64), 0.5);
        for t in [0.5f64, 1.0, 2.0] {
            assert!((normal_cdf(t) + normal_cdf(-t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_high_precision_oracle() {
        for (t, want) in ORACLE {
            let got = normal_cdf(t);
            assert!((got - want).abs() <= 1e-9, "Φ({t}) = {got}, want {want}");
        }
        assert!((normal_cdf(1.0f64) - 0.841_344_746).abs() < 1e-8);
    }

    #[test]
    fn deep_tail_relative_accuracy() {
        let (t, want) = ORACLE[6];
        assert!(((normal_cdf(t) - want) / want).abs() < 1e-10);
    }

    #[test]
    fn f32_path() {
        assert!((normal_cdf(1.0f32) - 0.841_344_7).abs() < 1e-6);
    }
}
