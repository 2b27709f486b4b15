use rand::Rng;

use crate::scalar::Real;

/// Uniform direction on the sphere of radius `√d` in `d` dimensions.
pub fn sphere_sample<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<T> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v: Vec<T> = (0..d).map(|_| T::std_normal(rng)).collect();
        let norm = v.iter().map(|a| *a * *a).sum::<T>().sqrt();
        if norm > T::zero() && norm.is_finite() {
            let radius = T::from_usize_lossy(d).sqrt();
            return v.into_iter().map(|a| a / norm * radius).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngContract, StreamId};

    #[test]
    fn radius_is_sqrt_d() {
        let mut rng = RngContract::new(4).stream(StreamId::new(0, 0));
        for d in [1, 2, 3, 7, 20] {
            for _ in 0..1000 {
                let u: Vec<f64> = sphere_sample(d, &mut rng);
                let sq: f64 = u.iter().map(|a| a * a).sum();
                assert!((sq - d as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_dimension_is_a_fair_sign() {
        let mut rng = RngContract::new(5).stream(StreamId::new(0, 0));
        let n = 10_000;
        let mut plus = 0;
        for _ in 0..n {
            let u: Vec<f64> = sphere_sample(1, &mut rng);
            assert!(u[0] == 1.0 || u[0] == -1.0);
            if u[0] > 0.0 {
                plus += 1;
            }
        }
        let sd = (n as f64 * 0.25).sqrt();
        assert!((plus as f64 - n as f64 / 2.0).abs() <= 3.0 * sd);
    }

    #[test]
    fn second_moment_is_identity() {
        let mut rng = RngContract::new(6).stream(StreamId::new(0, 0));
        let n = 100_000;
        let mut m = [[0.0f64; 3]; 3];
        for _ in 0..n {
            let u: Vec<f64> = sphere_sample(3, &mut rng);
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += u[i] * u[j];
                }
            }
        }
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((v / n as f64 - target).abs() < 0.02);
            }
        }
    }
}
