//! Small dense symmetric matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const JACOBI_TOL: f64 = 1e-10;

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { n, data }
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::identity(values.len());
        for (i, v) in values.iter().enumerate() {
            m.data[i * m.n + i] = *v;
        }
        m
    }

    /// Rejects non-square or asymmetric input.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square and non-empty".into()));
        }
        let data: Vec<T> = rows.iter().flatten().copied().collect();
        let m = Self { n, data };
        let scale = m.data.iter().fold(T::one(), |a, v| a.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i)).abs() > T::c(1e-12) * scale {
                    return Err(Error::InvalidParameter("matrix is not symmetric".into()));
                }
            }
        }
        Ok(m)
    }

    /// `AᵀA / d + I` for a square `A` given row-major.
    pub fn gram_plus_identity(a: &[T], d: usize) -> Result<Self> {
        if a.len() != d * d || d == 0 {
            return Err(Error::InvalidParameter("factor must be d×d".into()));
        }
        let mut m = Self::identity(d);
        let scale = T::from_usize_lossy(d);
        for i in 0..d {
            for j in 0..=i {
                let s: T = (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum::<T>() / scale;
                m.data[i * d + j] += s;
                if i != j {
                    m.data[j * d + i] += s;
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            let row: T = v.iter().enumerate().map(|(j, vj)| self.get(i, j) * *vj).sum();
            acc += v[i] * row;
        }
        acc
    }

    /// Eigenvalues in ascending order by cyclic Jacobi rotations.
    pub fn eigenvalues(&self) -> Vec<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let tol = T::c(JACOBI_TOL);
        for _ in 0..100 {
            let off: T = (0..n)
                .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum::<T>()
                .sqrt();
            if off <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (T::c(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    /// `(λ_min, λ_max)`, rejecting matrices that are not positive definite.
    pub fn extreme_eigenvalues(&self) -> Result<(T, T)> {
        let ev = self.eigenvalues();
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        if !(lo > T::zero()) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: lo.as_f64() });
        }
        Ok((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_extremes() {
        let q = SymMatrix::diag(&[1.0, 4.0]);
        assert_eq!(q.extreme_eigenvalues().unwrap(), (1.0, 4.0));
    }

    #[test]
    fn known_spectrum() {
        let q = SymMatrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]]).unwrap();
        let ev = q.eigenvalues();
        let s = 2f64.sqrt();
        for (a, b) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let q = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(q.extreme_eigenvalues(), Err(Error::NotPositiveDefinite { .. })));
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn gram_is_at_least_identity() {
        let a = [0.3f64, -1.2, 2.0, 0.7];
        let q = SymMatrix::gram_plus_identity(&a, 2).unwrap();
        let (lo, _) = q.extreme_eigenvalues().unwrap();
        assert!(lo >= 1.0 - 1e-12);
        assert!((q.get(0, 1) - q.get(1, 0)).abs() < 1e-15);
        assert!((q.get(0, 0) - (1.0 + (0.09 + 4.0) / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn quad_form_matches_mul() {
        let q = SymMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let v = [1.5, -2.0];
        let mv = q.mul_vec(&v);
        let direct: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        assert!((q.quad_form(&v) - direct).abs() < 1e-12);
    }
}
