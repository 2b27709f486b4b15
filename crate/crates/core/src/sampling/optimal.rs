//! Tabulated variance-optimal second-point densities.

use rand::Rng;

use crate::error::{Error, Result};
use crate::problems::{DistributionSpec, Objective1D, Side};
use crate::scalar::{Interval, Real};

pub const OPTIMAL_GRID_POINTS: usize = 4096;

/// Piecewise-constant density on a uniform grid, sampled by inverting its
/// (piecewise-linear) cdf. The pdf and the sampler describe the same law.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity<T> {
    side: Side,
    anchor: T,
    grid: Vec<T>,
    weights: Vec<T>,
    cdf: Vec<T>,
    density: Vec<T>,
}

impl<T: Real> TabulatedDensity<T> {
    /// Weights `√F(z)·|h''(x,z)|` below x or `√(1−F(z))·|h''(x,z)|` above x.
    pub fn optimal(dist: &DistributionSpec<T>, obj: &Objective1D<T>, x: T, side: Side) -> Result<Self> {
        let eff = dist.effective_support();
        let (lo, hi) = match side {
            Side::Below => (eff.lo, x),
            Side::Above => (x, eff.hi),
        };
        if !(lo < hi) {
            return Err(Error::OptimalDensityUndefined);
        }
        let grid = Interval::new(lo, hi).grid(OPTIMAL_GRID_POINTS);
        let weights = grid
            .iter()
            .map(|&z| {
                let mass = match side {
                    Side::Below => dist.cdf(z),
                    Side::Above => dist.sf(z),
                };
                mass.max(T::zero()).sqrt() * obj.cross_side(x, z, side).abs()
            })
            .collect();
        Self::from_weights(side, x, grid, weights)
    }

    /// Builds the table from nonnegative weights at sorted grid nodes.
    pub fn from_weights(side: Side, anchor: T, grid: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != weights.len() {
            return Err(Error::InvalidParameter("tabulated density needs matching grids of length ≥ 2".into()));
        }
        if weights.iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidParameter("tabulated weights must be finite and nonnegative".into()));
        }
        let half = T::c(0.5);
        let mut cdf = Vec::with_capacity(grid.len());
        cdf.push(T::zero());
        let mut acc = T::zero();
        for i in 1..grid.len() {
            acc += (grid[i] - grid[i - 1]) * (weights[i] + weights[i - 1]) * half;
            cdf.push(acc);
        }
        if !(acc > T::zero()) || !acc.is_finite() {
            return Err(Error::OptimalDensityUndefined);
        }
        for c in cdf.iter_mut() {
            *c /= acc;
        }
        let last = cdf.len() - 1;
        cdf[last] = T::one();
        let density = (1..grid.len()).map(|i| (cdf[i] - cdf[i - 1]) / (grid[i] - grid[i - 1])).collect();
        Ok(Self { side, anchor, grid, weights, cdf, density })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn anchor(&self) -> T {
        self.anchor
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn cdf_table(&self) -> &[T] {
        &self.cdf
    }

    pub fn support(&self) -> Interval<T> {
        Interval::new(self.grid[0], self.grid[self.grid.len() - 1])
    }

    fn cell(&self, z: T) -> Option<usize> {
        let (lo, hi) = (self.grid[0], self.grid[self.grid.len() - 1]);
        let inside = match self.side {
            Side::Below => z >= lo && z < hi,
            Side::Above => z > lo && z <= hi,
        };
        if !inside {
            return None;
        }
        let idx = self.grid.partition_point(|g| *g <= z);
        Some(idx.saturating_sub(1).min(self.density.len() - 1))
    }

    pub fn pdf(&self, z: T) -> T {
        self.cell(z).map_or(T::zero(), |i| self.density[i])
    }

    /// Tabulated cdf, linear between nodes.
    pub fn cdf(&self, z: T) -> T {
        if z <= self.grid[0] {
            return T::zero();
        }
        if z >= self.grid[self.grid.len() - 1] {
            return T::one();
        }
        let i = self.grid.partition_point(|g| *g <= z) - 1;
        self.cdf[i] + self.density[i] * (z - self.grid[i])
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        loop {
            let u = T::unit(rng);
            let i = self.cdf.partition_point(|c| *c <= u).clamp(1, self.cdf.len() - 1) - 1;
            let span = self.cdf[i + 1] - self.cdf[i];
            if !(span > T::zero()) {
                continue;
            }
            let z = self.grid[i] + (u - self.cdf[i]) / span * (self.grid[i + 1] - self.grid[i]);
            if self.pdf(z) > T::zero() {
                return z;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Objective1D;
    use crate::rng::{RngContract, StreamId};
    use crate::scalar::Interval;

    fn h1() -> Objective1D<f64> {
        Objective1D::squared(Interval::new(0.0, 1.0))
    }

    #[test]
    fn uniform_law_matches_closed_form() {
        let dist = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let t = TabulatedDensity::optimal(&dist, &h1(), 1.0, Side::Below).unwrap();
        for z in [0.1, 0.25, 0.5, 0.9] {
            let exact = 1.5 * f64::sqrt(z);
            assert!((t.pdf(z) - exact).abs() < 2e-3, "z={z}: {} vs {exact}", t.pdf(z));
        }
        assert_eq!(t.pdf(1.0), 0.0);
        assert_eq!(t.pdf(-0.1), 0.0);
    }

    #[test]
    fn draw_mean_uniform_law() {
        let dist = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let t = TabulatedDensity::optimal(&dist, &h1(), 1.0, Side::Below).unwrap();
        let mut rng = RngContract::new(21).stream(StreamId::new(0, 0));
        let n = 1_000_000;
        let mean = (0..n).map(|_| t.draw(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.6).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn cdf_monotone_and_normalised() {
        let dist = DistributionSpec::normal(100.0, 100.0).unwrap();
        let obj = Objective1D::squared(Interval::new(50.0, 150.0));
        for side in [Side::Below, Side::Above] {
            let t = TabulatedDensity::optimal(&dist, &obj, 104.0, side).unwrap();
            let c = t.cdf_table();
            assert_eq!(c[0], 0.0);
            assert_eq!(*c.last().unwrap(), 1.0);
            assert!(c.windows(2).all(|w| w[0] <= w[1]));
            assert!(t.weights().iter().all(|w| *w >= 0.0));
        }
    }

    #[test]
    fn normal_law_shape() {
        let dist = DistributionSpec::normal(0.0, 1.0).unwrap();
        let obj = Objective1D::squared(Interval::new(-5.0, 5.0));
        let t = TabulatedDensity::optimal(&dist, &obj, 2.0, Side::Below).unwrap();
        let ratio = t.pdf(0.0) / t.pdf(1.0);
        let exact = (0.5f64 / 0.8413447460685429).sqrt();
        assert!((ratio - exact).abs() < 5e-3);
    }

    #[test]
    fn piecewise_linear_is_undefined() {
        let dist = DistributionSpec::uniform(50.0, 150.0).unwrap();
        let nv: Objective1D<f64> = "newsvendor:H=1,B=2".parse().unwrap();
        assert_eq!(
            TabulatedDensity::optimal(&dist, &nv, 100.0, Side::Below),
            Err(Error::OptimalDensityUndefined)
        );
    }

    #[test]
    fn empty_side_is_undefined() {
        let dist = DistributionSpec::uniform(50.0, 150.0).unwrap();
        let obj = Objective1D::squared(Interval::new(50.0, 150.0));
        assert!(TabulatedDensity::optimal(&dist, &obj, 50.0, Side::Below).is_err());
    }
}
