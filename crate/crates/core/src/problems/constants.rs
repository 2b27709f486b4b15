//! Numerical estimates of the moment constants K₁, K₂, K₃.

use crate::error::Result;
use crate::problems::{DistributionSpec, Objective1D, Side};
use crate::quadrature::integrate_pieces;
use crate::sampling::{BandFamily, SideDensity};
use crate::scalar::Real;

const TOL: f64 = 1e-9;

/// Suprema over a grid of the feasible interval; `G2 = K1² + 2K3` and
/// `sigma2 = K2² + 2K3`. `K3` is infinite when a band leaves part of the
/// law's side uncovered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionConstants<T> {
    pub k1: T,
    pub k2: T,
    pub k3: T,
    pub g2: T,
    pub sigma2: T,
}

impl<T: Real> AssumptionConstants<T> {
    pub fn compute(
        obj: &Objective1D<T>,
        dist: &DistributionSpec<T>,
        family: &BandFamily<T>,
        grid_points: usize,
    ) -> Result<Self> {
        let eff = dist.effective_support();
        let mut k1sq = T::zero();
        let mut k2sq = T::zero();
        let mut k3 = T::zero();
        for x in obj.bounds.grid(grid_points.max(2)) {
            let mut breaks = dist.breakpoints();
            breaks.push(x);
            let hp = integrate_pieces(|v| obj.partial_x(x, v) * dist.pdf(v), eff.lo, eff.hi, &breaks, T::c(TOL))?;
            let sq = integrate_pieces(|v| obj.partial_x(x, v).powi(2) * dist.pdf(v), eff.lo, eff.hi, &breaks, T::c(TOL))?;
            k1sq = k1sq.max(sq);
            k2sq = k2sq.max((sq - hp * hp).max(T::zero()));
            if !obj.is_piecewise_linear() {
                for side in [Side::Below, Side::Above] {
                    k3 = k3.max(c3_integral(obj, dist, family, x, side)?);
                }
            }
        }
        Ok(Self {
            k1: k1sq.sqrt(),
            k2: k2sq.sqrt(),
            k3,
            g2: k1sq + T::c(2.0) * k3,
            sigma2: k2sq + T::c(2.0) * k3,
        })
    }
}

/// `∫ F(z) h''(x,z)² / f₋(x,z) dz` below x, or the `1 − F` analogue above.
pub fn c3_integral<T: Real>(
    obj: &Objective1D<T>,
    dist: &DistributionSpec<T>,
    family: &BandFamily<T>,
    x: T,
    side: Side,
) -> Result<T> {
    let eff = dist.effective_support();
    let (lo, hi) = match side {
        Side::Below => (eff.lo, x.min(eff.hi)),
        Side::Above => (x.max(eff.lo), eff.hi),
    };
    if !(lo < hi) {
        return Ok(T::zero());
    }
    let band = match family.make(dist, obj, x, side) {
        Ok(b) => b,
        Err(crate::Error::OptimalDensityUndefined) => return Ok(T::zero()),
        Err(e) => return Err(e),
    };
    let cover = band.support();
    let tiny = T::c(1e-14);
    let uncovered = match side {
        Side::Below => cover.lo > lo && dist.cdf(cover.lo) > tiny,
        Side::Above => cover.hi < hi && dist.sf(cover.hi) > tiny,
    };
    if uncovered {
        return Ok(T::infinity());
    }
    let (lo, hi) = match side {
        Side::Below => (lo.max(cover.lo), hi),
        Side::Above => (lo, hi.min(cover.hi)),
    };
    if !(lo < hi) {
        return Ok(T::zero());
    }
    let integrand = |z: T| {
        let mass = match side {
            Side::Below => dist.cdf(z),
            Side::Above => dist.sf(z),
        };
        let p = band.pdf(z);
        if p > T::zero() {
            mass * obj.cross_side(x, z, side).powi(2) / p
        } else {
            T::zero()
        }
    };
    integrate_pieces(integrand, lo, hi, &dist.breakpoints(), T::c(TOL))
}
