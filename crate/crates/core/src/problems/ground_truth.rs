//! Exact objective values, minimizers and optimality gaps.

use crate::error::{Error, Result};
use crate::problems::{DistributionSpec, Objective1D, ObjectiveKind};
use crate::quadrature::integrate_pieces;
use crate::scalar::Real;

pub const QUADRATURE_TOL: f64 = 1e-10;
pub const BISECTION_WIDTH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundTruthMethod {
    ClosedForm,
    Quadrature,
}

/// H, H', x* and H(x*) for one (objective, law) pair on the objective's
/// feasible interval.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth<T> {
    pub obj: Objective1D<T>,
    pub dist: DistributionSpec<T>,
    pub xstar: T,
    pub hstar: T,
    pub method: GroundTruthMethod,
}

/// Closed-form ground truth from partial moments of the law.
pub fn ground_truth<T: Real>(obj: &Objective1D<T>, dist: &DistributionSpec<T>) -> Result<GroundTruth<T>> {
    let mut gt = GroundTruth {
        obj: *obj,
        dist: dist.clone(),
        xstar: T::zero(),
        hstar: T::zero(),
        method: GroundTruthMethod::ClosedForm,
    };
    gt.xstar = match obj.kind {
        ObjectiveKind::Squared => obj.bounds.clamp(dist.mean()),
        _ => gt.minimize()?,
    };
    gt.hstar = gt.h(gt.xstar)?;
    Ok(gt)
}

/// Ground truth computed by adaptive quadrature of h and h'_x against the
/// density; independent of the partial-moment formulas.
pub fn by_quadrature<T: Real>(obj: &Objective1D<T>, dist: &DistributionSpec<T>) -> Result<GroundTruth<T>> {
    let mut gt = GroundTruth {
        obj: *obj,
        dist: dist.clone(),
        xstar: T::zero(),
        hstar: T::zero(),
        method: GroundTruthMethod::Quadrature,
    };
    gt.xstar = gt.minimize()?;
    gt.hstar = gt.h(gt.xstar)?;
    Ok(gt)
}

impl<T: Real> GroundTruth<T> {
    pub fn h(&self, x: T) -> Result<T> {
        match self.method {
            GroundTruthMethod::ClosedForm => Ok(self.obj.expected_value(&self.dist, x)),
            GroundTruthMethod::Quadrature => self.integrate(x, |v| self.obj.value(x, v)),
        }
    }

    pub fn hprime(&self, x: T) -> Result<T> {
        match self.method {
            GroundTruthMethod::ClosedForm => Ok(self.obj.expected_derivative(&self.dist, x)),
            GroundTruthMethod::Quadrature => self.integrate(x, |v| self.obj.partial_x(x, v)),
        }
    }

    /// `(H(x) − H*)/H*`.
    pub fn relative_gap(&self, x: T) -> Result<T> {
        if self.hstar == T::zero() {
            return Err(Error::GapUndefined);
        }
        Ok((self.h(x)? - self.hstar) / self.hstar)
    }

    pub fn absolute_gap(&self, x: T) -> Result<T> {
        Ok(self.h(x)? - self.hstar)
    }

    fn integrate(&self, x: T, g: impl Fn(T) -> T) -> Result<T> {
        let eff = self.dist.effective_support();
        let mut breaks = self.dist.breakpoints();
        breaks.push(x);
        integrate_pieces(|v| g(v) * self.dist.pdf(v), eff.lo, eff.hi, &breaks, T::c(QUADRATURE_TOL))
    }

    fn minimize(&self) -> Result<T> {
        if self.obj.is_convex() {
            self.bisect()
        } else {
            self.scan()
        }
    }

    /// Bisection on H' for convex H.
    fn bisect(&self) -> Result<T> {
        let b = self.obj.bounds;
        if self.hprime(b.lo)? >= T::zero() {
            return Ok(b.lo);
        }
        if self.hprime(b.hi)? <= T::zero() {
            return Ok(b.hi);
        }
        let (mut lo, mut hi) = (b.lo, b.hi);
        let width = T::c(BISECTION_WIDTH);
        for _ in 0..200 {
            if hi - lo <= width {
                break;
            }
            let mid = (lo + hi) * T::c(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.hprime(mid)? < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(b.clamp((lo + hi) * T::c(0.5)))
    }

    /// Grid scan followed by golden-section refinement, for non-convex H.
    fn scan(&self) -> Result<T> {
        let grid = self.obj.bounds.grid(2001);
        let mut best = 0;
        let mut best_val = T::infinity();
        for (i, &x) in grid.iter().enumerate() {
            let v = self.h(x)?;
            if v < best_val {
                best_val = v;
                best = i;
            }
        }
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let mut err = None;
        let x = golden_section(
            |x| match self.h(x) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    T::infinity()
                }
            },
            lo,
            hi,
            T::c(BISECTION_WIDTH),
        );
        match err {
            Some(e) => Err(e),
            None => Ok(x),
        }
    }
}

/// Golden-section search for a minimizer of a unimodal function on `[a, b]`.
pub fn golden_section<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> T {
    let inv_phi = T::c(0.618_033_988_749_894_9);
    let (mut a, mut b) = (a, b);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..300 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    let mid = (a + b) * T::c(0.5);
    let candidates = [(a, f(a)), (mid, f(mid)), (b, f(b))];
    candidates.into_iter().fold((mid, T::infinity()), |acc, p| if p.1 < acc.1 { p } else { acc }).0
}
