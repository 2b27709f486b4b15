//! One-sided sampling densities f₋(x, ·) / f₊(x, ·) for the second point.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::problems::{DistributionSpec, Objective1D, Side};
use crate::sampling::optimal::TabulatedDensity;
use crate::scalar::{Interval, Real};

/// A density living strictly on one side of its anchor.
///
/// Below-side densities vanish on `z ≥ anchor`, above-side ones on
/// `z ≤ anchor`.
pub trait SideDensity<T: Real> {
    fn side(&self) -> Side;
    fn anchor(&self) -> T;
    fn pdf(&self, z: T) -> T;
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T;
    /// Closure of the support.
    fn support(&self) -> Interval<T>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Band<T> {
    /// Uniform on `[lo, hi)` (below) or `(lo, hi]` (above).
    Uniform { side: Side, anchor: T, lo: T, hi: T },
    /// Exponential tail starting at `origin` and running away from the anchor.
    Exponential { side: Side, anchor: T, origin: T, rate: T },
    Tabulated(TabulatedDensity<T>),
}

impl<T: Real> Band<T> {
    /// Uniform band between the iterate and the feasible bound. A degenerate
    /// anchor sitting on the bound gets a unit-width interval past it.
    pub fn uniform(x: T, bounds: Interval<T>, side: Side) -> Result<Self> {
        if !bounds.contains(x) {
            return Err(Error::InvalidParameter(format!(
                "anchor {x} outside [{}, {}]",
                bounds.lo, bounds.hi
            )));
        }
        let (lo, hi) = match side {
            Side::Below if x == bounds.lo => (bounds.lo - T::one(), bounds.lo),
            Side::Below => (bounds.lo, x),
            Side::Above if x == bounds.hi => (bounds.hi, bounds.hi + T::one()),
            Side::Above => (x, bounds.hi),
        };
        Ok(Band::Uniform { side, anchor: x, lo, hi })
    }

    /// Uniform on an explicit band `[lo, hi)` / `(lo, hi]`.
    pub fn uniform_on(x: T, lo: T, hi: T, side: Side) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!("empty band [{lo}, {hi}]")));
        }
        Ok(Band::Uniform { side, anchor: x, lo, hi })
    }

    pub fn exponential(x: T, rate: T, side: Side) -> Result<Self> {
        Self::exponential_from(x, x, rate, side)
    }

    /// Exponential tail beginning at `origin` (which may differ from `x` for
    /// categorical bands).
    pub fn exponential_from(x: T, origin: T, rate: T, side: Side) -> Result<Self> {
        if !(rate > T::zero()) || !rate.is_finite() {
            return Err(Error::InvalidParameter(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(Band::Exponential { side, anchor: x, origin, rate })
    }

    pub fn optimal(dist: &DistributionSpec<T>, obj: &Objective1D<T>, x: T, side: Side) -> Result<Self> {
        TabulatedDensity::optimal(dist, obj, x, side).map(Band::Tabulated)
    }
}

impl<T: Real> SideDensity<T> for Band<T> {
    fn side(&self) -> Side {
        match self {
            Band::Uniform { side, .. } | Band::Exponential { side, .. } => *side,
            Band::Tabulated(t) => t.side(),
        }
    }

    fn anchor(&self) -> T {
        match self {
            Band::Uniform { anchor, .. } | Band::Exponential { anchor, .. } => *anchor,
            Band::Tabulated(t) => t.anchor(),
        }
    }

    fn pdf(&self, z: T) -> T {
        match self {
            Band::Uniform { side, lo, hi, .. } => {
                let inside = match side {
                    Side::Below => z >= *lo && z < *hi,
                    Side::Above => z > *lo && z <= *hi,
                };
                if inside {
                    T::one() / (*hi - *lo)
                } else {
                    T::zero()
                }
            }
            Band::Exponential { side, origin, rate, .. } => {
                let dist = match side {
                    Side::Below => *origin - z,
                    Side::Above => z - *origin,
                };
                if dist > T::zero() {
                    *rate * (-*rate * dist).exp()
                } else {
                    T::zero()
                }
            }
            Band::Tabulated(t) => t.pdf(z),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            Band::Uniform { side, lo, hi, .. } => loop {
                let u = T::unit(rng);
                let z = match side {
                    Side::Below => *lo + (*hi - *lo) * u,
                    Side::Above => *hi - (*hi - *lo) * u,
                };
                // Rounding can land on the open end.
                if self.pdf(z) > T::zero() {
                    return z;
                }
            },
            Band::Exponential { side, origin, rate, .. } => loop {
                let e = -T::open_unit(rng).ln() / *rate;
                let z = match side {
                    Side::Below => *origin - e,
                    Side::Above => *origin + e,
                };
                if self.pdf(z) > T::zero() {
                    return z;
                }
            },
            Band::Tabulated(t) => t.draw(rng),
        }
    }

    fn support(&self) -> Interval<T> {
        match self {
            Band::Uniform { lo, hi, .. } => Interval::new(*lo, *hi),
            Band::Exponential { side: Side::Below, origin, .. } => Interval { lo: T::neg_infinity(), hi: *origin },
            Band::Exponential { side: Side::Above, origin, .. } => Interval { lo: *origin, hi: T::infinity() },
            Band::Tabulated(t) => t.support(),
        }
    }
}

/// Selector for how second-point densities are built at each iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandFamily<T> {
    /// Uniform between the iterate and the feasible bound.
    Uniform,
    Exponential { rate: T },
    Optimal,
}

impl<T: Real> BandFamily<T> {
    pub fn make(&self, dist: &DistributionSpec<T>, obj: &Objective1D<T>, x: T, side: Side) -> Result<Band<T>> {
        match *self {
            BandFamily::Uniform => Band::uniform(x, obj.bounds, side),
            BandFamily::Exponential { rate } => Band::exponential(x, rate, side),
            BandFamily::Optimal => Band::optimal(dist, obj, x, side),
        }
    }

    /// Rejects combinations that can never produce a valid density.
    pub fn validate_for(&self, obj: &Objective1D<T>) -> Result<()> {
        match self {
            BandFamily::Optimal if obj.is_piecewise_linear() => Err(Error::OptimalDensityUndefined),
            BandFamily::Exponential { rate } if !(*rate > T::zero()) => {
                Err(Error::InvalidParameter(format!("exponential rate must be positive, got {rate}")))
            }
            _ => Ok(()),
        }
    }
}

impl<T: Real> fmt::Display for BandFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandFamily::Uniform => write!(f, "uniform"),
            BandFamily::Exponential { rate } => write!(f, "exp:{rate}"),
            BandFamily::Optimal => write!(f, "optimal"),
        }
    }
}

/// Parses `uniform`, `exp:<λ>` or `optimal`.
impl<T: Real> FromStr for BandFamily<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { kind: "density", id: s.to_string(), reason: reason.to_string() };
        match s.trim() {
            "uniform" => Ok(BandFamily::Uniform),
            "optimal" => Ok(BandFamily::Optimal),
            other => {
                let rate = other
                    .strip_prefix("exp:")
                    .ok_or_else(|| err("expected uniform, exp:<λ> or optimal"))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| err("λ must be a number"))?;
                if !(rate > 0.0) {
                    return Err(err("λ must be positive"));
                }
                Ok(BandFamily::Exponential { rate: T::c(rate) })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::rng::{RngContract, StreamId};
    use rand::Rng;

    fn bounds() -> Interval<f64> {
        Interval::new(50.0, 150.0)
    }

    #[test]
    fn uniform_band_shapes() {
        let b = Band::uniform(120.0, bounds(), Side::Below).unwrap();
        assert_eq!(b.pdf(60.0), 1.0 / 70.0);
        assert_eq!(b.pdf(120.0), 0.0);
        assert_eq!(b.support(), Interval::new(50.0, 120.0));

        let lo = Band::uniform(50.0, bounds(), Side::Below).unwrap();
        assert_eq!(lo.support(), Interval::new(49.0, 50.0));
        assert_eq!(lo.pdf(49.5), 1.0);

        let hi = Band::uniform(150.0, bounds(), Side::Above).unwrap();
        assert_eq!(hi.support(), Interval::new(150.0, 151.0));
        assert_eq!(hi.pdf(150.0), 0.0);
        assert_eq!(hi.pdf(150.5), 1.0);
    }

    #[test]
    fn exponential_band_shapes() {
        let rate = 2f64.powi(-4);
        assert_eq!(rate, 0.0625);
        let b = Band::exponential(100.0, rate, Side::Below).unwrap();
        assert!((b.pdf(100.0 - 1e-12) - rate).abs() < 1e-12);
        assert_eq!(b.pdf(100.0), 0.0);
        assert_eq!(b.pdf(101.0), 0.0);
        let a = Band::exponential(100.0, rate, Side::Above).unwrap();
        assert!((a.pdf(100.0 + 1e-12) - rate).abs() < 1e-12);
        assert!(Band::exponential(0.0, 0.0, Side::Above).is_err());
        assert!(Band::exponential(0.0, -1.0, Side::Above).is_err());
    }

    #[test]
    fn exponential_mean_offset() {
        let b = Band::exponential(100.0, 0.0625, Side::Above).unwrap();
        let mut rng = RngContract::new(11).stream(StreamId::new(0, 0));
        let n = 1_000_000;
        let mean = (0..n).map(|_| b.draw(&mut rng) - 100.0).sum::<f64>() / n as f64;
        assert!((mean - 16.0).abs() < 0.05, "mean offset {mean}");
    }

    #[test]
    fn draws_stay_in_support() {
        let mut rng = RngContract::new(3).stream(StreamId::new(0, 0));
        let b = Band::uniform(120.0, bounds(), Side::Below).unwrap();
        for _ in 0..100_000 {
            let z = b.draw(&mut rng);
            assert!((50.0..120.0).contains(&z));
        }
        let e = Band::exponential(80.0, 0.0625, Side::Below).unwrap();
        for _ in 0..100_000 {
            assert!(e.draw(&mut rng) < 80.0);
        }
    }

    #[test]
    fn wrong_side_is_zero() {
        let mut rng = RngContract::new(5).stream(StreamId::new(0, 0));
        for _ in 0..1000 {
            let x: f64 = rng.random_range(50.0..=150.0);
            let z: f64 = rng.random_range(0.0..200.0);
            for side in [Side::Below, Side::Above] {
                let bands = [
                    Band::uniform(x, bounds(), side).unwrap(),
                    Band::exponential(x, 0.0625, side).unwrap(),
                ];
                for b in &bands {
                    let wrong = match side {
                        Side::Below => z >= x,
                        Side::Above => z <= x,
                    };
                    if wrong {
                        assert_eq!(b.pdf(z), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn normalised() {
        for side in [Side::Below, Side::Above] {
            for x in [50.0, 73.0, 150.0] {
                let b = Band::uniform(x, bounds(), side).unwrap();
                let s = b.support();
                let mass = integrate(|z| b.pdf(z), s.lo, s.hi, 1e-12).unwrap();
                assert!((mass - 1.0).abs() < 1e-6);
                let e = Band::exponential(x, 0.0625, side).unwrap();
                let (lo, hi) = match side {
                    Side::Below => (x - 800.0, x),
                    Side::Above => (x, x + 800.0),
                };
                let mass = integrate(|z| e.pdf(z), lo, hi, 1e-12).unwrap();
                assert!((mass - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn parse_family() {
        assert_eq!("uniform".parse::<BandFamily<f64>>().unwrap(), BandFamily::Uniform);
        assert_eq!("optimal".parse::<BandFamily<f64>>().unwrap(), BandFamily::Optimal);
        assert_eq!(
            "exp:0.0625".parse::<BandFamily<f64>>().unwrap(),
            BandFamily::Exponential { rate: 0.0625 }
        );
        assert!("exp:-1".parse::<BandFamily<f64>>().is_err());
        assert!("gauss".parse::<BandFamily<f64>>().is_err());
    }

    #[test]
    fn optimal_rejected_for_piecewise_linear() {
        let nv: Objective1D<f64> = "newsvendor:H=1,B=2".parse().unwrap();
        assert_eq!(BandFamily::Optimal.validate_for(&nv), Err(Error::OptimalDensityUndefined));
    }
}
