//! Step-length densities on `[0, ∞)` for the quadratic scheme.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialDensity<T> {
    /// `1/R` on `[0, R]`.
    Uniform { radius: T },
    /// `λ e^{−λz}` on `[0, ∞)`.
    Exponential { rate: T },
}

impl<T: Real> RadialDensity<T> {
    pub fn uniform(radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        Ok(RadialDensity::Uniform { radius })
    }

    pub fn exponential(rate: T) -> Result<Self> {
        if !(rate > T::zero()) || !rate.is_finite() {
            return Err(Error::InvalidParameter(format!("radial rate must be positive, got {rate}")));
        }
        Ok(RadialDensity::Exponential { rate })
    }

    /// Exponential density whose rate stays below `c = √d·λ_min(Q)/λ_max(Q)`,
    /// the range where the weighted second moment is finite.
    pub fn exponential_strict(rate: T, c: T) -> Result<Self> {
        let dens = Self::exponential(rate)?;
        dens.check_weighted_moment(c)?;
        Ok(dens)
    }

    pub fn check_weighted_moment(&self, c: T) -> Result<()> {
        match *self {
            RadialDensity::Exponential { rate } if rate >= c => Err(Error::InvalidParameter(format!(
                "radial rate {rate} must be below c = {c} for a finite second moment"
            ))),
            _ => Ok(()),
        }
    }

    pub fn pdf(&self, z: T) -> T {
        if z < T::zero() {
            return T::zero();
        }
        match *self {
            RadialDensity::Uniform { radius } => {
                if z <= radius {
                    T::one() / radius
                } else {
                    T::zero()
                }
            }
            RadialDensity::Exponential { rate } => rate * (-rate * z).exp(),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match *self {
            RadialDensity::Uniform { radius } => radius * T::unit(rng),
            RadialDensity::Exponential { rate } => -T::open_unit(rng).ln() / rate,
        }
    }
}

impl<T: Real> fmt::Display for RadialDensity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialDensity::Uniform { radius } => write!(f, "runiform:{radius}"),
            RadialDensity::Exponential { rate } => write!(f, "rexp:{rate}"),
        }
    }
}

/// Parses `runiform:<R>` or `rexp:<λ>`.
impl<T: Real> FromStr for RadialDensity<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { kind: "radial density", id: s.to_string(), reason: reason.to_string() };
        let (name, arg) = s.trim().split_once(':').ok_or_else(|| err("expected runiform:<R> or rexp:<λ>"))?;
        let v: f64 = arg.trim().parse().map_err(|_| err("parameter must be a number"))?;
        let parsed = match name {
            "runiform" => Self::uniform(T::c(v)),
            "rexp" => Self::exponential(T::c(v)),
            _ => return Err(err("expected runiform:<R> or rexp:<λ>")),
        };
        parsed.map_err(|e| err(&e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::rng::{RngContract, StreamId};

    #[test]
    fn pdf_values() {
        assert_eq!(RadialDensity::uniform(10.0).unwrap().pdf(5.0), 0.1);
        assert_eq!(RadialDensity::exponential(0.0625).unwrap().pdf(0.0), 0.0625);
        assert_eq!(RadialDensity::exponential(0.0625).unwrap().pdf(-1.0), 0.0);
        assert_eq!(RadialDensity::uniform(10.0).unwrap().pdf(10.5), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RadialDensity::<f64>::uniform(0.0).is_err());
        assert!(RadialDensity::<f64>::exponential(-1.0).is_err());
        assert!(RadialDensity::exponential_strict(0.5, 0.4).is_err());
        assert!(RadialDensity::exponential_strict(0.0625, 0.4).is_ok());
    }

    #[test]
    fn normalised() {
        let u = RadialDensity::uniform(3.0f64).unwrap();
        assert!((integrate(|z| u.pdf(z), 0.0, 3.0, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        let e = RadialDensity::exponential(0.0625f64).unwrap();
        assert!((integrate(|z| e.pdf(z), 0.0, 1000.0, 1e-12).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn draws_nonnegative() {
        let mut rng = RngContract::new(2).stream(StreamId::new(0, 0));
        for d in [RadialDensity::uniform(2.0).unwrap(), RadialDensity::exponential(1.5).unwrap()] {
            for _ in 0..10_000 {
                assert!(d.draw(&mut rng) >= 0.0);
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        let r: RadialDensity<f64> = "rexp:0.0625".parse().unwrap();
        assert_eq!(r, RadialDensity::Exponential { rate: 0.0625 });
        assert_eq!(r.to_string(), "rexp:0.0625");
        let u: RadialDensity<f64> = "runiform:10".parse().unwrap();
        assert_eq!(u.to_string().parse::<RadialDensity<f64>>().unwrap(), u);
        assert!("rexp:0".parse::<RadialDensity<f64>>().is_err());
        assert!("exp:1".parse::<RadialDensity<f64>>().is_err());
    }
}
