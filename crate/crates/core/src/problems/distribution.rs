use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::normal::{normal_cdf, normal_pdf};
use crate::scalar::{Interval, Real};

/// Standard deviations kept on each side of a normal mean wherever a finite
/// support is needed (quadrature, tabulated densities).
pub const NORMAL_TRUNCATION_SIGMAS: f64 = 10.0;

/// One uniform piece of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformComponent<T> {
    pub weight: T,
    pub a: T,
    pub b: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind<T> {
    Uniform { a: T, b: T },
    Normal { mean: T, variance: T },
    /// Finite mixture of uniforms. Not reachable from the id grammar.
    Mixture(Vec<UniformComponent<T>>),
}

/// Law of the hidden sample ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec<T> {
    kind: DistributionKind<T>,
}

/// `E[(x − ξ)^k 1(ξ < x)]` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialMoments<T> {
    pub m0: T,
    pub m1: T,
    pub m2: T,
}

/// Anything that can produce a hidden sample.
pub trait HiddenLaw<T: Real> {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T;
}

impl<T: Real> DistributionSpec<T> {
    pub fn uniform(a: T, b: T) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("uniform needs finite a < b, got [{a}, {b}]")));
        }
        Ok(Self { kind: DistributionKind::Uniform { a, b } })
    }

    pub fn normal(mean: T, variance: T) -> Result<Self> {
        if !(variance > T::zero()) || !variance.is_finite() || !mean.is_finite() {
            return Err(Error::InvalidParameter(format!("normal needs variance > 0, got {variance}")));
        }
        Ok(Self { kind: DistributionKind::Normal { mean, variance } })
    }

    /// Mixture of uniforms; weights are normalised.
    pub fn mixture(components: Vec<UniformComponent<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("empty mixture".into()));
        }
        let total: T = components.iter().map(|c| c.weight).sum();
        if !(total > T::zero()) {
            return Err(Error::InvalidParameter("mixture weights must sum to a positive value".into()));
        }
        let mut out = Vec::with_capacity(components.len());
        for c in components {
            if !(c.a < c.b) || c.weight < T::zero() {
                return Err(Error::InvalidParameter("mixture component needs a < b and weight >= 0".into()));
            }
            out.push(UniformComponent { weight: c.weight / total, a: c.a, b: c.b });
        }
        Ok(Self { kind: DistributionKind::Mixture(out) })
    }

    pub fn kind(&self) -> &DistributionKind<T> {
        &self.kind
    }

    /// `[s̲, s̄]`, infinite for the normal law.
    pub fn support(&self) -> Interval<T> {
        match &self.kind {
            DistributionKind::Uniform { a, b } => Interval::new(*a, *b),
            DistributionKind::Normal { .. } => Interval { lo: T::neg_infinity(), hi: T::infinity() },
            DistributionKind::Mixture(cs) => mixture_hull(cs),
        }
    }

    /// Support with normal tails cut at `NORMAL_TRUNCATION_SIGMAS`.
    pub fn effective_support(&self) -> Interval<T> {
        match &self.kind {
            DistributionKind::Normal { mean, variance } => {
                let r = variance.sqrt() * T::c(NORMAL_TRUNCATION_SIGMAS);
                Interval::new(*mean - r, *mean + r)
            }
            _ => self.support(),
        }
    }

    /// Points where the density is not smooth.
    pub fn breakpoints(&self) -> Vec<T> {
        match &self.kind {
            DistributionKind::Uniform { a, b } => vec![*a, *b],
            DistributionKind::Normal { mean, .. } => vec![*mean],
            DistributionKind::Mixture(cs) => cs.iter().flat_map(|c| [c.a, c.b]).collect(),
        }
    }

    pub fn pdf(&self, v: T) -> T {
        match &self.kind {
            DistributionKind::Uniform { a, b } => uniform_pdf(*a, *b, v),
            DistributionKind::Normal { mean, variance } => {
                let sd = variance.sqrt();
                normal_pdf((v - *mean) / sd) / sd
            }
            DistributionKind::Mixture(cs) => cs.iter().map(|c| c.weight * uniform_pdf(c.a, c.b, v)).sum(),
        }
    }

    pub fn cdf(&self, v: T) -> T {
        match &self.kind {
            DistributionKind::Uniform { a, b } => uniform_cdf(*a, *b, v),
            DistributionKind::Normal { mean, variance } => normal_cdf((v - *mean) / variance.sqrt()),
            DistributionKind::Mixture(cs) => cs.iter().map(|c| c.weight * uniform_cdf(c.a, c.b, v)).sum(),
        }
    }

    /// Survival function `1 − F(v)`, accurate in the upper tail.
    pub fn sf(&self, v: T) -> T {
        match &self.kind {
            DistributionKind::Normal { mean, variance } => normal_cdf((*mean - v) / variance.sqrt()),
            _ => T::one() - self.cdf(v),
        }
    }

    pub fn mean(&self) -> T {
        match &self.kind {
            DistributionKind::Uniform { a, b } => (*a + *b) * T::c(0.5),
            DistributionKind::Normal { mean, .. } => *mean,
            DistributionKind::Mixture(cs) => cs.iter().map(|c| c.weight * (c.a + c.b) * T::c(0.5)).sum(),
        }
    }

    pub fn variance(&self) -> T {
        match &self.kind {
            DistributionKind::Uniform { a, b } => (*b - *a).powi(2) / T::c(12.0),
            DistributionKind::Normal { variance, .. } => *variance,
            DistributionKind::Mixture(cs) => {
                let m = self.mean();
                cs.iter()
                    .map(|c| {
                        let cm = (c.a + c.b) * T::c(0.5);
                        c.weight * ((c.b - c.a).powi(2) / T::c(12.0) + (cm - m).powi(2))
                    })
                    .sum()
            }
        }
    }

    /// Lower partial moments about `x`.
    pub fn lower_moments(&self, x: T) -> PartialMoments<T> {
        match &self.kind {
            DistributionKind::Uniform { a, b } => uniform_lower_moments(*a, *b, x),
            DistributionKind::Normal { mean, variance } => {
                let sd = variance.sqrt();
                let c = x - *mean;
                let d = c / sd;
                let big = normal_cdf(d);
                let small = normal_pdf(d);
                PartialMoments {
                    m0: big,
                    m1: c * big + sd * small,
                    m2: (c * c + *variance) * big + c * sd * small,
                }
            }
            DistributionKind::Mixture(cs) => {
                let mut acc = PartialMoments { m0: T::zero(), m1: T::zero(), m2: T::zero() };
                for comp in cs {
                    let p = uniform_lower_moments(comp.a, comp.b, x);
                    acc.m0 += comp.weight * p.m0;
                    acc.m1 += comp.weight * p.m1;
                    acc.m2 += comp.weight * p.m2;
                }
                acc
            }
        }
    }

    /// Full moments `E[(x − ξ)^k]`.
    pub fn total_moments(&self, x: T) -> PartialMoments<T> {
        let c = x - self.mean();
        PartialMoments { m0: T::one(), m1: c, m2: c * c + self.variance() }
    }

    /// Upper partial moments `E[(x − ξ)^k 1(ξ ≥ x)]`.
    pub fn upper_moments(&self, x: T) -> PartialMoments<T> {
        let lo = self.lower_moments(x);
        let all = self.total_moments(x);
        PartialMoments { m0: all.m0 - lo.m0, m1: all.m1 - lo.m1, m2: all.m2 - lo.m2 }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match &self.kind {
            DistributionKind::Uniform { a, b } => *a + (*b - *a) * T::unit(rng),
            DistributionKind::Normal { mean, variance } => *mean + variance.sqrt() * T::std_normal(rng),
            DistributionKind::Mixture(cs) => {
                let u = T::unit(rng);
                let mut acc = T::zero();
                let mut pick = cs[cs.len() - 1];
                for c in cs {
                    acc += c.weight;
                    if u < acc {
                        pick = *c;
                        break;
                    }
                }
                pick.a + (pick.b - pick.a) * T::unit(rng)
            }
        }
    }
}

impl<T: Real> HiddenLaw<T> for DistributionSpec<T> {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.draw(rng)
    }
}

fn mixture_hull<T: Real>(cs: &[UniformComponent<T>]) -> Interval<T> {
    let lo = cs.iter().map(|c| c.a).fold(T::infinity(), T::min);
    let hi = cs.iter().map(|c| c.b).fold(T::neg_infinity(), T::max);
    Interval::new(lo, hi)
}

fn uniform_pdf<T: Real>(a: T, b: T, v: T) -> T {
    if v >= a && v <= b {
        T::one() / (b - a)
    } else {
        T::zero()
    }
}

fn uniform_cdf<T: Real>(a: T, b: T, v: T) -> T {
    ((v - a) / (b - a)).max(T::zero()).min(T::one())
}

fn uniform_lower_moments<T: Real>(a: T, b: T, x: T) -> PartialMoments<T> {
    if x <= a {
        return PartialMoments { m0: T::zero(), m1: T::zero(), m2: T::zero() };
    }
    let w = b - a;
    let top = x.min(b);
    let (far, near) = (x - a, x - top);
    PartialMoments {
        m0: (top - a) / w,
        m1: (far * far - near * near) / (T::c(2.0) * w),
        m2: (far.powi(3) - near.powi(3)) / (T::c(3.0) * w),
    }
}

impl<T: Real> fmt::Display for DistributionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DistributionKind::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            DistributionKind::Normal { mean, variance } => write!(f, "normal:{mean},{variance}"),
            DistributionKind::Mixture(cs) => {
                write!(f, "mixture:")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}@[{},{}]", c.weight, c.a, c.b)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `uniform:<a>,<b>` or `normal:<mean>,<var>`.
impl<T: Real> FromStr for DistributionSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { kind: "distribution", id: s.to_string(), reason: reason.to_string() };
        let (head, args) = s.split_once(':').ok_or_else(|| err("expected <kind>:<p1>,<p2>"))?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("parameters must be numbers"))?;
        if nums.len() != 2 {
            return Err(err("expected exactly two parameters"));
        }
        let (p, q) = (T::c(nums[0]), T::c(nums[1]));
        match head.trim() {
            "uniform" => Self::uniform(p, q),
            "normal" => Self::normal(p, q),
            _ => Err(err("unknown distribution kind")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_pieces;

    fn numeric_lower(d: &DistributionSpec<f64>, x: f64, k: i32) -> f64 {
        let s = d.effective_support();
        if x <= s.lo {
            return 0.0;
        }
        let mut br = d.breakpoints();
        br.push(x);
        integrate_pieces(|v| (x - v).powi(k) * d.pdf(v), s.lo, x.min(s.hi), &br, 1e-12).unwrap()
    }

    #[test]
    fn lower_moments_match_quadrature() {
        let laws = [
            DistributionSpec::uniform(50.0, 150.0).unwrap(),
            DistributionSpec::normal(100.0, 100.0).unwrap(),
            DistributionSpec::mixture(vec![
                UniformComponent { weight: 0.5, a: -3.0, b: -2.0 },
                UniformComponent { weight: 0.5, a: 2.0, b: 3.0 },
            ])
            .unwrap(),
        ];
        for d in &laws {
            for &x in &[-2.5, 0.0, 55.0, 99.0, 100.0, 123.4, 150.0, 170.0] {
                let pm = d.lower_moments(x);
                assert!((pm.m0 - numeric_lower(d, x, 0)).abs() < 1e-9, "{d} m0 at {x}");
                assert!((pm.m1 - numeric_lower(d, x, 1)).abs() < 1e-7, "{d} m1 at {x}");
                assert!((pm.m2 - numeric_lower(d, x, 2)).abs() < 1e-5, "{d} m2 at {x}");
            }
        }
    }

    #[test]
    fn parse_ids() {
        let u: DistributionSpec<f64> = "uniform:50,150".parse().unwrap();
        assert_eq!(u.mean(), 100.0);
        assert_eq!(u.to_string(), "uniform:50,150");
        let n: DistributionSpec<f64> = "normal:100,100".parse().unwrap();
        assert_eq!(n.variance(), 100.0);
        assert!("uniform:3,1".parse::<DistributionSpec<f64>>().is_err());
        assert!("normal:0,0".parse::<DistributionSpec<f64>>().is_err());
        assert!("gamma:1,2".parse::<DistributionSpec<f64>>().is_err());
        assert!("uniform:1".parse::<DistributionSpec<f64>>().is_err());
    }

    #[test]
    fn mixture_moments() {
        let d = DistributionSpec::mixture(vec![
            UniformComponent { weight: 1.0f64, a: -3.0, b: -2.0 },
            UniformComponent { weight: 1.0, a: 3.0, b: 4.0 },
        ])
        .unwrap();
        assert!((d.mean() - 0.5).abs() < 1e-15);
        assert!((d.cdf(0.7) - 0.5).abs() < 1e-15);
    }
}
