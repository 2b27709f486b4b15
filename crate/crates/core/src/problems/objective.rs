use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::problems::distribution::DistributionSpec;
use crate::scalar::{Interval, Real};

/// Which side of the decision point a sample (or second point) lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

impl Side {
    /// Side of `v` relative to `x`; a tie counts as `Below`.
    pub fn locate<T: PartialOrd>(v: T, x: T) -> Self {
        if v > x {
            Side::Above
        } else {
            Side::Below
        }
    }
}

/// Built-in per-sample cost functions h(x, ξ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveKind<T> {
    /// `(x − ξ)²`.
    Squared,
    /// `(x − ξ)² + (x − ξ)` for ξ < x, `2(x − ξ)² + 2(ξ − x)` otherwise.
    Asymmetric,
    /// `holding·(x − ξ)⁺ + backorder·(ξ − x)⁺`.
    Newsvendor { holding: T, backorder: T },
    /// `|x − ξ| − (ρ/2)x²`, a weakly convex test cost.
    WeakAbs { rho: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewsvendorParams<T> {
    pub holding: T,
    pub backorder: T,
}

impl<T: Real> NewsvendorParams<T> {
    pub fn new(holding: T, backorder: T) -> Result<Self> {
        if !(holding > T::zero() && backorder > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "newsvendor costs must be positive, got H={holding}, B={backorder}"
            )));
        }
        Ok(Self { holding, backorder })
    }
}

/// A one-dimensional problem instance: cost, its derivative structure and
/// the feasible interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective1D<T> {
    pub kind: ObjectiveKind<T>,
    /// Strong-convexity modulus of H known for the cost itself (0 if none).
    pub mu: T,
    /// Lipschitz constant of H' when it does not depend on the law of ξ.
    pub lip: Option<T>,
    pub bounds: Interval<T>,
}

impl<T: Real> Objective1D<T> {
    pub fn new(kind: ObjectiveKind<T>, bounds: Interval<T>) -> Self {
        let (mu, lip) = match kind {
            ObjectiveKind::Squared => (T::c(2.0), Some(T::c(2.0))),
            ObjectiveKind::Asymmetric => (T::c(2.0), None),
            ObjectiveKind::Newsvendor { .. } | ObjectiveKind::WeakAbs { .. } => (T::zero(), None),
        };
        Self { kind, mu, lip, bounds }
    }

    pub fn squared(bounds: Interval<T>) -> Self {
        Self::new(ObjectiveKind::Squared, bounds)
    }

    pub fn asymmetric(bounds: Interval<T>) -> Self {
        Self::new(ObjectiveKind::Asymmetric, bounds)
    }

    pub fn newsvendor(params: NewsvendorParams<T>, bounds: Interval<T>) -> Self {
        Self::new(
            ObjectiveKind::Newsvendor { holding: params.holding, backorder: params.backorder },
            bounds,
        )
    }

    pub fn weak_abs(rho: T, bounds: Interval<T>) -> Result<Self> {
        if !(rho > T::zero()) {
            return Err(Error::InvalidParameter(format!("weak-convexity modulus must be positive, got {rho}")));
        }
        Ok(Self::new(ObjectiveKind::WeakAbs { rho }, bounds))
    }

    pub fn with_bounds(mut self, bounds: Interval<T>) -> Self {
        self.bounds = bounds;
        self
    }

    /// h(x, ξ).
    pub fn value(&self, x: T, xi: T) -> T {
        let d = x - xi;
        match self.kind {
            ObjectiveKind::Squared => d * d,
            ObjectiveKind::Asymmetric => {
                if xi < x {
                    d * d + d
                } else {
                    T::c(2.0) * d * d - T::c(2.0) * d
                }
            }
            ObjectiveKind::Newsvendor { holding, backorder } => {
                holding * d.max(T::zero()) + backorder * (-d).max(T::zero())
            }
            ObjectiveKind::WeakAbs { rho } => d.abs() - rho * T::c(0.5) * x * x,
        }
    }

    /// Formula of h'_x(x, z) on the given side of x, evaluated at ξ = z.
    /// At `z = x` this is the one-sided limit.
    pub fn branch_derivative(&self, x: T, z: T, side: Side) -> T {
        let d = x - z;
        match (self.kind, side) {
            (ObjectiveKind::Squared, _) => T::c(2.0) * d,
            (ObjectiveKind::Asymmetric, Side::Below) => T::c(2.0) * d + T::one(),
            (ObjectiveKind::Asymmetric, Side::Above) => T::c(4.0) * d - T::c(2.0),
            (ObjectiveKind::Newsvendor { holding, .. }, Side::Below) => holding,
            (ObjectiveKind::Newsvendor { backorder, .. }, Side::Above) => -backorder,
            (ObjectiveKind::WeakAbs { rho }, Side::Below) => T::one() - rho * x,
            (ObjectiveKind::WeakAbs { rho }, Side::Above) => -T::one() - rho * x,
        }
    }

    /// h'_x(x, ξ); the tie ξ = x uses the left branch.
    pub fn partial_x(&self, x: T, xi: T) -> T {
        self.branch_derivative(x, xi, Side::locate(xi, x))
    }

    /// h'₋(x) = lim_{z→x−} h'_x(x, z).
    pub fn dleft(&self, x: T) -> T {
        self.branch_derivative(x, x, Side::Below)
    }

    /// h'₊(x) = lim_{z→x+} h'_x(x, z).
    pub fn dright(&self, x: T) -> T {
        self.branch_derivative(x, x, Side::Above)
    }

    pub fn one_sided_derivatives(&self, x: T) -> (T, T) {
        (self.dleft(x), self.dright(x))
    }

    /// Band-edge limit h'_∓(x, x ∓ θ) used by the categorical estimator.
    pub fn edge_derivative(&self, x: T, theta: T, side: Side) -> T {
        match side {
            Side::Below => self.branch_derivative(x, x - theta, Side::Below),
            Side::Above => self.branch_derivative(x, x + theta, Side::Above),
        }
    }

    /// h''_{x,z}(x, z) on an explicit side of x.
    pub fn cross_side(&self, _x: T, _z: T, side: Side) -> T {
        match (self.kind, side) {
            (ObjectiveKind::Squared, _) => T::c(-2.0),
            (ObjectiveKind::Asymmetric, Side::Below) => T::c(-2.0),
            (ObjectiveKind::Asymmetric, Side::Above) => T::c(-4.0),
            (ObjectiveKind::Newsvendor { .. }, _) | (ObjectiveKind::WeakAbs { .. }, _) => T::zero(),
        }
    }

    /// h''_{x,z}(x, z) for `z ≠ x`.
    pub fn cross_partial(&self, x: T, z: T) -> Result<T> {
        if z == x {
            return Err(Error::CrossAtKink { x: x.as_f64() });
        }
        Ok(self.cross_side(x, z, Side::locate(z, x)))
    }

    /// True when the cross partial vanishes identically, i.e. the first
    /// comparison alone already determines h'_x.
    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self.kind, ObjectiveKind::Newsvendor { .. } | ObjectiveKind::WeakAbs { .. })
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.kind, ObjectiveKind::WeakAbs { .. })
    }

    /// H(x) = E h(x, ξ) from partial moments of the law.
    pub fn expected_value(&self, dist: &DistributionSpec<T>, x: T) -> T {
        let lo = dist.lower_moments(x);
        let up = dist.upper_moments(x);
        match self.kind {
            ObjectiveKind::Squared => lo.m2 + up.m2,
            ObjectiveKind::Asymmetric => lo.m2 + lo.m1 + T::c(2.0) * up.m2 - T::c(2.0) * up.m1,
            ObjectiveKind::Newsvendor { holding, backorder } => holding * lo.m1 - backorder * up.m1,
            ObjectiveKind::WeakAbs { rho } => lo.m1 - up.m1 - rho * T::c(0.5) * x * x,
        }
    }

    /// H'(x) = E h'_x(x, ξ) from partial moments of the law.
    pub fn expected_derivative(&self, dist: &DistributionSpec<T>, x: T) -> T {
        let lo = dist.lower_moments(x);
        let up = dist.upper_moments(x);
        match self.kind {
            ObjectiveKind::Squared => T::c(2.0) * (lo.m1 + up.m1),
            ObjectiveKind::Asymmetric => {
                T::c(2.0) * lo.m1 + lo.m0 + T::c(4.0) * up.m1 - T::c(2.0) * up.m0
            }
            ObjectiveKind::Newsvendor { holding, backorder } => holding * lo.m0 - backorder * up.m0,
            ObjectiveKind::WeakAbs { rho } => lo.m0 - up.m0 - rho * x,
        }
    }
}

impl<T: Real> fmt::Display for Objective1D<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ObjectiveKind::Squared => write!(f, "h1"),
            ObjectiveKind::Asymmetric => write!(f, "h2"),
            ObjectiveKind::Newsvendor { holding, backorder } => write!(f, "newsvendor:H={holding},B={backorder}"),
            ObjectiveKind::WeakAbs { rho } => write!(f, "weakabs:{rho}"),
        }
    }
}

/// Default feasible interval of the built-in experiments.
pub fn default_bounds<T: Real>() -> Interval<T> {
    Interval::new(T::c(50.0), T::c(150.0))
}

/// Parses `h1`, `h2`, `newsvendor:H=<v>,B=<v>` or `weakabs:<ρ>`; bounds
/// default to `[50, 150]`.
impl<T: Real> FromStr for Objective1D<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { kind: "objective", id: s.to_string(), reason: reason.to_string() };
        let bounds = default_bounds();
        match s.trim() {
            "h1" => return Ok(Self::squared(bounds)),
            "h2" => return Ok(Self::asymmetric(bounds)),
            _ => {}
        }
        let (head, args) = s.split_once(':').ok_or_else(|| err("unknown objective"))?;
        match head.trim() {
            "newsvendor" => {
                let (mut holding, mut backorder) = (None, None);
                for part in args.split(',') {
                    let (k, v) = part.split_once('=').ok_or_else(|| err("expected H=<v>,B=<v>"))?;
                    let v: f64 = v.trim().parse().map_err(|_| err("cost must be a number"))?;
                    match k.trim() {
                        "H" => holding = Some(v),
                        "B" => backorder = Some(v),
                        _ => return Err(err("unknown newsvendor key")),
                    }
                }
                let (h, b) = holding.zip(backorder).ok_or_else(|| err("both H and B are required"))?;
                let params = NewsvendorParams::new(T::c(h), T::c(b))?;
                Ok(Self::newsvendor(params, bounds))
            }
            "weakabs" => {
                let rho: f64 = args.trim().parse().map_err(|_| err("rho must be a number"))?;
                Self::weak_abs(T::c(rho), Interval::new(T::c(-2.0), T::c(2.0)))
            }
            _ => Err(err("unknown objective")),
        }
    }
}
