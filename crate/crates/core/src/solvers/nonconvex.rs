//! Random-index output and the Moreau-envelope stationarity measure.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::problems::ground_truth::golden_section;
use crate::scalar::{Interval, Real};

use super::record::RunRecord;

/// `P(t* = t) = η_t / Σ_s η_s`.
pub fn random_index_probabilities<T: Real>(steps: &[T]) -> Vec<T> {
    let total: T = steps.iter().copied().sum();
    steps.iter().map(|s| *s / total).collect()
}

/// Draws `t*` (1-based) and returns it with `x_{t*}`.
pub fn random_index_output<T: Real, R: Rng + ?Sized>(rec: &RunRecord<T>, rng: &mut R) -> Result<(usize, T)> {
    if rec.iterates.is_empty() || rec.steps.len() != rec.iterates.len() {
        return Err(Error::InvalidParameter("run record is incomplete".into()));
    }
    let weights: Vec<f64> = rec.steps.iter().map(|s| s.as_f64()).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let i = dist.sample(rng);
    Ok((i + 1, rec.iterates[i]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoreauParams<T> {
    pub lambda: T,
    pub rho: T,
}

impl<T: Real> MoreauParams<T> {
    pub fn new(lambda: T, rho: T) -> Result<Self> {
        if !(lambda > T::zero()) || !(rho > T::zero()) {
            return Err(Error::InvalidParameter("λ and ρ must be positive".into()));
        }
        if lambda * rho >= T::one() {
            return Err(Error::InvalidParameter(format!("λ = {lambda} must be below 1/ρ = {}", T::one() / rho)));
        }
        Ok(Self { lambda, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoreauPoint<T> {
    /// Proximal point `ŷ`.
    pub prox: T,
    /// Envelope value `H_λ(x)`.
    pub envelope: T,
    /// `|x − ŷ| / λ`.
    pub stationarity: T,
}

pub const MOREAU_GRID: usize = 256;

/// Minimizes `H(y) + (x − y)²/(2λ)` over the interval by a grid scan
/// followed by golden-section refinement.
pub fn moreau_point<T: Real>(h: impl Fn(T) -> T, x: T, p: &MoreauParams<T>, bounds: Interval<T>) -> MoreauPoint<T> {
    let two_lambda = T::c(2.0) * p.lambda;
    let f = |y: T| h(y) + (x - y) * (x - y) / two_lambda;
    let grid = bounds.grid(MOREAU_GRID);
    let best = (0..grid.len())
        .min_by(|a, b| f(grid[*a]).partial_cmp(&f(grid[*b])).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let prox = golden_section(f, lo, hi, T::c(1e-8));
    MoreauPoint { prox, envelope: f(prox), stationarity: (x - prox).abs() / p.lambda }
}

pub fn moreau_stationarity<T: Real>(h: impl Fn(T) -> T, x: T, p: &MoreauParams<T>, bounds: Interval<T>) -> T {
    moreau_point(h, x, p, bounds).stationarity
}
