//! Hidden per-round samples that answer comparison queries only.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::problems::{HiddenLaw, Side};
use crate::sampling::{Band, SideDensity};
use crate::scalar::Real;

/// Consecutive ties with the query point tolerated before giving up.
pub const RESAMPLE_CAP: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOutcome {
    SampleBelow,
    SampleAbove,
}

impl BinaryOutcome {
    pub fn side(self) -> Side {
        match self {
            BinaryOutcome::SampleBelow => Side::Below,
            BinaryOutcome::SampleAbove => Side::Above,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CategoricalOutcome {
    pub side: Side,
    pub band: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairOutcome {
    PlusSmaller,
    MinusSmallerOrEqual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    ComparisonOnly,
    BaselineAllowed,
}

/// One iteration's hidden scalar sample with its comparison budget.
#[derive(Debug)]
pub struct Round<T> {
    xi: T,
    budget: u32,
    access: Access,
    revealed: bool,
}

impl<T: Real> Round<T> {
    /// Draws ξ ≠ x from the law, resampling on ties.
    pub fn begin<L, R>(law: &L, x: T, budget: u32, access: Access, rng: &mut R) -> Result<Self>
    where
        L: HiddenLaw<T> + ?Sized,
        R: Rng + ?Sized,
    {
        for _ in 0..RESAMPLE_CAP {
            let xi = law.sample(rng);
            if xi != x {
                return Ok(Self::with_sample(xi, budget, access));
            }
        }
        Err(Error::DegenerateDistribution { attempts: RESAMPLE_CAP })
    }

    /// A round around a known sample, for tests and replay.
    pub fn with_sample(xi: T, budget: u32, access: Access) -> Self {
        Self { xi, budget, access, revealed: false }
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn revealed(&self) -> bool {
        self.revealed
    }

    fn spend(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::BudgetExceeded);
        }
        self.budget -= 1;
        Ok(())
    }

    /// `SampleBelow` iff ξ ≤ point.
    pub fn compare(&mut self, point: T) -> Result<BinaryOutcome> {
        self.spend()?;
        Ok(if self.xi <= point { BinaryOutcome::SampleBelow } else { BinaryOutcome::SampleAbove })
    }

    /// Side of ξ relative to `x` and the threshold band it falls into.
    pub fn compare_categorical(&mut self, x: T, scheme: &CategoricalScheme<T>) -> Result<CategoricalOutcome> {
        self.spend()?;
        let (side, gap) = if self.xi < x { (Side::Below, x - self.xi) } else { (Side::Above, self.xi - x) };
        Ok(CategoricalOutcome { side, band: scheme.band_of(gap) })
    }

    pub fn reveal_for_baseline(&mut self) -> Result<T> {
        if self.access != Access::BaselineAllowed {
            return Err(Error::AccessViolation);
        }
        self.revealed = true;
        Ok(self.xi)
    }
}

/// Thresholds `0 = θ₀ < θ₁ < … < θ_{m−1} < θ_m = ∞` and the per-band
/// densities: uniform on bounded bands, exponential on the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalScheme<T> {
    thresholds: Vec<T>,
    tail_rate: T,
}

impl<T: Real> CategoricalScheme<T> {
    /// `inner` lists θ₁..θ_{m−1}.
    pub fn new(inner: &[T], tail_rate: T) -> Result<Self> {
        let mut thresholds = Vec::with_capacity(inner.len() + 2);
        thresholds.push(T::zero());
        for &t in inner {
            if !(t > *thresholds.last().unwrap()) || !t.is_finite() {
                return Err(Error::InvalidParameter("thresholds must be finite and strictly increasing from 0".into()));
            }
            thresholds.push(t);
        }
        thresholds.push(T::infinity());
        if !(tail_rate > T::zero()) || !tail_rate.is_finite() {
            return Err(Error::InvalidParameter(format!("tail rate must be positive, got {tail_rate}")));
        }
        Ok(Self { thresholds, tail_rate })
    }

    /// Default thresholds: m = 1 → (0, ∞), m = 3 → (0, 3, 7, ∞),
    /// m = 5 → (0, 2, 4, 7, 12, ∞).
    pub fn with_bands(m: usize, tail_rate: T) -> Result<Self> {
        let inner: &[f64] = match m {
            1 => &[],
            3 => &[3.0, 7.0],
            5 => &[2.0, 4.0, 7.0, 12.0],
            _ => return Err(Error::InvalidParameter(format!("no default thresholds for m = {m}; use 1, 3 or 5"))),
        };
        let inner: Vec<T> = inner.iter().map(|v| T::c(*v)).collect();
        Self::new(&inner, tail_rate)
    }

    pub fn bands(&self) -> usize {
        self.thresholds.len() - 1
    }

    pub fn thresholds(&self) -> &[T] {
        &self.thresholds
    }

    pub fn tail_rate(&self) -> T {
        self.tail_rate
    }

    /// Band index of a positive distance `|ξ − x|`: θ_i < gap ≤ θ_{i+1}.
    pub fn band_of(&self, gap: T) -> usize {
        let i = self.thresholds.partition_point(|t| *t < gap);
        i.saturating_sub(1).min(self.bands() - 1)
    }

    pub fn lower_edge(&self, band: usize) -> T {
        self.thresholds[band]
    }

    /// Second-point density for band `band` on the given side of `x`.
    pub fn density(&self, x: T, out: CategoricalOutcome) -> Result<Band<T>> {
        let i = out.band;
        if i >= self.bands() {
            return Err(Error::InvalidParameter(format!("band {i} out of range")));
        }
        let (near, far) = (self.thresholds[i], self.thresholds[i + 1]);
        let sign = match out.side {
            Side::Below => -T::one(),
            Side::Above => T::one(),
        };
        if far.is_infinite() {
            return Band::exponential_from(x, x + sign * near, self.tail_rate, out.side);
        }
        let (a, b) = (x + sign * near, x + sign * far);
        Band::uniform_on(x, a.min(b), a.max(b), out.side)
    }
}

/// One iteration's hidden vector sample for the quadratic problem
/// h(y, ξ) = ½ (y − ξ)ᵀ Q (y − ξ).
#[derive(Debug)]
pub struct QpRound<'a, T> {
    xi: Vec<T>,
    q: &'a SymMatrix<T>,
    budget: u32,
    access: Access,
    revealed: bool,
}

impl<'a, T: Real> QpRound<'a, T> {
    pub fn new(xi: Vec<T>, q: &'a SymMatrix<T>, budget: u32, access: Access) -> Self {
        Self { xi, q, budget, access, revealed: false }
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn revealed(&self) -> bool {
        self.revealed
    }

    fn spend(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::BudgetExceeded);
        }
        self.budget -= 1;
        Ok(())
    }

    fn cost(&self, y: &[T]) -> T {
        let diff: Vec<T> = y.iter().zip(&self.xi).map(|(a, b)| *a - *b).collect();
        self.q.quad_form(&diff) * T::c(0.5)
    }

    /// Compares h(x + zu, ξ) with h(x − zu, ξ); equality favors the minus point.
    pub fn qp_compare_pair(&mut self, x: &[T], u: &[T], z: T) -> Result<PairOutcome> {
        self.spend()?;
        let plus: Vec<T> = x.iter().zip(u).map(|(a, b)| *a + z * *b).collect();
        let minus: Vec<T> = x.iter().zip(u).map(|(a, b)| *a - z * *b).collect();
        Ok(if self.cost(&plus) < self.cost(&minus) { PairOutcome::PlusSmaller } else { PairOutcome::MinusSmallerOrEqual })
    }

    /// Whether h(winner, ξ) ≤ h(x, ξ).
    pub fn qp_compare_winner_vs_center(&mut self, winner: &[T], x: &[T]) -> Result<bool> {
        self.spend()?;
        Ok(self.cost(winner) <= self.cost(x))
    }

    pub fn reveal_for_baseline(&mut self) -> Result<&[T]> {
        if self.access != Access::BaselineAllowed {
            return Err(Error::AccessViolation);
        }
        self.revealed = true;
        Ok(&self.xi)
    }
}

/// Draws a second point from `band` and asks the round about it.
pub fn probe<T: Real, R: Rng + ?Sized>(round: &mut Round<T>, band: &Band<T>, rng: &mut R) -> Result<(T, BinaryOutcome)> {
    let z = band.draw(rng);
    let out = round.compare(z)?;
    Ok((z, out))
}
