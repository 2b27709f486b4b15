//! Unbiased gradient estimates built from comparison outcomes.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::oracle::{Access, BinaryOutcome, CategoricalOutcome, CategoricalScheme, PairOutcome, Round};
use crate::problems::{HiddenLaw, Objective1D, Side};
use crate::sampling::{RadialDensity, SideDensity};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plain,
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradSample1D<T> {
    pub value: T,
    pub branch: Branch,
    pub z: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradSampleQP<T> {
    pub value: Vec<T>,
    pub magnitude: T,
    pub direction: Vec<T>,
}

/// Shared core: `base` on the plain branch, `base ∓ h''(x,z)/f(z)` otherwise.
fn one_sided<T: Real, D: SideDensity<T> + ?Sized>(
    x: T,
    side: Side,
    base: T,
    z: T,
    second: BinaryOutcome,
    obj: &Objective1D<T>,
    band: &D,
) -> Result<GradSample1D<T>> {
    if band.side() != side {
        return Err(Error::SideMismatch);
    }
    let p = band.pdf(z);
    if !(p > T::zero()) {
        return Err(Error::DensityInconsistency { z: z.as_f64() });
    }
    // `SampleBelow` on the second query means ξ ≤ z.
    let corrected = match side {
        Side::Below => second == BinaryOutcome::SampleBelow,
        Side::Above => second == BinaryOutcome::SampleAbove,
    };
    if !corrected {
        return Ok(GradSample1D { value: base, branch: Branch::Plain, z });
    }
    let w = obj.cross_side(x, z, side) / p;
    let value = match side {
        Side::Below => base - w,
        Side::Above => base + w,
    };
    Ok(GradSample1D { value, branch: Branch::Corrected, z })
}

/// Binary-comparison estimator.
pub fn grad_cba<T: Real, D: SideDensity<T> + ?Sized>(
    x: T,
    first: BinaryOutcome,
    z: T,
    second: BinaryOutcome,
    obj: &Objective1D<T>,
    band: &D,
) -> Result<GradSample1D<T>> {
    let side = first.side();
    let base = match side {
        Side::Below => obj.dleft(x),
        Side::Above => obj.dright(x),
    };
    one_sided(x, side, base, z, second, obj, band)
}

/// Categorical estimator: the plain value is the derivative limit at the
/// band's inner edge.
pub fn grad_cba_categorical<T: Real>(
    x: T,
    out: CategoricalOutcome,
    z: T,
    second: BinaryOutcome,
    obj: &Objective1D<T>,
    scheme: &CategoricalScheme<T>,
) -> Result<GradSample1D<T>> {
    let band = scheme.density(x, out)?;
    let base = obj.edge_derivative(x, scheme.lower_edge(out.band), out.side);
    one_sided(x, out.side, base, z, second, obj, &band)
}

/// One full round at `x`: hidden draw, first comparison, second point from
/// the band `make_band` returns for the reported side, second comparison.
pub fn sample_cba_gradient<T, L, D, R1, R2>(
    x: T,
    law: &L,
    obj: &Objective1D<T>,
    mut make_band: impl FnMut(Side) -> Result<D>,
    oracle_rng: &mut R1,
    aux_rng: &mut R2,
) -> Result<GradSample1D<T>>
where
    T: Real,
    L: HiddenLaw<T> + ?Sized,
    D: SideDensity<T>,
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
{
    let mut round = Round::begin(law, x, 2, Access::ComparisonOnly, oracle_rng)?;
    let first = round.compare(x)?;
    let band = make_band(first.side())?;
    let z = band.draw(aux_rng);
    let second = round.compare(z)?;
    grad_cba(x, first, z, second, obj, &band)
}

/// Mean of `S` single-point estimates sharing one hidden sample.
pub fn minibatch_grad<T: Real, D: SideDensity<T> + ?Sized>(
    x: T,
    first: BinaryOutcome,
    probes: &[(T, BinaryOutcome)],
    obj: &Objective1D<T>,
    band: &D,
) -> Result<T> {
    if probes.is_empty() {
        return Err(Error::InvalidParameter("mini-batch size must be at least 1".into()));
    }
    let mut acc = T::zero();
    for &(z, second) in probes {
        acc += grad_cba(x, first, z, second, obj, band)?.value;
    }
    Ok(acc / T::from_usize_lossy(probes.len()))
}

/// Quadratic-problem estimator from the two value comparisons.
pub fn grad_qp<T: Real>(
    u: &[T],
    z: T,
    pair: PairOutcome,
    winner_le_center: bool,
    q: &SymMatrix<T>,
    radial: &RadialDensity<T>,
) -> Result<GradSampleQP<T>> {
    let p = radial.pdf(z);
    if !(p > T::zero()) {
        return Err(Error::DensityInconsistency { z: z.as_f64() });
    }
    let magnitude = if !winner_le_center {
        T::zero()
    } else {
        let m = T::c(0.5) * q.quad_form(u) / p;
        match pair {
            PairOutcome::PlusSmaller => -m,
            PairOutcome::MinusSmallerOrEqual => m,
        }
    };
    Ok(GradSampleQP { value: u.iter().map(|a| *a * magnitude).collect(), magnitude, direction: u.to_vec() })
}
