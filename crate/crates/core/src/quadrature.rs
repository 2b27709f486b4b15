//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;
const MAX_EVALS: usize = 2_000_000;

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::c(0.5);
    let centre = (a + b) * T::c(0.5);
    let fc = f(centre);
    let mut kronrod = fc * T::c(WGK[7]);
    let mut gauss = fc * T::c(WG[3]);
    for (j, (&xk, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * T::c(xk);
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * T::c(wk);
        if j % 2 == 1 {
            gauss += pair * T::c(WG[j / 2]);
        }
    }
    let integral = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (integral, err)
}

/// Integrates `f` over the finite interval `[a, b]` to absolute tolerance `tol`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let mut evals = 0usize;
    let mut stack = vec![(a, b, tol, 0u32)];
    let mut total = T::zero();
    while let Some((lo, hi, local_tol, depth)) = stack.pop() {
        let (val, err) = gk15(&mut f, lo, hi);
        evals += 15;
        if err <= local_tol || depth >= MAX_DEPTH || (hi - lo) <= T::epsilon() * hi.abs().max(T::one()) {
            if err > local_tol && err > T::c(1e3) * local_tol {
                return Err(Error::QuadratureFailed { lo: lo.as_f64(), hi: hi.as_f64(), tol: tol.as_f64() });
            }
            total += val;
            continue;
        }
        if evals > MAX_EVALS {
            return Err(Error::QuadratureFailed { lo: a.as_f64(), hi: b.as_f64(), tol: tol.as_f64() });
        }
        let mid = (lo + hi) * T::c(0.5);
        let half_tol = local_tol * T::c(0.5);
        stack.push((mid, hi, half_tol, depth + 1));
        stack.push((lo, mid, half_tol, depth + 1));
    }
    Ok(total)
}

/// Integrates over `[a, b]` split at the interior `breaks`.
pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, breaks: &[T], tol: T) -> Result<T> {
    let mut pts: Vec<T> = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    pts.extend(breaks.iter().copied().filter(|p| *p > a && *p < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).expect("NaN breakpoint"));
    let pieces = T::from_usize_lossy(pts.len() - 1);
    let mut sum = T::zero();
    for w in pts.windows(2) {
        sum += integrate(&mut f, w[0], w[1], tol / pieces)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let v = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_mass() {
        let v = integrate(
            |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            -10.0,
            10.0,
            1e-12,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn kink_with_breaks() {
        let v = integrate_pieces(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds() {
        let v = integrate(|x: f64| x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 0.5).abs() < 1e-12);
    }
}
