//! Error integrals and empirical orders of convergence.

use crate::dg::basis::gauss_legendre;
use crate::dg::{FieldState, Mesh1D, ReferenceElement};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(Σ_k ∫_{D_k} |u_N − u_exact|^p dx)^{1/p}` with a `2N+2`-point Gauss rule
/// per element and the exact solution sampled pointwise.
pub fn error_norm<T: Real>(
    state: &FieldState<T>,
    eq: usize,
    mesh: &Mesh1D<T>,
    elem: &ReferenceElement<T>,
    exact: impl Fn(T) -> T,
    p: u32,
) -> T {
    assert!(p >= 1, "norm exponent must be positive");
    let (pts, wts) = gauss_legendre::<T>(2 * elem.degree() + 2);
    let interp: Vec<Vec<T>> = pts
        .iter()
        .map(|&r| {
            (0..elem.np())
                .map(|j| {
                    let mut unit = vec![T::zero(); elem.np()];
                    unit[j] = T::one();
                    elem.evaluate(&unit, r)
                })
                .collect()
        })
        .collect();
    let mut total = T::zero();
    for k in 0..mesh.num_elements() {
        let u = state.element(eq, k);
        let half_h = mesh.h(k) * T::half();
        for (q, &r) in pts.iter().enumerate() {
            let uh: T = interp[q].iter().zip(u).map(|(l, v)| *l * *v).sum();
            let e = (uh - exact(mesh.map_to_physical(k, r))).abs();
            total += wts[q] * half_h * e.powi(p as i32);
        }
    }
    total.powf(T::one() / T::of(p as f64))
}

/// Least-squares slope of `log e` against `log h`.
pub fn eoc_fit<T: Real>(points: &[(T, T)]) -> Result<T> {
    if points.iter().any(|(h, e)| !(*h > T::zero()) || !(*e > T::zero())) {
        return Err(Error::InvalidArgument("convergence data must be positive".into()));
    }
    let n = T::of_usize(points.len());
    if points.len() < 2 {
        return Err(Error::UnderdeterminedFit);
    }
    let xs: Vec<T> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<T> = points.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().copied().sum::<T>() / n;
    let ym = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|x| (*x - xm) * (*x - xm)).sum();
    if sxx <= T::zero() {
        return Err(Error::UnderdeterminedFit);
    }
    let sxy: T = xs.iter().zip(&ys).map(|(x, y)| (*x - xm) * (*y - ym)).sum();
    Ok(sxy / sxx)
}

/// Pointwise EOC at every sample of a common grid.
///
/// `errors[l][j]` is the error of refinement level `l` (mesh size `hs[l]`) at
/// sample `j`. A sample with zero error at any level is saturated (`None`).
pub fn pointwise_eoc_map<T: Real>(hs: &[T], errors: &[Vec<T>]) -> Result<Vec<Option<T>>> {
    if hs.len() < 3 || errors.len() != hs.len() {
        return Err(Error::InvalidArgument("need at least three refinement levels with matching data".into()));
    }
    let width = errors[0].len();
    if errors.iter().any(|e| e.len() != width) {
        return Err(Error::InvalidArgument("all levels must share the sample grid".into()));
    }
    (0..width)
        .map(|j| {
            if errors.iter().any(|e| !(e[j].abs() > T::zero())) {
                return Ok(None);
            }
            let pts: Vec<(T, T)> = hs.iter().zip(errors).map(|(h, e)| (*h, e[j].abs())).collect();
            eoc_fit(&pts).map(Some)
        })
        .collect()
}
