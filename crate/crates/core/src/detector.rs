//! Element-local smoothness estimation from modal decay.
//!
//! The nodal data on an element is expanded in the orthonormal Legendre
//! basis, the magnitudes |q̂_n| (n ≥ 1) are optionally raised by a
//! norm-scaled "perfect decay" baseline and then by the skyline envelope,
//! and a power law |q̂_n| ≈ c·n^{-s} is fitted in log-log space. The
//! exponent `s` reads as: ≈1 discontinuous, ≈2 kink, ≈3 C¹, larger is smoother.

use serde::Serialize;

use crate::dg::element::ReferenceElement;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exponent assigned to an element carrying an identically zero field.
pub const DEFAULT_S_MAX: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorOptions<T> {
    /// Add the norm-scaled baseline decay before the skyline.
    pub baseline: bool,
    /// Normalize the baseline weights to unit ℓ² length.
    pub normalize_baseline: bool,
    pub skyline: bool,
    pub s_max: T,
}

impl<T: Real> Default for DetectorOptions<T> {
    fn default() -> Self {
        Self { baseline: true, normalize_baseline: true, skyline: true, s_max: T::of(DEFAULT_S_MAX) }
    }
}

impl<T: Real> DetectorOptions<T> {
    /// Plain least-squares fit of the raw spectrum.
    pub fn raw() -> Self {
        Self { baseline: false, skyline: false, ..Self::default() }
    }

    /// Skyline envelope without baseline decay.
    pub fn skyline_only() -> Self {
        Self { baseline: false, skyline: true, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport<T> {
    /// |q̂_n| for n = 0..Np-1.
    pub raw: Vec<T>,
    /// |q̃_n| for n = 0..Np-1; entry 0 is the untouched constant mode.
    pub baselined: Vec<T>,
    /// q̄_n for n = 1..Np-1.
    pub skylined: Vec<T>,
    pub s: T,
    pub log10_c: T,
    pub norm: T,
}

/// Fraction of the element's L² mass held by the highest mode.
pub fn pp_indicator<T: Real>(modal: &[T]) -> Result<T> {
    if modal.len() < 2 {
        return Err(Error::InvalidArgument("need at least two modes".into()));
    }
    let total: T = modal.iter().map(|q| *q * *q).sum();
    if total == T::zero() {
        return Err(Error::DegenerateElement);
    }
    let top = *modal.last().unwrap();
    Ok(top * top / total)
}

/// Perfect-decay weights |b̂_n| ∝ n^{-N}, n = 1..=N, unit ℓ² norm.
pub fn baseline_weights<T: Real>(degree: usize) -> Vec<T> {
    baseline_weights_with(degree, true)
}

pub fn baseline_weights_with<T: Real>(degree: usize, normalize: bool) -> Vec<T> {
    assert!(degree >= 1, "baseline weights need N >= 1");
    let raw: Vec<T> = (1..=degree).map(|n| T::of_usize(n).powi(-(degree as i32))).collect();
    if !normalize {
        return raw;
    }
    let scale = raw.iter().map(|b| *b * *b).sum::<T>().sqrt();
    raw.into_iter().map(|b| b / scale).collect()
}

/// |q̃_n| = sqrt(q̂_n² + norm²·b̂_n²) for n = 1..Np-1.
pub fn apply_baseline<T: Real>(modal: &[T], norm: T, degree: usize) -> Vec<T> {
    apply_baseline_with(modal, norm, &baseline_weights(degree))
}

fn apply_baseline_with<T: Real>(modal: &[T], norm: T, weights: &[T]) -> Vec<T> {
    assert_eq!(modal.len(), weights.len() + 1, "modal length must be N+1");
    modal[1..]
        .iter()
        .zip(weights)
        .map(|(q, b)| (*q * *q + norm * norm * *b * *b).sqrt())
        .collect()
}

/// Skyline envelope of magnitudes indexed n = 1..Np-1.
///
/// Entry `n` becomes the maximum over modes `min(n, Np-2)..=Np-1`, so the
/// last mode is also raised to at least the second-to-last one.
pub fn skyline<T: Real>(mags: &[T]) -> Vec<T> {
    let len = mags.len();
    if len == 0 {
        return Vec::new();
    }
    let mut out = vec![T::zero(); len];
    let mut running = T::neg_infinity();
    for i in (0..len).rev() {
        running = running.max(mags[i]);
        out[i] = running;
    }
    if len >= 2 {
        out[len - 1] = out[len - 2];
    }
    out
}

/// Least-squares fit of log10 mags_n ≈ log10 c − s·log10 n over n = 1..len.
///
/// Returns `(s, log10_c)`.
pub fn fit_decay<T: Real>(mags: &[T]) -> Result<(T, T)> {
    if mags.len() < 2 {
        return Err(Error::UnderdeterminedFit);
    }
    if mags.iter().any(|m| !(*m > T::zero()) || !m.is_finite()) {
        return Err(Error::InvalidArgument("decay fit needs positive finite magnitudes".into()));
    }
    let count = T::of_usize(mags.len());
    let xs: Vec<T> = (1..=mags.len()).map(|n| T::of_usize(n).log10()).collect();
    let ys: Vec<T> = mags.iter().map(|m| m.log10()).collect();
    let x_mean = xs.iter().copied().sum::<T>() / count;
    let y_mean = ys.iter().copied().sum::<T>() / count;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (*x - x_mean) * (*x - x_mean);
        sxy += (*x - x_mean) * (*y - y_mean);
    }
    if sxx <= T::zero() {
        return Err(Error::UnderdeterminedFit);
    }
    let slope = sxy / sxx;
    let s = -slope;
    Ok((s, y_mean - slope * x_mean))
}

/// Full smoothness pipeline with the default options (baseline + skyline).
pub fn estimate_smoothness<T: Real>(elem: &ReferenceElement<T>, nodal: &[T], h: T) -> SmoothnessReport<T> {
    estimate_smoothness_with(elem, nodal, h, &DetectorOptions::default())
}

pub fn estimate_smoothness_with<T: Real>(
    elem: &ReferenceElement<T>,
    nodal: &[T],
    h: T,
    opts: &DetectorOptions<T>,
) -> SmoothnessReport<T> {
    let np = elem.np();
    assert!(np >= 3, "smoothness estimation needs N >= 2");
    let modal = elem.nodal_to_modal(nodal);
    let norm = elem.element_l2_norm(nodal, h);
    let raw: Vec<T> = modal.iter().map(|q| q.abs()).collect();

    if norm == T::zero() {
        return SmoothnessReport {
            raw,
            baselined: vec![T::zero(); np],
            skylined: vec![T::zero(); np - 1],
            s: opts.s_max,
            log10_c: T::zero(),
            norm,
        };
    }

    let tail = if opts.baseline {
        let w = baseline_weights_with(elem.degree(), opts.normalize_baseline);
        apply_baseline_with(&modal, norm, &w)
    } else {
        raw[1..].to_vec()
    };
    let mut baselined = Vec::with_capacity(np);
    baselined.push(raw[0]);
    baselined.extend_from_slice(&tail);

    let envelope = if opts.skyline { skyline(&tail) } else { tail };
    // exact zeros only survive without baseline; keep the logarithm finite
    let floored: Vec<T> = envelope.iter().map(|m| m.max(T::min_positive_value())).collect();
    let (s, log10_c) = fit_decay(&floored).expect("at least two modes with positive magnitudes");

    SmoothnessReport { raw, baselined, skylined: envelope, s, log10_c, norm }
}
