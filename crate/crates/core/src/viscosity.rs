//! Smoothness exponent → continuous piecewise-linear artificial viscosity.

use rayon::prelude::*;

use crate::detector::{estimate_smoothness_with, DetectorOptions};
use crate::dg::{FieldState, Mesh1D, ReferenceElement};
use crate::error::Result;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViscosityConfig<T> {
    pub enable: bool,
    pub c_nu: T,
    /// Elements whose L² norm is below this fraction of the largest element
    /// norm in the domain are treated as smooth.
    pub noise_floor: T,
    pub detector: DetectorOptions<T>,
}

impl<T: Real> Default for ViscosityConfig<T> {
    fn default() -> Self {
        Self { enable: true, c_nu: T::one(), noise_floor: T::zero(), detector: DetectorOptions::default() }
    }
}

impl<T: Real> ViscosityConfig<T> {
    pub fn disabled() -> Self {
        Self { enable: false, ..Self::default() }
    }
}

/// Continuous P1 viscosity: one value per mesh vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ViscosityField<T> {
    vertex: Vec<T>,
    raw: Vec<T>,
    /// Fitted exponent per element (empty when the detector did not run).
    pub smoothness: Vec<T>,
    /// Element L² norms of the detector variable.
    pub norms: Vec<T>,
}

impl<T: Real> ViscosityField<T> {
    pub fn zeros(k: usize) -> Self {
        Self { vertex: vec![T::zero(); k + 1], raw: vec![T::zero(); k], smoothness: Vec::new(), norms: Vec::new() }
    }

    pub fn num_elements(&self) -> usize {
        self.raw.len()
    }

    /// Per-element values before smoothing.
    pub fn raw(&self) -> &[T] {
        &self.raw
    }

    pub fn vertex_values(&self) -> &[T] {
        &self.vertex
    }

    #[inline]
    pub fn left(&self, k: usize) -> T {
        self.vertex[k]
    }

    #[inline]
    pub fn right(&self, k: usize) -> T {
        self.vertex[k + 1]
    }

    pub fn max(&self) -> T {
        self.vertex.iter().copied().fold(T::zero(), T::max)
    }

    pub fn is_zero(&self) -> bool {
        self.vertex.iter().all(|v| *v == T::zero())
    }

    /// Value at reference coordinate `r` of element `k`.
    #[inline]
    pub fn eval(&self, k: usize, r: T) -> T {
        let t = (T::one() + r) * T::half();
        self.left(k) * (T::one() - t) + self.right(k) * t
    }

    /// Number of elements whose raw viscosity is nonzero.
    pub fn active_elements(&self) -> usize {
        self.raw.iter().filter(|v| **v > T::zero()).count()
    }
}

/// ν₀·ramp(s): full below s = 1, half at s = 2, zero above s = 3.
pub fn activation<T: Real>(s: T, nu0: T) -> T {
    let one = T::one();
    let three = T::of(3.0);
    if s < one {
        nu0
    } else if s > three {
        T::zero()
    } else if s == one {
        nu0
    } else if s == T::two() {
        nu0 * T::half()
    } else if s == three {
        T::zero()
    } else {
        let arg = T::PI() * (s - T::two()) * T::half();
        nu0 * (one - T::half() * (one + arg.sin()))
    }
}

pub fn nu0_scale<T: Real>(lambda_max: T, h: T, degree: usize, c_nu: T) -> T {
    c_nu * lambda_max * h / T::of_usize(degree)
}

/// Vertex-max smoothing of per-element values into a continuous P1 field.
pub fn smooth_p1<T: Real>(raw: &[T], mesh: &Mesh1D<T>) -> ViscosityField<T> {
    let k = raw.len();
    assert_eq!(k, mesh.num_elements(), "one raw value per element");
    let mut vertex = vec![T::zero(); k + 1];
    for i in 1..k {
        vertex[i] = raw[i - 1].max(raw[i]);
    }
    if mesh.is_periodic() {
        let wrap = raw[0].max(raw[k - 1]);
        vertex[0] = wrap;
        vertex[k] = wrap;
    } else {
        vertex[0] = raw[0];
        vertex[k] = raw[k - 1];
    }
    ViscosityField { vertex, raw: raw.to_vec(), smoothness: Vec::new(), norms: Vec::new() }
}

/// Detector on component `eq`, activation scaled by the global `lambda_max`,
/// then vertex-max smoothing.
pub fn compute_viscosity<T: Real>(
    state: &FieldState<T>,
    mesh: &Mesh1D<T>,
    elem: &ReferenceElement<T>,
    eq: usize,
    lambda_max: T,
    cfg: &ViscosityConfig<T>,
) -> Result<ViscosityField<T>> {
    let k = mesh.num_elements();
    if !cfg.enable {
        return Ok(ViscosityField::zeros(k));
    }
    state.ensure_finite()?;
    let n = elem.degree();
    let reports: Vec<(T, T)> = (0..k)
        .into_par_iter()
        .map(|e| {
            let r = estimate_smoothness_with(elem, state.element(eq, e), mesh.h(e), &cfg.detector);
            (r.s, r.norm)
        })
        .collect();
    let floor = cfg.noise_floor * reports.iter().fold(T::zero(), |m, r| m.max(r.1));
    let norms: Vec<T> = reports.iter().map(|r| r.1).collect();
    let results: Vec<(T, T)> = reports
        .into_iter()
        .enumerate()
        .map(|(e, (s, norm))| {
            let s = if norm < floor { cfg.detector.s_max } else { s };
            (s, activation(s, nu0_scale(lambda_max, mesh.h(e), n, cfg.c_nu)))
        })
        .collect();
    let raw: Vec<T> = results.iter().map(|r| r.1).collect();
    let mut field = smooth_p1(&raw, mesh);
    field.smoothness = results.into_iter().map(|r| r.0).collect();
    field.norms = norms;
    Ok(field)
}
