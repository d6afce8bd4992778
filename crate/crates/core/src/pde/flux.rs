//! Point-wise physical and numerical fluxes.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Primitive Euler state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitive<T> {
    pub rho: T,
    pub u: T,
    pub p: T,
}

impl<T: Real> Primitive<T> {
    pub fn new(rho: T, u: T, p: T) -> Self {
        Self { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: T) -> T {
        (gamma * self.p / self.rho).sqrt()
    }

    pub fn to_conserved(&self, gamma: T) -> [T; 3] {
        let e = self.p / (gamma - T::one()) + T::half() * self.rho * self.u * self.u;
        [self.rho, self.rho * self.u, e]
    }
}

/// Conserved `(ρ, ρu, E)` → primitive `(ρ, u, p)`.
///
/// `element` is only used to label a positivity failure.
pub fn euler_primitive<T: Real>(q: &[T], gamma: T, element: usize) -> Result<Primitive<T>> {
    let rho = q[0];
    let fail = |p: T| Error::Positivity {
        element,
        time: f64::NAN,
        density: rho.to_f64_lossy(),
        pressure: p.to_f64_lossy(),
    };
    if !(rho > T::zero()) {
        return Err(fail(T::nan()));
    }
    let u = q[1] / rho;
    let p = (gamma - T::one()) * (q[2] - T::half() * rho * u * u);
    if !(p > T::zero()) {
        return Err(fail(p));
    }
    Ok(Primitive { rho, u, p })
}

/// Euler flux without admissibility checks beyond `ρ ≠ 0`.
#[inline]
pub fn euler_flux<T: Real>(q: &[T], gamma: T) -> [T; 3] {
    let u = q[1] / q[0];
    let p = (gamma - T::one()) * (q[2] - T::half() * q[1] * u);
    [q[1], q[1] * u + p, (q[2] + p) * u]
}

/// Upwind advective flux in the direction of `normal`.
pub fn upwind_flux_advection<T: Real>(u_left: T, u_right: T, v: T, normal: T) -> T {
    let vn = v * normal;
    if vn >= T::zero() {
        vn * u_left
    } else {
        vn * u_right
    }
}

/// Exact upwind flux of `u_t + c v_x = 0, v_t + c u_x = 0` across a face
/// with `left` on the −x side, as the +x-directed flux `(c v*, c u*)`.
pub fn wave_upwind_flux<T: Real>(left: [T; 2], right: [T; 2], c: T) -> [T; 2] {
    let w_plus = left[0] + left[1];
    let w_minus = right[0] - right[1];
    let u_star = T::half() * (w_plus + w_minus);
    let v_star = T::half() * (w_plus - w_minus);
    [c * v_star, c * u_star]
}

/// Local Lax–Friedrichs flux `(F(uL)+F(uR))/2 − λ/2 (uR − uL)`, +x-directed.
pub fn llf_flux<T: Real, const M: usize>(
    left: &[T; M],
    right: &[T; M],
    flux: impl Fn(&[T; M]) -> [T; M],
    lambda: T,
) -> [T; M] {
    let fl = flux(left);
    let fr = flux(right);
    let mut out = [T::zero(); M];
    for i in 0..M {
        out[i] = T::half() * (fl[i] + fr[i]) - T::half() * lambda * (right[i] - left[i]);
    }
    out
}

/// LLF flux for Euler with `λ = max(|u|+a)` over both states.
pub fn euler_llf<T: Real>(left: &[T; 3], right: &[T; 3], gamma: T, element: usize) -> Result<[T; 3]> {
    let pl = euler_primitive(left, gamma, element)?;
    let pr = euler_primitive(right, gamma, element)?;
    let lambda = (pl.u.abs() + pl.sound_speed(gamma)).max(pr.u.abs() + pr.sound_speed(gamma));
    Ok(llf_flux(left, right, |q| euler_flux(q, gamma), lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_examples() {
        let p = euler_primitive(&[1.0f64, 0.0, 2.5], 1.4, 0).unwrap();
        assert_eq!((p.rho, p.u), (1.0, 0.0));
        assert!((p.p - 1.0).abs() < 1e-15);
        let p = euler_primitive(&[0.125f64, 0.0, 0.25], 1.4, 0).unwrap();
        assert!((p.p - 0.1).abs() < 1e-15);
    }

    #[test]
    fn positivity_failures_carry_element() {
        match euler_primitive(&[-1.0, 0.0, 1.0], 1.4, 7) {
            Err(Error::Positivity { element, .. }) => assert_eq!(element, 7),
            other => panic!("{other:?}"),
        }
        assert!(euler_primitive(&[1.0, 2.0, 1.0], 1.4, 0).is_err());
    }

    #[test]
    fn upwind_examples() {
        assert_eq!(upwind_flux_advection(2.0, 5.0, 1.0, 1.0), 2.0);
        assert_eq!(upwind_flux_advection(2.0, 5.0, -1.0, 1.0), -5.0);
        assert_eq!(upwind_flux_advection(2.0, 5.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn wave_flux_consistency() {
        let s = [0.7f64, -0.3];
        let f = wave_upwind_flux(s, s, 2.0);
        assert!((f[0] - 2.0 * s[1]).abs() < 1e-15 && (f[1] - 2.0 * s[0]).abs() < 1e-15);
    }

    #[test]
    fn llf_consistency_and_sod_interface() {
        let g = 1.4;
        let q = Primitive::new(0.8f64, 0.3, 0.9).to_conserved(g);
        let f = euler_llf(&q, &q, g, 0).unwrap();
        let exact = euler_flux(&q, g);
        for i in 0..3 {
            assert!((f[i] - exact[i]).abs() < 1e-14);
        }
        let l = [1.0, 0.0, 2.5];
        let r = [0.125, 0.0, 0.25];
        let f = euler_llf(&l, &r, g, 0).unwrap();
        let lam = (1.4f64).sqrt();
        assert!((f[0] - (-0.5 * lam * (0.125 - 1.0))).abs() < 1e-14);
        assert!((f[1] - 0.55).abs() < 1e-14);
        assert!((f[2] - (-0.5 * lam * (0.25 - 2.5))).abs() < 1e-14);
    }
}
